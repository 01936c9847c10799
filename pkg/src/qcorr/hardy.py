"""Probabilities for the symmetric two-qubit Hardy state.

Each qubit carries two observables, ``1`` and ``2``, with eigenstates
labelled R (red) and G (green).  Observable 2 is diagonal in the canonical
basis (``|2R> = |0>``, ``|2G> = |1>``); observable 1 is the same basis
rotated by ``theta = arccos(sqrt(x))``, so ``|<1R|2R>|^2 = x``.  The
construction is identical on A and B.  Settings are written ``"12"``
meaning observable 1 on A and observable 2 on B; outcomes ``"GR"`` likewise
list A's color first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .linalg import hermitian_eig, kron

TAU = (1 + math.sqrt(5)) / 2
SETTINGS = ("22", "11", "12", "21")
OUTCOMES = ("GG", "GR", "RG", "RR")
# Exponent k means tau**-k; None is an exact zero.
GOLDEN_EXPONENTS = {
    "22": {"GG": 5, "GR": 4, "RG": 4, "RR": 1},
    "11": {"GG": 3, "GR": 2, "RG": 2, "RR": None},
    "12": {"GG": None, "GR": 1, "RG": 3, "RR": 4},
    "21": {"GG": None, "GR": 3, "RG": 1, "RR": 4},
}


def golden_value(setting: str, outcome: str) -> float:
    k = GOLDEN_EXPONENTS[setting][outcome]
    return 0.0 if k is None else TAU**-k


@dataclass(frozen=True, eq=False)
class HardyContext:
    x: float
    theta: float
    observables: dict[str, np.ndarray]  # keys "1A", "2A", "1B", "2B"
    eigenstates: dict[str, dict[str, np.ndarray]] = field(repr=False)  # observable -> {"R": ket, "G": ket}
    state: np.ndarray = field(repr=False)

    def ket(self, observable: int | str, color: str) -> np.ndarray:
        return self.eigenstates[str(observable)][color]

    @property
    def density(self) -> np.ndarray:
        return np.outer(self.state, self.state.conj())


def _local_eigenstates(theta: float) -> dict[str, dict[str, np.ndarray]]:
    c, s = math.cos(theta), math.sin(theta)
    return {
        "2": {"R": np.array([1, 0], dtype=complex), "G": np.array([0, 1], dtype=complex)},
        "1": {"R": np.array([c, s], dtype=complex), "G": np.array([s, -c], dtype=complex)},
    }


def hardy_state(x: float) -> HardyContext:
    """Context for overlap ``x = |<1R|2R>|^2`` in the open interval (0, 1).

    The state is ``(|2R,2R> - |1R,1R><1R,1R|2R,2R>) / sqrt(1 - |<1R|2R>|^4)``.
    """
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"overlap x must lie strictly between 0 and 1, got {x!r}")
    theta = math.acos(math.sqrt(x))
    eig = _local_eigenstates(theta)
    r1, r2 = eig["1"]["R"], eig["2"]["R"]
    rr1, rr2 = kron(r1, r1), kron(r2, r2)
    psi = (rr2 - rr1 * np.vdot(rr1, rr2)) / math.sqrt(1 - abs(np.vdot(r1, r2)) ** 4)
    obs = {}
    for k in ("1", "2"):
        o = np.outer(eig[k]["R"], eig[k]["R"].conj()) - np.outer(eig[k]["G"], eig[k]["G"].conj())
        obs[k + "A"] = obs[k + "B"] = o
    return HardyContext(x, theta, obs, eig, psi)


def joint_probability(ctx: HardyContext, settings: str, outcomes: str, density=None) -> float:
    """Born-rule probability of ``outcomes`` (A color, B color) for ``settings`` (A obs, B obs).

    ``density`` replaces the Hardy state by an arbitrary two-qubit density matrix.
    """
    a, b = ctx.ket(settings[0], outcomes[0]), ctx.ket(settings[1], outcomes[1])
    v = kron(a, b)
    if density is None:
        return float(abs(np.vdot(v, ctx.state)) ** 2)
    return float(np.vdot(v, np.asarray(density, dtype=complex) @ v).real)


def closed_form_p22gg(x: float) -> float:
    return x * x * (1 - x) / (1 + x)


def probability_table(ctx: HardyContext, density=None) -> dict[str, dict[str, float]]:
    return {s: {o: joint_probability(ctx, s, o, density) for o in OUTCOMES} for s in SETTINGS}


def golden_table() -> dict[str, dict[str, float]]:
    """The table at the optimal overlap ``x = 1/tau``."""
    return probability_table(hardy_state(1 / TAU))


def maximize_p22gg(tol: float = 1e-12) -> tuple[float, float]:
    """Golden-section search for the ``x`` maximizing ``p(2G,2G)``.

    Near the optimum ``p`` is flat to second order, so comparing values
    alone cannot resolve ``x`` much below 1e-8.  The search therefore ranks
    points by the sign of the analytic slope ``dp/dx``, which stays
    informative to machine precision, and returns ``(x*, p(2G,2G) at x*)``.
    """

    def slope(x: float) -> float:
        return 2 * x * (1 - x - x * x) / (1 + x) ** 2

    lo, hi = 0.0, 1.0
    inv = 1 / TAU
    while hi - lo > tol:
        m1 = hi - inv * (hi - lo)
        m2 = lo + inv * (hi - lo)
        # a unimodal maximum lies to the right of any point with positive slope
        if slope(m1) > 0 and slope(m2) > 0:
            lo = m1
        elif slope(m1) < 0 and slope(m2) < 0:
            hi = m2
        else:
            lo, hi = m1, m2
    xs = 0.5 * (lo + hi)
    return xs, joint_probability(hardy_state(xs), "22", "GG")


def sweep(n: int) -> list[tuple[float, float]]:
    """``n`` evenly spaced interior points ``x = k/(n+1)`` with ``p(2G,2G)``."""
    xs = [(k + 1) / (n + 1) for k in range(n)]
    return [(x, joint_probability(hardy_state(x), "22", "GG")) for x in xs]


def _event_setting(event: tuple[str, int, str], given: tuple[str, int, str]) -> tuple[str, str, str]:
    (pa, oa, ca), (pb, ob, cb) = event, given
    if {pa, pb} != {"A", "B"}:
        raise ValueError("conditional probabilities need one event on A and one on B")
    if pa == "A":
        return f"{oa}{ob}", ca, cb
    return f"{ob}{oa}", cb, ca


def conditional_probability(ctx: HardyContext, event, given, density=None, zero: float = 1e-14) -> float | None:
    """``p(event | given)`` from the joint distribution of the two settings involved.

    Events are ``(party, observable, color)`` tuples such as ``("A", 1, "R")``.
    Returns None when the conditioning event has probability below ``zero``.
    """
    setting, _, _ = _event_setting(event, given)
    e_color, g_color = event[2], given[2]
    g_first = given[0] == "A"
    p_given = 0.0
    p_both = 0.0
    for c in "RG":
        out = g_color + c if g_first else c + g_color
        p = joint_probability(ctx, setting, out, density)
        p_given += p
        if c == e_color:
            p_both = p
    if p_given < zero:
        return None
    return p_both / p_given


@dataclass
class ParadoxReport:
    x: float
    conditionals: dict[str, float | None]
    joint_2ag_2bg: float
    chain_conclusion: float
    actual_2ar_given_2bg: float | None
    paradox: bool
    note: str


CHAIN = (
    ("p(1_AR|2_BG)", ("A", 1, "R"), ("B", 2, "G")),
    ("p(1_BG|1_AR)", ("B", 1, "G"), ("A", 1, "R")),
    ("p(2_AR|1_BG)", ("A", 2, "R"), ("B", 1, "G")),
)

_NOTE = (
    "Each conditional above is computed from the joint distribution of a different "
    "commuting pair of settings (12, 11 and 21).  No single joint distribution over "
    "1_A, 2_A, 1_B and 2_B exists here, so chaining them has no support: only the "
    "joint distributions of A-B setting pairs are defined."
)


def paradox_report(ctx: HardyContext) -> ParadoxReport:
    conds = {name: conditional_probability(ctx, ev, gv) for name, ev, gv in CHAIN}
    actual = conditional_probability(ctx, ("A", 2, "R"), ("B", 2, "G"))
    joint = joint_probability(ctx, "22", "GG")
    chained = all(v is not None and abs(v - 1) <= 1e-12 for v in conds.values())
    paradox = chained and joint > 0 and actual is not None and actual < 1
    return ParadoxReport(ctx.x, conds, joint, 1.0, actual, paradox, _NOTE)


def observable_eigen_check(ctx: HardyContext) -> float:
    """Max deviation between each observable's eigenvectors and the R/G kets (up to phase)."""
    dev = 0.0
    for key, o in ctx.observables.items():
        _, vecs = hermitian_eig(o)
        for col, color in zip(vecs.T, "RG"):
            dev = max(dev, 1 - abs(np.vdot(col, ctx.ket(key[0], color))) ** 2)
    return dev
