import numpy as np
import pytest

from qcorr.errors import CommutationError
from qcorr.hardy import TAU, hardy_state
from qcorr.randomized import random_density
from qcorr.sampling import (
    ShotPlan,
    empirical_correlations,
    joint_distribution,
    reconstruct_empirical,
    sample_outcomes,
)
from qcorr.states import SIGMA_X, SIGMA_Z, UP_Z, singlet_projector
from qcorr.tomography import Partition, correlations, project_physical, reconstruct

W0 = singlet_projector()
P22 = Partition((2, 2))


def test_singlet_zz_only_anticorrelated():
    oc = sample_outcomes(W0, [((0,), SIGMA_Z), ((1,), SIGMA_Z)], (2, 2), ShotPlan(5000, seed=1))
    assert oc.counts.sum() == 5000
    assert oc.counts[0, 0] == 0 and oc.counts[1, 1] == 0
    assert np.all(oc.values() * (oc.counts > 0) <= 0)


def test_maximally_mixed_uniform():
    plan = ShotPlan(40_000, seed=2)
    oc = sample_outcomes(np.eye(4) / 4, [((0,), SIGMA_X), ((1,), SIGMA_Z)], (2, 2), plan)
    assert np.allclose(oc.probabilities, 0.25)
    sigma = np.sqrt(plan.shots * 0.25 * 0.75)
    assert np.all(np.abs(oc.counts - plan.shots / 4) < 5 * sigma)


def test_hardy_setting_22_frequency():
    ctx = hardy_state(1 / TAU)
    plan = ShotPlan(10**6, seed=3)
    obs = [((0,), ctx.observables["2A"]), ((1,), ctx.observables["2B"])]
    oc = sample_outcomes(ctx.state, obs, (2, 2), plan)
    # eigenvector order is (R, G) for both parties
    p = TAU**-5
    sigma = np.sqrt(p * (1 - p) / plan.shots)
    assert abs(oc.counts[1, 1] / plan.shots - p) < 5 * sigma


def test_overlapping_factors_rejected():
    with pytest.raises(CommutationError):
        joint_distribution(W0, [((0,), SIGMA_Z), ((0,), SIGMA_X)], (2, 2))


def test_observable_spanning_two_factors(rng):
    w = random_density(8, seed=rng).matrix
    op = np.kron(SIGMA_Z, SIGMA_X)
    vals, probs = joint_distribution(w, [((2,), SIGMA_Z), ((0, 1), op)], (2, 2, 2))
    # expectation of the product observable from the distribution vs trace
    expect = np.einsum("i,j,ij->", vals[0], vals[1], probs)
    full = np.kron(op, SIGMA_Z)
    assert abs(expect - np.trace(w @ full).real) < 1e-12


def test_single_factor_marginal(rng):
    w = random_density(4, seed=rng).matrix
    vals, probs = joint_distribution(w, [((1,), SIGMA_Z)], (2, 2))
    assert abs(vals[0] @ probs - np.trace(w @ np.kron(np.eye(2), SIGMA_Z)).real) < 1e-12


def test_deterministic_observable_zero_variance():
    w = np.kron(np.outer(UP_Z, UP_Z), np.outer(UP_Z, UP_Z))
    er = empirical_correlations(w, P22, plan=ShotPlan(100, seed=4))
    exact = correlations(w, P22).tensor()
    for r in er.records:
        # eigenstate input: every record that is deterministic comes out exact
        if r.standard_error == 0:
            assert r.estimate == exact[r.indices]
    assert er.records[0].estimate == 1.0 and er.records[0].standard_error == 0


def test_seed_reproducibility(rng):
    w = random_density(4, seed=rng)
    a = empirical_correlations(w, P22, plan=ShotPlan(1000, seed=9))
    b = empirical_correlations(w, P22, plan=ShotPlan(1000, seed=9))
    c = empirical_correlations(w, P22, plan=ShotPlan(1000, seed=10))
    assert a.records == b.records
    assert a.records != c.records


def test_record_streams_independent_of_subset(rng):
    w = random_density(4, seed=rng)
    full = empirical_correlations(w, P22, plan=ShotPlan(500, seed=1))
    sub = empirical_correlations(w, P22, plan=ShotPlan(500, seed=1, targets=((2, 3), (0, 1))))
    by_idx = {r.indices: r for r in full.records}
    for r in sub.records:
        assert r == by_idx[r.indices]


def test_single_shot_records():
    er = empirical_correlations(W0, P22, plan=ShotPlan(1, seed=0))
    assert all(r.shots == 1 and np.isinf(r.standard_error) for r in er.records)
    rec = reconstruct_empirical(er, W0)
    assert np.isfinite(rec.raw_error)


def test_standard_error_formula(rng):
    w = random_density(4, seed=rng)
    plan = ShotPlan(2000, seed=5)
    er = empirical_correlations(w, P22, plan=plan)
    b = er.bases
    for k, r in enumerate(er.records):
        obs = [((0,), b[0][r.indices[0]]), ((1,), b[1][r.indices[1]])]
        oc = sample_outcomes(w, obs, (2, 2), plan, stream=k)
        samples = np.repeat(oc.values().reshape(-1), oc.counts.reshape(-1))
        assert abs(r.estimate - samples.mean()) < 1e-12
        assert abs(r.standard_error - samples.std(ddof=1) / np.sqrt(plan.shots)) < 1e-12


def test_estimates_within_five_standard_errors(rng):
    w = random_density(4, seed=rng)
    er = empirical_correlations(w, P22, plan=ShotPlan(10**6, seed=6))
    exact = correlations(w, P22).tensor()
    inside = [abs(r.estimate - exact[r.indices]) <= 5 * r.standard_error or r.standard_error == 0 for r in er.records]
    assert np.mean(inside) >= 0.99


def test_unbiased_over_seeds(rng):
    w = random_density(4, seed=rng)
    exact = correlations(w, P22).tensor()
    runs = [empirical_correlations(w, P22, plan=ShotPlan(10**4, seed=s)) for s in range(200)]
    for k, idx in enumerate(np.ndindex(*exact.shape)):
        est = np.array([run.records[k].estimate for run in runs])
        se = np.array([run.records[k].standard_error for run in runs])
        pooled = np.sqrt(np.mean(se**2) / len(runs))
        if pooled == 0:
            assert np.all(est == exact[idx])
        else:
            assert abs(est.mean() - exact[idx]) < 4 * pooled


def test_exact_records_pass_through(rng):
    w = random_density(4, seed=rng)
    rs = correlations(w, P22)
    rec = reconstruct_empirical(rs, w)
    assert np.max(np.abs(rec.raw - reconstruct(rs).matrix)) == 0
    assert rec.raw_error < 1e-9


def test_physical_projection_trace_and_idempotence(rng):
    er = empirical_correlations(W0, P22, plan=ShotPlan(50, seed=7))
    rec = reconstruct_empirical(er)
    assert abs(np.trace(rec.physical) - 1) < 1e-12
    assert np.linalg.eigvalsh(rec.physical)[0] >= -1e-12
    assert np.max(np.abs(project_physical(rec.physical) - rec.physical)) < 1e-12


def test_invalid_plan():
    with pytest.raises(ValueError):
        ShotPlan(0)
    with pytest.raises(ValueError):
        ShotPlan(10, seed=-1)
