"""Command-line interface: ``qcorr {steer,tomo,hardy,sample}``.

Exit status is 0 on success, 1 when a numerical check fails, 2 for usage
or input errors.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import hardy, io, reports
from .ensembles import DensityOperator
from .errors import DomainError, IncompleteDataError, QcorrError
from .sampling import ShotPlan, empirical_correlations
from .tomography import Partition, correlations, hermitian_basis, pauli_basis

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEMOS = {
    "maximally_mixed": ("maximally_mixed.json", ["z_ensemble.json", "x_ensemble.json"]),
    "tilted": ("pq_density.json", ["pq_eigen_ensemble.json", "rl_ensemble.json"]),
    "d3": ("d3_density.json", ["d3_ensemble_a.json", "d3_ensemble_b.json"]),
    "singlet": ("singlet.json", []),
    "three_qubit": ("three_qubit.json", []),
}


class UsageError(Exception):
    pass


def data_path(name: str) -> Path:
    return Path(str(resources.files("qcorr") / "data" / name))


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _emit(obj, out: str | None) -> None:
    text = io.dumps(obj) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(reader, path, label: str):
    try:
        return reader(path)
    except FileNotFoundError:
        raise UsageError(f"{label} {path}: no such file") from None
    except QcorrError as exc:
        raise UsageError(f"{label} {path}: {exc}") from None


def _cfmt(z: complex) -> str:
    return f"{_fmt(z.real)}{'+' if z.imag >= 0 else '-'}{_fmt(abs(z.imag))}j"


def _print_matrix(m) -> None:
    cells = [[_cfmt(z) for z in row] for row in np.asarray(m)]
    width = max(len(c) for row in cells for c in row)
    for row in cells:
        print("  " + "  ".join(c.rjust(width) for c in row))


def cmd_steer(args) -> int:
    if args.demo:
        dens_name, ens_names = DEMOS[args.demo]
        density_path = data_path(dens_name)
        ensemble_paths = [data_path(n) for n in ens_names]
    else:
        if not args.density or not args.ensembles:
            raise UsageError("steer needs a density file and at least one ensemble file (or --demo)")
        density_path, ensemble_paths = args.density, args.ensembles
    w = _load(io.read_density, density_path, "density")
    targets = [_load(io.read_ensemble, p, "ensemble") for p in ensemble_paths]
    names = [Path(p).name for p in ensemble_paths]
    try:
        rep = reports.steering_report(w, targets, names, args.tolerance)
    except QcorrError as exc:
        raise UsageError(f"ensemble {_offender(exc, names)}: {type(exc).__name__}: {exc}") from None
    if args.out:
        _emit(rep, args.out)
    print(f"purification: {rep['system_dim']} x {rep['ancilla_dim']} dimensions, shared by {len(targets)} target(s)")
    for t in rep["targets"]:
        print(f"target {t['name']}: min fidelity {_fmt(t['min_fidelity'])}, max probability error {_fmt(t['max_probability_error'])}, {'ok' if t['passed'] else 'FAILED'}")
        for o in t["outcomes"]:
            fid = "undefined" if o["fidelity"] is None else _fmt(o["fidelity"])
            print(f"  outcome {o['index']}: p = {_fmt(o['probability'])} (target {_fmt(o['target_weight'])}), fidelity {fid}")
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def _offender(exc: Exception, names) -> str:
    msg = str(exc)
    if msg.startswith("target "):
        try:
            return names[int(msg.split(":")[0].split()[1])]
        except (ValueError, IndexError):
            pass
    return "?"


def _default_partition(dim: int, kind: str) -> Partition:
    n = dim.bit_length() - 1
    if kind == "pauli" and n > 0 and dim == 1 << n:
        return Partition((2,) * n)
    return Partition((dim,))


def _bases_for(partition: Partition, kind: str):
    if kind == "pauli":
        if any(d != 2 for d in partition.dims):
            raise UsageError("the pauli basis needs qubit factors")
        return [pauli_basis()] * len(partition)
    return [hermitian_basis(d) for d in partition.dims]


def cmd_tomo(args) -> int:
    density_path = data_path(DEMOS[args.demo][0]) if args.demo else args.density
    if args.records:
        rs = _load(io.read_records, args.records, "records")
        ref = _load(io.read_density, args.reference, "reference") if args.reference else None
        try:
            rep = reports.reconstruction_report(rs, ref, args.tolerance)
        except IncompleteDataError as exc:
            raise UsageError(f"records {args.records}: {exc}") from None
        if args.out:
            _emit(rep, args.out)
        print(f"reconstructed density matrix ({'x'.join(map(str, rep['partition']))}):")
        _print_matrix(io.matrix_from_dict(rep["density"]))
        if ref is not None:
            print(f"max-element residual vs reference: {_fmt(rep['max_residual'])} ({'ok' if rep['passed'] else 'FAILED'})")
            return EXIT_OK if rep["passed"] else EXIT_FAIL
        return EXIT_OK
    if not density_path:
        raise UsageError("tomo needs --density, --demo or --records")
    w = _load(io.read_density, density_path, "density")
    parts = [Partition.parse(p) for p in args.partition] if args.partition else [_default_partition(w.dim, args.basis)]
    for p in parts:
        if p.total != w.dim:
            raise UsageError(f"partition {p} does not match density dimension {w.dim}")
    if len(parts) > 1:
        rep = reports.consistency_report(w, parts, args.tolerance)
        if args.out:
            _emit(rep, args.out)
        print(f"resolutions {', '.join(rep['partitions'])}: max pairwise deviation {_fmt(rep['max_pairwise_deviation'])}, "
              f"max error vs input {_fmt(rep['max_error_vs_input'])} ({'consistent' if rep['passed'] else 'INCONSISTENT'})")
        return EXIT_OK if rep["passed"] else EXIT_FAIL
    rs = correlations(w, parts[0], _bases_for(parts[0], args.basis))
    _emit(io.records_to_dict(rs), args.out)
    if args.out:
        print(f"wrote {len(rs)} records for partition {parts[0]} to {args.out}")
    return EXIT_OK


def _print_hardy_table(table, golden: bool) -> None:
    print("  p   " + "".join(f"{s:^27}" if golden else f"{s:>24}" for s in hardy.SETTINGS))
    for o in hardy.OUTCOMES:
        cells = []
        for s in hardy.SETTINGS:
            v = table[s][o]
            if golden:
                k = hardy.GOLDEN_EXPONENTS[s][o]
                tag = "0" if k is None else f"tau^-{k}"
                cells.append(f"{tag:>8} {_fmt(v):<18}")
            else:
                cells.append(f"{_fmt(v):>24}")
        print(f"  {o}  " + "".join(cells))


def cmd_hardy(args) -> int:
    if args.sweep is not None:
        if args.sweep < 1:
            raise UsageError("--sweep needs a positive number of points")
        rows = hardy.sweep(args.sweep)
        lines = [f"{_fmt(x)} {_fmt(p)}" for x, p in rows]
        text = "# x p(2G,2G)\n" + "\n".join(lines) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    golden = args.golden or args.x is None
    x = 1 / hardy.TAU if golden else args.x
    try:
        ctx = hardy.hardy_state(x)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    rep = reports.hardy_report(ctx)
    if args.out:
        _emit(reports.hardy_records(ctx), args.out)
    print(f"Hardy state at x = {_fmt(x)}" + (" (1/tau)" if golden else ""))
    _print_hardy_table(rep["table"], golden)
    par = rep["paradox"]
    for name, v in par["conditionals"].items():
        print(f"  {name} = {'undefined' if v is None else _fmt(v)}")
    print(f"  p(2_AG,2_BG) = {_fmt(par['joint_2AG_2BG'])}")
    actual = par["actual_2AR_given_2BG"]
    print(f"  chained conclusion p(2_AR|2_BG) = 1, actual {'undefined' if actual is None else _fmt(actual)}"
          + (" -> paradox" if par["paradox"] else ""))
    print("  " + par["note"])
    if args.golden:
        worst = 0.0
        for s in hardy.SETTINGS:
            col = rep["table"][s]
            worst = max(worst, abs(sum(col.values()) - 1))
            for o in hardy.OUTCOMES:
                worst = max(worst, abs(col[o] - hardy.golden_value(s, o)))
        ok = worst <= args.tolerance
        print(f"golden table check: max deviation {worst:.3e} ({'ok' if ok else 'FAILED'})")
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def cmd_sample(args) -> int:
    density_path = data_path(DEMOS[args.demo][0]) if args.demo else args.density
    if not density_path:
        raise UsageError("sample needs a density file or --demo")
    w = _load(io.read_density, density_path, "density")
    part = Partition.parse(args.partition) if args.partition else _default_partition(w.dim, args.basis)
    if part.total != w.dim:
        raise UsageError(f"partition {part} does not match density dimension {w.dim}")
    try:
        plan = ShotPlan(args.shots, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    er = empirical_correlations(w, part, _bases_for(part, args.basis), plan)
    if args.out:
        _emit(io.records_to_dict(er), args.out)
    rep = reports.sampling_report(er, w)
    if args.report:
        _emit(rep, args.report)
    print(f"{len(er.records)} records x {plan.shots} shots, seed {plan.seed} ({er.generator})")
    print(f"max-element error: raw {_fmt(rep['raw_max_error'])}, physical projection {_fmt(rep['physical_max_error'])}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steer", help="steer a purification onto one or more ensembles")
    p.add_argument("density", nargs="?", help="density matrix JSON")
    p.add_argument("ensembles", nargs="*", help="target ensemble JSON files")
    p.add_argument("--demo", choices=["maximally_mixed", "tilted", "d3"])
    p.add_argument("--out", help="JSON output path")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(func=cmd_steer)

    p = sub.add_parser("tomo", help="correlation records and reconstruction")
    p.add_argument("--density", help="density matrix JSON to generate records from")
    p.add_argument("--records", help="correlation records JSON to reconstruct from")
    p.add_argument("--reference", help="density matrix JSON to compare against")
    p.add_argument("--demo", choices=["singlet", "three_qubit", "maximally_mixed"])
    p.add_argument("--partition", action="append", help="e.g. 2x2x2; repeat to compare resolutions")
    p.add_argument("--basis", choices=["hermitian", "pauli"], default="hermitian")
    p.add_argument("--out", help="JSON output path")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(func=cmd_tomo)

    p = sub.add_parser("hardy", help="Hardy-state probability table and paradox chain")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--x", type=float, help="state parameter in (0, 1)")
    g.add_argument("--golden", action="store_true", help="use x = 1/tau and check the golden table")
    g.add_argument("--sweep", type=int, metavar="N", help="tabulate P(22,GG) at x = k/(N+1)")
    p.add_argument("--out", help="JSON output path")
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.set_defaults(func=cmd_hardy)

    p = sub.add_parser("sample", help="finite-shot correlation estimates and reconstruction")
    p.add_argument("density", nargs="?", help="density matrix JSON")
    p.add_argument("--demo", choices=["singlet", "three_qubit", "maximally_mixed"])
    p.add_argument("--partition")
    p.add_argument("--basis", choices=["hermitian", "pauli"], default="hermitian")
    p.add_argument("--shots", type=int, default=10_000, help="shots per record")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="JSON output path")
    p.add_argument("--report", help="write the reconstruction report here")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qcorr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
