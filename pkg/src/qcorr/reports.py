"""Report dictionaries shared by the CLI and library users.

Every CLI subcommand serializes one of these with :func:`qcorr.io.dumps`,
so calling the function directly yields byte-identical output.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import hardy
from .ensembles import DensityOperator, Ensemble
from .io import complex_pairs, matrix_to_dict, records_to_dict
from .sampling import EmpiricalRecordSet, reconstruct_empirical
from .steering import fidelity, theorem1_witness
from .tomography import Partition, RecordSet, reconstruct, resolution_consistency


def steering_report(w: DensityOperator, targets: Sequence[Ensemble], names: Sequence[str] | None = None, tolerance: float = 1e-9) -> dict:
    names = list(names) if names is not None else [f"target{n}" for n in range(len(targets))]
    wit = theorem1_witness(w, targets)
    out_targets = []
    passed = True
    for name, target, basis, outcomes in zip(names, targets, wit.bases, wit.outcomes()):
        rows = []
        min_fid, max_perr = 1.0, 0.0
        for o in outcomes:
            row = {"index": o.index, "probability": o.probability}
            row["conditional_state"] = complex_pairs(o.conditional_state) if o.defined else None
            if o.index < len(target):
                q, psi = target.weights[o.index], target.states[o.index]
                fid = fidelity(psi, o.conditional_state)
                row["target_weight"] = float(q)
                row["fidelity"] = fid
                min_fid = min(min_fid, fid)
                max_perr = max(max_perr, abs(o.probability - q))
            else:
                row["target_weight"] = 0.0
                row["fidelity"] = None
                max_perr = max(max_perr, o.probability)
            rows.append(row)
        ok = min_fid > 1 - tolerance and max_perr < tolerance
        passed = passed and ok
        out_targets.append(
            {
                "name": name,
                "ancilla_basis": matrix_to_dict(basis.states),
                "outcomes": rows,
                "min_fidelity": min_fid,
                "max_probability_error": max_perr,
                "passed": ok,
            }
        )
    return {
        "system_dim": w.dim,
        "ancilla_dim": wit.purification.ancilla_dim,
        "purification": complex_pairs(wit.purification.state),
        "targets": out_targets,
        "tolerance": tolerance,
        "passed": passed,
    }


def reconstruction_report(records: RecordSet, reference: DensityOperator | None = None, tolerance: float = 1e-9) -> dict:
    w = reconstruct(records)
    out = {"partition": list(records.partition.dims), "density": matrix_to_dict(w.matrix)}
    if reference is not None:
        res = float(np.max(np.abs(w.matrix - reference.matrix)))
        out["max_residual"] = res
        out["tolerance"] = tolerance
        out["passed"] = res < tolerance
    return out


def consistency_report(w: DensityOperator, partitions: Sequence[Partition], tolerance: float = 1e-9) -> dict:
    rep = resolution_consistency(w, partitions, tolerance)
    return {
        "partitions": [str(p) for p in rep.partitions],
        "reconstructions": [matrix_to_dict(m) for m in rep.reconstructions],
        "max_pairwise_deviation": rep.max_deviation,
        "max_error_vs_input": max(float(np.max(np.abs(m - w.matrix))) for m in rep.reconstructions),
        "tolerance": tolerance,
        "passed": rep.consistent,
    }


def sampling_report(records: EmpiricalRecordSet, reference: DensityOperator | None = None) -> dict:
    rec = reconstruct_empirical(records, reference)
    out = {
        "partition": list(records.partition.dims),
        "shots": records.shots,
        "seed": records.seed,
        "generator": records.generator,
        "raw_estimate": matrix_to_dict(rec.raw),
        "physical_projection": matrix_to_dict(rec.physical),
        "min_raw_eigenvalue": rec.min_raw_eigenvalue,
    }
    if reference is not None:
        out["raw_max_error"] = rec.raw_error
        out["physical_max_error"] = rec.physical_error
    return out


HARDY_PROJECTOR_LABELS = ("1R", "1G", "2R", "2G")


def hardy_records(ctx: hardy.HardyContext) -> dict:
    """The probability table as correlation records of local projectors.

    Index ``k`` on each party refers to ``HARDY_PROJECTOR_LABELS[k]``; the
    projector matrices are listed in the header.  Only the 16 entries of
    the four setting pairs are emitted.
    """
    elements = [{"label": lab, **matrix_to_dict(np.outer(ctx.ket(lab[0], lab[1]), ctx.ket(lab[0], lab[1]).conj()))} for lab in HARDY_PROJECTOR_LABELS]
    records = []
    for s in hardy.SETTINGS:
        for o in hardy.OUTCOMES:
            i = HARDY_PROJECTOR_LABELS.index(s[0] + o[0])
            j = HARDY_PROJECTOR_LABELS.index(s[1] + o[1])
            records.append({"indices": [i, j], "value": hardy.joint_probability(ctx, s, o), "setting": s, "outcome": o})
    return {
        "partition": [2, 2],
        "bases": [{"name": "hardy_projectors", "dim": 2, "x": ctx.x, "elements": elements}] * 2,
        "records": records,
    }


def hardy_report(ctx: hardy.HardyContext) -> dict:
    rep = hardy.paradox_report(ctx)
    return {
        "x": ctx.x,
        "table": hardy.probability_table(ctx),
        "paradox": {
            "conditionals": rep.conditionals,
            "joint_2AG_2BG": rep.joint_2ag_2bg,
            "chain_conclusion_2AR_given_2BG": rep.chain_conclusion,
            "actual_2AR_given_2BG": rep.actual_2ar_given_2bg,
            "paradox": rep.paradox,
            "note": rep.note,
        },
    }


def records_report(rs) -> dict:
    return records_to_dict(rs)
