import json

import numpy as np
import pytest

from qcorr import io, reports
from qcorr.cli import data_path, main
from qcorr.ensembles import DensityOperator
from qcorr.hardy import TAU
from qcorr.randomized import random_density
from qcorr.sampling import ShotPlan, empirical_correlations
from qcorr.states import tilted_ensemble, z_ensemble


def test_steer_demo(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["steer", "--demo", "maximally_mixed", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["ancilla_dim"] == 2 and len(rep["targets"]) == 2
    assert all(t["passed"] for t in rep["targets"])
    assert "z_ensemble.json" in capsys.readouterr().out


def test_steer_files_match_demo(tmp_path):
    out = tmp_path / "r.json"
    args = [str(data_path("pq_density.json")), str(data_path("pq_eigen_ensemble.json")), str(data_path("rl_ensemble.json"))]
    assert main(["steer", *args, "--out", str(out)]) == 0


def test_steer_non_realization_exits_2(tmp_path, capsys):
    io.write_json(tmp_path / "z.json", io.ensemble_to_list(z_ensemble()))
    code = main(["steer", str(data_path("pq_density.json")), str(tmp_path / "z.json")])
    assert code == 2
    err = capsys.readouterr().err
    assert "RealizationError" in err and "z.json" in err


def test_steer_support_error_names_member(tmp_path, capsys):
    io.write_json(tmp_path / "w.json", io.matrix_to_dict(np.diag([1.0, 0.0])))
    io.write_json(tmp_path / "e.json", io.ensemble_to_list(tilted_ensemble(0.5)))
    assert main(["steer", str(tmp_path / "w.json"), str(tmp_path / "e.json")]) == 2
    assert "member 0" in capsys.readouterr().err


def test_steer_d3_golden_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["steer", "--demo", "d3", "--out", str(out)]) == 0
    assert out.read_text() == data_path("d3_steer_report.json").read_text()
    # and the library call produces the same bytes
    w = io.read_density(data_path("d3_density.json"))
    names = ["d3_ensemble_a.json", "d3_ensemble_b.json"]
    rep = reports.steering_report(w, [io.read_ensemble(data_path(n)) for n in names], names)
    assert io.dumps(rep) + "\n" == out.read_text()


def test_tomo_forward_then_inverse(tmp_path, capsys):
    recs = tmp_path / "rec.json"
    assert main(["tomo", "--demo", "singlet", "--partition", "2x2", "--out", str(recs)]) == 0
    out = tmp_path / "w.json"
    assert main(["tomo", "--records", str(recs), "--reference", str(data_path("singlet.json")), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["max_residual"] < 1e-9


def test_tomo_missing_record(tmp_path, capsys):
    recs = tmp_path / "rec.json"
    main(["tomo", "--demo", "singlet", "--partition", "2x2", "--out", str(recs)])
    d = json.loads(recs.read_text())
    del d["records"][7]
    recs.write_text(json.dumps(d))
    assert main(["tomo", "--records", str(recs)]) == 2
    assert "(1, 3)" in capsys.readouterr().err


def test_tomo_multipartition(tmp_path):
    out = tmp_path / "c.json"
    code = main(["tomo", "--demo", "three_qubit", "--partition", "2x4", "--partition", "4x2", "--partition", "2x2x2", "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert len(rep["reconstructions"]) == 3 and rep["max_pairwise_deviation"] < 1e-9


def test_tomo_pauli_basis(tmp_path):
    recs = tmp_path / "rec.json"
    assert main(["tomo", "--demo", "singlet", "--partition", "2x2", "--basis", "pauli", "--out", str(recs)]) == 0
    d = json.loads(recs.read_text())
    values = {tuple(r["indices"]): r["value"] for r in d["records"]}
    assert all(abs(values[(k, k)] + 1) < 1e-12 for k in (1, 2, 3))


def test_pauli_basis_defaults_to_qubit_partition(tmp_path):
    out = tmp_path / "r.json"
    assert main(["tomo", "--demo", "three_qubit", "--basis", "pauli", "--out", str(out)]) == 0
    assert io.read_records(out).partition.dims == (2, 2, 2)
    assert main(["sample", "--demo", "singlet", "--basis", "pauli", "--shots", "10", "--out", str(out)]) == 0
    assert io.read_records(out).partition.dims == (2, 2)


def test_tomo_partition_mismatch():
    assert main(["tomo", "--demo", "singlet", "--partition", "2x3"]) == 2


def test_hardy_golden(capsys):
    assert main(["hardy", "--golden"]) == 0
    out = capsys.readouterr().out
    assert "tau^-5" in out and "0.0901699437495" in out and "paradox" in out


def test_hardy_records_output(tmp_path):
    out = tmp_path / "h.json"
    assert main(["hardy", "--golden", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert len(d["records"]) == 16
    gg22 = [r for r in d["records"] if r["setting"] == "22" and r["outcome"] == "GG"][0]
    assert abs(gg22["value"] - TAU**-5) < 1e-12


def test_hardy_sweep(capsys):
    assert main(["hardy", "--sweep", "99"]) == 0
    rows = [tuple(map(float, l.split())) for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    assert len(rows) == 99
    assert abs(max(rows, key=lambda r: r[1])[0] - 0.618) < 0.01


@pytest.mark.parametrize("x", ["0", "1", "-0.5"])
def test_hardy_domain_error(x, capsys):
    assert main(["hardy", "--x", x]) == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as info:
        main(["hardy", "--bogus"])
    assert info.value.code == 2


def test_sample_reproducible_files(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    ra, rb = tmp_path / "ra.json", tmp_path / "rb.json"
    for out, rep in ((a, ra), (b, rb)):
        assert main(["sample", "--demo", "singlet", "--partition", "2x2", "--shots", "1000", "--seed", "42", "--out", str(out), "--report", str(rep)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert ra.read_bytes() == rb.read_bytes()


def test_sample_matches_library(tmp_path):
    out = tmp_path / "e.json"
    assert main(["sample", "--demo", "singlet", "--partition", "2x2", "--shots", "500", "--seed", "3", "--out", str(out)]) == 0
    w = io.read_density(data_path("singlet.json"))
    from qcorr.tomography import Partition

    er = empirical_correlations(w, Partition((2, 2)), plan=ShotPlan(500, seed=3))
    assert out.read_text() == io.dumps(io.records_to_dict(er)) + "\n"


def test_sample_single_shot(tmp_path):
    out = tmp_path / "e.json"
    assert main(["sample", "--demo", "singlet", "--partition", "2x2", "--shots", "1", "--out", str(out)]) == 0


def test_sample_singlet_million_shots(tmp_path):
    rep = tmp_path / "r.json"
    assert main(["sample", "--demo", "singlet", "--partition", "2x2", "--shots", "1000000", "--seed", "1", "--report", str(rep)]) == 0
    assert json.loads(rep.read_text())["raw_max_error"] < 0.01


def test_bad_density_file(tmp_path):
    (tmp_path / "w.json").write_text(io.dumps(io.matrix_to_dict(np.diag([0.7, 0.7]))))
    assert main(["sample", str(tmp_path / "w.json")]) == 2
    assert main(["sample", str(tmp_path / "missing.json")]) == 2
