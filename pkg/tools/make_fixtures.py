"""Regenerate the bundled demo fixtures in src/qcorr/data/.

Run from the repository root: ``python tools/make_fixtures.py``.
"""

from pathlib import Path

import numpy as np

from qcorr import io, reports, states
from qcorr.ensembles import DensityOperator, eigen_ensemble
from qcorr.randomized import random_density, random_realization

DATA = Path(__file__).resolve().parents[1] / "src" / "qcorr" / "data"


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    io.write_json(DATA / "maximally_mixed.json", io.matrix_to_dict(np.eye(2) / 2))
    io.write_json(DATA / "z_ensemble.json", io.ensemble_to_list(states.z_ensemble()))
    io.write_json(DATA / "x_ensemble.json", io.ensemble_to_list(states.x_ensemble()))

    pq = DensityOperator(np.diag([0.75, 0.25]))
    io.write_json(DATA / "pq_density.json", io.matrix_to_dict(pq.matrix))
    io.write_json(DATA / "pq_eigen_ensemble.json", io.ensemble_to_list(eigen_ensemble(pq)))
    io.write_json(DATA / "rl_ensemble.json", io.ensemble_to_list(states.tilted_ensemble(0.75)))

    io.write_json(DATA / "singlet.json", io.matrix_to_dict(np.outer(states.SINGLET, states.SINGLET.conj())))
    io.write_json(DATA / "three_qubit.json", io.matrix_to_dict(random_density(8, seed=2024).matrix))

    rng = np.random.default_rng(7)
    w = random_density(3, rank=2, seed=rng)
    a = random_realization(w, 3, seed=rng)
    b = random_realization(w, 5, seed=rng)
    io.write_json(DATA / "d3_density.json", io.matrix_to_dict(w.matrix))
    io.write_json(DATA / "d3_ensemble_a.json", io.ensemble_to_list(a))
    io.write_json(DATA / "d3_ensemble_b.json", io.ensemble_to_list(b))
    # golden report from the library, read back through the file formats
    w2 = io.read_density(DATA / "d3_density.json")
    targets = [io.read_ensemble(DATA / n) for n in ("d3_ensemble_a.json", "d3_ensemble_b.json")]
    rep = reports.steering_report(w2, targets, ["d3_ensemble_a.json", "d3_ensemble_b.json"])
    io.write_json(DATA / "d3_steer_report.json", rep)


if __name__ == "__main__":
    main()
