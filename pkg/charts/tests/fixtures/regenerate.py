"""Rebuild the checked-in report fixtures.

Runs the benchmark on a small generated dataset and copies the report
files this package consumes into this directory.  Requires synthbench
(a test-time convenience only; the charts package itself never imports
it).

Run from the repository root:

    python3 charts/tests/fixtures/regenerate.py
"""

import json
import shutil
import tempfile
from pathlib import Path

from synthbench.demo import make_census_table
from synthbench.harness import (
    CandidateSpec,
    RunConfig,
    run_benchmark,
    save_tradeoff_json,
    tradeoff_points,
)
from synthbench.ingest import save_table

FIXTURE_DIR = Path(__file__).resolve().parent
ROWS = 1600
CANDIDATE_ROWS = 600


def main() -> None:
    with tempfile.TemporaryDirectory() as scratch:
        scratch_dir = Path(scratch)
        dataset_path = scratch_dir / "dataset.csv"
        save_table(make_census_table(rows=ROWS, seed=99), dataset_path)

        config = RunConfig(
            dataset=str(dataset_path),
            output_dir=str(scratch_dir / "out"),
            candidates=(
                CandidateSpec("identity", "baseline", baseline="identity",
                              parameters={"rows": CANDIDATE_ROWS, "seed": 2}),
                CandidateSpec("perturb-half", "baseline", baseline="perturb",
                              parameters={"noise": 0.5, "rows": CANDIDATE_ROWS, "seed": 2}),
                CandidateSpec("independent", "baseline", baseline="independent",
                              parameters={"rows": CANDIDATE_ROWS, "seed": 2}),
            ),
            split_seed=99,
        )
        manifest = run_benchmark(config)
        if not manifest.succeeded:
            raise SystemExit("fixture benchmark failed; fixtures left untouched")

        out = Path(config.output_dir)
        perturb_dir = out / "candidates" / "perturb-half"
        shutil.copy(perturb_dir / "fidelity.json", FIXTURE_DIR / "fidelity.json")
        shutil.copy(perturb_dir / "privacy.json", FIXTURE_DIR / "privacy.json")
        save_tradeoff_json(tradeoff_points(manifest), FIXTURE_DIR / "tradeoff.json")
        shutil.copy(out / "manifest.json", FIXTURE_DIR / "manifest.json")

    for name in ("fidelity.json", "privacy.json", "tradeoff.json", "manifest.json"):
        payload = json.loads((FIXTURE_DIR / name).read_text())
        print(f"{name}: kind={payload.get('kind')}")


if __name__ == "__main__":
    main()
