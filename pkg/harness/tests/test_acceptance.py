"""Toy convergence criterion.

Both trainable models must reach >= 99% validation sentence accuracy within
1,000 steps on all three toy variants (averaged over 5 seeds), and the
mixed-order+case variant must not reach the 95% mark earlier than either
fixed-order variant.

The full sweep takes ~30 min on a multicore CPU (hours on the 2-core CI
sandbox), so this module validates the artifacts of a completed
`toynmt run-all` pointed to by TOYNMT_RESULTS, or recomputes everything
itself when TOYNMT_FULL=1. Without either variable the tests are skipped.
"""

import json
import os
import shutil
import subprocess
from pathlib import Path

import pytest

MODELS = ("bilstm", "transformer_small")
VARIANTS = ("vso", "vos", "mix")
MIXED = "mix"

RESULTS = os.environ.get("TOYNMT_RESULTS")
FULL = os.environ.get("TOYNMT_FULL") == "1"


def _check_summary(summary: dict):
    for model in MODELS:
        firsts = {}
        for variant in VARIANTS:
            entry = summary[f"{model}__{variant}"]
            assert entry["final_validation_accuracy"] >= 0.99, (model, variant, entry)
            assert entry["first_step_at_95"] is not None, (model, variant)
            firsts[variant] = entry["first_step_at_95"]
        for fixed in ("vso", "vos"):
            assert firsts[MIXED] >= firsts[fixed], (model, firsts)
        print(f"\nACCEPTANCE PASS: {model} converged on all variants; "
              f"first@0.95 steps {firsts}")


@pytest.mark.skipif(RESULTS is None, reason="set TOYNMT_RESULTS to a run-all output dir")
def test_convergence_criterion_from_artifacts():
    results = Path(RESULTS)
    summary = json.loads((results / "summary.json").read_text(encoding="utf-8"))
    _check_summary(summary)
    for model in MODELS:
        for variant in VARIANTS:
            rows = (results / f"{model}__{variant}.tsv").read_text().splitlines()
            assert rows[0].startswith("step\taccuracy")
            assert len(rows) == 11  # checkpoint grid 100..1000
            assert len(rows[1].split("\t")) >= 2 + 5  # mean + five repeats


@pytest.mark.skipif(not FULL, reason="set TOYNMT_FULL=1 to retrain everything (slow on CPU)")
def test_convergence_criterion_full(tmp_path):
    if shutil.which("synthlang") is None:
        pytest.skip("synthlang CLI not installed; needed to generate the toy corpora")
    data_root = tmp_path / "toy"
    for variant, name in (("fixed-vso", "vso"), ("fixed-vos", "vos"), ("mixed-case", MIXED)):
        subprocess.run(
            ["synthlang", "toy", "generate", "--variant", variant, "--n", "10000",
             "--seed", "7", "--out", str(data_root / name), "--split", "0.8,0.1,0.1"],
            check=True,
        )
    out = tmp_path / "runs"
    subprocess.run(
        ["toynmt", "run-all", "--data-root", str(data_root), "--out", str(out),
         "--repeats", "5", "--max-steps", "1000", "--seed", "0"],
        check=True,
    )
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    _check_summary(summary)
