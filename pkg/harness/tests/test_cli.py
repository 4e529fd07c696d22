import json

from conftest import write_parallel
from toynmt.cli import main


def test_train_command_writes_artifacts(tmp_path):
    data = write_parallel(tmp_path / "copy")
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps(
        {"hidden": 64, "batch_size": 32, "max_steps": 100, "eval_every": 100}
    ))
    out = tmp_path / "out"
    rc = main([
        "train", "--data", str(data), "--model", "bilstm", "--config", str(config),
        "--repeats", "1", "--seed", "0", "--out", str(out),
    ])
    assert rc == 0
    summary = json.loads((out / "bilstm__copy.json").read_text())
    assert summary["config"]["max_steps"] == 100
    assert 0.0 <= summary["final_validation_accuracy"] <= 1.0
    tsv = (out / "bilstm__copy.tsv").read_text().splitlines()
    assert len(tsv) == 2  # header + single checkpoint
    assert (out / "bilstm__copy.png").stat().st_size > 0


def test_run_all_sweeps_variants(tmp_path):
    root = tmp_path / "root"
    write_parallel(root / "va", n_train=120, n_valid=20, n_test=20, seed=1)
    write_parallel(root / "vb", n_train=120, n_valid=20, n_test=20, seed=2)
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"hidden": 64, "batch_size": 32, "eval_every": 100}))
    out = tmp_path / "runs"
    rc = main([
        "run-all", "--data-root", str(root), "--models", "bilstm", "--config", str(config),
        "--repeats", "1", "--max-steps", "100", "--out", str(out),
    ])
    assert rc == 0
    summary = json.loads((out / "summary.json").read_text())
    assert set(summary) == {"bilstm__va", "bilstm__vb"}
    assert (out / "curves.png").exists()
    assert (out / "bilstm__va.tsv").exists()
