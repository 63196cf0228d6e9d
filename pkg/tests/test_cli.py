"""End-to-end command line flows through main(argv): exit codes, file
outputs, and determinism of solve runs."""

import hashlib
import json
import subprocess
import sys

import pytest

from leximin_sarp import generate_instance, parse_instance, read_archive, write_instance
from leximin_sarp.cli import main


@pytest.fixture
def instance_file(tmp_path):
    inst = generate_instance(7, 3, 2, 80.0, layout="random", seed=103)
    path = tmp_path / "tiny.sarp"
    write_instance(inst, path)
    return path


# -- generate ---------------------------------------------------------------------


def test_generate_round_trips(tmp_path, capsys):
    out = tmp_path / "gen.sarp"
    code = main([
        "generate", "--sites", "25", "--chars", "12", "--teams", "2",
        "--tmax", "2", "--layout", "r", "--seed", "1", "--speed", "40", "--out", str(out),
    ])
    assert code == 0
    assert "25 sites" in capsys.readouterr().out
    parsed = parse_instance(out)
    direct = generate_instance(25, 12, 2, 2.0, layout="r", seed=1, speed=40.0)
    assert parsed.name == direct.name
    assert parsed.num_teams == 2 and parsed.t_max == 2.0
    assert [(s.x, s.y, s.characteristics) for s in parsed.sites] == [
        (s.x, s.y, s.characteristics) for s in direct.sites
    ]


def test_generate_largest_class_shape(tmp_path):
    out = tmp_path / "big.sarp"
    code = main([
        "generate", "--sites", "100", "--chars", "12", "--teams", "6",
        "--tmax", "8", "--layout", "r", "--seed", "3", "--speed", "40", "--out", str(out),
    ])
    assert code == 0
    parsed = parse_instance(out)
    assert parsed.num_sites == 100 and parsed.num_teams == 6 and parsed.t_max == 8.0


def test_generate_missing_out_is_usage_error(capsys):
    assert main(["generate", "--sites", "5", "--chars", "3", "--teams", "1", "--tmax", "60"]) == 2
    capsys.readouterr()


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["optimize"]) == 2
    capsys.readouterr()


# -- solve ------------------------------------------------------------------------


def test_solve_writes_archive_manifest_and_log(tmp_path, instance_file, capsys):
    out = tmp_path / "run1"
    code = main([
        "solve", "--instance", str(instance_file),
        "--iterations", "400", "--seed", "5", "--out", str(out),
    ])
    assert code == 0
    assert "archive" in capsys.readouterr().out
    entries = read_archive(out / "archive.jsonl")
    assert len(entries) >= 1
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["instance_name"] == "r7-m3-k2-t80-s103"
    assert manifest["instance_sha256"] == hashlib.sha256(instance_file.read_bytes()).hexdigest()
    assert manifest["iterations"] == 400
    assert manifest["iterations_run"] == 400
    assert manifest["seed"] == 5
    assert manifest["configuration"] == "all"
    log_lines = (out / "run_log.jsonl").read_text().splitlines()
    assert len(log_lines) == 4  # segments of 100 over 400 iterations
    assert json.loads(log_lines[-1])["iteration"] == 400


def test_solve_same_seed_is_byte_identical(tmp_path, instance_file):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main([
            "solve", "--instance", str(instance_file),
            "--iterations", "1000", "--seed", "5", "--out", str(out),
        ]) == 0
        outs.append((out / "archive.jsonl").read_bytes())
    assert outs[0] == outs[1]


def test_solve_max_min_config_time_limit(tmp_path, instance_file):
    out = tmp_path / "mm"
    code = main([
        "solve", "--instance", str(instance_file), "--config", "max-min",
        "--time-limit", "0.2", "--seed", "1", "--out", str(out),
    ])
    assert code == 0
    assert json.loads((out / "manifest.json").read_text())["configuration"] == "max_min"
    assert len(read_archive(out / "archive.jsonl")) >= 1


def test_solve_bogus_config_is_usage_error(tmp_path, instance_file, capsys):
    code = main([
        "solve", "--instance", str(instance_file), "--config", "bogus",
        "--iterations", "10", "--out", str(tmp_path / "x"),
    ])
    assert code == 2
    capsys.readouterr()


def test_solve_without_stopping_rule_is_usage_error(tmp_path, instance_file, capsys):
    code = main(["solve", "--instance", str(instance_file), "--out", str(tmp_path / "x")])
    assert code == 2
    assert "time-limit" in capsys.readouterr().err


def test_solve_unreadable_instance_is_io_error(tmp_path, capsys):
    code = main([
        "solve", "--instance", str(tmp_path / "absent.sarp"),
        "--iterations", "10", "--out", str(tmp_path / "x"),
    ])
    assert code == 1
    capsys.readouterr()


# -- oracle / oracle-verify ----------------------------------------------------------


def test_oracle_writes_front_and_maximal_flag_restricts_it(tmp_path, instance_file, capsys):
    full_out = tmp_path / "full.jsonl"
    maxi_out = tmp_path / "maxi.jsonl"
    assert main(["oracle", "--instance", str(instance_file), "--out", str(full_out)]) == 0
    assert main([
        "oracle", "--instance", str(instance_file), "--out", str(maxi_out), "--maximal-only",
    ]) == 0
    out = capsys.readouterr().out
    assert "full" in out and "insertion-maximal" in out
    full = read_archive(full_out)
    maxi = read_archive(maxi_out)
    assert len(full) > len(maxi) >= 1


def test_oracle_eleven_sites_exceeds_default_limits(tmp_path, capsys):
    inst = generate_instance(11, 3, 2, 80.0, seed=1)
    path = tmp_path / "eleven.sarp"
    write_instance(inst, path)
    code = main(["oracle", "--instance", str(path), "--out", str(tmp_path / "f.jsonl")])
    assert code == 3
    assert "sites" in capsys.readouterr().err


def test_oracle_node_budget_exit(tmp_path, instance_file, capsys):
    code = main([
        "oracle", "--instance", str(instance_file), "--out", str(tmp_path / "f.jsonl"),
        "--node-budget", "10",
    ])
    assert code == 3
    assert "node_budget" in capsys.readouterr().err


def test_oracle_verify_clean_and_failing(tmp_path, instance_file, capsys):
    exact = tmp_path / "exact.jsonl"
    assert main(["oracle", "--instance", str(instance_file), "--out", str(exact), "--maximal-only"]) == 0

    assert main(["oracle-verify", "--candidate", str(exact), "--exact", str(exact)]) == 0
    assert "missing 0" in capsys.readouterr().out

    # Remove one entry: missing=1 -> exit 1.
    entries = read_archive(exact)
    partial = tmp_path / "partial.jsonl"
    from leximin_sarp import write_archive

    write_archive(partial, entries[1:])
    if len(entries) > 1:
        assert main(["oracle-verify", "--candidate", str(partial), "--exact", str(exact)]) == 1
        capsys.readouterr()

    # Add a dominated entry: extra_dominated=1 -> exit 1.
    from leximin_sarp import FrontEntry

    junk = FrontEntry(entries[0].duration + 5.0, entries[0].ratios, entries[0].routes)
    tainted = tmp_path / "tainted.jsonl"
    write_archive(tainted, list(entries) + [junk])
    assert main(["oracle-verify", "--candidate", str(tainted), "--exact", str(exact)]) == 1
    out = capsys.readouterr().out
    assert "extra dominated 1" in out


# -- evaluate --------------------------------------------------------------------------


def test_evaluate_builds_reference_and_tables(tmp_path, instance_file, capsys):
    for seed in (1, 2, 3):
        assert main([
            "solve", "--instance", str(instance_file),
            "--iterations", "300", "--seed", str(seed),
            "--out", str(tmp_path / f"runs/seed{seed}"),
        ]) == 0
    capsys.readouterr()
    ref_out = tmp_path / "reference.jsonl"
    csv_dir = tmp_path / "tables"
    code = main([
        "evaluate", "--runs", str(tmp_path / "runs" / "*"),
        "--reference-out", str(ref_out), "--csv", str(csv_dir),
        "--alphas", "0,1,2,3", "--published", "0.5",
    ])
    assert code == 0
    assert "reference" in capsys.readouterr().out
    reference = read_archive(ref_out)
    assert len(reference) >= 1
    coverage = (csv_dir / "coverage_fractions.csv").read_text().splitlines()
    assert len(coverage) == 1 + 3 * 4  # header + runs x alphas
    assert coverage[0] == "instance,config,time_limit,run,alpha,fraction"
    assert (csv_dir / "maxmin_hist.csv").exists()
    assert (csv_dir / "published_cmp.csv").exists()


def test_evaluate_single_run_covers_itself(tmp_path, instance_file, capsys):
    assert main([
        "solve", "--instance", str(instance_file),
        "--iterations", "200", "--seed", "1", "--out", str(tmp_path / "runs/only"),
    ]) == 0
    csv_dir = tmp_path / "tables"
    assert main([
        "evaluate", "--runs", str(tmp_path / "runs" / "*"),
        "--reference-out", str(tmp_path / "ref.jsonl"), "--csv", str(csv_dir),
    ]) == 0
    capsys.readouterr()
    rows = (csv_dir / "coverage_fractions.csv").read_text().splitlines()[1:]
    assert rows, "no coverage rows written"
    assert all(row.endswith(",1.0") for row in rows)


def test_evaluate_no_matching_runs_is_io_error(tmp_path, capsys):
    code = main([
        "evaluate", "--runs", str(tmp_path / "nothing" / "*"),
        "--reference-out", str(tmp_path / "ref.jsonl"), "--csv", str(tmp_path / "t"),
    ])
    assert code == 1
    assert "no runs match" in capsys.readouterr().err


# -- console entry ----------------------------------------------------------------------


def test_module_entry_point_prints_usage():
    proc = subprocess.run(
        [sys.executable, "-m", "leximin_sarp.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    for sub in ("generate", "solve", "oracle", "oracle-verify", "evaluate"):
        assert sub in proc.stdout
