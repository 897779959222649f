import csv
import json

import pytest


from talentsched import brute_force, generate_instance, parse_instance, write_instance
from talentsched.cli import BENCH_FIELDS, main
from talentsched.testkit import fixture_worked_example

FAST_FLAGS = ["--cache-bits", "10", "--time-limit", "60"]


def _write_instances(tmp_path, count=4, scenes=6, actors=4):
    paths = []
    for seed in range(count):
        inst = generate_instance(scenes, actors, seed=seed, density=0.5)
        p = tmp_path / f"inst{seed}.txt"
        p.write_text(write_instance(inst), encoding="utf-8")
        paths.append(p)
    return paths


def test_solve_json_worked_example(tmp_path, capsys):
    path = tmp_path / "t1.txt"
    path.write_text(write_instance(fixture_worked_example()), encoding="utf-8")
    code = main(["solve", str(path), "--json", *FAST_FLAGS])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["status"] == "optimal"
    assert out["holding_cost"] == 53
    assert out["total_cost"] == 434
    assert out["n"] == 12 and out["m"] == 6
    assert sorted(out["schedule"]) == list(range(12))
    assert set(out["cache"]) == {
        "bits", "strategy", "probes", "hits", "misses", "collisions", "replacements",
    }


def test_solve_human_output(tmp_path, capsys):
    path = tmp_path / "t1.txt"
    path.write_text(write_instance(fixture_worked_example()), encoding="utf-8")
    code = main(["solve", str(path), *FAST_FLAGS])
    text = capsys.readouterr().out
    assert code == 0
    assert "holding cost  53" in text
    assert "total cost    434" in text


def test_solve_bad_file_exits_1(tmp_path, capsys):
    path = tmp_path / "broken.txt"
    path.write_text("not an instance\n", encoding="utf-8")
    assert main(["solve", str(path)]) == 1
    assert "error" in capsys.readouterr().err


def test_solve_missing_file_exits_1(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "nope.txt")]) == 1


def test_solve_time_limit_exits_2(tmp_path, capsys):
    inst = generate_instance(30, 8, seed=4, density=0.3, max_duration=3)
    path = tmp_path / "big.txt"
    path.write_text(write_instance(inst), encoding="utf-8")
    code = main(
        ["solve", str(path), "--json", "--cache-bits", "10", "--time-limit", "0.05"]
    )
    out = json.loads(capsys.readouterr().out)
    assert code == 2
    assert out["status"] == "time_limit"
    assert sorted(out["schedule"]) == list(range(30))  # incumbent still printed


def test_solve_ablation_flags_agree(tmp_path, capsys):
    inst = generate_instance(7, 5, seed=11, density=0.45)
    path = tmp_path / "small.txt"
    path.write_text(write_instance(inst), encoding="utf-8")
    expect = brute_force(inst)[0]
    for flags in (
        [],
        ["--no-rule1", "--no-rule2", "--cache-bits", "0"],
        ["--no-preprocess", "--no-lower"],
        ["--branch-order", "cheapest"],
    ):
        code = main(["solve", str(path), "--json", "--time-limit", "30", *flags])
        out = json.loads(capsys.readouterr().out)
        assert code == 0 and out["holding_cost"] == expect


def test_env_var_sets_default_cache_bits(tmp_path, capsys, monkeypatch):
    inst = generate_instance(5, 3, seed=2, density=0.5)
    path = tmp_path / "e.txt"
    path.write_text(write_instance(inst), encoding="utf-8")
    monkeypatch.setenv("TALENTSCHED_CACHE_BITS", "6")
    main(["solve", str(path), "--json"])
    out = json.loads(capsys.readouterr().out)
    assert out["cache"]["bits"] == 6
    # explicit flag wins
    main(["solve", str(path), "--json", "--cache-bits", "4"])
    out = json.loads(capsys.readouterr().out)
    assert out["cache"]["bits"] == 4


def test_json_deterministic_excluding_elapsed(tmp_path, capsys):
    inst = generate_instance(10, 6, seed=3, density=0.4)
    path = tmp_path / "d.txt"
    path.write_text(write_instance(inst), encoding="utf-8")
    payloads = []
    for _ in range(2):
        main(["solve", str(path), "--json", *FAST_FLAGS])
        data = json.loads(capsys.readouterr().out)
        data.pop("elapsed")
        payloads.append(json.dumps(data, sort_keys=True))
    assert payloads[0] == payloads[1]


def test_gen_deterministic_and_parsable(tmp_path, capsys):
    args = ["gen", "-n", "9", "-m", "5", "--seed", "42", "--density", "0.4"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert first == second
    inst = parse_instance(first)
    assert inst.num_scenes == 9 and inst.num_actors == 5
    out = tmp_path / "g.txt"
    assert main([*args, "-o", str(out)]) == 0
    assert out.read_text(encoding="utf-8") == first


def test_gen_rejects_bad_arguments(capsys):
    assert main(["gen", "-n", "0", "-m", "3"]) == 1


def test_usage_errors_exit_1(capsys):
    for argv in (["solve"], ["gen", "-n", "banana", "-m", "3"], ["nope"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["solve", "x.txt", "--cache-bits", "60"])
    assert exc.value.code == 1


def test_export_ilp(tmp_path, capsys):
    inst = generate_instance(1, 1, seed=1, density=1.0)
    path = tmp_path / "one.txt"
    path.write_text(write_instance(inst), encoding="utf-8")
    out = tmp_path / "model.lp"
    assert main(["export-ilp", str(path), "-o", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    assert text.startswith("\\") and text.endswith("End\n")


def test_oracle_agrees_with_api(tmp_path, capsys):
    inst = generate_instance(6, 4, seed=5, density=0.5)
    path = tmp_path / "o.txt"
    path.write_text(write_instance(inst), encoding="utf-8")
    assert main(["oracle", str(path), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    holding, sched = brute_force(inst)
    assert out["holding_cost"] == holding
    assert tuple(out["schedule"]) == sched.order


def test_oracle_refuses_large_instances(tmp_path, capsys):
    inst = generate_instance(11, 4, seed=5, density=0.5)
    path = tmp_path / "big.txt"
    path.write_text(write_instance(inst), encoding="utf-8")
    assert main(["oracle", str(path)]) == 1
    assert "refuses" in capsys.readouterr().err


def test_bench_row_grid(tmp_path):
    _write_instances(tmp_path, count=3)
    out = tmp_path / "rows.csv"
    code = main(
        [
            "bench", str(tmp_path),
            "--cache-bits", "0,10",
            "--strategies", "latest,greedy",
            "--time-limit", "30",
            "-o", str(out),
        ]
    )
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 3 * 2 * 2
    assert list(rows[0].keys()) == BENCH_FIELDS
    by_inst = {}
    for row in rows:
        by_inst.setdefault(row["instance"], set()).add(row["holding_cost"])
    assert all(len(vals) == 1 for vals in by_inst.values())


def test_bench_skips_unreadable_and_fails_when_empty(tmp_path, capsys):
    good = _write_instances(tmp_path, count=1)[0]
    bad = tmp_path / "bad.txt"
    bad.write_text("garbage\n", encoding="utf-8")
    out = tmp_path / "rows.csv"
    code = main(["bench", str(good), str(bad), "--cache-bits", "8", "-o", str(out)])
    assert code == 0
    assert "skipping" in capsys.readouterr().err
    assert len(list(csv.DictReader(out.open()))) == 1

    only_bad = tmp_path / "solo"
    only_bad.mkdir()
    (only_bad / "nope.txt").write_text("garbage\n", encoding="utf-8")
    assert main(["bench", str(only_bad), "-o", str(out)]) == 1


def test_bench_parallel_matches_serial(tmp_path):
    _write_instances(tmp_path, count=4, scenes=5)
    serial = tmp_path / "serial.csv"
    parallel = tmp_path / "parallel.csv"
    flags = ["--cache-bits", "8", "--time-limit", "30"]
    assert main(["bench", str(tmp_path), *flags, "-o", str(serial)]) == 0
    assert main(["bench", str(tmp_path), *flags, "--jobs", "3", "-o", str(parallel)]) == 0
    a = serial.read_text(encoding="utf-8").splitlines()
    b = parallel.read_text(encoding="utf-8").splitlines()
    # identical apart from wall-clock columns
    strip = lambda lines: [
        ",".join(v for k, v in zip(BENCH_FIELDS, line.split(",")) if k != "seconds")
        for line in lines[1:]
    ]
    assert strip(a) == strip(b)


def test_bench_summary(tmp_path):
    _write_instances(tmp_path, count=3)
    rows = tmp_path / "rows.csv"
    summary = tmp_path / "summary.csv"
    code = main(
        [
            "bench", str(tmp_path),
            "--cache-bits", "8",
            "-o", str(rows),
            "--summary", str(summary),
        ]
    )
    assert code == 0
    table = list(csv.DictReader(summary.open()))
    assert len(table) == 1  # one (n, m, parameter) group
    assert table[0]["instances"] == "3"
    assert table[0]["solved"] == "3"
    assert float(table[0]["avg_subproblems"]) > 0
