import json

import pytest

from ltlflearn.cli import main
from ltlflearn.formulas import parse_formula
from ltlflearn.pipeline import separates
from ltlflearn.traces import parse_task, serialize_sample

from conftest import union_shaped_sample

WORKED = "1;1;0;1;1\n0;1;1;1\n---\n1;0;1;0\n1;1;0\n---\na\n"
# Only F over one proposition: candidates a and F(a), neither separates.
STUCK = "1;0\n---\n1;1\n---\nF\n"


@pytest.fixture
def task_path(tmp_path):
    path = tmp_path / "worked.trace"
    path.write_text(WORKED)
    return str(path)


@pytest.fixture
def stuck_path(tmp_path):
    path = tmp_path / "stuck.trace"
    path.write_text(STUCK)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_learn_text_solved(task_path, capsys):
    code, out, err = run(capsys, "learn", task_path)
    assert code == 0
    task = parse_task(WORKED)
    phi = parse_formula(out.strip(), task.sample.alphabet)
    assert phi.size == 3
    assert separates(phi, task.sample)
    assert "solved in" in err and "size 3" in err


def test_learn_json_solved(task_path, capsys):
    code, out, err = run(capsys, "learn", task_path, "--format", "json")
    assert code == 0
    record = json.loads(out)
    assert set(record) == {
        "task", "status", "formula", "size", "elapsed_ms",
        "method", "witness", "stats", "config",
    }
    assert record["status"] == "Solved"
    assert record["size"] == 3
    assert record["method"] == "EnumOnly"
    assert record["witness"] is None
    assert record["elapsed_ms"] >= 0
    assert record["config"]["ltl2bs_switch"] == 8
    assert record["task"] == task_path


def test_learn_no_solution_text(stuck_path, capsys):
    code, out, err = run(capsys, "learn", stuck_path)
    assert code == 1
    assert "no solution" in out
    assert "deeper enumeration might still find a separator" in out


def test_learn_no_solution_json(stuck_path, capsys):
    code, out, err = run(capsys, "learn", stuck_path, "--format", "json")
    assert code == 1
    record = json.loads(out)
    assert record["status"] == "NoSolution"
    assert record["formula"] is None
    assert record["witness"] == {"pos_index": 0, "neg_index": 0}


def test_learn_operators_flag_beats_task_ops(stuck_path, capsys):
    code, out, err = run(capsys, "learn", stuck_path, "--operators", "!,F")
    assert code == 0
    task = parse_task(STUCK)
    phi = parse_formula(out.strip(), task.sample.alphabet)
    assert separates(phi, task.sample)


def test_learn_timeout(tmp_path, capsys):
    sample = union_shaped_sample(seed=0)
    path = tmp_path / "hard.trace"
    path.write_text(serialize_sample(sample, ("X!", "F", "&", "|")))
    code, out, err = run(capsys, "learn", str(path), "--timeout", "1e-9")
    assert code == 2
    assert "timeout" in out


def test_learn_malformed_task(tmp_path, capsys):
    path = tmp_path / "bad.trace"
    path.write_text("1;2\n---\n0\n")
    code, out, err = run(capsys, "learn", str(path))
    assert code == 3
    assert err.startswith("error:")
    assert "line 1" in err


def test_learn_missing_task(capsys):
    code, out, err = run(capsys, "learn", "does-not-exist.trace")
    assert code == 3
    assert err.startswith("error:")


def test_learn_bad_operator_token(task_path, capsys):
    code, out, err = run(capsys, "learn", task_path, "--operators", "F,W")
    assert code == 3


def test_verify(task_path, capsys):
    code, out, _ = run(capsys, "verify", task_path, "G(F(a))")
    assert code == 0 and out.strip() == "separates"
    code, out, _ = run(capsys, "verify", task_path, "a")
    assert code == 1 and out.strip() == "does not separate"


def test_verify_json(task_path, capsys):
    code, out, _ = run(capsys, "verify", task_path, "F(G(a))", "--format", "json")
    assert code == 0
    record = json.loads(out)
    assert record == {"task": task_path, "formula": "F(G(a))", "separates": True}


def test_verify_syntax_error(task_path, capsys):
    code, out, err = run(capsys, "verify", task_path, "F(")
    assert code == 3
    assert err.startswith("error: formula:")


def test_generate_writes_tasks_and_manifest(tmp_path, capsys):
    out_dir = tmp_path / "tasks"
    code, out, err = run(
        capsys, "generate", "--family", "subset", "--n", "2",
        "--count", "2", "--out", str(out_dir),
    )
    assert code == 0
    paths = out.strip().splitlines()
    assert len(paths) == 2
    for p in paths:
        parse_task(open(p).read())
    assert (out_dir / "manifest.csv").exists()
    assert "wrote 2 task(s)" in err

    first = [open(p, "rb").read() for p in paths]
    code, out, _ = run(
        capsys, "generate", "--family", "subset", "--n", "2",
        "--count", "2", "--out", str(out_dir),
    )
    assert code == 0
    again = [open(p, "rb").read() for p in out.strip().splitlines()]
    assert first == again


def test_generate_hamming_needs_single_positive(tmp_path, capsys):
    code, out, err = run(
        capsys, "generate", "--family", "hamming", "--out", str(tmp_path),
    )
    assert code == 3
    assert "--pos 1" in err
    code, *_ = run(
        capsys, "generate", "--family", "hamming", "--pos", "1",
        "--out", str(tmp_path),
    )
    assert code == 0


@pytest.fixture
def small_manifest(tmp_path, capsys):
    out_dir = tmp_path / "bench"
    main(["generate", "--family", "ordered-sequence", "--n", "2",
          "--count", "2", "--out", str(out_dir)])
    capsys.readouterr()
    return str(out_dir / "manifest.csv")


def test_bench_serial(small_manifest, capsys):
    code, out, err = run(capsys, "bench", small_manifest)
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert len(records) == 2
    assert all(r["status"] == "Solved" for r in records)
    assert "solved 2/2" in err
    assert "mean time over solved" in err


def test_bench_parallel_matches_serial(small_manifest, capsys):
    _, out1, _ = run(capsys, "bench", small_manifest)
    _, out2, _ = run(capsys, "bench", small_manifest, "--jobs", "2")
    key = lambda r: (r["task"], r["status"], r["formula"], r["size"])
    first = [key(json.loads(line)) for line in out1.strip().splitlines()]
    second = [key(json.loads(line)) for line in out2.strip().splitlines()]
    assert first == second


def test_bench_resolves_paths_against_manifest_dir(tmp_path, monkeypatch, capsys):
    out_dir = tmp_path / "suite"
    main(["generate", "--family", "subset", "--n", "2", "--out", str(out_dir)])
    capsys.readouterr()
    monkeypatch.chdir(tmp_path.parent)
    code, out, err = run(capsys, "bench", str(out_dir / "manifest.csv"))
    assert code == 0
    assert json.loads(out)["status"] == "Solved"


def test_bench_respects_task_ops_unless_overridden(tmp_path, capsys):
    task = tmp_path / "stuck.trace"
    task.write_text(STUCK)
    manifest = tmp_path / "manifest.csv"
    manifest.write_text(
        "family,n_props,trace_len,n_pos,n_neg,seed,params,formula,path\n"
        f"hand,1,2,1,1,0,{{}},,{task}\n"
    )
    code, out, _ = run(capsys, "bench", str(manifest))
    assert code == 0
    assert json.loads(out)["status"] == "NoSolution"
    code, out, _ = run(capsys, "bench", str(manifest), "--operators", "!,F")
    assert json.loads(out)["status"] == "Solved"


def test_bench_missing_file_is_an_error_record(tmp_path, capsys):
    manifest = tmp_path / "manifest.csv"
    manifest.write_text(
        "family,n_props,trace_len,n_pos,n_neg,seed,params,formula,path\n"
        "hand,1,2,1,1,0,{},,gone.trace\n"
    )
    code, out, err = run(capsys, "bench", str(manifest))
    assert code == 3
    assert json.loads(out)["status"] == "Error"
    assert "error 1" in err
