import io
import json

from twistranks.cli import run

ODD_SQUAREFREE_500 = sum(1 for n in range(1, 501, 2)
                         if all(n % (p * p) for p in range(3, 23, 2)))


def call(*argv, cache=None):
    out, err = io.StringIO(), io.StringIO()
    args = list(argv)
    if cache is not None:
        args += ["--cache-dir", str(cache)]
    code = run(args, out, err)
    return code, out.getvalue(), err.getvalue()


def test_matstats_alternating_rationals():
    code, out, err = call("matstats", "--alt", "--n", "4", "--format", "csv")
    assert code == 0 and not err
    assert out.splitlines()[1:] == ["0,7/16,28/64", "2,35/64,35/64", "4,1/64,1/64"]


def test_matstats_general_rationals():
    code, out, _ = call("matstats", "--n", "2", "--format", "json")
    rows = json.loads(out)["rows"]
    assert [r["count_over_total"] for r in rows] == ["6/16", "9/16", "1/16"]


def test_chain_absorption_from_limit():
    code, out, _ = call("chain", "--alt", "--absorption", "--start", "limit", "--format", "csv")
    assert code == 0 and out.splitlines()[1:] == ["0,0.5", "1,0.5"]


def test_grid_all_subsets_table():
    code, out, _ = call("grid", "--example", "2x2", "--all-subsets", "--format", "json")
    rows = json.loads(out)["rows"]
    assert len(rows) == 16
    assert all(r["closed"] == (r["size"] != 3) for r in rows)


def test_output_is_byte_stable():
    a = call("grid", "--example", "2x2", "--all-subsets", "--format", "csv")[1]
    b = call("grid", "--example", "2x2", "--all-subsets", "--format", "csv")[1]
    assert a == b


def test_usage_errors_exit_2():
    assert call("nosuch")[0] == 2
    code, out, err = call("matstats")
    assert code == 2 and not out and "error" in err
    assert call("matstats", "--n", "x")[0] == 2


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[global]\nformat = csv\n[matstats]\nalt = true\nn = 3\n")
    code, out, _ = call("matstats", "--config", str(cfg))
    assert code == 0 and out.splitlines()[1:] == ["1,7/8,7/8", "3,1/8,1/8"]
    code, out, _ = call("matstats", "--config", str(cfg), "--n", "2")
    assert out.splitlines()[1:] == ["0,1/2,1/2", "2,1/2,1/2"]


def test_config_unknown_key_rejected(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[matstats]\ncolour = blue\n")
    code, out, err = call("matstats", "--config", str(cfg))
    assert code == 2 and "colour" in err and not out
    cfg.write_text("[nosuch]\nx = 1\n")
    assert call("matstats", "--config", str(cfg))[0] == 2


def test_fast_paths_refused_before_validate(tmp_path):
    code, out, err = call("selmer", "--d", "5", "--method", "monsky", cache=tmp_path)
    assert code == 1 and "validate" in err and not out
    code, _, err = call("sweep", "--kind", "selmer", "--H", "100", cache=tmp_path)
    assert code == 1


def test_validate_then_sweep(tmp_path):
    code, out, _ = call("validate", "--gates", "monsky,redei", "--H", "300", "--format", "csv",
                        cache=tmp_path)
    assert code == 0 and out.count("true") == 2
    code, out, _ = call("sweep", "--kind", "selmer", "--H", "500", "--format", "json",
                        "--no-runtime", cache=tmp_path)
    meta = json.loads(out)["meta"]
    assert code == 0 and meta["count"] == ODD_SQUAREFREE_500 and "runtime_seconds" not in meta
    code, out, _ = call("selmer", "--d", "5,41", "--method", "monsky", "--format", "csv",
                        cache=tmp_path)
    assert out.splitlines()[1:] == ["5,3,2,1,monsky", "41,4,2,2,monsky"]


def test_classgroup_and_jutila():
    code, out, _ = call("classgroup", "--d", "65", "--format", "csv")
    assert out.splitlines()[1] == "65,-260,8,2x4,2,1,0"
    code, out, _ = call("jutila", "--N1", "2", "--N2", "4", "--format", "csv")
    assert out.splitlines()[1].startswith("2,4,6,")


def test_grid_ramsey_is_seeded():
    a = call("grid", "--example", "2x3", "--ramsey", "2", "--batteries", "5", "--seed", "3")
    b = call("grid", "--example", "2x3", "--ramsey", "2", "--batteries", "5", "--seed", "3")
    assert a[0] == 0 and a[1] == b[1]
