import io
import json
import subprocess
import sys

import numpy as np
import pytest

from roughsig import (
    InputError,
    MultiplicativeFunctional,
    TruncatedTensor,
    pair,
    path_signature,
    project,
    rho_metric,
    signature_path,
    unit,
)
from roughsig.cli import RunConfig, dispatch, main
from roughsig.io import (
    parse_csv,
    parse_functional_json,
    parse_tensor_json,
    read_csv,
    read_tensor_json,
    write_functional_json,
    write_tensor_json,
)

from conftest import random_group, random_path

AXIS_CSV = "t,x1,x2\n0,0,0\n1,1,0\n2,1,1\n"
LOOP_CSV = "t,x1,x2\n0,0,0\n1,1,0\n2,1,1\n3,0,1\n4,0,0\n"


def _csv_of(p):
    lines = ["t," + ",".join(f"x{i + 1}" for i in range(p.d))]
    for t, x in zip(p.times, p.points):
        lines.append(",".join(format(v, ".17g") for v in [t, *x]))
    return "\n".join(lines) + "\n"


@pytest.fixture
def files(tmp_path):
    def make(name, text):
        f = tmp_path / name
        f.write_text(text)
        return str(f)
    return make


def run(argv, capsys):
    status = main(argv)
    out = capsys.readouterr()
    return status, out.out, out.err


def test_parse_csv_basic():
    p = parse_csv("t,x1\n0,0\n1,1")
    assert p.d == 1
    assert p.times.tolist() == [0.0, 1.0]
    assert p.points.tolist() == [[0.0], [1.0]]
    q = parse_csv("t,x1,x2\n10,1,2\n12,3,4\n20,5,6\n")
    assert q.times.tolist() == [0.0, 0.2, 1.0]
    assert q.meta["time_span"] == [10.0, 20.0]


@pytest.mark.parametrize(
    "text,needle",
    [
        ("t,x1\n0,0\n0,1\n", "row 3"),
        ("t,x1,x2\n0,1,2\n1,3\n", "row 3"),
        ("t,x1\n0,0\n1,abc\n", "row 3, column 2"),
        ("t,y1\n0,0\n", "header"),
        ("t\n0\n", "header"),
        ("", "empty"),
        ("t,x1\n", "no data"),
        ("t,x1\n0,nan\n", "non-finite"),
    ],
)
def test_parse_csv_errors(text, needle):
    with pytest.raises(InputError, match=needle):
        parse_csv(text)


def test_read_csv_stream_and_file(files):
    assert read_csv(io.StringIO(AXIS_CSV)).d == 2
    assert len(read_csv(files("a.csv", AXIS_CSV))) == 3


def test_tensor_json_format(rng):
    assert write_tensor_json(unit(2, 1)) == '{"d":2,"depth":1,"interval":[0,1],"levels":[[1],[0,0]]}'
    x = random_group(rng, 3, 3)
    obj = json.loads(write_tensor_json(x, (0.25, 0.75), {"time_span": [1, 2]}))
    assert list(obj) == ["d", "depth", "interval", "levels", "meta"]
    assert [len(lev) for lev in obj["levels"]] == [1, 3, 9, 27]
    y, interval, meta = parse_tensor_json(write_tensor_json(x, (0.25, 0.75)))
    assert y == x
    assert interval == (0.25, 0.75) and meta == {}


def test_tensor_json_bit_exact_property(rng):
    for _ in range(20):
        flat = rng.normal(size=13) * 10.0 ** rng.integers(-300, 300, size=13)
        x = TruncatedTensor(3, 2, flat)
        assert np.array_equal(parse_tensor_json(write_tensor_json(x))[0].flat, flat)


@pytest.mark.parametrize(
    "text",
    [
        "{",
        "[1]",
        '{"d":2,"depth":1,"levels":[[1],[0]]}',
        '{"d":2,"depth":1,"levels":[[1]]}',
        '{"d":2,"depth":1,"levels":[[1],[0,"a"]]}',
    ],
)
def test_tensor_json_errors(text):
    with pytest.raises(InputError):
        parse_tensor_json(text)


def test_functional_json_roundtrip(rng):
    mf = MultiplicativeFunctional.from_signature_path(signature_path(random_path(rng, 2, 4), 2))
    back = parse_functional_json(write_functional_json(mf))
    assert np.array_equal(np.triu(back.table.transpose(2, 0, 1)), np.triu(mf.table.transpose(2, 0, 1)))
    obj = json.loads(write_functional_json(mf))
    obj["increments"].pop()
    with pytest.raises(InputError, match="missing"):
        parse_functional_json(json.dumps(obj))


def test_cli_sig_axis(files, capsys):
    status, out, _ = run(["sig", "--depth", "2", files("axis.csv", AXIS_CSV)], capsys)
    assert status == 0
    x, interval, meta = parse_tensor_json(out)
    assert pair(x, (1, 2)) == 1.0 and pair(x, (2, 1)) == 0.0
    assert interval == (0.0, 1.0)
    assert meta["time_span"] == [0.0, 2.0]


def test_cli_sig_interval_and_stdin(files, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(AXIS_CSV))
    status, out, _ = run(["sig", "--interval", "0", "0.5"], capsys)
    assert status == 0
    x = parse_tensor_json(out)[0]
    np.testing.assert_allclose(x.level(1), [1.0, 0.0])


def test_cli_dist_and_logsig(files, capsys):
    f = files("loop.csv", LOOP_CSV)
    status, out, _ = run(["dist", "--depth", "3", f, f], capsys)
    assert status == 0 and float(out) == 0.0
    status, out, _ = run(["logsig", f], capsys)
    assert pair(parse_tensor_json(out)[0], (1, 2)) == pytest.approx(1.0, abs=1e-12)


def test_cli_levy_young_holder(files, capsys):
    loop = files("loop.csv", LOOP_CSV)
    status, out, _ = run(["levy", loop], capsys)
    assert status == 0
    assert json.loads(out)["levy_area"][0][1] == pytest.approx(1.0, abs=1e-12)
    t = np.linspace(0, 1, 11)
    lin = files("lin.csv", "t,x1\n" + "".join(f"{float(v)!r},{float(v)!r}\n" for v in t))
    status, out, err = run(["young", lin, lin, "--refine", "10000"], capsys)
    assert status == 0 and json.loads(out)["value"][0] == pytest.approx(0.5, abs=1e-4)
    assert "unchecked" in err
    status, _, _ = run(["young", lin, lin, "--strict", "--alpha", "0.3", "--beta", "0.3"], capsys)
    assert status == 2
    status, out, _ = run(["holder", "--alpha", "0.5", "--depth", "3", loop], capsys)
    obj = json.loads(out)
    assert status == 0 and len(obj["graded"]) == 3
    assert obj["rho_bounds"][0] <= obj["rho_holder"] + 1e-12 <= obj["rho_bounds"][1] + 2e-12


def test_cli_checks(files, capsys, rng):
    f = files("p.csv", _csv_of(random_path(rng, 2, 8)))
    assert run(["check-chen", "--depth", "4", f], capsys)[0] == 0
    assert run(["check-shuffle", "--depth", "3", f], capsys)[0] == 0
    bad = files("bad.json", '{"d":2,"depth":2,"interval":[0,1],"levels":[[1],[0,0],[0,1,0,0]]}')
    status, out, err = run(["check-shuffle", bad], capsys)
    assert status == 1
    assert json.loads(out)["worst"] == {"u": [1], "v": [2], "residual": 1.0}
    times = np.linspace(0, 1, 4)
    mf = MultiplicativeFunctional.from_signature_path(signature_path(random_path(rng, 2, 3), 2))
    table = mf.table.copy()
    table[0, 2, 1] += 1.0
    g = files("f.json", write_functional_json(MultiplicativeFunctional(2, 2, times, table)))
    status, out, err = run(["check-chen", g], capsys)
    assert status == 1 and "FAIL" in err
    assert json.loads(out)["worst"]["indices"][0] == 0


def test_cli_depth_for_alpha(capsys):
    assert run(["depth-for-alpha", "--alpha", "0.4"], capsys)[1].strip() == "2"
    assert run(["depth-for-alpha"], capsys)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["sig", "missing.csv"],
        ["bogus"],
        ["sig", "--depth", "0", "x"],
        ["dist", "only_one.csv"],
        ["holder", "--alpha", "1.5", "x"],
    ],
)
def test_cli_input_errors(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "x").write_text(AXIS_CSV)
    (tmp_path / "only_one.csv").write_text(AXIS_CSV)
    status, out, err = run(argv, capsys)
    assert status == 2
    assert out == ""


def test_cli_corrupted_csv_exit_2(files, capsys):
    f = files("bad.csv", "t,x1,x2\n0,0,0\n1,oops,0\n")
    status, out, err = run(["sig", f], capsys)
    assert status == 2 and out == "" and "row 3, column 2" in err


def test_cli_cap(files, capsys):
    f = files("axis.csv", AXIS_CSV)
    status, _, err = run(["sig", "--depth", "6", "--cap", "100", f], capsys)
    assert status == 2 and "cap" in err


def test_cli_projection_consistency(files, capsys, rng):
    f = files("p.csv", _csv_of(random_path(rng, 3, 6)))
    for n in (2, 3):
        hi = parse_tensor_json(run(["sig", "--depth", str(n), f], capsys)[1])[0]
        lo = parse_tensor_json(run(["sig", "--depth", str(n - 1), f], capsys)[1])[0]
        np.testing.assert_allclose(project(hi, n - 1).flat, lo.flat, atol=1e-12)


def test_cli_roundtrip_dist(files, capsys, rng):
    p = random_path(rng, 2, 5)
    f = files("p.csv", _csv_of(p))
    out = run(["sig", "--depth", "3", f], capsys)[1]
    g = files("p.json", out)
    x = read_tensor_json(g)[0]
    assert rho_metric(x, path_signature(read_csv(f), 3)) <= 1e-12
    status, out, _ = run(["dist", "--depth", "3", f, g], capsys)
    assert status == 0 and float(out) <= 1e-12


def test_dispatch_api():
    cfg = RunConfig(alpha=0.25)
    assert dispatch("depth-for-alpha", cfg, []) == (0, "4", "")
    with pytest.raises(InputError):
        RunConfig(interval=(0.6, 0.2)).validate()


def test_module_entry_point(tmp_path):
    f = tmp_path / "a.csv"
    f.write_text(AXIS_CSV)
    res = subprocess.run([sys.executable, "-m", "roughsig", "sig", str(f)], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["levels"][2] == [0.5, 1, 0, 0.5]
