"""Command-line front end: grammar, exit codes, determinism, round-trips."""

import pytest

from topsquares import cli
from topsquares.unstable import validate

GOOD_FILE = """\
# a free module on a degree-2 class, truncated
umodule demo
k 2
maxdeg 8
gen i2 2
gen a 3       # Sq_1 of the bottom class
gen b 4
sq 1 i2 = a
sq 0 i2 = b
sq 1 a = 0
"""


def test_parse_round_trip_of_good_file():
    mod = cli.parse_module_file(GOOD_FILE)
    assert mod.name == "demo" and mod.k == 2 and mod.max_deg == 8
    assert mod.dim(2) == 1 and mod.dim(3) == 1 and mod.dim(4) == 1
    assert validate(mod) == []
    text = cli.render_module_file(mod, "demo")
    again = cli.parse_module_file(text)
    assert again.dims == mod.dims
    assert set(again.action) == set(mod.action)
    for key in mod.action:
        assert again.action[key] == mod.action[key]


@pytest.mark.parametrize(
    "mutation",
    [
        "sq 1 i2 = nosuch",
        "sq 5 i2 = a",        # index out of range for k
        "sq 1 b = a",         # wrong target degree
        "gen i2 2",           # duplicate label (appended)
        "wibble 3",
        "sq 1 i2 a",          # missing '='
    ],
)
def test_parse_errors(mutation):
    with pytest.raises(cli.ModuleFileError):
        cli.parse_module_file(GOOD_FILE + mutation + "\n")


def test_missing_header_is_an_error():
    with pytest.raises(cli.ModuleFileError):
        cli.parse_module_file("gen x 2\n")


def test_adem_command():
    assert cli.run(["adem", "Sq2", "Sq2"]) == cli.CommandResult(0, "Sq3 Sq1\n")
    assert cli.run(["adem", "Sq1", "Sq1"]) == cli.CommandResult(0, "0\n")
    assert cli.run(["adem", "bogus"]).code == 2


def test_lambda_basis_command_golden():
    res = cli.run(["lambda-basis", "--m", "2", "--k", "2"])
    assert res.code == 0
    assert res.stdout.splitlines() == ["1", "l0", "l1", "l1 l2"]


def test_ext_sphere_command_deterministic():
    args = ["ext", "sphere", "--m", "2", "--k", "2", "--smax", "2", "--amax", "8"]
    a, b = cli.run(args), cli.run(args)
    assert a.code == 0 and a.stdout == b.stdout
    assert "2\t7\t1" in a.stdout
    assert a.stdout.startswith("# window s<=2 a<=8\n")


def test_ext_module_both_routes(tmp_path):
    p = tmp_path / "demo.umod"
    p.write_text(GOOD_FILE)
    res = cli.run(["ext", "module", str(p), "--via", "both"])
    assert res.code == 0
    assert "# tables agree" in res.stdout


def test_free_basis_round_trip(tmp_path):
    res = cli.run(["free-basis", "--n", "2", "--k", "2", "--maxdeg", "14"])
    assert res.code == 0
    p = tmp_path / "f.umod"
    p.write_text(res.stdout)
    t1 = cli.run(["ext", "module", str(p), "--via", "lambda"])
    t2 = cli.run(["ext", "module", str(p), "--via", "resolution"])
    assert t1.code == 0 and t2.code == 0
    body1 = [l for l in t1.stdout.splitlines() if not l.startswith("#")]
    body2 = [l for l in t2.stdout.splitlines() if not l.startswith("#")]
    assert body1 == body2 == ["s\ta\tdim", "0\t2\t1"]


def test_invalid_module_exit_code(tmp_path):
    bad = (
        "umodule viol\nk 2\nmaxdeg 10\n"
        "gen x 2\ngen y 4\ngen z 7\n"
        "sq 0 x = y\nsq 1 y = z\n"
    )
    p = tmp_path / "bad.umod"
    p.write_text(bad)
    res = cli.run(["ext", "module", str(p)])
    assert res.code == 1
    assert "invalid" in res.stdout


def test_parse_error_exit_code(tmp_path):
    p = tmp_path / "syntax.umod"
    p.write_text("umodule x\nk 2\nmaxdeg 4\ngen a 1\nsq 1 a = b\n")
    res = cli.run(["ext", "module", str(p)])
    assert res.code == 2


def test_resolve_command(tmp_path):
    p = tmp_path / "s1.umod"
    p.write_text("umodule s1\nk 3\nmaxdeg 8\ngen i 1\n")
    res = cli.run(["resolve", str(p), "--max-s", "3"])
    assert res.code == 0
    body = [l for l in res.stdout.splitlines() if not l.startswith("#")]
    assert body == ["s\ta\tgens", "0\t1\t1", "1\t2\t1", "2\t3\t1", "3\t4\t1"]


def test_verify_commands():
    assert cli.run(["verify", "d2", "--m", "3", "--k", "2"]).code == 0
    assert cli.run(["verify", "ehp", "--m", "2", "--k", "2"]).code == 0
    assert cli.run(["verify", "lower-adem", "--nmax", "4"]).code == 0
    assert cli.run(["verify", "stabilization", "--m", "2", "--n", "2", "--kmax", "3"]).code == 0


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("LAMBDAK_THREADS", "zero")
    assert cli.run(["adem", "Sq1", "Sq1"]).code == 2
    monkeypatch.setenv("LAMBDAK_THREADS", "2")
    assert cli.run(["adem", "Sq1", "Sq1"]).code == 0


def test_unknown_command_usage_error():
    assert cli.run([]).code == 2
    assert cli.run(["frobnicate"]).code == 2
