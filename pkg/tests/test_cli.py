import io
import json
import subprocess
import sys

import pytest

from greenops.cli import run_command

BP1 = "GBP(d^2, BC(e(1), e(1).d, e(0).d), ES(1))"
BP2 = "GBP(d^2-1, BC(e(1), e(1).d, e(0).d), ES(x))"
P2 = "GBP(d^4-d^2, BC(e(0).d, e(0).d^3, e(1), e(1).d, e(1).d^3), ES(x))"


def run(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run_command(list(argv), out, err)
    return code, out.getvalue().strip(), err.getvalue().strip()


def test_green():
    assert run("green", BP1) == (0, "x.A - A.x + (-1/2*x^2 - 1/2).E[1].A + E[1].A.x", "")


def test_compat():
    code, out, _ = run("compat", "BP(d^2, BC(e(1), e(1).d, e(0).d))")
    assert (code, out) == (0, "BC(E[1].A)")
    code, out, _ = run("compat", "BP(d^2-1, BC(e(1), e(1).d, e(0).d))")
    assert (code, out) == (0, "BC(E[1].A.exp(-x) + E[1].A.exp(x))")


def test_compose_and_reverse_order_law():
    code, out, _ = run("compose", BP2, BP1)
    assert code == 0
    assert out == "GBP(D^4 - D^2, BC(E[0].D, E[0].D^3, E[1], E[1].D, E[1].D^3), ES(x))"
    assert run("check-rol", BP1, BP2)[:2] == (0, "true")
    assert run("check-rol", BP2, BP1)[:2] == (0, "false")


def test_factor_commands():
    code, out, _ = run("factor", P2, "--t1", "d^2-1", "--t2", "d^2")
    assert code == 0
    assert out.splitlines() == [
        "GBP(D^2 - 1, BC(E[0].D, E[1].D, E[1].A), ES(x))",
        "BP(D^2, BC(E[0].D, E[1]))",
    ]
    code, out, _ = run("factor", P2)
    assert code == 0 and [line.split(",")[0] for line in out.splitlines()] == [
        "GBP(D + 1",
        "BP(D",
        "BP(D",
        "BP(D - 1",
    ]
    left_input = "BP(d^4-d^2, BC(e(0).d, e(0).d^3, e(1), e(1).d, e(1).d^3))"
    code, out, _ = run("factor-left", left_input, "--t1", "d^2-1", "--t2", "d^2", "--pool", "exp(x)")
    assert code == 0
    assert out.splitlines() == [
        "BP(D^2 - 1, BC(E[0].D, E[1].D))",
        "GBP(D^2, BC(E[0].D, E[1], E[1].D), ES(exp(x)))",
    ]


def test_factor_with_supplied_fundamental_system():
    T = "d^2-(exp(x)+exp(2*x)-1)/(exp(x)-1).d+exp(2*x)/(exp(x)-1)"
    code, out, _ = run(
        "factor", f"GBP({T}, BC(e(1), e(2), e(3)), ES(1))",
        "--t1", "d-exp(2*x)/(exp(x)-1)", "--t2", "d-1", "--fundsys2", "exp(x)",
    )
    assert code == 0
    assert out.splitlines()[1] == "BP(D - 1, BC(E[1]), FS(exp(x)))"


def test_inverse_image_apply_simplify_is_regular():
    # basis (kernel, H(1)); span equal to ES(1, x, x^2)
    assert run("inverse-image", "d^2", "ES(1)")[:2] == (0, "ES(1, x, 1/2*x^2)")
    assert run("inverse-image", "d-1", "ES()", "--fundsys", "exp(x)")[:2] == (0, "ES(exp(x))")
    assert run("apply", "x.a - a.x", "1")[:2] == (0, "1/2*x^2")
    assert run("simplify", "d.a")[:2] == (0, "1")
    assert run("simplify", "a.d")[:2] == (0, "1 - E[0]")
    assert run("is-regular", BP2)[:2] == (0, "true")
    assert run("is-regular", "BP(d^2, BC(e(1), e(1).d, e(0).d))")[:2] == (0, "false")


def test_exit_codes():
    code, _, err = run("green", "BP(d^2, BC(e(1), e(1).d, e(0).d))")
    assert code == 1 and "NotRegular" in err
    code, _, err = run("green", "GBP(d^2, BC(e(1)")
    assert code == 2 and "line 1" in err
    code, _, err = run("green", "BP(d^2)")
    assert code == 2 and "ExprTypeError" in err
    assert run("no-such-command")[0] == 2
    assert run("green")[0] == 2
    code, _, err = run("factor", P2, "--t1", "d^2")
    assert code == 2


def test_stdin(monkeypatch):
    assert run("green", "-", stdin=BP1 + "\n", monkeypatch=monkeypatch)[:2] == (
        0,
        "x.A - A.x + (-1/2*x^2 - 1/2).E[1].A + E[1].A.x",
    )


@pytest.mark.parametrize(
    "argv, consumer",
    [
        (["compose", BP2, BP1], ["green"]),
        (["compat", "BP(d^2, BC(e(1), e(1).d, e(0).d))"], ["simplify"]),
        (["green", BP1], ["simplify"]),
        (["inverse-image", "d^2", "ES(1)"], ["simplify"]),
        (["random-problem", "--seed", "3"], ["green"]),
    ],
)
def test_json_output_is_reingestible(argv, consumer):
    code, out, _ = run(*argv, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert "kind" in data
    code, again, _ = run(*consumer, out, "--format", "json")
    assert code == 0
    if consumer == ["simplify"]:
        assert json.loads(again) == data


def test_json_lists_and_booleans():
    code, out, _ = run("factor", P2, "--t1", "d^2-1", "--t2", "d^2", "--format", "json")
    data = json.loads(out)
    assert data["kind"] == "list" and [item["kind"] for item in data["items"]] == ["problem", "problem"]
    right = json.dumps(data["items"][1])
    left = json.dumps(data["items"][0])
    assert run("compose", left, right)[:2] == (0, "GBP(D^4 - D^2, BC(E[0].D, E[0].D^3, E[1], E[1].D, E[1].D^3), ES(x))")
    assert json.loads(run("check-rol", left, right, "--format", "json")[1]) == {"kind": "boolean", "value": True}
    assert run("green", '{"kind": "nonsense"}')[0] == 2
    assert run("green", "{not json")[0] == 2


def test_random_problem_is_reproducible():
    a = run("random-problem", "--seed", "7")
    b = run("random-problem", "--seed", "7")
    assert a == b and a[0] == 0 and a[1].startswith(("BP(", "GBP("))


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "greenops.cli", "simplify", "d.a"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
