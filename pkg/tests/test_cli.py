import json
import subprocess
import sys

import pytest

from varform.cli import main, run_command


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


@pytest.mark.parametrize("argv,code", [
    (["helmholtz", "y'' + y^2"], 0),
    (["helmholtz", "y'"], 1),
    (["helmholtz", "1/0*y"], 2),
    (["helmholtz", "1/y"], 2),
    (["lagrangian", "y''"], 0),
    (["lagrangian", "y*y''"], 1),
    (["total-derivative", "y' + z*y''"], 0),
    (["total-derivative", "z^-1"], 1),
    (["delta", "y*y''"], 0),
    (["self-adjoint", "--op", "0; 0; 1"], 0),
    (["self-adjoint", "--op", "0; 1"], 1),
    (["adjoint", "--op", "0; z"], 0),
    (["action", "--op", "0; 0; 1"], 0),
    (["linearize", "y'^2 - 4*y", "--at", "z^2"], 0),
    (["tangent", "--op", "-1; z+2", "--space", "disc"], 0),
    (["tangent", "--op", "0", "--space", "disc"], 3),
    (["expand", "y'", "--window", "-2:6", "--coeff", "0"], 0),
    (["expand", "y'", "--window", "-2:6", "--coeff", "9"], 3),
    (["expand", "y*y'", "--window", "5:3"], 3),
    (["symplectic", "y*y''", "--window", "-2:10"], 1),
    (["symplectic", "y'' + y^2", "--window", "-2:10"], 0),
    (["el-check", "y*y'", "--window", "-3:12"], 0),
    (["residue", "3/2*z^-1 + 5"], 0),
    (["residue", "z^-3 + O(z^-2)"], 3),
    (["helmholtz"], 2),
    (["no-such-command"], 2),
    (["expand", "y", "--window", "banana"], 2),
])
def test_exit_code_matrix(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_examples(capsys):
    code, js = run_json(capsys, "helmholtz", "y'' + y^2")
    assert (code, js["status"]) == (0, "pass")
    code, js = run_json(capsys, "lagrangian", "y''")
    assert js["payload"] == {"lagrangian": "1/2*y*y''", "verified": True}
    code, js = run_json(capsys, "symplectic", "y*y''", "--window", "-2:10")
    assert code == 1 and js["status"] == "fail"
    v = js["payload"]["violation"]
    assert v["lhs"] != v["rhs"] and isinstance(v["i"], int)


def test_lagrangian_force(capsys):
    _, js = run_json(capsys, "lagrangian", "y'")
    assert js["payload"]["lagrangian"] is None
    assert js["payload"]["failing_levels"] == [1]
    code, js = run_json(capsys, "lagrangian", "y'", "--force")
    assert code == 1
    assert js["payload"]["lagrangian"] == "1/2*y*y'"
    assert js["payload"]["verified"] is False


def test_linearize_warns_off_solution(capsys):
    code, out, err = run(capsys, "linearize", "y' - 1", "--at", "z^2")
    assert code == 0 and "warning" in err


def test_tangent_from_equation(capsys):
    code, js = run_json(capsys, "tangent", "y'^2 - 4*y", "--at", "z^2", "--space", "disc")
    assert code == 0
    assert (js["payload"]["h0"], js["payload"]["h1"]) == (1, 1)


def test_global_flags_either_side(capsys):
    a = run(capsys, "--format", "json", "delta", "y*y''")[1]
    b = run(capsys, "delta", "y*y''", "--format", "json")[1]
    assert a == b


@pytest.mark.parametrize("argv", [
    ["helmholtz", "y*y''"],
    ["lagrangian", "y'' + y^2"],
    ["delta", "y^3/3 - y'^2/2"],
    ["symplectic", "y*y''", "--window", "-2:10"],
    ["expand", "y'", "--window", "-2:6"],
    ["tangent", "--op", "-1; z", "--space", "disc"],
])
def test_json_and_text_agree(capsys, argv):
    _, js = run_json(capsys, *argv)
    _, text, _ = run(capsys, *argv)
    assert text.splitlines()[0].endswith(js["status"])

    def strings(obj):
        if isinstance(obj, dict):
            for v in obj.values():
                yield from strings(v)
        elif isinstance(obj, list):
            for v in obj:
                yield from strings(v)
        elif isinstance(obj, str):
            yield obj

    for s in strings(js["payload"]):
        assert s in text


def test_file_input(tmp_path, capsys):
    f = tmp_path / "eqs.txt"
    f.write_text("# a comment\ny'' + y^2\n\ny*y''   # not variational\n")
    code, js = run_json(capsys, "helmholtz", "--file", str(f))
    assert code == 1
    results = js["payload"]["results"]
    assert [r["status"] for r in results] == ["pass", "fail"]
    assert [r["input"] for r in results] == ["y'' + y^2", "y*y''"]


def test_missing_file(capsys):
    assert run(capsys, "helmholtz", "--file", "/nonexistent/eqs.txt")[0] == 2


def test_battery_is_seeded():
    a = run_command(["battery", "--count", "2", "--seed", "5"])
    b = run_command(["battery", "--count", "2", "--seed", "5"])
    assert a.status == "pass"
    assert a.payload == b.payload
    c = run_command(["battery", "--count", "2", "--seed", "6"])
    assert c.payload["equations"] != a.payload["equations"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "varform", "residue", "3/2*z^-1 + 5", "--format", "json"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["payload"]["residue"] == "3/2"
