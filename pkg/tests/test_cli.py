import json
import subprocess
import sys

import pytest

from compound_bounds.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_walk_exact_output(capsys):
    code, out, _ = run(capsys, "walk", "--lengths", "[5,1,2]")
    assert code == 0
    assert out == '{"interval":{"lo":2.0,"hi":8.0},"polygon":false}\n'


def test_walk_target_and_resultant(capsys):
    code, out, _ = run(capsys, "walk", "--lengths", "[1,1,1]", "--target", "1.5")
    assert code == 0
    walk = json.loads(out)["walk"]
    code, out, _ = run(capsys, "walk", "--walk", json.dumps(walk))
    assert code == 0
    assert json.loads(out)["resultant"]["magnitude"] == pytest.approx(1.5, abs=1e-12)


def test_velocity_bounds(capsys):
    code, out, _ = run(capsys, "velocity", "--speeds", "[0.5,0.5,0.5]")
    data = json.loads(out)
    assert code == 0
    assert data["interval"]["lo"] == 0.0
    assert data["interval"]["hi"] == pytest.approx(13 / 14, abs=1e-15)
    assert data["explicit_upper"] == pytest.approx(13 / 14, abs=1e-15)


def test_velocity_collinear_signed(capsys):
    code, out, _ = run(capsys, "velocity", "--speeds", "[0.9,-0.5,-0.5]", "--collinear")
    assert code == 0
    assert json.loads(out)["speed"] == pytest.approx(5 / 14, abs=1e-15)


def test_velocity_target_angles(capsys):
    code, out, _ = run(capsys, "velocity", "--speeds", "[0.5,0.5]", "--target", "0")
    assert json.loads(out)["angles"] == pytest.approx([3.141592653589793], abs=1e-7)


def test_barriers_side_by_side(capsys):
    code, out, _ = run(capsys, "barriers", "--T", "[0.8,0.8,0.8]")
    data = json.loads(out)
    assert code == 0
    assert data["closed_form"]["T_lower"] == pytest.approx(0.2, abs=1e-15)
    assert data["T"]["lo"] == pytest.approx(0.2, abs=1e-15)
    assert data["R"]["hi"] == pytest.approx(0.8, abs=1e-15)


def test_barriers_two_and_composed(capsys):
    code, out, _ = run(capsys, "barriers", "--T", "[0.5,0.5]")
    assert json.loads(out)["closed_form"]["T"]["lo"] == pytest.approx(1 / 9, abs=1e-15)
    payload = '[{"theta":0.5,"phi":0,"psi":0},{"theta":0.25,"phi":1,"psi":2}]'
    code, out, _ = run(capsys, "barriers", "--barriers", payload)
    data = json.loads(out)
    assert code == 0
    assert data["T"]["lo"] <= data["composed"]["T"] <= data["T"]["hi"]


def test_barriers_theta_and_target(capsys):
    code, out, _ = run(capsys, "barriers", "--theta", "[0.5,0.5]", "--target", "0.3")
    data = json.loads(out)
    assert data["theta"] == {"lo": 0.0, "hi": 1.0}
    assert len(data["phases"]) == 2


def test_excitation(capsys):
    code, out, _ = run(capsys, "excitation", "--N", "[1,1]")
    data = json.loads(out)
    assert code == 0
    assert (data["interval"]["lo"], data["interval"]["hi"]) == pytest.approx((0.0, 8.0), abs=1e-13)
    code, out, _ = run(capsys, "excitation", "--N", "[1,1,1]")
    assert json.loads(out)["closed_form"]["upper"] == pytest.approx(49.0, abs=1e-12)
    code, out, _ = run(capsys, "excitation", "--theta", "[0.8813735870195430]")
    assert json.loads(out)["interval"]["hi"] == pytest.approx(1.0, abs=1e-14)


def test_verify_report(capsys):
    code, out, _ = run(capsys, "verify", "--domain", "walk", "--lengths", "[5,1,2]",
                       "--samples", "200")
    data = json.loads(out)
    assert code == 0
    assert data["check"] == "containment" and data["passed"] is True


@pytest.mark.parametrize("check", ["saturation", "cross"])
def test_verify_other_checks(capsys, check):
    code, out, _ = run(capsys, "verify", "--domain", "barriers", "--T", "[0.5,0.5,0.5]",
                       "--check", check, "--samples", "100")
    assert code == 0
    assert json.loads(out)["passed"]


def test_verify_failure_exit_code(capsys):
    # a negative tolerance makes every sample a violation
    code, out, _ = run(capsys, "verify", "--domain", "walk", "--lengths", "[1,2]",
                       "--samples", "10", "--tol", "-1")
    assert code == 4
    assert json.loads(out)["passed"] is False


@pytest.mark.parametrize(
    "argv",
    [["walk", "--lengths", "[5,1"], ["walk"], ["verify", "--domain", "gravity", "--lengths", "[1]"],
     ["barriers", "--T", "[0.5]", "--R", "[0.5]"], ["excitation", "--N", '["a"]']],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nosuch"])
    assert info.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [["walk", "--lengths", "[-1,2]"], ["velocity", "--speeds", "[1.0]"], ["barriers", "--T", "[0]"],
     ["walk", "--lengths", "[5,1,2]", "--target", "1"]],
)
def test_domain_errors_exit_3(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3
    assert "DomainError" in err


def test_json_roundtrip_idempotent(capsys):
    for argv in (["velocity", "--speeds", "[0.1,0.7,0.3]"], ["barriers", "--T", "[0.3,0.6,0.9,0.2]"]):
        _, out, _ = run(capsys, *argv)
        text = out.strip()
        assert json.dumps(json.loads(text), separators=(",", ":")) == text


def test_table_output(capsys):
    code, out, _ = run(capsys, "walk", "--lengths", "[5,1,2]", "--table")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["interval.lo", "2.0"]
    assert lines[2].split() == ["polygon", "false"]


def test_payload_from_file(capsys, tmp_path):
    path = tmp_path / "lengths.json"
    path.write_text("[5, 1, 2]")
    for ref in (f"@{path}", str(path)):
        code, out, _ = run(capsys, "walk", "--lengths", ref)
        assert code == 0
        assert json.loads(out)["interval"] == {"lo": 2.0, "hi": 8.0}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "compound_bounds", "excitation", "--N", "[1,1]"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["interval"]["hi"] == pytest.approx(8.0)
