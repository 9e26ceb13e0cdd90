import json
import shutil
import subprocess

import pytest

from q2bkss.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_e2_json(capsys):
    code, out, _ = run(capsys, "e2", "--t-min", "-8", "--t-max", "8", "--trunc", "8", "--format", "json")
    assert code == 0
    data = json.loads(out)
    zero = [e for e in data["filtration"] if (e["s"], e["t"]) == (0, 0)][0]
    assert [s["order"] for s in zero["summands"]] == ["free"]
    assert data["crossCheck"]["ok"]
    assert data["certificate"]["filtration"]


def test_e2_deterministic(capsys):
    args = ("e2", "--t-min", "-4", "--t-max", "6", "--trunc", "8", "--format", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_e2_svg(capsys, tmp_path):
    target = tmp_path / "chart.svg"
    code, out, _ = run(capsys, "e2", "--t-min", "-4", "--t-max", "8", "--trunc", "8", "--format", "svg", "--out", str(target))
    assert code == 0 and out == ""
    svg = target.read_text()
    assert svg.startswith("<?xml") and "<rect" in svg and "<circle" in svg


def test_chart_command(capsys):
    code, out, _ = run(capsys, "chart", "--t-min", "0", "--t-max", "6", "--trunc", "8")
    assert code == 0 and "</svg>" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("e2", "--t-min", "5", "--t-max", "4"),
        ("e2", "--trunc", "4"),
        ("resolve-u", "--m", "12"),
        ("resolve-u",),
        ("delta", "--eps", "2", "--m", "1"),
        ("verify", "--suite", "nope"),
        ("bogus",),
        ("e2", "--format", "xml"),
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_resolve_u_precondition_from_cli(capsys):
    code, _, err = run(capsys, "resolve-u", "--m", "1")
    assert code == 2 and "13 mod 27" in err


def test_env_truncation(capsys, monkeypatch):
    monkeypatch.setenv("Q2BKSS_TRUNC", "5")
    code, _, _ = run(capsys, "e2", "--t-min", "0", "--t-max", "2")
    assert code == 2  # below the minimum, taken from the environment
    code, _, _ = run(capsys, "e2", "--t-min", "0", "--t-max", "2", "--trunc", "8")
    assert code == 0
    monkeypatch.setenv("Q2BKSS_TRUNC", "x")
    assert run(capsys, "e2")[0] == 2


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "arith")
    assert code == 0 and out.count("[PASS]") == 2
    code, out, _ = run(capsys, "verify", "--suite", "tmf", "--format", "json")
    assert code == 0 and json.loads(out)["ok"]


def test_verify_failure_exit(capsys, monkeypatch):
    from q2bkss import verify

    monkeypatch.setitem(verify.SUITES, "arith", lambda: [verify.Check("arith", "forced", False, "x")])
    code, out, _ = run(capsys, "verify", "--suite", "arith")
    assert code == 1 and "[FAIL]" in out


def test_unstable_exit(capsys, monkeypatch):
    from q2bkss import spectral
    from q2bkss.bring import NonStabilizationError

    def boom(*a, **k):
        raise NonStabilizationError("grew")

    monkeypatch.setattr(spectral, "e2_direct", boom)
    code, _, err = run(capsys, "e2", "--t-min", "0", "--t-max", "2", "--trunc", "8")
    assert code == 3 and "grew" in err


def test_delta_views(capsys):
    code, out, _ = run(capsys, "delta", "--eps", "0", "--m", "3", "--show", "matrix", "--trunc", "8")
    assert code == 0
    lines = out.splitlines()
    header = lines[1].split("\t")
    col = header.index("C_1^3")
    # the unit column at v = ell is zero
    assert all(line.split("\t")[col] == "0" for line in lines[2:])
    code, out, _ = run(capsys, "delta", "--eps", "0", "--m", "3", "--show", "leading", "--trunc", "8")
    assert "v=1: predicted zero, observed None" in out
    code, out, _ = run(capsys, "delta", "--eps", "1", "--m", "2", "--show", "cokernel", "--trunc", "10")
    assert code == 0 and "closed form" in out
    code, out, _ = run(capsys, "delta", "--eps", "0", "--m", "0", "--trunc", "8", "--format", "json")
    assert json.loads(out)["kernel"]["summands"][0]["order"] == "free"


def test_delta_case_five_kernel(capsys):
    code, out, _ = run(capsys, "delta", "--eps", "1", "--m", "13", "--show", "kernel", "--trunc", "12")
    assert code == 0 and "K''" in out and "U = (Z/3)^3 + Z/81" in out


def test_resolve_u_json(capsys):
    code, out, _ = run(capsys, "resolve-u", "--m", "13", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert sorted(s["order"] for s in data["U"]["summands"]) == [3, 3, 3, 81]


def test_console_script():
    exe = shutil.which("q2bkss")
    if exe is None:
        pytest.skip("console script not installed")
    res = subprocess.run([exe, "verify", "--suite", "arith"], capture_output=True, text=True)
    assert res.returncode == 0
