import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from danilov.cli import main
from golden_cases import cases

GOLDEN = Path(__file__).parent / "golden"
SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name,argv", list(cases()), ids=[n for n, _ in cases()])
def test_golden(capsys, name, argv):
    code, out, _ = run(capsys, *argv)
    assert out.encode() == (GOLDEN / name).read_bytes()


def test_output_is_identical_across_processes():
    argv = [sys.executable, "-m", "danilov", "quiver", "-r", "5", "-a", "2", "--dot"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second == (GOLDEN / "5_2" / "quiver.dot").read_bytes()


def test_check_pass_line(capsys):
    code, out, _ = run(capsys, "check", "-r", "5", "-a", "2")
    assert code == 0
    assert out == "PASS (9 fixed points stable, 36 pairs non-isomorphic)\n"


def test_check_zero_theta_fails(capsys):
    code, out, _ = run(capsys, "check", "-r", "5", "-a", "2", "--theta", "0,0,0,0,0")
    assert code == 1
    assert out.startswith("FAIL")
    assert "strictly-semistable, witness {" in out


def test_check_unstable_theta(capsys):
    code, out, _ = run(capsys, "check", "-r", "5", "-a", "2", "--theta=4,1,-1,-2,-2")
    assert code == 1 and "unstable" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["fan", "-r", "4", "-a", "2"],
        ["fan", "-r", "1", "-a", "0"],
        ["theta", "-r", "5", "-a", "2", "--n", "0,1"],
        ["theta", "-r", "5", "-a", "2", "--n", "a,b,c,d,e"],
        ["check", "-r", "5", "-a", "2", "--theta", "1,0,0,0,0"],
        ["check", "-r", "5", "-a", "2", "--theta", "1,-1"],
        ["verify", "--max-r", "1"],
        ["verify", "--min-r", "9", "--max-r", "5"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("danilov: error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["fan"])
    assert info.value.code == 2


def test_fan_counts(capsys):
    _, out, _ = run(capsys, "fan", "-r", "2", "-a", "1")
    assert out.startswith("fan of 1/2(1,1,1): 4 rays, 3 cones")


def test_svg_is_well_formed(capsys):
    _, out, _ = run(capsys, "fan", "-r", "5", "-a", "3", "--format", "svg")
    root = ET.fromstring(out.split("\n", 1)[1])
    assert root.tag == f"{SVG}svg" and root.get("version") == "1.1"
    assert len(root.findall(f".//{SVG}circle")) == 7
    legend = " ".join(t.text for t in root.findall(f".//{SVG}text[@class='legend']"))
    assert "u1 + u2 + u3" in legend


def test_dot_shape(capsys):
    _, out, _ = run(capsys, "quiver", "-r", "5", "-a", "2", "--dot")
    edges = [line for line in out.splitlines() if "->" in line]
    nodes = [line for line in out.splitlines() if line.strip().rstrip(";").isdigit()]
    assert len(edges) == 15 and len(nodes) == 5
    assert edges[:3] == [
        '  0 -> 1 [label="x_0"];',
        '  0 -> 2 [label="y_0"];',
        '  0 -> 3 [label="z_0"];',
    ]


def test_divisors_output(capsys):
    code, out, _ = run(capsys, "divisors", "-r", "5", "-a", "2")
    assert code == 0
    assert "tau = [4, 3, 0, 2, 1]" in out
    assert "R_1 = D_X - E1 check passed" in out
    assert "X_0 = [1, 0, 0, 0, 0, 0, 0]" in out


def test_theta_outputs(capsys):
    _, default, _ = run(capsys, "theta", "-r", "5", "-a", "2")
    _, explicit, _ = run(capsys, "theta", "-r", "5", "-a", "2", "--n", "0,2,1,4,3")
    assert "theta = (-4, -1, 1, 2, 2)" in default
    assert default == explicit
    _, tie, _ = run(capsys, "theta", "-r", "5", "-a", "2", "--n", "0,1,1,3,2")
    assert "boundary" in tie
    _, two, _ = run(capsys, "theta", "-r", "2", "-a", "1")
    assert "theta = (-1, 1)" in two


def test_verify_guard(capsys):
    code, out, _ = run(capsys, "verify", "--min-r", "20", "--max-r", "21", "--suite", "stability")
    assert code == 0
    assert "skipped above r = 20" in out
    assert "stability: 3 passed, 0 failed, 3 skipped" in out


def test_verify_jobs_are_deterministic(capsys):
    _, serial, _ = run(capsys, "verify", "--max-r", "7", "--all-a", "--suite", "divisor")
    _, parallel, _ = run(capsys, "verify", "--max-r", "7", "--all-a", "--suite", "divisor", "--jobs", "2")
    assert serial == parallel
