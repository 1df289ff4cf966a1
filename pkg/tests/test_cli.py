import io
import subprocess
import sys

import pytest

from ensconce.cli import main

GOLDENS = [
    (["contract", "-b", "{two}", "-f", "p"], "q\n", 0),
    (["check", "-b", "{conj}", "--postulate", "recovery"],
     "recovery: FAIL α=p — p & q ∈ K is not in (K ÷ α) + α = Cn(p)\n", 1),
    (["entrench", "-b", "{two}", "--compare", "p", "q"], "<\n", 0),
]


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {"two": "0: p\n1: q\n", "conj": "0: p & q\n",
                       "bad": "0: p & q\n1: p\n1: q\n",
                       "taut": "0: p | !p\n1: p\n",
                       "diamond": "atoms p q\n0: p\n0: q\n1: p | q\n",
                       "four": "atoms p q r s\n0: p\n1: q\n",
                       "five": "atoms a b c d e\n0: a\n"}.items():
        path = tmp_path / f"{name}.ens"
        path.write_text(text, encoding="utf-8")
        paths[name] = str(path)
    return paths


def run(argv, files):
    out, err = io.StringIO(), io.StringIO()
    code = main([a.format(**files) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv,expected,code", GOLDENS)
def test_goldens(argv, expected, code, files):
    assert run(argv, files)[:2] == (code, expected)


@pytest.mark.parametrize("argv,expected,code", GOLDENS)
def test_goldens_as_subprocess(argv, expected, code, files):
    proc = subprocess.run([sys.executable, "-m", "ensconce"] + [a.format(**files) for a in argv],
                          capture_output=True)
    assert proc.returncode == code
    assert proc.stdout == expected.encode("utf-8")
    assert proc.stderr == b""


def test_withdraw_with_members(files):
    code, out, _ = run(["withdraw", "-b", "{two}", "-f", "p", "--member", "q",
                        "--member", "p", "--member", "p | !q"], files)
    assert code == 0
    assert out == "q\nMEMBER q\nNON-MEMBER p\nNON-MEMBER p | !q\n"


def test_withdraw_tautology_keeps_base(files):
    assert run(["withdraw", "-b", "{diamond}", "-f", "p -> p"], files)[1] == "p\nq\np | q\n"


def test_entrench_other_outcomes(files):
    assert run(["entrench", "-b", "{two}", "--compare", "q", "p"], files)[1] == ">\n"
    assert run(["entrench", "-b", "{two}", "--compare", "p", "p & q"], files)[1] == "=\n"


def test_check_suite(files):
    code, out, _ = run(["check", "-b", "{diamond}", "--suite", "bounded-brutal-base"], files)
    assert code == 0
    assert out.splitlines()[0] == "success: PASS" and len(out.splitlines()) == 8


def test_check_family_and_records(files):
    code, out, _ = run(["check", "-b", "{conj}", "--postulate", "recovery",
                        "--family", "gardenfors", "--records"], files)
    assert (code, out) == (0, "postulate: recovery\nstatus: PASS\n")
    code, out, _ = run(["check", "-b", "{two}", "--suite", "entrenchment", "--records"], files)
    assert out.count("status: PASS") == 5 and "\n\npostulate: EE2" in out


def test_roundtrip(files):
    code, out, _ = run(["roundtrip", "-b", "{diamond}"], files)
    assert code == 0
    assert out == ("thm1-roundtrip: PASS\nthm2-bridge: PASS\n"
                   "thm3-closure: PASS\nthm4-roundtrip: PASS\n")


def test_search(files):
    code, out, _ = run(["search", "--postulate", "recovery", "--seed", "1",
                        "--budget", "100", "--atoms", "2"], files)
    assert code == 1
    assert out.startswith("atoms p q\n") and "recovery: FAIL" in out
    again = run(["search", "--postulate", "recovery", "--seed", "1",
                 "--budget", "100", "--atoms", "2"], files)
    assert again[1] == out
    assert run(["search", "--postulate", "success", "--seed", "1", "--budget", "20",
                "--atoms", "2"], files)[:2] == (0, "none found\n")


def test_validate(files):
    assert run(["validate", "-b", "{two}"], files)[:2] == (0, "ok\n")
    code, out, _ = run(["validate", "-b", "{bad}"], files)
    assert code == 1 and out.startswith("(⪯1): ")
    code, out, _ = run(["validate", "-b", "{taut}"], files)
    assert code == 1 and out.startswith("(⪯2): ")


def test_lift_tautologies(files):
    assert run(["contract", "-b", "{taut}", "-f", "p"], files)[0] == 2
    assert run(["contract", "-b", "{taut}", "-f", "p", "--lift-tautologies"],
               files)[:2] == (0, "p | !p\n")
    assert run(["validate", "-b", "{taut}", "--lift-tautologies"], files)[:2] == (0, "ok\n")


@pytest.mark.parametrize("argv", [
    ["contract", "-b", "{bad}", "-f", "p"],
    ["contract", "-b", "{two}", "-f", "p &"],
    ["contract", "-b", "{two}", "-f", "s"],
    ["contract", "-b", "/nonexistent/x.ens", "-f", "p"],
    ["frobnicate"],
    ["contract", "-b", "{two}"],
    ["search", "--postulate", "recovery", "--seed", "1", "--budget", "0", "--atoms", "2"],
    ["search", "--postulate", "recovery", "--seed", "1", "--budget", "5", "--atoms", "5"],
])
def test_bad_input(argv, files):
    code, out, err = run(argv, files)
    assert code == 2 and out == ""


def test_four_atoms(files):
    assert run(["contract", "-b", "{four}", "-f", "p"], files)[:2] == (0, "q\n")
    assert run(["entrench", "-b", "{four}", "--compare", "p", "q"], files)[:2] == (0, "<\n")
    code, out, err = run(["roundtrip", "-b", "{four}"], files)
    assert code == 2 and "too large" in err
    assert run(["validate", "-b", "{five}"], files)[0] == 2


def test_diagnostics_on_stderr(files):
    code, out, err = run(["contract", "-b", "{two}", "-f", "p &"], files)
    assert err.startswith("ensconce: error: bad formula 'p &'")


def test_help_exits_zero(files, capsys):
    assert main(["--help"]) == 0
    assert "contract" in capsys.readouterr().out
