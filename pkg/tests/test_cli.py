import re
import subprocess
import sys

import pytest

from modarith.cli import Invocation, UsageError, invocation_from_args, main, run
from modarith.golden import corpus_path
from modarith.normalizer import ReductionStep, replay
from modarith.parser import parse_proof, parse_script
from modarith.proofs import proof_alpha_eq
from modarith.theories import load_theory

EVEN4 = str(corpus_path("even4.prf"))


def cli(*args, **kw):
    return run(invocation_from_args(list(args)))


def test_check_golden_file():
    out = cli("check", EVEN4, "--theory", "ha-mod")
    assert out.code == 0
    assert "even4" in out.text and "ok" in out.text


def test_congruent_reports_congruent():
    out = cli("congruent", "2*2 = 4", "4 = 4", "--theory", "ha-mod")
    assert (out.code, out.text) == (0, "congruent")
    out = cli("congruent", "0 = 0", "0 = S(0)", "--theory", "ha-mod")
    assert (out.code, out.text) == (1, "not congruent")


def test_malformed_input_exits_2(tmp_path):
    bad = tmp_path / "garbage.prf"
    bad.write_text("theorem oops : => := .\n")
    out = cli("check", str(bad))
    assert out.code == 2 and "1:" in out.text
    assert cli("check", str(tmp_path / "missing.prf")).code == 2
    assert cli("congruent", "0 = ", "0 = 0").code == 2


def test_failed_check_exits_1(tmp_path):
    f = tmp_path / "wrong.prf"
    f.write_text("theory ha-mod.\ntheorem t : 0 = 1 := \\p:kappa. \\a:(0 in p). a.\n")
    out = cli("check", str(f))
    assert out.code == 1 and "fail at root" in out.text


def test_undecided_exits_3(tmp_path):
    thy = tmp_path / "loop.thy"
    thy.write_text(
        "theory loop.\nsort iota.\npredicate A.\npredicate C.\n"
        "prop-rule A --> A => A.\nprop-rule C --> C => C.\n"
    )
    prf = tmp_path / "loop.prf"
    prf.write_text('theory "loop.thy".\ntheorem t : A => C := \\a:A. a.\n')
    out = cli("check", str(prf), "--fuel", "20")
    assert out.code == 3 and "undecided" in out.text


def test_normalize_trace_replays():
    path = corpus_path("pure.prf")
    out = cli("normalize", str(path), "--trace", "--theorem", "cut_example")
    assert out.code == 0
    steps = []
    for line in out.text.splitlines():
        m = re.match(r"\s+\d+\. (\S+) at root((?:\.\d+)*)$", line)
        if m:
            path_ = tuple(int(i) for i in m.group(2).split(".")[1:])
            steps.append(ReductionStep(path_, m.group(1)))
    assert steps
    script = parse_script(path.read_text(), base_dir=path.parent)
    td = next(t for t in script.theorems if t.name == "cut_example")
    final = out.text.splitlines()[-1].split("normal form: ", 1)[1]
    assert proof_alpha_eq(replay(td.proof, steps), parse_proof(final, load_theory("pure")))


def test_step_budget_exhaustion_exits_3(tmp_path):
    thy = tmp_path / "crabbe.thy"
    thy.write_text("sort iota.\npredicate A.\npredicate B.\nprop-rule A --> B /\\ ~A.\n")
    prf = tmp_path / "crabbe.prf"
    prf.write_text(
        'theory "crabbe.thy".\n'
        "theorem nb : ~B := \\b:B. (\\a:A. snd(a) a) <b, \\a:A. snd(a) a>.\n"
    )
    assert cli("check", str(prf)).code == 0
    assert cli("normalize", str(prf), "--steps", "100").code == 3


def test_countermodel_subcommand():
    out = cli("countermodel", "A \\/ ~A", "--max-size", "4")
    assert out.code == 1
    assert "order" in out.text and "A = " in out.text
    assert cli("countermodel", "A => A").code == 0


def test_relativize_and_theory_info():
    out = cli("relativize", "forall x. x = x")
    assert out.text == "forall x:iota. N(x) => x = x"
    info = cli("theory-info", "--theory", "t")
    assert info.code == 0 and info.text.count("prop-rule") == 2


def test_t_check_sample():
    out = cli("t-check", str(corpus_path("sample.t")))
    assert out.code == 0
    assert "simulated" in out.text


def test_environment_defaults(monkeypatch):
    monkeypatch.setenv("MODARITH_FUEL", "7")
    monkeypatch.setenv("MODARITH_MAX_SIZE", "3")
    inv = invocation_from_args(["congruent", "0 = 0", "0 = 0"])
    assert inv.fuel == 7 and inv.max_size == 3
    assert invocation_from_args(["congruent", "a", "b", "--fuel", "9"]).fuel == 9
    monkeypatch.setenv("MODARITH_STEPS", "lots")
    with pytest.raises(UsageError):
        invocation_from_args(["check", EVEN4])


def test_invocation_validates_budgets():
    with pytest.raises(UsageError):
        Invocation("check", fuel=0)
    with pytest.raises(UsageError):
        Invocation("prove")


def test_output_is_deterministic_and_jobs_agree():
    path = str(corpus_path("pure.prf"))
    a = cli("check", path)
    b = cli("check", path, "--jobs", "4")
    assert a == b


def test_main_entry_point(capsys):
    assert main(["congruent", "2*2 = 4", "4 = 4", "--theory", "ha-mod"]) == 0
    assert capsys.readouterr().out.strip() == "congruent"
    assert main(["no-such-command"]) == 2


def test_console_script_runs():
    r = subprocess.run(
        [sys.executable, "-m", "modarith.cli", "check", EVEN4, "--theory", "ha-mod"],
        capture_output=True, text=True,
    )
    assert r.returncode == 0
