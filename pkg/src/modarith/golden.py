"""Access to the bundled corpus of golden proof scripts."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .parser import Script, parse_script

GOLDEN_SCRIPTS = ("even4.prf", "even4_axiomatic.prf", "arithmetic.prf", "pure.prf")


def corpus_dir() -> Path:
    return Path(str(resources.files("modarith") / "corpus"))


def corpus_path(name: str) -> Path:
    path = corpus_dir() / name
    if not path.exists():
        raise FileNotFoundError(f"no corpus file {name!r}")
    return path


def load_script(name: str) -> Script:
    path = corpus_path(name)
    return parse_script(path.read_text(encoding="utf-8"), base_dir=path.parent)


def golden_theorems():
    """``(script, theorem)`` pairs for every golden theorem, in file order."""
    out = []
    for name in GOLDEN_SCRIPTS:
        script = load_script(name)
        out.extend((script, td) for td in script.theorems)
    return out
