"""The benchmark corpus: formula files shipped with the package plus seeded random formulas."""

from __future__ import annotations

from importlib import resources

from .oracle import random_formula
from .parser import read_formula_file

RANDOM_COUNT = 500


def random_size(seed: int) -> int:
    return 3 + seed % 10


def corpus_files() -> list:
    """(name, text) for every shipped ``.cpdl`` file, sorted by name."""
    root = resources.files("cpdl") / "corpus"
    out = [(p.name[:-5], p.read_text()) for p in root.iterdir() if p.name.endswith(".cpdl")]
    return sorted(out)


def file_corpus() -> list:
    return [(name, read_formula_file(text)) for name, text in corpus_files()]


def random_corpus(count: int = RANDOM_COUNT, base_seed: int = 0) -> list:
    return [(f"random_{s}", random_formula(s, random_size(s)))
            for s in range(base_seed, base_seed + count)]


def full_corpus(count: int = RANDOM_COUNT, base_seed: int = 0) -> list:
    return file_corpus() + random_corpus(count, base_seed)


def load_corpus_formula(name: str):
    for n, text in corpus_files():
        if n == name:
            return read_formula_file(text)
    raise KeyError(name)
