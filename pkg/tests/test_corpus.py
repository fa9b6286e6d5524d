from cpdl.corpus import (
    corpus_files, file_corpus, full_corpus, load_corpus_formula, random_corpus, random_size,
)
from cpdl.oracle import random_formula
from cpdl.parser import parse_formula
from cpdl.syntax import programs, size, variables


def test_shipped_files_parse():
    names = [n for n, _ in corpus_files()]
    assert "toy_example" in names and len(names) == len(set(names))
    for name, f in file_corpus():
        assert f is load_corpus_formula(name)


def test_corpus_families_present():
    names = {n for n, _ in corpus_files()}
    for stem in ("star_unfold_a", "box_star_seq", "seq_axiom", "choice_axiom", "test_axiom",
                 "converse_forward", "converse_backward", "induction"):
        assert stem in names
    assert any(n.startswith("family_conv_") for n in names)
    assert any(n.startswith("family_depth_") for n in names)


def test_toy_file():
    assert load_corpus_formula("toy_example") is parse_formula("<a><a*>[a^]p")


def test_random_part():
    items = random_corpus()
    assert len(items) == 500
    for name, f in items:
        seed = int(name.split("_")[1])
        assert f is random_formula(seed, random_size(seed))
        assert size(f) <= 12
        assert len(programs(f)) <= 2 and len(variables(f)) <= 2


def test_full_corpus_is_files_then_random():
    items = full_corpus()
    assert len(items) == len(corpus_files()) + 500
    assert items[-1][0] == "random_499"
