import random
from pathlib import Path

import pytest

from tempograph.relmodel import (Corpus, EntityPairId, PredicateId, RelationInstance, TimeInterval,
                                 load_corpus)

DATA = Path(__file__).parent / "data"
TP = ("organization", "organization")


def pred(name):
    return PredicateId(name, TP)


def random_micro_corpus(rng: random.Random, max_preds=4, max_pairs=3, max_per_cell=5,
                        day_range=(0, 60), p_timex=0.5, p_doc=0.8):
    """Small random corpus with mixed timex / doc-date coverage."""
    preds = [pred(f"p{k}") for k in range(rng.randint(1, max_preds))]
    eps = [EntityPairId(f"a{k}", f"b{k % 2}") for k in range(rng.randint(1, max_pairs))]
    lo, hi = day_range
    insts = []
    for p in preds:
        for ep in eps:
            for _ in range(rng.randint(0, max_per_cell)):
                timexes = []
                if rng.random() < p_timex:
                    for _ in range(rng.randint(1, 2)):
                        s = rng.randint(lo, hi)
                        timexes.append(TimeInterval(s, s + rng.choice((0, 0, 0, 1, 3))))
                doc = rng.randint(lo, hi) if rng.random() < p_doc else None
                insts.append(RelationInstance(p, ep, tuple(timexes), doc, f"d{len(insts)}"))
    if not insts:
        insts.append(RelationInstance(preds[0], eps[0], (), lo, "d0"))
    return Corpus(insts)


@pytest.fixture
def worked_corpus():
    return load_corpus(DATA / "worked_example.jsonl")


@pytest.fixture
def worked_path():
    return DATA / "worked_example.jsonl"


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[key])
