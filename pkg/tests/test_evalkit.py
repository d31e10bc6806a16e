import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from tempograph.evalkit import (Category, DatasetError, EntailmentPair, ParaphraseClusters, capped_auc,
                                category_for, generate_pairs, load_clusters, load_pairs, pr_curve,
                                results_csv, run_experiment, subset, write_pairs)
from tempograph.simmeasures import parse_measures
from tempograph.synthcorpus import DEFAULT_LEXICON
from tempograph.timealg import TimeSource

from oracles import auc_by_quadrature, pr_by_rescan

TOY = {"win": ["beat", "defeat"], "lose": ["fall to"], "tie": ["draw"], "play": ["face"]}

# Enumerated by hand from the labelling pattern: outcome -> play entails,
# outcome -> other outcome does not, play -> outcome does not, and the one
# within-class cluster with two members gives two paraphrase rows.
TOY_PAIRS = {
    ("beat", "face", "entailment1"), ("defeat", "face", "entailment1"),
    ("fall to", "face", "entailment1"), ("draw", "face", "entailment1"),
    ("beat", "fall to", "outcome0"), ("beat", "draw", "outcome0"),
    ("defeat", "fall to", "outcome0"), ("defeat", "draw", "outcome0"),
    ("fall to", "beat", "outcome0"), ("fall to", "defeat", "outcome0"), ("fall to", "draw", "outcome0"),
    ("draw", "beat", "outcome0"), ("draw", "defeat", "outcome0"), ("draw", "fall to", "outcome0"),
    ("face", "beat", "directional0"), ("face", "defeat", "directional0"),
    ("face", "fall to", "directional0"), ("face", "draw", "directional0"),
    ("beat", "defeat", "paraphrase1"), ("defeat", "beat", "paraphrase1"),
}


def as_set(pairs):
    return {(p.premise, p.hypothesis, p.category.value) for p in pairs}


def fn_from(scores):
    return lambda p, q: scores.get((p, q), 0.0)


def pairs_with_scores(spec):
    """spec: [(name, label, score)] -> (pairs, scorer)."""
    pairs, scores = [], {}
    for name, label, s in spec:
        cat = Category.ENTAILMENT1 if label else Category.OUTCOME0
        pairs.append(EntailmentPair(name, "h", label, cat))
        scores[(name, "h")] = s
    return pairs, fn_from(scores)


class TestGeneratePairs:
    def test_toy_clusters(self):
        pairs = generate_pairs(ParaphraseClusters.from_lexicon(TOY))
        assert len(pairs) == len(as_set(pairs))
        assert as_set(pairs) == TOY_PAIRS
        cats = Counter(p.category for p in pairs)
        assert cats == {Category.ENTAILMENT1: 4, Category.OUTCOME0: 10, Category.DIRECTIONAL0: 4,
                        Category.PARAPHRASE1: 2}

    def test_singletons(self):
        pairs = generate_pairs(ParaphraseClusters.from_lexicon({k: [k + "_x"] for k in TOY}))
        assert len(pairs) == 12
        assert not any(p.category is Category.PARAPHRASE1 for p in pairs)

    @settings(max_examples=50)
    @given(st.tuples(*[st.integers(1, 6)] * 4), st.integers(0, 10**6))
    def test_closed_form_counts(self, sizes, seed):
        rng = random.Random(seed)
        clusters = {cls: [(f"{cls}{k}", rng.random() < 0.3) for k in range(n)]
                    for cls, n in zip(("win", "lose", "tie", "play"), sizes)}
        pairs = generate_pairs(ParaphraseClusters(clusters))
        w, l, t, pl = sizes
        cats = Counter(p.category for p in pairs)
        assert cats[Category.ENTAILMENT1] == (w + l + t) * pl
        assert cats[Category.DIRECTIONAL0] == pl * (w + l + t)
        assert cats[Category.OUTCOME0] == (w + l + t) ** 2 - (w * w + l * l + t * t)
        nonspec = [sum(1 for _, s in clusters[c] if not s) for c in clusters]
        assert cats[Category.PARAPHRASE1] == sum(n * n - n for n in nonspec)
        assert all(p.premise != p.hypothesis for p in pairs)
        assert len({(p.premise, p.hypothesis) for p in pairs}) == len(pairs)

    def test_published_cluster_sizes(self):
        pairs = generate_pairs(ParaphraseClusters.from_lexicon(DEFAULT_LEXICON))
        cats = Counter(p.category for p in pairs)
        assert [len(DEFAULT_LEXICON[c]) for c in ("win", "lose", "tie", "play")] == [26, 8, 3, 5]
        assert cats[Category.ENTAILMENT1] == 37 * 5

    def test_clusters_validated(self, tmp_path):
        with pytest.raises(DatasetError, match="empty"):
            ParaphraseClusters({"win": [("a", False)], "lose": [], "tie": [("b", False)], "play": [("c", False)]})
        with pytest.raises(DatasetError, match="both"):
            ParaphraseClusters.from_lexicon({"win": ["a"], "lose": ["a"], "tie": ["b"], "play": ["c"]})
        f = tmp_path / "cl.tsv"
        f.write_text("win\tbeat\tspecific\nlose\tlose.to\tnon-specific\ntie\tdraw\tnon-specific\nplay\tface\tnon-specific\n")
        pc = load_clusters(f)
        assert pc.clusters["win"] == [("beat", True)]

    def test_category_table(self):
        assert category_for("win", "play") is Category.ENTAILMENT1
        assert category_for("tie", "lose") is Category.OUTCOME0
        assert category_for("play", "win") is Category.DIRECTIONAL0
        assert category_for("lose", "lose") is Category.PARAPHRASE1


class TestLoadPairs:
    def test_well_formed(self, tmp_path):
        f = tmp_path / "d.tsv"
        f.write_text("beat\tplay\tentails\tentailment1\nbeat\tlose.to\tnot-entails\toutcome0\n"
                     "play\tbeat\tnot-entails\tdirectional0\nbeat\tdefeat\tentails\tparaphrase1\n")
        assert len(load_pairs(f)) == 4

    def test_inconsistent_label(self, tmp_path):
        f = tmp_path / "d.tsv"
        f.write_text("beat\tplay\tentails\tentailment1\nbeat\tlose.to\tentails\toutcome0\n")
        with pytest.raises(DatasetError, match=":2:"):
            load_pairs(f)

    def test_round_trip_and_subsets(self, tmp_path):
        pairs = generate_pairs(ParaphraseClusters.from_lexicon(TOY))
        write_pairs(pairs, tmp_path / "d.tsv")
        back = load_pairs(tmp_path / "d.tsv")
        assert back == pairs
        assert len(subset(back, "Base")) == 14
        assert len(subset(back, "Directional")) == 8
        assert len(subset(back, "All")) == 20
        with pytest.raises(DatasetError):
            subset(back, "Other")


class TestPRCurve:
    def test_perfect_scorer(self):
        pairs, fn = pairs_with_scores([("a", True, 1.0), ("b", True, 1.0), ("c", False, 0.0)])
        assert pr_curve(pairs, fn, 1.0).auc_capped == 1.0

    def test_constant_scorer(self):
        pairs, fn = pairs_with_scores([("a", True, 0.3), ("b", False, 0.3), ("c", True, 0.3), ("d", False, 0.3)])
        curve = pr_curve(pairs, fn, 0.75)
        assert curve.points == [(1.0, 0.5)]
        assert curve.auc_capped == pytest.approx(0.375)

    def test_traced_example(self):
        pairs, fn = pairs_with_scores([("A", True, 0.9), ("B", False, 0.8), ("C", True, 0.7), ("D", False, 0.1)])
        curve = pr_curve(pairs, fn, 1.0)
        assert curve.points[:3] == [(0.5, 1.0), (0.5, 0.5), (1.0, pytest.approx(2 / 3))]
        assert curve.auc_capped == pytest.approx(0.5 + 0.5 * (0.5 + 2 / 3) / 2)
        assert round(curve.auc_capped, 4) == 0.7917

    def test_missing_pairs_score_zero(self):
        pairs, _ = pairs_with_scores([("A", True, 0.9), ("B", False, 0.8)])
        curve = pr_curve(pairs, lambda p, q: 0.0, 1.0)
        assert curve.thresholds == [0.0]

    def test_no_positives(self):
        pairs, fn = pairs_with_scores([("A", False, 0.9)])
        with pytest.raises(DatasetError, match="no positive"):
            pr_curve(pairs, fn)
        with pytest.raises(ValueError):
            pr_curve(pairs, fn, 0.0)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.tuples(st.booleans(), st.sampled_from([0.0, 0.1, 0.25, 0.5, 0.7, 1.0])), min_size=1, max_size=200),
           st.floats(0.05, 1.0))
    def test_matches_rescan(self, rows, cap):
        if not any(y for y, _ in rows):
            rows = rows + [(True, 0.5)]
        pairs, fn = pairs_with_scores([(f"x{k}", y, s) for k, (y, s) in enumerate(rows)])
        curve = pr_curve(pairs, fn, cap)
        want = pr_by_rescan([s for _, s in rows], [y for y, _ in rows])
        assert len(curve.points) == len(want)
        for (r, p), (r2, p2) in zip(curve.points, want):
            assert r == pytest.approx(r2, abs=1e-12) and p == pytest.approx(p2, abs=1e-12)
        assert 0.0 <= curve.auc_capped <= cap + 1e-12
        recalls = [r for r, _ in curve.points]
        assert recalls == sorted(recalls)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.tuples(st.booleans(), st.floats(0, 1)), min_size=2, max_size=40), st.floats(0.05, 1.0))
    def test_auc_against_quadrature(self, rows, cap):
        if not any(y for y, _ in rows):
            rows = rows + [(True, 0.5)]
        points = pr_by_rescan([s for _, s in rows], [y for y, _ in rows])
        assert capped_auc(points, cap) == pytest.approx(auc_by_quadrature(points, cap, 4000), abs=2e-3)

    @settings(max_examples=200)
    @given(st.lists(st.tuples(st.booleans(), st.floats(0, 1)), min_size=1, max_size=60),
           st.floats(0.01, 1.0), st.floats(0.01, 1.0))
    def test_cap_monotone(self, rows, c1, c2):
        if not any(y for y, _ in rows):
            rows = rows + [(True, 0.5)]
        points = pr_by_rescan([s for _, s in rows], [y for y, _ in rows])
        lo, hi = sorted((c1, c2))
        assert capped_auc(points, lo) <= capped_auc(points, hi) + 1e-15
        assert 0 <= capped_auc(points, hi) <= hi + 1e-12


class TestExperiment:
    def test_single_cell(self, worked_corpus):
        pairs = [EntailmentPair("beat", "play", True, Category.ENTAILMENT1),
                 EntailmentPair("beat", "lose.against", False, Category.OUTCOME0)]
        rows = run_experiment(worked_corpus, pairs, [TimeSource.DOC_DATE_ONLY], [0],
                              parse_measures("T-BInc-Count"))
        assert len(rows) == 1
        assert rows[0].auc == pytest.approx(0.75)
        csv_text = results_csv(rows)
        assert csv_text.splitlines() == ["source,window,measure,subset,auc,recall_cap",
                                         "docdate,0,T-BInc-Count,Base,0.750000,0.75"]
