"""Confusion counts, PR curves, and average precision: hand-derived fixture
values, a from-scratch AP oracle, threshold-set behaviour, and the
strict-greater-than prediction convention."""

import random

import pytest

from damagekit.errors import EmptySampleSet, NoPositiveSamples
from damagekit.metrics import (ConfusionAtTheta, average_precision, confusion,
                               pr_curve, precision_recall, validate)
from damagekit.truth import MatchedSample

from _oracles import brute_average_precision


def make_samples(damage_pcts, labels):
    return [MatchedSample(f"p{k}", f"b{k}", 0.0, int(label), float(pct))
            for k, (pct, label) in enumerate(zip(damage_pcts, labels))]


WELL_RANKED = make_samples([80.0, 60.0, 40.0, 20.0], [1, 0, 1, 0])
PERFECT = make_samples([100.0, 50.0, 0.0], [1, 1, 0])


# -------------------------------------------------------------- confusion

def test_confusion_counts_at_midpoint_threshold():
    c = confusion(WELL_RANKED, 50.0)
    assert (c.tp, c.fp, c.fn) == (1, 1, 1)
    assert c.theta == 50.0


def test_confusion_counts_at_zero_threshold():
    c = confusion(PERFECT, 0.0)
    # The zero estimate is not predicted damaged even at theta=0.
    assert (c.tp, c.fp, c.fn) == (2, 0, 0)


def test_prediction_uses_strict_greater_than():
    samples = make_samples([30.0, 0.0], [0, 1])
    c = confusion(samples, 30.0)
    assert (c.tp, c.fp, c.fn) == (0, 0, 1)
    c = confusion(samples, 0.0)
    assert (c.tp, c.fp, c.fn) == (0, 1, 1)


def test_confusion_rejects_empty_sample_set():
    with pytest.raises(EmptySampleSet):
        confusion([], 0.0)


def test_precision_recall_values():
    assert precision_recall(ConfusionAtTheta(0.0, 2, 0, 0)) == (1.0, 1.0)
    assert precision_recall(ConfusionAtTheta(0.0, 1, 1, 1)) == (0.5, 0.5)
    # Empty prediction set scores precision 1 by convention.
    assert precision_recall(ConfusionAtTheta(100.0, 0, 0, 3)) == (1.0, 0.0)
    with pytest.raises(NoPositiveSamples):
        precision_recall(ConfusionAtTheta(0.0, 0, 4, 0))


# --------------------------------------------------------------- pr curve

def test_curve_thresholds_are_estimates_plus_endpoints():
    curve = pr_curve(WELL_RANKED)
    assert [p.theta for p in curve.points] == [100.0, 80.0, 60.0, 40.0,
                                               20.0, 0.0]


def test_curve_starts_at_recall_zero_and_grows():
    curve = pr_curve(WELL_RANKED)
    assert curve.points[0].recall == 0.0
    assert curve.points[0].precision == 1.0
    recalls = [p.recall for p in curve.points]
    assert recalls == sorted(recalls)
    assert curve.points[-1].theta == 0.0
    assert curve.points[-1].recall == 1.0


def test_curve_requires_samples_and_positives():
    with pytest.raises(EmptySampleSet):
        pr_curve([])
    with pytest.raises(NoPositiveSamples):
        pr_curve(make_samples([10.0, 20.0], [0, 0]))


def test_duplicate_estimates_collapse_to_one_threshold():
    samples = make_samples([70.0, 70.0, 70.0, 10.0], [1, 1, 0, 0])
    curve = pr_curve(samples)
    assert [p.theta for p in curve.points] == [100.0, 70.0, 10.0, 0.0]


# ------------------------------------------------------ average precision

def test_average_precision_well_ranked_fixture():
    ap = average_precision(pr_curve(WELL_RANKED))
    assert abs(ap - 0.833333333333) <= 1e-12


def test_average_precision_perfect_ranking():
    assert average_precision(pr_curve(PERFECT)) == 1.0


def test_average_precision_anti_ranked_fixture():
    anti = make_samples([20.0, 40.0, 60.0, 80.0], [1, 0, 1, 0])
    ap = average_precision(pr_curve(anti))
    assert abs(ap - 0.5) <= 1e-12
    assert ap < average_precision(pr_curve(WELL_RANKED))
    assert ap == pytest.approx(
        brute_average_precision([20.0, 40.0, 60.0, 80.0], [1, 0, 1, 0]),
        abs=1e-15)


def test_average_precision_matches_oracle_on_random_sets():
    rng = random.Random(271828)
    for _ in range(60):
        n = rng.randint(2, 50)
        labels = [rng.random() < 0.4 for _ in range(n)]
        if not any(labels):
            labels[rng.randrange(n)] = True
        pcts = [rng.choice([0.0, 100.0, rng.uniform(0.0, 100.0)])
                for _ in range(n)]
        samples = make_samples(pcts, labels)
        ap = average_precision(pr_curve(samples))
        assert abs(ap - brute_average_precision(pcts, labels)) <= 1e-12
        assert 0.0 <= ap <= 1.0


def test_extra_thresholds_leave_average_precision_unchanged():
    """Sweeping a fine threshold grid must give the same step sum, because
    recall only moves where an estimate value is crossed."""
    rng = random.Random(31415)
    for _ in range(20):
        n = rng.randint(3, 30)
        labels = [rng.random() < 0.5 for _ in range(n)]
        if not any(labels):
            labels[0] = True
        pcts = [rng.randrange(1, 200) * 0.5 for _ in range(n)]  # halves
        samples = make_samples(pcts, labels)
        ap = average_precision(pr_curve(samples))

        fine = [k * 0.25 for k in range(401)]  # exact quarters, 0..100
        prev_recall = 0.0
        fine_ap = 0.0
        for theta in sorted(set(fine) | set(pcts), reverse=True):
            tp = sum(1 for s in samples if s.damage_pct > theta and s.label)
            fp = sum(1 for s in samples if s.damage_pct > theta and not s.label)
            fn = sum(1 for s in samples if s.damage_pct <= theta and s.label)
            precision = 1.0 if tp + fp == 0 else tp / (tp + fp)
            recall = tp / (tp + fn)
            fine_ap += (recall - prev_recall) * precision
            prev_recall = recall
        assert abs(ap - fine_ap) <= 1e-12


def test_monotone_rescaling_preserves_average_precision():
    """Order-preserving transforms of the estimates keep AP unchanged as
    long as every value stays strictly between 0 and 100."""
    rng = random.Random(1618)
    for _ in range(40):
        n = rng.randint(4, 40)
        labels = [rng.random() < 0.35 for _ in range(n)]
        if not any(labels):
            labels[-1] = True
        pcts = [rng.uniform(0.5, 99.5) for _ in range(n)]
        squeezed = [p / 2.0 + 1.0 for p in pcts]
        original = average_precision(pr_curve(make_samples(pcts, labels)))
        rescaled = average_precision(pr_curve(make_samples(squeezed, labels)))
        assert abs(original - rescaled) <= 1e-12


# ---------------------------------------------------------------- validate

def test_validate_reports_zero_threshold_operating_point():
    report = validate(WELL_RANKED, "major_plus")
    assert report.n_samples == 4
    assert report.n_positive == 2
    assert report.scheme == "major_plus"
    assert report.precision0 == 0.5
    assert report.recall0 == 1.0
    assert abs(report.average_precision - 5.0 / 6.0) <= 1e-15
    assert report.curve.points[-1].theta == 0.0


def test_validate_perfect_scene_scores_ones():
    report = validate(PERFECT, "destroyed_only")
    assert report.precision0 == 1.0
    assert report.recall0 == 1.0
    assert report.average_precision == 1.0
    assert report.n_positive == 2
