"""Precision/recall validation metrics over matched damage samples.

A sample is predicted damaged at threshold theta when its estimated damage
percentage strictly exceeds theta; estimates of exactly zero are therefore
never predicted damaged, even at theta = 0. Thresholds live on the same
0..100 percent scale as the estimates. Precision over an empty predicted
set is defined as 1.0 so precision-recall curves start at recall 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptySampleSet, NoPositiveSamples
from .truth import MatchedSample


@dataclass(frozen=True)
class ConfusionAtTheta:
    theta: float
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class PRPoint:
    theta: float
    precision: float
    recall: float


@dataclass(frozen=True)
class PRCurve:
    points: tuple[PRPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))


@dataclass(frozen=True)
class ValidationReport:
    n_samples: int
    n_positive: int
    scheme: str
    precision0: float
    recall0: float
    average_precision: float
    curve: PRCurve


def confusion(samples: list[MatchedSample], theta: float) -> ConfusionAtTheta:
    """Confusion counts at one threshold (predicted damaged: pct > theta)."""
    if not samples:
        raise EmptySampleSet("confusion counts need at least one sample")
    tp = fp = fn = 0
    for s in samples:
        if s.damage_pct > theta:
            if s.label == 1:
                tp += 1
            else:
                fp += 1
        elif s.label == 1:
            fn += 1
    return ConfusionAtTheta(theta=theta, tp=tp, fp=fp, fn=fn)


def precision_recall(c: ConfusionAtTheta) -> tuple[float, float]:
    """Precision and recall for one confusion; empty predictions give P=1."""
    if c.tp + c.fn == 0:
        raise NoPositiveSamples("recall undefined without positive samples")
    precision = 1.0 if c.tp + c.fp == 0 else c.tp / (c.tp + c.fp)
    recall = c.tp / (c.tp + c.fn)
    return precision, recall


def pr_curve(samples: list[MatchedSample]) -> PRCurve:
    """Precision-recall curve over decreasing thresholds.

    The threshold set is {100} plus every distinct estimate plus {0},
    swept in strictly decreasing order, so the curve runs from recall 0
    at theta=100 down to the theta=0 operating point.
    """
    if not samples:
        raise EmptySampleSet("a PR curve needs at least one sample")
    if not any(s.label == 1 for s in samples):
        raise NoPositiveSamples("a PR curve needs at least one positive sample")
    thetas = {100.0, 0.0}
    thetas.update(s.damage_pct for s in samples)
    points = []
    previous_recall = -1.0
    for theta in sorted(thetas, reverse=True):
        precision, recall = precision_recall(confusion(samples, theta))
        assert recall >= previous_recall, "recall must not decrease"
        previous_recall = recall
        points.append(PRPoint(theta=theta, precision=precision, recall=recall))
    return PRCurve(tuple(points))


def average_precision(curve: PRCurve) -> float:
    """Step-sum AP: sum of (recall step) * precision along the curve."""
    ap = 0.0
    previous_recall = 0.0
    for point in curve.points:
        ap += (point.recall - previous_recall) * point.precision
        previous_recall = point.recall
    return ap


def validate(samples: list[MatchedSample], scheme_id: str) -> ValidationReport:
    """Full validation: PR curve, theta=0 operating point, and AP."""
    curve = pr_curve(samples)
    operating = curve.points[-1]
    assert operating.theta == 0.0
    return ValidationReport(
        n_samples=len(samples),
        n_positive=sum(s.label for s in samples),
        scheme=scheme_id,
        precision0=operating.precision,
        recall0=operating.recall,
        average_precision=average_precision(curve),
        curve=curve,
    )
