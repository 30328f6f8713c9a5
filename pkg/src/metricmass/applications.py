"""Proximity-based anomaly detection and nearest-neighbor coding.

The proximity classifier flags a query anomalous when it is farther than
gamma from every training point.  Its false-alarm rate, the probability
that a point drawn from the training distribution lands outside every
training ball, is exactly the conditional missing mass at radius gamma, so
the estimators provide data-dependent certificates for it.  Only the
false-alarm side is modeled; calibrating gamma from the training data
itself would void the guarantees and is out of scope.

Nearest-neighbor coding encodes a point by the index of its closest
codebook entry.  With the full sample as codebook the probability that the
reconstruction error exceeds eps is the conditional missing mass at eps;
with a greedy eps/2-net as codebook every sample point reconstructs within
eps/2, and the exceedance probability is bounded through the net instead.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .estimators import (
    GOOD_TURING,
    MARTINGALE_MIN,
    UPPER,
    Estimate,
    good_turing,
    martingale_upper_bound,
    net_missing_mass_bound,
)
from .samples import Sample, farthest_first_net
from .spaces import DISCRETE, PRECOMPUTED, MetricSpace, discrete, euclidean

NORMAL = "normal"
ANOMALOUS = "anomalous"


@dataclass(frozen=True)
class ProximityClassifier:
    training: Sample
    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.training.n < 1:
            raise ValueError("training sample must be non-empty")


def classify(classifier: ProximityClassifier, y) -> str:
    """Anomalous iff the query is farther than gamma from every training point."""
    space = classifier.training.space
    d = space.cross_distances(space.as_point(y), classifier.training.points)
    return ANOMALOUS if d.min() > classifier.gamma else NORMAL


def classify_batch(classifier: ProximityClassifier, queries) -> list[str]:
    space = classifier.training.space
    d = space.cross_distances(queries, classifier.training.points)
    return [ANOMALOUS if row_min > classifier.gamma else NORMAL
            for row_min in d.min(axis=1)]


def false_alarm_certificate(classifier: ProximityClassifier, delta: float,
                            method: str = MARTINGALE_MIN) -> Estimate:
    """Upper confidence bound on the false-alarm rate, valid with
    probability at least 1 - delta over the training sample."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    training, gamma = classifier.training, classifier.gamma
    if method == MARTINGALE_MIN:
        return martingale_upper_bound(training, gamma, delta)
    if method == GOOD_TURING:
        n = training.n
        g = good_turing(training, gamma)
        raw = g + 1.0 / n + math.sqrt(3.0 / (n * delta))
        return Estimate(value=min(1.0, raw), method=GOOD_TURING, side=UPPER,
                        delta=delta, radius=1.0 / n + math.sqrt(3.0 / (n * delta)),
                        vacuous=raw >= 1.0)
    raise ValueError(f"unknown certificate method {method!r}")


def nn_encode(codebook: Sample, x) -> int:
    """Index of the nearest codebook point; ties go to the lowest index."""
    if codebook.n < 1:
        raise ValueError("codebook must be non-empty")
    space = codebook.space
    d = space.cross_distances(space.as_point(x), codebook.points)
    return int(np.argmin(d[0]))


@dataclass(frozen=True)
class CodingReport:
    codebook: tuple[int, ...]
    epsilon: float
    exceed_prob_estimate: Estimate
    expected_error_bound: float | None = None

    def to_dict(self) -> dict:
        return {
            "codebook": list(self.codebook),
            "epsilon": self.epsilon,
            "exceed_prob_estimate": self.exceed_prob_estimate.to_dict(),
            "expected_error_bound": self.expected_error_bound,
        }


def coding_report(sample: Sample, epsilon: float, delta: float,
                  use_net: bool = False,
                  diameter: float | None = None) -> CodingReport:
    """Bound the probability that nearest-neighbor reconstruction errs by
    more than epsilon.

    With the full sample as codebook the exceedance target is the missing
    mass at epsilon; with a greedy eps/2-net codebook it is the missing mass
    at eps/2, bounded through the net-size bound.  When a distortion ceiling
    is declared the expected reconstruction error is bounded by
    diameter * exceedance + epsilon.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if use_net:
        net = farthest_first_net(sample, epsilon / 2.0)
        bound = net_missing_mass_bound(sample, epsilon / 2.0, net, delta)
        codebook = tuple(int(i) for i in net)
    else:
        bound = martingale_upper_bound(sample, epsilon, delta)
        codebook = tuple(range(sample.n))
    expected = None
    if diameter is not None:
        if diameter <= 0:
            raise ValueError("declared diameter must be positive")
        expected = diameter * bound.value + epsilon
    return CodingReport(codebook=codebook, epsilon=epsilon,
                        exceed_prob_estimate=bound,
                        expected_error_bound=expected)


# -- persistence --------------------------------------------------------------

def classifier_to_dict(classifier: ProximityClassifier) -> dict:
    space = classifier.training.space
    if space.kind == PRECOMPUTED:
        raise ValueError("classifiers over precomputed spaces do not persist")
    payload: dict = {"gamma": classifier.gamma, "space": {"kind": space.kind}}
    if space.dim is not None:
        payload["space"]["dim"] = space.dim
    if space.p is not None:
        payload["space"]["p"] = space.p
    if space.kind == DISCRETE:
        payload["training"] = [str(s) for s in classifier.training.points]
    else:
        payload["training"] = np.asarray(classifier.training.points).tolist()
    return payload


def classifier_from_dict(payload: dict) -> ProximityClassifier:
    from .spaces import lp, scaled_indicator
    sp = payload["space"]
    kind = sp["kind"]
    if kind == "euclidean":
        space: MetricSpace = euclidean(sp["dim"])
    elif kind == "lp":
        space = lp(sp["dim"], sp["p"])
    elif kind == DISCRETE:
        space = discrete()
    elif kind == "scaled_indicator":
        space = scaled_indicator(sp["p"])
    else:
        raise ValueError(f"unknown space kind {kind!r}")
    training = Sample(np.asarray(payload["training"]), space)
    return ProximityClassifier(training=training, gamma=payload["gamma"])


def save_classifier(classifier: ProximityClassifier, path) -> None:
    with open(path, "w") as fh:
        json.dump(classifier_to_dict(classifier), fh)


def load_classifier(path) -> ProximityClassifier:
    with open(path) as fh:
        return classifier_from_dict(json.load(fh))
