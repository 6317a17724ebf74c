"""Smoothed category n-gram models (orders 1..5) and the exclusion-curve
evaluation that compares them with the recurrent predictors.

Smoothing is interpolated backoff: each order mixes its maximum-likelihood
estimate with the next lower order, bottoming out in an add-one unigram,
so every predicted distribution is strictly positive and sums to one.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from .categories import SCHEMES

START = "<s>"


@dataclass(frozen=True)
class SmoothingConfig:
    interpolation: float = 0.75  # weight of the higher-order ML estimate

    def __post_init__(self):
        if not 0.0 <= self.interpolation < 1.0:
            raise ValueError("interpolation weight must be in [0, 1)")


class NgramModel:
    """Count tables for orders 1..n over one category axis."""

    def __init__(self, axis, order, context_counts, continuations, smoothing):
        self.axis = axis
        self.order = order
        self.smoothing = smoothing
        self._context_counts = context_counts    # order -> {context: total}
        self._continuations = continuations      # order -> {context: Counter}
        scheme = SCHEMES[axis]
        self._labels = scheme.labels
        self._index = {label: i for i, label in enumerate(scheme.labels)}
        unigram = continuations[1][()]
        total = sum(unigram.values())
        vocab = len(self._labels)
        self._unigram = np.array(
            [(unigram.get(label, 0) + 1.0) / (total + vocab) for label in self._labels])

    def predict(self, context) -> np.ndarray:
        """Smoothed distribution over the axis given a category history."""
        context = tuple(context)
        history = (START,) * max(self.order - 1 - len(context), 0) + context
        return self._predict(self.order, history[len(history) - self.order + 1:]
                             if self.order > 1 else ())

    def _predict(self, order, context):
        if order == 1:
            return self._unigram
        lower = self._predict(order - 1, context[1:])
        seen = self._context_counts[order].get(context, 0)
        if seen == 0:
            return lower
        dist = np.zeros(len(self._labels))
        for label, count in self._continuations[order][context].items():
            dist[self._index[label]] = count / seen
        lam = self.smoothing.interpolation
        return lam * dist + (1.0 - lam) * lower


def fit_ngram(category_sequences, n, smoothing=SmoothingConfig(), axis=None) -> NgramModel:
    """Count-based fit with start padding; deterministic."""
    if not 1 <= n <= 5:
        raise ValueError(f"order must be in 1..5, got {n}")
    sequences = [list(seq) for seq in category_sequences if seq]
    if not sequences:
        raise ValueError("empty training sequences")
    if axis is None:
        raise ValueError("axis is required")
    scheme = SCHEMES[axis]
    for seq in sequences:
        for label in seq:
            if label not in scheme:
                raise ValueError(f"label {label!r} not on axis {axis}")

    context_counts = {k: defaultdict(int) for k in range(1, n + 1)}
    continuations = {k: defaultdict(Counter) for k in range(1, n + 1)}
    for seq in sequences:
        padded = [START] * (n - 1) + seq
        for order in range(1, n + 1):
            for i in range(n - 1, len(padded)):
                context = tuple(padded[i - order + 1:i])
                context_counts[order][context] += 1
                continuations[order][context][padded[i]] += 1
    return NgramModel(axis, n, context_counts, continuations, smoothing)


def ngram_predict(model: NgramModel, context_categories) -> np.ndarray:
    return model.predict(context_categories)


@dataclass(frozen=True)
class ExclusionCurve:
    axis: str
    points: tuple  # (k_excluded, accuracy) for k = 0 .. axis size - 1

    def accuracies(self):
        return [acc for _, acc in self.points]

    def mean_accuracy(self) -> float:
        return float(np.mean(self.accuracies()))


def preference_order(values) -> list:
    """Category indices from most to least preferred; ties keep the lower
    index first, matching the argmax rule used everywhere else."""
    values = np.asarray(values)
    return sorted(range(len(values)), key=lambda i: (-values[i], i))


def exclusion_curve(predictor_fn, test_sequences, axis) -> ExclusionCurve:
    """Accuracy as a function of how many lowest-ranked categories are
    excluded. A position counts correct at level k when the true next
    category survives exclusion of the k least preferred categories.

    `predictor_fn` maps a gold category history (list of labels) to a
    preference vector over the axis; the same callable signature serves
    n-gram models and recurrent predictors.
    """
    scheme = SCHEMES[axis]
    size = len(scheme)
    positions = []
    for seq in test_sequences:
        seq = list(seq)
        for i in range(1, len(seq)):
            positions.append((seq[:i], seq[i]))
    if not positions:
        raise ValueError("empty test set")

    survive_rank = np.zeros(size + 1)
    for history, true_label in positions:
        values = np.asarray(predictor_fn(history))
        if values.shape != (size,):
            raise ValueError(f"predictor returned shape {values.shape} for axis {axis}")
        order = preference_order(values)
        rank = order.index(scheme.index(true_label))
        # true category survives exclusion level k iff rank < size - k
        survive_rank[rank] += 1
    total = len(positions)
    points = []
    for k in range(size):
        correct = survive_rank[: size - k].sum()
        points.append((k, float(correct / total)))
    return ExclusionCurve(axis, tuple(points))


def format_curves(curves: dict) -> str:
    """Tabular text export: one block per predictor, (k, accuracy) rows."""
    lines = []
    for name in sorted(curves):
        curve = curves[name]
        lines.append(f"# predictor {name} axis={curve.axis} "
                     f"mean={curve.mean_accuracy():.6f}")
        for k, acc in curve.points:
            lines.append(f"{k}\t{acc:.6f}")
    return "\n".join(lines) + "\n"
