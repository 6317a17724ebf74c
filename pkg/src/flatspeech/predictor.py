"""Next-category prediction and word-hypothesis-sequence scoring.

Two recurrent nets estimate the next word's basic syntactic/semantic
category from the current disambiguated category. A step's syntactic
plausibility is the previous prediction's value at the category the
disambiguator actually chose; acoustic, syntactic and semantic factors
multiply into one combined step score.
"""

import math
from dataclasses import dataclass

import numpy as np

from .categories import BSEM, BSYN, CategoryVector
from .network import Network, forward

_AXIS = {"syn": BSYN, "sem": BSEM}


@dataclass
class PredictorNets:
    syn_predict: Network
    sem_predict: Network


class PredictorState:
    """Per-sequence contexts plus the standing predictions for the next word."""

    def __init__(self, nets: PredictorNets):
        self.contexts = {
            "syn_predict": nets.syn_predict.zero_context(),
            "sem_predict": nets.sem_predict.zero_context(),
        }
        self.predicted_syn = None
        self.predicted_sem = None

    def copy(self):
        clone = object.__new__(PredictorState)
        clone.contexts = {k: v.copy() for k, v in self.contexts.items()}
        clone.predicted_syn = self.predicted_syn
        clone.predicted_sem = self.predicted_sem
        return clone


def predict_next(axis, nets: PredictorNets, state: PredictorState, current: CategoryVector):
    """Distribution over the same axis for the NEXT word's basic category."""
    want = _AXIS[axis]
    if current.axis != want:
        raise ValueError(f"expected {want} vector, got {current.axis}")
    name = f"{axis}_predict"
    net = getattr(nets, name)
    out, hidden = forward(net, current.values, state.contexts[name])
    state.contexts[name] = hidden
    prediction = CategoryVector(want, out)
    if axis == "syn":
        state.predicted_syn = prediction
    else:
        state.predicted_sem = prediction
    return prediction


def step_plausibility(predicted: CategoryVector, disambiguated: CategoryVector) -> float:
    """The prediction's value at the category the disambiguator selected."""
    if predicted.axis != disambiguated.axis:
        raise ValueError(
            f"axis mismatch: {predicted.axis} vs {disambiguated.axis}")
    return float(predicted.values[disambiguated.argmax_index()])


def combined_step(acoustic: float, syntactic: float, semantic: float) -> float:
    for name, value in (("acoustic", acoustic), ("syntactic", syntactic),
                        ("semantic", semantic)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} plausibility {value} outside [0, 1]")
    return acoustic * syntactic * semantic


@dataclass(frozen=True)
class StepScore:
    acoustic: float
    syntactic: float
    semantic: float

    @property
    def combined(self) -> float:
        return combined_step(self.acoustic, self.syntactic, self.semantic)


@dataclass(frozen=True)
class SequenceScore:
    """Aggregate over a sequence's steps; always recomputed from the step
    list so incremental and from-scratch scoring agree bit for bit."""

    steps: tuple
    log_sum: float
    normalized: float

    @classmethod
    def from_steps(cls, steps) -> "SequenceScore":
        if not steps:
            raise ValueError("a sequence score needs at least one step")
        steps = tuple(steps)
        log_sum = 0.0
        for step in steps:
            combined = step.combined
            log_sum += math.log(combined) if combined > 0.0 else float("-inf")
        normalized = math.exp(log_sum / len(steps)) if log_sum > float("-inf") else 0.0
        return cls(steps, log_sum, normalized)

    @property
    def raw(self) -> float:
        return math.exp(self.log_sum) if self.log_sum > float("-inf") else 0.0

    def value(self, ranking: str) -> float:
        if ranking == "normalized":
            return self.normalized
        if ranking == "raw":
            return self.raw
        raise ValueError(f"unknown ranking mode {ranking!r}")

    def extended(self, step: StepScore) -> "SequenceScore":
        return SequenceScore.from_steps(self.steps + (step,))


def sequence_score(steps) -> SequenceScore:
    return SequenceScore.from_steps(steps)
