"""From-scratch feedforward and simple recurrent (Elman) networks.

One hidden layer, logistic sigmoid on hidden and output units, trained
online with the generalized delta rule on summed squared error. Recurrent
nets carry a context layer that is a verbatim copy of the previous hidden
activation; training treats that context as a frozen extra input (no
unrolling through time). The caller owns the context vector, which keeps
forward() pure and lets many decoder sequences share one network.
"""

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class NetworkSpec:
    n_input: int
    n_hidden: int
    n_output: int
    recurrent: bool = False

    def __post_init__(self):
        if self.n_input < 1 or self.n_hidden < 1 or self.n_output < 1:
            raise ValueError(f"layer sizes must be >= 1, got {self}")

    @property
    def n_context(self) -> int:
        return self.n_hidden if self.recurrent else 0

    def weight_count(self) -> int:
        return ((self.n_input + self.n_context + 1) * self.n_hidden
                + (self.n_hidden + 1) * self.n_output)


@dataclass
class TrainingConfig:
    epochs: int = 3000
    learning_rate: float = 0.001
    hidden_units: int = 14
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")


# A dataset is a list of sequences; a sequence is a list of
# (input vector, target vector) pairs. Context resets at sequence starts.
SequenceDataset = list


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


class Network:
    """Weight set for one spec. w_hidden is (n_input+n_context+1, n_hidden),
    w_output is (n_hidden+1, n_output); the +1 rows are bias weights fed by
    a constant 1."""

    def __init__(self, spec: NetworkSpec, w_hidden, w_output):
        w_hidden = np.asarray(w_hidden, dtype=np.float64)
        w_output = np.asarray(w_output, dtype=np.float64)
        if w_hidden.shape != (spec.n_input + spec.n_context + 1, spec.n_hidden):
            raise ValueError(f"hidden weight shape {w_hidden.shape} does not match {spec}")
        if w_output.shape != (spec.n_hidden + 1, spec.n_output):
            raise ValueError(f"output weight shape {w_output.shape} does not match {spec}")
        if not (np.all(np.isfinite(w_hidden)) and np.all(np.isfinite(w_output))):
            raise ValueError("non-finite weights")
        self.spec = spec
        self.w_hidden = w_hidden
        self.w_output = w_output

    def copy(self) -> "Network":
        return Network(self.spec, self.w_hidden.copy(), self.w_output.copy())

    def zero_context(self):
        return np.zeros(self.spec.n_hidden)


def init_network(spec: NetworkSpec, seed: int = 0) -> Network:
    """Weights drawn uniformly from [-0.1, 0.1]; deterministic per seed."""
    rng = np.random.default_rng(seed)
    w_h = rng.uniform(-0.1, 0.1, size=(spec.n_input + spec.n_context + 1, spec.n_hidden))
    w_o = rng.uniform(-0.1, 0.1, size=(spec.n_hidden + 1, spec.n_output))
    return Network(spec, w_h, w_o)


def _layer_input(net, inp, context):
    inp = np.asarray(inp, dtype=np.float64)
    if inp.shape != (net.spec.n_input,):
        raise ValueError(
            f"input length {inp.shape} does not match n_input={net.spec.n_input}")
    if net.spec.recurrent:
        if context is None:
            context = net.zero_context()
        context = np.asarray(context, dtype=np.float64)
        if context.shape != (net.spec.n_hidden,):
            raise ValueError(
                f"context length {context.shape} does not match n_hidden={net.spec.n_hidden}")
        return np.concatenate([inp, context, [1.0]])
    return np.concatenate([inp, [1.0]])


def forward(net: Network, inp, context=None):
    """One forward sweep. Returns (output, hidden); the hidden vector is the
    caller's next context. Non-recurrent nets ignore the context argument."""
    x = _layer_input(net, inp, context)
    hidden = sigmoid(x @ net.w_hidden)
    output = sigmoid(np.concatenate([hidden, [1.0]]) @ net.w_output)
    return output, hidden


def _pattern_gradients(net, inp, context, target):
    """Delta-rule gradients of 0.5 * sum((output - target)^2) for one pattern."""
    target = np.asarray(target, dtype=np.float64)
    x = _layer_input(net, inp, context)
    hidden = sigmoid(x @ net.w_hidden)
    h1 = np.concatenate([hidden, [1.0]])
    output = sigmoid(h1 @ net.w_output)
    delta_out = (output - target) * output * (1.0 - output)
    grad_out = np.outer(h1, delta_out)
    delta_hidden = (net.w_output[:-1] @ delta_out) * hidden * (1.0 - hidden)
    grad_hidden = np.outer(x, delta_hidden)
    return grad_hidden, grad_out, output, hidden


def train(net: Network, dataset, config: TrainingConfig):
    """Online delta-rule training; returns (trained copy, per-epoch MSE).

    Sequences are presented in dataset order each epoch; the recurrent
    context resets to zeros at every sequence start and is otherwise the
    hidden activation copied from the previous pattern.
    """
    if not dataset or not any(dataset):
        raise ValueError("empty dataset")
    trained = net.copy()
    lr = config.learning_rate
    loss_history = []
    for _ in range(config.epochs):
        sq_sum = 0.0
        n_outputs = 0
        for sequence in dataset:
            context = trained.zero_context()
            for inp, target in sequence:
                grad_h, grad_o, output, hidden = _pattern_gradients(
                    trained, inp, context, target)
                trained.w_hidden -= lr * grad_h
                trained.w_output -= lr * grad_o
                sq_sum += float(np.sum((output - np.asarray(target)) ** 2))
                n_outputs += output.size
                context = hidden
        loss_history.append(sq_sum / n_outputs)
    return trained, loss_history


def analytic_gradients(net: Network, inp, target, context=None):
    grad_h, grad_o, _, _ = _pattern_gradients(net, inp, context, target)
    return grad_h, grad_o


def numeric_gradients(net: Network, inp, target, context=None, epsilon=1e-5):
    """Central finite differences of the squared-error loss for every weight."""
    target = np.asarray(target, dtype=np.float64)

    def loss(candidate):
        output, _ = forward(candidate, inp, context)
        return 0.5 * float(np.sum((output - target) ** 2))

    grads = []
    for attr in ("w_hidden", "w_output"):
        weights = getattr(net, attr)
        grad = np.zeros_like(weights)
        probe = net.copy()
        pw = getattr(probe, attr)
        for idx in np.ndindex(weights.shape):
            saved = pw[idx]
            pw[idx] = saved + epsilon
            up = loss(probe)
            pw[idx] = saved - epsilon
            down = loss(probe)
            pw[idx] = saved
            grad[idx] = (up - down) / (2.0 * epsilon)
        grads.append(grad)
    return tuple(grads)


def max_relative_error(analytic, numeric, tiny=1e-8):
    """Worst relative disagreement between two gradient sets. Pairs where
    both magnitudes fall below `tiny` count as agreeing."""
    worst = 0.0
    for g_a, g_n in zip(analytic, numeric):
        a = np.abs(np.asarray(g_a))
        n = np.abs(np.asarray(g_n))
        denom = np.maximum(a, n)
        err = np.abs(np.asarray(g_a) - np.asarray(g_n)) / np.where(denom > 0, denom, 1.0)
        err[(a < tiny) & (n < tiny)] = 0.0
        worst = max(worst, float(err.max()))
    return worst


def gradient_check(net: Network, inp, target, context=None, epsilon=1e-5):
    """Max relative error of the delta-rule gradients against central
    finite differences over every weight in the network."""
    if not 1e-7 <= epsilon <= 1e-3:
        raise ValueError("epsilon must be in [1e-7, 1e-3]")
    analytic = analytic_gradients(net, inp, target, context)
    numeric = numeric_gradients(net, inp, target, context, epsilon)
    return max_relative_error(analytic, numeric)


def combine_two_unit_output(o1: float, o2: float) -> float:
    """Collapse a plausible/implausible unit pair to one value: o1 * (1 - o2)."""
    if not (0.0 <= o1 <= 1.0 and 0.0 <= o2 <= 1.0):
        raise ValueError(f"unit outputs must be in [0, 1], got ({o1}, {o2})")
    return o1 * (1.0 - o2)


WEIGHT_FILE_VERSION = 1


def save_network(net: Network, path):
    """Self-describing text format; float repr round-trips exactly."""
    lines = [
        f"netfile v{WEIGHT_FILE_VERSION}",
        f"inputs {net.spec.n_input}",
        f"hidden {net.spec.n_hidden}",
        f"outputs {net.spec.n_output}",
        f"recurrent {int(net.spec.recurrent)}",
    ]
    for name, weights in (("w_hidden", net.w_hidden), ("w_output", net.w_output)):
        lines.append(f"{name} {weights.shape[0]} {weights.shape[1]}")
        for row in weights:
            lines.append(" ".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


class WeightFileError(ValueError):
    pass


def load_network(path) -> Network:
    with open(path, encoding="utf-8") as handle:
        lines = [l.rstrip("\n") for l in handle]
    pos = 0

    def take(expect_field=None):
        nonlocal pos
        if pos >= len(lines):
            raise WeightFileError(
                f"{path}: truncated file, expected {expect_field or 'more data'}")
        line = lines[pos]
        pos += 1
        return line

    header = take("header")
    if header != f"netfile v{WEIGHT_FILE_VERSION}":
        raise WeightFileError(f"{path}: unsupported version header {header!r}")

    fields = {}
    for name in ("inputs", "hidden", "outputs", "recurrent"):
        line = take(name)
        parts = line.split()
        if len(parts) != 2 or parts[0] != name:
            raise WeightFileError(f"{path}: malformed field {name!r}: {line!r}")
        try:
            fields[name] = int(parts[1])
        except ValueError:
            raise WeightFileError(f"{path}: non-integer value in field {name!r}") from None
    spec = NetworkSpec(fields["inputs"], fields["hidden"], fields["outputs"],
                       recurrent=bool(fields["recurrent"]))

    matrices = {}
    for name in ("w_hidden", "w_output"):
        line = take(name)
        parts = line.split()
        if len(parts) != 3 or parts[0] != name:
            raise WeightFileError(f"{path}: malformed matrix header {name!r}: {line!r}")
        rows, cols = int(parts[1]), int(parts[2])
        data = []
        for r in range(rows):
            row = take(f"{name} row {r}").split()
            if len(row) != cols:
                raise WeightFileError(
                    f"{path}: matrix {name} row {r} has {len(row)} values, expected {cols}")
            try:
                data.append([float(v) for v in row])
            except ValueError:
                raise WeightFileError(f"{path}: non-numeric weight in {name} row {r}") from None
        matrices[name] = np.array(data)
    try:
        return Network(spec, matrices["w_hidden"], matrices["w_output"])
    except ValueError as exc:
        raise WeightFileError(f"{path}: {exc}") from exc
