import math

import numpy as np
import pytest

from flatspeech.models import network_specs
from flatspeech.network import (
    Network,
    NetworkSpec,
    TrainingConfig,
    WeightFileError,
    analytic_gradients,
    combine_two_unit_output,
    forward,
    gradient_check,
    init_network,
    load_network,
    max_relative_error,
    numeric_gradients,
    save_network,
    train,
)


def test_init_deterministic():
    spec = NetworkSpec(5, 3, 2, recurrent=True)
    a = init_network(spec, seed=7)
    b = init_network(spec, seed=7)
    assert np.array_equal(a.w_hidden, b.w_hidden)
    assert np.array_equal(a.w_output, b.w_output)


def test_init_range():
    net = init_network(NetworkSpec(10, 10, 10), seed=0)
    for w in (net.w_hidden, net.w_output):
        assert np.all(np.abs(w) <= 0.1)


def test_weight_count_matches_quoted_scale():
    # 13 inputs, 14 hidden, 8 outputs, 14 context units: about 500 weights
    spec = NetworkSpec(13, 14, 8, recurrent=True)
    assert spec.weight_count() == 512
    net = init_network(spec, seed=0)
    assert net.w_hidden.size + net.w_output.size == 512


def test_invalid_spec_rejected():
    with pytest.raises(ValueError):
        NetworkSpec(13, 0, 8)


def test_zero_weights_give_half():
    spec = NetworkSpec(4, 3, 2)
    net = Network(spec, np.zeros((5, 3)), np.zeros((4, 2)))
    out, hidden = forward(net, np.array([1.0, 0.0, 1.0, 0.5]))
    assert np.allclose(out, 0.5)
    assert np.allclose(hidden, 0.5)


def test_forward_matches_hand_computation():
    # 2-2-1 with fixed weights, evaluated by explicit sigmoid composition
    w_h = np.array([[0.3, -0.2], [0.1, 0.4], [0.05, -0.1]])  # last row = bias
    w_o = np.array([[0.7], [-0.5], [0.2]])
    net = Network(NetworkSpec(2, 2, 1), w_h, w_o)
    x = np.array([1.0, 0.5])

    def sig(v):
        return 1.0 / (1.0 + math.exp(-v))

    h1 = sig(1.0 * 0.3 + 0.5 * 0.1 + 0.05)
    h2 = sig(1.0 * -0.2 + 0.5 * 0.4 + -0.1)
    expected = sig(h1 * 0.7 + h2 * -0.5 + 0.2)
    out, hidden = forward(net, x)
    assert out[0] == pytest.approx(expected, abs=1e-12)
    assert hidden[0] == pytest.approx(h1, abs=1e-12)


def test_outputs_strictly_inside_unit_interval():
    net = init_network(NetworkSpec(6, 4, 3, recurrent=True), seed=5)
    rng = np.random.default_rng(0)
    for _ in range(50):
        out, _ = forward(net, rng.uniform(0, 1, 6), rng.uniform(0, 1, 4))
        assert np.all(out > 0.0) and np.all(out < 1.0)


def test_non_recurrent_ignores_context():
    net = init_network(NetworkSpec(3, 2, 2), seed=1)
    x = np.array([0.2, 0.8, 0.5])
    a, _ = forward(net, x, None)
    b, _ = forward(net, x, np.ones(2))
    assert np.array_equal(a, b)


def test_dimension_mismatch_errors():
    net = init_network(NetworkSpec(3, 2, 2, recurrent=True), seed=1)
    with pytest.raises(ValueError):
        forward(net, np.zeros(4))
    with pytest.raises(ValueError):
        forward(net, np.zeros(3), np.zeros(5))


def xor_dataset():
    return [[(np.array([0.0, 0.0]), np.array([0.0])),
             (np.array([0.0, 1.0]), np.array([1.0])),
             (np.array([1.0, 0.0]), np.array([1.0])),
             (np.array([1.0, 1.0]), np.array([0.0]))]]


def test_xor_training():
    net = init_network(NetworkSpec(2, 2, 1), seed=2)
    trained, _ = train(net, xor_dataset(),
                       TrainingConfig(epochs=4000, learning_rate=2.0, seed=2))
    for inp, target in xor_dataset()[0]:
        out, _ = forward(trained, inp)
        assert abs(out[0] - target[0]) < 0.2


def test_single_pattern_descent():
    dataset = [[(np.array([1.0, 0.0]), np.array([1.0, 0.0]))]]
    net = init_network(NetworkSpec(2, 2, 2), seed=0)
    _, history = train(net, dataset, TrainingConfig(epochs=50, learning_rate=0.5))
    assert history[-1] < history[0]


def test_loss_non_increasing_over_windows_on_separable_fixture():
    # linearly separable two-pattern task
    dataset = [[(np.array([1.0, 0.0]), np.array([1.0])),
                (np.array([0.0, 1.0]), np.array([0.0]))]]
    net = init_network(NetworkSpec(2, 2, 1), seed=3)
    _, history = train(net, dataset, TrainingConfig(epochs=600, learning_rate=0.5))
    for i in range(len(history) - 100):
        assert history[i + 100] <= history[i] + 1e-12


def test_training_deterministic():
    dataset = xor_dataset()
    config = TrainingConfig(epochs=200, learning_rate=1.0, seed=4)
    a, _ = train(init_network(NetworkSpec(2, 2, 1), seed=4), dataset, config)
    b, _ = train(init_network(NetworkSpec(2, 2, 1), seed=4), dataset, config)
    assert np.array_equal(a.w_hidden, b.w_hidden)
    assert np.array_equal(a.w_output, b.w_output)


def test_empty_dataset_rejected():
    net = init_network(NetworkSpec(2, 2, 1), seed=0)
    with pytest.raises(ValueError):
        train(net, [], TrainingConfig(epochs=1))


def test_recurrent_context_learned():
    # same final input, different first input: only context separates them
    amb = np.zeros(4)
    amb[1] = amb[3] = 1.0
    seq_a = [(np.eye(4)[0], np.eye(4)[0]), (amb, np.eye(4)[1])]
    seq_b = [(np.eye(4)[2], np.eye(4)[2]), (amb, np.eye(4)[3])]
    net = init_network(NetworkSpec(4, 6, 4, recurrent=True), seed=1)
    trained, _ = train(net, [seq_a, seq_b] * 20,
                       TrainingConfig(epochs=300, learning_rate=0.2, seed=1))
    hits = 0
    for seq in (seq_a, seq_b):
        context = trained.zero_context()
        for inp, target in seq:
            out, context = forward(trained, inp, context)
        hits += int(np.argmax(out) == np.argmax(target))
    assert hits == 2


@pytest.mark.parametrize("name,spec", sorted(network_specs(14).items()))
def test_gradient_check_all_system_specs(name, spec):
    net = init_network(spec, seed=13)
    rng = np.random.default_rng(3)
    inp = rng.uniform(0, 1, spec.n_input)
    target = rng.uniform(0, 1, spec.n_output)
    context = rng.uniform(0, 1, spec.n_hidden) if spec.recurrent else None
    assert gradient_check(net, inp, target, context, epsilon=1e-5) < 1e-4


def test_gradient_check_epsilon_bounds():
    net = init_network(NetworkSpec(2, 2, 1), seed=0)
    with pytest.raises(ValueError):
        gradient_check(net, np.zeros(2), np.zeros(1), epsilon=1e-2)


def test_corrupted_gradient_detected():
    net = init_network(NetworkSpec(3, 3, 2), seed=6)
    inp = np.array([0.2, 0.9, 0.4])
    target = np.array([1.0, 0.0])
    good = analytic_gradients(net, inp, target)
    numeric = numeric_gradients(net, inp, target)
    bad_hidden = good[0].copy()
    bad_hidden[0, 0] = -bad_hidden[0, 0]  # injected sign flip
    assert max_relative_error((bad_hidden, good[1]), numeric) > 0.1


def test_matched_tiny_gradients_count_as_agreement():
    a = (np.array([[1e-10]]), np.array([[0.0]]))
    b = (np.array([[-1e-10]]), np.array([[1e-12]]))
    assert max_relative_error(a, b) == 0.0


def test_combine_two_unit_output_formula():
    assert combine_two_unit_output(1.0, 0.0) == 1.0
    assert combine_two_unit_output(0.0, 1.0) == 0.0
    assert combine_two_unit_output(0.8, 0.3) == pytest.approx(0.56)


def test_combine_two_unit_output_range_check():
    with pytest.raises(ValueError):
        combine_two_unit_output(1.2, 0.0)
    with pytest.raises(ValueError):
        combine_two_unit_output(0.5, -0.1)


def test_save_load_round_trip(tmp_path):
    net = init_network(NetworkSpec(5, 4, 3, recurrent=True), seed=9)
    path = tmp_path / "weights.net"
    save_network(net, path)
    again = load_network(path)
    assert again.spec == net.spec
    assert np.array_equal(again.w_hidden, net.w_hidden)
    assert np.array_equal(again.w_output, net.w_output)
    x = np.linspace(0, 1, 5)
    ctx = np.linspace(1, 0, 4)
    assert np.array_equal(forward(net, x, ctx)[0], forward(again, x, ctx)[0])


def test_load_truncated_file(tmp_path):
    net = init_network(NetworkSpec(3, 2, 1), seed=0)
    path = tmp_path / "weights.net"
    save_network(net, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-2]) + "\n")
    with pytest.raises(WeightFileError, match="truncated|row"):
        load_network(path)


def test_load_version_mismatch(tmp_path):
    path = tmp_path / "weights.net"
    path.write_text("netfile v99\n")
    with pytest.raises(WeightFileError, match="version"):
        load_network(path)
