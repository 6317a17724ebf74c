import math

import numpy as np
import pytest

from flatspeech.categories import BSEM, BSYN, CategoryVector
from flatspeech.models import init_models
from flatspeech.predictor import (
    PredictorState,
    SequenceScore,
    StepScore,
    combined_step,
    predict_next,
    sequence_score,
    step_plausibility,
)


@pytest.fixture(scope="module")
def models(lexicon):
    return init_models(lexicon, seed=4)


def one_hot(axis, label):
    return CategoryVector.one_hot(axis, label)


def test_predict_next_shape_and_context(models):
    state = PredictorState(models.predictor)
    out = predict_next("syn", models.predictor, state, one_hot(BSYN, "U"))
    assert out.axis == BSYN and len(out) == 13
    assert state.predicted_syn is out


def test_predict_next_axis_mismatch(models):
    state = PredictorState(models.predictor)
    with pytest.raises(ValueError):
        predict_next("syn", models.predictor, state, one_hot(BSEM, "NIL"))


def test_zero_net_uniform_prediction(lexicon):
    from flatspeech.models import assemble, network_specs
    from flatspeech.network import Network

    specs = network_specs(14)
    zeroed = {name: Network(spec,
                            np.zeros((spec.n_input + spec.n_context + 1, spec.n_hidden)),
                            np.zeros((spec.n_hidden + 1, spec.n_output)))
              for name, spec in specs.items()}
    models = assemble(lexicon, zeroed)
    state = PredictorState(models.predictor)
    out = predict_next("syn", models.predictor, state, one_hot(BSYN, "U"))
    assert np.allclose(out.values, 0.5)


def test_step_plausibility_selects_disambiguated_index():
    values = np.full(13, 0.1)
    values[1] = 0.9
    predicted = CategoryVector(BSYN, values)
    disambiguated = one_hot(BSYN, "V")
    assert step_plausibility(predicted, disambiguated) == 0.9


def test_step_plausibility_uniform():
    predicted = CategoryVector(BSYN, np.full(13, 0.5))
    assert step_plausibility(predicted, one_hot(BSYN, "O")) == 0.5


def test_step_plausibility_ignores_other_indices():
    base = np.linspace(0.1, 0.9, 13)
    predicted = CategoryVector(BSYN, base)
    other = base.copy()
    other[5] = 0.01  # not the selected index
    changed = CategoryVector(BSYN, other)
    target = one_hot(BSYN, "V")
    assert step_plausibility(predicted, target) == step_plausibility(changed, target)


def test_step_plausibility_axis_mismatch():
    with pytest.raises(ValueError):
        step_plausibility(CategoryVector(BSYN, np.full(13, 0.5)),
                          one_hot(BSEM, "NIL"))


def test_combined_step_products():
    assert combined_step(1.0, 1.0, 1.0) == 1.0
    assert combined_step(0.5, 1.0, 1.0) == 0.5
    assert combined_step(0.8, 0.5, 0.5) == pytest.approx(0.2)


def test_combined_step_range_check():
    with pytest.raises(ValueError):
        combined_step(1.2, 0.5, 0.5)


def test_sequence_score_single_step():
    score = sequence_score([StepScore(0.2, 1.0, 1.0)])
    assert score.normalized == pytest.approx(0.2)
    assert score.raw == pytest.approx(0.2)


def test_sequence_score_two_steps():
    score = sequence_score([StepScore(0.25, 1.0, 1.0), StepScore(0.25, 1.0, 1.0)])
    assert score.raw == pytest.approx(0.0625)
    assert score.normalized == pytest.approx(0.25)


def test_sequence_score_geometric_mean_identity():
    for n in (1, 3, 7):
        score = sequence_score([StepScore(0.4, 1.0, 1.0)] * n)
        assert score.normalized == pytest.approx(0.4)


def test_sequence_score_recomputable_from_steps():
    steps = (StepScore(0.5, 0.8, 0.9), StepScore(0.7, 0.6, 1.0))
    a = sequence_score(steps)
    b = SequenceScore.from_steps(steps)
    assert a.log_sum == b.log_sum and a.normalized == b.normalized


def test_ranking_monotonicity():
    base = [StepScore(0.5, 0.8, 0.9), StepScore(0.7, 0.6, 1.0), StepScore(0.3, 0.9, 0.8)]
    improved = list(base)
    improved[1] = StepScore(0.9, 0.6, 1.0)  # strictly larger combined
    low = sequence_score(base)
    high = sequence_score(improved)
    assert high.raw > low.raw and high.normalized > low.normalized


def test_permutation_invariance():
    steps = [StepScore(0.5, 0.8, 0.9), StepScore(0.7, 0.6, 1.0), StepScore(0.3, 0.9, 0.8)]
    a = sequence_score(steps)
    b = sequence_score(list(reversed(steps)))
    assert a.normalized == pytest.approx(b.normalized, abs=1e-15)


def test_acoustic_only_reduction():
    acoustics = [0.9, 0.4, 0.7]
    plain = sequence_score([StepScore(a, 1.0, 1.0) for a in acoustics])
    assert plain.raw == pytest.approx(math.prod(acoustics))


def test_empty_steps_rejected():
    with pytest.raises(ValueError):
        sequence_score([])
