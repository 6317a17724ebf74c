import pytest

from flatspeech.fixtures import default_lexicon, fixture_corpus
from flatspeech.generator import GrammarConfig, generate_synthetic
from flatspeech.models import train_models
from flatspeech.network import TrainingConfig


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def paper_fixture_corpus():
    return fixture_corpus()


@pytest.fixture(scope="session")
def small_corpus(paper_fixture_corpus):
    return paper_fixture_corpus.merged_with(
        generate_synthetic(GrammarConfig(), size=40, seed=8))


@pytest.fixture(scope="session")
def quick_models(small_corpus, lexicon):
    """Lightly trained models: enough structure for pipeline tests, not
    tuned for accuracy assertions. The small repair nets get a longer
    schedule because several correction tests rely on their decisions."""
    base = TrainingConfig(epochs=60, learning_rate=0.5, hidden_units=14, seed=11)
    eq = TrainingConfig(epochs=600, learning_rate=0.5, hidden_units=14, seed=11)
    overrides = {name: eq for name in (
        "syn_equality", "sem_equality", "word_repair",
        "abs_syn_equality", "abs_sem_equality", "phrase_repair")}
    return train_models(small_corpus, lexicon, base, overrides)
