"""Flat syntactic/semantic analysis of speech-recognizer word lattices:
learned tagging over four category axes, incremental n-best decoding of
word graphs, disfluency repair, and an n-gram baseline for the recurrent
prediction networks."""

from .categories import AXES, BSEM, BSYN, ASEM, ASYN, CategoryScheme, CategoryVector, build_scheme
from .lexicon import Lexicon, LexiconEntry, ablate, average_default_vector, load_lexicon, lookup
from .network import Network, NetworkSpec, TrainingConfig, forward, gradient_check, init_network, train

__all__ = [
    "AXES", "BSYN", "ASYN", "BSEM", "ASEM",
    "CategoryScheme", "CategoryVector", "build_scheme",
    "Lexicon", "LexiconEntry", "ablate", "average_default_vector",
    "load_lexicon", "lookup",
    "Network", "NetworkSpec", "TrainingConfig", "forward", "gradient_check",
    "init_network", "train",
]

__version__ = "0.1.0"
