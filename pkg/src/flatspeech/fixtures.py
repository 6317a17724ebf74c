"""Loaders for the packaged fixture data: the meeting lexicon, the
hand-annotated fixture corpus and the demo word graph."""

from importlib import resources

from .corpus import AnnotatedCorpus, parse_corpus
from .lattice import WordGraph, WordHypothesis
from .lexicon import Lexicon, parse_lexicon


def _read(name: str) -> str:
    return resources.files("flatspeech").joinpath("data", name).read_text(encoding="utf-8")


def default_lexicon() -> Lexicon:
    return parse_lexicon(_read("meeting.lexicon"), source="meeting.lexicon")


def fixture_corpus() -> AnnotatedCorpus:
    return parse_corpus(_read("meeting_fixtures.corpus"), source="meeting_fixtures.corpus")


def demo_word_graph() -> WordGraph:
    hyps = []
    for lineno, raw in enumerate(_read("demo.lattice").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        start, end, word, plaus = line.split("\t")
        hyps.append(WordHypothesis(float(start), float(end), word, float(plaus)))
    return WordGraph(hyps)

DEMO_SENTENCE = ("ähm", "am", "sechsten", "April", "bin", "ich",
                 "leider", "außer", "Hause")
