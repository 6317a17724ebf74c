"""Synthetic meeting-domain corpus and word-graph generation.

Utterances come from two sources: a verb-second clause generator that
scrambles constituents the way spontaneous German does (time phrase,
location phrase, object and subject move around the finite verb), and a
set of fixed conversational templates (confirmations, questions,
corrections). Every token carries gold labels on all four axes plus a
phrase-start flag. Disfluency noise (interjections, pauses, word
repetitions, category-equal substitution repairs, phrase restarts) is
injected with gold deletion marks, and word graphs are synthesized around
any utterance by laying its tokens on a centisecond timeline and adding
competing hypotheses drawn from the lexicon.
"""

import math
import random
from dataclasses import dataclass, field, replace

from .corpus import (
    REASON_INTERJECTION,
    REASON_NONE,
    REASON_PAUSE,
    REASON_PHRASE_REPAIR,
    REASON_WORD_REPAIR,
    TEST,
    TRAIN,
    AnnotatedCorpus,
    AnnotatedToken,
    Turn,
    Utterance,
)
from .lattice import WordGraph, WordHypothesis
from .lexicon import PAUSE_TOKEN, Lexicon


@dataclass(frozen=True)
class NoiseConfig:
    interjection_rate: float = 0.08
    repetition_rate: float = 0.05
    substitution_rate: float = 0.04
    restart_rate: float = 0.04
    confusion_rate: float = 0.85
    hyps_per_word: float = 6.3
    seed: int = 0

    def __post_init__(self):
        for name in ("interjection_rate", "repetition_rate",
                     "substitution_rate", "restart_rate", "confusion_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.hyps_per_word < 1.0:
            raise ValueError("hyps_per_word must be >= 1")


@dataclass(frozen=True)
class GrammarConfig:
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    max_utterances_per_turn: int = 2
    train_every: int = 3       # every n-th turn goes to the training split
    scrambled_share: float = 0.55
    conjoin_rate: float = 0.3


def _tok(word, bsyn, asyn, bsem, asem, start):
    return AnnotatedToken(word, bsyn, asyn, bsem, asem, bool(start))


# ---------------------------------------------------------------------------
# slot fillers: word lists sharing one (bsyn, bsem) labelling

_SLOTS = {
    "WD": ["Montag", "Dienstag", "Mittwoch", "Donnerstag", "Freitag"],
    "MON": ["März", "April", "Mai", "Juni"],
    "NUM": ["zwei", "drei", "vier", "fünf", "sechs", "sieben", "acht",
            "neun", "zehn", "elf", "zwölf", "vierzehn"],
    "ORD": ["ersten", "zweiten", "dritten", "sechsten", "vierzehnten"],
    "CITY": ["Hamburg", "Bonn", "München"],
    "PLACE": ["Büro", "Hotel", "Bahnhof"],
    "APPT": ["Termin", "Arzttermin", "Besprechung"],
}


def _fill(surface, rng):
    return rng.choice(_SLOTS[surface]) if surface in _SLOTS else surface


# ---------------------------------------------------------------------------
# scrambled verb-second statements

def _time_phrase(rng):
    kind = rng.randrange(7)
    if kind == 0:
        return [_tok(_fill("WD", rng), "N", "PG", "TIME", "TM-AT", 0)], "am"
    if kind == 1:
        return [_tok(_fill("MON", rng), "N", "PG", "TIME", "TM-AT", 0)], "im"
    if kind == 2:
        return [_tok(_fill("NUM", rng), "M", "PG", "TIME", "TM-AT", 0),
                _tok("Uhr", "N", "PG", "TIME", "TM-AT", 0)], "um"
    if kind == 3:
        return [_tok(_fill("NUM", rng), "M", "PG", "TIME", "TM-AT", 0),
                _tok("Uhr", "N", "PG", "TIME", "TM-AT", 0),
                _tok(_fill("NUM", rng), "M", "PG", "TIME", "TM-AT", 0)], "um"
    if kind == 4:
        return [_tok(_fill("ORD", rng), "M", "PG", "TIME", "TM-AT", 0),
                _tok(_fill("MON", rng), "N", "PG", "TIME", "TM-AT", 0)], "am"
    if kind == 5:
        return [_tok("heute" if rng.random() < 0.5 else "morgen",
                     "A", "AG", "TIME", "TM-AT", 1)], None
    return [_tok("von", "R", "PG", "SRC", "TM-FRM", 1),
            _tok(_fill("NUM", rng), "M", "PG", "TIME", "TM-FRM", 0),
            _tok("bis", "R", "PG", "DEST", "TM-TO", 1),
            _tok(_fill("NUM", rng), "M", "PG", "TIME", "TM-TO", 0),
            _tok("Uhr", "N", "PG", "TIME", "TM-TO", 0)], None


def _time_constituent(rng):
    tokens, prep = _time_phrase(rng)
    if prep is None:
        tokens[0] = replace(tokens[0], phrase_start=True)
        return tokens
    return [_tok(prep, "R", "PG", "HERE", "TM-AT", 1)] + tokens


def _loc_constituent(rng):
    kind = rng.randrange(5)
    if kind == 0:
        return [_tok("in", "R", "PG", "HERE", "LC-AT", 1),
                _tok(_fill("CITY", rng), "N", "PG", "LOC", "LC-AT", 0)]
    if kind == 1:
        return [_tok("zum", "R", "PG", "HERE", "LC-AT", 1),
                _tok(_fill("PLACE", rng), "N", "PG", "PHYS", "LC-AT", 0)]
    if kind == 2:
        return [_tok("beim", "R", "PG", "HERE", "LC-AT", 1),
                _tok("Zahnarzt", "N", "PG", "ANIM", "LC-AT", 0)]
    if kind == 3:
        return [_tok("nach", "R", "PG", "DEST", "LC-TO", 1),
                _tok(_fill("CITY", rng), "N", "PG", "LOC", "LC-TO", 0)]
    return [_tok("außer", "R", "PG", "HERE", "LC-AT", 1),
            _tok("Hause", "N", "PG", "PHYS", "LC-AT", 0)]


def _object_constituent(rng):
    kind = rng.randrange(4)
    if kind == 0:
        return [_tok("einen", "D", "NG", "NIL", "OBJ", 1),
                _tok(_fill("APPT", rng), "N", "NG", "ABS", "OBJ", 0)]
    if kind == 1:
        return [_tok("keine", "D", "NG", "NO", "NEG", 1),
                _tok("Zeit", "N", "NG", "TIME", "NEG", 0)]
    if kind == 2:
        return [_tok("den", "D", "NG", "NIL", "OBJ", 1),
                _tok(rng.choice(["früheren", "späteren", "nächsten"]),
                     "J", "NG", "TIME", "OBJ", 0),
                _tok("Termin", "N", "NG", "ABS", "OBJ", 0)]
    return [_tok("das", "D", "NG", "NIL", "OBJ", 1),
            _tok("Treffen", "N", "NG", "ABS", "OBJ", 0)]


def _adverb_constituent(rng):
    word, bsem, asyn, asem = rng.choice([
        ("gerne", "YES", "SG", "MISC"), ("leider", "NIL", "SG", "MISC"),
        ("schon", "NIL", "SG", "MISC"), ("noch", "NIL", "SG", "MISC"),
        ("dann", "NIL", "SG", "MISC"), ("da", "HERE", "AG", "MISC")])
    return [_tok(word, "A", asyn, bsem, asem, 1)]


# (verb word, basic sem, subject word, mandatory, optional constituents)
_VERB_FRAMES = [
    ("habe", "HAVE", "ich", ["obj"], ["time", "adv"]),
    ("hätte", "HAVE", "ich", ["obj"], ["adv"]),
    ("haben", "HAVE", "wir", ["obj"], ["time"]),
    ("treffen", "MEET", "wir", ["recip"], ["time", "loc"]),
    ("komme", "MOVE", "ich", [], ["adv", "loc", "time"]),
    ("gehe", "MOVE", "ich", [], ["adv", "loc", "time"]),
    ("bin", "IS", "ich", [], ["adv", "loc", "time"]),
]

_CONSTITUENT_BUILDERS = {
    "time": _time_constituent,
    "loc": _loc_constituent,
    "obj": _object_constituent,
    "adv": _adverb_constituent,
    "recip": lambda rng: [_tok("uns", "U", "NG", "ANIM", "RECIP", 1)],
}


def _scrambled_statement(rng):
    verb, bsem, subj, mandatory, optional = rng.choice(_VERB_FRAMES)
    picks = list(mandatory)
    extras = [c for c in optional if rng.random() < 0.55]
    if not picks and not extras:
        extras = [rng.choice(optional)]
    picks += extras
    constituents = [_CONSTITUENT_BUILDERS[name](rng) for name in picks]
    subject = [_tok(subj, "U", "NG", "ANIM", "AGENT", 1)]
    verb_tok = [_tok(verb, "V", "VG", bsem, "ACT", 1)]
    movable = [subject] + constituents
    front = rng.choice(movable)
    rest = [c for c in movable if c is not front]
    rng.shuffle(rest)
    tokens = list(front) + verb_tok
    for constituent in rest:
        tokens.extend(constituent)
    return tokens


# ---------------------------------------------------------------------------
# fixed conversational templates: (weight, [(surface, labels...)])

_TEMPLATES = [
    (1, [("ja", "O", "MG", "YES", "CONF", 1),
         ("dann", "A", "SG", "NIL", "MISC", 1),
         ("ist", "V", "VG", "IS", "ACT", 1),
         ("das", "U", "NG", "ABS", "OBJ", 1),
         ("kein", "D", "NG", "NO", "NEG", 1),
         ("Problem", "N", "NG", "ABS", "NEG", 0)]),
    (1, [("der", "D", "NG", "NIL", "TM-AT", 1),
         ("ORD", "M", "NG", "TIME", "TM-AT", 0),
         ("ist", "V", "VG", "IS", "ACT", 1),
         ("ein", "D", "NG", "NIL", "OBJ", 1),
         ("WD", "N", "NG", "TIME", "OBJ", 0)]),
    (1, [("wann", "A", "MG", "QUEST", "QUEST", 1),
         ("treffen", "V", "VG", "MEET", "ACT", 1),
         ("wir", "U", "NG", "ANIM", "AGENT", 1),
         ("uns", "U", "NG", "ANIM", "RECIP", 1)]),
    (1, [("wann", "A", "MG", "QUEST", "QUEST", 1),
         ("treffen", "V", "VG", "MEET", "ACT", 1),
         ("wir", "U", "NG", "ANIM", "AGENT", 1),
         ("uns", "U", "NG", "ANIM", "RECIP", 1),
         ("in", "R", "PG", "HERE", "LC-AT", 1),
         ("CITY", "N", "PG", "LOC", "LC-AT", 0)]),
    (1, [("wann", "A", "MG", "QUEST", "QUEST", 1),
         ("habe", "V", "VG", "HAVE", "ACT", 1),
         ("ich", "U", "NG", "ANIM", "AGENT", 1),
         ("da", "A", "AG", "HERE", "MISC", 1),
         ("den", "D", "NG", "NIL", "OBJ", 1),
         ("nächsten", "J", "NG", "TIME", "OBJ", 0),
         ("Termin", "N", "NG", "ABS", "OBJ", 0)]),
    (1, [("das", "U", "NG", "ABS", "OBJ", 1),
         ("ist", "V", "VG", "IS", "ACT", 1),
         ("schlecht", "J", "MG", "NO", "NEG", 1)]),
    (1, [("das", "U", "NG", "ABS", "OBJ", 1),
         ("ist", "V", "VG", "IS", "ACT", 1),
         ("gut", "J", "MG", "YES", "CONF", 1)]),
    (1, [("das", "U", "NG", "ABS", "OBJ", 1),
         ("wäre", "V", "VG", "AUX", "AUX", 1),
         ("gut", "J", "MG", "YES", "CONF", 1)]),
    (2, [("ich", "U", "NG", "ANIM", "AGENT", 1),
         ("meine", "V", "VG", "UTTER", "ACT", 1),
         ("natürlich", "A", "SG", "NIL", "MISC", 1),
         ("MON", "N", "NG", "TIME", "TM-AT", 1)]),
    (1, [("ich", "U", "NG", "ANIM", "AGENT", 1),
         ("meine", "V", "VG", "UTTER", "ACT", 1),
         ("natürlich", "A", "SG", "NIL", "MISC", 1),
         ("den", "D", "NG", "NIL", "OBJ", 1),
         ("APPT", "N", "NG", "ABS", "OBJ", 0)]),
    (1, [("wir", "U", "NG", "ANIM", "AGENT", 1),
         ("brauchen", "V", "VG", "SEL", "ACT", 1),
         ("den", "D", "NG", "NIL", "OBJ", 1),
         ("späteren", "J", "NG", "TIME", "OBJ", 0),
         ("Termin", "N", "NG", "ABS", "OBJ", 0)]),
    (1, [("wir", "U", "NG", "ANIM", "AGENT", 1),
         ("nehmen", "V", "VG", "SEL", "ACT", 1),
         ("den", "D", "NG", "NIL", "OBJ", 1),
         ("früheren", "J", "NG", "TIME", "OBJ", 0),
         ("Termin", "N", "NG", "ABS", "OBJ", 0)]),
    (1, [("prima", "A", "MG", "YES", "CONF", 1),
         ("vielen", "J", "SG", "NIL", "MISC", 1),
         ("Dank", "N", "SG", "ABS", "MISC", 0)]),
    (1, [("ich", "U", "NG", "ANIM", "AGENT", 1),
         ("dachte", "V", "VG", "UTTER", "ACT", 1),
         ("an", "R", "PG", "HERE", "TM-AT", 1),
         ("die", "D", "PG", "NIL", "TM-AT", 0),
         ("nächste", "J", "PG", "TIME", "TM-AT", 0),
         ("Woche", "N", "PG", "TIME", "TM-AT", 0)]),
    (1, [("das", "D", "NG", "NIL", "OBJ", 1),
         ("Treffen", "N", "NG", "ABS", "OBJ", 0),
         ("ist", "V", "VG", "IS", "ACT", 1),
         ("am", "R", "PG", "HERE", "TM-AT", 1),
         ("WD", "N", "PG", "TIME", "TM-AT", 0)]),
    # short clause family: confirmation openers lead into clock times,
    # the question opener into locations, over shared clause middles
    (1, [('ja', 'O', 'MG', 'YES', 'CONF', 1),
         ('treffen', 'V', 'VG', 'MEET', 'ACT', 1),
         ('wir', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('uns', 'U', 'NG', 'ANIM', 'RECIP', 1),
         ('dann', 'A', 'SG', 'NIL', 'MISC', 1),
         ('um', 'R', 'PG', 'HERE', 'TM-AT', 1),
         ('NUM', 'M', 'PG', 'TIME', 'TM-AT', 0),
         ('Uhr', 'N', 'PG', 'TIME', 'TM-AT', 0)]),
    (1, [('gut', 'A', 'MG', 'YES', 'CONF', 1),
         ('treffen', 'V', 'VG', 'MEET', 'ACT', 1),
         ('wir', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('uns', 'U', 'NG', 'ANIM', 'RECIP', 1),
         ('dann', 'A', 'SG', 'NIL', 'MISC', 1),
         ('um', 'R', 'PG', 'HERE', 'TM-AT', 1),
         ('NUM', 'M', 'PG', 'TIME', 'TM-AT', 0),
         ('Uhr', 'N', 'PG', 'TIME', 'TM-AT', 0)]),
    (2, [('wann', 'A', 'MG', 'QUEST', 'QUEST', 1),
         ('treffen', 'V', 'VG', 'MEET', 'ACT', 1),
         ('wir', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('uns', 'U', 'NG', 'ANIM', 'RECIP', 1),
         ('dann', 'A', 'SG', 'NIL', 'MISC', 1),
         ('in', 'R', 'PG', 'HERE', 'LC-AT', 1),
         ('CITY', 'N', 'PG', 'LOC', 'LC-AT', 0)]),
    (1, [('ja', 'O', 'MG', 'YES', 'CONF', 1),
         ('komme', 'V', 'VG', 'MOVE', 'ACT', 1),
         ('ich', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('dann', 'A', 'SG', 'NIL', 'MISC', 1),
         ('gerne', 'A', 'SG', 'YES', 'MISC', 1),
         ('um', 'R', 'PG', 'HERE', 'TM-AT', 1),
         ('NUM', 'M', 'PG', 'TIME', 'TM-AT', 0),
         ('Uhr', 'N', 'PG', 'TIME', 'TM-AT', 0)]),
    (1, [('gut', 'A', 'MG', 'YES', 'CONF', 1),
         ('komme', 'V', 'VG', 'MOVE', 'ACT', 1),
         ('ich', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('dann', 'A', 'SG', 'NIL', 'MISC', 1),
         ('gerne', 'A', 'SG', 'YES', 'MISC', 1),
         ('um', 'R', 'PG', 'HERE', 'TM-AT', 1),
         ('NUM', 'M', 'PG', 'TIME', 'TM-AT', 0),
         ('Uhr', 'N', 'PG', 'TIME', 'TM-AT', 0)]),
    (2, [('wann', 'A', 'MG', 'QUEST', 'QUEST', 1),
         ('komme', 'V', 'VG', 'MOVE', 'ACT', 1),
         ('ich', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('dann', 'A', 'SG', 'NIL', 'MISC', 1),
         ('gerne', 'A', 'SG', 'YES', 'MISC', 1),
         ('in', 'R', 'PG', 'HERE', 'LC-AT', 1),
         ('CITY', 'N', 'PG', 'LOC', 'LC-AT', 0)]),
    (1, [('ja', 'O', 'MG', 'YES', 'CONF', 1),
         ('habe', 'V', 'VG', 'HAVE', 'ACT', 1),
         ('ich', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('da', 'A', 'AG', 'HERE', 'MISC', 1),
         ('noch', 'A', 'SG', 'NIL', 'MISC', 1),
         ('um', 'R', 'PG', 'HERE', 'TM-AT', 1),
         ('NUM', 'M', 'PG', 'TIME', 'TM-AT', 0),
         ('Uhr', 'N', 'PG', 'TIME', 'TM-AT', 0)]),
    (1, [('gut', 'A', 'MG', 'YES', 'CONF', 1),
         ('habe', 'V', 'VG', 'HAVE', 'ACT', 1),
         ('ich', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('da', 'A', 'AG', 'HERE', 'MISC', 1),
         ('noch', 'A', 'SG', 'NIL', 'MISC', 1),
         ('um', 'R', 'PG', 'HERE', 'TM-AT', 1),
         ('NUM', 'M', 'PG', 'TIME', 'TM-AT', 0),
         ('Uhr', 'N', 'PG', 'TIME', 'TM-AT', 0)]),
    (2, [('wann', 'A', 'MG', 'QUEST', 'QUEST', 1),
         ('habe', 'V', 'VG', 'HAVE', 'ACT', 1),
         ('ich', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('da', 'A', 'AG', 'HERE', 'MISC', 1),
         ('noch', 'A', 'SG', 'NIL', 'MISC', 1),
         ('in', 'R', 'PG', 'HERE', 'LC-AT', 1),
         ('CITY', 'N', 'PG', 'LOC', 'LC-AT', 0)]),
    (1, [('ja', 'O', 'MG', 'YES', 'CONF', 1),
         ('gehe', 'V', 'VG', 'MOVE', 'ACT', 1),
         ('ich', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('da', 'A', 'AG', 'HERE', 'MISC', 1),
         ('gerne', 'A', 'SG', 'YES', 'MISC', 1),
         ('um', 'R', 'PG', 'HERE', 'TM-AT', 1),
         ('NUM', 'M', 'PG', 'TIME', 'TM-AT', 0),
         ('Uhr', 'N', 'PG', 'TIME', 'TM-AT', 0)]),
    (1, [('gut', 'A', 'MG', 'YES', 'CONF', 1),
         ('gehe', 'V', 'VG', 'MOVE', 'ACT', 1),
         ('ich', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('da', 'A', 'AG', 'HERE', 'MISC', 1),
         ('gerne', 'A', 'SG', 'YES', 'MISC', 1),
         ('um', 'R', 'PG', 'HERE', 'TM-AT', 1),
         ('NUM', 'M', 'PG', 'TIME', 'TM-AT', 0),
         ('Uhr', 'N', 'PG', 'TIME', 'TM-AT', 0)]),
    (2, [('wann', 'A', 'MG', 'QUEST', 'QUEST', 1),
         ('gehe', 'V', 'VG', 'MOVE', 'ACT', 1),
         ('ich', 'U', 'NG', 'ANIM', 'AGENT', 1),
         ('da', 'A', 'AG', 'HERE', 'MISC', 1),
         ('gerne', 'A', 'SG', 'YES', 'MISC', 1),
         ('in', 'R', 'PG', 'HERE', 'LC-AT', 1),
         ('CITY', 'N', 'PG', 'LOC', 'LC-AT', 0)]),
    (2, [("ja", "O", "MG", "YES", "CONF", 1),
         ("genau", "A", "MG", "YES", "CONF", 0),
         ("allerdings", "A", "SG", "NIL", "MISC", 1),
         ("habe", "V", "VG", "HAVE", "ACT", 1),
         ("ich", "U", "NG", "ANIM", "AGENT", 1),
         ("da", "A", "AG", "HERE", "MISC", 1),
         ("von", "R", "PG", "SRC", "TM-FRM", 1),
         ("NUM", "M", "PG", "TIME", "TM-FRM", 0),
         ("bis", "R", "PG", "DEST", "TM-TO", 1),
         ("NUM", "M", "PG", "TIME", "TM-TO", 0),
         ("Uhr", "N", "PG", "TIME", "TM-TO", 0),
         ("schon", "A", "SG", "NIL", "MISC", 1),
         ("einen", "D", "NG", "NIL", "OBJ", 1),
         ("APPT", "N", "NG", "ABS", "OBJ", 0)]),
]

_TEMPLATE_WEIGHTS = [w for w, _ in _TEMPLATES]
_TEMPLATES = [tpl for _, tpl in _TEMPLATES]

_INTERJECTIONS = ["ähm", "eh", "oh", "also", PAUSE_TOKEN]

_OPENERS = [
    ("ja", "O", "MG", "YES", "CONF"),
    ("nein", "O", "MG", "NO", "NEG"),
    ("gut", "A", "MG", "YES", "CONF"),
    ("genau", "A", "MG", "YES", "CONF"),
    ("prima", "A", "MG", "YES", "CONF"),
    ("richtig", "A", "MG", "YES", "CONF"),
]

_FIXED_HEADS = {"ja", "gut", "genau", "prima", "richtig", "nein", "wann"}

_CONJUNCTIONS = ["und", "oder", "aber"]


def _interjection_token(word):
    if word == PAUSE_TOKEN:
        return AnnotatedToken(word, "/", "IG", "NIL", "MISC", True, REASON_PAUSE)
    return AnnotatedToken(word, "I", "IG", "NIL", "MISC", True, REASON_INTERJECTION)


_FREE_ADVERBS = [
    ("schon", "A", "SG", "NIL", "MISC"),
    ("noch", "A", "SG", "NIL", "MISC"),
    ("dann", "A", "SG", "NIL", "MISC"),
    ("leider", "A", "SG", "NIL", "MISC"),
    ("gerne", "A", "SG", "YES", "MISC"),
    ("da", "A", "AG", "HERE", "MISC"),
]


def _draw_clause(config: GrammarConfig, rng: random.Random) -> list:
    if rng.random() < config.scrambled_share:
        tokens = _scrambled_statement(rng)
    else:
        template = rng.choices(_TEMPLATES, weights=_TEMPLATE_WEIGHTS, k=1)[0]
        tokens = [_tok(_fill(surface, rng), bsyn, asyn, bsem, asem, start)
                  for surface, bsyn, asyn, bsem, asem, start in template]
        if tokens[0].word in _FIXED_HEADS:
            return tokens
        for _ in range(2):
            if rng.random() < 0.3:
                spots = [i for i in range(1, len(tokens)) if tokens[i].phrase_start]
                if spots:
                    word, bsyn, asyn, bsem, asem = rng.choice(_FREE_ADVERBS)
                    tokens.insert(rng.choice(spots), _tok(word, bsyn, asyn, bsem, asem, 1))
    if rng.random() < 0.35:
        word, bsyn, asyn, bsem, asem = rng.choice(_OPENERS)
        tokens.insert(0, _tok(word, bsyn, asyn, bsem, asem, 1))
    return tokens


def _clean_utterance(config: GrammarConfig, rng: random.Random) -> list:
    tokens = _draw_clause(config, rng)
    if tokens[0].word in _FIXED_HEADS:
        return tokens
    # statements chain with conjunctions, occasionally more than once
    while rng.random() < config.conjoin_rate:
        second = _draw_clause(config, rng)
        if second[0].word in _FIXED_HEADS:
            break
        word = rng.choice(_CONJUNCTIONS)
        tokens = tokens + [_tok(word, "C", "CG", "NIL", "MISC", 1)] + second
    return tokens


def _substitute_word(tok: AnnotatedToken, rng: random.Random):
    """A different surface word carrying the same basic categories, if the
    grammar has one; used to fabricate substitution repairs."""
    for slot in _SLOTS.values():
        if tok.word in slot:
            others = [w for w in slot if w != tok.word]
            if others:
                return rng.choice(others)
    return None


def add_noise(tokens, noise: NoiseConfig, rng: random.Random):
    """Inject gold-marked disfluencies into a clean token list."""
    # word repetitions and substitution repairs: the earlier copy is the
    # reparandum and keeps the boundary flag of the surviving token
    noisy = []
    for tok in tokens:
        if rng.random() < noise.repetition_rate:
            noisy.append(replace(tok, deleted=REASON_WORD_REPAIR))
        elif rng.random() < noise.substitution_rate:
            alt = _substitute_word(tok, rng)
            if alt is not None:
                noisy.append(replace(tok, word=alt, deleted=REASON_WORD_REPAIR))
        noisy.append(tok)

    # phrase restarts: duplicate a whole phrase in front of itself
    phrases = []
    for tok in noisy:
        if not phrases or tok.phrase_start:
            phrases.append([])
        phrases[-1].append(tok)
    restarted = []
    for phrase in phrases:
        clean = [t for t in phrase if t.deleted is REASON_NONE]
        if clean and len(phrases) > 1 and rng.random() < noise.restart_rate:
            restarted.extend(replace(t, deleted=REASON_PHRASE_REPAIR) for t in clean)
        restarted.extend(phrase)

    # interjections and pauses in any gap, including utterance-initially
    final = []
    for tok in restarted:
        if rng.random() < noise.interjection_rate:
            final.append(_interjection_token(rng.choice(_INTERJECTIONS)))
        final.append(tok)
    if rng.random() < noise.interjection_rate:
        final.append(_interjection_token(rng.choice(_INTERJECTIONS)))
    return final


def generate_synthetic(config: GrammarConfig, size: int, seed: int) -> AnnotatedCorpus:
    """Emit `size` turns of gold-annotated noisy utterances; every
    `train_every`-th turn lands in the training split."""
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = random.Random(seed)
    turns = []
    for i in range(size):
        n_utts = rng.randint(1, config.max_utterances_per_turn)
        utts = []
        for _ in range(n_utts):
            tokens = add_noise(_clean_utterance(config, rng), config.noise, rng)
            utts.append(Utterance(tuple(tokens)))
        split = TRAIN if i % config.train_every == 0 else TEST
        turns.append(Turn(f"s{i:04d}", split, tuple(utts)))
    return AnnotatedCorpus(turns)


def synth_word_graph(utterance: Utterance, noise: NoiseConfig,
                     lexicon: Lexicon, seed: int) -> WordGraph:
    """Lay the utterance tokens on a timeline and surround them with
    competing hypotheses. The gold path always exists and is connectable;
    competitors score mostly below the gold word at the same position but
    occasionally above it, so acoustics alone can misrank.
    """
    if not utterance.tokens:
        raise ValueError("empty utterance")
    rng = random.Random(seed)
    vocab = lexicon.words()
    hyps = []
    gold_spans = []
    start_c = 1
    for tok in utterance.tokens:
        dur = rng.randint(15, 40)
        end_c = start_c + dur
        gold_p = rng.uniform(0.35, 0.95)
        hyps.append(WordHypothesis(start_c / 100.0, end_c / 100.0, tok.word, gold_p))
        gold_spans.append((start_c, end_c, gold_p))
        start_c = end_c + 1

    if noise.confusion_rate > 0.0:
        n_slots = math.ceil(max(noise.hyps_per_word - 1.0, 0.0) / noise.confusion_rate)
        for i, (s_c, e_c, gold_p) in enumerate(gold_spans):
            for _ in range(n_slots):
                if rng.random() >= noise.confusion_rate:
                    continue
                word = rng.choice(vocab)
                while word == utterance.tokens[i].word.casefold():
                    word = rng.choice(vocab)
                jitter_s = s_c + rng.choice((0, 0, 1, 2)) if i > 0 else s_c + rng.choice((0, 0, 1))
                jitter_e = e_c - rng.choice((0, 0, 1, 2))
                if jitter_e <= jitter_s:
                    jitter_e = jitter_s + 1
                p = min(0.999, max(1e-6, gold_p * rng.uniform(0.35, 1.15)))
                hyps.append(WordHypothesis(jitter_s / 100.0, jitter_e / 100.0, word, p))
            # occasional split/merge variants
            if rng.random() < 0.04:
                mid = (s_c + e_c) // 2
                if mid > s_c and mid + 1 < e_c:
                    for a, b in ((s_c, mid), (mid + 1, e_c)):
                        hyps.append(WordHypothesis(
                            a / 100.0, b / 100.0, rng.choice(vocab),
                            max(1e-6, gold_p * rng.uniform(0.3, 0.8))))
            if i + 1 < len(gold_spans) and rng.random() < 0.04:
                s2, e2, p2 = gold_spans[i + 1]
                hyps.append(WordHypothesis(
                    s_c / 100.0, e2 / 100.0, rng.choice(vocab),
                    max(1e-6, min(gold_p, p2) * rng.uniform(0.3, 0.8))))
    return WordGraph(hyps)
