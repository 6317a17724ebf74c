"""Fixed category inventories and dense category vectors.

Four label axes are used throughout: basic syntax (word level), abstract
syntax (phrase-group level), basic semantics (word level) and abstract
semantics (phrase-role level). Label order is fixed; every vector that
travels between modules is indexed against these schemes.
"""

from dataclasses import dataclass

import numpy as np

BSYN = "bsyn"
ASYN = "asyn"
BSEM = "bsem"
ASEM = "asem"

AXES = (BSYN, ASYN, BSEM, ASEM)

_LABELS = {
    BSYN: ("N", "V", "R", "U", "M", "P", "/", "J", "A", "C", "D", "I", "O"),
    ASYN: ("VG", "NG", "AG", "PG", "CG", "MG", "SG", "IG"),
    BSEM: ("SEL", "SUG", "MEET", "UTTER", "IS", "HAVE", "MOVE", "AUX",
           "QUEST", "PHYS", "ANIM", "ABS", "HERE", "SRC", "DEST", "LOC",
           "TIME", "NO", "YES", "NIL"),
    ASEM: ("ACT", "AUX", "AGENT", "OBJ", "RECIP", "INSTR", "MANNER",
           "TM-AT", "TM-FRM", "TM-TO", "LC-AT", "LC-FRM", "LC-TO",
           "CONF", "NEG", "QUEST", "MISC"),
}

_NAMES = {
    BSYN: ("noun", "verb", "preposition", "pronoun", "numeral", "participle",
           "pause", "adjective", "adverb", "conjunction", "determiner",
           "interjection", "other"),
    ASYN: ("verb group", "noun group", "adverbial group",
           "prepositional group", "conjunction group", "modus group",
           "special group", "interjection group"),
    BSEM: ("select", "suggest", "meet", "utter", "is", "have", "move", "aux",
           "question", "physical", "animate", "abstract", "here", "source",
           "destination", "location", "time", "negative evaluation",
           "positive evaluation", "nil"),
    ASEM: ("action", "aux-action", "agent", "object", "recipient",
           "instrument", "manner", "time-at", "time-from", "time-to",
           "loc-at", "loc-from", "loc-to", "confirmation", "negation",
           "question", "misc"),
}


@dataclass(frozen=True)
class CategoryScheme:
    """One label axis: an ordered, immutable inventory of category labels."""

    axis: str
    labels: tuple
    names: tuple

    def __post_init__(self):
        if len(self.labels) != len(set(self.labels)):
            raise ValueError(f"duplicate labels on axis {self.axis}")
        if len(self.labels) != len(self.names):
            raise ValueError(f"labels/names length mismatch on axis {self.axis}")

    def __len__(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown label {label!r} on axis {self.axis}") from None

    def __contains__(self, label):
        return label in self.labels


def build_scheme(axis: str) -> CategoryScheme:
    """Return the fixed inventory for one of the four axes. Idempotent."""
    if axis not in _LABELS:
        raise ValueError(f"unknown axis {axis!r}, expected one of {AXES}")
    return CategoryScheme(axis, _LABELS[axis], _NAMES[axis])


# Cardinalities are part of the contract; anything else is a build error.
assert len(_LABELS[BSYN]) == 13
assert len(_LABELS[ASYN]) == 8
assert len(_LABELS[BSEM]) == 20
assert len(_LABELS[ASEM]) == 17

SCHEMES = {axis: build_scheme(axis) for axis in AXES}


class CategoryVector:
    """Dense vector of per-label plausibilities over one axis, each in [0, 1].

    Argmax ties break toward the lowest index, so an untrained all-equal
    output still yields a well-defined label.
    """

    __slots__ = ("axis", "values")

    def __init__(self, axis: str, values):
        scheme = SCHEMES.get(axis)
        if scheme is None:
            raise ValueError(f"unknown axis {axis!r}")
        vals = np.asarray(values, dtype=np.float64)
        if vals.shape != (len(scheme),):
            raise ValueError(
                f"axis {axis} expects {len(scheme)} values, got shape {vals.shape}")
        if np.any(vals < 0.0) or np.any(vals > 1.0):
            raise ValueError(f"values outside [0, 1] on axis {axis}")
        self.axis = axis
        self.values = vals

    @classmethod
    def from_labels(cls, axis: str, labels) -> "CategoryVector":
        """Binary membership vector with a 1 at every given label."""
        scheme = SCHEMES[axis]
        vals = np.zeros(len(scheme))
        for label in labels:
            vals[scheme.index(label)] = 1.0
        return cls(axis, vals)

    @classmethod
    def one_hot(cls, axis: str, label: str) -> "CategoryVector":
        return cls.from_labels(axis, [label])

    @property
    def scheme(self) -> CategoryScheme:
        return SCHEMES[self.axis]

    def argmax_index(self) -> int:
        return int(np.argmax(self.values))

    def argmax_label(self) -> str:
        return self.scheme.labels[self.argmax_index()]

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        return (isinstance(other, CategoryVector) and self.axis == other.axis
                and np.array_equal(self.values, other.values))

    def __repr__(self):
        return f"CategoryVector({self.axis}, argmax={self.argmax_label()})"
