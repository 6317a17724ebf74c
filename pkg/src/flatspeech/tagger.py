"""Per-word category tagging: basic disambiguation, abstract categorization,
phrase-start detection, and phrase finalization.

Five recurrent networks run side by side, each with its own context vector
owned by a TaggerState, so any number of competing decoder sequences can
share one set of trained weights. Processing is strictly incremental: the
annotation of word i depends only on words 1..i.
"""

from dataclasses import dataclass, field

import numpy as np

from .categories import ASEM, ASYN, BSEM, BSYN, SCHEMES, CategoryVector
from .corpus import REASON_NONE
from .lexicon import Lexicon, lookup
from .network import Network, combine_two_unit_output, forward

SYN = "syn"
SEM = "sem"

PHRASE_BOUNDARY_THRESHOLD = 0.5

# (disambiguation input axis, abstract output axis) per side
_AXES = {SYN: (BSYN, ASYN), SEM: (BSEM, ASEM)}


@dataclass
class TaggerNets:
    """Trained weight sets for the five category networks."""

    syn_disambig: Network
    sem_disambig: Network
    syn_abstract: Network
    sem_abstract: Network
    phrase_start: Network

    def named(self):
        return {
            "syn_disambig": self.syn_disambig,
            "sem_disambig": self.sem_disambig,
            "syn_abstract": self.syn_abstract,
            "sem_abstract": self.sem_abstract,
            "phrase_start": self.phrase_start,
        }


class TaggerState:
    """Per-sequence recurrent contexts, reset to zeros at utterance start."""

    def __init__(self, nets: TaggerNets):
        self.contexts = {name: net.zero_context() for name, net in nets.named().items()}
        self.position = 0

    def copy(self):
        clone = object.__new__(TaggerState)
        clone.contexts = {k: v.copy() for k, v in self.contexts.items()}
        clone.position = self.position
        return clone


@dataclass
class TokenAnnotation:
    """Everything the flat analysis knows about one token. Deleted tokens
    keep their annotations; they are marked, never removed."""

    word: str
    known: bool
    basic_syn: CategoryVector
    basic_sem: CategoryVector
    abs_syn: CategoryVector
    abs_sem: CategoryVector
    phrase_start: float
    deleted: str | None = REASON_NONE
    repair: object = None  # RepairDecision for repair deletions

    @property
    def bsyn_label(self):
        return self.basic_syn.argmax_label()

    @property
    def bsem_label(self):
        return self.basic_sem.argmax_label()

    @property
    def asyn_label(self):
        return self.abs_syn.argmax_label()

    @property
    def asem_label(self):
        return self.abs_sem.argmax_label()

    def argmax_row(self):
        return (self.bsyn_label, self.bsem_label, self.asyn_label, self.asem_label)


def disambiguate(axis, nets: TaggerNets, state: TaggerState, ambiguous: CategoryVector):
    """Map an ambiguous membership vector to a graded single-category
    preference, conditioned on the running left context."""
    basic_axis, _ = _AXES[axis]
    if ambiguous.axis != basic_axis:
        raise ValueError(f"expected {basic_axis} vector, got {ambiguous.axis}")
    name = f"{axis}_disambig"
    net = getattr(nets, name)
    out, hidden = forward(net, ambiguous.values, state.contexts[name])
    state.contexts[name] = hidden
    return CategoryVector(basic_axis, out)


def abstract_map(axis, nets: TaggerNets, state: TaggerState, disambiguated: CategoryVector):
    """Map a disambiguated basic vector to the abstract axis."""
    basic_axis, abs_axis = _AXES[axis]
    if disambiguated.axis != basic_axis:
        raise ValueError(f"expected {basic_axis} vector, got {disambiguated.axis}")
    name = f"{axis}_abstract"
    net = getattr(nets, name)
    out, hidden = forward(net, disambiguated.values, state.contexts[name])
    state.contexts[name] = hidden
    return CategoryVector(abs_axis, out)


def phrase_start(nets: TaggerNets, state: TaggerState, disambiguated_syn: CategoryVector):
    """Boundary plausibility before the current word; the first word of an
    utterance is a boundary by rule."""
    if disambiguated_syn.axis != BSYN:
        raise ValueError(f"expected {BSYN} vector, got {disambiguated_syn.axis}")
    out, hidden = forward(nets.phrase_start, disambiguated_syn.values,
                          state.contexts["phrase_start"])
    state.contexts["phrase_start"] = hidden
    plaus = combine_two_unit_output(float(out[0]), float(out[1]))
    if state.position == 0:
        plaus = 1.0
    return plaus


def tag_step(lexicon: Lexicon, nets: TaggerNets, state: TaggerState, word: str):
    """Run one word through lookup, both disambiguations, both abstract
    mappings and the boundary net. Total: any token gets an annotation."""
    syn_amb, sem_amb, known = lookup(lexicon, word)
    dis_syn = disambiguate(SYN, nets, state, syn_amb)
    dis_sem = disambiguate(SEM, nets, state, sem_amb)
    abs_syn = abstract_map(SYN, nets, state, dis_syn)
    abs_sem = abstract_map(SEM, nets, state, dis_sem)
    boundary = phrase_start(nets, state, dis_syn)
    state.position += 1
    return TokenAnnotation(word, known, dis_syn, dis_sem, abs_syn, abs_sem, boundary)


def tag_sequence(lexicon: Lexicon, nets: TaggerNets, words):
    if not words:
        raise ValueError("empty word sequence")
    state = TaggerState(nets)
    return [tag_step(lexicon, nets, state, word) for word in words]


def finalize_phrases(annotations):
    """Partition the non-deleted tokens into phrases at boundary values
    >= 0.5; phrase syntax comes from its first word's abstract syntactic
    argmax, phrase semantics from its last word's abstract semantic argmax.

    Returns (span, asyn_label, asem_label) triples where span is the tuple
    of original token indices.
    """
    if not annotations:
        raise ValueError("empty annotation list")
    surviving = [(i, a) for i, a in enumerate(annotations) if a.deleted is REASON_NONE]
    groups = []
    for pos, (idx, ann) in enumerate(surviving):
        if pos == 0 or ann.phrase_start >= PHRASE_BOUNDARY_THRESHOLD:
            groups.append([])
        groups[-1].append((idx, ann))
    return [
        (tuple(idx for idx, _ in grp), grp[0][1].asyn_label, grp[-1][1].asem_label)
        for grp in groups
    ]


def format_annotations(annotations):
    """Machine-readable dump: one record per token."""
    lines = []
    for i, ann in enumerate(annotations):
        vecs = "\t".join(
            ",".join(f"{v:.6f}" for v in vec.values)
            for vec in (ann.basic_syn, ann.abs_syn, ann.basic_sem, ann.abs_sem))
        lines.append("\t".join([
            str(i), ann.word, ann.bsyn_label, ann.asyn_label, ann.bsem_label,
            ann.asem_label, f"{ann.phrase_start:.6f}",
            ann.deleted if ann.deleted else "none", vecs]))
    return "\n".join(lines) + "\n"
