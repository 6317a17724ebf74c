"""Disfluency correction: pause/interjection elimination plus learned
word- and phrase-repair detection.

Repairs are driven by three equality preferences between neighbours
(lexical, syntactic, semantic); small feedforward nets turn the
preferences into a delete/keep decision. Deletion always targets the
EARLIER occurrence (the reparandum) and only ever marks tokens; the
surviving stream is re-tagged so deleted tokens stop feeding the
recurrent contexts.
"""

from dataclasses import dataclass, replace

import numpy as np

from .categories import SCHEMES, BSYN
from .corpus import (
    REASON_INTERJECTION,
    REASON_NONE,
    REASON_PAUSE,
    REASON_PHRASE_REPAIR,
    REASON_WORD_REPAIR,
)
from .lexicon import PAUSE_TOKEN, lookup
from .network import Network, combine_two_unit_output, forward
from .tagger import TaggerState, finalize_phrases, tag_step

DECISION_THRESHOLD = 0.5

_I_INDEX = SCHEMES[BSYN].index("I")
_PAUSE_INDEX = SCHEMES[BSYN].index("/")


@dataclass
class CorrectionNets:
    syn_equality: Network       # paired basic syntactic vectors, 26 wide
    sem_equality: Network       # paired basic semantic vectors, 40 wide
    word_repair: Network        # three preferences -> delete earlier word
    abs_syn_equality: Network   # paired abstract syntactic vectors, 16 wide
    abs_sem_equality: Network   # paired abstract semantic vectors, 34 wide
    phrase_repair: Network      # three preferences -> delete earlier phrase

    def named(self):
        return {
            "syn_equality": self.syn_equality,
            "sem_equality": self.sem_equality,
            "word_repair": self.word_repair,
            "abs_syn_equality": self.abs_syn_equality,
            "abs_sem_equality": self.abs_sem_equality,
            "phrase_repair": self.phrase_repair,
        }


@dataclass(frozen=True)
class EqualityPreferences:
    lexical: float
    syntactic: float
    semantic: float

    def __post_init__(self):
        if self.lexical not in (0.0, 1.0):
            raise ValueError("lexical equality is a binary test")
        if not (0.0 <= self.syntactic <= 1.0 and 0.0 <= self.semantic <= 1.0):
            raise ValueError("equality preferences must be in [0, 1]")

    def as_array(self):
        return np.array([self.lexical, self.syntactic, self.semantic])


@dataclass(frozen=True)
class RepairDecision:
    kind: str                # "word" or "phrase"
    deleted_span: tuple      # token indices marked by this decision
    preferences: EqualityPreferences
    score: float


def pause_or_interjection_reason(word, syn_membership, known):
    """Symbolic occurrence test, no network involved."""
    if word == PAUSE_TOKEN:
        return REASON_PAUSE
    if known and syn_membership.values[_PAUSE_INDEX] == 1.0:
        return REASON_PAUSE
    if known and syn_membership.values[_I_INDEX] == 1.0:
        return REASON_INTERJECTION
    return None


def detect_pause_or_interjection(word, syn_membership, known) -> bool:
    return pause_or_interjection_reason(word, syn_membership, known) is not None


def _two_unit(net, features):
    out, _ = forward(net, features)
    return combine_two_unit_output(float(out[0]), float(out[1]))


def word_equality(w1, w2, ann1, ann2, nets: CorrectionNets) -> EqualityPreferences:
    """Preferences for (earlier word, later word): exact string equality
    plus net-judged basic category equality."""
    lexical = float(w1.casefold() == w2.casefold())
    syntactic = _two_unit(nets.syn_equality,
                          np.concatenate([ann1.basic_syn.values, ann2.basic_syn.values]))
    semantic = _two_unit(nets.sem_equality,
                         np.concatenate([ann1.basic_sem.values, ann2.basic_sem.values]))
    return EqualityPreferences(lexical, syntactic, semantic)


def repair_score(prefs: EqualityPreferences, net: Network) -> float:
    return _two_unit(net, prefs.as_array())


def decide_word_error(prefs: EqualityPreferences, net: Network) -> bool:
    return repair_score(prefs, net) >= DECISION_THRESHOLD


def phrase_equality(p1, p2, nets: CorrectionNets) -> EqualityPreferences:
    """Preferences for two adjacent phrases, each a list of annotations:
    equality of first words, of abstract syntactic vectors (first words)
    and of abstract semantic vectors (last words)."""
    lexical = float(p1[0].word.casefold() == p2[0].word.casefold())
    syntactic = _two_unit(nets.abs_syn_equality,
                          np.concatenate([p1[0].abs_syn.values, p2[0].abs_syn.values]))
    semantic = _two_unit(nets.abs_sem_equality,
                         np.concatenate([p1[-1].abs_sem.values, p2[-1].abs_sem.values]))
    return EqualityPreferences(lexical, syntactic, semantic)


def decide_phrase_error(prefs: EqualityPreferences, net: Network) -> bool:
    return repair_score(prefs, net) >= DECISION_THRESHOLD


def retag_surviving(annotations, models):
    """Recompute every non-deleted annotation with contexts that skip the
    deleted tokens; deleted tokens keep their frozen annotations."""
    state = TaggerState(models.tagger)
    out = []
    for ann in annotations:
        if ann.deleted is not REASON_NONE:
            out.append(ann)
            continue
        fresh = tag_step(models.lexicon, models.tagger, state, ann.word)
        out.append(fresh)
    return out


def _word_pass(annotations, models, repairs):
    """Single left-to-right pass; each surviving token is examined against
    its current left neighbour."""
    marked = False
    prev_idx = None
    for idx, ann in enumerate(annotations):
        if ann.deleted is not REASON_NONE:
            continue
        if prev_idx is not None:
            prev = annotations[prev_idx]
            prefs = word_equality(prev.word, ann.word, prev, ann, models.correction)
            score = repair_score(prefs, models.correction.word_repair)
            if score >= DECISION_THRESHOLD:
                decision = RepairDecision("word", (prev_idx,), prefs, score)
                annotations[prev_idx] = replace(prev, deleted=REASON_WORD_REPAIR,
                                                repair=decision)
                repairs.append(decision)
                marked = True
        prev_idx = idx
    return marked


def _phrase_pass(annotations, models, repairs):
    marked = False
    phrases = finalize_phrases(annotations)
    for (span1, _, _), (span2, _, _) in zip(phrases, phrases[1:]):
        p1 = [annotations[i] for i in span1]
        p2 = [annotations[i] for i in span2]
        prefs = phrase_equality(p1, p2, models.correction)
        score = repair_score(prefs, models.correction.phrase_repair)
        if score >= DECISION_THRESHOLD:
            decision = RepairDecision("phrase", tuple(span1), prefs, score)
            for i in span1:
                annotations[i] = replace(annotations[i],
                                         deleted=REASON_PHRASE_REPAIR, repair=decision)
            repairs.append(decision)
            marked = True
            break  # spans shifted; later pairs are re-examined next round
    return marked


def apply_corrections(annotations, models):
    """Mark disfluent tokens in a tagged sequence.

    Pipeline per round: pause/interjection marking, re-tag, word-error
    pass, re-tag, phrase finalization + phrase-error pass; rounds repeat
    until no new marks appear, so applying corrections twice changes
    nothing. Tokens are only ever marked, never removed, and every mark
    carries its reason.
    """
    if not annotations:
        raise ValueError("empty annotation list")
    work = list(annotations)
    repairs = []

    for idx, ann in enumerate(work):
        if ann.deleted is not REASON_NONE:
            continue
        syn_m, _, known = lookup(models.lexicon, ann.word)
        reason = pause_or_interjection_reason(ann.word, syn_m, known)
        if reason is not None:
            work[idx] = replace(ann, deleted=reason)
    work = retag_surviving(work, models)

    for _ in range(len(work) + 1):
        changed = _word_pass(work, models, repairs)
        if changed:
            work = retag_surviving(work, models)
        if all(a.deleted is not REASON_NONE for a in work):
            break
        phrase_changed = _phrase_pass(work, models, repairs)
        if phrase_changed:
            work = retag_surviving(work, models)
        if not changed and not phrase_changed:
            break
    return work, repairs
