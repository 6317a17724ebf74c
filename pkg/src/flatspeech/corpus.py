"""Gold-annotated corpora: token records, turn/utterance structure, file
round-trips, validation, and the per-network training-set derivation.

A corpus file is line-oriented UTF-8: `== turn <id> <split>` opens a turn,
blank lines separate utterances, and each token line carries
word TAB bsyn TAB asyn TAB bsem TAB asem TAB phrase_start(0|1) TAB deleted.
Deletion reasons use the short file forms none|pause|interjection|word|phrase.
"""

from dataclasses import dataclass, field

import numpy as np

from .categories import ASEM, ASYN, BSEM, BSYN, SCHEMES
from .lexicon import Lexicon, lookup

REASON_NONE = None
REASON_PAUSE = "pause"
REASON_INTERJECTION = "interjection"
REASON_WORD_REPAIR = "word-repair"
REASON_PHRASE_REPAIR = "phrase-repair"

_REASON_TO_FILE = {
    REASON_NONE: "none",
    REASON_PAUSE: "pause",
    REASON_INTERJECTION: "interjection",
    REASON_WORD_REPAIR: "word",
    REASON_PHRASE_REPAIR: "phrase",
}
_FILE_TO_REASON = {v: k for k, v in _REASON_TO_FILE.items()}

TRAIN = "train"
TEST = "test"


@dataclass(frozen=True)
class AnnotatedToken:
    word: str
    bsyn: str
    asyn: str
    bsem: str
    asem: str
    phrase_start: bool
    deleted: str | None = REASON_NONE

    def __post_init__(self):
        for axis, label in ((BSYN, self.bsyn), (ASYN, self.asyn),
                            (BSEM, self.bsem), (ASEM, self.asem)):
            if label not in SCHEMES[axis]:
                raise ValueError(f"token {self.word!r}: unknown {axis} label {label!r}")
        if self.deleted not in _REASON_TO_FILE:
            raise ValueError(f"token {self.word!r}: bad deletion reason {self.deleted!r}")


@dataclass(frozen=True)
class Utterance:
    tokens: tuple

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("empty utterance")

    def words(self):
        return [t.word for t in self.tokens]

    def surviving(self):
        return [t for t in self.tokens if t.deleted is REASON_NONE]


@dataclass(frozen=True)
class Turn:
    turn_id: str
    split: str
    utterances: tuple

    def __post_init__(self):
        if self.split not in (TRAIN, TEST):
            raise ValueError(f"turn {self.turn_id}: split must be train or test")
        if not self.utterances:
            raise ValueError(f"turn {self.turn_id}: no utterances")


class AnnotatedCorpus:
    """Turns of utterances of gold tokens, split train/test at turn level."""

    def __init__(self, turns):
        self.turns = tuple(turns)
        validate(self)

    def utterances(self, split=None):
        out = []
        for turn in self.turns:
            if split is None or turn.split == split:
                out.extend(turn.utterances)
        return out

    def n_tokens(self, split=None):
        return sum(len(u.tokens) for u in self.utterances(split))

    def merged_with(self, other: "AnnotatedCorpus") -> "AnnotatedCorpus":
        return AnnotatedCorpus(self.turns + other.turns)


def validate(corpus: AnnotatedCorpus) -> AnnotatedCorpus:
    """Reject duplicate turn ids and malformed structure; labels and reasons
    were already checked token by token on construction."""
    seen = set()
    for turn in corpus.turns:
        if turn.turn_id in seen:
            raise ValueError(f"duplicate turn id {turn.turn_id!r}")
        seen.add(turn.turn_id)
    return corpus


def parse_corpus(text: str, source: str = "<string>") -> AnnotatedCorpus:
    turns = []
    current_tokens = []
    current_utterances = []
    header = None

    def close_utterance(lineno):
        nonlocal current_tokens
        if current_tokens:
            current_utterances.append(Utterance(tuple(current_tokens)))
            current_tokens = []

    def close_turn(lineno):
        nonlocal current_utterances, header
        close_utterance(lineno)
        if header is not None:
            if not current_utterances:
                raise ValueError(f"{source}:{lineno}: turn {header[0]!r} has no utterances")
            turns.append(Turn(header[0], header[1], tuple(current_utterances)))
        current_utterances = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if line.startswith("=="):
            close_turn(lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "turn":
                raise ValueError(f"{source}:{lineno}: bad turn header {raw!r}")
            header = (parts[2], parts[3])
            continue
        if not line:
            close_utterance(lineno)
            continue
        if header is None:
            raise ValueError(f"{source}:{lineno}: token before any turn header")
        fields = line.split("\t")
        if len(fields) != 7:
            raise ValueError(f"{source}:{lineno}: expected 7 tab-separated fields, got {len(fields)}")
        word, bsyn, asyn, bsem, asem, start, deleted = fields
        if start not in ("0", "1"):
            raise ValueError(f"{source}:{lineno}: phrase_start must be 0 or 1, got {start!r}")
        if deleted not in _FILE_TO_REASON:
            raise ValueError(f"{source}:{lineno}: bad deletion mark {deleted!r}")
        try:
            current_tokens.append(AnnotatedToken(
                word, bsyn, asyn, bsem, asem, start == "1", _FILE_TO_REASON[deleted]))
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from exc
    close_turn(len(text.splitlines()) + 1)
    return AnnotatedCorpus(turns)


def load_corpus(path) -> AnnotatedCorpus:
    with open(path, encoding="utf-8") as handle:
        return parse_corpus(handle.read(), source=str(path))


def format_corpus(corpus: AnnotatedCorpus) -> str:
    lines = []
    for turn in corpus.turns:
        lines.append(f"== turn {turn.turn_id} {turn.split}")
        for i, utt in enumerate(turn.utterances):
            if i:
                lines.append("")
            for tok in utt.tokens:
                lines.append("\t".join([
                    tok.word, tok.bsyn, tok.asyn, tok.bsem, tok.asem,
                    "1" if tok.phrase_start else "0",
                    _REASON_TO_FILE[tok.deleted]]))
    return "\n".join(lines) + "\n"


def save_corpus(corpus: AnnotatedCorpus, path):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_corpus(corpus))


def _onehot(axis, label):
    scheme = SCHEMES[axis]
    vec = np.zeros(len(scheme))
    vec[scheme.index(label)] = 1.0
    return vec


def _pair_flags(u1, u2):
    return np.array([1.0, 0.0]) if u1 else np.array([0.0, 1.0])


def surviving_pairs(tokens, drop_reasons):
    """Adjacent pairs over the tokens left after dropping the given reasons."""
    stream = [t for t in tokens if t.deleted not in drop_reasons]
    return list(zip(stream, stream[1:]))


def gold_phrases(tokens):
    """Phrase spans of the surviving gold stream, first-word syntactic label,
    last-word semantic label. Spans are tuples of original token indices."""
    surviving = [(i, t) for i, t in enumerate(tokens) if t.deleted is REASON_NONE]
    phrases = []
    current = []
    for pos, (idx, tok) in enumerate(surviving):
        if current and (tok.phrase_start or pos == 0):
            phrases.append(current)
            current = []
        current.append((idx, tok))
    if current:
        phrases.append(current)
    return [
        (tuple(idx for idx, _ in phrase), phrase[0][1].asyn, phrase[-1][1].asem)
        for phrase in phrases
    ]


def derive_training_sets(corpus: AnnotatedCorpus, lexicon: Lexicon, split=TRAIN):
    """Build per-network sequence datasets from gold annotations.

    Keys: syn_disambig, sem_disambig, syn_abstract, sem_abstract,
    syn_predict, sem_predict, phrase_start, syn_equality, sem_equality,
    word_repair, abs_syn_equality, abs_sem_equality, phrase_repair.
    Context resets at utterance boundaries; pair data are singleton
    sequences for the feedforward nets.
    """
    utterances = corpus.utterances(split)
    if not utterances:
        raise ValueError("empty corpus")
    sets = {name: [] for name in (
        "syn_disambig", "sem_disambig", "syn_abstract", "sem_abstract",
        "syn_predict", "sem_predict", "phrase_start",
        "syn_equality", "sem_equality", "word_repair",
        "abs_syn_equality", "abs_sem_equality", "phrase_repair")}

    for utt in utterances:
        syn_dis, sem_dis, syn_abs, sem_abs, ps = [], [], [], [], []
        for tok in utt.tokens:
            syn_amb, sem_amb, _ = lookup(lexicon, tok.word)
            syn_dis.append((syn_amb.values, _onehot(BSYN, tok.bsyn)))
            sem_dis.append((sem_amb.values, _onehot(BSEM, tok.bsem)))
            syn_abs.append((_onehot(BSYN, tok.bsyn), _onehot(ASYN, tok.asyn)))
            sem_abs.append((_onehot(BSEM, tok.bsem), _onehot(ASEM, tok.asem)))
            ps.append((_onehot(BSYN, tok.bsyn), _pair_flags(tok.phrase_start, None)))
        sets["syn_disambig"].append(syn_dis)
        sets["sem_disambig"].append(sem_dis)
        sets["syn_abstract"].append(syn_abs)
        sets["sem_abstract"].append(sem_abs)
        sets["phrase_start"].append(ps)
        if len(utt.tokens) > 1:
            sets["syn_predict"].append([
                (_onehot(BSYN, a.bsyn), _onehot(BSYN, b.bsyn))
                for a, b in zip(utt.tokens, utt.tokens[1:])])
            sets["sem_predict"].append([
                (_onehot(BSEM, a.bsem), _onehot(BSEM, b.bsem))
                for a, b in zip(utt.tokens, utt.tokens[1:])])

        # Word-level repair data: pairs adjacent once pauses/interjections
        # are gone, positive when the earlier token is the reparandum.
        for a, b in surviving_pairs(utt.tokens, (REASON_PAUSE, REASON_INTERJECTION)):
            lex_eq = float(a.word.casefold() == b.word.casefold())
            syn_eq = float(a.bsyn == b.bsyn)
            sem_eq = float(a.bsem == b.bsem)
            positive = a.deleted == REASON_WORD_REPAIR
            sets["syn_equality"].append([(
                np.concatenate([_onehot(BSYN, a.bsyn), _onehot(BSYN, b.bsyn)]),
                _pair_flags(syn_eq, None))])
            sets["sem_equality"].append([(
                np.concatenate([_onehot(BSEM, a.bsem), _onehot(BSEM, b.bsem)]),
                _pair_flags(sem_eq, None))])
            sets["word_repair"].append([(
                np.array([lex_eq, syn_eq, sem_eq]), _pair_flags(positive, None))])

        # Phrase-level repair data: adjacent phrases of the stream surviving
        # everything below phrase level.
        stream = [t for t in utt.tokens
                  if t.deleted in (REASON_NONE, REASON_PHRASE_REPAIR)]
        phrases = []
        for pos, tok in enumerate(stream):
            if pos == 0 or tok.phrase_start:
                phrases.append([])
            phrases[-1].append(tok)
        for p1, p2 in zip(phrases, phrases[1:]):
            lex_eq = float(p1[0].word.casefold() == p2[0].word.casefold())
            asyn_eq = float(p1[0].asyn == p2[0].asyn)
            asem_eq = float(p1[-1].asem == p2[-1].asem)
            positive = all(t.deleted == REASON_PHRASE_REPAIR for t in p1)
            sets["abs_syn_equality"].append([(
                np.concatenate([_onehot(ASYN, p1[0].asyn), _onehot(ASYN, p2[0].asyn)]),
                _pair_flags(asyn_eq, None))])
            sets["abs_sem_equality"].append([(
                np.concatenate([_onehot(ASEM, p1[-1].asem), _onehot(ASEM, p2[-1].asem)]),
                _pair_flags(asem_eq, None))])
            sets["phrase_repair"].append([(
                np.array([lex_eq, asyn_eq, asem_eq]), _pair_flags(positive, None))])
    return sets
