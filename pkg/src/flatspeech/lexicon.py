"""Word lexicon: per-word category memberships plus unknown-word defaults.

Entries map a case-folded word form to binary membership vectors over the
basic syntactic and basic semantic axes. A word can belong to several
categories on one axis ("meine" is both verb and pronoun); disambiguation
is the tagger's job, not the lexicon's.

Unknown words are not an error: lookup falls back to a pair of average
default vectors holding the normalized frequency of each category across
the lexicon entries.
"""

import random
from dataclasses import dataclass

import numpy as np

from .categories import BSEM, BSYN, CategoryVector

PAUSE_TOKEN = "<pause>"


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    syn_membership: CategoryVector
    sem_membership: CategoryVector

    def __post_init__(self):
        if self.syn_membership.axis != BSYN or self.sem_membership.axis != BSEM:
            raise ValueError(f"entry {self.word!r} has wrong membership axes")
        for vec in (self.syn_membership, self.sem_membership):
            vals = vec.values
            if not np.all((vals == 0.0) | (vals == 1.0)):
                raise ValueError(f"entry {self.word!r} membership must be binary")
            if not np.any(vals):
                raise ValueError(f"entry {self.word!r} has no membership on {vec.axis}")


class Lexicon:
    """Immutable word -> membership map with precomputed default vectors."""

    def __init__(self, entries):
        self._entries = {}
        for entry in entries:
            key = entry.word.casefold()
            if key in self._entries:
                raise ValueError(f"duplicate lexicon entry {key!r}")
            self._entries[key] = entry
        self.default_syn = average_default_vector(self, BSYN) if self._entries else None
        self.default_sem = average_default_vector(self, BSEM) if self._entries else None

    def __len__(self):
        return len(self._entries)

    def __contains__(self, word):
        return word.casefold() in self._entries

    def words(self):
        return sorted(self._entries)

    def entry(self, word: str) -> LexiconEntry:
        return self._entries[word.casefold()]

    def entries(self):
        return [self._entries[w] for w in self.words()]


def lookup(lexicon: Lexicon, word: str):
    """Return (syn vector, sem vector, known flag) for a word; never fails.

    Known words give their binary memberships; anything else gets the
    average default vectors and known=False.
    """
    if not word:
        raise ValueError("empty word")
    key = word.casefold()
    if key in lexicon._entries:
        entry = lexicon._entries[key]
        return entry.syn_membership, entry.sem_membership, True
    if lexicon.default_syn is None:
        raise ValueError("empty lexicon")
    return lexicon.default_syn, lexicon.default_sem, False


def average_default_vector(lexicon: Lexicon, axis: str) -> CategoryVector:
    """Per-label fraction of entries whose membership includes that label."""
    if len(lexicon) == 0:
        raise ValueError("empty lexicon")
    if axis == BSYN:
        rows = [e.syn_membership.values for e in lexicon._entries.values()]
    elif axis == BSEM:
        rows = [e.sem_membership.values for e in lexicon._entries.values()]
    else:
        raise ValueError(f"defaults only exist for basic axes, not {axis!r}")
    return CategoryVector(axis, np.mean(rows, axis=0))


def ablate(lexicon: Lexicon, fraction: float, seed: int) -> Lexicon:
    """Copy with floor(fraction * size) randomly chosen entries removed.

    Defaults are recomputed from the survivors; the input is unchanged.
    """
    if not 0.0 <= fraction < 1.0:
        raise ValueError(f"ablation fraction must be in [0, 1), got {fraction}")
    words = lexicon.words()
    n_remove = int(fraction * len(words))
    removed = set(random.Random(seed).sample(words, n_remove))
    return Lexicon([lexicon.entry(w) for w in words if w not in removed])


def parse_lexicon(text: str, source: str = "<string>") -> Lexicon:
    """Parse the line-oriented lexicon format.

    One entry per line: word TAB syn-abbrevs TAB sem-abbrevs, abbreviations
    comma-separated; '#' starts a comment.
    """
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) != 3:
            raise ValueError(
                f"{source}:{lineno}: expected 'word<TAB>syn<TAB>sem', got {raw!r}")
        word, syn_field, sem_field = parts
        try:
            syn = CategoryVector.from_labels(BSYN, _split_labels(syn_field))
            sem = CategoryVector.from_labels(BSEM, _split_labels(sem_field))
            entries.append(LexiconEntry(word, syn, sem))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from exc
    return Lexicon(entries)


def _split_labels(field):
    labels = [l.strip() for l in field.split(",") if l.strip()]
    if not labels:
        raise ValueError("empty label list")
    return labels


def load_lexicon(path) -> Lexicon:
    with open(path, encoding="utf-8") as handle:
        return parse_lexicon(handle.read(), source=str(path))


def save_lexicon(lexicon: Lexicon, path):
    lines = []
    for entry in lexicon.entries():
        syn = ",".join(l for l, v in zip(entry.syn_membership.scheme.labels,
                                         entry.syn_membership.values) if v)
        sem = ",".join(l for l, v in zip(entry.sem_membership.scheme.labels,
                                         entry.sem_membership.values) if v)
        lines.append(f"{entry.word}\t{syn}\t{sem}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
