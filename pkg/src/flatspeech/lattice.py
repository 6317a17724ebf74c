"""Word graphs and the incremental n-best decoder.

A word graph is a bag of timed, scored word hypotheses; two hypotheses
chain when the second starts just after the first ends (within a small
configurable gap). The decoder sweeps the start-time frontiers left to
right, extends every live sequence with every connectable hypothesis,
drops sequences that can neither grow nor reach the end of the graph, and
keeps the n best by combined acoustic/syntactic/semantic score.

Times are parsed as seconds but handled internally on a centisecond grid
so connection tests never depend on float rounding.
"""

import math
from dataclasses import dataclass, field

from .correction import apply_corrections
from .predictor import PredictorState, SequenceScore, StepScore, predict_next, step_plausibility
from .tagger import TaggerState, finalize_phrases, tag_step


def _centi(seconds: float) -> int:
    return int(round(seconds * 100.0))


@dataclass(frozen=True)
class WordHypothesis:
    start_time: float
    end_time: float
    word: str
    acoustic_plausibility: float

    def __post_init__(self):
        if self.start_time < 0 or self.end_time < 0:
            raise ValueError(f"negative time in hypothesis {self.word!r}")
        if self.start_c >= self.end_c:
            raise ValueError(
                f"hypothesis {self.word!r}: start {self.start_time} not before end {self.end_time}")
        if not 0.0 < self.acoustic_plausibility <= 1.0:
            raise ValueError(
                f"hypothesis {self.word!r}: plausibility {self.acoustic_plausibility} outside (0, 1]")

    @property
    def start_c(self) -> int:
        return _centi(self.start_time)

    @property
    def end_c(self) -> int:
        return _centi(self.end_time)


class WordGraph:
    def __init__(self, hypotheses):
        hyps = sorted(hypotheses,
                      key=lambda h: (h.start_c, h.end_c, h.word, h.acoustic_plausibility))
        if not hyps:
            raise ValueError("empty word graph")
        self.hypotheses = tuple(hyps)
        self.min_start_c = min(h.start_c for h in hyps)
        self.max_end_c = max(h.end_c for h in hyps)
        self._by_start = {}
        self._group_max = {}
        for i, h in enumerate(hyps):
            self._by_start.setdefault(h.start_c, []).append(i)
            prev = self._group_max.get(h.start_c, 0.0)
            self._group_max[h.start_c] = max(prev, h.acoustic_plausibility)
        self._starts = sorted(self._by_start)

    def __len__(self):
        return len(self.hypotheses)

    def frontier_times(self):
        return list(self._starts)

    def starting_at(self, start_c):
        return self._by_start.get(start_c, [])

    def has_start_in(self, lo_exclusive, hi_inclusive) -> bool:
        """Any hypothesis start time in (lo, hi]?"""
        import bisect

        idx = bisect.bisect_right(self._starts, lo_exclusive)
        return idx < len(self._starts) and self._starts[idx] <= hi_inclusive

    def normalized_acoustic(self, hyp: WordHypothesis) -> float:
        """Plausibility relative to the best hypothesis competing for the
        same onset, so every step factor lands in (0, 1]."""
        return hyp.acoustic_plausibility / self._group_max[hyp.start_c]

    def words_per_token(self) -> float:
        starts = {}
        for h in self.hypotheses:
            starts.setdefault(h.start_c, 0)
        return len(self.hypotheses) / max(len(starts), 1)


@dataclass(frozen=True)
class DecoderConfig:
    beam_width: int = 10
    connection_gap_max: float = 0.03
    ranking: str = "normalized"  # or "raw"
    use_syntax: bool = True
    use_semantics: bool = True

    def __post_init__(self):
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if self.connection_gap_max < 0.01:
            raise ValueError("connection_gap_max must be >= 0.01")
        if self.ranking not in ("normalized", "raw"):
            raise ValueError(f"unknown ranking mode {self.ranking!r}")

    @property
    def gap_c(self) -> int:
        return _centi(self.connection_gap_max)


def connectable(h1: WordHypothesis, h2: WordHypothesis, config: DecoderConfig) -> bool:
    """True when h2 starts after h1 ends, within the connection gap."""
    return 0 < h2.start_c - h1.end_c <= config.gap_c


def load_word_graph(path) -> WordGraph:
    """Parse `start TAB end TAB word TAB plausibility` records."""
    hyps = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ValueError(
                    f"{path}:{lineno}: expected 4 tab-separated fields "
                    f"(start, end, word, plausibility), got {len(fields)}")
            names = ("start_time", "end_time", "word", "plausibility")
            start_s, end_s, word, plaus_s = (f.strip() for f in fields)
            try:
                start = float(start_s)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad start_time {start_s!r}") from None
            try:
                end = float(end_s)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad end_time {end_s!r}") from None
            if not word:
                raise ValueError(f"{path}:{lineno}: empty word field")
            try:
                plaus = float(plaus_s)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad plausibility {plaus_s!r}") from None
            try:
                hyps.append(WordHypothesis(start, end, word, plaus))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    if not hyps:
        raise ValueError(f"{path}: empty word graph")
    return WordGraph(hyps)


class SequenceState:
    """One live word-hypothesis sequence with its recurrent states, scores
    and incrementally built annotations."""

    __slots__ = ("hyp_indices", "tagger_state", "predictor_state",
                 "annotations", "score", "seq_id")

    def __init__(self, hyp_indices, tagger_state, predictor_state,
                 annotations, score, seq_id):
        self.hyp_indices = hyp_indices
        self.tagger_state = tagger_state
        self.predictor_state = predictor_state
        self.annotations = annotations
        self.score = score
        self.seq_id = seq_id

    def last_hyp(self, graph):
        return graph.hypotheses[self.hyp_indices[-1]]

    def words(self, graph):
        return tuple(graph.hypotheses[i].word for i in self.hyp_indices)


def _rank_key(state: SequenceState, graph: WordGraph, config: DecoderConfig):
    # Equal scores fall back to fewer words, earlier end, word strings, id.
    return (-state.score.value(config.ranking),
            len(state.hyp_indices),
            state.last_hyp(graph).end_c,
            state.words(graph),
            state.seq_id)


def _extend(graph, models, config, parent, hyp_index, seq_id):
    hyp = graph.hypotheses[hyp_index]
    if parent is None:
        tagger_state = TaggerState(models.tagger)
        predictor_state = PredictorState(models.predictor)
        hyp_indices = (hyp_index,)
        prev_steps = None
    else:
        tagger_state = parent.tagger_state.copy()
        predictor_state = parent.predictor_state.copy()
        hyp_indices = parent.hyp_indices + (hyp_index,)
        prev_steps = parent.score
    annotation = tag_step(models.lexicon, models.tagger, tagger_state, hyp.word)
    if predictor_state.predicted_syn is None:
        syn_plaus = sem_plaus = 1.0
    else:
        syn_plaus = step_plausibility(predictor_state.predicted_syn, annotation.basic_syn)
        sem_plaus = step_plausibility(predictor_state.predicted_sem, annotation.basic_sem)
    predict_next("syn", models.predictor, predictor_state, annotation.basic_syn)
    predict_next("sem", models.predictor, predictor_state, annotation.basic_sem)
    step = StepScore(
        graph.normalized_acoustic(hyp),
        syn_plaus if config.use_syntax else 1.0,
        sem_plaus if config.use_semantics else 1.0)
    if prev_steps is None:
        score = SequenceScore.from_steps([step])
    else:
        score = prev_steps.extended(step)
    annotations = (parent.annotations if parent else []) + [annotation]
    return SequenceState(hyp_indices, tagger_state, predictor_state,
                         annotations, score, seq_id)


def _is_complete(state: SequenceState, graph: WordGraph, config: DecoderConfig) -> bool:
    return graph.max_end_c - state.last_hyp(graph).end_c <= config.gap_c


def advance(beam, graph, frontier_c, config, models, id_counter, trace=None):
    """One frontier step: create every connectable extension of the live
    sequences plus fresh entry sequences, retire sequences that cannot grow
    at any later frontier (complete ones finish, dead ends drop), then rank
    and truncate to the beam width.

    Returns (new beam, finished sequences, dropped dead ends).
    """
    candidates = list(beam)
    if frontier_c - graph.min_start_c <= config.gap_c:
        for hyp_index in graph.starting_at(frontier_c):
            candidates.append(_extend(graph, models, config, None, hyp_index,
                                      next(id_counter)))
    for state in beam:
        last = state.last_hyp(graph)
        for hyp_index in graph.starting_at(frontier_c):
            if connectable(last, graph.hypotheses[hyp_index], config):
                candidates.append(_extend(graph, models, config, state, hyp_index,
                                          next(id_counter)))

    # a sequence stays in the running only while some future frontier can
    # still extend it; otherwise it either reached the graph end or it is a
    # dead end that no longer leads anywhere
    pending = []
    finished = []
    dropped = []
    for state in candidates:
        end_c = state.last_hyp(graph).end_c
        if graph.has_start_in(max(end_c, frontier_c), end_c + config.gap_c):
            pending.append(state)
        elif _is_complete(state, graph, config):
            finished.append(state)
        else:
            dropped.append(state)

    pending.sort(key=lambda s: _rank_key(s, graph, config))
    kept = pending[:config.beam_width]
    if trace is not None:
        trace.append(f"frontier {frontier_c / 100.0:.2f} candidates={len(candidates)} "
                     f"kept={len(kept)} finished={len(finished)} dead={len(dropped)}")
        for state in kept:
            trace.append(
                f"  keep seq={state.seq_id} score={state.score.value(config.ranking):.6f} "
                f"words={' '.join(state.words(graph))}")
        for state in pending[config.beam_width:]:
            trace.append(f"  prune seq={state.seq_id} "
                         f"score={state.score.value(config.ranking):.6f}")
    return kept, finished, dropped


@dataclass
class DecodedSequence:
    state: SequenceState
    words: tuple
    score: SequenceScore
    annotations: list
    phrases: list
    repairs: list


@dataclass
class DecodeResult:
    sequences: list        # ranked complete sequences
    partials: list         # longest partials when nothing completed
    trace: list

    @property
    def complete(self) -> bool:
        return bool(self.sequences)


def decode(graph: WordGraph, config: DecoderConfig, models, with_trace=False) -> DecodeResult:
    """Run the incremental decoder over the whole graph and return complete
    sequences ranked by score, annotated and repair-marked."""
    import itertools

    trace = [] if with_trace else None
    id_counter = itertools.count()
    beam = []
    completed = []
    longest_partials = []
    for frontier_c in graph.frontier_times():
        beam, finished, dropped = advance(beam, graph, frontier_c, config, models,
                                          id_counter, trace)
        completed.extend(finished)
        longest_partials.extend(dropped)
        longest_partials.sort(key=lambda s: (-len(s.hyp_indices), s.seq_id))
        del longest_partials[config.beam_width:]
    for state in beam:
        if _is_complete(state, graph, config):
            completed.append(state)
        else:
            longest_partials.append(state)

    completed.sort(key=lambda s: _rank_key(s, graph, config))
    sequences = []
    for state in completed:
        annotations, repairs = apply_corrections(state.annotations, models)
        sequences.append(DecodedSequence(
            state=state,
            words=state.words(graph),
            score=state.score,
            annotations=annotations,
            phrases=finalize_phrases(annotations),
            repairs=repairs,
        ))
    if not sequences:
        longest_partials.sort(key=lambda s: (-len(s.hyp_indices),
                                             _rank_key(s, graph, config)))
        longest_partials = longest_partials[:config.beam_width]
    return DecodeResult(sequences, longest_partials, trace or [])


def format_decode_result(result: DecodeResult, graph: WordGraph) -> str:
    """Deterministic text dump for the CLI and diff-based tests."""
    lines = []
    if not result.complete:
        lines.append("no complete path")
        for state in result.partials:
            lines.append(f"partial {' '.join(state.words(graph))}")
        return "\n".join(lines) + "\n"
    for rank, seq in enumerate(result.sequences, start=1):
        lines.append(f"rank {rank} norm={seq.score.normalized:.6f} "
                     f"raw={seq.score.raw:.6e} words={' '.join(seq.words)}")
        for ann in seq.annotations:
            mark = f" deleted={ann.deleted}" if ann.deleted else ""
            lines.append(f"  {ann.word}\t{ann.bsyn_label}\t{ann.asyn_label}"
                         f"\t{ann.bsem_label}\t{ann.asem_label}"
                         f"\tstart={ann.phrase_start:.3f}{mark}")
        for span, asyn, asem in seq.phrases:
            lines.append(f"  phrase {span} {asyn} {asem}")
    return "\n".join(lines) + "\n"
