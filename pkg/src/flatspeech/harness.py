"""Evaluation metrics and the experiment battery: per-network accuracies,
whole-system phrase accuracy, lexicon-ablation robustness, the predictor
vs n-gram comparison, and the knowledge-combination decoding experiment.

Reports are plain structured text and contain no wall-clock values, so a
rerun with the same seeds is byte-identical.
"""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .categories import BSEM, BSYN
from .correction import apply_corrections
from .corpus import TEST, TRAIN, AnnotatedCorpus, derive_training_sets, gold_phrases
from .generator import NoiseConfig, synth_word_graph
from .lattice import DecoderConfig, decode
from .lexicon import ablate
from .models import ModelSet
from .network import forward
from .ngram import SmoothingConfig, exclusion_curve, fit_ngram, format_curves
from .tagger import finalize_phrases, tag_sequence


def network_accuracy(net, dataset) -> float:
    """Fraction of patterns whose output argmax hits the target argmax;
    recurrent context resets at every sequence start."""
    total = 0
    correct = 0
    for sequence in dataset:
        context = net.zero_context()
        for inp, target in sequence:
            out, context = forward(net, inp, context)
            correct += int(np.argmax(out) == np.argmax(target))
            total += 1
    if total == 0:
        raise ValueError("empty dataset")
    return correct / total


def all_network_accuracies(models: ModelSet, corpus: AnnotatedCorpus, split=TEST) -> dict:
    datasets = derive_training_sets(corpus, models.lexicon, split)
    return {name: network_accuracy(net, datasets[name])
            for name, net in sorted(models.networks().items())
            if datasets[name]}


def system_output(models: ModelSet, words):
    """Tag a transcript token stream and run the correction pipeline."""
    annotations = tag_sequence(models.lexicon, models.tagger, words)
    corrected, repairs = apply_corrections(annotations, models)
    return corrected, finalize_phrases(corrected), repairs


def overall_flat_accuracy(system_phrase_lists, gold_phrase_lists):
    """Phrase-level scoring: a gold phrase is syntactically correct iff the
    system yields a phrase with the identical token span and the same
    abstract syntactic label; semantics analogously. Misaligned output just
    scores the affected phrases wrong."""
    gold_total = 0
    syn_hits = 0
    sem_hits = 0
    for system, gold in zip(system_phrase_lists, gold_phrase_lists):
        by_span = {span: (asyn, asem) for span, asyn, asem in system}
        for span, asyn, asem in gold:
            gold_total += 1
            got = by_span.get(span)
            if got is None:
                continue
            syn_hits += int(got[0] == asyn)
            sem_hits += int(got[1] == asem)
    if gold_total == 0:
        raise ValueError("no gold phrases to score")
    return syn_hits / gold_total, sem_hits / gold_total


def corpus_flat_accuracy(models: ModelSet, corpus: AnnotatedCorpus, split=TEST):
    system_lists = []
    gold_lists = []
    for utt in corpus.utterances(split):
        _, phrases, _ = system_output(models, utt.words())
        system_lists.append(phrases)
        gold_lists.append(gold_phrases(utt.tokens))
    return overall_flat_accuracy(system_lists, gold_lists)


def ablation_experiment(models: ModelSet, corpus: AnnotatedCorpus,
                        fractions, seed: int, split=TEST):
    """Re-run system evaluation with parts of the lexicon removed; unknown
    words fall back to the average default vectors."""
    rows = []
    for fraction in fractions:
        lexicon = ablate(models.lexicon, fraction, seed) if fraction else models.lexicon
        ablated = replace(models, lexicon=lexicon)
        syn, sem = corpus_flat_accuracy(ablated, corpus, split)
        rows.append((fraction, len(lexicon), syn, sem))
    return rows


def srn_predictor_fn(models: ModelSet, axis):
    """History of gold category labels -> prediction activations, replayed
    from a fresh context so it matches the per-utterance decoding setup."""
    from .categories import SCHEMES

    side = "syn" if axis == BSYN else "sem"
    net = models.predictor.syn_predict if axis == BSYN else models.predictor.sem_predict
    scheme = SCHEMES[axis]

    def predict(history):
        context = net.zero_context()
        out = None
        for label in history:
            vec = np.zeros(len(scheme))
            vec[scheme.index(label)] = 1.0
            out, context = forward(net, vec, context)
        return out

    return predict


def category_sequences(corpus: AnnotatedCorpus, axis, split):
    attr = "bsyn" if axis == BSYN else "bsem"
    return [[getattr(tok, attr) for tok in utt.tokens]
            for utt in corpus.utterances(split)]


def srn_vs_ngram_curves(models: ModelSet, corpus: AnnotatedCorpus, axis,
                        orders=(1, 2, 3, 4, 5), smoothing=SmoothingConfig()):
    """Exclusion curves for the recurrent predictor and each n-gram order,
    fitted on the training split and measured on the test split."""
    train_seqs = category_sequences(corpus, axis, TRAIN)
    test_seqs = category_sequences(corpus, axis, TEST)
    curves = {"srn": exclusion_curve(srn_predictor_fn(models, axis), test_seqs, axis)}
    for n in orders:
        model = fit_ngram(train_seqs, n, smoothing, axis=axis)
        curves[f"{n}-gram"] = exclusion_curve(model.predict, test_seqs, axis)
    return curves


def forward_step_seconds(models: ModelSet, repeats=2000) -> float:
    """Wall-clock of one prediction sweep; informational only, never part
    of a deterministic report."""
    net = models.predictor.syn_predict
    vec = np.zeros(net.spec.n_input)
    vec[0] = 1.0
    context = net.zero_context()
    start = time.perf_counter()
    for _ in range(repeats):
        _, context = forward(net, vec, context)
    return (time.perf_counter() - start) / repeats


def gold_path_rank(result, gold_words) -> int:
    """1-based rank of the gold word sequence in a decode result, or 0."""
    for rank, seq in enumerate(result.sequences, start=1):
        if list(seq.words) == list(gold_words):
            return rank
    return 0


def knowledge_combination_experiment(models: ModelSet, corpus: AnnotatedCorpus,
                                     noise: NoiseConfig, n_graphs: int, seed: int,
                                     beam_width: int = 10):
    """Mean reciprocal rank of the gold path under acoustic-only,
    acoustic+syntactic, and fully combined scoring."""
    utterances = corpus.utterances(TEST) or corpus.utterances()
    modes = {
        "acoustic": DecoderConfig(beam_width=beam_width, use_syntax=False, use_semantics=False),
        "acoustic+syn": DecoderConfig(beam_width=beam_width, use_syntax=True, use_semantics=False),
        "acoustic+syn+sem": DecoderConfig(beam_width=beam_width, use_syntax=True, use_semantics=True),
    }
    reciprocal = {name: [] for name in modes}
    for i in range(n_graphs):
        utt = utterances[i % len(utterances)]
        graph = synth_word_graph(utt, noise, models.lexicon, seed=seed + i)
        gold = utt.words()
        for name, config in modes.items():
            result = decode(graph, config, models)
            rank = gold_path_rank(result, gold)
            reciprocal[name].append(1.0 / rank if rank else 0.0)
    return {name: float(np.mean(values)) for name, values in reciprocal.items()}


@dataclass
class EvalReport:
    n_train_tokens: int
    n_test_tokens: int
    network_accuracies: dict
    overall_syn: float
    overall_sem: float
    ablation_rows: list
    curve_means: dict

    def to_text(self) -> str:
        lines = ["flat-analysis evaluation report", ""]
        lines.append(f"train tokens\t{self.n_train_tokens}")
        lines.append(f"test tokens\t{self.n_test_tokens}")
        lines.append("")
        lines.append("network accuracies (argmax, test split)")
        for name in sorted(self.network_accuracies):
            lines.append(f"  {name}\t{self.network_accuracies[name]:.4f}")
        lines.append("")
        lines.append("overall flat phrase accuracy (test split)")
        lines.append(f"  syntactic\t{self.overall_syn:.4f}")
        lines.append(f"  semantic\t{self.overall_sem:.4f}")
        lines.append("")
        lines.append("lexicon ablation (fraction removed, entries left, syn, sem)")
        for fraction, size, syn, sem in self.ablation_rows:
            lines.append(f"  {fraction:.2f}\t{size}\t{syn:.4f}\t{sem:.4f}")
        lines.append("")
        lines.append("exclusion-curve mean accuracy (test split)")
        for name in sorted(self.curve_means):
            lines.append(f"  {name}\t{self.curve_means[name]:.4f}")
        return "\n".join(lines) + "\n"


def evaluate(models: ModelSet, corpus: AnnotatedCorpus,
             ablation_fractions=(0.0, 0.05, 0.10), ablation_seed=0) -> EvalReport:
    accuracies = all_network_accuracies(models, corpus, TEST)
    syn, sem = corpus_flat_accuracy(models, corpus, TEST)
    rows = ablation_experiment(models, corpus, ablation_fractions, ablation_seed)
    curves = srn_vs_ngram_curves(models, corpus, BSYN)
    curve_means = {name: curve.mean_accuracy() for name, curve in curves.items()}
    return EvalReport(
        n_train_tokens=corpus.n_tokens(TRAIN),
        n_test_tokens=corpus.n_tokens(TEST),
        network_accuracies=accuracies,
        overall_syn=syn,
        overall_sem=sem,
        ablation_rows=rows,
        curve_means=curve_means,
    )
