"""Command-line interface: corpus generation, training, tagging, lattice
decoding and the evaluation experiments.

All outputs are plain structured text on stdout and are byte-identical
across reruns with the same seeds; anything timing-related goes to stderr.
"""

import argparse
import json
import sys

from .categories import BSEM, BSYN
from .corpus import TRAIN, load_corpus, save_corpus
from .fixtures import default_lexicon, fixture_corpus
from .generator import GrammarConfig, NoiseConfig, generate_synthetic, synth_word_graph
from .harness import (
    ablation_experiment,
    corpus_flat_accuracy,
    evaluate,
    forward_step_seconds,
    srn_vs_ngram_curves,
    system_output,
)
from .lattice import DecoderConfig, decode, format_decode_result, load_word_graph
from .lexicon import load_lexicon
from .models import load_models, save_models, train_models
from .network import TrainingConfig
from .ngram import format_curves
from .tagger import format_annotations


def _add_decoder_flags(parser):
    parser.add_argument("--beam-width", type=int, default=10)
    parser.add_argument("--gap", type=float, default=0.03,
                        help="max silence between connectable hypotheses (s)")
    parser.add_argument("--ranking", choices=("normalized", "raw"), default="normalized")
    parser.add_argument("--acoustic-only", action="store_true",
                        help="score with acoustic plausibility alone")
    parser.add_argument("--no-semantics", action="store_true",
                        help="drop the semantic factor from scoring")


def _decoder_config(args):
    return DecoderConfig(
        beam_width=args.beam_width,
        connection_gap_max=args.gap,
        ranking=args.ranking,
        use_syntax=not args.acoustic_only,
        use_semantics=not (args.acoustic_only or args.no_semantics))


def _load_config_file(path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="flatspeech",
        description="flat syntactic/semantic analysis of speech word lattices")
    parser.add_argument("--config", help="JSON file with default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic annotated corpus")
    p.add_argument("--out", required=True, help="corpus file to write")
    p.add_argument("--size", type=int, default=150, help="number of turns")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lattice-dir", help="also write one word graph per utterance")
    p.add_argument("--lexicon", help="lexicon file (default: packaged)")
    p.add_argument("--hyps-per-word", type=float, default=6.3)

    p = sub.add_parser("train", help="train all networks on a corpus")
    p.add_argument("--corpus", help="corpus file (default: packaged fixtures + synthetic)")
    p.add_argument("--lexicon", help="lexicon file (default: packaged)")
    p.add_argument("--out-dir", required=True, help="directory for weight files")
    p.add_argument("--epochs", type=int, default=3000)
    p.add_argument("--learning-rate", type=float, default=0.001)
    p.add_argument("--hidden", type=int, default=14)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--predict-epochs", type=int,
                   help="override epochs for the prediction nets")
    p.add_argument("--predict-learning-rate", type=float,
                   help="override learning rate for the prediction nets")

    p = sub.add_parser("tag", help="tag a transcript token stream")
    p.add_argument("--models", required=True, help="directory from `train`")
    p.add_argument("words", nargs="+")
    p.add_argument("--no-corrections", action="store_true")

    p = sub.add_parser("decode", help="decode a word-graph file")
    p.add_argument("--models", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--trace", action="store_true", help="print beam trace")
    _add_decoder_flags(p)

    p = sub.add_parser("eval", help="full evaluation report on a corpus")
    p.add_argument("--models", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--ablation-seed", type=int, default=0)

    p = sub.add_parser("ablate", help="lexicon-ablation robustness experiment")
    p.add_argument("--models", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--fractions", default="0.0,0.05,0.10")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("ngram-compare", help="recurrent predictor vs n-gram curves")
    p.add_argument("--models", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--axis", choices=("syn", "sem"), default="syn")
    p.add_argument("--timing", action="store_true",
                   help="report forward-step wall time on stderr")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = _load_config_file(args.config)
        for key, value in defaults.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and parser.get_default(attr) == getattr(args, attr):
                setattr(args, attr, value)
    try:
        return _dispatch(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _models_from(args):
    return load_models(args.models)


def _dispatch(args) -> int:
    if args.command == "gen":
        noise = NoiseConfig(hyps_per_word=args.hyps_per_word, seed=args.seed)
        corpus = generate_synthetic(GrammarConfig(noise=noise), args.size, args.seed)
        save_corpus(corpus, args.out)
        print(f"wrote {len(corpus.turns)} turns, {corpus.n_tokens()} tokens to {args.out}")
        if args.lattice_dir:
            import os

            lexicon = load_lexicon(args.lexicon) if args.lexicon else default_lexicon()
            os.makedirs(args.lattice_dir, exist_ok=True)
            for i, utt in enumerate(corpus.utterances()):
                graph = synth_word_graph(utt, noise, lexicon, seed=args.seed + i)
                path = os.path.join(args.lattice_dir, f"utt{i:04d}.lattice")
                with open(path, "w", encoding="utf-8") as handle:
                    for h in graph.hypotheses:
                        handle.write(f"{h.start_time:.2f}\t{h.end_time:.2f}"
                                     f"\t{h.word}\t{h.acoustic_plausibility:.6e}\n")
            print(f"wrote {len(corpus.utterances())} lattices to {args.lattice_dir}")
        return 0

    if args.command == "train":
        lexicon = load_lexicon(args.lexicon) if args.lexicon else default_lexicon()
        if args.corpus:
            corpus = load_corpus(args.corpus)
        else:
            corpus = fixture_corpus().merged_with(
                generate_synthetic(GrammarConfig(), 150, args.seed))
        config = TrainingConfig(epochs=args.epochs, learning_rate=args.learning_rate,
                                hidden_units=args.hidden, seed=args.seed)
        overrides = {}
        if args.predict_epochs or args.predict_learning_rate:
            pconfig = TrainingConfig(
                epochs=args.predict_epochs or args.epochs,
                learning_rate=args.predict_learning_rate or args.learning_rate,
                hidden_units=args.hidden, seed=args.seed)
            overrides = {"syn_predict": pconfig, "sem_predict": pconfig}

        def progress(name, first, last):
            print(f"trained {name}: loss {first:.4f} -> {last:.4f}", file=sys.stderr)

        models = train_models(corpus, lexicon, config, overrides, progress)
        save_models(models, args.out_dir)
        print(f"wrote weight files to {args.out_dir}")
        return 0

    if args.command == "tag":
        models = _models_from(args)
        if args.no_corrections:
            from .tagger import tag_sequence

            annotations = tag_sequence(models.lexicon, models.tagger, args.words)
        else:
            annotations, _, _ = system_output(models, args.words)
        sys.stdout.write(format_annotations(annotations))
        return 0

    if args.command == "decode":
        models = _models_from(args)
        graph = load_word_graph(args.graph)
        result = decode(graph, _decoder_config(args), models, with_trace=args.trace)
        sys.stdout.write(format_decode_result(result, graph))
        if args.trace:
            sys.stdout.write("\n".join(result.trace) + "\n")
        return 0 if result.complete else 1

    if args.command == "eval":
        models = _models_from(args)
        corpus = load_corpus(args.corpus)
        report = evaluate(models, corpus, ablation_seed=args.ablation_seed)
        sys.stdout.write(report.to_text())
        return 0

    if args.command == "ablate":
        models = _models_from(args)
        corpus = load_corpus(args.corpus)
        fractions = [float(f) for f in args.fractions.split(",")]
        rows = ablation_experiment(models, corpus, fractions, args.seed)
        print("fraction\tentries\tsyntactic\tsemantic")
        for fraction, size, syn, sem in rows:
            print(f"{fraction:.2f}\t{size}\t{syn:.4f}\t{sem:.4f}")
        return 0

    if args.command == "ngram-compare":
        models = _models_from(args)
        corpus = load_corpus(args.corpus)
        axis = BSYN if args.axis == "syn" else BSEM
        curves = srn_vs_ngram_curves(models, corpus, axis)
        sys.stdout.write(format_curves(curves))
        if args.timing:
            print(f"forward step: {forward_step_seconds(models):.2e} s", file=sys.stderr)
        return 0

    raise ValueError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
