import numpy as np
import pytest

from flatspeech.corpus import (
    REASON_INTERJECTION,
    REASON_NONE,
    REASON_WORD_REPAIR,
    TRAIN,
    TEST,
    AnnotatedToken,
    format_corpus,
    gold_phrases,
    derive_training_sets,
    parse_corpus,
)
from flatspeech.generator import GrammarConfig, NoiseConfig, generate_synthetic, synth_word_graph
from flatspeech.lattice import DecoderConfig, connectable

FIG_EXAMPLE = """== turn t1 train
Käse\tN\tNG\tNO\tNEG\t1\tnone
ich\tU\tNG\tANIM\tAGENT\t1\tnone
meine\tV\tVG\tUTTER\tACT\t1\tnone
natürlich\tA\tSG\tNIL\tMISC\t1\tnone
März\tN\tNG\tTIME\tTM-AT\t1\tnone
"""


def test_parse_example_tokens():
    corpus = parse_corpus(FIG_EXAMPLE)
    utt = corpus.utterances()[0]
    assert len(utt.tokens) == 5
    assert utt.tokens[0].bsem == "NO"
    assert utt.tokens[4].asem == "TM-AT"


def test_round_trip_identity():
    corpus = parse_corpus(FIG_EXAMPLE)
    assert parse_corpus(format_corpus(corpus)).turns == corpus.turns


def test_label_typo_rejected_with_location():
    bad = FIG_EXAMPLE.replace("VG", "VGG")
    with pytest.raises(ValueError, match=":4:"):
        parse_corpus(bad)


def test_duplicate_turn_id_rejected():
    with pytest.raises(ValueError, match="duplicate turn id"):
        parse_corpus(FIG_EXAMPLE + FIG_EXAMPLE)


def test_bad_deletion_mark_rejected():
    bad = FIG_EXAMPLE.replace("none\n", "gone\n", 1)
    with pytest.raises(ValueError, match="deletion"):
        parse_corpus(bad)


def test_fixture_corpus_loads(paper_fixture_corpus):
    assert len(paper_fixture_corpus.turns) == 13
    assert all(t.split == TRAIN for t in paper_fixture_corpus.turns)
    words = paper_fixture_corpus.utterances()[0].words()
    assert words == ["Käse", "ich", "meine", "natürlich", "März"]


def test_gold_phrases_skip_deleted(paper_fixture_corpus):
    # the spliced repetition fixture: deleted "ich" is not in any span
    utt = next(u for t in paper_fixture_corpus.turns if t.turn_id == "fix10"
               for u in t.utterances)
    phrases = gold_phrases(utt.tokens)
    covered = [i for span, _, _ in phrases for i in span]
    deleted = [i for i, tok in enumerate(utt.tokens) if tok.deleted is not REASON_NONE]
    assert not set(covered) & set(deleted)
    surviving = [i for i, tok in enumerate(utt.tokens) if tok.deleted is REASON_NONE]
    assert sorted(covered) == surviving


def test_prediction_pair_count(lexicon, paper_fixture_corpus):
    sets = derive_training_sets(paper_fixture_corpus, lexicon, TRAIN)
    total_tokens = paper_fixture_corpus.n_tokens(TRAIN)
    n_utts = len(paper_fixture_corpus.utterances(TRAIN))
    pairs = sum(len(seq) for seq in sets["syn_predict"])
    assert pairs == total_tokens - n_utts


def test_disambiguation_uses_membership(lexicon, paper_fixture_corpus):
    sets = derive_training_sets(paper_fixture_corpus, lexicon, TRAIN)
    fig2 = sets["syn_disambig"][0]
    meine_input, meine_target = fig2[2]
    assert meine_input[1] == 1.0 and meine_input[3] == 1.0  # V and U possible
    assert np.argmax(meine_target) == 1                     # gold verb


def test_word_repair_pair_is_positive(lexicon, paper_fixture_corpus):
    sets = derive_training_sets(paper_fixture_corpus, lexicon, TRAIN)
    positives = [item for seq in sets["word_repair"] for item in seq
                 if item[1][0] == 1.0]
    assert positives  # the repeated-"ich" and "Termin Treffen" fixtures
    lex_eq_values = {item[0][0] for item in positives}
    assert 1.0 in lex_eq_values and 0.0 in lex_eq_values


def test_empty_corpus_rejected(lexicon, paper_fixture_corpus):
    with pytest.raises(ValueError, match="empty"):
        derive_training_sets(paper_fixture_corpus, lexicon, TEST)


def test_generate_deterministic():
    a = generate_synthetic(GrammarConfig(), size=12, seed=5)
    b = generate_synthetic(GrammarConfig(), size=12, seed=5)
    assert a.turns == b.turns


def test_generate_no_noise_is_clean():
    quiet = GrammarConfig(noise=NoiseConfig(
        interjection_rate=0, repetition_rate=0, substitution_rate=0,
        restart_rate=0))
    corpus = generate_synthetic(quiet, size=20, seed=1)
    for utt in corpus.utterances():
        assert all(tok.deleted is REASON_NONE for tok in utt.tokens)


def test_generate_split_by_turn():
    corpus = generate_synthetic(GrammarConfig(), size=30, seed=2)
    train_ids = {t.turn_id for t in corpus.turns if t.split == TRAIN}
    test_ids = {t.turn_id for t in corpus.turns if t.split == TEST}
    assert not train_ids & test_ids
    assert len(train_ids) == 10


def test_noise_marks_carry_reasons():
    noisy = GrammarConfig(noise=NoiseConfig(
        interjection_rate=0.3, repetition_rate=0.3, substitution_rate=0.2,
        restart_rate=0.2))
    corpus = generate_synthetic(noisy, size=30, seed=3)
    reasons = {tok.deleted for utt in corpus.utterances() for tok in utt.tokens}
    assert REASON_INTERJECTION in reasons and REASON_WORD_REPAIR in reasons


def test_repetition_rate_one_marks_every_first_copy():
    cfg = GrammarConfig(noise=NoiseConfig(
        interjection_rate=0, repetition_rate=1.0, substitution_rate=0,
        restart_rate=0))
    corpus = generate_synthetic(cfg, size=5, seed=4)
    for utt in corpus.utterances():
        marked = [t for t in utt.tokens if t.deleted == REASON_WORD_REPAIR]
        surviving = [t for t in utt.tokens if t.deleted is REASON_NONE]
        assert len(marked) == len(surviving)


def test_graph_contains_gold_path(lexicon):
    corpus = generate_synthetic(GrammarConfig(), size=6, seed=6)
    config = DecoderConfig()
    for i, utt in enumerate(corpus.utterances()):
        graph = synth_word_graph(utt, NoiseConfig(), lexicon, seed=40 + i)
        gold = utt.words()
        # follow the gold words greedily through the sorted hypotheses
        path = []
        for word in gold:
            candidates = [h for h in graph.hypotheses if h.word == word
                          and (not path or connectable(path[-1], h, config))]
            assert candidates, f"gold word {word} unreachable"
            path.append(min(candidates, key=lambda h: h.start_c))


def test_graph_confusion_rate_zero_is_linear(lexicon):
    corpus = generate_synthetic(GrammarConfig(), size=3, seed=7)
    utt = corpus.utterances()[0]
    quiet = NoiseConfig(confusion_rate=0.0)
    graph = synth_word_graph(utt, quiet, lexicon, seed=1)
    assert len(graph) == len(utt.tokens)


def test_graph_density_near_target(lexicon):
    corpus = generate_synthetic(GrammarConfig(), size=25, seed=9)
    total_hyps = 0
    total_tokens = 0
    for i, utt in enumerate(corpus.utterances()):
        graph = synth_word_graph(utt, NoiseConfig(), lexicon, seed=60 + i)
        total_hyps += len(graph)
        total_tokens += len(utt.tokens)
    density = total_hyps / total_tokens
    assert 5.3 <= density <= 7.3
