import numpy as np
import pytest

from flatspeech.categories import BSEM, BSYN, CategoryVector
from flatspeech.corpus import REASON_INTERJECTION
from flatspeech.lexicon import lookup
from flatspeech.models import init_models
from flatspeech.tagger import (
    SEM,
    SYN,
    TaggerState,
    abstract_map,
    disambiguate,
    finalize_phrases,
    format_annotations,
    phrase_start,
    tag_sequence,
)


@pytest.fixture(scope="module")
def untrained(lexicon):
    return init_models(lexicon, seed=3)


def test_disambiguate_axis_checked(untrained):
    state = TaggerState(untrained.tagger)
    wrong = CategoryVector.from_labels(BSEM, ["NIL"])
    with pytest.raises(ValueError):
        disambiguate(SYN, untrained.tagger, state, wrong)


def test_disambiguate_updates_context(untrained):
    state = TaggerState(untrained.tagger)
    before = state.contexts["syn_disambig"].copy()
    vec, _, _ = lookup(untrained.lexicon, "ich")
    disambiguate(SYN, untrained.tagger, state, vec)
    assert not np.array_equal(before, state.contexts["syn_disambig"])


def test_abstract_map_shapes(untrained):
    state = TaggerState(untrained.tagger)
    vec, _, _ = lookup(untrained.lexicon, "ich")
    dis = disambiguate(SYN, untrained.tagger, state, vec)
    abs_vec = abstract_map(SYN, untrained.tagger, state, dis)
    assert abs_vec.axis == "asyn" and len(abs_vec) == 8


def test_phrase_start_first_word_rule(untrained):
    state = TaggerState(untrained.tagger)
    vec, _, _ = lookup(untrained.lexicon, "März")
    dis = disambiguate(SYN, untrained.tagger, state, vec)
    assert phrase_start(untrained.tagger, state, dis) == 1.0
    state.position = 3
    assert 0.0 <= phrase_start(untrained.tagger, state, dis) <= 1.0


def test_tag_sequence_totality_on_unknown_words(untrained):
    annotations = tag_sequence(untrained.lexicon, untrained.tagger,
                               ["blorp", "frizzle", "quux"])
    assert len(annotations) == 3
    assert all(not a.known for a in annotations)
    assert all(len(a.basic_syn) == 13 and len(a.abs_sem) == 17 for a in annotations)


def test_tag_sequence_rejects_empty(untrained):
    with pytest.raises(ValueError):
        tag_sequence(untrained.lexicon, untrained.tagger, [])


def test_incrementality_prefix_equality(untrained):
    words = ["ich", "habe", "am", "Montag", "einen", "Termin"]
    full = tag_sequence(untrained.lexicon, untrained.tagger, words)
    prefix = tag_sequence(untrained.lexicon, untrained.tagger, words[:3])
    for a, b in zip(prefix, full[:3]):
        assert np.array_equal(a.basic_syn.values, b.basic_syn.values)
        assert a.phrase_start == b.phrase_start


def test_context_changes_ambiguous_decision(quick_models):
    # the trained nets must resolve "meine" differently after "ich" than
    # at utterance start, where the pronoun reading is fine
    verb_context = tag_sequence(quick_models.lexicon, quick_models.tagger,
                                ["ich", "meine", "natürlich", "März"])
    assert verb_context[1].bsyn_label == "V"


def test_untrained_zero_like_outputs_tie_to_index_zero(lexicon):
    from flatspeech.network import Network, NetworkSpec
    from flatspeech.models import assemble, network_specs

    specs = network_specs(14)
    zeroed = {name: Network(spec,
                            np.zeros((spec.n_input + spec.n_context + 1, spec.n_hidden)),
                            np.zeros((spec.n_hidden + 1, spec.n_output)))
              for name, spec in specs.items()}
    models = assemble(lexicon, zeroed)
    [ann] = tag_sequence(models.lexicon, models.tagger, ["März"])
    assert np.allclose(ann.basic_syn.values, 0.5)
    assert ann.bsyn_label == "N"  # lowest index on all-equal outputs


def annotations_for(models, words):
    return tag_sequence(models.lexicon, models.tagger, words)


def test_finalize_phrases_partition(untrained):
    annotations = annotations_for(untrained, ["ich", "habe", "einen", "Termin"])
    phrases = finalize_phrases(annotations)
    covered = [i for span, _, _ in phrases for i in span]
    assert sorted(covered) == [0, 1, 2, 3]


def test_finalize_phrases_skips_deleted(untrained):
    from dataclasses import replace

    annotations = annotations_for(untrained, ["ähm", "ich", "komme"])
    annotations[0] = replace(annotations[0], deleted=REASON_INTERJECTION)
    phrases = finalize_phrases(annotations)
    covered = [i for span, _, _ in phrases for i in span]
    assert 0 not in covered and sorted(covered) == [1, 2]


def test_finalize_single_word_phrase_rules_coincide(untrained):
    [ann] = annotations_for(untrained, ["Termin"])
    [(span, asyn, asem)] = finalize_phrases([ann])
    assert span == (0,)
    assert asyn == ann.asyn_label and asem == ann.asem_label


def test_finalize_first_last_word_labels(quick_models):
    # first word fixes the syntactic label, last word the semantic label
    annotations = annotations_for(quick_models, ["von", "neun", "bis", "vier", "Uhr"])
    phrases = finalize_phrases(annotations)
    for span, asyn, asem in phrases:
        assert asyn == annotations[span[0]].asyn_label
        assert asem == annotations[span[-1]].asem_label


def test_finalize_empty_rejected():
    with pytest.raises(ValueError):
        finalize_phrases([])


def test_annotation_dump_format(untrained):
    annotations = annotations_for(untrained, ["ich", "komme"])
    dump = format_annotations(annotations)
    lines = dump.strip().split("\n")
    assert len(lines) == 2
    fields = lines[0].split("\t")
    assert fields[1] == "ich"
    assert len(fields) == 9 + 3  # id, word, 4 labels, start, deleted, 4 vectors
