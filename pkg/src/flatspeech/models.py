"""Bundled trained models: the five tagging nets, two prediction nets and
six correction nets behind one handle, plus training orchestration and a
directory-based weight store."""

import os
from dataclasses import dataclass

from .categories import ASEM, ASYN, BSEM, BSYN, SCHEMES
from .correction import CorrectionNets
from .corpus import TRAIN, AnnotatedCorpus, derive_training_sets
from .lexicon import Lexicon, load_lexicon, save_lexicon
from .network import (
    Network,
    NetworkSpec,
    TrainingConfig,
    init_network,
    load_network,
    save_network,
    train,
)
from .predictor import PredictorNets
from .tagger import TaggerNets

_B_SYN = len(SCHEMES[BSYN])
_B_SEM = len(SCHEMES[BSEM])
_A_SYN = len(SCHEMES[ASYN])
_A_SEM = len(SCHEMES[ASEM])


def network_specs(hidden: int) -> dict:
    """Layer layout for every trainable network in the system."""
    return {
        "syn_disambig": NetworkSpec(_B_SYN, hidden, _B_SYN, recurrent=True),
        "sem_disambig": NetworkSpec(_B_SEM, hidden, _B_SEM, recurrent=True),
        "syn_abstract": NetworkSpec(_B_SYN, hidden, _A_SYN, recurrent=True),
        "sem_abstract": NetworkSpec(_B_SEM, hidden, _A_SEM, recurrent=True),
        "phrase_start": NetworkSpec(_B_SYN, hidden, 2, recurrent=True),
        "syn_predict": NetworkSpec(_B_SYN, hidden, _B_SYN, recurrent=True),
        "sem_predict": NetworkSpec(_B_SEM, hidden, _B_SEM, recurrent=True),
        "syn_equality": NetworkSpec(2 * _B_SYN, hidden, 2),
        "sem_equality": NetworkSpec(2 * _B_SEM, hidden, 2),
        "word_repair": NetworkSpec(3, 4, 2),
        "abs_syn_equality": NetworkSpec(2 * _A_SYN, hidden, 2),
        "abs_sem_equality": NetworkSpec(2 * _A_SEM, hidden, 2),
        "phrase_repair": NetworkSpec(3, 4, 2),
    }


NETWORK_NAMES = tuple(network_specs(14))


@dataclass
class ModelSet:
    lexicon: Lexicon
    tagger: TaggerNets
    predictor: PredictorNets
    correction: CorrectionNets

    def networks(self) -> dict:
        named = {}
        named.update(self.tagger.named())
        named["syn_predict"] = self.predictor.syn_predict
        named["sem_predict"] = self.predictor.sem_predict
        named.update(self.correction.named())
        return named


def assemble(lexicon: Lexicon, nets: dict) -> ModelSet:
    return ModelSet(
        lexicon=lexicon,
        tagger=TaggerNets(
            syn_disambig=nets["syn_disambig"],
            sem_disambig=nets["sem_disambig"],
            syn_abstract=nets["syn_abstract"],
            sem_abstract=nets["sem_abstract"],
            phrase_start=nets["phrase_start"]),
        predictor=PredictorNets(
            syn_predict=nets["syn_predict"],
            sem_predict=nets["sem_predict"]),
        correction=CorrectionNets(
            syn_equality=nets["syn_equality"],
            sem_equality=nets["sem_equality"],
            word_repair=nets["word_repair"],
            abs_syn_equality=nets["abs_syn_equality"],
            abs_sem_equality=nets["abs_sem_equality"],
            phrase_repair=nets["phrase_repair"]),
    )


def init_models(lexicon: Lexicon, hidden: int = 14, seed: int = 0) -> ModelSet:
    specs = network_specs(hidden)
    nets = {name: init_network(spec, seed=seed + i)
            for i, (name, spec) in enumerate(sorted(specs.items()))}
    return assemble(lexicon, nets)


def train_models(corpus: AnnotatedCorpus, lexicon: Lexicon,
                 config: TrainingConfig, overrides=None, progress=None) -> ModelSet:
    """Train every network on its derived dataset from the training split.

    `overrides` maps network names to their own TrainingConfig; the
    prediction nets usually want a longer, gentler schedule than the
    near-deterministic classification nets.
    """
    datasets = derive_training_sets(corpus, lexicon, TRAIN)
    specs = network_specs(config.hidden_units)
    nets = {}
    for i, name in enumerate(sorted(specs)):
        dataset = datasets[name]
        net_config = (overrides or {}).get(name, config)
        net = init_network(specs[name], seed=net_config.seed + i)
        if dataset:
            net, history = train(net, dataset, net_config)
            if progress is not None:
                progress(name, history[0], history[-1])
        nets[name] = net
    return assemble(lexicon, nets)


def save_models(models: ModelSet, dirpath):
    os.makedirs(dirpath, exist_ok=True)
    save_lexicon(models.lexicon, os.path.join(dirpath, "lexicon.tsv"))
    for name, net in models.networks().items():
        save_network(net, os.path.join(dirpath, f"{name}.net"))


def load_models(dirpath) -> ModelSet:
    lexicon = load_lexicon(os.path.join(dirpath, "lexicon.tsv"))
    nets = {name: load_network(os.path.join(dirpath, f"{name}.net"))
            for name in NETWORK_NAMES}
    return assemble(lexicon, nets)
