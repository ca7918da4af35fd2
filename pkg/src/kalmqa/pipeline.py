"""End-to-end wiring: question text to answer set."""
from dataclasses import dataclass, field

from .drs import parse_cnl
from .engine import FactBase, evaluate, ingest_kb, load_rules
from .frameparser import parse_sentence
from .frames import default_role_map, load_frames, load_role_classes
from .learner import LvpStore
from .paraphrase import _read_data, default_adhoc_rules, default_lexicon, paraphrase
from .ulrq import build_ulrq


@dataclass
class Resources:
    kb: FactBase
    store: LvpStore
    frames: list
    role_map: dict
    rules: list
    registry: object = None
    lexicon: object = None
    adhoc_rules: list = field(default_factory=list)

    def __post_init__(self):
        if self.registry is None:
            self.registry = self.kb.registry()
        if self.lexicon is None:
            self.lexicon = default_lexicon()


def load_resources(kb_text, lvps_text=None, frames_text=None, rules_text=None,
                   role_classes_text=None):
    """Build the read-only state for a batch run; bundled data fills any gap."""
    frames = load_frames(frames_text if frames_text is not None else _read_data("frames.pl"))
    role_map = (load_role_classes(role_classes_text, frames) if role_classes_text is not None
                else default_role_map())
    store = LvpStore.loads(lvps_text if lvps_text is not None else _read_data("lvps.pl"))
    rules = load_rules(rules_text if rules_text is not None else _read_data("rules.cnl"),
                       store, frames=frames, role_map=role_map)
    return Resources(ingest_kb(kb_text), store, frames, role_map, rules,
                     adhoc_rules=default_adhoc_rules())


@dataclass
class Interpretation:
    tokens: list
    drs: object
    parses: list
    query: object


def interpret(question, res):
    tokens = paraphrase(question, res.lexicon, res.adhoc_rules)
    drs = parse_cnl(tokens)
    parses = parse_sentence(drs, res.store, res.frames)
    query = build_ulrq(parses, drs, res.registry, res.role_map, res.frames)
    return Interpretation(tokens, drs, parses, query)


def answer(question, res, kb=None):
    """Answer set for one question, optionally against another fact base."""
    query = interpret(question, res).query
    return evaluate(query, res.kb if kb is None else kb, res.rules)
