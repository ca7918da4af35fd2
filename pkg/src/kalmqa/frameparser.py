"""Apply stored lvps to a DRS to get candidate frame parses."""
from dataclasses import dataclass
from itertools import product

from .drs import Object, Predicate
from .frames import canonical_role, check_constraint, default_frames, frame_index
from .learner import extract


@dataclass(frozen=True)
class Filler:
    role: str
    word: int
    pattern: object     # GrammaticalPattern

    def key(self):
        return (self.word, self.role, self.pattern.text)


@dataclass(frozen=True)
class CandidateParse:
    frame: str
    lu_index: int
    fillers: tuple      # Filler, sorted by key()

    def __post_init__(self):
        if not self.fillers:
            raise ValueError("a candidate parse needs at least one filler")
        object.__setattr__(self, "fillers", tuple(sorted(self.fillers, key=Filler.key)))

    @property
    def role_words(self):
        return frozenset((f.role, f.word) for f in self.fillers)

    @property
    def word_patterns(self):
        return frozenset((f.word, f.pattern.text) for f in self.fillers)

    def filler(self, role):
        for f in self.fillers:
            if f.role == role:
                return f
        return None

    def sort_key(self):
        return (self.lu_index, self.frame, tuple(f.key() for f in self.fillers))

    def __str__(self):
        body = ",".join(f"({f.role},{f.word},'{f.pattern.text}')" for f in self.fillers)
        return f"({self.frame},{self.lu_index},[{body}])"


def _lu_terms(drs):
    for t in drs.terms:
        if isinstance(t, Object):
            yield t.lexeme, "n", t
        elif isinstance(t, Predicate):
            yield t.lexeme, "v", t


def candidate_lexical_units(drs):
    """(lexeme, pos, word index) for every object (n) and predicate (v) term."""
    return [(lex, pos, t.position[1]) for lex, pos, t in _lu_terms(drs)]


def _satisfies_types(drs, frame_def, role, word):
    if frame_def is None:
        return True
    rdef = frame_def.role(role)
    if rdef is None or not rdef.constraints:
        return True
    tok = drs.token(word)
    if tok.pos != "proper":
        return True
    return all(check_constraint(c, tok.lemma) for c in rdef.constraints)


def parse_sentence(drs, store, frames=None):
    """Every successful application of a stored lvp, canonically sorted."""
    index = frame_index(default_frames() if frames is None else frames)
    found = set()
    for lexeme, pos, lu_term in _lu_terms(drs):
        for lvp in store.lookup(lexeme, pos):
            fdef = index.get(lvp.frame)
            options = []
            for spec in lvp.patterns:
                reached = extract(spec.pattern, drs, lu_term)
                role = canonical_role(lvp.frame, spec.role)
                fits = [Filler(role, t.position[1], spec.pattern) for t in reached
                        if _satisfies_types(drs, fdef, role, t.position[1])]
                if not fits and spec.required:
                    break
                options.append(fits)
            else:
                for combo in product(*options):
                    found.add(CandidateParse(lvp.frame, lu_term.position[1], tuple(combo)))
    return sorted(found, key=CandidateParse.sort_key)
