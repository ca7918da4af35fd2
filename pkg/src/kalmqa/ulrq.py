"""From candidate parses to a wired conjunctive/disjunctive query.

Parses are pruned by role-filler disambiguation, subsumed parses are
dropped, the rest are grouped into maximal sets of pairwise alternatives
(one group per hop) and each group becomes a disjunction of atoms.
"""
from dataclasses import dataclass
from typing import Union

import networkx as nx

from .drs import Predicate
from .errors import (GroupingAmbiguity, NoInterpretation, NotAQuestion,
                     PrologSyntaxError)
from .frames import default_frames, default_role_map, disambiguate, frame_index
from .prolog import Atom, Compound, flatten, quote_atom, read_term
from .prolog import Var as PVar

RELATION_NAMES = {"Movie": "movie", "Coop": "coop", "Distinct": "distinct"}
MASK = "xxxx"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: Union[str, int]

    def __str__(self):
        if self.value == MASK:
            return MASK
        return str(self.value) if isinstance(self.value, int) else quote_atom(self.value)


@dataclass(frozen=True)
class QueryAtom:
    relation: str
    bindings: tuple     # ((role, term), ...)

    def __post_init__(self):
        roles = [r for r, _ in self.bindings]
        if len(roles) != len(set(roles)):
            raise ValueError(f"repeated role in {self.relation} atom")

    @property
    def is_distinct(self):
        return self.relation == "distinct"

    @property
    def negated_equality(self):
        if not self.is_distinct:
            return None
        return tuple(t for _, t in self.bindings)

    def get(self, role):
        for r, t in self.bindings:
            if r == role:
                return t
        return None

    def terms(self):
        return [t for _, t in self.bindings]


@dataclass(frozen=True)
class AlternativeGroup:
    atoms: tuple

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("an alternative group needs at least one atom")


@dataclass(frozen=True)
class Ulrq:
    groups: tuple
    answer_var: Var

    def atoms(self):
        return [a for g in self.groups for a in g.atoms]


def subsumes(f, g):
    """True iff ``g`` subsumes ``f``."""
    return f.frame == g.frame and f.role_words <= g.role_words


def alternatives(f, g):
    if f.lu_index != g.lu_index:
        return False
    a, b = f.word_patterns, g.word_patterns
    if not (a <= b or b <= a):
        return False
    return not subsumes(f, g) and not subsumes(g, f)


def remove_subsumed(parses):
    """Drop every parse strictly subsumed by another; keep one of each mutually subsuming set."""
    parses = sorted(set(parses), key=lambda p: p.sort_key())
    kept = []
    for i, f in enumerate(parses):
        strictly = any(subsumes(f, g) and not subsumes(g, f) for g in parses)
        duplicate = any(subsumes(f, g) and subsumes(g, f) for g in parses[:i])
        if not strictly and not duplicate:
            kept.append(f)
    return kept


def maximal_alternative_sets(parses):
    graph = nx.Graph()
    graph.add_nodes_from(range(len(parses)))
    for i, f in enumerate(parses):
        for j in range(i + 1, len(parses)):
            if alternatives(f, parses[j]):
                graph.add_edge(i, j)
    cliques = sorted(sorted(c) for c in nx.find_cliques(graph))
    covered = [i for c in cliques for i in c]
    if len(covered) != len(set(covered)):
        shown = "; ".join(str(parses[i]) for i in sorted(set(
            i for i in covered if covered.count(i) > 1)))
        raise GroupingAmbiguity(f"overlapping alternative sets around {shown}")
    return [[parses[i] for i in c] for c in cliques]


class _Wiring:
    def __init__(self, drs, movie_parses, frames):
        self.drs = drs
        self.frames = frame_index(frames)
        self.fresh = 0
        # FilmNm filler word -> that film's Id variable
        self.film_ids = {}
        for p in movie_parses:
            f = p.filler("FilmNm")
            if f is not None:
                self.film_ids[f.word] = Var(f"I{f.word}")

    def term(self, word):
        tok = self.drs.token(word)
        if tok.pos == "proper":
            return Const(tok.lemma)
        return Var(f"W{word}")

    def new_var(self, prefix):
        self.fresh += 1
        return Var(f"_{prefix}{self.fresh}")

    def _role_order(self, frame):
        fdef = self.frames.get(frame)
        return {r.name: i for i, r in enumerate(fdef.roles)} if fdef else {}

    def atom(self, parse):
        relation = RELATION_NAMES.get(parse.frame, parse.frame.lower())
        order = self._role_order(parse.frame)
        fillers = sorted(parse.fillers, key=lambda f: (order.get(f.role, len(order)), f.role))
        if parse.frame == "Distinct":
            items = [(f.role, self.film_ids.get(f.word) or self.term(f.word)) for f in fillers]
            return QueryAtom(relation, tuple(items))
        if parse.frame == "Movie":
            film = parse.filler("FilmNm")
            if film is None:
                head = [("FilmNm", self.new_var("F")), ("Id", self.new_var("I"))]
            else:
                head = [("FilmNm", self.term(film.word)), ("Id", self.film_ids[film.word])]
            rest = [(f.role, self.term(f.word)) for f in fillers if f.role != "FilmNm"]
            return QueryAtom(relation, tuple(head + rest))
        return QueryAtom(relation, tuple((f.role, self.term(f.word)) for f in fillers))


def _answer_term(drs, wiring, used):
    refs = drs.query_refs()
    if not refs:
        raise NotAQuestion("the sentence has no wh-word")
    ref = refs[0]
    obj = drs.object_for(ref)
    term = wiring.term(obj.position[1])
    if term in used:
        return term
    # "what are the films ..." asks for the copula's complement
    for t in drs.terms:
        if isinstance(t, Predicate) and t.lexeme == "be" and t.object is not None:
            other = t.object if t.subject == ref else t.subject if t.object == ref else None
            if other is not None:
                candidate = wiring.term(drs.object_for(other).position[1])
                if candidate in used:
                    return candidate
    raise NoInterpretation("the wh-word fills no role in any surviving parse")


def build_ulrq(parses, drs, registry, role_map=None, frames=None):
    frames = default_frames() if frames is None else frames
    role_map = default_role_map() if role_map is None else role_map
    if not drs.query_refs():
        raise NotAQuestion("the sentence has no wh-word")
    valid = [p for p in parses if disambiguate(p, drs, registry, role_map, frames)]
    if not valid:
        raise NoInterpretation("every candidate parse was pruned")
    kept = remove_subsumed(valid)
    # relational hops first, identity constraints last
    sets = sorted(maximal_alternative_sets(kept),
                  key=lambda g: (all(p.frame == "Distinct" for p in g), g[0].sort_key()))
    wiring = _Wiring(drs, [p for p in kept if p.frame == "Movie"], frames)
    groups = []
    for members in sets:
        atoms = tuple(wiring.atom(p) for p in members)
        if len(atoms) > 1:
            shared = set.intersection(*({t for t in a.terms() if isinstance(t, Var)} for a in atoms))
            if not shared:
                raise GroupingAmbiguity(
                    "alternatives share no variable: " + "; ".join(str(p) for p in members))
        groups.append(AlternativeGroup(atoms))
    used = {t for g in groups for a in g.atoms for t in a.terms()}
    answer = _answer_term(drs, wiring, used)
    if not isinstance(answer, Var):
        raise NoInterpretation("the wh-word resolves to a constant")
    return Ulrq(tuple(groups), answer)


def render_atom(atom, name=str):
    if atom.is_distinct:
        a, b = atom.negated_equality
        return f"{name(a)} \\= {name(b)}"
    body = ",".join(f"{quote_atom(r)}={name(t)}" for r, t in atom.bindings)
    return f"{atom.relation}({body})"


def render_group(group, name=str):
    if len(group.atoms) == 1:
        return render_atom(group.atoms[0], name)
    return "(" + ";".join(render_atom(a, name) for a in group.atoms) + ")"


def render_query(ulrq, name=str):
    body = ",".join(render_group(g, name) for g in ulrq.groups)
    return f"q({name(ulrq.answer_var)}):-{body}."


def _logic_term(t):
    if isinstance(t, PVar):
        return Var(t.name)
    if isinstance(t, Atom):
        return Const(t.name)
    if isinstance(t, int):
        return Const(t)
    raise PrologSyntaxError(f"unexpected argument {t!r} in query")


def _parse_atom(t):
    if isinstance(t, Compound) and t.name == "\\=" and len(t.args) == 2:
        a, b = (_logic_term(x) for x in t.args)
        return QueryAtom("distinct", (("Item1", a), ("Item2", b)))
    if not isinstance(t, Compound):
        raise PrologSyntaxError(f"expected a relation atom, got {t!r}")
    bindings = []
    for arg in t.args:
        if not (isinstance(arg, Compound) and arg.name == "=" and isinstance(arg.args[0], Atom)):
            raise PrologSyntaxError(f"expected 'Role'=Term in {t.name}")
        bindings.append((arg.args[0].name, _logic_term(arg.args[1])))
    return QueryAtom(t.name, tuple(bindings))


def parse_query(text):
    """Read a query in the rendered notation back into a :class:`Ulrq`."""
    term = read_term(text)
    if not (isinstance(term, Compound) and term.name == ":-"):
        raise PrologSyntaxError("expected q(Answer):-Body")
    head, body = term.args
    if not (isinstance(head, Compound) and len(head.args) == 1 and isinstance(head.args[0], PVar)):
        raise PrologSyntaxError("query head must be q(Var)")
    groups = []
    for conj in flatten(body, ","):
        groups.append(AlternativeGroup(tuple(_parse_atom(a) for a in flatten(conj, ";"))))
    return Ulrq(tuple(groups), Var(head.args[0].name))
