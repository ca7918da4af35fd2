"""Movie fact base, background rules and query evaluation.

Facts are grouped into film entities by numeric Id, so a movie atom with
several role bindings is satisfied by one film carrying all of them.
Evaluation is a nested-loop join over substitutions; derived relations
are unfolded through their (non-recursive) rule bodies.
"""
from dataclasses import dataclass, field
from itertools import count, product

from .drs import parse_cnl
from .errors import (EvaluationError, IngestError, KalmError,
                     RuleDefinitionError)
from .frameparser import parse_sentence
from .frames import (EntityRegistry, default_frames, default_noun_classes,
                     default_role_map, disambiguate)
from .paraphrase import _data_lines, normalize, tokenize
from .ulrq import (Const, Var, _Wiring, maximal_alternative_sets,
                   remove_subsumed)

RELATION_ATTRIBUTES = {
    "directed_by": "Director",
    "starred_actors": "Actor",
    "written_by": "Writer",
    "release_year": "Release Year",
    "has_genre": "Genre",
    "in_language": "Language",
    "has_imdb_rating": "Rating",
    "has_tags": "Tag",
}
MOVIE_ATTRIBUTES = frozenset(RELATION_ATTRIBUTES.values())
ATTRIBUTE_CLASSES = {
    "Director": "person",
    "Actor": "person",
    "Writer": "person",
    "Release Year": "year",
    "Genre": "genre",
    "Language": "language",
}


@dataclass(frozen=True)
class MovieFact:
    film_name: str
    id: int
    attribute: str
    value: str


@dataclass
class Film:
    id: int
    name: str
    attributes: dict = field(default_factory=dict)   # attribute -> set of values


class FactBase:
    def __init__(self, facts=()):
        self.facts = list(facts)
        self.films = {}
        self.by_name = {}
        self.by_value = {}
        for f in self.facts:
            film = self.films.get(f.id)
            if film is None:
                film = self.films[f.id] = Film(f.id, f.film_name)
                self.by_name.setdefault(f.film_name, []).append(f.id)
            elif film.name != f.film_name:
                raise IngestError(f"film Id {f.id} names both {film.name!r} and {f.film_name!r}")
            film.attributes.setdefault(f.attribute, set()).add(f.value)
            self.by_value.setdefault((f.attribute, f.value), set()).add(f.id)

    def __len__(self):
        return len(self.facts)

    def registry(self, noun_classes=None):
        reg = EntityRegistry(noun_classes=default_noun_classes() if noun_classes is None
                             else noun_classes)
        for film in self.films.values():
            reg.register(film.name, "film-title")
        for f in self.facts:
            cls = ATTRIBUTE_CLASSES.get(f.attribute)
            if cls is not None:
                reg.register(f.value, cls)
        return reg

    def merged_by_title(self):
        """The same facts with every namesake film folded into one entity."""
        first = {name: ids[0] for name, ids in self.by_name.items()}
        return FactBase(MovieFact(f.film_name, first[f.film_name], f.attribute, f.value)
                        for f in self.facts)


def ingest_kb(text):
    """Parse ``Name|relation|Value`` lines; a title change starts a new film Id."""
    facts = []
    film_id = 0
    previous = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("|")
        if len(parts) != 3:
            raise IngestError(f"line {lineno}: expected Name|relation|Value, got {line!r}")
        name, relation, value = (p.strip() for p in parts)
        if not name or not value:
            raise IngestError(f"line {lineno}: empty film name or value")
        attribute = RELATION_ATTRIBUTES.get(relation)
        if attribute is None:
            raise IngestError(f"line {lineno}: unknown relation {relation!r}")
        if name != previous:
            film_id += 1
            previous = name
        facts.append(MovieFact(name, film_id, attribute, value))
    return FactBase(facts)


@dataclass(frozen=True)
class Rule:
    head: object        # QueryAtom
    body: tuple         # QueryAtom, ...

    def head_roles(self):
        return frozenset(r for r, _ in self.head.bindings)


def define_rule_from_cnl(sentence, store, frames=None, role_map=None, registry=None):
    """Translate ``If ... then ...`` into a rule over the bundled frames."""
    frames = default_frames() if frames is None else frames
    role_map = default_role_map() if role_map is None else role_map
    registry = EntityRegistry(noun_classes=default_noun_classes()) if registry is None else registry
    try:
        drs = parse_cnl(normalize(tokenize(sentence)))
    except KalmError as exc:
        raise RuleDefinitionError(f"cannot parse rule {sentence!r}: {exc}") from exc
    if drs.consequent_from is None:
        raise RuleDefinitionError(f"rule has no 'if ... then ...' form: {sentence!r}")
    parses = [p for p in parse_sentence(drs, store, frames)
              if disambiguate(p, drs, registry, role_map, frames)]
    body_parses = remove_subsumed([p for p in parses if p.lu_index < drs.consequent_from])
    head_parses = remove_subsumed([p for p in parses if p.lu_index > drs.consequent_from])
    if len(head_parses) != 1:
        raise RuleDefinitionError(
            f"expected one reading of the consequent, found {len(head_parses)}: {sentence!r}")
    groups = maximal_alternative_sets(body_parses)
    if not groups or any(len(g) != 1 for g in groups):
        raise RuleDefinitionError(f"ambiguous or empty antecedent: {sentence!r}")
    wiring = _Wiring(drs, [g[0] for g in groups if g[0].frame == "Movie"], frames)
    body = tuple(wiring.atom(g[0]) for g in groups)
    head = wiring.atom(head_parses[0])
    head_terms = head.terms()
    if not all(isinstance(t, Var) for t in head_terms) or len(set(head_terms)) != len(head_terms):
        raise RuleDefinitionError(f"rule head must bind distinct variables: {sentence!r}")
    body_vars = {t for a in body for t in a.terms()}
    missing = [t.name for t in head_terms if t not in body_vars]
    if missing:
        raise RuleDefinitionError(f"head variables {missing} do not occur in the body")
    return Rule(head, body)


def load_rules(text, store, **kwargs):
    return [define_rule_from_cnl(line.strip(), store, **kwargs) for line in _data_lines(text)]


class _Evaluator:
    def __init__(self, kb, rules):
        self.kb = kb
        self.rules = list(rules)
        self.fresh = count(1)

    def value(self, term, subst):
        if isinstance(term, Const):
            return term.value
        return subst.get(term.name)

    def ready(self, group, subst):
        return all(not a.is_distinct or all(self.value(t, subst) is not None for t in a.terms())
                   for a in group)

    def solve(self, goals, subst):
        if not goals:
            yield subst
            return
        for k, group in enumerate(goals):
            if self.ready(group, subst):
                break
        else:
            raise EvaluationError("a distinct constraint has an unbound side")
        rest = goals[:k] + goals[k + 1:]
        for atom in group:
            for s in self.match(atom, subst):
                yield from self.solve(rest, s)

    def match(self, atom, subst):
        if atom.is_distinct:
            a, b = (self.value(t, subst) for t in atom.terms())
            if str(a) != str(b):
                yield subst
        elif atom.relation == "movie":
            yield from self.match_movie(atom, subst)
        else:
            yield from self.unfold(atom, subst)

    def match_movie(self, atom, subst):
        name_term, id_term = atom.get("FilmNm"), atom.get("Id")
        roles = [(r, t) for r, t in atom.bindings if r not in ("FilmNm", "Id")]
        for role, _ in roles:
            if role not in MOVIE_ATTRIBUTES:
                raise EvaluationError(f"movie has no attribute {role!r}")
        bound_id = self.value(id_term, subst) if id_term is not None else None
        if bound_id is not None:
            candidates = {int(bound_id)} & set(self.kb.films)
        else:
            candidates = None
            for role, term in roles:
                v = self.value(term, subst)
                if v is not None:
                    ids = self.kb.by_value.get((role, str(v)), set())
                    candidates = ids if candidates is None else candidates & ids
            name = self.value(name_term, subst) if name_term is not None else None
            if name is not None:
                ids = set(self.kb.by_name.get(str(name), ()))
                candidates = ids if candidates is None else candidates & ids
            if candidates is None:
                candidates = set(self.kb.films)
        for fid in sorted(candidates):
            film = self.kb.films[fid]
            s = self.bind(subst, name_term, film.name)
            s = None if s is None else self.bind(s, id_term, fid)
            if s is None:
                continue
            options = []
            for role, term in roles:
                values = film.attributes.get(role)
                if not values:
                    break
                options.append([(term, v) for v in sorted(values)])
            else:
                for combo in product(*options):
                    t = s
                    for term, v in combo:
                        t = self.bind(t, term, v)
                        if t is None:
                            break
                    if t is not None:
                        yield t

    def bind(self, subst, term, value):
        if term is None:
            return subst
        current = self.value(term, subst)
        if current is not None:
            return subst if str(current) == str(value) else None
        out = dict(subst)
        out[term.name] = value
        return out

    def unfold(self, atom, subst):
        roles = frozenset(r for r, _ in atom.bindings)
        matching = [r for r in self.rules
                    if r.head.relation == atom.relation and r.head_roles() == roles]
        if not matching:
            raise EvaluationError(
                f"no rule defines {atom.relation} over roles {sorted(roles)}")
        for rule in matching:
            n = next(self.fresh)
            mapping = {}
            for role, term in rule.head.bindings:
                mapping[term] = atom.get(role)

            def rename(t):
                if isinstance(t, Var) and t not in mapping:
                    mapping[t] = Var(f"{t.name}#{n}")
                return mapping.get(t, t)

            body = [[type(a)(a.relation, tuple((r, rename(t)) for r, t in a.bindings))]
                    for a in rule.body]
            yield from self.solve(body, subst)


def evaluate(query, kb, rules=()):
    """The set of answer-variable bindings satisfying ``query``."""
    ev = _Evaluator(kb, rules)
    goals = [list(g.atoms) for g in query.groups]
    for atom in query.atoms():
        if atom.relation not in ("movie", "distinct") and not any(
                r.head.relation == atom.relation for r in ev.rules):
            raise EvaluationError(f"unknown relation {atom.relation!r}")
    answers = set()
    for s in ev.solve(goals, {}):
        v = ev.value(query.answer_var, s)
        if v is not None:
            answers.add(str(v))
    return answers
