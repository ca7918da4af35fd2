"""Structure learning: grammatical patterns and lvps from annotated sentences.

A DRS is embedded in a labeled graph whose nodes are its terms. The
shortest path from the lexical-unit term to a role-filler term, read
through the utility-step catalog, becomes the role's grammatical pattern.
"""
from collections import Counter, deque
from dataclasses import dataclass, field

from .drs import has_repeated_variables, parse_cnl, render_drs
from .errors import (ExtractionFailure, FrameLoadError, PrologSyntaxError,
                     TrainingRestrictionError, UnreachableFiller,
                     UnsupportedConstruction)
from .frames import canonical_role, frame_index
from .paraphrase import tokenize
from .prolog import Atom, Compound, PList, quote_atom, read_clauses


@dataclass(frozen=True)
class UtilityStep:
    name: str
    source_kind: str
    source_pos: int
    target_kind: str
    target_pos: int

    @property
    def key(self):
        return (self.source_kind, self.source_pos, self.target_kind, self.target_pos)


CATALOG = (
    UtilityStep("verb->subject", "predicate", 3, "object", 1),
    UtilityStep("verb->object", "predicate", 4, "object", 1),
    UtilityStep("verb->pp", "predicate", 1, "modifier_pp", 1),
    UtilityStep("pp->dep", "modifier_pp", 3, "object", 1),
    UtilityStep("subject->verb", "object", 1, "predicate", 3),
    UtilityStep("object->verb", "object", 1, "predicate", 4),
    UtilityStep("pp->verb", "modifier_pp", 1, "predicate", 1),
    UtilityStep("dep->pp", "object", 1, "modifier_pp", 3),
    UtilityStep("lobject->rel", "object", 1, "relation", 1),
    UtilityStep("rel->robject", "relation", 3, "object", 1),
    UtilityStep("robject->rel", "object", 1, "relation", 3),
    UtilityStep("rel->lobject", "relation", 1, "object", 1),
    # a verb whose object noun carries an of-relation reaches the relation directly
    UtilityStep("verb->rel", "predicate", 4, "relation", 1),
    UtilityStep("rel->verb", "relation", 1, "predicate", 4),
    UtilityStep("object->query", "object", 1, "query", 1),
    UtilityStep("query->object", "query", 1, "object", 1),
)
STEPS_BY_NAME = {s.name: s for s in CATALOG}
STEPS_BY_KEY = {s.key: s for s in CATALOG}
assert len(STEPS_BY_NAME) == len(STEPS_BY_KEY) == len(CATALOG)


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    label: int          # argument position of the shared variable in the source term
    target_pos: int     # its position in the target term


@dataclass
class DrsGraph:
    nodes: list
    edges: list = field(default_factory=list)

    def __post_init__(self):
        self._out = {i: [] for i in range(len(self.nodes))}
        for e in self.edges:
            self._out[e.source].append(e)
        for out in self._out.values():
            out.sort(key=lambda e: (e.label, e.target))

    def out_edges(self, node):
        return self._out[node]

    def node_of(self, term):
        for i, t in enumerate(self.nodes):
            if t == term:
                return i
        raise KeyError(term)


def embed(drs):
    """Labeled graph over the DRS terms; refuses sentences with repeated variables."""
    if has_repeated_variables(drs):
        for term in drs.terms:
            values = list(term.var_args.values())
            if len(values) != len(set(values)):
                one = render_drs(type(drs)((term,)))
                raise TrainingRestrictionError(
                    f"term {one} uses a variable twice; such sentences cannot be used for training")
    nodes = list(drs.terms)
    edges = []
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if i == j:
                continue
            shared = set(a.var_args.values()) & set(b.var_args.values())
            if len(shared) != 1:
                continue
            var = shared.pop()
            src = next(p for p, v in a.var_args.items() if v == var)
            tgt = next(p for p, v in b.var_args.items() if v == var)
            edges.append(Edge(i, j, src, tgt))
    return DrsGraph(nodes, edges)


def shortest_path(graph, start, goal):
    """Minimum-length path; among those, the smallest sequence of (label, target) pairs."""
    n = len(graph.nodes)
    if not (0 <= start < n and 0 <= goal < n):
        raise IndexError(f"node out of range: {start}, {goal}")
    if start == goal:
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for e in graph.out_edges(node):
            if e.target in parent:
                continue
            parent[e.target] = e
            if e.target == goal:
                path = []
                while e is not None:
                    path.append(e)
                    e = parent[e.source]
                return path[::-1]
            queue.append(e.target)
    raise UnreachableFiller(
        f"no path from {graph.nodes[start].kind} at word {graph.nodes[start].position[1]}"
        f" to {graph.nodes[goal].kind} at word {graph.nodes[goal].position[1]}")


@dataclass(frozen=True)
class GrammaticalPattern:
    steps: tuple

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a grammatical pattern needs at least one step")
        for name in self.steps:
            if name not in STEPS_BY_NAME:
                raise UnsupportedConstruction(f"unknown utility step {name!r}")
        for a, b in zip(self.steps, self.steps[1:]):
            if STEPS_BY_NAME[a].target_kind != STEPS_BY_NAME[b].source_kind:
                raise UnsupportedConstruction(f"steps {a!r} and {b!r} do not compose")

    @property
    def text(self):
        return ",".join(self.steps)

    def __str__(self):
        return self.text


def parse_pattern(text):
    return GrammaticalPattern(tuple(s.strip() for s in text.split(",")))


def path_to_pattern(path, graph):
    names = []
    for e in path:
        src, tgt = graph.nodes[e.source], graph.nodes[e.target]
        step = STEPS_BY_KEY.get((src.kind, e.label, tgt.kind, e.target_pos))
        if step is None:
            raise UnsupportedConstruction(
                f"no utility step from {src.kind} argument {e.label}"
                f" to {tgt.kind} argument {e.target_pos}")
        names.append(step.name)
    return GrammaticalPattern(tuple(names))


def extract(pattern, drs, lu_term):
    """All terms reachable from ``lu_term`` by following the pattern's steps."""
    frontier = [lu_term]
    for name in pattern.steps:
        step = STEPS_BY_NAME[name]
        reached = []
        for cur in frontier:
            if cur.kind != step.source_kind:
                continue
            value = cur.var_args.get(step.source_pos)
            if value is None:
                continue
            for t in drs.terms:
                if (t is not cur and t.kind == step.target_kind
                        and t.var_args.get(step.target_pos) == value and t not in reached):
                    reached.append(t)
        frontier = reached
        if not frontier:
            break
    return frontier


def apply_pattern(pattern, drs, lu_term):
    found = extract(pattern, drs, lu_term)
    if not found:
        raise ExtractionFailure(f"pattern {pattern.text!r} does not apply")
    return found[0]


@dataclass(frozen=True)
class Annotation:
    sentence: str
    frame: str
    lu_index: int
    role_fillers: tuple     # ((role, word index), ...)


def _annotation_from_term(term, line):
    if not (isinstance(term, Compound) and term.name == "annotation" and len(term.args) == 4):
        raise PrologSyntaxError(f"line {line}: expected annotation/4")
    sentence, frame, lu, fillers = term.args
    if not (isinstance(sentence, Atom) and isinstance(frame, Atom) and isinstance(lu, int)
            and isinstance(fillers, PList)):
        raise PrologSyntaxError(f"line {line}: malformed annotation")
    pairs = []
    for item in fillers.items:
        if not (isinstance(item, PList) and len(item.items) == 2
                and isinstance(item.items[0], Atom) and isinstance(item.items[1], int)):
            raise PrologSyntaxError(f"line {line}: role fillers must be ['Role',Index] pairs")
        pairs.append((item.items[0].name, item.items[1]))
    return Annotation(sentence.name, frame.name, lu, tuple(pairs))


def load_annotations(text, frames=None):
    out = []
    index = frame_index(frames) if frames is not None else None
    for line, term in read_clauses(text):
        ann = _annotation_from_term(term, line)
        if index is not None:
            fdef = index.get(ann.frame)
            if fdef is None:
                raise FrameLoadError(f"line {line}: unknown frame {ann.frame!r}")
            for role, _ in ann.role_fillers:
                if fdef.role(role) is None:
                    raise FrameLoadError(f"line {line}: frame {ann.frame!r} has no role {role!r}")
        out.append(ann)
    return out


@dataclass(frozen=True)
class PatternSpec:
    role: str
    pattern: GrammaticalPattern
    required: bool = True


@dataclass(frozen=True)
class Lvp:
    lexeme: str
    pos: str
    frame: str
    patterns: tuple

    def __post_init__(self):
        if self.pos not in ("v", "n"):
            raise ValueError(f"lvp part of speech must be v or n, not {self.pos!r}")
        if not self.patterns:
            raise ValueError("an lvp needs at least one pattern")


def format_lvp(lvp):
    pats = ",".join(
        f"pattern({quote_atom(p.role)},{quote_atom(p.pattern.text)},"
        f"{'required' if p.required else 'optional'})"
        for p in lvp.patterns)
    return f"lvp({quote_atom(lvp.lexeme)},{lvp.pos},{quote_atom(lvp.frame)},[{pats}])"


def _lvp_from_term(term, line):
    if not (isinstance(term, Compound) and term.name == "lvp" and len(term.args) == 4):
        raise PrologSyntaxError(f"line {line}: expected lvp/4")
    lexeme, pos, frame, pats = term.args
    if not all(isinstance(x, Atom) for x in (lexeme, pos, frame)) or not isinstance(pats, PList):
        raise PrologSyntaxError(f"line {line}: malformed lvp")
    specs = []
    for p in pats.items:
        if not (isinstance(p, Compound) and p.name == "pattern" and len(p.args) == 3
                and all(isinstance(a, Atom) for a in p.args)):
            raise PrologSyntaxError(f"line {line}: malformed pattern in lvp")
        specs.append(PatternSpec(p.args[0].name, parse_pattern(p.args[1].name),
                                 p.args[2].name == "required"))
    return Lvp(lexeme.name, pos.name, frame.name, tuple(specs))


@dataclass
class LvpStore:
    lvps: list = field(default_factory=list)

    def __post_init__(self):
        existing, self.lvps = self.lvps, []
        self._seen = set()
        for lvp in existing:
            self.add(lvp)

    def add(self, lvp):
        """Store ``lvp`` unless an identical one is present; True if it was new."""
        if lvp in self._seen:
            return False
        self._seen.add(lvp)
        self.lvps.append(lvp)
        return True

    def lookup(self, lexeme, pos):
        return [l for l in self.lvps if l.lexeme == lexeme and l.pos == pos]

    def __iter__(self):
        return iter(self.lvps)

    def __len__(self):
        return len(self.lvps)

    def dumps(self):
        return "".join(format_lvp(l) + ".\n" for l in self.lvps)

    @classmethod
    def loads(cls, text):
        return cls([_lvp_from_term(term, line) for line, term in read_clauses(text)])


def learn_lvp(annotation, store=None):
    """Learn one lvp; added to ``store`` (deduplicated) when given."""
    tokens = tokenize(annotation.sentence)
    for idx in [annotation.lu_index] + [i for _, i in annotation.role_fillers]:
        if not 1 <= idx <= len(tokens):
            raise ValueError(f"word index {idx} outside {annotation.sentence!r}")
    drs = parse_cnl(tokens)
    graph = embed(drs)
    lu_term = drs.term_at(annotation.lu_index, ("predicate", "object"))
    if lu_term is None:
        raise UnreachableFiller(f"no term for the lexical unit at word {annotation.lu_index}")
    lu_node = graph.node_of(lu_term)
    specs = []
    for role, idx in annotation.role_fillers:
        filler = drs.term_at(idx, ("object", "predicate"))
        if filler is None:
            raise UnreachableFiller(f"no term for the {role} filler at word {idx}")
        path = shortest_path(graph, lu_node, graph.node_of(filler))
        if not path:
            raise UnreachableFiller(f"the {role} filler is the lexical unit itself")
        specs.append(PatternSpec(role, path_to_pattern(path, graph)))
    pos = "v" if lu_term.kind == "predicate" else "n"
    lvp = Lvp(lu_term.lexeme, pos, annotation.frame, tuple(specs))
    if store is not None:
        store.add(lvp)
    return lvp


def _display_role(frame, role):
    role = canonical_role(frame, role)
    if role == "FilmNm":
        return "Film"
    return role.rstrip("0123456789")


@dataclass
class LvpStats:
    rows: list          # (frame, role, role, count), sorted
    triples: int

    @property
    def bridge_rules(self):
        return 2 * self.triples


def lvp_stats(store, frames=None):
    """Count lvps per frame and role pair; each (pair, lvp) is one triple."""
    order = {}
    if frames is not None:
        for f in frames:
            order.update({(f.name, r.name): k for k, r in enumerate(f.roles)})
    counts = Counter()
    for lvp in store:
        roles = sorted({canonical_role(lvp.frame, p.role) for p in lvp.patterns},
                       key=lambda r: (order.get((lvp.frame, r), len(order)), r))
        for i, a in enumerate(roles):
            for b in roles[i + 1:]:
                counts[(lvp.frame, _display_role(lvp.frame, a), _display_role(lvp.frame, b))] += 1
    rows = sorted((f, a, b, n) for (f, a, b), n in counts.items())
    return LvpStats(rows, sum(n for *_, n in rows))
