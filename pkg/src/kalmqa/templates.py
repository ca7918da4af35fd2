"""Query templates: canonical variable names and masked constants."""
from dataclasses import dataclass
from itertools import permutations, product
from math import factorial, prod

from .drs import _var_name
from .errors import KalmError
from .ulrq import MASK, Const, render_atom, render_group

MAX_ORDERINGS = 40320


@dataclass(frozen=True)
class Template:
    canonical_text: str

    def __str__(self):
        return self.canonical_text


class _Namer:
    def __init__(self, mask=True):
        self.names = {}
        self.mask = mask

    def __call__(self, term):
        if isinstance(term, Const):
            return MASK if self.mask else str(term)
        if term not in self.names:
            self.names[term] = _var_name(len(self.names))
        return self.names[term]


def _render(ulrq, relational, distinct, mask):
    name = _Namer(mask)
    head = name(ulrq.answer_var)
    parts = [render_group(g, name) for g in relational]
    pairs = sorted(tuple(sorted(name(t) for t in a.terms())) for a in distinct)
    parts += [f"{a} \\= {b}" for a, b in pairs]
    return f"q({head}):-{','.join(parts)}."


def _orderings(groups):
    for order in permutations(groups):
        for inner in product(*(permutations(g.atoms) for g in order)):
            yield [type(g)(atoms) for g, atoms in zip(order, inner)]


def standardize_template(ulrq, mask=True):
    """Smallest rendering over all atom orders, variables named A, B, ... by first use.

    With ``mask=False`` constants are kept, which gives a canonical form for
    comparing queries up to variable renaming and atom order.
    """
    relational = [g for g in ulrq.groups if not all(a.is_distinct for a in g.atoms)]
    distinct = [a for g in ulrq.groups if all(a.is_distinct for a in g.atoms) for a in g.atoms]
    count = factorial(len(relational)) * prod(factorial(len(g.atoms)) for g in relational)
    if count <= MAX_ORDERINGS:
        best = min(_render(ulrq, order, distinct, mask) for order in _orderings(relational))
    else:
        # too many orders: sort by a rendering that ignores variable names
        def key(g):
            return render_group(g, lambda t: MASK if isinstance(t, Const) else "_")
        ordered = sorted((type(g)(tuple(sorted(g.atoms, key=lambda a: render_atom(
            a, lambda t: MASK if isinstance(t, Const) else "_")))) for g in relational), key=key)
        best = _render(ulrq, ordered, distinct, mask)
    return Template(best)


def group_by_template(questions, interpret):
    """Map template text (or ``ERROR:<kind>``) to its member questions, in input order.

    ``interpret`` turns a question into a query.
    """
    groups = {}
    for q in questions:
        try:
            key = standardize_template(interpret(q)).canonical_text
        except KalmError as exc:
            key = f"ERROR:{exc.kind}"
        groups.setdefault(key, []).append(q)
    return dict(sorted(groups.items()))
