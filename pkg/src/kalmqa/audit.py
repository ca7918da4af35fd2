"""Label auditing: recompute answers and explain disagreements.

Each cause tag corresponds to one relaxation of the identity assumptions
the engine makes. A relaxation that reproduces the expected (labeled)
answer set explains the label.
"""
from dataclasses import dataclass
from typing import Optional

from .engine import evaluate
from .errors import KalmError
from .frames import check_constraint
from .ulrq import AlternativeGroup, Const, QueryAtom, Ulrq, Var

PERSON_ROLES = ("Actor", "Director", "Writer")


@dataclass
class AuditRecord:
    question: str
    expected: frozenset
    computed: Optional[frozenset]
    verdict: str                    # match | mislabeled | error
    cause: Optional[str] = None


def parse_label_line(line):
    """``question<TAB>ans1|ans2|...``; an empty answer field is the empty set."""
    question, sep, answers = line.rstrip("\n").partition("\t")
    if not sep or not question.strip():
        raise ValueError(f"malformed label line {line!r}")
    return question, frozenset(a for a in answers.split("|") if a)


def _map_atoms(query, fn):
    """Apply ``fn`` (atom -> list of atom variants) and yield every single-atom rewrite."""
    for gi, group in enumerate(query.groups):
        for ai, atom in enumerate(group.atoms):
            for new in fn(atom):
                atoms = group.atoms[:ai] + (new,) + group.atoms[ai + 1:]
                groups = query.groups[:gi] + (AlternativeGroup(atoms),) + query.groups[gi + 1:]
                yield Ulrq(groups, query.answer_var)


def _year_title_variants(atom):
    if atom.relation != "movie":
        return
    title = atom.get("FilmNm")
    if isinstance(title, Const) and check_constraint("Year", title.value):
        rest = [(r, t) for r, t in atom.bindings if r != "FilmNm"]
        yield QueryAtom("movie", (("FilmNm", Var("_Title")),) + tuple(rest)
                        + (("Release Year", title),))


def _role_swaps(atom):
    if atom.is_distinct:
        return
    for role, term in atom.bindings:
        if role in PERSON_ROLES and isinstance(term, Const):
            for other in PERSON_ROLES:
                if other != role and atom.get(other) is None:
                    yield QueryAtom(atom.relation, tuple(
                        (other if r == role else r, t) for r, t in atom.bindings))


def diagnose(query, expected, computed, kb, rules):
    """Cause tag for a mislabeled question."""
    try:
        if evaluate(query, kb.merged_by_title(), rules) == expected:
            return "namesake-title"
    except KalmError:
        pass
    for variant in _map_atoms(query, _year_title_variants):
        try:
            if evaluate(variant, kb, rules) == expected:
                return "title-vs-year"
        except KalmError:
            continue
    for variant in _map_atoms(query, _role_swaps):
        try:
            if evaluate(variant, kb, rules) == expected:
                return "dual-role"
        except KalmError:
            continue
    persons = {str(t.value) for a in query.atoms() for r, t in a.bindings
               if r in PERSON_ROLES and isinstance(t, Const)}
    if persons and computed - persons == expected:
        return "dual-role"
    return "other"


def audit_line(question, expected, interpret, kb, rules):
    try:
        query = interpret(question)
        computed = frozenset(evaluate(query, kb, rules))
    except KalmError as exc:
        return AuditRecord(question, expected, None, "error", exc.kind)
    if computed == expected:
        return AuditRecord(question, expected, computed, "match")
    return AuditRecord(question, expected, computed, "mislabeled",
                       diagnose(query, expected, computed, kb, rules))


def format_record(rec):
    computed = "ERROR" if rec.computed is None else "|".join(sorted(rec.computed))
    return "\t".join([rec.question, rec.verdict, rec.cause or "-",
                      "|".join(sorted(rec.expected)), computed])
