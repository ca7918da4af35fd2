import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kalmqa.drs import parse_cnl
from kalmqa.errors import GroupingAmbiguity, NoInterpretation, NotAQuestion, PrologSyntaxError
from kalmqa.frameparser import CandidateParse, Filler, parse_sentence
from kalmqa.learner import parse_pattern
from kalmqa.paraphrase import paraphrase
from kalmqa.ulrq import (AlternativeGroup, Const, QueryAtom, Ulrq, Var, alternatives, build_ulrq,
                         maximal_alternative_sets, parse_query, remove_subsumed, render_query,
                         subsumes)

SUBJ = parse_pattern("verb->subject")
OBJ = parse_pattern("verb->object")
PP = parse_pattern("verb->pp,pp->dep")


def cp(frame, lu, *fillers):
    return CandidateParse(frame, lu, tuple(Filler(r, w, p) for r, w, p in fillers))


def query_of(question, res):
    drs = parse_cnl(paraphrase(question))
    return render_query(build_ulrq(parse_sentence(drs, res.store), drs, res.registry,
                                   res.role_map, res.frames))


def test_multi_hop_query(resources):
    assert query_of("Who wrote a film that shares a director with Titanic?", resources) == (
        "q(W1):-movie('FilmNm'=W4,'Id'=I4,'Writer'=W1),"
        "movie('FilmNm'=W4,'Id'=I4,'Director'=W8),"
        "movie('FilmNm'='Titanic','Id'=I10,'Director'=W8),I4 \\= I10.")


def test_disjunctive_query(resources):
    assert query_of("Who is an actor of Pascal Laugier?", resources) == (
        "q(W1):-(coop('Actor'=W1,'Director'='Pascal Laugier');"
        "coop('Actor'=W1,'Writer'='Pascal Laugier')).")


def test_single_hop(resources):
    assert query_of("Who directed Titanic?", resources) == (
        "q(W1):-movie('FilmNm'='Titanic','Id'=I3,'Director'=W1).")


def test_copula_answer_follows_the_complement(resources):
    q = query_of("What are the films that are directed by Jane Campion?", resources)
    assert q.startswith("q(W4):-")


def test_declarative_is_not_a_question(resources):
    with pytest.raises(NotAQuestion):
        query_of("a director directs a film", resources)


def test_everything_pruned(resources):
    with pytest.raises(NoInterpretation):
        query_of("Who directed Joan Fontaine?", resources)


def test_subsumption_and_alternatives():
    small = cp("Movie", 2, ("Director", 1, SUBJ))
    big = cp("Movie", 2, ("Director", 1, SUBJ), ("FilmNm", 3, OBJ))
    other = cp("Coop", 2, ("Director", 1, SUBJ), ("Writer", 3, OBJ))
    assert subsumes(small, big) and not subsumes(big, small)
    assert not alternatives(small, big)
    assert alternatives(big, other) and alternatives(small, other)
    assert remove_subsumed([big, small, other]) == [other, big]


def test_overlapping_alternative_sets_are_ambiguous():
    a = cp("Movie", 2, ("Actor", 1, SUBJ))
    c = cp("Movie", 2, ("FilmNm", 5, OBJ))
    b = cp("Coop", 2, ("Actor", 1, SUBJ), ("Writer", 5, OBJ))
    assert maximal_alternative_sets([a, c]) == [[a], [c]]
    with pytest.raises(GroupingAmbiguity):
        maximal_alternative_sets([a, b, c])


def test_atom_and_group_validation():
    with pytest.raises(ValueError):
        QueryAtom("movie", (("Actor", Var("X")), ("Actor", Var("Y"))))
    with pytest.raises(ValueError):
        AlternativeGroup(())
    d = QueryAtom("distinct", (("Item1", Var("A")), ("Item2", Var("B"))))
    assert d.is_distinct and d.negated_equality == (Var("A"), Var("B"))


def test_render_parse_roundtrip():
    text = ("q(X):-(coop('Actor'=X,'Director'='Pascal Laugier');"
            "coop('Actor'=X,'Writer'='Pascal Laugier')),movie('FilmNm'=F,'Id'=I,"
            "'Release Year'=1997,'Actor'=X),I \\= J.")
    assert render_query(parse_query(text)) == text
    q = parse_query(text)
    assert q.groups[1].atoms[0].get("Release Year") == Const(1997)


def test_parse_query_accepts_distinct_atom():
    a = parse_query("q(X):-movie('FilmNm'=X,'Id'=I),distinct('Item1'=I,'Item2'=J).")
    b = parse_query("q(X):-movie('FilmNm'=X,'Id'=I),I \\= J.")
    assert a == b


@pytest.mark.parametrize("bad", ["movie('Actor'=X).", "q(a):-movie('Actor'=X).",
                                 "q(X):-movie(X).", "q(X):-foo."])
def test_parse_query_errors(bad):
    with pytest.raises(PrologSyntaxError):
        parse_query(bad)


_patterns = st.sampled_from([SUBJ, OBJ, PP])
_fillers = st.lists(st.tuples(st.sampled_from(["Actor", "Director", "FilmNm", "Writer"]),
                              st.integers(1, 4), _patterns), min_size=1, max_size=3,
                    unique_by=lambda f: f[0])
_parses = st.builds(lambda fr, lu, fs: cp(fr, lu, *fs),
                    st.sampled_from(["Movie", "Coop"]), st.integers(1, 2), _fillers)


@given(_parses, _parses, _parses)
def test_subsumption_is_a_preorder(f, g, h):
    assert subsumes(f, f)
    if subsumes(f, g) and subsumes(g, h):
        assert subsumes(f, h)


@given(_parses, _parses)
def test_alternatives_symmetric_and_irreflexive(f, g):
    assert not alternatives(f, f)
    assert alternatives(f, g) == alternatives(g, f)


@settings(max_examples=200)
@given(st.lists(_parses, max_size=6), st.randoms(use_true_random=False))
def test_remove_subsumed_idempotent_and_order_free(parses, rng):
    kept = remove_subsumed(parses)
    assert remove_subsumed(kept) == kept
    shuffled = list(parses)
    rng.shuffle(shuffled)
    assert remove_subsumed(shuffled) == kept
    for p in parses:
        assert any(subsumes(p, k) for k in kept)


@given(st.lists(_parses, max_size=6))
def test_alternative_sets_partition_when_they_succeed(parses):
    parses = remove_subsumed(parses)
    try:
        sets = maximal_alternative_sets(parses)
    except GroupingAmbiguity:
        return
    flat = [p for s in sets for p in s]
    assert sorted(flat, key=CandidateParse.sort_key) == sorted(parses, key=CandidateParse.sort_key)
    for s in sets:
        for i, f in enumerate(s):
            for g in s[i + 1:]:
                assert alternatives(f, g)


def test_ulrq_atoms():
    a = QueryAtom("movie", (("Actor", Var("X")),))
    q = Ulrq((AlternativeGroup((a,)),), Var("X"))
    assert q.atoms() == [a]
