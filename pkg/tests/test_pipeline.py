import pytest

from kalmqa.errors import ConfigurationError, FrameLoadError, MalformedQuestion
from kalmqa.pipeline import answer, interpret, load_resources

KB = "Alpha|directed_by|Ann\nAlpha|starred_actors|Bob\nBeta|directed_by|Ann\n"


def test_answer_with_bundled_data():
    res = load_resources(KB)
    assert answer("Who directed [Alpha]?", res) == {"Ann"}
    assert answer("Which films are directed by Ann?", res) == {"Alpha", "Beta"}


def test_answer_against_another_fact_base():
    res = load_resources(KB)
    other = load_resources("Alpha|directed_by|Zoe\n").kb
    assert answer("Who directed [Alpha]?", res, kb=other) == {"Zoe"}


def test_interpretation_exposes_intermediate_steps():
    res = load_resources(KB)
    i = interpret("Who directed [Alpha]?", res)
    assert [t.surface for t in i.tokens] == ["Who", "directs", "Alpha", "?"]
    assert len(i.parses) == 1 and i.query.answer_var.name == "W1"


def test_malformed_question():
    with pytest.raises(MalformedQuestion):
        answer("Who directed [Alpha?", load_resources(KB))


def test_custom_resources_are_validated():
    with pytest.raises(FrameLoadError):
        load_resources(KB, frames_text="fp('Movie',[]).")
    with pytest.raises(ConfigurationError):
        load_resources(KB, role_classes_text="Movie.FilmNm=film-title\n")
