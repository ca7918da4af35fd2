"""The committed fixtures and bundled data are reproducible from their sources."""
from build_fixtures import build
from conftest import FIXTURES
from kalmqa.learner import LvpStore, learn_lvp, load_annotations
from kalmqa.frames import default_frames
from kalmqa.paraphrase import _read_data


def test_fixture_files_match_the_generator():
    for name, content in build().items():
        assert (FIXTURES / name).read_text(encoding="utf-8") == content, name


def test_bundled_lvps_are_learned_from_bundled_annotations():
    store = LvpStore()
    for ann in load_annotations(_read_data("annotations.pl"), default_frames()):
        learn_lvp(ann, store)
    assert store.dumps() == _read_data("lvps.pl")


def test_fixture_kb_shape(kb_text):
    lines = [l for l in kb_text.splitlines() if l.strip()]
    assert all(len(l.split("|")) == 3 for l in lines)
