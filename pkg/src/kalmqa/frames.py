"""Frame definitions, semantic classes and role-filler disambiguation.

Disambiguation is a class-membership check: each frame role requires a
semantic class, named entities carry the classes they were registered
with, and common nouns map to a class through a fixed table.
"""
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ConfigurationError, FrameLoadError, PrologSyntaxError
from .paraphrase import _data_lines, _read_data
from .prolog import Atom, Compound, PList, read_clauses

SUPPORTED_CONSTRAINTS = frozenset({"Integer", "Year"})
YEAR_RANGE = (1800, 2100)

# child -> parent; a filler fits a role when one class is an ancestor of the other
CLASS_PARENTS = {
    "person": "entity",
    "actor": "person",
    "director": "person",
    "writer": "person",
    "film-title": "entity",
    "year": "entity",
    "genre": "entity",
    "language": "entity",
    "food": "entity",
    "organization": "entity",
}

# role names accepted in annotations as spellings of a canonical role
ROLE_ALIASES = {("Movie", "Film"): "FilmNm"}


@dataclass(frozen=True)
class RoleDef:
    name: str
    synsets: tuple = ()
    constraints: tuple = ()


@dataclass(frozen=True)
class FrameDef:
    name: str
    roles: tuple

    def role(self, name):
        name = canonical_role(self.name, name)
        for r in self.roles:
            if r.name == name:
                return r
        return None

    @property
    def role_names(self):
        return [r.name for r in self.roles]


def canonical_role(frame, role):
    return ROLE_ALIASES.get((frame, role), role)


def _atom_name(term, what, line):
    if not isinstance(term, Atom):
        raise FrameLoadError(f"line {line}: expected {what}, got {term!r}")
    return term.name


def _atom_list(term, what, line):
    if not isinstance(term, PList):
        raise FrameLoadError(f"line {line}: expected a list of {what}")
    return tuple(_atom_name(t, what, line).strip() for t in term.items)


def load_frames(text):
    """Read ``fp(Name,[role(...),...]).`` facts."""
    frames = []
    seen = set()
    try:
        clauses = list(read_clauses(text))
    except PrologSyntaxError as exc:
        raise FrameLoadError(str(exc)) from exc
    for line, term in clauses:
        if not (isinstance(term, Compound) and term.name == "fp" and len(term.args) == 2):
            raise FrameLoadError(f"line {line}: expected fp/2, got {term!r}")
        name = _atom_name(term.args[0], "a frame name", line)
        if name in seen:
            raise FrameLoadError(f"line {line}: duplicate frame {name!r}")
        seen.add(name)
        if not isinstance(term.args[1], PList) or not term.args[1].items:
            raise FrameLoadError(f"line {line}: frame {name!r} needs a non-empty role list")
        roles = []
        for r in term.args[1].items:
            if not (isinstance(r, Compound) and r.name == "role" and len(r.args) == 3):
                raise FrameLoadError(f"line {line}: expected role/3 in frame {name!r}")
            rname = _atom_name(r.args[0], "a role name", line)
            if any(x.name == rname for x in roles):
                raise FrameLoadError(f"line {line}: duplicate role {rname!r} in frame {name!r}")
            constraints = _atom_list(r.args[2], "constraints", line)
            for c in constraints:
                if c not in SUPPORTED_CONSTRAINTS:
                    raise FrameLoadError(f"line {line}: unknown constraint {c!r} on {name}.{rname}")
            roles.append(RoleDef(rname, _atom_list(r.args[1], "synsets", line), constraints))
        frames.append(FrameDef(name, tuple(roles)))
    return frames


def _is_int(value):
    text = str(value).strip()
    return text.lstrip("-").isdigit()


def check_constraint(constraint, value):
    if constraint == "Integer":
        return _is_int(value)
    if constraint == "Year":
        return _is_int(value) and YEAR_RANGE[0] <= int(value) <= YEAR_RANGE[1]
    raise ConfigurationError(f"unknown constraint {constraint!r}")


def _ancestors(cls):
    out = []
    while cls is not None:
        out.append(cls)
        cls = CLASS_PARENTS.get(cls)
    return out


def compatible(filler_class, required_class):
    return (required_class in _ancestors(filler_class)
            or filler_class in _ancestors(required_class))


@dataclass
class EntityRegistry:
    classes: dict = field(default_factory=dict)       # constant -> set of classes
    noun_classes: dict = field(default_factory=dict)  # common-noun lexeme -> class

    def register(self, value, cls):
        if cls == "year" and not check_constraint("Year", value):
            return
        self.classes.setdefault(value, set()).add(cls)
        if cls == "film-title" and check_constraint("Year", value):
            # a numeric title is also readable as a year
            self.classes[value].add("year")

    def classes_of(self, value):
        return self.classes.get(value, set())

    def known(self, value):
        return value in self.classes

    def noun_class(self, lexeme):
        return self.noun_classes.get(lexeme)


def load_role_classes(text, frames=None):
    role_map = {}
    for line in _data_lines(text):
        key, sep, cls = line.partition("=")
        frame, dot, role = key.partition(".")
        if not sep or not dot:
            raise ConfigurationError(f"bad role-class line {line!r}")
        role_map[(frame.strip(), role.strip())] = cls.strip()
    if frames is not None:
        missing = [(f.name, r.name) for f in frames for r in f.roles
                   if (f.name, r.name) not in role_map]
        if missing:
            raise ConfigurationError(f"no semantic class for roles {missing}")
    return role_map


def load_noun_classes(text):
    out = {}
    for line in _data_lines(text):
        noun, _, cls = line.partition("=")
        out[noun.strip()] = cls.strip()
    return out


@lru_cache(maxsize=None)
def _default_frames():
    return tuple(load_frames(_read_data("frames.pl")))


def default_frames():
    return list(_default_frames())


def default_role_map():
    return load_role_classes(_read_data("role_classes.txt"), default_frames())


def default_noun_classes():
    return load_noun_classes(_read_data("noun_classes.txt"))


def frame_index(frames):
    return {f.name: f for f in frames}


def filler_fits(token, frame, role, registry, role_map, frames=None):
    """Class and type-constraint check for one filler token."""
    if token.pos == "wh":
        return True
    role = canonical_role(frame, role)
    if frames is not None:
        fdef = frame_index(frames).get(frame)
        rdef = fdef.role(role) if fdef else None
        if rdef is not None and token.pos == "proper":
            if not all(check_constraint(c, token.lemma) for c in rdef.constraints):
                return False
    required = role_map.get((frame, role))
    if required is None:
        return False
    if token.pos == "proper":
        if not registry.known(token.lemma):
            # unknown names are left to evaluation, which finds no bindings
            return True
        return any(compatible(c, required) for c in registry.classes_of(token.lemma))
    cls = registry.noun_class(token.lemma.lower())
    return cls is not None and compatible(cls, required)


def disambiguate(parse, drs, registry, role_map, frames=None):
    """True iff every filler of ``parse`` fits its role; False prunes the parse."""
    frames = default_frames() if frames is None else frames
    return all(
        filler_fits(drs.token(f.word), parse.frame, f.role, registry, role_map, frames)
        for f in parse.fillers
    )
