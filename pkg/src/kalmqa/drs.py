"""Discourse representation structures and a parser for the question grammar.

Terms follow the notation of the APE parser::

    object(A,director,countable,na,eq,1)-1/2
    predicate(C,direct,A,B)-1/3
    modifier_pp(C,in,B)-1/4

Variables are plain integers inside a :class:`Drs`; rendering renames them
to capital letters in order of first appearance.
"""
from dataclasses import dataclass, field
from typing import ClassVar, Optional

from .errors import UnparseableSentence
from .prolog import quote_atom

WH_WORDS = frozenset({"who", "what", "which", "whom"})
DEFINITE = "the"


@dataclass(frozen=True)
class Object:
    ref: int
    lexeme: str
    position: tuple
    cls: str = "countable"
    unit: str = "na"
    op: str = "eq"
    count: int = 1
    kind: ClassVar[str] = "object"

    @property
    def args(self):
        return (self.ref, self.lexeme, self.cls, self.unit, self.op, self.count)

    @property
    def var_args(self):
        return {1: self.ref}


@dataclass(frozen=True)
class Predicate:
    ref: int
    lexeme: str
    subject: int
    object: Optional[int]
    position: tuple
    kind: ClassVar[str] = "predicate"

    @property
    def args(self):
        base = (self.ref, self.lexeme, self.subject)
        return base if self.object is None else base + (self.object,)

    @property
    def var_args(self):
        out = {1: self.ref, 3: self.subject}
        if self.object is not None:
            out[4] = self.object
        return out


@dataclass(frozen=True)
class ModifierPp:
    pred: int
    preposition: str
    dependent: int
    position: tuple
    kind: ClassVar[str] = "modifier_pp"

    @property
    def args(self):
        return (self.pred, self.preposition, self.dependent)

    @property
    def var_args(self):
        return {1: self.pred, 3: self.dependent}


@dataclass(frozen=True)
class Relation:
    left: int
    relator: str
    right: int
    position: tuple
    kind: ClassVar[str] = "relation"

    @property
    def args(self):
        return (self.left, self.relator, self.right)

    @property
    def var_args(self):
        return {1: self.left, 3: self.right}


@dataclass(frozen=True)
class Query:
    ref: int
    wh_word: str
    position: tuple
    kind: ClassVar[str] = "query"

    @property
    def args(self):
        return (self.ref, self.wh_word)

    @property
    def var_args(self):
        return {1: self.ref}



@dataclass(frozen=True)
class Drs:
    terms: tuple
    tokens: tuple = ()
    # word index of "then" in a conditional; terms triggered after it form the consequent
    consequent_from: Optional[int] = None

    def token(self, word_index):
        return self.tokens[word_index - 1]

    def object_for(self, ref):
        for t in self.terms:
            if isinstance(t, Object) and t.ref == ref:
                return t
        return None

    def term_at(self, word_index, kinds=("predicate", "object")):
        """The term anchored at ``word_index``, preferring kinds in the given order."""
        for kind in kinds:
            for t in self.terms:
                if t.kind == kind and t.position[1] == word_index:
                    return t
        return None

    def query_refs(self):
        return [t.ref for t in self.terms if isinstance(t, Query)]


def has_repeated_variables(drs):
    """True iff a single term uses one variable in two argument positions."""
    for term in drs.terms:
        values = list(term.var_args.values())
        if len(values) != len(set(values)):
            return True
    return False


def render_drs(drs):
    names = {}
    for term in drs.terms:
        for pos in sorted(term.var_args):
            var = term.var_args[pos]
            if var not in names:
                names[var] = _var_name(len(names))
    lines = []
    for term in drs.terms:
        var_positions = set(term.var_args)
        rendered = []
        for pos, value in enumerate(term.args, 1):
            rendered.append(names[value] if pos in var_positions else _constant(value))
        s, w = term.position
        lines.append(f"{term.kind}({','.join(rendered)})-{s}/{w}")
    return "\n".join(lines)


def _constant(value):
    return str(value) if isinstance(value, int) else quote_atom(value)


def _var_name(i):
    letter = chr(ord("A") + i % 26)
    return letter if i < 26 else f"{letter}{i // 26}"


@dataclass
class _Referent:
    ref: int
    lexeme: str


@dataclass
class _Parser:
    tokens: list
    sentence: int = 1
    i: int = 0
    next_var: int = 0
    objects: list = field(default_factory=list)
    predicates: list = field(default_factory=list)
    pps: list = field(default_factory=list)
    relations: list = field(default_factory=list)
    queries: list = field(default_factory=list)
    # discourse referents introduced by common-noun phrases, oldest first
    referents: list = field(default_factory=list)
    propers: dict = field(default_factory=dict)
    consequent_from: Optional[int] = None

    # token access -------------------------------------------------------
    def peek(self, k=0):
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else None

    def at(self, *, pos=None, lemma=None, k=0):
        tok = self.peek(k)
        if tok is None:
            return False
        if pos is not None and tok.pos not in (pos if isinstance(pos, tuple) else (pos,)):
            return False
        if lemma is not None and tok.lemma.lower() not in (lemma if isinstance(lemma, tuple) else (lemma,)):
            return False
        return True

    def advance(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, expected):
        tok = self.peek()
        if tok is None:
            raise UnparseableSentence(f"unexpected end of sentence, expected {expected}")
        raise UnparseableSentence(
            f"unexpected token {tok.surface!r} at word {tok.index}, expected {expected}", tok)

    def fresh(self):
        self.next_var += 1
        return self.next_var

    def pos_of(self, tok):
        return (self.sentence, tok.index)

    # grammar ------------------------------------------------------------
    def parse(self):
        if self.at(lemma="if"):
            self.advance()
            self.clause()
            while self.at(lemma="and"):
                self.advance()
                self.clause()
            if not self.at(lemma="then"):
                self.fail("'then'")
            self.consequent_from = self.advance().index
            self.clause()
        else:
            self.clause()
        while self.at(pos="punct"):
            self.advance()
        if self.peek() is not None:
            self.fail("end of sentence")

    def clause(self):
        subject = self.noun_phrase(subject=True)
        self.verb_phrase(subject)

    def starts_np(self):
        return self.at(pos=("det", "proper", "noun-sg", "noun-pl")) or (
            self.at(pos="wh") and self.at(pos=("noun-sg", "noun-pl", "adj"), k=1))

    def noun_phrase(self, subject=False):
        tok = self.peek()
        if tok is None:
            self.fail("a noun phrase")
        if tok.pos == "wh":
            self.advance()
            if self.at(pos=("noun-sg", "noun-pl", "adj")):
                ref = self.common_noun(determiner=tok.lemma.lower())
                self.queries.append(Query(ref, tok.lemma.lower(), self.pos_of(tok)))
                return self.modifiers(ref)
            if not subject:
                self.fail("a noun phrase")
            ref = self.fresh()
            self.objects.append(Object(ref, tok.lemma.lower(), self.pos_of(tok)))
            self.queries.append(Query(ref, tok.lemma.lower(), self.pos_of(tok)))
            return ref
        if tok.pos == "proper":
            self.advance()
            ref = self.propers.get(tok.surface)
            if ref is None:
                ref = self.fresh()
                self.propers[tok.surface] = ref
                self.objects.append(Object(ref, tok.surface, self.pos_of(tok)))
            return self.modifiers(ref)
        if tok.pos == "det":
            self.advance()
            ref = self.common_noun(determiner=tok.lemma.lower())
            return self.modifiers(ref)
        self.fail("a noun phrase")

    def common_noun(self, determiner):
        while self.at(pos="adj"):
            self.advance()
        if not self.at(pos=("noun-sg", "noun-pl")):
            self.fail("a noun")
        noun = self.advance()
        lexeme = noun.lemma.lower()
        if determiner == DEFINITE:
            for referent in reversed(self.referents):
                if referent.lexeme == lexeme:
                    return referent.ref
        ref = self.fresh()
        self.objects.append(Object(ref, lexeme, self.pos_of(noun)))
        self.referents.append(_Referent(ref, lexeme))
        return ref

    def modifiers(self, ref):
        if self.at(pos="prep", lemma="of"):
            of = self.advance()
            right = self.noun_phrase()
            self.relations.append(Relation(ref, "of", right, self.pos_of(of)))
        if self.at(pos="rel"):
            self.advance()
            self.verb_phrase(ref)
        return ref

    def verb_phrase(self, subject):
        if not self.at(pos=("verb-pres", "verb-past")):
            self.fail("a verb")
        verb = self.advance()
        if verb.lemma == "be":
            return self.copula(subject, verb)
        pred = self.fresh()
        obj = self.noun_phrase() if self.starts_np() else None
        self.predicates.append(Predicate(pred, verb.lemma, subject, obj, self.pos_of(verb)))
        self.prep_phrases(pred)
        return pred

    def copula(self, subject, copula):
        pred = self.fresh()
        if self.at(pos="adj"):
            adj = self.advance()
            self.predicates.append(Predicate(pred, adj.lemma, subject, None, self.pos_of(adj)))
        elif self.at(pos="verb-pastpart"):
            verb = self.advance()
            if not self.at(pos="prep", lemma="by"):
                self.fail("'by'")
            self.advance()
            agent = self.noun_phrase()
            self.predicates.append(Predicate(pred, verb.lemma, agent, subject, self.pos_of(verb)))
        elif self.starts_np():
            complement = self.noun_phrase()
            self.predicates.append(Predicate(pred, "be", subject, complement, self.pos_of(copula)))
        else:
            self.fail("a noun phrase, adjective or participle after the copula")
        self.prep_phrases(pred)
        return pred

    def prep_phrases(self, pred):
        while self.at(pos="prep"):
            prep = self.advance()
            dep = self.noun_phrase()
            self.pps.append(ModifierPp(pred, prep.lemma.lower(), dep, self.pos_of(prep)))

    def build(self):
        terms = []
        for group in (self.objects, self.predicates, self.pps, self.relations, self.queries):
            terms.extend(sorted(group, key=lambda t: t.position))
        return Drs(tuple(terms), tuple(self.tokens), self.consequent_from)


def parse_cnl(tokens):
    """Parse a normalized token list into a :class:`Drs`.

    Raises :class:`UnparseableSentence` naming the first token the grammar
    cannot place.
    """
    parser = _Parser(list(tokens))
    parser.parse()
    return parser.build()


def load_golden(text):
    """Split a golden file into ``(sentence, rendered_drs)``."""
    sentence, _, body = text.partition("\n\n")
    return sentence.strip(), body.strip("\n")
