"""Token-level paraphrasing of raw questions into the restricted grammar.

The rewrite rules are the ones the DRS parser relies on: hyphenated
compound proper nouns, participle clauses turned into relative clauses,
present-tense verbs and explicit determiners. A bundled lexicon stands in
for a part-of-speech tagger.
"""
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources

from .errors import MalformedQuestion

POS_TAGS = frozenset({
    "noun-sg", "noun-pl", "proper", "verb-pres", "verb-past", "verb-pastpart",
    "det", "prep", "wh", "rel", "adj", "punct", "other",
})
VERB_TAGS = frozenset({"verb-pres", "verb-past", "verb-pastpart"})
NOUN_TAGS = frozenset({"noun-sg", "noun-pl"})
_VOWELS = "aeiouAEIOU"


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    index: int
    # True for tokens built from a bracketed entity span
    entity: bool = False

    def __post_init__(self):
        if not self.lemma:
            raise ValueError(f"empty lemma for {self.surface!r}")
        if self.pos not in POS_TAGS:
            raise ValueError(f"unknown part of speech {self.pos!r}")


@dataclass
class Lexicon:
    entries: dict = field(default_factory=dict)     # surface -> (lemma, (pos, ...))
    irregular: dict = field(default_factory=dict)   # past form -> present form
    uncountable: set = field(default_factory=set)

    def __post_init__(self):
        for past, present in self.irregular.items():
            if present not in self.entries:
                raise ValueError(f"irregular verb {past!r} maps to unknown form {present!r}")

    def lookup(self, surface):
        hit = self.entries.get(surface)
        if hit is None:
            hit = self.entries.get(surface.lower())
        return hit

    def pos_set(self, surface):
        hit = self.lookup(surface)
        return hit[1] if hit else ()

    def countable(self, lemma):
        return lemma not in self.uncountable

    def third_singular(self, lemma):
        for surface, (lem, tags) in self.entries.items():
            if lem == lemma and "verb-pres" in tags and surface != lemma:
                return surface
        if lemma.endswith(("s", "sh", "ch", "x", "z", "o")):
            return lemma + "es"
        if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in _VOWELS:
            return lemma[:-1] + "ies"
        return lemma + "s"

    @classmethod
    def from_text(cls, lexicon_text, irregular_text="", countability_text=""):
        entries = {}
        for lineno, line in enumerate(_data_lines(lexicon_text), 1):
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"lexicon line {lineno}: expected 3 fields: {line!r}")
            surface, lemma, tags = parts
            entries[surface] = (lemma, tuple(t.strip() for t in tags.split(",")))
        irregular = dict(line.split("\t") for line in _data_lines(irregular_text))
        uncountable = {
            noun for noun, flag in (line.split("\t") for line in _data_lines(countability_text))
            if flag.strip() == "uncountable"
        }
        return cls(entries, irregular, uncountable)


def _data_lines(text):
    for line in text.splitlines():
        line = line.rstrip("\n")
        if line.strip() and not line.startswith("#"):
            yield line


def _read_data(name):
    return resources.files("kalmqa").joinpath("data").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def default_lexicon():
    return Lexicon.from_text(
        _read_data("lexicon.tsv"), _read_data("irregular.tsv"), _read_data("countability.tsv"))


@dataclass(frozen=True)
class AdhocRule:
    match: tuple
    replacement: tuple


def load_adhoc_rules(text):
    rules = []
    for line in _data_lines(text):
        pattern, _, repl = line.partition("\t")
        rules.append(AdhocRule(tuple(pattern.lower().split()), tuple(repl.split())))
    return rules


@lru_cache(maxsize=None)
def _default_adhoc():
    return tuple(load_adhoc_rules(_read_data("adhoc_rules.tsv")))


def default_adhoc_rules():
    return list(_default_adhoc())


_PIECE_RE = re.compile(r"\[([^\]]*)\]|[^\s\[\]]+")


def _check_brackets(text):
    depth = 0
    for ch in text:
        if ch == "[":
            depth += 1
            if depth > 1:
                raise MalformedQuestion(f"nested or overlapping entity brackets in {text!r}")
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise MalformedQuestion(f"unmatched ']' in {text!r}")
    if depth:
        raise MalformedQuestion(f"unclosed '[' in {text!r}")


def _tag(word, lexicon, index):
    hit = lexicon.lookup(word)
    if hit:
        lemma, tags = hit
        return Token(word, lemma, tags[0], index)
    if word[:1].isupper():
        return Token(word, word, "proper", index)
    return Token(word, word, "other", index)


def tokenize(text, lexicon=None):
    """Split a raw question into tagged tokens; ``[...]`` spans become one proper noun."""
    lexicon = lexicon or default_lexicon()
    if not text or not text.strip():
        raise MalformedQuestion("empty question")
    _check_brackets(text)
    tokens = []
    for m in _PIECE_RE.finditer(text):
        if m.group(1) is not None:
            words = m.group(1).split()
            if not words:
                raise MalformedQuestion(f"empty entity span in {text!r}")
            tokens.append(Token("-".join(words), " ".join(words), "proper",
                                len(tokens) + 1, entity=True))
            continue
        word = m.group(0)
        trailing = []
        while len(word) > 1 and word[-1] in "?.,!":
            trailing.insert(0, word[-1])
            word = word[:-1]
        if word in "?.,!":
            trailing.insert(0, word)
            word = ""
        if word:
            tokens.append(_tag(word, lexicon, len(tokens) + 1))
        for p in trailing:
            tokens.append(Token(p, p, "punct", len(tokens) + 1))
    return tokens


def render_tokens(tokens):
    out = ""
    for tok in tokens:
        if tok.pos == "punct" and out:
            out += tok.surface
        else:
            out += (" " if out else "") + tok.surface
    return out


def _reindex(tokens):
    return [replace(t, index=i) for i, t in enumerate(tokens, 1)]


def _function_word(surface, lexicon):
    lemma, tags = lexicon.lookup(surface)
    return Token(surface, lemma, tags[0], 0)


def _apply_adhoc(tokens, rules, lexicon):
    if not rules:
        return tokens
    out = []
    i = 0
    while i < len(tokens):
        for rule in rules:
            n = len(rule.match)
            window = tokens[i:i + n]
            if (len(window) == n and not any(t.entity for t in window)
                    and tuple(t.surface.lower() for t in window) == rule.match):
                out.extend(_tag(w, lexicon, 0) for w in rule.replacement)
                i += n
                break
        else:
            out.append(tokens[i])
            i += 1
    return out


def _merge_propers(tokens):
    out = []
    for tok in tokens:
        prev = out[-1] if out else None
        if (prev is not None and tok.pos == "proper" and prev.pos == "proper"
                and not tok.entity and not prev.entity):
            out[-1] = replace(prev, surface=prev.surface + "-" + tok.surface,
                              lemma=prev.lemma + " " + tok.lemma)
        else:
            out.append(tok)
    return out


def _can_be_participle(tok, lexicon):
    return tok.pos == "verb-pastpart" or (
        tok.pos == "verb-past" and "verb-pastpart" in lexicon.pos_set(tok.surface))


def _is_copula(tok):
    return tok.lemma == "be" and tok.pos in VERB_TAGS


def _copula(plural, lexicon):
    return _function_word("are" if plural else "is", lexicon)


def _participles(tokens, lexicon):
    out = list(tokens)
    i = 0
    while i < len(out):
        tok = out[i]
        if tok.entity or not _can_be_participle(tok, lexicon):
            i += 1
            continue
        prev = out[i - 1] if i > 0 else None
        nxt = out[i + 1] if i + 1 < len(out) else None
        before = out[i - 2] if i > 1 else None
        part = replace(tok, pos="verb-pastpart")
        if prev is not None and _is_copula(prev):
            out[i] = part
            i += 1
        elif (prev is not None and prev.pos == "proper" and nxt is not None
              and nxt.pos in NOUN_TAGS and before is not None
              and before.pos in ("det", "prep", "wh")):
            # "in XYZ directed films" -> "in films that are directed by XYZ"
            noun = nxt
            out[i - 1:i + 2] = [
                noun, _function_word("that", lexicon),
                _copula(noun.pos == "noun-pl", lexicon), part,
                _function_word("by", lexicon), prev,
            ]
            i += 4
        elif (prev is not None and prev.pos in NOUN_TAGS
              and (tok.pos == "verb-pastpart" or (nxt is not None and nxt.pos == "prep"))):
            out[i:i + 1] = [_function_word("that", lexicon),
                            _copula(prev.pos == "noun-pl", lexicon), part]
            i += 3
        else:
            i += 1
    return out


def _subject_plural(tokens, i):
    for j in range(i - 1, -1, -1):
        t = tokens[j]
        if t.pos == "noun-pl":
            return True
        if t.pos in ("noun-sg", "proper"):
            return False
        if t.pos == "wh":
            if tokens[i].lemma == "be":
                for k in range(i + 1, len(tokens)):
                    if tokens[k].pos in NOUN_TAGS or tokens[k].pos == "proper":
                        return tokens[k].pos == "noun-pl"
            return False
    return False


def _present(tokens, lexicon):
    out = list(tokens)
    for i, tok in enumerate(out):
        if tok.pos != "verb-past" or tok.entity:
            continue
        base = lexicon.irregular.get(tok.surface.lower())
        if base is None:
            hit = lexicon.lookup(tok.surface)
            base = hit[0] if hit else re.sub(r"e?d$", "", tok.surface.lower())
        plural = _subject_plural(out, i)
        if base == "be":
            out[i] = replace(_copula(plural, lexicon), index=tok.index)
            continue
        surface = base if plural else lexicon.third_singular(base)
        out[i] = replace(tok, surface=surface, lemma=base, pos="verb-pres")
    return out


def _articles(tokens, lexicon):
    out = []
    for tok in tokens:
        needs = tok.pos == "noun-pl" or (tok.pos == "noun-sg" and lexicon.countable(tok.lemma))
        if needs:
            j = len(out) - 1
            while j >= 0 and out[j].pos == "adj":
                j -= 1
            prev = out[j] if j >= 0 else None
            determined = prev is not None and (
                prev.pos in ("det", "wh") or prev.surface.isdigit()
                or prev.surface.endswith("'s"))
            if not determined:
                first = out[j + 1] if j + 1 < len(out) else tok
                if tok.pos == "noun-pl":
                    article = "some"
                else:
                    article = "an" if first.surface[:1] in _VOWELS else "a"
                out.insert(j + 1, _function_word(article, lexicon))
        out.append(tok)
    return out


def normalize(tokens, lexicon=None, adhoc_rules=None):
    """Rewrite tokens into the grammar fragment accepted by :func:`kalmqa.drs.parse_cnl`."""
    lexicon = lexicon or default_lexicon()
    rules = default_adhoc_rules() if adhoc_rules is None else adhoc_rules
    toks = _apply_adhoc(list(tokens), rules, lexicon)
    toks = _merge_propers(toks)
    toks = _participles(toks, lexicon)
    toks = _present(toks, lexicon)
    toks = _articles(toks, lexicon)
    return _reindex(toks)


def paraphrase(text, lexicon=None, adhoc_rules=None):
    lexicon = lexicon or default_lexicon()
    return normalize(tokenize(text, lexicon), lexicon, adhoc_rules)
