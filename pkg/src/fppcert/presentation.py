"""Free-group words, finite presentations, and Fox calculus.

Words are stored freely reduced and run-length encoded as
(generator index, exponent) pairs.  All values here are immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import ParseError

Letter = Tuple[int, int]


def _merge_runs(pairs: Iterable[Letter]) -> Tuple[Letter, ...]:
    out: List[Letter] = []
    for gen, exp in pairs:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            s = out[-1][1] + exp
            out.pop()
            if s:
                out.append((gen, s))
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in a free group.

    ``letters`` holds (generator, exponent) runs with nonzero exponents and
    distinct adjacent generators.  Build via :meth:`of` to enforce reduction.
    """

    letters: Tuple[Letter, ...] = ()

    @staticmethod
    def of(pairs: Iterable[Letter]) -> "Word":
        return Word(_merge_runs(pairs))

    def __mul__(self, other: "Word") -> "Word":
        return Word.of(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return Word()
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def length(self) -> int:
        """Total letter count, i.e. the sum of |exponent| over all runs."""
        return sum(abs(e) for _, e in self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def max_generator(self) -> int:
        """Largest generator index appearing, or -1 for the empty word."""
        return max((g for g, _ in self.letters), default=-1)

    def generators_used(self) -> frozenset:
        return frozenset(g for g, _ in self.letters)


def free_reduce(w: Word) -> Word:
    """Freely reduce a word; idempotent on already-reduced input."""
    return Word.of(w.letters)


@dataclass(frozen=True)
class FreeAlgebraSum:
    """A finite formal integer combination of freely reduced words.

    This is an element of the group ring of the free group; Fox derivatives
    take values here.  Terms are kept sorted for canonical equality.
    """

    terms: Tuple[Tuple[Word, int], ...] = ()

    @staticmethod
    def from_dict(d: Dict[Word, int]) -> "FreeAlgebraSum":
        items = [(w, c) for w, c in d.items() if c != 0]
        items.sort(key=lambda t: (len(t[0].letters), t[0].letters))
        return FreeAlgebraSum(tuple(items))

    @staticmethod
    def of_word(w: Word, coefficient: int = 1) -> "FreeAlgebraSum":
        return FreeAlgebraSum.from_dict({w: coefficient})

    @staticmethod
    def one() -> "FreeAlgebraSum":
        return FreeAlgebraSum.of_word(Word())

    def to_dict(self) -> Dict[Word, int]:
        return dict(self.terms)

    def __add__(self, other: "FreeAlgebraSum") -> "FreeAlgebraSum":
        d = self.to_dict()
        for w, c in other.terms:
            d[w] = d.get(w, 0) + c
        return FreeAlgebraSum.from_dict(d)

    def __neg__(self) -> "FreeAlgebraSum":
        return FreeAlgebraSum(tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: "FreeAlgebraSum") -> "FreeAlgebraSum":
        return self + (-other)

    def __mul__(self, other: "FreeAlgebraSum") -> "FreeAlgebraSum":
        d: Dict[Word, int] = {}
        for w1, c1 in self.terms:
            for w2, c2 in other.terms:
                w = w1 * w2
                d[w] = d.get(w, 0) + c1 * c2
        return FreeAlgebraSum.from_dict(d)

    def augmentation(self) -> int:
        """Sum of coefficients (image under the augmentation map)."""
        return sum(c for _, c in self.terms)


def fox_derivative(w: Word, j: int, num_generators: int | None = None) -> FreeAlgebraSum:
    """Fox derivative of ``w`` with respect to generator ``j``.

    Satisfies the product rule d(uv) = du + u.dv with d(x_j) = 1 and
    d(x_j^-1) = -x_j^-1.
    """
    if j < 0 or (num_generators is not None and j >= num_generators):
        raise IndexError(f"invalid generator index {j}")
    terms: Dict[Word, int] = {}
    prefix = Word()
    for gen, exp in w.letters:
        if gen < 0 or (num_generators is not None and gen >= num_generators):
            raise IndexError(f"invalid generator index {gen} in word")
        if gen == j:
            # d(x^n) = 1 + x + ... + x^(n-1);  d(x^-n) = -(x^-1 + ... + x^-n)
            if exp > 0:
                for s in range(exp):
                    t = prefix * Word.of([(gen, s)])
                    terms[t] = terms.get(t, 0) + 1
            else:
                for s in range(1, -exp + 1):
                    t = prefix * Word.of([(gen, -s)])
                    terms[t] = terms.get(t, 0) - 1
        prefix = prefix * Word.of([(gen, exp)])
    return FreeAlgebraSum.from_dict(terms)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: generator names plus freely reduced relators."""

    generator_names: Tuple[str, ...]
    relators: Tuple[Word, ...]

    def __post_init__(self):
        if not self.generator_names:
            raise ValueError("a presentation needs at least one generator")
        if len(set(self.generator_names)) != len(self.generator_names):
            raise ValueError("generator names must be pairwise distinct")
        g = len(self.generator_names)
        for w in self.relators:
            if w.letters and w.max_generator() >= g:
                raise ValueError("relator references an undeclared generator")

    @property
    def num_generators(self) -> int:
        return len(self.generator_names)

    @property
    def num_relators(self) -> int:
        return len(self.relators)


_TOKEN_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*|-?[0-9]+|[<>|,*^()]")


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {ch!r}", i)
        tokens.append((m.group(), i))
        i = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.text_len = len(text)

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self):
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of input", self.text_len)
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, symbol: str):
        tok, at = self.next()
        if tok != symbol:
            raise ParseError(f"expected {symbol!r}, found {tok!r}", at)

    def parse(self) -> Presentation:
        self.expect("<")
        names = [self._name()]
        while self.peek() == ",":
            self.next()
            names.append(self._name())
        if len(set(names)) != len(names):
            raise ParseError("duplicate generator name")
        index = {name: i for i, name in enumerate(names)}
        self.expect("|")
        relators: List[Word] = []
        if self.peek() != ">":
            relators.append(self._relator(index))
            while self.peek() == ",":
                self.next()
                relators.append(self._relator(index))
        self.expect(">")
        if self.pos < len(self.tokens):
            tok, at = self.tokens[self.pos]
            raise ParseError(f"trailing input {tok!r}", at)
        return Presentation(tuple(names), tuple(relators))

    def _name(self) -> str:
        tok, at = self.next()
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", tok):
            raise ParseError(f"expected generator name, found {tok!r}", at)
        return tok

    def _relator(self, index) -> Word:
        at = self.tokens[self.pos][1] if self.pos < len(self.tokens) else self.text_len
        w = self._word(index)
        if w.is_identity():
            raise ParseError("relator reduces to the empty word", at)
        return w

    def _word(self, index) -> Word:
        w = self._factor(index)
        while self.peek() == "*":
            self.next()
            w = w * self._factor(index)
        return w

    def _factor(self, index) -> Word:
        tok, at = self.next()
        if tok == "(":
            base = self._word(index)
            self.expect(")")
        else:
            if tok not in index:
                raise ParseError(f"unknown generator {tok!r}", at)
            base = Word.of([(index[tok], 1)])
        if self.peek() == "^":
            self.next()
            etok, eat = self.next()
            try:
                exp = int(etok)
            except ValueError:
                raise ParseError(f"expected integer exponent, found {etok!r}", eat)
            if exp == 0:
                raise ParseError("exponent must be nonzero", eat)
            base = base ** exp
        return base


def parse_presentation(text: str) -> Presentation:
    """Parse ``< gens | relators >`` text; relators come out freely reduced."""
    return _Parser(text).parse()


def format_word(w: Word, names: Sequence[str]) -> str:
    if w.is_identity():
        raise ValueError("cannot format the empty word")
    runs = []
    for gen, exp in w.letters:
        runs.append(names[gen] if exp == 1 else f"{names[gen]}^{exp}")
    return "*".join(runs)


def format_presentation(P: Presentation) -> str:
    gens = ", ".join(P.generator_names)
    rels = ", ".join(format_word(w, P.generator_names) for w in P.relators)
    return f"< {gens} | {rels} >"


def exponent_matrix(P: Presentation) -> List[List[int]]:
    """The r x g matrix of total exponent sums of each generator per relator."""
    g = P.num_generators
    rows = []
    for w in P.relators:
        row = [0] * g
        for gen, exp in w.letters:
            row[gen] += exp
        rows.append(row)
    return rows


def euler_characteristic(P: Presentation) -> int:
    """Euler characteristic of the presentation complex: 1 - g + r."""
    return 1 - P.num_generators + P.num_relators


def wedge_presentation(P1: Presentation, P2: Presentation) -> Presentation:
    """Presentation of the free product; its complex is the wedge of the two.

    Colliding generator names in the second operand get a numeric suffix.
    """
    names = list(P1.generator_names)
    used = set(names)
    for name in P2.generator_names:
        candidate = name
        suffix = 2
        while candidate in used:
            candidate = f"{name}{suffix}"
            suffix += 1
        names.append(candidate)
        used.add(candidate)
    shift = P1.num_generators
    shifted = tuple(
        Word(tuple((g + shift, e) for g, e in w.letters)) for w in P2.relators
    )
    return Presentation(tuple(names), P1.relators + shifted)
