"""Exact sparse multivariate polynomials over Q with a positive multigrading.

Variables live in a fixed ``VariableUniverse`` that partitions them into
grading blocks; the multidegree of a monomial counts exponents per block.
Coefficients are ``fractions.Fraction`` throughout, so every operation is
exact and equality is structural.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]
MultiDegree = Tuple[int, ...]


class UniverseMismatch(ValueError):
    """Raised when two polynomials from different universes are combined."""


class VariableUniverse:
    """An ordered list of variable names split into grading blocks.

    ``block_sizes`` is a tuple (k_1, ..., k_s) with sum equal to the number
    of variables; the variable at position j has multidegree equal to the
    standard basis vector of its block.
    """

    __slots__ = ("names", "block_sizes", "_index", "_block_of", "_hash")

    def __init__(self, names: Sequence[str], block_sizes: Sequence[int]):
        names = tuple(names)
        block_sizes = tuple(int(b) for b in block_sizes)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        if not block_sizes or any(b <= 0 for b in block_sizes):
            raise ValueError("block sizes must be positive")
        if sum(block_sizes) != len(names):
            raise ValueError("block sizes must partition the variables")
        self.names = names
        self.block_sizes = block_sizes
        self._index = {name: i for i, name in enumerate(names)}
        block_of = []
        for b, size in enumerate(block_sizes):
            block_of.extend([b] * size)
        self._block_of = tuple(block_of)
        self._hash = hash((names, block_sizes))

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def num_blocks(self) -> int:
        return len(self.block_sizes)

    def index(self, name: str) -> int:
        return self._index[name]

    def block_of(self, var_index: int) -> int:
        return self._block_of[var_index]

    def block_slices(self):
        """Yield (block, start, stop) index ranges, one per grading block."""
        start = 0
        for b, size in enumerate(self.block_sizes):
            yield b, start, start + size
            start += size

    def multidegree_of_exponent(self, exponent: Exponent) -> MultiDegree:
        deg = [0] * len(self.block_sizes)
        for j, e in enumerate(exponent):
            if e:
                deg[self._block_of[j]] += e
        return tuple(deg)

    def zero_exponent(self) -> Exponent:
        return (0,) * len(self.names)

    def variable(self, name: str) -> "Polynomial":
        exp = [0] * len(self.names)
        exp[self._index[name]] = 1
        return Polynomial(self, {tuple(exp): Fraction(1)})

    def __eq__(self, other):
        return (
            isinstance(other, VariableUniverse)
            and self.names == other.names
            and self.block_sizes == other.block_sizes
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"VariableUniverse({len(self.names)} vars, blocks={self.block_sizes})"


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


class Polynomial:
    """Sparse polynomial: a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("universe", "terms")

    def __init__(self, universe: VariableUniverse, terms: Mapping[Exponent, Fraction]):
        clean: Dict[Exponent, Fraction] = {}
        n = universe.size
        for exp, coeff in terms.items():
            coeff = _as_fraction(coeff)
            if coeff == 0:
                continue
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for universe of size {n}")
            clean[tuple(exp)] = coeff
        self.universe = universe
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, universe: VariableUniverse) -> "Polynomial":
        return cls(universe, {})

    @classmethod
    def constant(cls, universe: VariableUniverse, c) -> "Polynomial":
        return cls(universe, {universe.zero_exponent(): _as_fraction(c)})

    @classmethod
    def monomial(cls, universe: VariableUniverse, exponent: Exponent, coeff=1) -> "Polynomial":
        return cls(universe, {tuple(exponent): _as_fraction(coeff)})

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def num_terms(self) -> int:
        return len(self.terms)

    def is_homogeneous(self) -> bool:
        """True when all terms share one multidegree; zero is homogeneous."""
        degs = {self.universe.multidegree_of_exponent(e) for e in self.terms}
        return len(degs) <= 1

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.universe != other.universe:
            raise UniverseMismatch("polynomials from different universes")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, Fraction(0)) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        out = Polynomial.__new__(Polynomial)
        out.universe = self.universe
        out.terms = terms
        return out

    def __neg__(self) -> "Polynomial":
        out = Polynomial.__new__(Polynomial)
        out.universe = self.universe
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, Fraction(0)) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        out = Polynomial.__new__(Polynomial)
        out.universe = self.universe
        out.terms = terms
        return out

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        if c == 0:
            return Polynomial.zero(self.universe)
        out = Polynomial.__new__(Polynomial)
        out.universe = self.universe
        out.terms = {e: c * v for e, v in self.terms.items()}
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.universe == other.universe
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.universe, frozenset(self.terms.items())))

    # -- grading ------------------------------------------------------

    def multidegree(self) -> MultiDegree:
        """Lex-maximal block-degree vector over the support.

        For a multihomogeneous polynomial this is the common multidegree.
        """
        if not self.terms:
            raise ValueError("multidegree of the zero polynomial")
        return max(self.universe.multidegree_of_exponent(e) for e in self.terms)

    # -- rendering / parsing -------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        names = self.universe.names
        for exp, coeff in self.sorted_terms():
            factors = []
            for j, e in enumerate(exp):
                if e == 1:
                    factors.append(names[j])
                elif e > 1:
                    factors.append(f"{names[j]}^{e}")
            body = "*".join(factors)
            mag = abs(coeff)
            if not body:
                piece = str(mag)
            elif mag == 1:
                piece = body
            else:
                piece = f"{mag}*{body}"
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, piece))
        first_sign, first_piece = parts[0]
        text = ("-" if first_sign == "-" else "") + first_piece
        for sign, piece in parts[1:]:
            text += f" {sign} {piece}"
        return text

    def __repr__(self):
        return f"Polynomial({self.render()})"

    def to_json(self) -> list:
        return [
            {"exponent": list(exp), "coeff": str(coeff)}
            for exp, coeff in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, universe: VariableUniverse, data: Iterable[Mapping]) -> "Polynomial":
        terms: Dict[Exponent, Fraction] = {}
        for entry in data:
            exp = tuple(int(e) for e in entry["exponent"])
            coeff = Fraction(entry["coeff"])
            if coeff:
                terms[exp] = terms.get(exp, Fraction(0)) + coeff
        return cls(universe, terms)


_TOKEN = re.compile(
    r"\s*(?:(?P<sign>[+-])|(?P<coeff>\d+(?:/\d+)?)|(?P<star>\*)"
    r"|(?P<var>[A-Za-z]\w*(?:_\{[^}]*\})?)(?:\^(?P<pow>\d+))?)"
)


def parse_polynomial(universe: VariableUniverse, text: str) -> Polynomial:
    """Parse the text format, e.g. ``3/2*p_{12}*p_{34} - p_{13}*p_{24}``.

    Variable tokens must match universe names exactly (index sets inside
    braces may be separated by spaces or commas, matching the renderer).
    """
    text = text.strip()
    if text in ("", "0"):
        return Polynomial.zero(universe)
    pos = 0
    terms: Dict[Exponent, Fraction] = {}
    n = universe.size

    def flush(sign, coeff, exp):
        c = Fraction(coeff if coeff is not None else 1) * sign
        e = tuple(exp)
        s = terms.get(e, Fraction(0)) + c
        if s:
            terms[e] = s
        else:
            terms.pop(e, None)

    sign = 1
    coeff = None
    exp = None
    expect_new_term = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near: {text[pos:pos+20]!r}")
        pos = m.end()
        if m.group("sign"):
            if not expect_new_term and exp is not None:
                flush(sign, coeff, exp)
            elif not expect_new_term and coeff is not None:
                flush(sign, coeff, [0] * n)
            sign = 1 if m.group("sign") == "+" else -1
            coeff, exp = None, None
            expect_new_term = True
        elif m.group("coeff"):
            coeff = Fraction(m.group("coeff")) if coeff is None else coeff * Fraction(m.group("coeff"))
            expect_new_term = False
        elif m.group("star"):
            continue
        else:
            name = m.group("var")
            if name not in universe._index:
                raise ValueError(f"unknown variable {name!r}")
            if exp is None:
                exp = [0] * n
            exp[universe.index(name)] += int(m.group("pow") or 1)
            expect_new_term = False
    if exp is not None:
        flush(sign, coeff, exp)
    elif coeff is not None:
        flush(sign, coeff, [0] * n)
    return Polynomial(universe, terms)


class Ideal:
    """A finite generating set in a fixed universe.

    When ``graded=True`` every generator must be multihomogeneous; this is
    checked on construction because the initial-ideal machinery relies on it.
    """

    __slots__ = ("universe", "generators")

    def __init__(self, universe: VariableUniverse, generators: Sequence[Polynomial], graded: bool = True):
        gens = []
        for g in generators:
            if g.universe != universe:
                raise UniverseMismatch("generator from a different universe")
            if g.is_zero():
                raise ValueError("zero generator")
            if graded and not g.is_homogeneous():
                raise ValueError(f"generator not multihomogeneous: {g.render()}")
            gens.append(g)
        self.universe = universe
        self.generators = tuple(gens)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators, {self.universe!r})"

    def to_json(self) -> dict:
        return {
            "variables": list(self.universe.names),
            "block_sizes": list(self.universe.block_sizes),
            "generators": [g.to_json() for g in self.generators],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Ideal":
        universe = VariableUniverse(data["variables"], data["block_sizes"])
        gens = [Polynomial.from_json(universe, g) for g in data["generators"]]
        return cls(universe, gens)

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def load(cls, path) -> "Ideal":
        with open(path) as fh:
            return cls.from_json(json.load(fh))
