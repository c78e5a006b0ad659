"""Buchberger engine with weighted orders, min-convention initial ideals,
normal forms, saturation, and quasi-valuation evaluation.

Initial data follows the min convention: the initial form of f keeps the
terms whose weight image is smallest.  Internally the engine works with a
"leading" monomial which is exactly that initial monomial, so a composite
order [weights, then graded-reverse-lex] has the weight part compared
upside-down while the tie break is the classical one.  Weighted orders are
only sound on multihomogeneous data (reduction terminates degreewise); the
classical orders used for elimination and equality tests are global.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Exponent, Ideal, Polynomial, VariableUniverse
from .orders import GroupOrder, LexOrder, WeightVector, WeightingMatrix

# ---------------------------------------------------------------------------
# deadlines


class DeadlineExceeded(RuntimeError):
    """A cooperative compute deadline ran out."""


class Deadline:
    """Wall-clock budget checked cooperatively inside long loops."""

    def __init__(self, seconds: Optional[float]):
        self.seconds = seconds
        self.start = time.monotonic()

    @classmethod
    def from_env(cls) -> "Deadline":
        raw = os.environ.get("KHL_DEADLINE_SECS")
        return cls(float(raw)) if raw else cls(None)

    def check(self):
        if self.seconds is not None and time.monotonic() - self.start > self.seconds:
            raise DeadlineExceeded(f"deadline of {self.seconds}s exceeded")


# ---------------------------------------------------------------------------
# monomial orders


def _neg_key(k):
    if isinstance(k, tuple):
        return tuple(_neg_key(x) for x in k)
    return -k


class MonomialOrder:
    """Total order on exponents: optional weight data, then a classical tiebreak.

    The *leading* monomial of a polynomial under this order is its initial
    monomial: among the terms the one whose weight image is minimal under the
    group order, ties broken by the tiebreak (grevlex or lex, largest wins).
    ``elim_prefix`` marks the first variables as an elimination block that
    dominates everything else (classical max polarity, used for saturation).
    """

    def __init__(
        self,
        universe: VariableUniverse,
        weight=None,
        weight_order: Optional[GroupOrder] = None,
        tiebreak: str = "grevlex",
        var_permutation: Optional[Sequence[int]] = None,
        elim_prefix: int = 0,
    ):
        if tiebreak not in ("grevlex", "lex"):
            raise ValueError("tiebreak must be 'grevlex' or 'lex'")
        self.universe = universe
        self.weight = weight
        if isinstance(weight, WeightingMatrix):
            self.weight_order = weight_order or weight.order
        else:
            self.weight_order = weight_order or LexOrder()
        self.tiebreak = tiebreak
        self.perm = tuple(var_permutation) if var_permutation else tuple(range(universe.size))
        self.elim_prefix = elim_prefix
        self._cache: Dict[Exponent, tuple] = {}

    def _weight_part(self, exp: Exponent):
        w = self.weight
        if w is None:
            return ()
        if isinstance(w, WeightVector):
            return (-w.dot(exp),)
        if isinstance(w, WeightingMatrix):
            return (_neg_key(self.weight_order.key(w.apply(exp))),)
        raise TypeError(f"unsupported weight data: {w!r}")

    def _tie_part(self, exp: Exponent):
        p = [exp[j] for j in self.perm]
        if self.tiebreak == "lex":
            return tuple(p)
        return (sum(p), tuple(-x for x in reversed(p)))

    def key(self, exp: Exponent):
        """Sort key; the leading monomial maximizes it."""
        k = self._cache.get(exp)
        if k is None:
            elim = (sum(exp[j] for j in range(self.elim_prefix)),) if self.elim_prefix else ()
            k = elim + self._weight_part(exp) + self._tie_part(exp)
            self._cache[exp] = k
        return k

    def lead(self, f: Polynomial) -> Exponent:
        return max(f.terms, key=self.key)

    def lead_term(self, f: Polynomial) -> Tuple[Exponent, Fraction]:
        e = self.lead(f)
        return e, f.terms[e]

    def sorted_exponents(self, f: Polynomial) -> List[Exponent]:
        return sorted(f.terms, key=self.key, reverse=True)

    def is_global_classical(self) -> bool:
        return self.weight is None

    def __repr__(self):
        parts = []
        if self.elim_prefix:
            parts.append(f"elim{self.elim_prefix}")
        if self.weight is not None:
            parts.append("weighted")
        parts.append(self.tiebreak)
        return f"MonomialOrder({'+'.join(parts)})"


# ---------------------------------------------------------------------------
# polynomial reduction


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _quotient(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass
class GBStats:
    s_pairs: int = 0
    reductions: int = 0
    wall_time: float = 0.0
    basis_size: int = 0

    def to_json(self):
        return {
            "s_pairs": self.s_pairs,
            "reductions": self.reductions,
            "wall_time": round(self.wall_time, 6),
            "basis_size": self.basis_size,
        }


def _sub_multiple(f_terms, g: Polynomial, quot: Exponent, factor: Fraction):
    """In-place f -= factor * x^quot * g on a term dict."""
    for e, c in g.terms.items():
        key = tuple(a + b for a, b in zip(e, quot))
        s = f_terms.get(key, Fraction(0)) - factor * c
        if s:
            f_terms[key] = s
        else:
            f_terms.pop(key, None)


def normal_form(
    f: Polynomial,
    basis: Sequence[Polynomial],
    order: MonomialOrder,
    stats: Optional[GBStats] = None,
    deadline: Optional[Deadline] = None,
) -> Polynomial:
    """Full remainder of f on division by the basis: no remainder term is
    divisible by any basis lead, so the remainder is supported on standard
    monomials when the basis is a Groebner basis."""
    if f.universe != order.universe:
        raise ValueError("universe mismatch")
    leads = [(order.lead(g), g) for g in basis if not g.is_zero()]
    work = dict(f.terms)
    remainder: Dict[Exponent, Fraction] = {}
    guard = 0
    while work:
        guard += 1
        if deadline is not None and guard % 256 == 0:
            deadline.check()
        t = max(work, key=order.key)
        c = work.pop(t)
        hit = None
        for le, g in leads:
            if _divides(le, t):
                hit = (le, g)
                break
        if hit is None:
            remainder[t] = c
            continue
        le, g = hit
        work[t] = c
        factor = c / g.terms[le]
        _sub_multiple(work, g, _quotient(t, le), factor)
        if stats is not None:
            stats.reductions += 1
    return Polynomial(f.universe, remainder)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    ef, cf = order.lead_term(f)
    eg, cg = order.lead_term(g)
    L = _lcm(ef, eg)
    terms: Dict[Exponent, Fraction] = {}
    _sub_multiple(terms, f, _quotient(L, ef), Fraction(-1) / cf)
    _sub_multiple(terms, g, _quotient(L, eg), Fraction(1) / cg)
    return Polynomial(f.universe, terms)


def buchberger(
    ideal: Ideal,
    order: MonomialOrder,
    deadline: Optional[Deadline] = None,
    stats: Optional[GBStats] = None,
) -> List[Polynomial]:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pair selection follows the normal strategy (smallest lcm under the active
    order); the coprimality and chain criteria prune pairs.  Output is monic,
    fully inter-reduced and sorted by leading monomial, hence canonical for
    the given order.
    """
    t0 = time.monotonic()
    if stats is None:
        stats = GBStats()
    if order.weight is not None:
        for g in ideal.generators:
            if not g.is_homogeneous():
                raise ValueError("weighted orders require multihomogeneous generators")

    basis: List[Polynomial] = []
    leads: List[Exponent] = []
    for g in ideal.generators:
        r = normal_form(g, basis, order, stats=stats, deadline=deadline)
        if not r.is_zero():
            le, lc = order.lead_term(r)
            basis.append(r.scale(1 / lc))
            leads.append(le)

    pairs = {}
    def lcm_key(i, j):
        return order.key(_lcm(leads[i], leads[j]))

    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            pairs[(i, j)] = _lcm(leads[i], leads[j])

    processed = set()
    counter = 0
    while pairs:
        counter += 1
        if deadline is not None and counter % 32 == 0:
            deadline.check()
        (i, j) = min(pairs, key=lambda ij: (lcm_key(*ij), ij))
        L = pairs.pop((i, j))
        processed.add((i, j))
        # coprimality criterion
        if L == tuple(a + b for a, b in zip(leads[i], leads[j])):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(leads[k], L):
                continue
            p1 = (min(i, k), max(i, k))
            p2 = (min(j, k), max(j, k))
            if p1 not in pairs and p2 not in pairs:
                skip = True
                break
        if skip:
            continue
        stats.s_pairs += 1
        s = s_polynomial(basis[i], basis[j], order)
        r = normal_form(s, basis, order, stats=stats, deadline=deadline)
        if r.is_zero():
            continue
        le, lc = order.lead_term(r)
        r = r.scale(1 / lc)
        idx = len(basis)
        basis.append(r)
        leads.append(le)
        for k in range(idx):
            pairs[(k, idx)] = _lcm(leads[k], leads[idx])

    reduced = _interreduce(basis, order, stats, deadline)
    stats.wall_time += time.monotonic() - t0
    stats.basis_size = len(reduced)
    return reduced


def _interreduce(basis, order, stats, deadline):
    # drop elements whose lead is divisible by another lead
    keep = []
    leads = [order.lead(g) for g in basis]
    for i, g in enumerate(basis):
        if any(
            j != i
            and _divides(leads[j], leads[i])
            and (leads[j] != leads[i] or j < i)
            for j in range(len(basis))
        ):
            continue
        keep.append(g)
    # tail-reduce every survivor against the others
    out = []
    for i, g in enumerate(keep):
        others = out + keep[i + 1 :]
        r = normal_form(g, others, order, stats=stats, deadline=deadline)
        if r.is_zero():
            continue
        _, lc = order.lead_term(r)
        out.append(r.scale(1 / lc))
    out.sort(key=lambda g: order.key(order.lead(g)))
    return out


class GroebnerBasis:
    """A reduced basis together with the order that produced it."""

    __slots__ = ("elements", "order")

    def __init__(self, elements: Sequence[Polynomial], order: MonomialOrder):
        self.elements = tuple(elements)
        self.order = order

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def normal_form(self, f: Polynomial, deadline: Optional[Deadline] = None) -> Polynomial:
        return normal_form(f, self.elements, self.order, deadline=deadline)

    def leads(self):
        return [self.order.lead(g) for g in self.elements]

    def is_standard_monomial(self, exp: Exponent) -> bool:
        return not any(_divides(le, exp) for le in self.leads())


def groebner_basis(
    ideal: Ideal,
    order: Optional[MonomialOrder] = None,
    deadline: Optional[Deadline] = None,
    stats: Optional[GBStats] = None,
) -> GroebnerBasis:
    if order is None:
        order = MonomialOrder(ideal.universe)
    return GroebnerBasis(buchberger(ideal, order, deadline=deadline, stats=stats), order)


# ---------------------------------------------------------------------------
# initial ideals and friends


def weighted_order(universe: VariableUniverse, weight, tiebreak="grevlex") -> MonomialOrder:
    """The compatible order [weight data first, then a classical tiebreak]."""
    return MonomialOrder(universe, weight=weight, tiebreak=tiebreak)


def initial_form(f: Polynomial, weight) -> Polynomial:
    from .orders import initial_form_M, initial_form_w

    if isinstance(weight, WeightVector):
        return initial_form_w(f, weight)
    return initial_form_M(f, weight)


def initial_ideal(
    ideal: Ideal,
    weight,
    deadline: Optional[Deadline] = None,
    stats: Optional[GBStats] = None,
) -> Ideal:
    """Initial ideal (min convention) of a multihomogeneous ideal.

    Computes a Groebner basis under the weight-compatible order and takes the
    initial forms of its elements; those generate the initial ideal and are
    themselves a basis for it under the same order.
    """
    order = weighted_order(ideal.universe, weight)
    gb = buchberger(ideal, order, deadline=deadline, stats=stats)
    forms = [initial_form(g, weight) for g in gb]
    return Ideal(ideal.universe, forms)


def ideal_equal(a: Ideal, b: Ideal, deadline: Optional[Deadline] = None) -> bool:
    """Equality via reduced bases under one fixed classical order."""
    if a.universe != b.universe:
        raise ValueError("universe mismatch")
    order = MonomialOrder(a.universe)
    ga = buchberger(a, order, deadline=deadline)
    gb = buchberger(b, order, deadline=deadline)
    return ga == gb


def ideal_contains(a: Ideal, b: Ideal, deadline: Optional[Deadline] = None) -> bool:
    """True when every generator of b reduces to zero modulo a."""
    order = MonomialOrder(a.universe)
    ga = buchberger(a, order, deadline=deadline)
    return all(normal_form(g, ga, order, deadline=deadline).is_zero() for g in b.generators)


def _extend_universe_with_t(universe: VariableUniverse):
    names = ("t_aux",) + universe.names
    blocks = (1,) + universe.block_sizes
    return VariableUniverse(names, blocks)


def saturate(ideal: Ideal, f: Polynomial, deadline: Optional[Deadline] = None) -> Ideal:
    """(I : f^infinity) via the auxiliary-variable trick.

    Adjoins t, adds t*f - 1, eliminates t with a block order and restricts
    the basis back to the original variables.
    """
    if f.is_zero():
        raise ValueError("cannot saturate by zero")
    ext = _extend_universe_with_t(ideal.universe)

    def lift(p: Polynomial) -> Polynomial:
        return Polynomial(ext, {(0,) + e: c for e, c in p.terms.items()})

    gens = [lift(g) for g in ideal.generators]
    tf = Polynomial(ext, {(1,) + e: c for e, c in f.terms.items()})
    one = Polynomial.constant(ext, 1)
    gens.append(tf - one)
    order = MonomialOrder(ext, elim_prefix=1)
    gb = buchberger(Ideal(ext, gens, graded=False), order, deadline=deadline)
    kept = []
    for g in gb:
        if all(e[0] == 0 for e in g.terms):
            kept.append(Polynomial(ideal.universe, {e[1:]: c for e, c in g.terms.items()}))
    if not kept:
        # saturation can only be empty if the ideal was zero
        return Ideal(ideal.universe, [], graded=False)
    return Ideal(ideal.universe, kept, graded=False)


def saturate_variable(ideal: Ideal, var_index: int, deadline: Optional[Deadline] = None):
    """(I : x_i^infinity) for multihomogeneous I, by the reverse-lex trick.

    Under grevlex with x_i cheapest, dividing every reduced-basis element by
    its x_i content saturates the ideal in that variable.  Returns the
    saturated ideal and whether any division actually happened.
    """
    n = ideal.universe.size
    perm = [j for j in range(n) if j != var_index] + [var_index]
    order = MonomialOrder(ideal.universe, var_permutation=perm)
    gb = buchberger(ideal, order, deadline=deadline)
    out = []
    shifted = False
    for g in gb:
        shift = min(e[var_index] for e in g.terms)
        if shift:
            shifted = True
            g = Polynomial(
                ideal.universe,
                {
                    tuple(x - (shift if j == var_index else 0) for j, x in enumerate(e)): c
                    for e, c in g.terms.items()
                },
            )
        out.append(g)
    return Ideal(ideal.universe, out, graded=False), shifted


def saturate_all_variables(ideal: Ideal, deadline: Optional[Deadline] = None) -> Ideal:
    """(I : (x_1...x_n)^infinity) by looping single-variable saturations.

    A full pass with no division in any variable certifies saturation, so the
    loop stops there; the chain of ideals is ascending, hence this terminates.
    """
    current = ideal
    if not current.generators:
        return current
    for _ in range(10_000):
        any_shift = False
        for i in range(current.universe.size):
            current, shifted = saturate_variable(current, i, deadline=deadline)
            any_shift = any_shift or shifted
        if not any_shift:
            return current
    raise RuntimeError("variable saturation failed to stabilize")


def contains_monomial(ideal: Ideal, deadline: Optional[Deadline] = None) -> bool:
    """True iff the ideal contains a monomial, i.e. saturating by the product
    of all variables gives the unit ideal."""
    if not ideal.generators:
        return False
    sat = saturate_all_variables(ideal, deadline=deadline)
    order = MonomialOrder(sat.universe)
    gb = buchberger(sat, order, deadline=deadline)
    return any(g.is_monomial() and sum(order.lead(g)) == 0 for g in gb)


def in_lineality(ideal: Ideal, w: WeightVector, deadline: Optional[Deadline] = None) -> bool:
    """True iff the initial ideal with respect to w equals the ideal itself."""
    init = initial_ideal(ideal, w, deadline=deadline)
    return ideal_equal(init, ideal, deadline=deadline)


def quasi_valuation(
    f: Polynomial,
    matrix: WeightingMatrix,
    gb: GroebnerBasis,
    deadline: Optional[Deadline] = None,
):
    """Value of the coset of f under the weighting-matrix quasi-valuation.

    Requires a basis computed under an order compatible with the matrix; the
    value is the order-minimum of the matrix images over the standard-monomial
    support of the normal form.  Raises if f lies in the ideal.
    """
    nf = gb.normal_form(f, deadline=deadline)
    if nf.is_zero():
        raise ValueError("element lies in the ideal; quasi-valuation undefined")
    images = [matrix.apply(e) for e in nf.terms]
    return matrix.order.min(images)
