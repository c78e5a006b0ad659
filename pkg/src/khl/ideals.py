"""Defining ideals: Pluecker ideals of Grassmannians and flag varieties.

Variables are indexed by subsets of [n]; a Grassmannian universe has the
k-subsets in one grading block, a flag universe all nonempty proper subsets
in blocks by cardinality.  Generators are the classical signed quadrics; the
sign of the term for j is (-1) to the number of elements of L above j plus
elements of K below... above j, exactly as the usual straightening normal
form prescribes.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence, Tuple

from .algebra import Ideal, Polynomial, VariableUniverse


def subset_name(J: Iterable[int]) -> str:
    J = sorted(J)
    if J and J[-1] <= 9:
        return "p_{" + "".join(str(j) for j in J) + "}"
    return "p_{" + " ".join(str(j) for j in J) + "}"


def name_to_subset(name: str) -> Tuple[int, ...]:
    inner = name[name.index("{") + 1 : name.index("}")]
    if " " in inner or "," in inner:
        parts = inner.replace(",", " ").split()
        return tuple(int(p) for p in parts)
    return tuple(int(ch) for ch in inner)


def grassmannian_universe(k: int, n: int) -> VariableUniverse:
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    subsets = list(itertools.combinations(range(1, n + 1), k))
    return VariableUniverse([subset_name(J) for J in subsets], [len(subsets)])


def flag_universe(n: int) -> VariableUniverse:
    names = []
    blocks = []
    for card in range(1, n):
        subsets = list(itertools.combinations(range(1, n + 1), card))
        names.extend(subset_name(J) for J in subsets)
        blocks.append(len(subsets))
    return VariableUniverse(names, blocks)


def pluecker_sign(j: int, K: Sequence[int], L: Sequence[int]) -> int:
    exponent = sum(1 for l in L if j < l) + sum(1 for k in K if k > j)
    return -1 if exponent % 2 else 1


def pluecker_relation(universe: VariableUniverse, K: Sequence[int], L: Sequence[int]) -> Polynomial:
    """The signed quadric R_{K,L}; terms with j already in K are dropped.

    May legitimately collapse to zero (repeated indices or antisymmetry).
    """
    K = tuple(sorted(K))
    L = tuple(sorted(L))
    result = Polynomial.zero(universe)
    n_vars = universe.size
    for j in L:
        if j in K:
            continue
        first = subset_name(sorted(K + (j,)))
        second = subset_name([l for l in L if l != j])
        exp = [0] * n_vars
        exp[universe.index(first)] += 1
        exp[universe.index(second)] += 1
        term = Polynomial.monomial(universe, tuple(exp), pluecker_sign(j, K, L))
        result = result + term
    return result


def _dedupe_up_to_sign(polys):
    seen = {}
    for p in polys:
        if p.is_zero():
            continue
        items = tuple(sorted(p.terms.items()))
        lead_coeff = items[0][1]
        normal = p if lead_coeff > 0 else -p
        key = tuple(sorted(normal.terms.items()))
        if key not in seen:
            seen[key] = normal
    return list(seen.values())


def grassmannian_ideal(k: int, n: int) -> Ideal:
    """The Pluecker ideal I_{k,n}, deduplicated up to sign."""
    universe = grassmannian_universe(k, n)
    polys = []
    for K in itertools.combinations(range(1, n + 1), k - 1):
        for L in itertools.combinations(range(1, n + 1), k + 1):
            polys.append(pluecker_relation(universe, K, L))
    return Ideal(universe, _dedupe_up_to_sign(polys))


def flag_ideal(n: int) -> Ideal:
    """The multihomogeneous ideal I_n cutting the full flag variety.

    Generators are the quadrics R_{K,L} over all block pairs a <= b with
    |K| = a-1, |L| = b+1; each has multidegree eps_a + eps_b.
    """
    if n < 3:
        raise ValueError("flag ideal needs n >= 3")
    universe = flag_universe(n)
    polys = []
    for a in range(1, n):
        for b in range(a, n):
            if b > n - 1:
                continue
            for K in itertools.combinations(range(1, n + 1), a - 1):
                for L in itertools.combinations(range(1, n + 1), b + 1):
                    polys.append(pluecker_relation(universe, K, L))
    return Ideal(universe, _dedupe_up_to_sign(polys))


def universe_subsets(universe: VariableUniverse):
    """The index subsets backing the universe's variables, in order."""
    return [name_to_subset(name) for name in universe.names]
