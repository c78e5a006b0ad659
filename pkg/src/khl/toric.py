"""Monomial maps, toric ideals from integer kernels, and the generation
criterion for value semigroups.

The criterion: given a multihomogeneous prime ideal I and the hat matrix of
a full-rank valuation (block-degree rows stacked over the value rows), the
images of the generators generate the value semigroup exactly when the
initial ideal of I with respect to the matrix equals the toric kernel of the
associated monomial map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .algebra import Ideal, Polynomial, VariableUniverse
from .groebner import (
    Deadline,
    GBStats,
    MonomialOrder,
    buchberger,
    contains_monomial,
    ideal_equal,
    initial_ideal,
    normal_form,
    saturate_all_variables,
)
from .orders import BlockOrder, GroupOrder, LexOrder, WeightingMatrix


def integer_kernel(rows: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Basis of the integer kernel {u : A u = 0} via column elimination.

    Unimodular column operations bring A to column echelon form; the columns
    of the transformation matrix over the vanished columns form a lattice
    basis of the kernel.  Exact integer arithmetic throughout.
    """
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in U:
            row[i], row[j] = row[j], row[i]

    def col_addmul(i, j, q):
        # column i -= q * column j
        for row in A:
            row[i] -= q * row[j]
        for row in U:
            row[i] -= q * row[j]

    pivot_col = 0
    for r in range(m):
        if pivot_col >= n:
            break
        while True:
            nonzero = [j for j in range(pivot_col, n) if A[r][j] != 0]
            if not nonzero:
                break
            j0 = min(nonzero, key=lambda j: abs(A[r][j]))
            col_swap(pivot_col, j0)
            done = True
            for j in range(pivot_col + 1, n):
                if A[r][j] != 0:
                    q = A[r][j] // A[r][pivot_col]
                    col_addmul(j, pivot_col, q)
                    if A[r][j] != 0:
                        done = False
            if done:
                pivot_col += 1
                break
    kernel = []
    for j in range(n):
        if all(A[r][j] == 0 for r in range(m)):
            kernel.append(tuple(U[i][j] for i in range(n)))
    return kernel


class MonomialMap:
    """x_j -> y^(column_j): a homomorphism into a Laurent-free torus chart."""

    def __init__(self, universe: VariableUniverse, columns: Sequence[Sequence[int]]):
        if len(columns) != universe.size:
            raise ValueError("one column per variable required")
        self.universe = universe
        self.columns = tuple(tuple(int(x) for x in c) for c in columns)
        self.target_dim = len(self.columns[0]) if self.columns else 0

    @classmethod
    def from_matrix(cls, universe: VariableUniverse, matrix: WeightingMatrix) -> "MonomialMap":
        return cls(universe, matrix.columns())

    def image_exponent(self, exponent: Sequence[int]) -> Tuple[int, ...]:
        out = [0] * self.target_dim
        for j, e in enumerate(exponent):
            if e:
                for i, c in enumerate(self.columns[j]):
                    out[i] += e * c
        return tuple(out)

    def matrix_rows(self):
        return [tuple(col[i] for col in self.columns) for i in range(self.target_dim)]


def lattice_basis_ideal(universe: VariableUniverse, lattice: Sequence[Sequence[int]]) -> Ideal:
    gens = []
    for u in lattice:
        plus = tuple(max(x, 0) for x in u)
        minus = tuple(max(-x, 0) for x in u)
        p = Polynomial.monomial(universe, plus, 1) - Polynomial.monomial(universe, minus, 1)
        if not p.is_zero():
            gens.append(p)
    return Ideal(universe, gens, graded=False)


def toric_ideal(phi: MonomialMap, deadline: Optional[Deadline] = None) -> Ideal:
    """ker(phi) as an ideal: lattice-basis binomials saturated by all variables."""
    lattice = integer_kernel(phi.matrix_rows())
    if not lattice:
        return Ideal(phi.universe, [], graded=False)
    base = lattice_basis_ideal(phi.universe, lattice)
    if not base.generators:
        return base
    return saturate_all_variables(base, deadline=deadline)


@dataclass
class ToricVerdict:
    is_monomial_free: bool
    is_binomial: bool
    is_toric: bool
    initial_basis: List[Polynomial] = field(default_factory=list)
    kernel_basis: List[Polynomial] = field(default_factory=list)
    containment_failures: List[str] = field(default_factory=list)
    stats: Optional[GBStats] = None

    def to_json(self):
        out = {
            "is_monomial_free": self.is_monomial_free,
            "is_binomial": self.is_binomial,
            "is_toric": self.is_toric,
            "initial_basis": [g.render() for g in self.initial_basis],
            "kernel_basis": [g.render() for g in self.kernel_basis],
        }
        if self.containment_failures:
            out["containment_failures"] = self.containment_failures
        if self.stats is not None:
            out["stats"] = self.stats.to_json()
        return out


def has_degree_rows(matrix: WeightingMatrix, universe: VariableUniverse) -> bool:
    """Check the hat-matrix convention: the first s rows are block indicators."""
    s = universe.num_blocks
    if matrix.num_rows < s or matrix.num_cols != universe.size:
        return False
    for b, start, stop in universe.block_slices():
        row = matrix.rows[b]
        for j in range(universe.size):
            expected = 1 if start <= j < stop else 0
            if row[j] != expected:
                return False
    return True


def hat_matrix(universe: VariableUniverse, value_rows: Sequence[Sequence[int]], value_order: GroupOrder) -> WeightingMatrix:
    """Stack block-degree indicator rows on top of the valuation rows.

    The resulting group order compares degrees lexicographically first, then
    the value part under ``value_order``.
    """
    s = universe.num_blocks
    deg_rows = []
    for b, start, stop in universe.block_slices():
        deg_rows.append(tuple(1 if start <= j < stop else 0 for j in range(universe.size)))
    rows = deg_rows + [tuple(int(x) for x in r) for r in value_rows]
    order = BlockOrder(s, LexOrder(), value_order)
    return WeightingMatrix(rows, order)


def khovanskii_check(
    ideal: Ideal,
    matrix: WeightingMatrix,
    deadline: Optional[Deadline] = None,
) -> ToricVerdict:
    """Decide whether the initial ideal w.r.t. the hat matrix is toric.

    is_toric is equality of the initial ideal with the kernel of the monomial
    map defined by the matrix columns; that kernel is binomial and prime, so
    equality certifies primality without any general-purpose decomposition.
    """
    if not has_degree_rows(matrix, ideal.universe):
        raise ValueError("matrix is missing the block-degree rows (hat form)")
    stats = GBStats()
    init = initial_ideal(ideal, matrix, deadline=deadline, stats=stats)
    free = not contains_monomial(init, deadline=deadline)
    order = MonomialOrder(ideal.universe)
    init_gb = buchberger(init, order, deadline=deadline, stats=stats)
    binomial = all(g.num_terms() <= 2 for g in init_gb)
    phi = MonomialMap.from_matrix(ideal.universe, matrix)
    kernel = toric_ideal(phi, deadline=deadline)
    kernel_gb = buchberger(kernel, order, deadline=deadline, stats=stats)
    toric = init_gb == kernel_gb
    failures = []
    for g in init_gb:
        if not normal_form(g, kernel_gb, order, deadline=deadline).is_zero():
            failures.append(g.render())
    return ToricVerdict(
        is_monomial_free=free,
        is_binomial=binomial,
        is_toric=toric,
        initial_basis=init_gb,
        kernel_basis=kernel_gb,
        containment_failures=failures,
        stats=stats,
    )


def trop_membership(ideal: Ideal, weight, deadline: Optional[Deadline] = None) -> bool:
    """True iff the initial ideal w.r.t. the weight data is monomial-free."""
    init = initial_ideal(ideal, weight, deadline=deadline)
    return not contains_monomial(init, deadline=deadline)
