"""Exact rational polytopes in small dimension: hulls, Minkowski sums,
lattice points, and value polytopes of weighting matrices.

Both representations are kept: an irredundant vertex list and facet
inequalities (plus affine-hull equations when the polytope is not
full-dimensional).  Everything is computed over Fraction; the facet
enumeration is a double-description pass over the homogenization cone after
reducing to coordinates on the affine hull, so the dual cone is pointed and
the classical combinatorial adjacency test applies.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, gcd
from typing import List, Optional, Sequence, Tuple

Vector = Tuple[Fraction, ...]

MAX_DIM = 8


class DimensionError(ValueError):
    pass


def _frac_vec(v) -> Vector:
    return tuple(Fraction(x) for x in v)


def _dot(a, b) -> Fraction:
    return sum(x * y for x, y in zip(a, b))


def _primitive(v: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational vector to coprime integers (sign preserved)."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def _rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pivot = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / pivot[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pivot)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _solve(matrix_cols: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Solve sum_j x_j * col_j = target exactly; None when inconsistent."""
    m = len(target)
    k = len(matrix_cols)
    aug = [[matrix_cols[j][i] for j in range(k)] + [target[i]] for i in range(m)]
    pivots = []
    row = 0
    for c in range(k):
        piv = next((i for i in range(row, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pr = aug[row]
        for i in range(m):
            if i != row and aug[i][c] != 0:
                f = aug[i][c] / pr[c]
                aug[i] = [a - f * b for a, b in zip(aug[i], pr)]
        pivots.append((row, c))
        row += 1
    for i in range(row, m):
        if aug[i][k] != 0:
            return None
    x = [Fraction(0)] * k
    for r, c in pivots:
        x[c] = aug[r][k] / aug[r][c]
    return x


# ---------------------------------------------------------------------------
# double description for a pointed dual


def _inverse(mat: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(mat)
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        f = aug[c][c]
        aug[c] = [x / f for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                g = aug[i][c]
                aug[i] = [a - g * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def _dual_rays(rays: List[Tuple[Fraction, ...]], dim: int) -> List[Tuple[int, ...]]:
    """Extreme rays of {a : a.r >= 0 for all r}, for cone(rays) full-dimensional.

    Double description seeded with a simplicial subcone: dim independent input
    rays give a pointed start whose dual basis is the initial extreme-ray set,
    and the remaining constraints are folded in with the combinatorial
    adjacency test.
    """
    # seed: dim linearly independent rays
    seed_idx: List[int] = []
    seed: List[Vector] = []
    for i, r in enumerate(rays):
        if _rank(seed + [r]) > len(seed):
            seed.append(r)
            seed_idx.append(i)
        if len(seed) == dim:
            break
    if len(seed) < dim:
        raise DimensionError("input rays do not span (cone not full-dimensional)")
    inv = _inverse([list(r) for r in seed])
    # columns of the inverse: d_j with d_j . seed_i = delta_ij
    gens: List[Vector] = [tuple(inv[i][j] for i in range(dim)) for j in range(dim)]
    processed = list(seed_idx)

    def zset(v):
        return frozenset(i for i in processed if _dot(v, rays[i]) == 0)

    for i, r in enumerate(rays):
        if i in seed_idx:
            continue
        plus = [g for g in gens if _dot(g, r) > 0]
        zero = [g for g in gens if _dot(g, r) == 0]
        minus = [g for g in gens if _dot(g, r) < 0]
        if minus:
            zs = {id(g): zset(g) for g in gens}
            new = []
            for gp in plus:
                for gm in minus:
                    common = zs[id(gp)] & zs[id(gm)]
                    adjacent = True
                    for other in gens:
                        if other is gp or other is gm:
                            continue
                        if common <= zs[id(other)]:
                            adjacent = False
                            break
                    if adjacent:
                        w = tuple(
                            _dot(gp, r) * b - _dot(gm, r) * a for a, b in zip(gp, gm)
                        )
                        if any(x != 0 for x in w):
                            new.append(tuple(map(Fraction, _primitive(w))))
            gens = plus + zero + new
            seen = {}
            for g in gens:
                seen[_primitive(g)] = g
            gens = [tuple(map(Fraction, p)) for p in seen]
        processed.append(i)
    return sorted({_primitive(g) for g in gens})


class Polytope:
    """Vertices plus facet data (normal, offset) with exact arithmetic.

    Facets satisfy normal.x >= offset on the polytope; equations hold with
    equality and cut out the affine hull.
    """

    def __init__(self, vertices, facets, equations, dim_ambient, dim):
        self.vertices = vertices
        self.facets = facets
        self.equations = equations
        self.dim_ambient = dim_ambient
        self.dim = dim

    # -- construction ---------------------------------------------------

    @classmethod
    def convex_hull(cls, points: Sequence[Sequence]) -> "Polytope":
        pts = [_frac_vec(p) for p in points]
        if not pts:
            raise ValueError("empty point set")
        m = len(pts[0])
        if m > MAX_DIM:
            raise DimensionError(f"ambient dimension {m} exceeds cap {MAX_DIM}")
        if any(len(p) != m for p in pts):
            raise ValueError("points of mixed dimension")
        pts = sorted(set(pts))
        p0 = pts[0]
        diffs = [tuple(a - b for a, b in zip(p, p0)) for p in pts]
        # independent subset spanning the affine hull
        basis: List[Vector] = []
        for d in diffs:
            if any(x != 0 for x in d) and _rank(basis + [d]) > len(basis):
                basis.append(d)
        dim = len(basis)

        # affine-hull equations: kernel of the basis vectors
        equations = []
        if dim < m:
            for e in _kernel_basis(basis, m):
                ep = _primitive(e)
                equations.append((ep, _dot(ep, p0)))

        if dim == 0:
            return cls([p0], [], equations, m, 0)

        # coordinates of each point on the affine-hull basis
        basis_cols = [list(b) for b in basis]
        coords = []
        for d in diffs:
            x = _solve(basis_cols, d)
            if x is None:
                raise RuntimeError("point outside its own affine hull (bug)")
            coords.append(tuple(x))

        rays = [tuple([Fraction(1)] + list(q)) for q in coords]
        dual = _dual_rays(rays, dim + 1)
        facets = []
        for a in dual:
            normal_red = a[1:]
            # pull the reduced-coordinate normal back to an ambient vector nu
            # with nu.(p - p0) = normal_red . coords(p) on the affine hull
            nu = _primitive(_pullback_normal(normal_red, basis, m))
            off = min(_dot(nu, p) for p in pts)
            facets.append((nu, off))
        facets = sorted(set(facets))

        # vertices: points whose tight facets span the hull directions
        vertices = []
        for p, q in zip(pts, coords):
            tight = [a for a in dual if a[0] + _dot(a[1:], q) == 0]
            if _rank([a[1:] for a in tight] or [[Fraction(0)] * dim]) == dim:
                vertices.append(p)
        poly = cls(vertices, facets, equations, m, dim)
        poly._self_check(pts)
        return poly

    def _self_check(self, pts):
        for p in pts:
            if not self.contains(p):
                raise RuntimeError("hull self-check failed: input point outside H-rep")
        for nu, off in self.facets:
            tight = sum(1 for v in self.vertices if _dot(nu, v) == off)
            if tight < max(1, self.dim):
                raise RuntimeError("facet not supported by enough vertices")

    # -- queries ---------------------------------------------------------

    def contains(self, point) -> bool:
        p = _frac_vec(point)
        for e, off in self.equations:
            if _dot(e, p) != off:
                return False
        return all(_dot(nu, p) >= off for nu, off in self.facets)

    def __eq__(self, other):
        return (
            isinstance(other, Polytope)
            and sorted(self.vertices) == sorted(other.vertices)
        )

    def __repr__(self):
        return f"Polytope(dim {self.dim}, {len(self.vertices)} vertices, {len(self.facets)} facets)"

    def minkowski_sum(self, other: "Polytope") -> "Polytope":
        if self.dim_ambient != other.dim_ambient:
            raise DimensionError("Minkowski sum needs equal ambient dimensions")
        sums = [
            tuple(a + b for a, b in zip(v, w))
            for v in self.vertices
            for w in other.vertices
        ]
        return Polytope.convex_hull(sums)

    def lattice_points(self) -> List[Tuple[int, ...]]:
        """All integer points, by bounding box plus exact membership."""
        if not self.vertices:
            return []
        m = self.dim_ambient
        lo = [min(v[i] for v in self.vertices) for i in range(m)]
        hi = [max(v[i] for v in self.vertices) for i in range(m)]
        ranges = [range(ceil(l), floor(h) + 1) for l, h in zip(lo, hi)]
        out = []
        import itertools

        for cand in itertools.product(*ranges):
            if self.contains(cand):
                out.append(cand)
        return out

    def to_json(self):
        return {
            "dim": self.dim,
            "vertices": [[str(x) for x in v] for v in sorted(self.vertices)],
            "facets": [
                {"normal": list(nu), "offset": str(off)} for nu, off in self.facets
            ],
            "equations": [
                {"normal": list(e), "value": str(off)} for e, off in self.equations
            ],
        }


def _kernel_basis(rows: Sequence[Vector], m: int) -> List[Vector]:
    """Rational kernel of the row span: all e with e . row = 0."""
    mat = [list(r) for r in rows]
    # row-reduce
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pr = mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c] / pr[c]
                mat[i] = [a - f * b for a, b in zip(mat[i], pr)]
        pivots.append(c)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    out = []
    for fc in free:
        e = [Fraction(0)] * m
        e[fc] = Fraction(1)
        for (ri, pc) in zip(range(len(pivots)), pivots):
            e[pc] = -mat[ri][fc] / mat[ri][pc]
        out.append(tuple(e))
    return out


def _pullback_normal(normal_red: Sequence, basis: List[Vector], m: int) -> Vector:
    """Ambient vector nu with nu.(basis_j) = normal_red_j, zero on the hull's
    orthogonal complement."""
    # solve G x = normal_red with G the Gram matrix, then nu = sum x_j basis_j
    dim = len(basis)
    gram_cols = [[_dot(basis[i], basis[j]) for i in range(dim)] for j in range(dim)]
    x = _solve(gram_cols, [Fraction(v) for v in normal_red])
    if x is None:
        raise RuntimeError("Gram system unsolvable (degenerate basis)")
    nu = [Fraction(0)] * m
    for xj, b in zip(x, basis):
        for i in range(m):
            nu[i] += xj * b[i]
    return tuple(nu)


def convex_hull(points) -> Polytope:
    return Polytope.convex_hull(points)


def minkowski_sum(a: Polytope, b: Polytope) -> Polytope:
    return a.minkowski_sum(b)


def newton_okounkov_polytope(matrix_rows: Sequence[Sequence[int]], universe, toric_certified: bool) -> Polytope:
    """Minkowski sum over grading blocks of the hulls of that block's value
    columns (degree rows already stripped).

    The decomposition is only the value polytope when the generation
    criterion holds, so the caller must pass the verdict explicitly.
    """
    if not toric_certified:
        raise ValueError("value-polytope decomposition requires a positive toric verdict")
    cols = [tuple(r[j] for r in matrix_rows) for j in range(universe.size)]
    blocks = []
    for _, start, stop in universe.block_slices():
        blocks.append(Polytope.convex_hull([cols[j] for j in range(start, stop)]))
    poly = blocks[0]
    for b in blocks[1:]:
        poly = poly.minkowski_sum(b)
    return poly
