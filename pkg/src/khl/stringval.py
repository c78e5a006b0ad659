"""String valuations on flag varieties from reduced words.

A reduced word for the longest permutation drives lowering operators on the
fundamental wedge representations; the value of a Pluecker coordinate is the
order-minimal exponent string steering the highest-weight wedge onto the
target wedge.  The total order on exponent strings compares total size first
and breaks ties by taking the lexicographically greater string as smaller.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import Ideal, Polynomial
from .groebner import Deadline, GroebnerBasis, buchberger, weighted_order
from .ideals import flag_ideal, flag_universe, subset_name, universe_subsets
from .orders import LinearForm, SumThenLexDescOrder, WeightVector, WeightingMatrix
from .toric import ToricVerdict, hat_matrix, khovanskii_check


def longest_permutation(n: int) -> Tuple[int, ...]:
    return tuple(range(n, 0, -1))


class ReducedWord:
    """A reduced expression of the longest permutation of S_n.

    Letters are simple-transposition indices in [n-1]; the product (applied
    rightmost first) must equal j -> n+1-j and the length must be n(n-1)/2,
    which together certify reducedness.
    """

    def __init__(self, letters: Sequence[int], n: int):
        letters = tuple(int(x) for x in letters)
        if any(not 1 <= x <= n - 1 for x in letters):
            raise ValueError("letters must lie in [n-1]")
        N = n * (n - 1) // 2
        if len(letters) != N:
            raise ValueError(f"expected {N} letters for n={n}, got {len(letters)}")
        # evaluate w(x) = s_{i_1}(s_{i_2}(...s_{i_N}(x)...))
        w = []
        for x in range(1, n + 1):
            y = x
            for i in reversed(letters):
                if y == i:
                    y = i + 1
                elif y == i + 1:
                    y = i
            w.append(y)
        if tuple(w) != longest_permutation(n):
            raise ValueError(f"word {letters} is not an expression of the longest permutation")
        self.letters = letters
        self.n = n
        self.N = N

    @classmethod
    def from_digits(cls, digits: str, n: int) -> "ReducedWord":
        return cls([int(ch) for ch in digits if not ch.isspace()], n)

    def digits(self) -> str:
        return "".join(str(x) for x in self.letters)

    def __repr__(self):
        return f"ReducedWord({self.digits()}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, ReducedWord) and self.letters == other.letters and self.n == other.n

    def __hash__(self):
        return hash((self.letters, self.n))


class WedgeVector:
    """Element of a wedge power: sorted index tuples with exact coefficients."""

    __slots__ = ("components",)

    def __init__(self, components: Dict[Tuple[int, ...], Fraction]):
        self.components = {J: c for J, c in components.items() if c}

    @classmethod
    def basis(cls, J: Iterable[int]) -> "WedgeVector":
        return cls({tuple(sorted(J)): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.components

    def is_multiple_of_basis(self, J: Tuple[int, ...]) -> bool:
        return set(self.components) == {tuple(sorted(J))}

    def __eq__(self, other):
        return isinstance(other, WedgeVector) and self.components == other.components

    def __repr__(self):
        return f"WedgeVector({self.components})"


def _sorted_insert_sign(values: Tuple[int, ...], slot: int, new: int):
    """Replace values[slot] by new, re-sort, return (tuple, sign) or None
    when the wedge collapses by a repeated factor."""
    rest = values[:slot] + values[slot + 1 :]
    if new in rest:
        return None
    merged = list(rest)
    pos = 0
    while pos < len(merged) and merged[pos] < new:
        pos += 1
    merged.insert(pos, new)
    # parity of moving the factor from `slot` to `pos` in the wedge
    sign = -1 if (pos - slot) % 2 else 1
    return tuple(merged), sign


def apply_f(i: int, v: WedgeVector) -> WedgeVector:
    """Leibniz action of the simple lowering operator: e_i goes to e_{i+1}."""
    out: Dict[Tuple[int, ...], Fraction] = {}
    for J, c in v.components.items():
        for slot, val in enumerate(J):
            if val != i:
                continue
            res = _sorted_insert_sign(J, slot, i + 1)
            if res is None:
                continue
            K, sign = res
            s = out.get(K, Fraction(0)) + sign * c
            if s:
                out[K] = s
            else:
                out.pop(K, None)
    return WedgeVector(out)


def apply_f_power(i: int, power: int, v: WedgeVector) -> WedgeVector:
    for _ in range(power):
        if v.is_zero():
            break
        v = apply_f(i, v)
    return v


def root_counts(J: Sequence[int], k: int, n: int) -> Tuple[int, ...]:
    """Number of times each simple operator must act to reach the wedge e_J.

    c_i = min(i, k) - |J intersect [i]|; nonnegative for any k-subset.
    """
    Jset = set(J)
    if len(Jset) != k or any(not 1 <= j <= n for j in Jset):
        raise ValueError("J must be a k-subset of [n]")
    counts = []
    for i in range(1, n):
        c = min(i, k) - sum(1 for j in Jset if j <= i)
        counts.append(c)
    if any(c < 0 for c in counts):
        raise ValueError(f"negative operator count for J={sorted(Jset)}")
    return tuple(counts)


STRING_ORDER = SumThenLexDescOrder()


def _compositions(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def candidate_exponents(word: ReducedWord, J: Sequence[int]) -> List[Tuple[int, ...]]:
    """All exponent strings consistent with the forced per-letter totals.

    Each letter's total is fixed by weight bookkeeping, so the search space
    is the product of compositions of those totals over the letter positions.
    """
    k = len(tuple(J))
    counts = root_counts(J, k, word.n)
    positions = {i: [t for t, l in enumerate(word.letters) if l == i] for i in range(1, word.n)}
    per_letter = []
    for i in range(1, word.n):
        pos = positions[i]
        need = counts[i - 1]
        if need and not pos:
            return []
        per_letter.append([(pos, comp) for comp in _compositions(need, len(pos))])
    out = []
    for combo in itertools.product(*per_letter):
        m = [0] * word.N
        for pos, comp in combo:
            for t, val in zip(pos, comp):
                m[t] = val
        out.append(tuple(m))
    return out


def is_admissible(word: ReducedWord, m: Sequence[int], J: Sequence[int], k: int) -> bool:
    """Does the operator string steer the highest wedge onto a nonzero
    multiple of e_J?  Rightmost factor acts first."""
    v = WedgeVector.basis(range(1, k + 1))
    for t in range(word.N - 1, -1, -1):
        if m[t]:
            v = apply_f_power(word.letters[t], m[t], v)
            if v.is_zero():
                return False
    return v.is_multiple_of_basis(tuple(sorted(J)))


class NoAdmissibleString(RuntimeError):
    """No exponent string reaches the target wedge (invalid input data)."""


def string_valuation(word: ReducedWord, J: Sequence[int]) -> Tuple[int, ...]:
    """Order-minimal admissible exponent string for the Pluecker coordinate p_J."""
    J = tuple(sorted(set(J)))
    k = len(J)
    admissible = [m for m in candidate_exponents(word, J) if is_admissible(word, m, J, k)]
    if not admissible:
        raise NoAdmissibleString(f"no admissible string for J={J} and word {word.digits()}")
    return tuple(STRING_ORDER.min(admissible))


def two_power_form(N: int) -> LinearForm:
    """The classical string form: negated binary weights, heaviest first."""
    return LinearForm([-(2 ** (N - 1 - t)) for t in range(N)])


def string_value_columns(word: ReducedWord) -> List[Tuple[int, ...]]:
    """Values of all Pluecker coordinates, lex within cardinality blocks."""
    universe = flag_universe(word.n)
    return [string_valuation(word, J) for J in universe_subsets(universe)]


def string_weight_vector(word: ReducedWord) -> WeightVector:
    """Weights e(value) per Pluecker variable, with e the two-power form.

    Entries are nonpositive; published tables list the negated vector.
    """
    e = two_power_form(word.N)
    return WeightVector([e(v) for v in string_value_columns(word)])


def string_matrix(word: ReducedWord) -> WeightingMatrix:
    """The valuation's weighting matrix: one column per Pluecker variable."""
    cols = string_value_columns(word)
    rows = [tuple(col[t] for col in cols) for t in range(word.N)]
    return WeightingMatrix(rows, STRING_ORDER)


def string_hat_matrix(word: ReducedWord) -> WeightingMatrix:
    """Block-degree rows stacked over the string value rows."""
    universe = flag_universe(word.n)
    return hat_matrix(universe, string_matrix(word).rows, STRING_ORDER)


# ---------------------------------------------------------------------------
# the Minkowski-property verdict


def degree_rho_standard_monomials(gb: GroebnerBasis, universe) -> List[Tuple[int, ...]]:
    """Standard monomials of multidegree (1,...,1): one variable per block."""
    ranges = [range(start, stop) for _, start, stop in universe.block_slices()]
    out = []
    for combo in itertools.product(*ranges):
        exp = [0] * universe.size
        for j in combo:
            exp[j] += 1
        exp = tuple(exp)
        if gb.is_standard_monomial(exp):
            out.append(exp)
    return out


@dataclass
class MinkowskiReport:
    word: ReducedWord
    verdict: ToricVerdict
    has_property: bool
    witness: Optional[Tuple[str, str, Tuple[int, ...]]] = None

    def to_json(self):
        out = {
            "word": self.word.digits(),
            "minkowski_property": self.has_property,
            "initial_ideal_prime": self.verdict.is_toric,
            "verdict": self.verdict.to_json(),
        }
        if self.witness is not None:
            out["collision_witness"] = {
                "monomials": [self.witness[0], self.witness[1]],
                "value": list(self.witness[2]),
            }
        return out


def _monomial_name(universe, exp) -> str:
    factors = []
    for j, e in enumerate(exp):
        if e == 1:
            factors.append(universe.names[j])
        elif e > 1:
            factors.append(f"{universe.names[j]}^{e}")
    return "*".join(factors) if factors else "1"


def minkowski_verdict(word: ReducedWord, deadline: Optional[Deadline] = None) -> MinkowskiReport:
    """Toric criterion for the flag ideal under the word's hat matrix.

    When the criterion fails, a collision witness is attached: two standard
    monomials of multidegree (1,...,1) with the same matrix value.
    """
    ideal = flag_ideal(word.n)
    hat = string_hat_matrix(word)
    verdict = khovanskii_check(ideal, hat, deadline=deadline)
    witness = None
    if not verdict.is_toric:
        order = weighted_order(ideal.universe, hat)
        gb = GroebnerBasis(buchberger(ideal, order, deadline=deadline), order)
        seen: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        for exp in degree_rho_standard_monomials(gb, ideal.universe):
            value = hat.apply(exp)
            if value in seen:
                other = seen[value]
                witness = (
                    _monomial_name(ideal.universe, other),
                    _monomial_name(ideal.universe, exp),
                    value[ideal.universe.num_blocks :],
                )
                break
            seen[value] = exp
    return MinkowskiReport(word=word, verdict=verdict, has_property=verdict.is_toric, witness=witness)
