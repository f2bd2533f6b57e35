"""Additive structure of subsets of the cube under XOR.

Everything here is exact integer or rational arithmetic.  For a set A
and a point x, M_x is the set of ordered pairs (a, b) in A x A with
a XOR b = x; the table of |M_x| drives the additive energy

    E2(A, A) = sum_x |M_x|^2
             = #{(a, b, c, d) in A^4 : a ^ b ^ c ^ d = 0},

the multiplicity bound m(A) = 1 + max_{x != 0} |M_x|, and the
hereditary energy maximum over subsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import DEFAULT_DENSE_CAP, SpectrumVector, SupportSet, walsh_transform
from .errors import DimensionMismatchError, ResourceLimitError

# Direct pair enumeration materialises |A|^2 XOR values; beyond this
# many entries the dense convolution path must carry the computation.
PAIR_ENUMERATION_LIMIT = 40_000_000

# the greedy removal sweep costs O(|A|^3) python operations
GREEDY_LIMIT = 300

__all__ = [
    "MultiplicityTable",
    "LevelSetDecomposition",
    "HereditaryResult",
    "pair_multiplicities",
    "m_bound",
    "additive_energy",
    "energy_ratio",
    "sumset",
    "hereditary_energy",
    "dyadic_level_sets",
]


@dataclass(frozen=True)
class MultiplicityTable:
    """Counts[x] = |M_x| for every x hit by A + A (zero counts omitted)."""

    n: int
    counts: dict[int, int]

    def __post_init__(self) -> None:
        for x, c in self.counts.items():
            if not 0 <= x < (1 << self.n):
                raise ValueError(f"sum {x} out of range for n={self.n}")
            if c <= 0:
                raise ValueError("multiplicity table must omit zero counts")

    @property
    def set_size(self) -> int:
        # every ordered pair lands somewhere, so the total is |A|^2
        total = sum(self.counts.values())
        size = math.isqrt(total)
        assert size * size == total
        return size

    def support(self) -> SupportSet:
        """The sumset A + A."""
        return SupportSet(self.n, tuple(sorted(self.counts)))


def _pairs_table(masks: tuple[int, ...] | np.ndarray) -> dict[int, int]:
    seq = [int(m) for m in masks]
    if seq and max(seq) >= (1 << 62):
        # beyond int64: plain dictionary accumulation over python ints
        table: dict[int, int] = {}
        for a in seq:
            for b in seq:
                x = a ^ b
                table[x] = table.get(x, 0) + 1
        return table
    arr = np.asarray(seq, dtype=np.int64)
    xors = (arr[:, None] ^ arr[None, :]).ravel()
    values, counts = np.unique(xors, return_counts=True)
    return {int(x): int(c) for x, c in zip(values, counts)}


def _convolution_table(A: SupportSet) -> dict[int, int]:
    """|M_x| via the convolution theorem on the integer indicator.

    wht(1_A)^2 transformed back and divided by 2^n is the XOR
    self-convolution; all arithmetic stays in int64, which is safe as
    long as 2^n * |A|^2 fits (checked by the caller).
    """
    ind = np.zeros(1 << A.n, dtype=np.int64)
    ind[A.masks_array()] = 1
    walsh_transform(ind)
    ind *= ind
    walsh_transform(ind)
    quotient, remainder = np.divmod(ind, 1 << A.n)
    assert not remainder.any(), "convolution output not divisible by 2^n"
    nz = np.nonzero(quotient)[0]
    return {int(x): int(quotient[x]) for x in nz}


def pair_multiplicities(
    A: SupportSet, *, dense_cap: int | None = None
) -> MultiplicityTable:
    """The table x -> |M_x| over ordered pairs of A.

    Two independent routes exist: direct pair enumeration (any n, cost
    |A|^2) and dense XOR self-convolution (cost n 2^n, needs the dense
    cap).  When both are affordable the results are cross-checked
    against each other before being returned.
    """
    cap = DEFAULT_DENSE_CAP if dense_cap is None else dense_cap
    size = len(A)
    if size == 0:
        raise ValueError("pair multiplicities undefined for the empty set")
    enum_ok = size * size <= PAIR_ENUMERATION_LIMIT
    # int64 overflow guard: intermediate convolution sums reach 2^n |A|^2
    conv_ok = A.n <= cap and A.n + 2 * size.bit_length() < 62
    if enum_ok:
        table = _pairs_table(A.elements)
        if conv_ok:
            if table != _convolution_table(A):
                raise RuntimeError(
                    "pair multiplicity cross-check failed between "
                    "enumeration and convolution"
                )
    elif conv_ok:
        table = _convolution_table(A)
    else:
        raise ResourceLimitError(
            f"set of size {size} in dimension {A.n} is too large for both "
            f"pair enumeration and dense convolution"
        )
    return MultiplicityTable(A.n, table)


def m_bound(A: SupportSet, *, dense_cap: int | None = None) -> int:
    """m(A) = 1 + max over x != 0 of |M_x|; 1 for singletons."""
    if len(A) == 0:
        raise ValueError("m bound undefined for the empty set")
    table = pair_multiplicities(A, dense_cap=dense_cap)
    off_zero = [c for x, c in table.counts.items() if x != 0]
    return 1 + max(off_zero, default=0)


def additive_energy(A: SupportSet, *, dense_cap: int | None = None) -> int:
    """E2(A, A), the number of XOR quadruples, exactly."""
    table = pair_multiplicities(A, dense_cap=dense_cap)
    return sum(c * c for c in table.counts.values())


def energy_ratio(A: SupportSet, *, dense_cap: int | None = None) -> Fraction:
    """E2(A, A) / |A|^2 as an exact rational.

    This is the value of the quartic form at the uniform unit vector on
    A, hence a certified lower bound for the maximum.
    """
    size = len(A)
    if size == 0:
        raise ValueError("energy ratio undefined for the empty set")
    return Fraction(additive_energy(A, dense_cap=dense_cap), size * size)


def sumset(B: SupportSet, C: SupportSet) -> SupportSet:
    """B + C = {b ^ c}, with |B + C| >= max(|B|, |C|) when both non-empty."""
    if B.n != C.n:
        raise DimensionMismatchError(
            f"sumset needs equal dimensions, got {B.n} and {C.n}"
        )
    if len(B) == 0 or len(C) == 0:
        return SupportSet(B.n, ())
    if len(B) * len(C) > PAIR_ENUMERATION_LIMIT:
        raise ResourceLimitError(
            f"sumset enumeration of {len(B)}x{len(C)} pairs exceeds the cap"
        )
    xors = np.unique(B.masks_array()[:, None] ^ C.masks_array()[None, :])
    return SupportSet(B.n, tuple(int(x) for x in xors))


@dataclass(frozen=True)
class HereditaryResult:
    """Best subset found for the hereditary energy maximum.

    ``exact`` records whether every non-empty subset was visited; when
    False the ratio is only a certified lower bound for the maximum.
    """

    best: SupportSet
    ratio: Fraction
    exact: bool

    def __post_init__(self) -> None:
        if len(self.best) == 0:
            raise ValueError("hereditary result needs a non-empty subset")


def _energy_of_masks(masks: tuple[int, ...]) -> int:
    table = _pairs_table(masks)
    return sum(c * c for c in table.values())


def _exhaustive_hereditary(masks: tuple[int, ...]) -> tuple[tuple[int, ...], Fraction]:
    """Visit all non-empty subsets in Gray-code order with O(|B|) updates.

    Flipping one element in or out changes |M_x| only at the |B| points
    x = a ^ b, so the energy is maintained incrementally; the whole walk
    costs about 2^|A| * |A| / 2 integer operations.

    Ties prefer the smaller subset, then the lexicographically smaller
    mask tuple.
    """
    m = len(masks)
    counts: dict[int, int] = {}
    current: set[int] = set()
    energy = 0
    best_energy, best_size, best_set = 0, 0, ()
    for code in range(1, 1 << m):
        j = (code & -code).bit_length() - 1
        a = masks[j]
        if a in current:
            current.remove(a)
            for b in current:
                x = a ^ b
                counts[x] -= 2
                energy -= 4 * counts[x] + 4
            counts[0] -= 1
            energy -= 2 * counts[0] + 1
        else:
            for b in current:
                x = a ^ b
                energy += 4 * counts.get(x, 0) + 4
                counts[x] = counts.get(x, 0) + 2
            energy += 2 * counts.get(0, 0) + 1
            counts[0] = counts.get(0, 0) + 1
            current.add(a)
        size = len(current)
        if size == 0:
            continue
        if best_size == 0:
            best_energy, best_size, best_set = energy, size, tuple(sorted(current))
            continue
        # compare energy/size^2 against the incumbent without Fractions
        left = energy * best_size * best_size
        right = best_energy * size * size
        if left > right:
            best_energy, best_size, best_set = energy, size, tuple(sorted(current))
        elif left == right:
            cand = tuple(sorted(current))
            if size < best_size or (size == best_size and cand < best_set):
                best_energy, best_size, best_set = energy, size, cand
    return best_set, Fraction(best_energy, best_size * best_size)


def _greedy_hereditary(masks: tuple[int, ...]) -> tuple[tuple[int, ...], Fraction]:
    """Peel off one element at a time, keeping whichever removal helps most."""
    current = list(masks)
    table = _pairs_table(current)
    energy = sum(c * c for c in table.values())
    best_set = tuple(current)
    best_ratio = Fraction(energy, len(current) ** 2)
    while len(current) > 1:
        size = len(current)
        pick, pick_energy, pick_ratio = None, None, None
        for i, a in enumerate(current):
            drops: dict[int, int] = {}
            for b in current:
                if b != a:
                    x = a ^ b
                    drops[x] = drops.get(x, 0) + 2
            delta = table[0] ** 2 - (table[0] - 1) ** 2
            for x, d in drops.items():
                delta += table[x] ** 2 - (table[x] - d) ** 2
            cand_energy = energy - delta
            cand_ratio = Fraction(cand_energy, (size - 1) ** 2)
            if pick_ratio is None or cand_ratio > pick_ratio:
                pick, pick_energy, pick_ratio = i, cand_energy, cand_ratio
        del current[pick]
        table = _pairs_table(current)
        energy = pick_energy
        assert energy == sum(c * c for c in table.values())
        if pick_ratio > best_ratio:
            best_ratio = pick_ratio
            best_set = tuple(current)
    return best_set, best_ratio


def hereditary_energy(
    A: SupportSet,
    *,
    exact_limit: int = 20,
    certificate: SpectrumVector | None = None,
) -> HereditaryResult:
    """max over non-empty B subset of A of E2(B, B) / |B|^2.

    Exhaustive (and exact) when |A| <= exact_limit.  Above the limit a
    heuristic search is run instead: the full set, a greedy
    element-removal sweep, and, when a certificate vector on A is
    supplied, its dyadic level sets.  The heuristic answer is a
    certified lower bound with ``exact=False``.
    """
    if len(A) == 0:
        raise ValueError("hereditary energy undefined for the empty set")
    if certificate is not None and certificate.support.elements != A.elements:
        raise ValueError("certificate support does not match the set")
    if len(A) <= exact_limit:
        masks, ratio = _exhaustive_hereditary(A.elements)
        return HereditaryResult(SupportSet(A.n, masks), ratio, exact=True)

    candidates: list[tuple[int, ...]] = [A.elements]
    if certificate is not None and certificate.norm_squared() > 0.0:
        decomposition = dyadic_level_sets(
            SpectrumVector(
                certificate.support, np.abs(certificate.coords)
            ).normalize()
        )
        for _, level in decomposition.levels:
            candidates.append(level.elements)
        if len(decomposition.tail):
            candidates.append(decomposition.tail.elements)
    if len(A) <= GREEDY_LIMIT:
        best_set, best_ratio = _greedy_hereditary(A.elements)
    else:
        best_set = A.elements
        best_ratio = Fraction(_energy_of_masks(best_set), len(best_set) ** 2)
    for cand in candidates:
        ratio = Fraction(_energy_of_masks(cand), len(cand) ** 2)
        if ratio > best_ratio or (
            ratio == best_ratio
            and (len(cand), cand) < (len(best_set), best_set)
        ):
            best_set, best_ratio = cand, ratio
    return HereditaryResult(SupportSet(A.n, best_set), best_ratio, exact=False)


@dataclass(frozen=True)
class LevelSetDecomposition:
    """Dyadic slices of a normalized non-negative spectrum vector.

    Level i (1-based) holds the coordinates with 2^-i < y_a <= 2^-(i-1);
    levels run up to the cutoff N = ceil(log2 |A| / 2) + 2 and whatever
    remains in (0, 2^-N] lands in the tail.  Coordinates equal to zero
    belong to no slice.
    """

    levels: tuple[tuple[int, SupportSet], ...]
    cutoff: int
    tail: SupportSet


def dyadic_level_sets(y: SpectrumVector) -> LevelSetDecomposition:
    """Split the support of y by dyadic coefficient size.

    Requires y normalized with non-negative coordinates (the standard
    reduction before level-set arguments); note a normalized vector
    always has every y_a <= 1, so level indices start at 1.
    """
    if not y.normalized:
        raise ValueError("level sets need a vector flagged normalized")
    if np.any(y.coords < 0.0):
        raise ValueError("level sets need non-negative coordinates")
    size = len(y.support)
    cutoff = math.ceil(math.log2(size) / 2) + 2 if size > 1 else 2
    buckets: dict[int, list[int]] = {}
    tail: list[int] = []
    for mask, value in zip(y.support.elements, y.coords):
        if value == 0.0:
            continue
        mantissa, exponent = math.frexp(value)
        level = (1 - exponent) if mantissa > 0.5 else (2 - exponent)
        if level <= cutoff:
            buckets.setdefault(level, []).append(mask)
        else:
            tail.append(mask)
    n = y.support.n
    levels = tuple(
        (i, SupportSet(n, tuple(buckets[i]))) for i in sorted(buckets)
    )
    return LevelSetDecomposition(levels, cutoff, SupportSet(n, tuple(tail)))
