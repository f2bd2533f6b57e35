"""Dense functions and Walsh spectra on the Boolean cube {0,1}^n.

Conventions used by every module in this package:

* A point of {0,1}^n is stored as the integer whose bit i holds
  coordinate i+1, and dense arrays over the cube are indexed by that
  integer.  Point addition is bitwise XOR.
* Characters are W_a(x) = (-1)^<a,x> with <a,x> counting shared bits.
* The analysis transform carries the 2^-n factor,

      fhat(a) = 2^-n * sum_x f(x) (-1)^<a,x>,

  so coefficients are averages and Parseval reads
  sum_a fhat(a)^2 = E f^2 with E the average over the cube.
  Synthesis carries no factor:  f(x) = sum_a fhat(a) (-1)^<a,x>.

Dense work refuses dimensions above a configurable cap (default 24,
sixteen million cells) instead of degrading silently; see
:class:`~cubequartic.errors.ResourceLimitError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    ResourceLimitError,
    UndefinedRatioError,
)

DEFAULT_DENSE_CAP = 24

__all__ = [
    "DEFAULT_DENSE_CAP",
    "CubePoint",
    "SupportSet",
    "CubeFunction",
    "Spectrum",
    "SpectrumVector",
    "Moments",
    "walsh_transform",
    "walsh_transform_reference",
    "analyze",
    "synthesize",
    "moments",
    "support_of",
]


def _require_dense(n: int, dense_cap: int | None) -> None:
    cap = DEFAULT_DENSE_CAP if dense_cap is None else dense_cap
    if n > cap:
        raise ResourceLimitError(
            f"dense cube of dimension {n} exceeds the cap of {cap}; "
            f"raise dense_cap to force the dense path"
        )


def _check_dimension(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"dimension must be a non-negative integer, got {n!r}")


@dataclass(frozen=True)
class CubePoint:
    """A point of {0,1}^n, stored as the bitmask integer ``mask``."""

    n: int
    mask: int

    def __post_init__(self) -> None:
        _check_dimension(self.n)
        if not 0 <= self.mask < (1 << self.n):
            raise ValueError(f"mask {self.mask} out of range for n={self.n}")

    @property
    def weight(self) -> int:
        """Hamming weight (number of ones)."""
        return self.mask.bit_count()

    def __xor__(self, other: "CubePoint") -> "CubePoint":
        if self.n != other.n:
            raise DimensionMismatchError(
                f"cannot add points of dimension {self.n} and {other.n}"
            )
        return CubePoint(self.n, self.mask ^ other.mask)

    def bits(self) -> tuple[int, ...]:
        """Coordinates as a tuple, coordinate i+1 = bit i of the mask."""
        return tuple((self.mask >> i) & 1 for i in range(self.n))


@dataclass(frozen=True)
class SupportSet:
    """A subset of {0,1}^n given as a sorted tuple of bitmasks.

    Construct through :meth:`from_masks` (which sorts and rejects
    duplicates) or one of the named families below.
    """

    n: int
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_dimension(self.n)
        prev = -1
        for m in self.elements:
            if not 0 <= m < (1 << self.n):
                raise ValueError(f"mask {m} out of range for n={self.n}")
            if m <= prev:
                raise ValueError("elements must be strictly increasing")
            prev = m

    @classmethod
    def from_masks(cls, n: int, masks: Sequence[int]) -> "SupportSet":
        unique = sorted(set(int(m) for m in masks))
        if len(unique) != len(masks):
            raise ValueError("duplicate masks in support set")
        return cls(n, tuple(unique))

    @classmethod
    def sphere(cls, n: int, k: int) -> "SupportSet":
        """All points of Hamming weight exactly k."""
        if not 0 <= k <= n:
            raise ValueError(f"weight {k} out of range for n={n}")
        return cls(n, tuple(x for x in range(1 << n) if x.bit_count() == k))

    @classmethod
    def ball(cls, n: int, k: int) -> "SupportSet":
        """All points of Hamming weight at most k."""
        if not 0 <= k <= n:
            raise ValueError(f"weight {k} out of range for n={n}")
        return cls(n, tuple(x for x in range(1 << n) if x.bit_count() <= k))

    @classmethod
    def span(cls, n: int, generators: Sequence[int]) -> "SupportSet":
        """XOR span of the generators (a linear subspace, 0 included)."""
        members = {0}
        for g in generators:
            if not 0 <= g < (1 << n):
                raise ValueError(f"generator {g} out of range for n={n}")
            members |= {m ^ g for m in members}
        return cls(n, tuple(sorted(members)))

    @classmethod
    def full(cls, n: int, dense_cap: int | None = None) -> "SupportSet":
        _require_dense(n, dense_cap)
        return cls(n, tuple(range(1 << n)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, mask: int) -> bool:
        i = np.searchsorted(np.asarray(self.elements), mask)
        return i < len(self.elements) and self.elements[i] == mask

    def masks_array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=np.int64)

    def points(self) -> Iterator[CubePoint]:
        return (CubePoint(self.n, m) for m in self.elements)

    def weights(self) -> tuple[int, ...]:
        return tuple(m.bit_count() for m in self.elements)

    def sphere_radius(self) -> int | None:
        """k if this set is the full weight-k sphere, else None."""
        if not self.elements:
            return None
        k = self.elements[0].bit_count()
        if any(m.bit_count() != k for m in self.elements):
            return None
        if len(self.elements) != math.comb(self.n, k):
            return None
        return k

    def indicator(self, dense_cap: int | None = None) -> "CubeFunction":
        """Dense 0/1 indicator of the set."""
        _require_dense(self.n, dense_cap)
        values = np.zeros(1 << self.n)
        values[list(self.elements)] = 1.0
        return CubeFunction(self.n, values)


def _as_dense(n: int, values: np.ndarray | Sequence[float]) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 1 or arr.shape[0] != (1 << n):
        raise ValueError(
            f"expected a flat array of length 2^{n}={1 << n}, got shape {arr.shape}"
        )
    return arr


@dataclass
class CubeFunction:
    """A real-valued function on {0,1}^n, dense, indexed by bitmask.

    The constructor copies its input, so the function owns its storage.
    """

    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        _check_dimension(self.n)
        self.values = _as_dense(self.n, self.values)

    def copy(self) -> "CubeFunction":
        return CubeFunction(self.n, self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CubeFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)


@dataclass
class Spectrum:
    """Dense Walsh coefficients fhat(a), indexed by the character mask a."""

    n: int
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        _check_dimension(self.n)
        self.coefficients = _as_dense(self.n, self.coefficients)

    def copy(self) -> "Spectrum":
        return Spectrum(self.n, self.coefficients)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.n == other.n and np.array_equal(
            self.coefficients, other.coefficients
        )


@dataclass
class SpectrumVector:
    """Walsh coefficients restricted to a support set.

    ``coords[i]`` is the coefficient of the character indexed by
    ``support.elements[i]``.  This is the sparse object the quartic
    optimiser works with; it never needs a dense array until a cube
    function is requested.
    """

    support: SupportSet
    coords: np.ndarray
    normalized: bool = field(default=False)

    NORM_TOL = 1e-12

    def __post_init__(self) -> None:
        self.coords = np.array(self.coords, dtype=np.float64, copy=True)
        if self.coords.ndim != 1 or self.coords.shape[0] != len(self.support):
            raise ValueError(
                f"coords shape {self.coords.shape} does not match support "
                f"of size {len(self.support)}"
            )
        if self.normalized and abs(self.norm_squared() - 1.0) > self.NORM_TOL:
            raise ValueError(
                f"vector flagged normalized but sum of squares is "
                f"{self.norm_squared()!r}"
            )

    @classmethod
    def uniform(cls, support: SupportSet) -> "SpectrumVector":
        """The constant unit vector 1/sqrt(|A|) on the support."""
        size = len(support)
        if size == 0:
            raise ValueError("cannot build the uniform vector on an empty set")
        return cls(support, np.full(size, 1.0 / math.sqrt(size)), normalized=True)

    def norm_squared(self) -> float:
        return float(np.dot(self.coords, self.coords))

    def normalize(self) -> "SpectrumVector":
        """Rescale to the unit sphere; error on the zero vector."""
        norm = math.sqrt(self.norm_squared())
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        coords = self.coords / norm
        # guard against representable-norm rounding right at the tolerance
        coords /= math.sqrt(float(np.dot(coords, coords)))
        return SpectrumVector(self.support, coords, normalized=True)

    def to_spectrum(self, dense_cap: int | None = None) -> Spectrum:
        _require_dense(self.support.n, dense_cap)
        dense = np.zeros(1 << self.support.n)
        dense[self.support.masks_array()] = self.coords
        return Spectrum(self.support.n, dense)

    def to_function(self, dense_cap: int | None = None) -> CubeFunction:
        """Synthesize the cube function with these coefficients."""
        return synthesize(self.to_spectrum(dense_cap), dense_cap=dense_cap)


def walsh_transform(values: np.ndarray) -> np.ndarray:
    """Unnormalised in-place Walsh-Hadamard transform, O(n 2^n).

    Works on any numeric dtype (integer arrays stay integer, which the
    exact convolution path relies on).  The input array is modified and
    also returned.  Applying it twice multiplies by 2^n.
    """
    size = values.shape[0]
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    h = 1
    while h < size:
        view = values.reshape(-1, 2, h)
        top = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] = top - view[:, 1, :]
        h *= 2
    return values


def walsh_transform_reference(values: np.ndarray) -> np.ndarray:
    """Literal O(4^n) character sum, kept only as a slow cross-check.

    Refuses n > 12 because the quadratic blow-up serves no purpose
    beyond oracle duty.
    """
    size = len(values)
    n = size.bit_length() - 1
    if size != (1 << n):
        raise ValueError(f"length {size} is not a power of two")
    if n > 12:
        raise ResourceLimitError("reference transform capped at n=12")
    out = np.zeros(size, dtype=np.asarray(values).dtype)
    for a in range(size):
        acc = 0
        for x in range(size):
            sign = -1 if (a & x).bit_count() & 1 else 1
            acc = acc + sign * values[x]
        out[a] = acc
    return out


def analyze(f: CubeFunction, *, dense_cap: int | None = None) -> Spectrum:
    """Walsh coefficients of f, with the averaging 2^-n factor."""
    _require_dense(f.n, dense_cap)
    work = f.values.copy()
    walsh_transform(work)
    work /= float(1 << f.n)
    return Spectrum(f.n, work)


def synthesize(spec: Spectrum, *, dense_cap: int | None = None) -> CubeFunction:
    """Evaluate sum_a fhat(a) W_a pointwise; exact inverse of analyze."""
    _require_dense(spec.n, dense_cap)
    work = spec.coefficients.copy()
    walsh_transform(work)
    return CubeFunction(spec.n, work)


@dataclass(frozen=True)
class Moments:
    """Second and fourth moments under the uniform measure."""

    second: float
    fourth: float

    def ratio(self) -> float:
        """fourth / second^2, the quantity the whole package is about."""
        if self.second <= 0.0:
            raise UndefinedRatioError(
                "moment ratio undefined for the zero function"
            )
        return self.fourth / (self.second * self.second)


def moments(f: CubeFunction) -> Moments:
    """E f^2 and E f^4 over the uniform measure on the cube."""
    sq = f.values * f.values
    scale = 1.0 / (1 << f.n)
    return Moments(
        second=float(np.sum(sq) * scale),
        fourth=float(np.sum(sq * sq) * scale),
    )


def support_of(obj: CubeFunction | Spectrum, tol: float = 0.0) -> SupportSet:
    """Indices where |value| > tol, as a SupportSet.

    Accepts either a cube function (support in point space) or a
    spectrum (support in character space); both are dense arrays over
    the same index range, so one helper serves both.
    """
    if isinstance(obj, CubeFunction):
        arr, n = obj.values, obj.n
    elif isinstance(obj, Spectrum):
        arr, n = obj.coefficients, obj.n
    else:
        raise TypeError(f"expected CubeFunction or Spectrum, got {type(obj)!r}")
    if tol < 0.0:
        raise ValueError("tolerance must be non-negative")
    idx = np.nonzero(np.abs(arr) > tol)[0]
    return SupportSet(n, tuple(int(i) for i in idx))
