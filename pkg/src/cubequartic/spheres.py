"""Exact correlation tables for Hamming spheres.

For the radius-k sphere in {0,1}^n, every XOR of two sphere points has
even weight 2t, and the normalised pair-correlation mass at weight 2t is

    s_t(n, k) = C(n, 2t) * (C(2t, t) * C(n-2t, k-t))^2 / C(n, k)^2 .

Their total r(n, k) = sum_t s_t equals the additive energy of the
sphere divided by its squared size, which is the value of the quartic
form at the uniform unit vector.  Everything in this module is exact
big-rational arithmetic except the two stated float roots t1, t2 and
the deliberately-float small-k estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "SphereParams",
    "SphereTableRow",
    "s_t_exact",
    "r_exact",
    "ratio_st",
    "t1",
    "t2",
    "argmax_st",
    "sphere_sum_bound",
    "small_k_lower",
    "sphere_table",
]


@dataclass(frozen=True)
class SphereParams:
    """Dimension n >= 1 and radius k of a Hamming sphere, 0 <= k <= n."""

    n: int
    k: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and isinstance(self.k, int)):
            raise TypeError("sphere parameters must be integers")
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise ValueError(f"invalid sphere parameters n={self.n}, k={self.k}")

    @property
    def size(self) -> int:
        return math.comb(self.n, self.k)

    def require_lower_half(self) -> None:
        if 2 * self.k > self.n:
            raise ValueError(
                f"this quantity is defined for k <= n/2, got n={self.n}, k={self.k}"
            )


def s_t_exact(p: SphereParams, t: int) -> Fraction:
    """The mass s_t(n, k) for 0 <= t <= k; zero once 2t exceeds n."""
    n, k = p.n, p.k
    if not 0 <= t <= k:
        raise ValueError(f"t={t} outside 0..k={k}")
    if 2 * t > n or k - t > n - 2 * t:
        return Fraction(0)
    inner = math.comb(2 * t, t) * math.comb(n - 2 * t, k - t)
    return Fraction(math.comb(n, 2 * t) * inner * inner, math.comb(n, k) ** 2)


def ratio_st(p: SphereParams, t: int) -> Fraction:
    """s_{t+1} / s_t in closed form,

        s_{t+1}/s_t = 2(2t+1)/(t+1)^3 * (k-t)^2 (n-k-t)^2
                      / ((n-2t)(n-2t-1)) ,

    for 0 <= t <= k-1 with s_t nonzero; the value is 0 exactly when
    s_{t+1} vanishes.
    """
    n, k = p.n, p.k
    if not 0 <= t <= k - 1:
        raise ValueError(f"t={t} outside 0..k-1={k - 1}")
    if 2 * t > n or k - t > n - 2 * t:
        raise ValueError(f"s_{t}({n},{k}) is zero; ratio undefined")
    if 2 * (t + 1) > n:
        return Fraction(0)
    return Fraction(2 * (2 * t + 1), (t + 1) ** 3) * Fraction(
        (k - t) ** 2 * (n - k - t) ** 2, (n - 2 * t) * (n - 2 * t - 1)
    )


def _mass_chain(p: SphereParams) -> list[Fraction]:
    """[s_0, ..., s_{min(k, n-k)}] built by the ratio recurrence from s_0 = 1.

    Every later mass is zero.  Cheaper than evaluating each
    squared-binomial mass independently: only small-denominator
    rationals are multiplied at each step.
    """
    chain = [Fraction(1)]
    for t in range(min(p.k, p.n - p.k)):
        chain.append(chain[-1] * ratio_st(p, t))
    return chain


def r_exact(p: SphereParams) -> Fraction:
    """r(n, k) = sum_t s_t(n, k), exact."""
    if 0 < p.k < p.n:
        return sum(_mass_chain(p), Fraction(0))
    # degenerate spheres are single points: only s_0 = 1 survives
    return Fraction(1)


def t1(p: SphereParams) -> float:
    """Smaller root of 4t^2 - 3nt + 2k(n-k), locating the mass peak:

        t1 = (3n - sqrt(n^2 + 8 (n-2k)^2)) / 8 .

    The discriminant rewrites as 9n^2 - 32k(n-k), so the root is real
    for every 0 <= k <= n; the sphere inequalities quote it for
    k <= n/2, where it lies in [0, k].
    """
    n, k = p.n, p.k
    return (3.0 * n - math.sqrt(float(n * n + 8 * (n - 2 * k) ** 2))) / 8.0


def t2(p: SphereParams) -> float:
    """Larger root of the same quadratic; useful only as a sanity anchor."""
    n, k = p.n, p.k
    return (3.0 * n + math.sqrt(float(n * n + 8 * (n - 2 * k) ** 2))) / 8.0


def argmax_st(p: SphereParams) -> int:
    """The t maximising s_t(n, k); smallest such t on exact ties."""
    if p.k < 1 or p.k > p.n - 1:
        return 0
    chain = _mass_chain(p)
    best_t = 0
    for t, mass in enumerate(chain):
        if mass > chain[best_t]:
            best_t = t
    return best_t


def sphere_sum_bound(k: int) -> int:
    """sum_{t=0}^{k} C(2t, t) C(k, t)^2, an n-free energy-ratio bound.

    Dominates r(n, k) for every n because each distance class
    contributes at most C(2t, t) C(k, t)^2 once normalised.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    return sum(math.comb(2 * t, t) * math.comb(k, t) ** 2 for t in range(k + 1))


def small_k_lower(p: SphereParams) -> float:
    """exp(-2 k^2 / n) * sum_t C(2t,t) C(k,t)^2, a lower estimate for r(n,k).

    Sharp in the regime k = o(sqrt(n)).  Computed through logarithms so
    gigantic sums and tiny exponentials cannot overflow each other.
    """
    total = sphere_sum_bound(p.k)
    return math.exp(math.log(total) - 2.0 * p.k * p.k / p.n)


@dataclass(frozen=True)
class SphereTableRow:
    """One distance class of the sphere correlation table."""

    t: int
    mass: Fraction
    ratio_to_prev: Fraction | None
    cumulative: Fraction

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("distance index must be non-negative")
        if self.mass < 0 or self.cumulative < self.mass:
            raise ValueError("inconsistent table row")


def sphere_table(p: SphereParams) -> list[SphereTableRow]:
    """Rows t = 0 .. k with masses, step ratios and partial sums.

    The final cumulative value is exactly r(n, k); ratio_to_prev on row
    t is s_t/s_{t-1} (None at t = 0 and once s_{t-1} = 0).
    """
    masses = [s_t_exact(p, t) for t in range(p.k + 1)]
    rows: list[SphereTableRow] = []
    running = Fraction(0)
    for t, mass in enumerate(masses):
        running += mass
        ratio = (
            ratio_st(p, t - 1) if t > 0 and masses[t - 1] != 0 else None
        )
        rows.append(SphereTableRow(t, mass, ratio, running))
    return rows
