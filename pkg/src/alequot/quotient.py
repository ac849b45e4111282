"""Cyclic quotient singularities 1/r(1, a_2, ..., a_n) and their toric data.

The group mu_r acts on C^n by (z_1, ..., z_n) -> (xi z_1, xi^{a_2} z_2, ...,
xi^{a_n} z_n) with xi = exp(2 pi i / r).  As a toric variety the quotient is
the affine chart of the single simplicial cone

    sigma = cone(v, e_2, ..., e_n),   v = (r, r - a_2, ..., r - a_n),

inside Z^n.  The rational vector gamma with <g, gamma> = 1 for every generator
g of sigma packages the canonical class: any interior primitive ray w of a
subdivision picks up the cone angle parameter beta = <w, gamma>, and the
discrepancy of the corresponding exceptional divisor is beta - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .lattice import LatticeCone, RatVec, unit_vector


@dataclass(frozen=True)
class CyclicQuotient:
    """The singularity 1/r(1, a_2, ..., a_n); the first weight 1 is implicit.

    A group element acts freely on the unit sphere iff every weight is a unit
    mod r, so the constructor insists on gcd(a_i, r) = 1.  Inputs with a
    different first weight must be normalized by the caller (multiply all
    weights by the inverse of a_1 mod r).
    """

    r: int
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if not isinstance(self.r, int) or self.r < 2:
            raise ValueError(f"group order must be an integer >= 2, got {self.r!r}")
        if len(self.weights) < 1:
            raise ValueError("need at least one weight (dimension >= 2)")
        for a in self.weights:
            if not isinstance(a, int) or not (1 <= a <= self.r - 1):
                raise ValueError(f"weight {a!r} out of range [1, {self.r - 1}]")
            if gcd(a, self.r) != 1:
                raise ValueError(f"weight {a} shares a factor with r = {self.r}: action is not free")

    @property
    def dim(self) -> int:
        return 1 + len(self.weights)


@dataclass(frozen=True)
class SingularityData:
    """Derived toric package of a cyclic quotient: cone, gamma, index, density."""

    quotient: CyclicQuotient
    sigma: LatticeCone
    gamma: RatVec
    gorenstein_index: int
    volume_density: Fraction


def sigma_cone(q: CyclicQuotient) -> LatticeCone:
    """The presenting cone <v, e_2, ..., e_n> with v = (r, r-a_2, ..., r-a_n)."""
    n = q.dim
    v = (q.r,) + tuple(q.r - a for a in q.weights)
    gens = (v,) + tuple(unit_vector(i, n) for i in range(1, n))
    return LatticeCone(gens)


def gamma(q: CyclicQuotient) -> RatVec:
    """The unique rational vector pairing to 1 with every generator of sigma.

    Computed by the closed formula ((1 + sum(a_i - r))/r, 1, ..., 1) and then
    re-verified against the defining pairing property, so a transcription
    slip in either route cannot pass silently.
    """
    n = q.dim
    first = Fraction(1 + sum(a - q.r for a in q.weights), q.r)
    g = (first,) + (Fraction(1),) * (n - 1)
    for generator in sigma_cone(q).generators:
        pairing = sum(Fraction(c) * gc for c, gc in zip(generator, g))
        if pairing != 1:
            raise AssertionError(
                f"gamma self-check failed: <{generator}, gamma> = {pairing} != 1"
            )
    return g


def gorenstein_index(q: CyclicQuotient) -> int:
    """Smallest l >= 1 such that l * gamma is integral (lcm of denominators)."""
    return lcm(*(entry.denominator for entry in gamma(q)))


def volume_density(q: CyclicQuotient) -> Fraction:
    """Volume ratio of the link S^{2n-1}/mu_r to the round sphere: exactly 1/r."""
    return Fraction(1, q.r)


def singularity_data(q: CyclicQuotient) -> SingularityData:
    return SingularityData(
        quotient=q,
        sigma=sigma_cone(q),
        gamma=gamma(q),
        gorenstein_index=gorenstein_index(q),
        volume_density=volume_density(q),
    )
