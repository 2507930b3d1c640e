"""SplitMix64 generator used for every seeded sample.

The generator is small enough to port verbatim, so scans run in another
language with the same seed draw the same samples::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all arithmetic modulo 2**64. Bounded integers are drawn as
``lo + next() % (hi - lo + 1)``; the modulo bias is below 1e-16 for the
ranges used here.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import GaussianRational

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Seed for trial ``index`` of a run seeded with ``seed``."""
    return _mix((seed + _GOLDEN * (index + 1)) & _MASK)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return _mix(self.state)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range [lo, hi]."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)

    def uniform(self) -> float:
        """Float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def rational(self, num_bound: int = 100, den_bound: int = 100) -> Fraction:
        return Fraction(self.randint(-num_bound, num_bound), self.randint(1, den_bound))

    def gaussian_rational(self, num_bound: int = 100, den_bound: int = 100) -> GaussianRational:
        re = self.rational(num_bound, den_bound)
        im = self.rational(num_bound, den_bound)
        return GaussianRational(re, im)

    def small_gaussian_rational(self) -> GaussianRational:
        """Gaussian rational with both parts in [-1/2, 1/2] on the 1/100 grid.

        Used for connection coefficients, which enter the monodromy through an
        exponential; larger draws make the monodromy matrices ill-conditioned.
        """
        return GaussianRational(
            Fraction(self.randint(-50, 50), 100), Fraction(self.randint(-50, 50), 100)
        )
