"""Random SWAP-test purification: exact chain, bounds and small-n simulation.

Spins are passed as ``two_j = 2j`` integers throughout.
"""

from fractions import Fraction

from . import _swapschur
from ._swapschur import *  # noqa: F401,F403
from ._swapschur import NotPermutationInvariant, __version__

__all__ = [name for name in dir(_swapschur) if not name.startswith("_")] + [
    "detect_prob",
    "p_star",
]


def detect_prob(two_j_prime: int, two_j: int) -> Fraction:
    """Exact singlet-detection probability e_{j'}(j)."""
    return Fraction(*_swapschur.detect_prob_exact(two_j_prime, two_j))


def p_star(n: int, two_j: int) -> Fraction:
    """Smallest escape rate of the chain started in sector j."""
    return Fraction(*_swapschur.p_star_exact(n, two_j))
