"""Collision-probability and key-space size figures for hash/key audits."""

from __future__ import annotations


def collision_probability(n: int, d: int) -> float:
    """P(at least one collision among n draws from a domain of size d).

    Exact product formula 1 - prod_{k=0}^{n-1} (1 - k/d), evaluated in
    floating point.  For n > d the pigeonhole principle forces 1.0.
    """
    if n < 0:
        raise ValueError("draw count must be nonnegative")
    if d < 1:
        raise ValueError("domain size must be positive")
    if n > d:
        return 1.0
    prod = 1.0
    for k in range(n):
        prod *= 1.0 - k / d
    return 1.0 - prod


def smallest_majority_collision_count(d: int) -> int:
    """Smallest n with collision probability strictly above one half."""
    n = 0
    prod = 1.0
    while prod > 0.5:
        n += 1
        if n > d:
            return n
        prod *= 1.0 - (n - 1) / d
    return n


def key_space_size(bits: int) -> int:
    """2**bits, exact (arbitrary precision)."""
    if bits < 0:
        raise ValueError("bit length must be nonnegative")
    return 1 << bits
