"""Blockedness analysis of equal-amplitude basis superpositions.

States here are supports: a set of basis integers, all with amplitude
1/sqrt(|support|).  Such a state factors over a partition of bit positions
exactly when the support is the Cartesian product of its bit-projections,
so the decision is pure set combinatorics and scales past any amplitude
representation.  Qubits are labelled by the power of two they carry (bit 0
is the 1s place).

Arithmetic-progression supports {x0 + k*r} are the intermediate states of
period finding; the census measures how rarely they stay p-blocked as the
period grows, which is the analyzer's whole point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .prng import CounterRng


class RangeOverflow(ValueError):
    pass


class BadArgs(ValueError):
    pass


@dataclass(frozen=True)
class BasisSuperposition:
    width: int
    support: tuple[int, ...]

    def __post_init__(self):
        if not self.support:
            raise BadArgs("support must be nonempty")
        if list(self.support) != sorted(set(self.support)):
            raise BadArgs("support must be strictly increasing")
        if self.support[0] < 0 or self.support[-1] >= (1 << self.width):
            raise RangeOverflow(
                f"support exceeds {self.width}-bit range")


def build_ap(x0: int, r: int, count: int, n: int) -> BasisSuperposition:
    """Equal superposition over the progression x0, x0+r, ..., count terms."""
    if r < 1 or count < 1 or x0 < 0:
        raise BadArgs("need r >= 1, count >= 1, x0 >= 0")
    top = x0 + (count - 1) * r
    if top >= (1 << n):
        raise RangeOverflow(
            f"progression reaches {top}, beyond {n}-bit range")
    return BasisSuperposition(n, tuple(x0 + k * r for k in range(count)))


def build_pair(x0: int, x1: int, n: int) -> BasisSuperposition:
    """The two-string superposition (|x0> + |x1>)/sqrt(2)."""
    if x0 == x1:
        raise BadArgs("pair values must differ")
    if not (0 <= x0 < (1 << n) and 0 <= x1 < (1 << n)):
        raise BadArgs(f"pair values must fit in {n} bits")
    return BasisSuperposition(n, tuple(sorted((x0, x1))))


def _projection(support, mask: int) -> frozenset[int]:
    return frozenset(s & mask for s in support)


def _find_factor(support, positions: list[int], max_size: int):
    """Smallest subset (containing the lowest position) whose bit-projection
    splits the support as a Cartesian product; None if all are > max_size."""
    head, rest = positions[0], positions[1:]
    total = len(support)
    limit = min(max_size, len(positions))
    for size in range(1, limit + 1):
        if size == len(positions):
            return tuple(positions)
        for extra in combinations(rest, size - 1):
            part = (head,) + extra
            mask = 0
            for pos in part:
                mask |= 1 << pos
            rest_mask = 0
            for pos in positions:
                if pos not in part:
                    rest_mask |= 1 << pos
            left = _projection(support, mask)
            right = _projection(support, rest_mask)
            if len(left) * len(right) == total:
                return part
    return None


def analyze_blockedness(s: BasisSuperposition, p: int):
    """Finest partition of bit positions (parts <= p) over which the state
    factors, or None when no such partition exists.

    Because projections onto disjoint masks combine freely, the support is a
    product over a bipartition exactly when the projection sizes multiply to
    the support size; peeling minimal factors off gives the unique finest
    partition."""
    if p < 1:
        raise BadArgs("p must be >= 1")
    positions = list(range(s.width))
    support = list(s.support)
    parts = []
    while positions:
        part = _find_factor(support, positions, p)
        if part is None:
            return None
        parts.append(tuple(sorted(part)))
        positions = [q for q in positions if q not in part]
        if positions:
            rest_mask = 0
            for q in positions:
                rest_mask |= 1 << q
            support = sorted(_projection(support, rest_mask))
    parts.sort()
    _self_check_partition(s.support, parts)
    return parts


def _self_check_partition(support, parts) -> None:
    """The product of the projections must rebuild the support exactly."""
    total = 1
    for part in parts:
        mask = 0
        for q in part:
            mask |= 1 << q
        total *= len(_projection(support, mask))
    assert total == len(support), "projection product mismatch"


def format_partition(parts) -> str:
    """Brace groups, positions descending, highest group first: {3,1}{2,0}."""
    ordered = sorted((tuple(sorted(part, reverse=True)) for part in parts),
                     key=lambda part: -part[0])
    return "".join("{" + ",".join(str(q) for q in part) + "}"
                   for part in ordered)


@dataclass(frozen=True)
class CensusResult:
    fraction: float
    blocked: int
    trials: int
    p: int
    r_bits: int
    n: int
    seed: int

    def line(self) -> str:
        return f"fraction={self.fraction:.6f} trials={self.trials} " \
               f"seed={self.seed}"


def census(r_bits: int, trials: int, p: int, n: int, seed: int
           ) -> CensusResult:
    """Fraction of random maximal progressions (period of exactly r_bits
    bits, random phase) that are p-blocked on n qubits."""
    if n < r_bits + 3:
        raise BadArgs("need n >= r_bits + 3 to hold several periods")
    if r_bits < 1:
        raise BadArgs("r_bits must be >= 1")
    rng = CounterRng(seed, tag="ap_census")
    blocked = 0
    for _ in range(trials):
        if r_bits == 1:
            r = 1
        elif r_bits == 2:
            r = 3
        else:
            # odd, top bit set: exactly r_bits bits
            middle = rng.randrange(1 << (r_bits - 2))
            r = (1 << (r_bits - 1)) | (middle << 1) | 1
        x0 = 1 + rng.randrange(r - 1) if r > 1 else 0
        count = ((1 << n) - 1 - x0) // r + 1
        state = build_ap(x0, r, count, n)
        if analyze_blockedness(state, p) is not None:
            blocked += 1
    return CensusResult(blocked / trials, blocked, trials, p, r_bits, n, seed)
