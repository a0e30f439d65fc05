"""Exact full-statevector simulator: the ground truth for the other engines.

Amplitudes are exact scalars, so two engines agreeing here agree as rational
identities, not to a tolerance.  Width is capped (default 14, override with
the PBLOCK_DENSE_CAP environment variable) because the point of this module
is oracle duty, not scale.
"""

from __future__ import annotations

import os
from itertools import combinations

from .exact import ExactScalar, ZERO, ONE
from .circuits import Circuit, CircuitStep
from .sampling import OutcomeDistribution

DEFAULT_WIDTH_CAP = 14


class WidthCapExceeded(ValueError):
    pass


def _width_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get("PBLOCK_DENSE_CAP", DEFAULT_WIDTH_CAP))


class StateVector:
    __slots__ = ("width", "amps")

    def __init__(self, width: int, amps: list[ExactScalar]):
        if len(amps) != 1 << width:
            raise ValueError("amplitude count must be 2^width")
        self.width = width
        self.amps = amps

    @classmethod
    def from_bits(cls, bits: str) -> "StateVector":
        width = len(bits)
        amps = [ZERO] * (1 << width)
        amps[int(bits, 2)] = ONE
        return cls(width, amps)

    @classmethod
    def from_support(cls, width: int, support, amplitude: ExactScalar
                     ) -> "StateVector":
        amps = [ZERO] * (1 << width)
        for idx in support:
            amps[idx] = amplitude
        return cls(width, amps)

    def norm_squared(self) -> ExactScalar:
        acc = ZERO
        for a in self.amps:
            if not a.is_zero():
                acc = acc + a.abs_squared()
        return acc

    def is_normalized(self) -> bool:
        return self.norm_squared() == ONE

    def nonzeros(self) -> dict[int, ExactScalar]:
        return {i: a for i, a in enumerate(self.amps) if not a.is_zero()}

    def bit_mask(self, qubit: int) -> int:
        """Index bit carrying `qubit` (qubit 0 is the most significant)."""
        return 1 << (self.width - 1 - qubit)


def dense_apply(state: StateVector, step: CircuitStep) -> StateVector:
    """Exact amplitude update for a 1- or 2-qubit gate at any positions."""
    width = state.width
    size = 1 << width
    amps = state.amps
    rows = step.gate.nonzero_rows()
    out = [ZERO] * size
    if step.gate.arity == 1:
        (q,) = step.targets
        mb = state.bit_mask(q)
        for i in range(size):
            if i & mb:
                continue
            a0, a1 = amps[i], amps[i | mb]
            if a0.is_zero() and a1.is_zero():
                continue
            pair = (a0, a1)
            for r, cols in enumerate(rows):
                acc = ZERO
                for col, coeff in cols:
                    v = pair[col]
                    if not v.is_zero():
                        acc = acc + coeff * v
                out[i | (mb if r else 0)] = acc
    else:
        qa, qb = step.targets
        ma, mbm = state.bit_mask(qa), state.bit_mask(qb)
        both = ma | mbm
        offsets = (0, mbm, ma, both)
        for i in range(size):
            if i & both:
                continue
            quad = (amps[i], amps[i | mbm], amps[i | ma], amps[i | both])
            if all(v.is_zero() for v in quad):
                continue
            for r, cols in enumerate(rows):
                acc = ZERO
                for col, coeff in cols:
                    v = quad[col]
                    if not v.is_zero():
                        acc = acc + coeff * v
                out[i | offsets[r]] = acc
    return StateVector(width, out)


def dense_run(circuit: Circuit, cap: int | None = None) -> StateVector:
    cap = _width_cap(cap)
    if circuit.width > cap:
        raise WidthCapExceeded(
            f"width {circuit.width} exceeds dense cap {cap}")
    if circuit.input_blocks:
        raise ValueError("dense statevector engine cannot take mixed inputs")
    state = StateVector.from_bits(circuit.input_bits)
    for step in circuit.steps:
        state = dense_apply(state, step)
    return state


def dense_marginal(state: StateVector, qubit: int) -> OutcomeDistribution:
    """Exact {p0, p1} for a computational-basis measurement of one qubit."""
    if not 0 <= qubit < state.width:
        raise ValueError(f"qubit {qubit} out of range")
    mb = state.bit_mask(qubit)
    p0 = ZERO
    p1 = ZERO
    for i, a in enumerate(state.amps):
        if a.is_zero():
            continue
        if i & mb:
            p1 = p1 + a.abs_squared()
        else:
            p0 = p0 + a.abs_squared()
    return OutcomeDistribution(p0, p1)


# -- blockedness decision for pure states ---
#
# A pure state factors over a partition exactly when every part's reduced
# state is pure, and the finest such partition is unique (group qubits by
# the irreducible tensor factor they belong to).  The factor containing the
# lowest unassigned qubit is the smallest subset containing it whose
# amplitude matrix has rank one, so the search peels factors off one at a
# time, trying subsets in ascending size and lexicographic order.

def _rank_one_rows(nonzeros: dict[int, ExactScalar], part_mask: int,
                   rest_mask: int):
    """If amplitudes split as (part) x (rest), return (part_factor, remainder);
    otherwise None.  Dict keys keep their original index bits."""
    rows: dict[int, dict[int, ExactScalar]] = {}
    for idx, amp in nonzeros.items():
        rows.setdefault(idx & part_mask, {})[idx & rest_mask] = amp
    row_keys = sorted(rows)
    b0 = row_keys[0]
    row0 = rows[b0]
    cols0 = sorted(row0)
    j0 = cols0[0]
    a00 = row0[j0]
    for rb in row_keys[1:]:
        row = rows[rb]
        if len(row) != len(row0):
            return None
        lead = row.get(j0)
        if lead is None:
            return None
        for j, v in row.items():
            ref = row0.get(j)
            if ref is None or v * a00 != ref * lead:
                return None
    factor = {rb: rows[rb][j0] for rb in row_keys}
    return factor, dict(row0), a00


def _finest_pure_factors(nonzeros: dict[int, ExactScalar], qubits: list[int],
                         mask_of, max_part: int):
    """Peel irreducible factors (each of size <= max_part) off a pure state.

    Returns a list of (labels, factor_amps, norm_scalar) or None when some
    irreducible factor exceeds max_part."""
    remaining = sorted(qubits)
    current = nonzeros
    factors = []
    while remaining:
        if len(remaining) == 1:
            q = remaining[0]
            factors.append(((q,), {k & mask_of(q): v
                                   for k, v in current.items()}, None))
            break
        head, rest = remaining[0], remaining[1:]
        found = None
        limit = min(max_part, len(remaining))
        for size in range(1, limit + 1):
            if len(remaining) == size:
                candidates = [tuple(rest)]
            else:
                candidates = combinations(rest, size - 1)
            for extra in candidates:
                part = (head,) + tuple(extra)
                part_mask = 0
                for q in part:
                    part_mask |= mask_of(q)
                rest_mask = 0
                for q in remaining:
                    if q not in part:
                        rest_mask |= mask_of(q)
                if rest_mask == 0:
                    # the whole remainder is one factor
                    found = (part, {k & part_mask: v
                                    for k, v in current.items()}, None, None)
                    break
                split = _rank_one_rows(current, part_mask, rest_mask)
                if split is not None:
                    factor, remainder, norm = split
                    found = (part, factor, remainder, norm)
                    break
            if found:
                break
        if not found:
            return None
        if len(found[0]) == len(remaining):
            factors.append((found[0], found[1], None))
            break
        part, factor, remainder, norm = found
        factors.append((tuple(sorted(part)), factor, norm))
        remaining = [q for q in remaining if q not in part]
        current = remainder
    return factors


def dense_blockedness(state: StateVector, p: int, cap: int | None = None):
    """Finest partition (parts <= p) over which the state factors exactly,
    or None when the state is not p-blocked."""
    cap = _width_cap(cap)
    if state.width > cap:
        raise WidthCapExceeded(
            f"width {state.width} exceeds dense cap {cap}")
    nonzeros = state.nonzeros()
    if not nonzeros:
        raise ValueError("zero state has no blockedness")
    factors = _finest_pure_factors(
        nonzeros, list(range(state.width)), state.bit_mask, p)
    if factors is None:
        return None
    parts = sorted(labels for labels, _, _ in factors)
    _self_check_product(nonzeros, factors, state.bit_mask)
    return parts


def _self_check_product(nonzeros, factors, mask_of):
    """Assert the peeled factors reproduce every amplitude exactly."""
    support = 1
    for _, factor, _ in factors:
        support *= len(factor)
    assert support == len(nonzeros), "factor support mismatch"
    norm = ONE
    for _, _, scale in factors:
        if scale is not None:
            norm = norm * scale
    for idx, amp in nonzeros.items():
        prod = ONE
        for labels, factor, _ in factors:
            pm = 0
            for q in labels:
                pm |= mask_of(q)
            prod = prod * factor[idx & pm]
        assert prod == amp * norm, "factor product mismatch"
