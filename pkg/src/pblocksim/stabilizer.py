"""Stabilizer-tableau engine for Clifford circuits.

A state is the n commuting independent signed Pauli generators that fix it,
stored as X/Z bitmasks plus a power-of-i phase per generator (the value is
i^phase * prod_q X^x_q Z^z_q).  Conjugation by H, S, the Paulis, CNOT, CZ
and SWAP updates masks and phases in O(n) per generator, so circuits far
beyond any amplitude representation run in milliseconds; gates outside that
set leave the stabilizer class and are rejected.  Measurement here is the
end-of-circuit marginal only, computed without collapsing the state.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import ExactScalar
from .circuits import Circuit, CircuitStep, CLIFFORD_GATES
from .sampling import OutcomeDistribution

_HALF = ExactScalar(Fraction(1, 2))
_ONE = ExactScalar(1)
_ZERO = ExactScalar(0)

# re-verify commutation/rank/sign invariants after every update
DEBUG_CHECKS = False


class NonCliffordGate(ValueError):
    def __init__(self, gate_name: str, step_index: int = -1):
        self.gate_name = gate_name
        self.step_index = step_index
        super().__init__(
            f"step {step_index}: gate {gate_name} has no tableau update rule")


class PauliString:
    """Signed Pauli operator: value = i^phase * prod_q X^x Z^z."""

    __slots__ = ("width", "x_mask", "z_mask", "phase")

    def __init__(self, width: int, x_mask: int = 0, z_mask: int = 0,
                 phase: int = 0):
        self.width = width
        self.x_mask = x_mask
        self.z_mask = z_mask
        self.phase = phase & 3

    def mul(self, other: "PauliString") -> "PauliString":
        """Product; reordering Z-then-X contributes (-1)^(z1 & x2) bits."""
        sign_bits = (self.z_mask & other.x_mask).bit_count()
        return PauliString(self.width,
                           self.x_mask ^ other.x_mask,
                           self.z_mask ^ other.z_mask,
                           (self.phase + other.phase + 2 * sign_bits) & 3)

    def commutes(self, other: "PauliString") -> bool:
        anti = (self.x_mask & other.z_mask).bit_count() + \
            (self.z_mask & other.x_mask).bit_count()
        return anti % 2 == 0

    def letter_sign(self) -> int:
        """Sign of the letter form; Y = i*XZ, so each Y absorbs one i.
        +1 or -1 for any Hermitian Pauli string."""
        exp = (self.phase - (self.x_mask & self.z_mask).bit_count()) & 3
        if exp == 0:
            return 1
        if exp == 2:
            return -1
        raise ValueError("generator has an imaginary overall phase")

    def to_text(self) -> str:
        letters = []
        for q in range(self.width):
            bit = 1 << q
            x = bool(self.x_mask & bit)
            z = bool(self.z_mask & bit)
            letters.append("IXZY"[x + 2 * z])
        return ("+" if self.letter_sign() > 0 else "-") + "".join(letters)

    def __repr__(self):
        return f"PauliString({self.to_text()})"


class StabilizerTableau:
    __slots__ = ("width", "generators")

    def __init__(self, width: int, generators: list[PauliString]):
        if len(generators) != width:
            raise ValueError("need exactly n generators for n qubits")
        self.width = width
        self.generators = generators

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.width, list(self.generators))

    def check_invariants(self) -> None:
        gens = self.generators
        for i, g in enumerate(gens):
            g.letter_sign()
            for h in gens[i + 1:]:
                if not g.commutes(h):
                    raise ValueError("generators do not commute")
        rows = [(g.x_mask << self.width) | g.z_mask for g in gens]
        if _gf2_rank(rows) != self.width:
            raise ValueError("generators are not independent")

    def canonical(self) -> "StabilizerTableau":
        """Reduced echelon form over GF(2), pivoting X parts then Z parts;
        row operations multiply generators so signs stay consistent."""
        gens = list(self.generators)
        n = self.width
        row = 0
        for col_kind in ("x", "z"):
            for q in range(n):
                bit = 1 << q
                pivot = None
                for r in range(row, n):
                    mask = gens[r].x_mask if col_kind == "x" else gens[r].z_mask
                    if mask & bit:
                        pivot = r
                        break
                if pivot is None:
                    continue
                gens[row], gens[pivot] = gens[pivot], gens[row]
                for r in range(n):
                    if r == row:
                        continue
                    mask = gens[r].x_mask if col_kind == "x" else gens[r].z_mask
                    if mask & bit:
                        gens[r] = gens[r].mul(gens[row])
                row += 1
        return StabilizerTableau(n, gens)

    def dump(self) -> str:
        return "\n".join(g.to_text() for g in self.canonical().generators)


def tableau_init(width: int, bits: str) -> StabilizerTableau:
    """Basis state |b1...bn>: generators (-1)^b_q Z_q."""
    if len(bits) != width or any(c not in "01" for c in bits):
        raise ValueError("input must be a bitstring of the given width")
    gens = [PauliString(width, 0, 1 << q, 2 if bits[q] == "1" else 0)
            for q in range(width)]
    return StabilizerTableau(width, gens)


def _apply_h(g: PauliString, bit: int) -> PauliString:
    x, z = bool(g.x_mask & bit), bool(g.z_mask & bit)
    phase = (g.phase + (2 if x and z else 0)) & 3
    xm = g.x_mask
    zm = g.z_mask
    if x != z:
        xm ^= bit
        zm ^= bit
    return PauliString(g.width, xm, zm, phase)


def _apply_s(g: PauliString, bit: int) -> PauliString:
    # S X S^dag = i XZ ; S Z S^dag = Z
    if not g.x_mask & bit:
        return g
    return PauliString(g.width, g.x_mask, g.z_mask ^ bit, (g.phase + 1) & 3)


def _apply_pauli(g: PauliString, bit: int, anti_x: bool, anti_z: bool
                 ) -> PauliString:
    """Conjugation by a Pauli gate only flips signs: anti_x (anti_z) says
    the gate anticommutes with X (Z) on that qubit."""
    flip = False
    if anti_x and g.x_mask & bit:
        flip = not flip
    if anti_z and g.z_mask & bit:
        flip = not flip
    return PauliString(g.width, g.x_mask, g.z_mask,
                       (g.phase + (2 if flip else 0)) & 3)


def _apply_cnot(g: PauliString, cbit: int, tbit: int) -> PauliString:
    # X_c -> X_c X_t and Z_t -> Z_c Z_t; in the i^phase X^x Z^z convention
    # the mapped factors land in canonical order, so no phase correction.
    x, z = g.x_mask, g.z_mask
    if x & cbit:
        x ^= tbit
    if z & tbit:
        z ^= cbit
    return PauliString(g.width, x, z, g.phase)


def _apply_swap(g: PauliString, abit: int, bbit: int) -> PauliString:
    x, z = g.x_mask, g.z_mask

    def swap_bits(mask):
        ia, ib = bool(mask & abit), bool(mask & bbit)
        if ia != ib:
            mask ^= abit | bbit
        return mask

    return PauliString(g.width, swap_bits(x), swap_bits(z), g.phase)


def tableau_apply(t: StabilizerTableau, step: CircuitStep
                  ) -> StabilizerTableau:
    name = step.gate.name
    if name not in CLIFFORD_GATES:
        raise NonCliffordGate(name)
    if name == "I":
        return t
    gens = t.generators
    if step.gate.arity == 1:
        bit = 1 << step.targets[0]
        if name == "H":
            gens = [_apply_h(g, bit) for g in gens]
        elif name == "S":
            gens = [_apply_s(g, bit) for g in gens]
        elif name == "X":
            gens = [_apply_pauli(g, bit, False, True) for g in gens]
        elif name == "Y":
            gens = [_apply_pauli(g, bit, True, True) for g in gens]
        elif name == "Z":
            gens = [_apply_pauli(g, bit, True, False) for g in gens]
    else:
        abit = 1 << step.targets[0]
        bbit = 1 << step.targets[1]
        if name == "CNOT":
            gens = [_apply_cnot(g, abit, bbit) for g in gens]
        elif name == "CZ":
            # CZ = (I x H) CNOT (I x H)
            gens = [_apply_h(_apply_cnot(_apply_h(g, bbit), abit, bbit), bbit)
                    for g in gens]
        elif name == "SWAP":
            gens = [_apply_swap(g, abit, bbit) for g in gens]
    out = StabilizerTableau(t.width, gens)
    if DEBUG_CHECKS:
        out.check_invariants()
    return out


def _gf2_rank(rows: list[int]) -> int:
    basis: dict[int, int] = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead not in basis:
                basis[lead] = row
                break
            row ^= basis[lead]
    return len(basis)


def tableau_marginal(t: StabilizerTableau, qubit: int) -> OutcomeDistribution:
    """{p0, p1} in {{1,0}, {0,1}, {1/2,1/2}}: deterministic exactly when
    +/-Z_q lies in the stabilizer group, found by a GF(2) solve."""
    bit = 1 << qubit
    if any(g.x_mask & bit for g in t.generators):
        return OutcomeDistribution(_HALF, _HALF)
    # all generators commute with Z_q, so some product equals +/-Z_q;
    # solve sum c_i (x_i|z_i) = (0|e_q) over GF(2) and multiply out signs.
    n = t.width
    basis: dict[int, tuple[int, int]] = {}
    for i, g in enumerate(t.generators):
        vec, tag = (g.x_mask << n) | g.z_mask, 1 << i
        while vec:
            lead = vec.bit_length() - 1
            if lead not in basis:
                basis[lead] = (vec, tag)
                break
            bv, bt = basis[lead]
            vec ^= bv
            tag ^= bt
    vec, tag = bit, 0  # target: x part zero, z part e_q
    while vec:
        lead = vec.bit_length() - 1
        if lead not in basis:
            break
        bv, bt = basis[lead]
        vec ^= bv
        tag ^= bt
    if vec != 0:
        # Z_q not in the group (cannot happen for a full-rank tableau, but
        # keep the fair-coin answer as a safe fallback)
        return OutcomeDistribution(_HALF, _HALF)
    prod = PauliString(n)
    for i, g in enumerate(t.generators):
        if tag & (1 << i):
            prod = prod.mul(g)
    assert prod.x_mask == 0 and prod.z_mask == bit
    if prod.letter_sign() > 0:
        return OutcomeDistribution(_ONE, _ZERO)
    return OutcomeDistribution(_ZERO, _ONE)


def run_stabilizer(circuit: Circuit) -> OutcomeDistribution:
    if circuit.input_blocks:
        raise ValueError("stabilizer engine cannot take mixed inputs")
    t = tableau_init(circuit.width, circuit.input_bits)
    for j, step in enumerate(circuit.steps):
        try:
            t = tableau_apply(t, step)
        except NonCliffordGate as exc:
            raise NonCliffordGate(exc.gate_name, j) from None
    return tableau_marginal(t, circuit.measured_qubit)
