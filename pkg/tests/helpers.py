"""Independent reference implementations the tests check the engines against.

Everything here deliberately avoids the code paths under test: partitions
are enumerated by plain recursion, blockedness is decided by full density
matrix comparison, reversible circuits are evaluated at the bit level, and
eigenvalues come from exact characteristic polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from pblocksim.exact import ExactScalar, ZERO, ONE
from pblocksim.matrices import (ExactMatrix, DensityBlock, kron, mat_eq,
                                mat_mul, partial_trace, relabel_reorder)
from pblocksim.circuits import Circuit, CircuitStep, LIBRARY
from pblocksim.blocked import embed_gate
from pblocksim.prng import CounterRng


def all_partitions(items, max_size):
    """Every partition of `items` with parts of size <= max_size; plain
    head-recursion, no ordering guarantees."""
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for take in range(0, min(max_size - 1, len(rest)) + 1):
        for chosen in combinations(rest, take):
            part = tuple(sorted((head,) + chosen))
            left = [x for x in rest if x not in chosen]
            for tail in all_partitions(left, max_size):
                yield [part] + tail


def density_from_statevector(amps: list[ExactScalar]) -> ExactMatrix:
    dim = len(amps)
    ent = [ZERO] * (dim * dim)
    for i, ai in enumerate(amps):
        if ai.is_zero():
            continue
        for j, aj in enumerate(amps):
            if not aj.is_zero():
                ent[i * dim + j] = ai * aj.conjugate()
    return ExactMatrix(dim, dim, ent)


def brute_blockedness(amps: list[ExactScalar], width: int, p: int):
    """First partition (finest first) whose reduced-state product equals
    the full density matrix exactly; None when there is none.  O(Bell(n))
    density-matrix work: for small widths only."""
    rho = DensityBlock(tuple(range(width)), density_from_statevector(amps))
    best = None
    for parts in all_partitions(range(width), p):
        parts = sorted(tuple(p_) for p_ in parts)
        reduced = [partial_trace(rho, part) for part in parts]
        assembled = reduced[0]
        for nxt in reduced[1:]:
            assembled = DensityBlock(assembled.labels + nxt.labels,
                                     kron(assembled.matrix, nxt.matrix))
        assembled = relabel_reorder(assembled, rho.labels)
        if mat_eq(assembled.matrix, rho.matrix):
            if best is None or len(parts) > len(best):
                best = parts
    return best


def classical_bits(circuit: Circuit) -> str | None:
    """Track basis bits through X/CNOT/SWAP (and bit-preserving phase
    gates); None when a gate would leave the basis."""
    bits = [int(b) for b in circuit.input_bits]
    for step in circuit.steps:
        name = step.gate.name
        if name in ("I", "Z", "S", "T"):
            continue
        if name in ("X", "Y"):
            bits[step.targets[0]] ^= 1
        elif name == "CNOT":
            c, t = step.targets
            bits[t] ^= bits[c]
        elif name == "SWAP":
            a, b = step.targets
            bits[a], bits[b] = bits[b], bits[a]
        elif name == "CZ":
            continue
        else:
            return None
    return "".join(str(b) for b in bits)


def char_poly(h: ExactMatrix) -> list[Fraction]:
    """Characteristic polynomial coefficients of an exact matrix with
    rational entries, by Faddeev-LeVerrier: returns [c_n, ..., c_0] with
    p(x) = c_n x^n + ... + c_0 and c_n = 1."""
    n = h.rows
    for e in h.entries:
        if not e.is_rational():
            raise ValueError("char_poly expects rational entries")
    m = ExactMatrix.identity(n)
    coeffs = [Fraction(1)]
    a_m = None
    for k in range(1, n + 1):
        a_m = mat_mul(h, m)
        tr = a_m.trace()
        c = -tr.a / k
        coeffs.append(c)
        m = a_m.add(ExactMatrix.identity(n).scale(ExactScalar(c)))
    return coeffs


def poly_eval(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def float_statevector(circuit: Circuit) -> list[complex]:
    """Plain complex-float simulation, written independently of the dense
    engine's loops (full-width embedded matrices)."""
    n = circuit.width
    amps = [0j] * (1 << n)
    amps[int(circuit.input_bits, 2)] = 1.0
    for step in circuit.steps:
        full = embed_gate(step.gate.matrix, tuple(range(n)), step.targets)
        rows = full.to_complex_rows()
        amps = [sum(rows[i][j] * amps[j] for j in range(1 << n)
                    if rows[i][j] != 0)
                for i in range(1 << n)]
    return amps


def evolve_density_exact(circuit: Circuit, rho: DensityBlock) -> DensityBlock:
    """Full-width exact density evolution rho -> U rho U^dagger per step;
    independent oracle for mixed-input runs (keep widths small)."""
    out = rho
    for step in circuit.steps:
        u = embed_gate(step.gate.matrix, out.labels, step.targets)
        out = DensityBlock(out.labels, mat_mul(mat_mul(u, out.matrix),
                                               u.dagger()))
    return out


def random_exact_scalar(rng: CounterRng, bits: int = 16) -> ExactScalar:
    def frac():
        num = rng.randrange(1 << bits) - (1 << (bits - 1))
        den = 1 + rng.randrange(1 << (bits // 2))
        return Fraction(num, den)
    return ExactScalar(frac(), frac(), frac(), frac())


def random_pure_density(rng: CounterRng, qubits: int) -> DensityBlock:
    """Exact random pure density: outer product of a random vector divided
    by its exact norm (stays inside the field, no square roots needed)."""
    dim = 1 << qubits
    vec = [random_exact_scalar(rng, 10) for _ in range(dim)]
    if all(v.is_zero() for v in vec):
        vec[0] = ONE
    norm = ZERO
    for v in vec:
        norm = norm + v.abs_squared()
    inv = norm.inverse()
    ent = [ZERO] * (dim * dim)
    for i, vi in enumerate(vec):
        for j, vj in enumerate(vec):
            ent[i * dim + j] = vi * vj.conjugate() * inv
    return DensityBlock(tuple(range(qubits)), ExactMatrix(dim, dim, ent))


def random_mixed_density(rng: CounterRng, qubits: int,
                         terms: int = 3) -> DensityBlock:
    """Exact rational convex mixture of random pure densities."""
    weights = [1 + rng.randrange(8) for _ in range(terms)]
    total = sum(weights)
    dim = 1 << qubits
    acc = ExactMatrix.zeros(dim, dim)
    for w in weights:
        pure = random_pure_density(rng, qubits)
        acc = acc.add(pure.matrix.scale(ExactScalar(Fraction(w, total))))
    return DensityBlock(tuple(range(qubits)), acc)


def random_clifford_circuit(rng: CounterRng, n: int, steps: int) -> Circuit:
    one_q = sorted(name for name in ("I", "X", "Y", "Z", "H", "S"))
    two_q = sorted(name for name in ("CNOT", "CZ", "SWAP"))
    bits = "".join(str(rng.coin_bit()) for _ in range(n))
    out = []
    for _ in range(steps):
        if n >= 2 and rng.coin_bit():
            a = rng.randrange(n)
            b = a
            while b == a:
                b = rng.randrange(n)
            out.append(CircuitStep(LIBRARY[two_q[rng.randrange(3)]], (a, b)))
        else:
            out.append(CircuitStep(LIBRARY[one_q[rng.randrange(6)]],
                                   (rng.randrange(n),)))
    return Circuit(n, bits, tuple(out), rng.randrange(n))


def ghz_circuit(n: int) -> Circuit:
    steps = [CircuitStep(LIBRARY["H"], (0,))]
    for q in range(n - 1):
        steps.append(CircuitStep(LIBRARY["CNOT"], (q, q + 1)))
    return Circuit(n, "0" * n, tuple(steps))
