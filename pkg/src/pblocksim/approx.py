"""Tolerant simulator for circuits that are only nearly p-blocked.

The engine forces a p-blocked surrogate after every step: it applies the
gate on the merged block, measures the trace-norm distance from that block
to the product of its reduced states for every partition into parts <= p,
keeps the closest product (ties: more parts, then lexicographic), and logs
the residual.  The certified bound follows the recursion

    e_0 = 0,   e_{j+1} = (2p+3) * (e_j + epsilon)

recorded as an equality, which stays below epsilon * (2p+4)^j.  epsilon is
the caller's assumption about how far the true states can drift from some
p-blocked states; the certificate is conditional on it.  A measured residual
above (2p+1)(e_j + epsilon) contradicts that assumption, which flags the
ledger but does not stop the run.

Validation circuits interleave exactly-blocked gates with tiny two-qubit
rotations exp(-i*theta*P).  Those rotations model the true process and are
applied only by the float reference here; the engine substitutes the nearest
exact gate (the identity, for small theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .matrices import (ExactMatrix, mat_eq, kron_blocks, relabel_reorder,
                       partial_trace, trace_norm_float,
                       product_over_partition)
from .circuits import (Circuit, CircuitStep, GateDef, LIBRARY,
                       gen_block_local, _fixed_cells)
from .partitions import partitions_max_part
from .blocked import (BlockedState, init_blocked, conjugate_block,
                      measurement_marginal)
from .prng import CounterRng
from .sampling import OutcomeDistribution

DEBUG_CHECKS = False

_IDENTITY4 = GateDef("II", 2, ExactMatrix.identity(4))


@dataclass(frozen=True)
class ApproxConfig:
    p: int
    epsilon: float
    eta_target: float | None = None
    seed: int = 0


@dataclass(frozen=True)
class LedgerEntry:
    j: int
    e_bound: float
    d: float
    flag: str  # "ok" or "violated"


class ErrorLedger:
    def __init__(self, p: int, epsilon: float):
        self.p = p
        self.epsilon = epsilon
        self.entries: list[LedgerEntry] = []

    @property
    def e_current(self) -> float:
        return self.entries[-1].e_bound if self.entries else 0.0

    @property
    def e_final(self) -> float:
        return self.e_current

    def record_step(self, d: float) -> LedgerEntry:
        e_prev = self.e_current
        e_next = (2 * self.p + 3) * (e_prev + self.epsilon)
        flag = "ok"
        if d > (2 * self.p + 1) * (e_prev + self.epsilon):
            flag = "violated"
        entry = LedgerEntry(len(self.entries) + 1, e_next, d, flag)
        self.entries.append(entry)
        return entry

    def hypothesis_violated(self) -> bool:
        return any(e.flag == "violated" for e in self.entries)

    def export_lines(self) -> list[str]:
        return [f"{e.j} {e.e_bound!r} {e.d!r} {e.flag}" for e in self.entries]


@dataclass(frozen=True)
class Certificate:
    e_final: float
    conditional_on_eps: float
    hypothesis_violated: bool

    def summary(self) -> str:
        return f"e_T={self.e_final!r} " \
               f"conditional_on_eps={self.conditional_on_eps!r}"


def required_epsilon(eta: float, p: int, steps: int) -> float:
    """Largest per-step drift for which the output stays within eta:
    eta / (4 * (2p+4)^steps); underflows to 0.0 for very long circuits."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    denom = 4 * (2 * p + 4) ** steps
    try:
        return eta / denom
    except OverflowError:
        return 0.0


def bound_e(eps: float, p: int, j: int) -> float:
    """Closed-form ceiling eps * (2p+4)^j on the recorded bounds; e_0 = 0."""
    if j == 0:
        return 0.0
    try:
        return eps * float((2 * p + 4) ** j)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class Rotation:
    """Two-qubit rotation exp(-i * theta * P), P a Pauli pair like 'ZZ'."""
    pauli: str
    theta: float
    targets: tuple[int, int]

    def __post_init__(self):
        if len(self.pauli) != 2 or any(c not in "XYZ" for c in self.pauli):
            raise ValueError("pauli must be two letters from XYZ")
        if self.targets[0] == self.targets[1]:
            raise ValueError("rotation targets must differ")


@dataclass(frozen=True)
class PerturbedCircuit:
    width: int
    input_bits: str
    steps: tuple  # CircuitStep | Rotation
    measured_qubit: int = 0
    base_p: int = field(default=0, compare=False)

    def depth(self) -> int:
        return len(self.steps)


def nearest_exact_gate(rotation: Rotation) -> GateDef:
    """Closest two-qubit library gate (or the identity) in Frobenius norm."""
    rot = _rotation_matrix(rotation.pauli, rotation.theta)
    best_gate, best_dist = None, None
    candidates = [_IDENTITY4] + \
        [g for g in LIBRARY.values() if g.arity == 2]
    for gate in candidates:
        gm = gate.matrix.to_complex_rows()
        dist = sum(abs(gm[i][j] - rot[i][j]) ** 2
                   for i in range(4) for j in range(4))
        if best_dist is None or dist < best_dist:
            best_gate, best_dist = gate, dist
    return best_gate


def approx_step(state: BlockedState, step, cfg: ApproxConfig,
                ledger: ErrorLedger, step_index: int = -1) -> BlockedState:
    """Apply one step and force the state back to p-blocked form."""
    if isinstance(step, Rotation):
        step = CircuitStep(nearest_exact_gate(step), step.targets)
    p = cfg.p
    out = state.copy()
    ids = sorted({out.assignment[q] for q in step.targets})
    if len(ids) == 1:
        bid = ids[0]
        block = conjugate_block(out.blocks[bid], step.gate.matrix,
                                step.targets)
        merged_id = bid
    else:
        id_a, id_b = ids
        merged = kron_blocks([out.blocks[id_a], out.blocks[id_b]])
        merged = relabel_reorder(merged, tuple(sorted(merged.labels)))
        block = conjugate_block(merged, step.gate.matrix, step.targets)
        del out.blocks[id_b]
        merged_id = id_a
        for q in block.labels:
            out.assignment[q] = merged_id
    if len(block.labels) <= p:
        out.blocks[merged_id] = block
        ledger.record_step(0.0)
        return out
    # best p-partition projection: exact reduced states, float selection
    best = None
    for parts in partitions_max_part(block.labels, p):
        candidate = product_over_partition(block, parts)
        dist = trace_norm_float(block.matrix.sub(candidate.matrix))
        if best is None or dist < best[0]:
            best = (dist, parts, candidate)
    d, parts, candidate = best
    if DEBUG_CHECKS:
        recheck = trace_norm_float(block.matrix.sub(candidate.matrix))
        assert abs(recheck - d) <= 1e-9, "split residual self-check failed"
        for part in parts:
            assert mat_eq(partial_trace(candidate, part).matrix,
                          partial_trace(block, part).matrix), \
                "projection changed a part marginal"
    del out.blocks[merged_id]
    for part in parts:
        new_id = out.next_id
        out.next_id += 1
        reduced = partial_trace(block, part)
        out.blocks[new_id] = reduced
        for q in part:
            out.assignment[q] = new_id
    ledger.record_step(d)
    return out


def run_approx(circuit, cfg: ApproxConfig
               ) -> tuple[OutcomeDistribution, ErrorLedger, Certificate]:
    """Run the tolerant engine; the distribution comes from the surrogate's
    exact marginal, the certificate bounds its distance to the true output
    provided the epsilon assumption held."""
    if cfg.p < 1:
        raise ValueError("p must be >= 1")
    ledger = ErrorLedger(cfg.p, cfg.epsilon)
    state = init_blocked(_as_plain_circuit(circuit))
    if state.max_block_size() > cfg.p:
        raise ValueError("input block larger than p; the surrogate must "
                         "start p-blocked")
    for j, step in enumerate(circuit.steps):
        state = approx_step(state, step, cfg, ledger, j)
    dist = measurement_marginal(state, circuit.measured_qubit)
    cert = Certificate(ledger.e_final, cfg.epsilon,
                       ledger.hypothesis_violated())
    return dist, ledger, cert


def _as_plain_circuit(circuit) -> Circuit:
    if isinstance(circuit, Circuit):
        return circuit
    return Circuit(circuit.width, circuit.input_bits, (),
                   circuit.measured_qubit)


# -- float reference for perturbed circuits ---

_PAULI_1Q = {
    "X": [[0, 1], [1, 0]],
    "Y": [[0, -1j], [1j, 0]],
    "Z": [[1, 0], [0, -1]],
}


def _rotation_matrix(pauli: str, theta: float) -> list[list[complex]]:
    pa, pb = _PAULI_1Q[pauli[0]], _PAULI_1Q[pauli[1]]
    c, s = math.cos(theta), math.sin(theta)
    out = [[0j] * 4 for _ in range(4)]
    for i in range(4):
        out[i][i] += c
        for j in range(4):
            pij = pa[i >> 1][j >> 1] * pb[i & 1][j & 1]
            out[i][j] += -1j * s * pij
    return out


def _float_apply(amps: list[complex], width: int, mat, targets) -> list[complex]:
    size = 1 << width
    out = [0j] * size
    if len(targets) == 1:
        mb = 1 << (width - 1 - targets[0])
        for i in range(size):
            if i & mb:
                continue
            a0, a1 = amps[i], amps[i | mb]
            out[i] += mat[0][0] * a0 + mat[0][1] * a1
            out[i | mb] += mat[1][0] * a0 + mat[1][1] * a1
    else:
        ma = 1 << (width - 1 - targets[0])
        mb = 1 << (width - 1 - targets[1])
        both = ma | mb
        offs = (0, mb, ma, both)
        for i in range(size):
            if i & both:
                continue
            quad = (amps[i], amps[i | mb], amps[i | ma], amps[i | both])
            for r in range(4):
                acc = 0j
                row = mat[r]
                for col in range(4):
                    if row[col]:
                        acc += row[col] * quad[col]
                out[i | offs[r]] = acc
    return out


def simulate_perturbed_floats(pc: PerturbedCircuit) -> tuple[float, float]:
    """Float statevector reference that applies the true rotations."""
    amps = _float_state(pc, len(pc.steps))
    mb = 1 << (pc.width - 1 - pc.measured_qubit)
    p1 = sum(abs(a) ** 2 for i, a in enumerate(amps) if i & mb)
    p0 = sum(abs(a) ** 2 for i, a in enumerate(amps) if not i & mb)
    return p0, p1


def _float_state(pc: PerturbedCircuit, upto: int) -> list[complex]:
    amps = [0j] * (1 << pc.width)
    amps[int(pc.input_bits, 2)] = 1.0 + 0j
    for step in pc.steps[:upto]:
        if isinstance(step, Rotation):
            amps = _float_apply(amps, pc.width,
                                _rotation_matrix(step.pauli, step.theta),
                                step.targets)
        else:
            amps = _float_apply(amps, pc.width,
                                step.gate.matrix.to_complex_rows(),
                                step.targets)
    return amps


def _pauli_expectation(amps: list[complex], width: int, pauli: str,
                       targets) -> float:
    """<psi| P |psi> for a 2-qubit Pauli pair, from the raw amplitudes."""
    pa, pb = _PAULI_1Q[pauli[0]], _PAULI_1Q[pauli[1]]
    ma = 1 << (width - 1 - targets[0])
    mb = 1 << (width - 1 - targets[1])
    acc = 0j
    for i, a in enumerate(amps):
        if not a:
            continue
        ia, ib = bool(i & ma), bool(i & mb)
        for ja in range(2):
            ca = pa[int(ia)][ja]
            if not ca:
                continue
            for jb in range(2):
                cb = pb[int(ib)][jb]
                if not cb:
                    continue
                src = i
                if ja != ia:
                    src ^= ma
                if jb != ib:
                    src ^= mb
                acc += a.conjugate() * ca * cb * amps[src]
    return acc.real


def gen_perturbed(n: int, p: int, steps: int, eps: float, seed: int
                  ) -> PerturbedCircuit:
    """Exactly p-blocked base circuit with cross-cell rotations spliced in,
    each calibrated (against the float reference) to move the state by at
    most eps in trace norm.  Total step count is `steps`."""
    if steps < 2:
        raise ValueError("need at least 2 steps")
    rng = CounterRng(seed, tag="gen_perturbed")
    n_rot = max(1, steps // 4)
    base = gen_block_local(n, p, steps - n_rot, seed)
    cells = _fixed_cells(n, p)
    positions = sorted(rng.randrange(len(base.steps) + 1)
                       for _ in range(n_rot))
    letters = "XYZ"
    mixed: list = []
    base_iter = list(base.steps)
    cursor = 0
    for pos in positions:
        while cursor < pos:
            mixed.append(base_iter[cursor])
            cursor += 1
        ca = rng.randrange(len(cells))
        cb = ca
        while cb == ca and len(cells) > 1:
            cb = rng.randrange(len(cells))
        qa = cells[ca][rng.randrange(len(cells[ca]))]
        qb = cells[cb][rng.randrange(len(cells[cb]))]
        if qa == qb:
            qb = (qa + 1) % n
        pauli = letters[rng.randrange(3)] + letters[rng.randrange(3)]
        mixed.append(Rotation(pauli, 0.0, (qa, qb)))  # theta set below
    mixed.extend(base_iter[cursor:])
    # calibrate each rotation angle so the state moves by <= eps
    final_steps = list(mixed)
    for idx, step in enumerate(final_steps):
        if not isinstance(step, Rotation):
            continue
        amps = _float_state(
            PerturbedCircuit(n, base.input_bits, tuple(final_steps), 0, p),
            idx)
        expv = _pauli_expectation(amps, n, step.pauli, step.targets)
        wobble = math.sqrt(max(0.0, 1.0 - expv * expv))
        if wobble < 1e-9:
            theta = eps / 2.0
        else:
            theta = min(math.asin(min(1.0, eps / (2.0 * wobble))), 0.2)
        moved = 2.0 * math.sin(theta) * wobble
        assert moved <= eps * (1 + 1e-9), "rotation calibration overshoot"
        final_steps[idx] = Rotation(step.pauli, theta, step.targets)
    return PerturbedCircuit(n, base.input_bits, tuple(final_steps), 0, p)
