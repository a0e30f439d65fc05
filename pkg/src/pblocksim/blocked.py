"""Exact simulator for circuits whose states stay p-blocked.

The state is a qubit->block assignment plus one exact density matrix per
block, so cost per step depends on p, never on the circuit width.  A gate
inside one block conjugates that block; a gate straddling two blocks merges
them first, and a merged block larger than p must re-split exactly into
parts of size <= p or the run aborts with PBlockError: the hypothesis that
every intermediate state is p-blocked is an input contract, not something
this engine can repair.

Blocks are stored as density matrices even when pure; mixed per-block inputs
(`inputblock` in the circuit format) run through the same code path.
"""

from __future__ import annotations

from .exact import ZERO, ONE
from .matrices import (ExactMatrix, DensityBlock, mat_mul, mat_eq,
                       kron_blocks, partial_trace, relabel_reorder,
                       product_over_partition)
from .circuits import Circuit, CircuitStep
from .partitions import partitions_max_part
from .sampling import OutcomeDistribution

# extra exact self-checks inside the engines (tests switch this on)
DEBUG_CHECKS = False


class PBlockError(Exception):
    def __init__(self, step_index: int, qubits, diagnostic: str):
        self.step_index = step_index
        self.qubits = tuple(qubits)
        self.diagnostic = diagnostic
        super().__init__(
            f"step {step_index}: block {self.qubits} {diagnostic}")


class BlockedState:
    __slots__ = ("width", "assignment", "blocks", "next_id")

    def __init__(self, width: int, assignment: list[int],
                 blocks: dict[int, DensityBlock], next_id: int):
        self.width = width
        self.assignment = assignment
        self.blocks = blocks
        self.next_id = next_id

    def block_of(self, qubit: int) -> DensityBlock:
        return self.blocks[self.assignment[qubit]]

    def copy(self) -> "BlockedState":
        return BlockedState(self.width, list(self.assignment),
                            dict(self.blocks), self.next_id)

    def max_block_size(self) -> int:
        return max(len(b.labels) for b in self.blocks.values())

    def global_density(self) -> DensityBlock:
        """kron of all blocks in ascending qubit order (small widths only)."""
        ordered = sorted(self.blocks.values(), key=lambda b: b.labels[0])
        assembled = kron_blocks(ordered)
        return relabel_reorder(assembled, tuple(range(self.width)))

    def digit_count(self) -> int:
        return max(e.digit_count() for b in self.blocks.values()
                   for e in b.matrix.entries)


def _basis_block(label: int, bit: int) -> DensityBlock:
    ent = [ZERO] * 4
    ent[3 if bit else 0] = ONE
    return DensityBlock((label,), ExactMatrix(2, 2, ent))


def init_blocked(circuit_or_bits) -> BlockedState:
    """All-singleton start state |b><b| per qubit; circuits may override
    chosen qubits with mixed input blocks."""
    if isinstance(circuit_or_bits, Circuit):
        circuit = circuit_or_bits
        bits = circuit.input_bits
        preset = circuit.input_blocks
    else:
        bits = circuit_or_bits
        preset = ()
    width = len(bits)
    assignment = [0] * width
    blocks: dict[int, DensityBlock] = {}
    next_id = 1
    covered = set()
    for blk in preset:
        blocks[next_id] = DensityBlock(blk.labels, blk.matrix)
        for q in blk.labels:
            assignment[q] = next_id
            covered.add(q)
        next_id += 1
    for q in range(width):
        if q in covered:
            continue
        blocks[next_id] = _basis_block(q, int(bits[q]))
        assignment[q] = next_id
        next_id += 1
    return BlockedState(width, assignment, blocks, next_id)


def embed_gate(gate_matrix: ExactMatrix, block_labels, targets) -> ExactMatrix:
    """Pad a 1- or 2-qubit gate to the block dimension, with the gate's
    index bits routed to the targets' positions inside the block."""
    k = len(block_labels)
    dim = 1 << k
    positions = [block_labels.index(t) for t in targets]
    shifts = [k - 1 - pos for pos in positions]
    g = len(targets)
    other_mask = (dim - 1) ^ sum(1 << s for s in shifts)
    ent = [ZERO] * (dim * dim)
    for r in range(dim):
        rbits = 0
        for t in range(g):
            rbits = (rbits << 1) | ((r >> shifts[t]) & 1)
        base = r & other_mask
        for cbits in range(1 << g):
            coeff = gate_matrix.at(rbits, cbits)
            if coeff.is_zero():
                continue
            s = base
            for t in range(g):
                if (cbits >> (g - 1 - t)) & 1:
                    s |= 1 << shifts[t]
            ent[r * dim + s] = coeff
    return ExactMatrix(dim, dim, ent)


def conjugate_block(block: DensityBlock, gate_matrix: ExactMatrix,
                    targets) -> DensityBlock:
    u = embed_gate(gate_matrix, block.labels, targets)
    updated = mat_mul(mat_mul(u, block.matrix), u.dagger())
    return DensityBlock(block.labels, updated)


def _is_pure(block: DensityBlock) -> bool:
    """Exact purity: trace(rho^2) == 1."""
    m = block.matrix
    acc = ZERO
    dim = m.rows
    for i in range(dim):
        for j in range(dim):
            x = m.at(i, j)
            if not x.is_zero():
                acc = acc + x * m.at(j, i)
    return acc == ONE


def split_exact(block: DensityBlock, p: int,
                step_index: int = -1) -> list[DensityBlock]:
    """Finest exact factorization of a block into parts of size <= p.

    Partitions are tried most-refined first; for a pure block a partition
    can only match if every part's reduced state is pure, which prunes the
    search without giving up exactness.  Raises PBlockError when no
    partition reproduces the block."""
    labels = block.labels
    candidates = partitions_max_part(labels, p)
    pure = _is_pure(block)
    reduced_cache: dict[tuple, DensityBlock] = {}
    purity_cache: dict[tuple, bool] = {}

    def reduced(part):
        if part not in reduced_cache:
            reduced_cache[part] = partial_trace(block, part)
        return reduced_cache[part]

    def part_is_pure(part):
        if part not in purity_cache:
            purity_cache[part] = _is_pure(reduced(part))
        return purity_cache[part]

    for parts in candidates:
        if len(parts) == 1:
            return [block]
        if pure:
            if all(part_is_pure(part) for part in parts):
                result = [reduced(part) for part in parts]
                if DEBUG_CHECKS:
                    assembled = relabel_reorder(kron_blocks(result), labels)
                    assert mat_eq(assembled.matrix, block.matrix), \
                        "pure split product mismatch"
                return result
        else:
            assembled = product_over_partition(block, parts)
            if mat_eq(assembled.matrix, block.matrix):
                return [reduced(part) for part in parts]
    raise PBlockError(step_index, labels,
                      f"does not factor into parts of size <= {p}")


def apply_blocked(state: BlockedState, step: CircuitStep, p: int,
                  step_index: int = -1,
                  eager_split: bool = False) -> BlockedState:
    """One gate on a blocked state: conjugate inside a block, or merge two
    blocks, conjugate, and re-split if the merge exceeded p."""
    out = state.copy()
    ids = sorted({out.assignment[q] for q in step.targets})
    if len(ids) == 1:
        bid = ids[0]
        block = conjugate_block(out.blocks[bid], step.gate.matrix,
                                step.targets)
        merged_id = bid
    else:
        id_a, id_b = ids
        block_a, block_b = out.blocks[id_a], out.blocks[id_b]
        merged = kron_blocks([block_a, block_b])
        merged = relabel_reorder(merged, tuple(sorted(merged.labels)))
        block = conjugate_block(merged, step.gate.matrix, step.targets)
        del out.blocks[id_b]
        merged_id = id_a
        for q in block.labels:
            out.assignment[q] = merged_id
    if len(block.labels) > p or eager_split:
        parts = split_exact(block, p, step_index)
    else:
        parts = [block]
    if len(parts) == 1:
        out.blocks[merged_id] = parts[0]
    else:
        del out.blocks[merged_id]
        for part in parts:
            new_id = out.next_id
            out.next_id += 1
            out.blocks[new_id] = part
            for q in part.labels:
                out.assignment[q] = new_id
    return out


def measurement_marginal(state: BlockedState, qubit: int
                         ) -> OutcomeDistribution:
    block = state.block_of(qubit)
    single = partial_trace(block, (qubit,))
    p0 = single.matrix.at(0, 0)
    p1 = single.matrix.at(1, 1)
    if not (p0.is_real() and p1.is_real()):
        raise ValueError("marginal probabilities not real")
    return OutcomeDistribution(p0, p1)


def run_blocked_full(circuit: Circuit, p: int, eager_split: bool = False
                     ) -> tuple[BlockedState, OutcomeDistribution]:
    if p < 1:
        raise ValueError("p must be >= 1")
    state = init_blocked(circuit)
    for q in range(circuit.width):
        if len(state.block_of(q).labels) > p:
            raise PBlockError(-1, state.block_of(q).labels,
                              f"input block larger than p = {p}")
    for j, step in enumerate(circuit.steps):
        state = apply_blocked(state, step, p, j, eager_split)
        if DEBUG_CHECKS:
            assert state.max_block_size() <= p
    return state, measurement_marginal(state, circuit.measured_qubit)


def run_blocked(circuit: Circuit, p: int,
                eager_split: bool = False) -> OutcomeDistribution:
    """Exact output distribution of a p-blocked circuit."""
    return run_blocked_full(circuit, p, eager_split)[1]
