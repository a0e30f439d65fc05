"""Gate library, circuit representation, text format, and generators.

Qubit 0 is the leftmost qubit (most significant index bit); a circuit is a
width, an input basis string, a gate sequence, and the measured qubit
(default 0).  The text format is line-oriented:

    qubits <n>
    input <bitstring>
    gate <NAME> <q> [<q2>]
    measure <q>

with '#' comments.  `defgate <NAME> <arity>` followed by 2^arity rows of
2^arity scalar literals defines extra gates; they must be exactly unitary
over Q(i, sqrt2) or loading fails.  `inputblock <q1,q2,...>` followed by a
density-matrix literal prepares a mixed input block (used by the blocked
engine only).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import (ExactScalar, ZERO, ONE, MINUS_ONE, I_UNIT, HALF_SQRT2,
                    parse_scalar)
from .matrices import ExactMatrix, DensityBlock, is_unitary
from .prng import CounterRng


class CircuitError(ValueError):
    pass


class CircuitSyntaxError(CircuitError):
    pass


class UnknownGate(CircuitError):
    pass


class QubitOutOfRange(CircuitError):
    pass


class DuplicateTarget(CircuitError):
    pass


class GateDef:
    """Named unitary of arity 1 or 2 with exact entries."""

    __slots__ = ("name", "arity", "matrix", "_nonzero_rows")

    def __init__(self, name: str, arity: int, matrix: ExactMatrix):
        if arity not in (1, 2):
            raise CircuitError(f"gate {name}: arity must be 1 or 2")
        dim = 1 << arity
        if matrix.rows != dim or matrix.cols != dim:
            raise CircuitError(f"gate {name}: expected {dim}x{dim} matrix")
        if not is_unitary(matrix):
            raise CircuitError(f"gate {name}: matrix is not exactly unitary")
        self.name = name
        self.arity = arity
        self.matrix = matrix
        self._nonzero_rows = None

    def nonzero_rows(self):
        """Per-row list of (column, entry) pairs, cached for apply loops."""
        if self._nonzero_rows is None:
            dim = self.matrix.rows
            self._nonzero_rows = [
                [(j, self.matrix.at(i, j)) for j in range(dim)
                 if not self.matrix.at(i, j).is_zero()]
                for i in range(dim)]
        return self._nonzero_rows

    def __repr__(self):
        return f"GateDef({self.name})"


def _m(rows) -> ExactMatrix:
    return ExactMatrix.from_rows(rows)


_T_PHASE = ExactScalar(0, 0, Fraction(1, 2), Fraction(1, 2))  # (1+i)/sqrt2
_NEG_HS = ExactScalar(0, 0, Fraction(-1, 2), 0)


def builtin_library() -> dict[str, GateDef]:
    """The ten built-in gates, all with exact Q(i, sqrt2) entries."""
    lib = {}

    def add(name, arity, rows):
        lib[name] = GateDef(name, arity, _m(rows))

    add("I", 1, [[ONE, ZERO], [ZERO, ONE]])
    add("X", 1, [[ZERO, ONE], [ONE, ZERO]])
    add("Y", 1, [[ZERO, -I_UNIT], [I_UNIT, ZERO]])
    add("Z", 1, [[ONE, ZERO], [ZERO, MINUS_ONE]])
    add("H", 1, [[HALF_SQRT2, HALF_SQRT2], [HALF_SQRT2, _NEG_HS]])
    add("S", 1, [[ONE, ZERO], [ZERO, I_UNIT]])
    add("T", 1, [[ONE, ZERO], [ZERO, _T_PHASE]])
    add("CNOT", 2, [[ONE, ZERO, ZERO, ZERO],
                    [ZERO, ONE, ZERO, ZERO],
                    [ZERO, ZERO, ZERO, ONE],
                    [ZERO, ZERO, ONE, ZERO]])
    add("CZ", 2, [[ONE, ZERO, ZERO, ZERO],
                  [ZERO, ONE, ZERO, ZERO],
                  [ZERO, ZERO, ONE, ZERO],
                  [ZERO, ZERO, ZERO, MINUS_ONE]])
    add("SWAP", 2, [[ONE, ZERO, ZERO, ZERO],
                    [ZERO, ZERO, ONE, ZERO],
                    [ZERO, ONE, ZERO, ZERO],
                    [ZERO, ZERO, ZERO, ONE]])
    return lib


LIBRARY = builtin_library()

# gates with tableau update rules; everything else is rejected by the
# stabilizer engine
CLIFFORD_GATES = frozenset({"I", "X", "Y", "Z", "H", "S", "CNOT", "CZ", "SWAP"})

ONE_QUBIT_GATES = tuple(n for n, g in LIBRARY.items() if g.arity == 1)
TWO_QUBIT_GATES = tuple(n for n, g in LIBRARY.items() if g.arity == 2)


@dataclass(frozen=True)
class CircuitStep:
    gate: GateDef
    targets: tuple[int, ...]

    def __post_init__(self):
        if len(self.targets) != self.gate.arity:
            raise CircuitError(
                f"gate {self.gate.name} takes {self.gate.arity} targets")
        if len(set(self.targets)) != len(self.targets):
            raise DuplicateTarget(
                f"gate {self.gate.name} targets repeat: {self.targets}")


@dataclass(frozen=True)
class InputBlock:
    labels: tuple[int, ...]
    matrix: ExactMatrix


@dataclass(frozen=True)
class Circuit:
    width: int
    input_bits: str
    steps: tuple[CircuitStep, ...]
    measured_qubit: int = 0
    input_blocks: tuple[InputBlock, ...] = field(default=())

    def __post_init__(self):
        if self.width < 1:
            raise CircuitError("circuit width must be positive")
        if len(self.input_bits) != self.width or \
                any(ch not in "01" for ch in self.input_bits):
            raise CircuitError("input must be a bitstring of circuit width")
        if not 0 <= self.measured_qubit < self.width:
            raise QubitOutOfRange(
                f"measured qubit {self.measured_qubit} out of range")
        for step in self.steps:
            for q in step.targets:
                if not 0 <= q < self.width:
                    raise QubitOutOfRange(
                        f"target {q} out of range for width {self.width}")
        covered = [q for blk in self.input_blocks for q in blk.labels]
        if len(covered) != len(set(covered)):
            raise CircuitError("input blocks overlap")
        for q in covered:
            if not 0 <= q < self.width:
                raise QubitOutOfRange(f"input block qubit {q} out of range")

    def depth(self) -> int:
        return len(self.steps)


# -- text format ---

def parse_circuit(text: str, extra_gates: dict[str, GateDef] | None = None
                  ) -> Circuit:
    """Parse the line-oriented circuit format; diagnostics carry line numbers."""
    gates = dict(LIBRARY)
    if extra_gates:
        gates.update(extra_gates)
    width = None
    input_bits = None
    steps: list[CircuitStep] = []
    measured = None
    input_blocks: list[InputBlock] = []

    lines = text.splitlines()
    i = 0

    def fail(lineno, msg, cls=CircuitSyntaxError):
        raise cls(f"line {lineno}: {msg}")

    def parse_int(tok, lineno, what):
        try:
            return int(tok)
        except ValueError:
            fail(lineno, f"{what} must be an integer, got {tok!r}")

    def check_qubit(q, lineno):
        if width is None:
            fail(lineno, "qubit reference before 'qubits' line")
        if not 0 <= q < width:
            fail(lineno, f"qubit {q} out of range [0, {width})",
                 QubitOutOfRange)

    def read_matrix_rows(dim, lineno_start, what):
        nonlocal i
        rows = []
        while len(rows) < dim:
            if i >= len(lines):
                fail(lineno_start, f"{what}: expected {dim} matrix rows")
            raw = lines[i].split("#", 1)[0].strip()
            i += 1
            if not raw:
                continue
            cells = raw.split()
            if len(cells) != dim:
                fail(i, f"{what}: expected {dim} entries per row, "
                        f"got {len(cells)}")
            try:
                rows.append([parse_scalar(c) for c in cells])
            except ValueError as exc:
                fail(i, f"{what}: {exc}")
        return ExactMatrix.from_rows(rows)

    while i < len(lines):
        lineno = i + 1
        raw = lines[i].split("#", 1)[0].strip()
        i += 1
        if not raw:
            continue
        toks = raw.split()
        head = toks[0]
        if head == "qubits":
            if width is not None:
                fail(lineno, "duplicate 'qubits' line")
            if len(toks) != 2:
                fail(lineno, "usage: qubits <n>")
            width = parse_int(toks[1], lineno, "qubit count")
            if width < 1:
                fail(lineno, "qubit count must be positive")
        elif head == "input":
            if len(toks) != 2:
                fail(lineno, "usage: input <bitstring>")
            if width is None:
                fail(lineno, "'input' before 'qubits'")
            if len(toks[1]) != width or any(c not in "01" for c in toks[1]):
                fail(lineno, f"input must be a {width}-bit string")
            input_bits = toks[1]
        elif head == "inputblock":
            if len(toks) != 2:
                fail(lineno, "usage: inputblock <q1,q2,...>")
            labels = tuple(parse_int(t, lineno, "qubit")
                           for t in toks[1].split(","))
            for q in labels:
                check_qubit(q, lineno)
            if len(set(labels)) != len(labels):
                fail(lineno, "inputblock qubits repeat", DuplicateTarget)
            mat = read_matrix_rows(1 << len(labels), lineno, "inputblock")
            blk = DensityBlock(labels, mat)
            try:
                blk.validate()
            except ValueError as exc:
                fail(lineno, f"inputblock: {exc}")
            input_blocks.append(InputBlock(labels, mat))
        elif head == "defgate":
            if len(toks) != 3:
                fail(lineno, "usage: defgate <NAME> <arity>")
            name = toks[1]
            arity = parse_int(toks[2], lineno, "arity")
            mat = read_matrix_rows(1 << arity, lineno, f"defgate {name}")
            try:
                gates[name] = GateDef(name, arity, mat)
            except CircuitError as exc:
                fail(lineno, str(exc))
        elif head == "gate":
            if len(toks) < 3:
                fail(lineno, "usage: gate <NAME> <q> [<q2>]")
            name = toks[1]
            if name not in gates:
                fail(lineno, f"unknown gate {name!r}", UnknownGate)
            gate = gates[name]
            qs = tuple(parse_int(t, lineno, "qubit") for t in toks[2:])
            if len(qs) != gate.arity:
                fail(lineno, f"gate {name} takes {gate.arity} qubit(s)")
            for q in qs:
                check_qubit(q, lineno)
            if len(set(qs)) != len(qs):
                fail(lineno, f"gate {name} targets repeat", DuplicateTarget)
            steps.append(CircuitStep(gate, qs))
        elif head == "measure":
            if len(toks) != 2:
                fail(lineno, "usage: measure <q>")
            if measured is not None:
                fail(lineno, "duplicate 'measure' line")
            measured = parse_int(toks[1], lineno, "qubit")
            check_qubit(measured, lineno)
        else:
            fail(lineno, f"unknown directive {head!r}")

    if width is None:
        raise CircuitSyntaxError("missing 'qubits' line")
    if input_bits is None:
        input_bits = "0" * width
    return Circuit(width, input_bits, tuple(steps),
                   measured if measured is not None else 0,
                   tuple(input_blocks))


def serialize_circuit(circuit: Circuit) -> str:
    out = [f"qubits {circuit.width}", f"input {circuit.input_bits}"]
    for blk in circuit.input_blocks:
        out.append("inputblock " + ",".join(str(q) for q in blk.labels))
        dim = blk.matrix.rows
        for r in range(dim):
            out.append(" ".join(
                blk.matrix.at(r, s).to_text().replace(" ", "")
                for s in range(dim)))
    for step in circuit.steps:
        out.append("gate " + step.gate.name + " "
                   + " ".join(str(q) for q in step.targets))
    out.append(f"measure {circuit.measured_qubit}")
    return "\n".join(out) + "\n"


# -- deterministic generators ---

def _fixed_cells(n: int, p: int) -> list[tuple[int, ...]]:
    return [tuple(range(lo, min(lo + p, n))) for lo in range(0, n, p)]


def gen_block_local(n: int, p: int, steps: int, seed: int) -> Circuit:
    """Random circuit whose gates never cross a fixed partition into
    consecutive cells of size <= p, so every prefix state stays p-blocked."""
    if n < p or p < 1:
        raise CircuitError("need n >= p >= 1")
    rng = CounterRng(seed, tag="gen_block_local")
    cells = _fixed_cells(n, p)
    multi_cells = [c for c in cells if len(c) >= 2]
    input_bits = "".join(str(rng.coin_bit()) for _ in range(n))
    out: list[CircuitStep] = []
    for _ in range(steps):
        use_pair = multi_cells and rng.randrange(5) < 3
        if use_pair:
            cell = multi_cells[rng.randrange(len(multi_cells))]
            a = cell[rng.randrange(len(cell))]
            b = a
            while b == a:
                b = cell[rng.randrange(len(cell))]
            name = TWO_QUBIT_GATES[rng.randrange(len(TWO_QUBIT_GATES))]
            out.append(CircuitStep(LIBRARY[name], (a, b)))
        else:
            q = rng.randrange(n)
            name = ONE_QUBIT_GATES[rng.randrange(len(ONE_QUBIT_GATES))]
            out.append(CircuitStep(LIBRARY[name], (q,)))
    return Circuit(n, input_bits, tuple(out))


def gen_entangle_disentangle(n: int, p: int, steps: int, seed: int) -> Circuit:
    """Random circuit that entangles pairs across blocks and disentangles
    them again (each opening gate G paired with a later G^-1), plus classical
    reversible CNOT/CZ moves and SWAPs, so every prefix stays p-blocked.

    Entangling pairs need p >= 2; with p == 1 only moves that preserve full
    product structure are emitted (basis-controlled CNOT/CZ, SWAP, 1-qubit
    gates)."""
    if n < 2:
        raise CircuitError("need n >= 2")
    rng = CounterRng(seed, tag="gen_entangle_disentangle")
    input_bits = "".join(str(rng.coin_bit()) for _ in range(n))
    # tracked abstraction: basis value per qubit (None once in superposition)
    # and open entangled pairs.  Members of an open pair are frozen until the
    # pair closes, so the closing gate is an exact inverse and every qubit
    # outside open pairs is an exact single-qubit factor.
    basis: list[int | None] = [int(b) for b in input_bits]
    open_pairs: list[tuple[str, int, int, int | None, int | None]] = []
    frozen: set[int] = set()
    out: list[CircuitStep] = []

    while len(out) < steps:
        free = [q for q in range(n) if q not in frozen]
        moves = []
        if free:
            moves.append("single")
        if len(free) >= 2:
            moves.append("swap")
            if any(basis[q] is not None for q in free):
                moves.append("classical2")
            if p >= 2:
                moves += ["open", "open"]
        if open_pairs:
            moves += ["close", "close"]
        move = moves[rng.randrange(len(moves))]
        if move == "single":
            q = free[rng.randrange(len(free))]
            name = ONE_QUBIT_GATES[rng.randrange(len(ONE_QUBIT_GATES))]
            out.append(CircuitStep(LIBRARY[name], (q,)))
            if name == "H":
                basis[q] = None
            elif name in ("X", "Y") and basis[q] is not None:
                basis[q] ^= 1
        elif move == "swap":
            a = free[rng.randrange(len(free))]
            b = a
            while b == a:
                b = free[rng.randrange(len(free))]
            out.append(CircuitStep(LIBRARY["SWAP"], (a, b)))
            basis[a], basis[b] = basis[b], basis[a]
        elif move == "classical2":
            known = [q for q in free if basis[q] is not None]
            c = known[rng.randrange(len(known))]
            others = [q for q in free if q != c]
            t = others[rng.randrange(len(others))]
            if rng.coin_bit():
                out.append(CircuitStep(LIBRARY["CNOT"], (c, t)))
                if basis[c] == 1 and basis[t] is not None:
                    basis[t] ^= 1
            else:
                out.append(CircuitStep(LIBRARY["CZ"], (c, t)))
        elif move == "open":
            a = free[rng.randrange(len(free))]
            b = a
            while b == a:
                b = free[rng.randrange(len(free))]
            name = "CNOT" if rng.coin_bit() else "CZ"
            out.append(CircuitStep(LIBRARY[name], (a, b)))
            open_pairs.append((name, a, b, basis[a], basis[b]))
            frozen.update((a, b))
            basis[a] = basis[b] = None
        else:  # close
            name, a, b, ba, bb = open_pairs.pop(rng.randrange(len(open_pairs)))
            out.append(CircuitStep(LIBRARY[name], (a, b)))
            frozen.difference_update((a, b))
            basis[a], basis[b] = ba, bb
    return Circuit(n, input_bits, tuple(out[:steps]))
