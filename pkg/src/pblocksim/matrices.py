"""Dense small-matrix linear algebra over exact scalars.

States stay exact end to end; only the trace norm goes through floats (it
needs eigenvalues, which leave the field Q(i, sqrt2)).  The Hermitian
eigensolve embeds the complex matrix into a real symmetric one of doubled
dimension and runs cyclic Jacobi sweeps, so the only numeric kernel is a
2x2 rotation.
"""

from __future__ import annotations

import math

from .exact import ExactScalar, ZERO, ONE

_JACOBI_EPS = 1e-13
_PSD_TOL = 1e-10


class DimensionMismatch(ValueError):
    pass


class NotHermitian(ValueError):
    pass


class LabelNotInBlock(ValueError):
    pass


class BadPermutation(ValueError):
    pass


class ExactMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: list[ExactScalar]):
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, "
                f"got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, row_lists) -> "ExactMatrix":
        rows = len(row_lists)
        cols = len(row_lists[0]) if rows else 0
        flat = []
        for row in row_lists:
            if len(row) != cols:
                raise DimensionMismatch("ragged rows")
            flat.extend(row)
        return cls(rows, cols, flat)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        ent = [ZERO] * (n * n)
        for i in range(n):
            ent[i * n + i] = ONE
        return cls(n, n, ent)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, [ZERO] * (rows * cols))

    def at(self, i: int, j: int) -> ExactScalar:
        return self.entries[i * self.cols + j]

    def dagger(self) -> "ExactMatrix":
        ent = [None] * (self.rows * self.cols)
        for i in range(self.rows):
            base = i * self.cols
            for j in range(self.cols):
                ent[j * self.rows + i] = self.entries[base + j].conjugate()
        return ExactMatrix(self.cols, self.rows, ent)

    def trace(self) -> ExactScalar:
        if self.rows != self.cols:
            raise DimensionMismatch("trace of a non-square matrix")
        acc = ZERO
        for i in range(self.rows):
            acc = acc + self.entries[i * self.cols + i]
        return acc

    def add(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("matrix add shape mismatch")
        return ExactMatrix(self.rows, self.cols,
                           [x + y for x, y in zip(self.entries, other.entries)])

    def sub(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("matrix sub shape mismatch")
        return ExactMatrix(self.rows, self.cols,
                           [x - y for x, y in zip(self.entries, other.entries)])

    def scale(self, s: ExactScalar) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [s * x for x in self.entries])

    def to_complex_rows(self) -> list[list[complex]]:
        return [[self.entries[i * self.cols + j].to_complex()
                 for j in range(self.cols)] for i in range(self.rows)]

    def __repr__(self):
        body = "; ".join(
            " ".join(self.at(i, j).to_text() for j in range(self.cols))
            for i in range(self.rows))
        return f"ExactMatrix({self.rows}x{self.cols}: {body})"


def mat_eq(a: ExactMatrix, b: ExactMatrix) -> bool:
    if a.rows != b.rows or a.cols != b.cols:
        raise DimensionMismatch("comparing matrices of different shapes")
    return all(x == y for x, y in zip(a.entries, b.entries))


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(
            f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = [ZERO] * (a.rows * b.cols)
    for i in range(a.rows):
        arow = i * a.cols
        orow = i * b.cols
        for k in range(a.cols):
            aik = a.entries[arow + k]
            if aik.is_zero():
                continue
            brow = k * b.cols
            for j in range(b.cols):
                bkj = b.entries[brow + j]
                if bkj.is_zero():
                    continue
                out[orow + j] = out[orow + j] + aik * bkj
    return ExactMatrix(a.rows, b.cols, out)


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Tensor product; the first factor supplies the high-order index bits."""
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    out = [ZERO] * (rows * cols)
    for i in range(a.rows):
        for j in range(a.cols):
            aij = a.entries[i * a.cols + j]
            if aij.is_zero():
                continue
            for k in range(b.rows):
                orow = (i * b.rows + k) * cols + j * b.cols
                brow = k * b.cols
                for l in range(b.cols):
                    bkl = b.entries[brow + l]
                    if not bkl.is_zero():
                        out[orow + l] = aij * bkl
    return ExactMatrix(rows, cols, out)


def is_unitary(u: ExactMatrix) -> bool:
    if u.rows != u.cols:
        return False
    return mat_eq(mat_mul(u.dagger(), u), ExactMatrix.identity(u.rows))


def is_hermitian(h: ExactMatrix) -> bool:
    if h.rows != h.cols:
        return False
    for i in range(h.rows):
        for j in range(i, h.cols):
            if h.at(i, j) != h.at(j, i).conjugate():
                return False
    return True


class DensityBlock:
    """Density matrix on an ordered tuple of global qubit labels.

    The first label corresponds to the most significant index bit of the
    matrix.  Trace-one and Hermiticity are exact invariants; positive
    semidefiniteness is only checked numerically (validate()).
    """

    __slots__ = ("labels", "matrix")

    def __init__(self, labels, matrix: ExactMatrix):
        self.labels = tuple(labels)
        k = len(self.labels)
        if matrix.rows != matrix.cols or matrix.rows != (1 << k):
            raise DimensionMismatch(
                f"block on {k} qubits needs a {1 << k}x{1 << k} matrix")
        self.matrix = matrix

    def size(self) -> int:
        return len(self.labels)

    def validate(self) -> None:
        if not is_hermitian(self.matrix):
            raise NotHermitian("density block is not exactly Hermitian")
        if self.matrix.trace() != ONE:
            raise ValueError("density block trace is not exactly 1")
        low = min_eigenvalue_float(self.matrix)
        if low < -_PSD_TOL:
            raise ValueError(f"density block not PSD (min eigenvalue {low})")

    def __repr__(self):
        return f"DensityBlock(labels={self.labels}, {self.matrix!r})"


def partial_trace(rho: DensityBlock, keep) -> DensityBlock:
    """Exact reduced state on the kept labels (original order preserved)."""
    keep = tuple(keep)
    if not keep:
        raise LabelNotInBlock("keep set must be nonempty")
    for label in keep:
        if label not in rho.labels:
            raise LabelNotInBlock(f"label {label} not in block {rho.labels}")
    kept = tuple(l for l in rho.labels if l in set(keep))
    k = len(rho.labels)
    kept_pos = [rho.labels.index(l) for l in kept]
    other_pos = [p for p in range(k) if p not in kept_pos]
    nk, no = len(kept_pos), len(other_pos)
    dim_out = 1 << nk
    out = [ZERO] * (dim_out * dim_out)
    src = rho.matrix

    def build(idx_bits, positions):
        full = 0
        for bit_i, pos in enumerate(positions):
            if (idx_bits >> (len(positions) - 1 - bit_i)) & 1:
                full |= 1 << (k - 1 - pos)
        return full

    kept_masks = [build(i, kept_pos) for i in range(dim_out)]
    other_masks = [build(e, other_pos) for e in range(1 << no)]
    for r in range(dim_out):
        for s in range(dim_out):
            acc = ZERO
            for om in other_masks:
                acc = acc + src.at(kept_masks[r] | om, kept_masks[s] | om)
            out[r * dim_out + s] = acc
    return DensityBlock(kept, ExactMatrix(dim_out, dim_out, out))


def relabel_reorder(rho: DensityBlock, new_label_order) -> DensityBlock:
    """Permute tensor factors so labels appear in the requested order."""
    new_order = tuple(new_label_order)
    if sorted(new_order) != sorted(rho.labels) or \
            len(set(new_order)) != len(new_order):
        raise BadPermutation(
            f"{new_order} is not a permutation of {rho.labels}")
    k = len(rho.labels)
    dim = 1 << k
    # position of each new label in the old ordering
    old_pos = [rho.labels.index(l) for l in new_order]

    def to_old(idx: int) -> int:
        out = 0
        for new_p, old_p in enumerate(old_pos):
            if (idx >> (k - 1 - new_p)) & 1:
                out |= 1 << (k - 1 - old_p)
        return out

    index_map = [to_old(i) for i in range(dim)]
    src = rho.matrix
    ent = [src.at(index_map[r], index_map[s])
           for r in range(dim) for s in range(dim)]
    return DensityBlock(new_order, ExactMatrix(dim, dim, ent))


def kron_blocks(blocks) -> DensityBlock:
    """Tensor together density blocks; labels concatenate in order."""
    blocks = list(blocks)
    out = blocks[0]
    for nxt in blocks[1:]:
        out = DensityBlock(out.labels + nxt.labels, kron(out.matrix, nxt.matrix))
    return out


def product_over_partition(rho: DensityBlock, parts) -> DensityBlock:
    """kron of the exact reduced states of `parts`, reordered to rho's labels."""
    reduced = [partial_trace(rho, part) for part in parts]
    assembled = kron_blocks(reduced)
    return relabel_reorder(assembled, rho.labels)


# -- numeric trace norm (cyclic Jacobi on the real symmetric embedding) ---

def _jacobi_eigenvalues(a: list[list[float]], eps: float = _JACOBI_EPS,
                        max_sweeps: int = 100) -> list[float]:
    n = len(a)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            row = a[p]
            for q in range(p + 1, n):
                if abs(row[q]) > off:
                    off = abs(row[q])
        if off <= eps:
            break
        for p in range(n):
            for q in range(p + 1, n):
                apq = a[p][q]
                if abs(apq) <= eps:
                    continue
                app, aqq = a[p][p], a[q][q]
                phi = 0.5 * math.atan2(2.0 * apq, aqq - app)
                c = math.cos(phi)
                s = math.sin(phi)
                for i in range(n):
                    aip, aiq = a[i][p], a[i][q]
                    a[i][p] = c * aip - s * aiq
                    a[i][q] = s * aip + c * aiq
                for i in range(n):
                    api, aqi = a[p][i], a[q][i]
                    a[p][i] = c * api - s * aqi
                    a[q][i] = s * api + c * aqi
    return [a[i][i] for i in range(n)]


def _hermitian_eigenvalues_float(h: ExactMatrix) -> list[float]:
    """Eigenvalues of the float image of an exactly Hermitian matrix."""
    if not is_hermitian(h):
        raise NotHermitian("matrix is not exactly Hermitian")
    n = h.rows
    z = h.to_complex_rows()
    big = [[0.0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            re, im = z[i][j].real, z[i][j].imag
            big[i][j] = re
            big[i + n][j + n] = re
            big[i + n][j] = im
            big[i][j + n] = -im
    eig = _jacobi_eigenvalues(big)
    # each eigenvalue of h appears twice; keep one copy by value pairing
    eig.sort()
    return eig[::2]


def trace_norm_float(h: ExactMatrix) -> float:
    """Sum of |eigenvalues| of an exactly Hermitian matrix, numerically."""
    if all(e.is_zero() for e in h.entries):
        if h.rows != h.cols:
            raise NotHermitian("matrix is not square")
        return 0.0
    return sum(abs(v) for v in _hermitian_eigenvalues_float(h))


def min_eigenvalue_float(h: ExactMatrix) -> float:
    if all(e.is_zero() for e in h.entries):
        return 0.0
    return min(_hermitian_eigenvalues_float(h))
