"""Dense bit-packed linear algebra over GF(2).

Rows are packed 64 entries per machine word (numpy uint64).  All pivoting is
deterministic (first nonzero column, lowest row), so ranks, echelon forms and
kernel bases are reproducible across runs and platforms.  Values are treated
as immutable after construction; every operation returns fresh objects.
"""

from __future__ import annotations

import numpy as np

WORD = 64


class BrokenComplexError(Exception):
    """Raised when two maps presented as consecutive differentials do not compose to zero."""


def _nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def _pack(dense: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) 0/1 array into (rows, nwords) uint64, little-endian bits."""
    dense = np.asarray(dense, dtype=np.uint8) & 1
    rows, cols = dense.shape
    nw = _nwords(cols)
    if cols == 0:
        return np.zeros((rows, 0), dtype=np.uint64)
    padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
    padded[:, :cols] = dense
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if cols == 0:
        return np.zeros((rows, 0), dtype=np.uint8)
    bits = np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :cols].astype(np.uint8)


class BitVector:
    """A length-n vector over GF(2); addition is XOR."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        self.length = length
        if words is None:
            words = np.zeros(_nwords(length), dtype=np.uint64)
        self.words = words

    @classmethod
    def from_dense(cls, entries) -> "BitVector":
        arr = np.atleast_2d(np.asarray(entries, dtype=np.uint8))
        return cls(arr.shape[1], _pack(arr)[0])

    @classmethod
    def unit(cls, length: int, i: int) -> "BitVector":
        v = cls(length)
        w, b = divmod(i, WORD)
        v.words[w] |= np.uint64(1 << b)
        return v

    def to_dense(self) -> np.ndarray:
        return _unpack(self.words[None, :], self.length)[0]

    def __getitem__(self, i: int) -> int:
        w, b = divmod(i, WORD)
        return int(self.words[w] >> np.uint64(b)) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        return BitVector(self.length, self.words ^ other.words)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.length == other.length
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self):
        return hash((self.length, self.words.tobytes()))

    def is_zero(self) -> bool:
        return not self.words.any()

    def __repr__(self):
        return f"BitVector({list(self.to_dense())})"


class BitMatrix:
    """A rows x cols matrix over GF(2), rows bit-packed."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        self.rows = rows
        self.cols = cols
        if words is None:
            words = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        self.words = words

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            w, b = divmod(i, WORD)
            m.words[i, w] |= np.uint64(1 << b)
        return m

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(arr.shape[0], arr.shape[1], _pack(arr))

    @classmethod
    def from_columns(cls, columns: list[BitVector], length: int | None = None) -> "BitMatrix":
        """Matrix whose j-th column is columns[j]."""
        if length is None:
            if not columns:
                raise ValueError("need an explicit length for an empty column list")
            length = columns[0].length
        dense = np.zeros((length, len(columns)), dtype=np.uint8)
        for j, v in enumerate(columns):
            if v.length != length:
                raise ValueError("column length mismatch")
            dense[:, j] = v.to_dense()
        return cls.from_dense(dense)

    def to_dense(self) -> np.ndarray:
        return _unpack(self.words, self.cols)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.words.copy())

    def get(self, i: int, j: int) -> int:
        w, b = divmod(j, WORD)
        return int(self.words[i, w] >> np.uint64(b)) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.words[i].copy())

    def column(self, j: int) -> BitVector:
        dense = self.to_dense()
        return BitVector.from_dense(dense[:, j])

    def is_zero(self) -> bool:
        return not self.words.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.words.tobytes()))

    def mat_vec(self, v: BitVector) -> BitVector:
        if v.length != self.cols:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} times length {v.length}")
        if self.rows == 0 or self.cols == 0:
            return BitVector(self.rows)
        parities = np.bitwise_count(self.words & v.words[None, :]).sum(axis=1) & 1
        return BitVector.from_dense(parities.astype(np.uint8))

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """Matrix product self @ other over GF(2)."""
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        out = BitMatrix(self.rows, other.cols)
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return out
        left = self.to_dense().astype(bool)
        for i in range(self.rows):
            sel = left[i]
            if sel.any():
                out.words[i] = np.bitwise_xor.reduce(other.words[sel], axis=0)
        return out

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        dense = np.concatenate([self.to_dense(), other.to_dense()], axis=1)
        return BitMatrix.from_dense(dense)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        dense = np.concatenate([self.to_dense(), other.to_dense()], axis=0)
        return BitMatrix.from_dense(dense)

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"


def _eliminate(words: np.ndarray, cols: int) -> list[int]:
    """In-place reduced row echelon form; returns pivot column list."""
    nrows = words.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        w, b = divmod(c, WORD)
        mask = np.uint64(1 << b)
        piv = -1
        for i in range(r, nrows):
            if words[i, w] & mask:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            words[[r, piv]] = words[[piv, r]]
        hit = (words[:, w] & mask).astype(bool)
        hit[r] = False
        if hit.any():
            words[hit] ^= words[r]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    words = m.words.copy()
    pivots = _eliminate(words, m.cols)
    return BitMatrix(m.rows, m.cols, words), pivots


def rank(m: BitMatrix) -> int:
    words = m.words.copy()
    return len(_eliminate(words, m.cols))


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """Canonical echelon basis of the right kernel, ordered by free column index."""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = BitVector.unit(m.cols, f)
        for r, p in enumerate(pivots):
            if reduced.get(r, f):
                v = v ^ BitVector.unit(m.cols, p)
        basis.append(v)
    return basis


def solve(m: BitMatrix, b: BitVector) -> BitVector:
    """A solution x of m x = b; raises ValueError when inconsistent."""
    sols = solve_matrix(m, BitMatrix.from_columns([b], m.rows))
    return sols.column(0)


def solve_matrix(m: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Columnwise solutions X of m X = b; raises ValueError when inconsistent."""
    if b.rows != m.rows:
        raise ValueError("right-hand side length mismatch")
    aug = m.hstack(b) if b.cols else m.copy()
    words = aug.words.copy()
    pivots = _eliminate(words, m.cols)
    reduced = BitMatrix(m.rows, m.cols + b.cols, words)
    # rows without a pivot in the coefficient block must be zero in the rhs block
    for i in range(len(pivots), m.rows):
        for j in range(b.cols):
            if reduced.get(i, m.cols + j):
                raise ValueError("inconsistent linear system over GF(2)")
    out = np.zeros((m.cols, b.cols), dtype=np.uint8)
    for r, p in enumerate(pivots):
        for j in range(b.cols):
            out[p, j] = reduced.get(r, m.cols + j)
    return BitMatrix.from_dense(out)


def in_span(m: BitMatrix, v: BitVector) -> bool:
    """Whether v lies in the column span of m."""
    try:
        solve(m, v)
        return True
    except ValueError:
        return False


def cohomology_dim(d_in: BitMatrix, d_out: BitMatrix) -> int:
    """dim ker(d_out) - rank(d_in) for consecutive differentials d_in then d_out."""
    if d_out.cols != d_in.rows:
        raise ValueError(
            f"differentials do not compose: d_out has {d_out.cols} columns, "
            f"d_in has {d_in.rows} rows"
        )
    if not d_out.matmul(d_in).is_zero():
        raise BrokenComplexError("d_out . d_in is nonzero")
    return (d_out.cols - rank(d_out)) - rank(d_in)
