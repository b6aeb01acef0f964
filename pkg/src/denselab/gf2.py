"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python integers, one bit per entry with
entry ``i`` at bit ``i`` (LSB first).  XOR of two rows is then a single integer
XOR regardless of width, which keeps rank computations over thousands of
columns fast without native code.

The :class:`RankTracker` maintains a fully reduced row basis together with
change-of-basis bookkeeping, so membership queries can report coefficients
over the *originally inserted* vectors rather than over the reduced basis.
"""

from collections.abc import Iterable

import numpy as np

from .errors import ContractViolationError


class BitVector:
    """Fixed-length vector over GF(2), packed into one integer."""

    __slots__ = ("length", "bits")

    def __init__(self, length: int, bits: int = 0):
        if length < 0:
            raise ContractViolationError("vector length must be >= 0")
        if bits < 0 or bits >> length:
            raise ContractViolationError("bits outside the stated length")
        self.length = length
        self.bits = bits

    @classmethod
    def from_bits(cls, entries: Iterable[int]) -> "BitVector":
        bits = 0
        n = 0
        for e in entries:
            if e & 1:
                bits |= 1 << n
            n += 1
        return cls(n, bits)

    def to_bits(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ContractViolationError("length mismatch in xor")
        return BitVector(self.length, self.bits ^ other.bits)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.length == other.length
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.length, self.bits))

    def __repr__(self) -> str:
        return f"BitVector({self.length}, 0b{self.bits:0{max(self.length, 1)}b})"

    def is_zero(self) -> bool:
        return self.bits == 0

    def weight(self) -> int:
        return self.bits.bit_count()


class BitMatrix:
    """Dense matrix over GF(2); each row is a bit-packed integer."""

    __slots__ = ("rows", "cols", "row_bits")

    def __init__(self, rows: int, cols: int, row_bits: list[int] | None = None):
        if rows < 0 or cols < 0:
            raise ContractViolationError("matrix dimensions must be >= 0")
        if row_bits is None:
            row_bits = [0] * rows
        if len(row_bits) != rows:
            raise ContractViolationError("row count does not match row data")
        mask = (1 << cols) - 1
        for r in row_bits:
            if r < 0 or r & ~mask:
                raise ContractViolationError("row bits outside column count")
        self.rows = rows
        self.cols = cols
        self.row_bits = list(row_bits)

    @classmethod
    def from_rows(cls, entries: Iterable[Iterable[int]], cols: int | None = None) -> "BitMatrix":
        vecs = [BitVector.from_bits(row) for row in entries]
        if cols is None:
            cols = vecs[0].length if vecs else 0
        for v in vecs:
            if v.length != cols:
                raise ContractViolationError("ragged rows")
        return cls(len(vecs), cols, [v.bits for v in vecs])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.row_bits[i])

    def to_rows(self) -> list[list[int]]:
        return [self.row(i).to_bits() for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.row_bits == other.row_bits
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.row_bits)))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def rank(m: BitMatrix) -> int:
    """Rank of ``m`` over GF(2) by row elimination (empty matrix has rank 0)."""
    pivots: dict[int, int] = {}
    r = 0
    for bits in m.row_bits:
        v = bits
        while v:
            p = v.bit_length() - 1
            row = pivots.get(p)
            if row is None:
                pivots[p] = v
                r += 1
                break
            v ^= row
    return r


def mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """GF(2) matrix product ``a @ b``: each output row XORs selected rows of b."""
    if a.cols != b.rows:
        raise ContractViolationError(
            f"dimension mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}"
        )
    out = []
    brows = b.row_bits
    for bits in a.row_bits:
        acc = 0
        t = bits
        while t:
            low = t & -t
            acc ^= brows[low.bit_length() - 1]
            t ^= low
        out.append(acc)
    return BitMatrix(a.rows, b.cols, out)


def random_dense(rows: int, cols: int, rng: np.random.Generator) -> BitMatrix:
    """Matrix with every entry an independent fair coin flip from ``rng``."""
    if rows < 0 or cols < 0:
        raise ContractViolationError("matrix dimensions must be >= 0")
    if rows == 0 or cols == 0:
        return BitMatrix(rows, cols)
    nbytes = (cols + 7) // 8
    mask = (1 << cols) - 1
    raw = rng.bytes(rows * nbytes)
    bits = [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") & mask
        for i in range(rows)
    ]
    return BitMatrix(rows, cols, bits)


class RankTracker:
    """Online row basis over GF(2) in fully reduced form.

    Accepted vectors ("originals") are kept in insertion order; every basis
    row stores the combination of originals that produced it, so a vector in
    the current span can be expressed over the originals, not just the basis.
    """

    __slots__ = ("dimension", "_row", "_combo", "_pivot_mask", "_accepted")

    def __init__(self, dimension: int):
        if dimension < 0:
            raise ContractViolationError("dimension must be >= 0")
        self.dimension = dimension
        self._row: dict[int, int] = {}
        self._combo: dict[int, int] = {}
        self._pivot_mask = 0
        self._accepted: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._row)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._row)

    @property
    def accepted_count(self) -> int:
        return len(self._accepted)

    def accepted_vector(self, ordinal: int) -> BitVector:
        return BitVector(self.dimension, self._accepted[ordinal])

    def _check(self, v: BitVector) -> None:
        if v.length != self.dimension:
            raise ContractViolationError(
                f"vector length {v.length} does not match tracker dimension {self.dimension}"
            )

    def _reduce(self, bits: int) -> tuple[int, int]:
        # Basis rows are fully reduced, so each XOR clears exactly one pivot
        # bit and never sets another; the loop runs at most `rank` times.
        cur = bits
        combo = 0
        t = cur & self._pivot_mask
        while t:
            p = t.bit_length() - 1
            cur ^= self._row[p]
            combo ^= self._combo[p]
            t = cur & self._pivot_mask
        return cur, combo

    def insert_bits(self, bits: int) -> bool:
        cur, combo = self._reduce(bits)
        if cur == 0:
            return False
        p = cur.bit_length() - 1
        combo |= 1 << len(self._accepted)
        probe = 1 << p
        for q, rowbits in self._row.items():
            if rowbits & probe:
                self._row[q] = rowbits ^ cur
                self._combo[q] ^= combo
        self._row[p] = cur
        self._combo[p] = combo
        self._pivot_mask |= probe
        self._accepted.append(bits)
        return True

    def insert(self, v: BitVector) -> bool:
        """Insert ``v``; True iff it was outside the current span."""
        self._check(v)
        return self.insert_bits(v.bits)

    def express_bits(self, bits: int) -> int | None:
        cur, combo = self._reduce(bits)
        return combo if cur == 0 else None

    def express_in_span(self, v: BitVector) -> BitVector | None:
        """Coefficients over the accepted originals reproducing ``v``, or None.

        The returned vector has one coordinate per accepted original, in
        insertion order; XOR of the originals selected by it equals ``v``.
        """
        self._check(v)
        combo = self.express_bits(v.bits)
        if combo is None:
            return None
        return BitVector(len(self._accepted), combo)
