"""Bit-packed linear algebra over GF(2).

Vectors are stored as Python integers where bit ``i`` holds entry ``i``.
The engine works directly on those integers in its hot loops; the
:class:`BitVector` and :class:`BitMatrix` wrappers are the public carriers.

Pauli operators on ``n`` qubits use the symplectic layout ``[x | z]``: bits
``0..n-1`` hold the X part and bits ``n..2n-1`` the Z part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def _mask(length: int) -> int:
    return (1 << length) - 1


@dataclass(frozen=True)
class BitVector:
    """Immutable bit string of fixed length."""

    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"payload does not fit in {self.length} bits")

    @classmethod
    def from_list(cls, entries: Iterable[int]) -> BitVector:
        entries = list(entries)
        bits = 0
        for i, e in enumerate(entries):
            if e not in (0, 1, True, False):
                raise ValueError(f"entry {i} is not a bit: {e!r}")
            if e:
                bits |= 1 << i
        return cls(len(entries), bits)

    @classmethod
    def from_string(cls, text: str) -> BitVector:
        """Parse a string such as ``"0110"`` (entry 0 first)."""
        bad = set(text) - {"0", "1"}
        if bad:
            raise ValueError(f"invalid bit characters {sorted(bad)!r}")
        return cls.from_list(int(c) for c in text)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        bits = 0
        for i in support:
            if not 0 <= i < length:
                raise IndexError(f"index {i} out of range for length {length}")
            bits |= 1 << i
        return cls(length, bits)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"index {i} out of range for length {self.length}")
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length):
            yield (self.bits >> i) & 1

    def _check(self, other: BitVector) -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} != {other.length}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits & other.bits)

    def dot(self, other: BitVector) -> int:
        """Inner product mod 2."""
        self._check(other)
        return (self.bits & other.bits).bit_count() & 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def to_list(self) -> list[int]:
        return list(self)

    def __str__(self) -> str:
        return "".join(str(b) for b in self)


@dataclass(frozen=True)
class BitMatrix:
    """Immutable dense binary matrix stored as packed rows."""

    n_cols: int
    row_bits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "row_bits", tuple(self.row_bits))
        for r, bits in enumerate(self.row_bits):
            if bits < 0 or bits >> self.n_cols:
                raise ValueError(f"row {r} does not fit in {self.n_cols} columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], n_cols: int | None = None) -> BitMatrix:
        vecs = [BitVector.from_list(r) for r in rows]
        if n_cols is None:
            if not vecs:
                raise ValueError("n_cols is required for an empty matrix")
            n_cols = vecs[0].length
        for r, v in enumerate(vecs):
            if v.length != n_cols:
                raise ValueError(f"row {r} has length {v.length}, expected {n_cols}")
        return cls(n_cols, tuple(v.bits for v in vecs))

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], n_cols: int | None = None) -> BitMatrix:
        if n_cols is None:
            if not vectors:
                raise ValueError("n_cols is required for an empty matrix")
            n_cols = vectors[0].length
        for v in vectors:
            if v.length != n_cols:
                raise ValueError("all rows must share the same length")
        return cls(n_cols, tuple(v.bits for v in vectors))

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> BitMatrix:
        return cls(n_cols, (0,) * n_rows)

    @property
    def n_rows(self) -> int:
        return len(self.row_bits)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def row(self, r: int) -> BitVector:
        return BitVector(self.n_cols, self.row_bits[r])

    def rows(self) -> list[BitVector]:
        return [BitVector(self.n_cols, b) for b in self.row_bits]

    def __getitem__(self, idx: tuple[int, int]) -> int:
        r, c = idx
        if not 0 <= c < self.n_cols:
            raise IndexError(f"column {c} out of range")
        return (self.row_bits[r] >> c) & 1

    def mul_vector(self, v: BitVector) -> BitVector:
        """Matrix-vector product ``M v`` over GF(2)."""
        if v.length != self.n_cols:
            raise ValueError("dimension mismatch")
        out = 0
        for r, bits in enumerate(self.row_bits):
            if (bits & v.bits).bit_count() & 1:
                out |= 1 << r
        return BitVector(self.n_rows, out)

    def transpose(self) -> BitMatrix:
        cols = []
        for c in range(self.n_cols):
            bits = 0
            for r, rb in enumerate(self.row_bits):
                if (rb >> c) & 1:
                    bits |= 1 << r
            cols.append(bits)
        return BitMatrix(self.n_rows, tuple(cols))

    def to_lists(self) -> list[list[int]]:
        return [list(BitVector(self.n_cols, b)) for b in self.row_bits]

    def __str__(self) -> str:
        return "\n".join(str(BitVector(self.n_cols, b)) for b in self.row_bits)


# ---------------------------------------------------------------------------
# integer-level kernels (used directly by the engine)


def rref_bits(rows: Iterable[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Reduced row-echelon form of packed rows, pivots at lowest column index.

    Returns the nonzero reduced rows (in pivot order) and the pivot columns.
    """
    work = [r for r in rows]
    pivots: list[int] = []
    reduced: list[int] = []
    for col in range(n_cols):
        bit = 1 << col
        hit = next((i for i, r in enumerate(work) if r & bit), None)
        if hit is None:
            continue
        p = work.pop(hit)
        work = [r ^ p if r & bit else r for r in work]
        reduced = [r ^ p if r & bit else r for r in reduced]
        reduced.append(p)
        pivots.append(col)
    return reduced, pivots


def rank_bits(rows: Iterable[int]) -> int:
    """Rank of a set of packed vectors (any width)."""
    return len(xor_basis(rows))


def xor_basis(rows: Iterable[int]) -> dict[int, int]:
    """Echelon basis keyed by leading (highest) bit.

    Reduction of a vector against this basis is ``reduce_bits``.
    """
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = v
                break
            v ^= b
    return basis


def reduce_bits(v: int, basis: dict[int, int]) -> int:
    """Canonical residue of ``v`` modulo the span of an echelon ``basis``.

    The residue has a zero at every leading bit of the basis and the map
    ``v -> residue`` is linear.
    """
    for top in sorted(basis, reverse=True):
        if v >> top & 1:
            v ^= basis[top]
    return v


def in_span_bits(v: int, basis: dict[int, int]) -> bool:
    while v:
        b = basis.get(v.bit_length() - 1)
        if b is None:
            return False
        v ^= b
    return True


def kernel_bits(rows: Sequence[int], n_cols: int) -> list[int]:
    """Basis of ``{v : r . v = 0 for all rows r}``, one vector per free column."""
    reduced, pivots = rref_bits(rows, n_cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for r, p in zip(reduced, pivots):
            if r >> free & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def gray_span_bits(basis: Sequence[int]) -> Iterator[int]:
    """All ``2**len(basis)`` combinations of ``basis`` in Gray-code order.

    Successive outputs differ by exactly one basis vector.
    """
    v = 0
    yield v
    for i in range(1, 1 << len(basis)):
        # index of the bit flipped between gray(i-1) and gray(i)
        v ^= basis[(i & -i).bit_length() - 1]
        yield v


# ---------------------------------------------------------------------------
# public operations


def rref(m: BitMatrix) -> tuple[BitMatrix, int, list[int]]:
    """Reduced row-echelon form of ``m``.

    Zero rows are dropped, so ``reduced.n_rows == rank``.

    Returns:
        (reduced, rank, pivot_columns)
    """
    reduced, pivots = rref_bits(m.row_bits, m.n_cols)
    return BitMatrix(m.n_cols, tuple(reduced)), len(pivots), pivots


def rank(m: BitMatrix) -> int:
    return rank_bits(m.row_bits)


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of the right null space of ``m``."""
    return [BitVector(m.n_cols, v) for v in kernel_bits(m.row_bits, m.n_cols)]


def row_space_contains(m: BitMatrix, v: BitVector) -> bool:
    if v.length != m.n_cols:
        raise ValueError("dimension mismatch")
    return in_span_bits(v.bits, xor_basis(m.row_bits))


def enumerate_span(basis: Sequence[BitVector], length: int | None = None) -> Iterator[BitVector]:
    """Yield every vector in the span of an independent ``basis``.

    Order is Gray code over the coefficient vector, starting at zero.
    ``length`` is only needed when ``basis`` is empty.

    Raises:
        ValueError: if the basis vectors are linearly dependent or of
            unequal length.
    """
    if not basis:
        yield BitVector(length or 0, 0)
        return
    length = basis[0].length
    if any(b.length != length for b in basis):
        raise ValueError("basis vectors must share the same length")
    if rank_bits(b.bits for b in basis) != len(basis):
        raise ValueError("basis vectors are linearly dependent")
    for bits in gray_span_bits([b.bits for b in basis]):
        yield BitVector(length, bits)


def symplectic_product(u: BitVector, v: BitVector) -> int:
    """Symplectic form of two ``[x | z]`` Pauli encodings (1 = anticommute)."""
    if u.length != v.length:
        raise ValueError(f"length mismatch: {u.length} != {v.length}")
    if u.length % 2:
        raise ValueError("symplectic vectors must have even length")
    return symplectic_bits(u.bits, v.bits, u.length // 2)


def symplectic_bits(u: int, v: int, n: int) -> int:
    m = _mask(n)
    ux, uz = u & m, u >> n
    vx, vz = v & m, v >> n
    return ((ux & vz).bit_count() + (uz & vx).bit_count()) & 1
