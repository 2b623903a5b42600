"""CSS codes: validation, logical operators and the built-in code families."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import gf2
from ._code_data import COLOR_488_FACES, GOLAY_CHECK_ROWS
from .gf2 import BitMatrix, BitVector

# Brute-force distance search is skipped above this many coset generators.
MAX_DISTANCE_DIM = 24


class CodeError(ValueError):
    """Base class for invalid code input."""


class CssViolationError(CodeError):
    """An X-type and a Z-type generator overlap on an odd number of qubits."""

    def __init__(self, x_row: int, z_row: int):
        self.x_row = x_row
        self.z_row = z_row
        super().__init__(
            f"CSS condition violated: HX row {x_row} and HZ row {z_row} have odd overlap"
        )


class NoLogicalQubitError(CodeError):
    """The stabilizer group leaves no logical qubit."""


class CodeParseError(CodeError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class CodewordSpaces:
    """Bases of C_X = ker(HX) and C_Z = ker(HZ).

    C_X holds the possible transversal XX outcome strings and C_Z the
    possible ZZ strings.
    """

    c_x_basis: tuple[BitVector, ...]
    c_z_basis: tuple[BitVector, ...]

    @property
    def dim_x(self) -> int:
        return len(self.c_x_basis)

    @property
    def dim_z(self) -> int:
        return len(self.c_z_basis)


@dataclass(frozen=True, eq=False)
class CssCode:
    """A validated CSS code.

    Build instances with :func:`validate` or one of the constructors; the
    initializer does not check anything.
    """

    n_qubits: int
    n_logical: int
    h_x: BitMatrix
    h_z: BitMatrix
    logical_x: tuple[BitVector, ...]
    logical_z: tuple[BitVector, ...]
    name: str = "css"
    metadata: dict = field(default_factory=dict, compare=False)

    @cached_property
    def rank_x(self) -> int:
        return gf2.rank(self.h_x)

    @cached_property
    def rank_z(self) -> int:
        return gf2.rank(self.h_z)

    @cached_property
    def distance_x(self) -> int | None:
        """Minimum weight of a nontrivial X-type logical operator."""
        return _min_logical_weight(self.h_z, self.h_x)

    @cached_property
    def distance_z(self) -> int | None:
        return _min_logical_weight(self.h_x, self.h_z)

    @property
    def distance(self) -> int | None:
        if self.distance_x is None or self.distance_z is None:
            return None
        return min(self.distance_x, self.distance_z)

    def same_stabilizer_group(self, other: CssCode) -> bool:
        """True when both codes have identical X and Z stabilizer row spaces."""
        if self.n_qubits != other.n_qubits:
            return False
        return _same_row_space(self.h_x, other.h_x) and _same_row_space(self.h_z, other.h_z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CssCode):
            return NotImplemented
        return self.same_stabilizer_group(other)

    def __hash__(self) -> int:
        return hash((self.n_qubits, self.n_logical, self.rank_x, self.rank_z))

    def __repr__(self) -> str:
        return f"CssCode({self.name!r}, N={self.n_qubits}, k={self.n_logical})"


def _same_row_space(a: BitMatrix, b: BitMatrix) -> bool:
    ra, _, _ = gf2.rref(a)
    rb, _, _ = gf2.rref(b)
    return ra.row_bits == rb.row_bits


def _min_logical_weight(check: BitMatrix, stabilizers: BitMatrix) -> int | None:
    """Min weight over ker(check) minus rowspace(stabilizers)."""
    kernel = gf2.kernel_bits(check.row_bits, check.n_cols)
    if len(kernel) > MAX_DISTANCE_DIM:
        return None
    stab = gf2.xor_basis(stabilizers.row_bits)
    best = None
    for v in gf2.gray_span_bits(kernel):
        if not v:
            continue
        w = v.bit_count()
        if best is not None and w >= best:
            continue
        if not gf2.in_span_bits(v, stab):
            best = w
    return best


def _logical_classes(check: BitMatrix, stabilizers: BitMatrix) -> list[int]:
    """Canonical coset representatives spanning ker(check) / rowspace(stabilizers)."""
    n = check.n_cols
    stab_reduced, _ = gf2.rref_bits(stabilizers.row_bits, n)
    basis = gf2.xor_basis(stab_reduced)
    reps = []
    for v in gf2.kernel_bits(check.row_bits, n):
        if gf2.in_span_bits(v, basis):
            continue
        reps.append(v)
        basis = gf2.xor_basis(list(basis.values()) + [v])
    # residues modulo the stabilizer rref, so the representatives are canonical
    stab_basis = gf2.xor_basis(stab_reduced)
    return [gf2.reduce_bits(v, stab_basis) for v in reps]


def _invert_gf2(matrix: list[list[int]]) -> list[list[int]]:
    k = len(matrix)
    aug = [row[:] + [int(i == j) for j in range(k)] for i, row in enumerate(matrix)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col]), None)
        if piv is None:
            raise CodeError("logical operators could not be paired")
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(k):
            if r != col and aug[r][col]:
                aug[r] = [a ^ b for a, b in zip(aug[r], aug[col])]
    return [row[k:] for row in aug]


def logical_operators(h_x: BitMatrix, h_z: BitMatrix) -> tuple[list[BitVector], list[BitVector]]:
    """Paired logical X and Z representatives.

    X representatives span ker(HZ) modulo rowspace(HX); Z representatives
    span ker(HX) modulo rowspace(HZ).  The pairing satisfies
    ``logical_x[s] . logical_z[t] = delta_st``.
    """
    n = h_x.n_cols
    xs = _logical_classes(h_z, h_x)
    zs = _logical_classes(h_x, h_z)
    if len(xs) != len(zs):
        raise CodeError("inconsistent logical dimension")
    k = len(xs)
    pairing = [[(x & z).bit_count() & 1 for z in zs] for x in xs]
    inv = _invert_gf2(pairing)
    paired_z = []
    for t in range(k):
        v = 0
        for u in range(k):
            # Z'_t = sum_u inv[u][t] Z_u gives pairing . inv = identity
            if inv[u][t]:
                v ^= zs[u]
        paired_z.append(v)
    return [BitVector(n, v) for v in xs], [BitVector(n, v) for v in paired_z]


def validate(h_x: BitMatrix, h_z: BitMatrix, name: str = "css", **metadata) -> CssCode:
    """Check the CSS condition and build a :class:`CssCode`.

    Raises:
        CssViolationError: an HX row and an HZ row overlap oddly.
        NoLogicalQubitError: the code encodes no logical qubit.
    """
    if h_x.n_cols != h_z.n_cols:
        raise CodeError(f"HX has {h_x.n_cols} columns but HZ has {h_z.n_cols}")
    n = h_x.n_cols
    for i, xr in enumerate(h_x.row_bits):
        for j, zr in enumerate(h_z.row_bits):
            if (xr & zr).bit_count() & 1:
                raise CssViolationError(i, j)
    k = n - gf2.rank(h_x) - gf2.rank(h_z)
    if k <= 0:
        raise NoLogicalQubitError(f"code on {n} qubits encodes no logical qubit")
    lx, lz = logical_operators(h_x, h_z)
    assert len(lx) == k
    return CssCode(n, k, h_x, h_z, tuple(lx), tuple(lz), name, dict(metadata))


def codeword_spaces(code: CssCode) -> CodewordSpaces:
    n = code.n_qubits
    cx = tuple(BitVector(n, v) for v in gf2.kernel_bits(code.h_x.row_bits, n))
    cz = tuple(BitVector(n, v) for v in gf2.kernel_bits(code.h_z.row_bits, n))
    return CodewordSpaces(cx, cz)


def _matrix(n: int, supports: Iterable[Iterable[int]]) -> BitMatrix:
    return BitMatrix(n, tuple(BitVector.from_support(n, s).bits for s in supports))


def from_supports(
    n: int,
    x_supports: Sequence[Iterable[int]],
    z_supports: Sequence[Iterable[int]],
    name: str = "css",
    **metadata,
) -> CssCode:
    """Build a code from 0-indexed generator supports."""
    return validate(_matrix(n, x_supports), _matrix(n, z_supports), name, **metadata)


# ---------------------------------------------------------------------------
# code families


def qpc(n: int, m: int) -> CssCode:
    """Quantum parity code with ``n`` blocks of ``m`` qubits.

    Qubit ``(block l, position j)`` has index ``l * m + j``.
    """
    if n < 1 or m < 1:
        raise ValueError("qpc needs n >= 1 and m >= 1")
    z_gens = [(l * m + j, l * m + j + 1) for l in range(n) for j in range(m - 1)]
    x_gens = [range(l * m, (l + 2) * m) for l in range(n - 1)]
    return from_supports(n * m, x_gens, z_gens, f"qpc({n},{m})", family="qpc", params=(n, m))


def surface_layout(n: int, m: int) -> tuple[dict[tuple[int, int], int], dict[tuple[int, int], int]]:
    """Qubit indices of the planar surface(n, m) lattice.

    Rows of ``n`` horizontal edges alternate with rows of ``n - 1`` vertical
    edges, numbered row-major.  Returns maps ``(row, col) -> qubit`` for the
    horizontal edges (``row < m``) and for the vertical edges (``row < m - 1``,
    the vertical edge ``(r, c)`` joins horizontal rows ``r`` and ``r + 1``
    between columns ``c`` and ``c + 1``).
    """
    horiz: dict[tuple[int, int], int] = {}
    vert: dict[tuple[int, int], int] = {}
    q = 0
    for r in range(m):
        for c in range(n):
            horiz[r, c] = q
            q += 1
        if r < m - 1:
            for c in range(n - 1):
                vert[r, c] = q
                q += 1
    return horiz, vert


def planar_surface(n: int, m: int) -> CssCode:
    """Planar surface code with two rough and two smooth boundaries.

    Minimum Z-logical weight is ``n`` and minimum X-logical weight is ``m``.
    """
    if n < 1 or m < 1:
        raise ValueError("planar_surface needs n >= 1 and m >= 1")
    horiz, vert = surface_layout(n, m)
    z_gens = []
    for r in range(m - 1):
        for c in range(n):
            face = [horiz[r, c], horiz[r + 1, c]]
            face += [vert[r, cc] for cc in (c - 1, c) if (r, cc) in vert]
            z_gens.append(sorted(face))
    x_gens = []
    for r in range(m):
        for c in range(n - 1):
            star = [horiz[r, c], horiz[r, c + 1]]
            star += [vert[rr, c] for rr in (r - 1, r) if (rr, c) in vert]
            x_gens.append(sorted(star))
    return from_supports(
        len(horiz) + len(vert), x_gens, z_gens, f"surface({n},{m})", family="surface", params=(n, m)
    )


STEANE_X = ((0, 2, 4, 6), (1, 2, 5, 6), (3, 4, 5, 6))


def steane() -> CssCode:
    """The [[7,1,3]] Steane code; X and Z generators share supports."""
    return from_supports(7, STEANE_X, STEANE_X, "steane", family="color", params=(3,))


def color_488(d: int) -> CssCode:
    """Triangular 4.8.8 color code of distance ``d`` from the embedded tables.

    Every face carries one X and one Z generator.  ``d = 3`` is the Steane
    code with its usual numbering.
    """
    if d not in COLOR_488_FACES:
        raise ValueError(f"color_488 supports d in {sorted(COLOR_488_FACES)}, got {d}")
    n, faces = COLOR_488_FACES[d]
    return from_supports(n, faces, faces, f"color({d})", family="color", params=(d,))


def golay() -> CssCode:
    """The [[23,1,7]] code built from the binary Golay code's check matrix."""
    rows = [BitVector.from_string(r).bits for r in GOLAY_CHECK_ROWS]
    h = BitMatrix(23, tuple(rows))
    return validate(h, h, "golay", family="golay", params=())


# ---------------------------------------------------------------------------
# text format


def load_code(text: str, name: str = "file") -> CssCode:
    """Parse the plain-text code format.

    Format::

        # comment
        N 7 K 1
        HX
        1010101
        ...
        HZ
        ...
    """
    n = k = None
    section = None
    rows: dict[str, list[int]] = {"HX": [], "HZ": []}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "N":
            if len(tokens) != 4 or tokens[2] != "K":
                raise CodeParseError(lineno, "expected 'N <int> K <int>'")
            try:
                n, k = int(tokens[1]), int(tokens[3])
            except ValueError:
                raise CodeParseError(lineno, "N and K must be integers") from None
            continue
        if tokens[0] in rows:
            if len(tokens) != 1:
                raise CodeParseError(lineno, f"unexpected text after {tokens[0]}")
            section = tokens[0]
            continue
        if section is None or n is None:
            raise CodeParseError(lineno, "row data before header and section")
        if len(tokens) != 1:
            raise CodeParseError(lineno, "rows must not contain spaces")
        bits = tokens[0]
        if len(bits) != n:
            raise CodeParseError(lineno, f"row has {len(bits)} entries, expected {n}")
        bad = [c for c in bits if c not in "01"]
        if bad:
            raise CodeParseError(lineno, f"invalid bit character {bad[0]!r}")
        rows[section].append(BitVector.from_string(bits).bits)
    if n is None:
        raise CodeParseError(0, "missing 'N <int> K <int>' header")
    code = validate(BitMatrix(n, tuple(rows["HX"])), BitMatrix(n, tuple(rows["HZ"])), name)
    if code.n_logical != k:
        raise CodeError(f"header says K={k} but the matrices encode k={code.n_logical}")
    return code


def dump_code(code: CssCode) -> str:
    lines = [f"# {code.name}", f"N {code.n_qubits} K {code.n_logical}", "HX"]
    lines += [str(r) for r in code.h_x.rows()]
    lines.append("HZ")
    lines += [str(r) for r in code.h_z.rows()]
    return "\n".join(lines) + "\n"
