"""Canned BM formations and exhaustive formation search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import gf2
from ._code_data import COLOR_488_BOUNDARY
from .codes import CssCode, codeword_spaces, surface_layout
from .engine import DEFAULT_BUDGET, BudgetExceededError, _Decoder, efficiency_with_loss
from .measurement import BASES, Formation, GuaranteedInfo, Unconstrained, parse_variant

ALL_GUARANTEED = tuple(f"{b}{g}" for b in BASES for g in (0, 1))


def all_same(basis: str, trigger: int, n: int) -> Formation:
    """``n`` copies of one guaranteed-information BM."""
    bm = GuaranteedInfo(basis, trigger)
    return Formation.from_variants([bm] * n, name=f"all-{basis.lower()}{basis.lower()}{trigger}")


def unconstrained(n: int) -> Formation:
    return Formation.from_variants([Unconstrained()] * n, name="unconstrained")


def _from_tokens(tokens: Sequence[str], name: str) -> Formation:
    return Formation.parse(" ".join(tokens), name=name)


def qpc_optimal(n: int, m: int) -> Formation:
    """Mixed formation for qpc(n, m) reaching ``1 - 2^-(n+m-1)``.

    Block 0 gets ``Y1`` on its first qubit and ``X1`` on the rest; every other
    block is all ``Z1``.
    """
    if n < 1 or m < 1:
        raise ValueError("qpc_optimal needs n >= 1 and m >= 1")
    tokens = ["Z1"] * (n * m)
    for j in range(m):
        tokens[j] = "Y1" if j == 0 else "X1"
    return _from_tokens(tokens, "qpc-optimal")


def _bounce(length: int, extent: int) -> list[int]:
    """Walk of ``length`` steps in ``0..extent-1`` starting at the top, moving by one."""
    period = 2 * (extent - 1)
    out = []
    for c in range(length):
        phase = c % period
        out.append(extent - 1 - phase if phase <= extent - 1 else phase - (extent - 1))
    return out


def zigzag_support(n: int, m: int) -> list[int]:
    """Qubits of the zig-zag logical used by :func:`surface_zigzag`.

    For ``n >= m`` it is a Z-type logical crossing the ``n`` columns; for
    ``m > n`` an X-type logical crossing the ``m`` rows.
    """
    if min(n, m) < 2:
        raise ValueError("zig-zag formation needs n >= 2 and m >= 2")
    horiz, vert = surface_layout(n, m)
    support = []
    if n >= m:
        rows = _bounce(n, m)
        for c, r in enumerate(rows):
            support.append(horiz[r, c])
            if c + 1 < n:
                support.append(vert[min(r, rows[c + 1]), c])
    else:
        cols = _bounce(m, n)
        for r, c in enumerate(cols):
            support.append(horiz[r, c])
            if r + 1 < m:
                support.append(vert[r, min(c, cols[r + 1])])
    return sorted(support)


def surface_zigzag(n: int, m: int) -> Formation:
    """``Z1`` along a zig-zag Z logical, ``X1`` elsewhere (roles swapped if ``m > n``)."""
    support = set(zigzag_support(n, m))
    on, off = ("Z1", "X1") if n >= m else ("X1", "Z1")
    n_qubits = n * m + (n - 1) * (m - 1)
    return _from_tokens([on if q in support else off for q in range(n_qubits)], "zigzag")


def color_boundary(d: int, basis: str = "Z") -> Formation:
    """``Z1`` on one boundary of the triangular color code, ``X1`` elsewhere.

    ``basis="X"`` swaps the roles.
    """
    if d not in COLOR_488_BOUNDARY:
        raise ValueError(f"color_boundary supports d in {sorted(COLOR_488_BOUNDARY)}, got {d}")
    if basis not in ("X", "Z"):
        raise ValueError("basis must be 'X' or 'Z'")
    n_qubits = {3: 7, 5: 17, 7: 31}[d]
    boundary = set(COLOR_488_BOUNDARY[d])
    on, off = ("Z1", "X1") if basis == "Z" else ("X1", "Z1")
    return _from_tokens([on if q in boundary else off for q in range(n_qubits)], "color-boundary")


# ---------------------------------------------------------------------------
# exhaustive search


@dataclass(frozen=True)
class SearchResult:
    """Outcome of an exhaustive search.

    ``formations`` lists the first optimal formations in token order;
    ``n_optimal`` counts all of them.
    """

    value: Fraction | float
    formations: tuple[Formation, ...]
    n_optimal: int
    n_searched: int


def _search_space(candidates: Iterable[str]) -> dict[str, tuple[int, ...]]:
    triggers: dict[str, list[int]] = {}
    for token in candidates:
        v = parse_variant(token)
        if not isinstance(v, GuaranteedInfo):
            raise ValueError(f"search candidates must be guaranteed-information BMs, got {token!r}")
        triggers.setdefault(v.basis, []).append(v.trigger)
    if not triggers:
        raise ValueError("empty candidate set")
    return {b: tuple(sorted(set(t))) for b, t in sorted(triggers.items())}


def search_cost(code: CssCode, candidates: Iterable[str] = ALL_GUARANTEED, objective="lossless") -> int:
    space = _search_space(candidates)
    n = code.n_qubits
    n_formations = sum(len(t) for t in space.values()) ** n
    if objective == "lossless":
        return len(space) ** n * 2**n + n_formations
    return n_formations * 3**n


def exhaustive_search(
    code: CssCode,
    candidates: Iterable[str] = ALL_GUARANTEED,
    objective: str | Fraction | float = "lossless",
    *,
    max_results: int = 10,
    sigma: int = 0,
    criterion: str = "full",
    budget: int = DEFAULT_BUDGET,
) -> SearchResult:
    """Best formation over ``candidates`` on every qubit pair.

    Args:
        candidates: Guaranteed-information tokens such as ``"Z1"``.
        objective: ``"lossless"`` or a pair survival probability.
        max_results: How many optimal formations to return.
        sigma: YY sign convention.
        criterion: Decodability rule passed to the engine.
        budget: Work limit; see :func:`search_cost`.

    Raises:
        BudgetExceededError: if the search is larger than ``budget``.
    """
    candidates = tuple(candidates)
    cost = search_cost(code, candidates, objective)
    if cost > budget:
        raise BudgetExceededError(cost, budget, "restrict the candidate BM set or use a smaller code")
    space = _search_space(candidates)
    if objective == "lossless":
        scored = _score_lossless(code, space, sigma, criterion)
    else:
        scored = _score_lossy(code, space, objective, sigma, criterion)
    best = max(v for v, _ in scored)
    winners = sorted(tokens for v, tokens in scored if v == best)
    return SearchResult(
        value=best,
        formations=tuple(Formation.parse(t, name="search") for t in winners[:max_results]),
        n_optimal=len(winners),
        n_searched=len(scored),
    )


def _score_lossless(code: CssCode, space: dict[str, tuple[int, ...]], sigma: int, criterion: str):
    n = code.n_qubits
    total = 1 << (n + code.n_logical)
    nmask = (1 << n) - 1
    decoder = _Decoder(code, criterion)
    spaces = codeword_spaces(code)
    memo: dict[tuple[int, int, int, int], bool] = {}
    scored = []
    for bases in itertools.product(sorted(space), repeat=n):
        xm = ym = zm = 0
        for j, b in enumerate(bases):
            bit = 1 << j
            if b == "X":
                xm |= bit
            elif b == "Y":
                ym |= bit
            else:
                zm |= bit
        gens = [v.bits & (xm | ym) for v in spaces.c_x_basis] + [v.bits & (zm | ym) for v in spaces.c_z_basis]
        w_basis = gf2.xor_basis(gens)
        mult = total >> len(w_basis)
        # decodable trigger patterns summed per coset of the trigger space
        buckets: dict[int, int] = {}
        for full in range(1 << n):
            single = ~full & nmask
            key = (full, single & xm, single & ym, single & zm)
            hit = memo.get(key)
            if hit is None:
                hit = memo[key] = decoder.decodable(*key)
            if hit:
                rep = gf2.reduce_bits(full, w_basis)
                buckets[rep] = buckets.get(rep, 0) + 1
        for triggers in itertools.product(*(space[b] for b in bases)):
            offset = 0
            for j, (b, g) in enumerate(zip(bases, triggers)):
                offset |= (1 ^ g ^ (sigma if b == "Y" else 0)) << j
            count = buckets.get(gf2.reduce_bits(offset, w_basis), 0) * mult
            tokens = " ".join(f"{b}{g}" for b, g in zip(bases, triggers))
            scored.append((Fraction(count, total), tokens))
    return scored


def _score_lossy(code: CssCode, space, eta, sigma: int, criterion: str):
    scored = []
    for bases in itertools.product(sorted(space), repeat=code.n_qubits):
        for triggers in itertools.product(*(space[b] for b in bases)):
            tokens = " ".join(f"{b}{g}" for b, g in zip(bases, triggers))
            f = Formation.parse(tokens)
            scored.append((efficiency_with_loss(code, f, eta, sigma=sigma, criterion=criterion, budget=1 << 62).value, tokens))
    return scored


# ---------------------------------------------------------------------------
# catalog

# fig3b and fig3d are the first optimal formations, in token order, of a
# {X1, Y1, Z1} search; they reach 31/32 under both decodability criteria.
FIG3A = "X1 Z1 Z1 Z1 X1"
FIG3B = "X1 Z1 Y1 Z1 X1"
FIG3C = "Z1 Z1 Z1 X1 X1 X1 X1"
FIG3D = "X1 X1 Y1 X1 Z1 Z1 Z1"


@dataclass(frozen=True)
class FormationCatalogEntry:
    """A named formation with its claimed lossless efficiency.

    ``formula`` maps a code to the claimed exact value, or is None when the
    entry makes no claim for that code.
    """

    name: str
    build: Callable[[CssCode], Formation]
    formula: Callable[[CssCode], Fraction | None]
    description: str

    def applies_to(self, code: CssCode) -> bool:
        try:
            self.build(code)
        except ValueError:
            return False
        return True


def _family(code: CssCode) -> tuple[str | None, tuple]:
    return code.metadata.get("family"), tuple(code.metadata.get("params", ()))


def _require(code: CssCode, family: str, params: tuple | None = None) -> tuple:
    fam, got = _family(code)
    if fam != family or (params is not None and got != params):
        want = f"{family}{params}" if params else family
        raise ValueError(f"formation needs a {want} code, got {code.name}")
    return got


def _fixed(tokens: str, family: str, params: tuple, name: str) -> Callable[[CssCode], Formation]:
    def build(code: CssCode) -> Formation:
        _require(code, family, params)
        return Formation.parse(tokens, name=name)

    return build


def _no_claim(code: CssCode) -> None:
    return None


def _all_zz1_formula(code: CssCode) -> Fraction | None:
    fam, params = _family(code)
    if fam == "qpc":
        return 1 - Fraction(1, 2 ** params[0])
    if fam == "color":
        return Fraction(1, 2)
    return None


def _qpc_optimal_formula(code: CssCode) -> Fraction:
    n, m = _require(code, "qpc")
    if n == 1 or m == 1:
        return None
    return 1 - Fraction(1, 2 ** (n + m - 1))


def _zigzag_formula(code: CssCode) -> Fraction:
    n, m = _require(code, "surface")
    return 1 - Fraction(2, 4 ** max(n, m))


def _color_boundary_formula(code: CssCode) -> Fraction:
    (d,) = _require(code, "color")
    return 1 - Fraction(1, 2**d)


def _build_color_boundary(code: CssCode) -> Formation:
    (d,) = _require(code, "color")
    return color_boundary(d)


CATALOG: dict[str, FormationCatalogEntry] = {}


def _register(entry: FormationCatalogEntry) -> None:
    CATALOG[entry.name] = entry


def _populate() -> None:
    _register(FormationCatalogEntry(
        "all-zz1", lambda c: all_same("Z", 1, c.n_qubits), _all_zz1_formula, "Z1 on every pair"))
    _register(FormationCatalogEntry(
        "all-xx1", lambda c: all_same("X", 1, c.n_qubits), _no_claim, "X1 on every pair"))
    _register(FormationCatalogEntry(
        "unconstrained", lambda c: unconstrained(c.n_qubits), lambda c: Fraction(1), "ideal BMs"))
    _register(FormationCatalogEntry(
        "qpc-optimal", lambda c: qpc_optimal(*_require(c, "qpc")), _qpc_optimal_formula,
        "Y1 X1..X1 on block 0, Z1 elsewhere"))
    _register(FormationCatalogEntry(
        "zigzag", lambda c: surface_zigzag(*_require(c, "surface")), _zigzag_formula,
        "Z1 along a zig-zag logical, X1 elsewhere"))
    _register(FormationCatalogEntry(
        "color-boundary", _build_color_boundary, _color_boundary_formula,
        "Z1 on one boundary, X1 elsewhere"))
    _register(FormationCatalogEntry(
        "fig3a", _fixed(FIG3A, "surface", (2, 2), "fig3a"), lambda c: Fraction(7, 8),
        "surface(2,2) zig-zag"))
    _register(FormationCatalogEntry(
        "fig3b", _fixed(FIG3B, "surface", (2, 2), "fig3b"), lambda c: Fraction(31, 32),
        "surface(2,2) mixed X/Y/Z"))
    _register(FormationCatalogEntry(
        "fig3c", _fixed(FIG3C, "color", (3,), "fig3c"), lambda c: Fraction(7, 8),
        "Steane boundary formation"))
    _register(FormationCatalogEntry(
        "fig3d", _fixed(FIG3D, "color", (3,), "fig3d"), lambda c: Fraction(31, 32),
        "Steane mixed X/Y/Z"))
    _register(FormationCatalogEntry(
        "fig3e", lambda c: qpc_optimal(*_require(c, "qpc")), _qpc_optimal_formula,
        "same as qpc-optimal"))


_populate()


def catalog_formation(name: str, code: CssCode) -> Formation:
    """Build catalog formation ``name`` for ``code``."""
    try:
        entry = CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown formation {name!r}; known: {', '.join(CATALOG)}") from None
    return entry.build(code)
