"""Decodability and exact logical Bell-measurement efficiencies.

A transversal BM on two code blocks yields, per qubit pair, the values of some
pair operators ``PP``.  Encode a pair-operator product as a symplectic vector
``[x | z]`` of length ``2N``.  The known functionals are

* ``S_avail``: sums of per-pair known pieces (full pair: both unit vectors,
  single X/Z: one of them, single Y: their sum), and
* ``Ann``: X-stabilizer rows in the X half and Z-stabilizer rows in the Z half,
  whose pair values are fixed by the code space.

A logical functional (``XX`` of logical ``t`` in the X half, ``ZZ`` in the Z
half) is determined iff it lies in ``S_avail + Ann``.  The fast path checks
this by mapping everything into the quotient by ``S_avail``.

Trigger bits of the guaranteed-information BMs are an affine function of the
outcome coefficients, so for a fixed erasure pattern the relevant outcomes
are an affine subspace enumerated in Gray-code order with a uniform
multiplicity.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import gf2
from .codes import CssCode, codeword_spaces
from .gf2 import BitVector
from .measurement import (
    BmAssignment,
    Formation,
    GuaranteedInfo,
    InfoSet,
    Probability,
    StateIndependent,
    Unconstrained,
    available_info,
)

DEFAULT_BUDGET = 1 << 22
BRUTE_FORCE_MAX_QUBITS = 10


class BudgetExceededError(RuntimeError):
    """The requested enumeration is larger than the work budget."""

    def __init__(self, estimate: int, budget: int, hint: str = ""):
        self.estimate = estimate
        self.budget = budget
        msg = f"enumeration needs about {estimate} steps, budget is {budget}"
        super().__init__(f"{msg}; {hint}" if hint else msg)


@dataclass(frozen=True)
class InfoConfiguration:
    """Per-qubit-pair available information."""

    infos: tuple[InfoSet, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "infos", tuple(self.infos))

    @classmethod
    def uniform(cls, info: InfoSet, n: int) -> InfoConfiguration:
        return cls((info,) * n)

    @classmethod
    def parse(cls, text: str) -> InfoConfiguration:
        """Parse a string of ``- X Y Z F`` characters (spaces ignored)."""
        return cls(tuple(InfoSet(c) for c in text if not c.isspace()))

    def __len__(self) -> int:
        return len(self.infos)

    def __str__(self) -> str:
        return "".join(i.value for i in self.infos)

    def masks(self) -> tuple[int, int, int, int]:
        """Bit masks of (full, single X, single Y, single Z) qubits."""
        out = {InfoSet.FULL: 0, InfoSet.X: 0, InfoSet.Y: 0, InfoSet.Z: 0}
        for j, info in enumerate(self.infos):
            if info in out:
                out[info] |= 1 << j
        return out[InfoSet.FULL], out[InfoSet.X], out[InfoSet.Y], out[InfoSet.Z]


# ---------------------------------------------------------------------------
# decodability


CRITERIA = ("full", "pure-type")


class _Decoder:
    """Quotient-map decodability test for one code.

    ``criterion="full"`` accepts any stabilizer-equivalent representative.
    ``"pure-type"`` only lets X-stabilizers dress logical X, Z-stabilizers
    dress logical Z, and asks for two of the logical XX, YY, ZZ values per
    logical qubit (YY representatives may use the whole group).
    """

    def __init__(self, code: CssCode, criterion: str = "full"):
        if criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
        n = code.n_qubits
        self.n = n
        self.k = code.n_logical
        self.criterion = criterion
        self.nmask = (1 << n) - 1
        self.ann_x = list(code.h_x.row_bits)
        self.ann_z = [r << n for r in code.h_z.row_bits]
        self.ann = self.ann_x + self.ann_z
        self.lx = [v.bits for v in code.logical_x]
        self.lz = [v.bits << n for v in code.logical_z]
        self.logicals = self.lx + self.lz

    def _keep(self, full: int, sx: int, sy: int, sz: int) -> int:
        return (~(full | sx | sy) & self.nmask) | ((~(full | sz) & self.nmask) << self.n)

    def _quotient_basis(self, rows: list[int], keep: int, sy: int) -> dict[int, int]:
        n = self.n
        basis: dict[int, int] = {}
        for v in rows:
            v = (v ^ ((v & sy) << n)) & keep
            while v:
                top = v.bit_length() - 1
                b = basis.get(top)
                if b is None:
                    basis[top] = v
                    break
                v ^= b
        return basis

    def _known(self, v: int, basis: dict[int, int], keep: int, sy: int) -> bool:
        return gf2.in_span_bits((v ^ ((v & sy) << self.n)) & keep, basis)

    def residues(self, full: int, sx: int, sy: int, sz: int) -> list[int]:
        n = self.n
        keep = self._keep(full, sx, sy, sz)
        basis = self._quotient_basis(self.ann, keep, sy)
        return [gf2.reduce_bits((v ^ ((v & sy) << n)) & keep, basis) for v in self.logicals]

    def decodable(self, full: int, sx: int, sy: int, sz: int) -> bool:
        if self.criterion == "full":
            return not any(self.residues(full, sx, sy, sz))
        keep = self._keep(full, sx, sy, sz)
        bx = self._quotient_basis(self.ann_x, keep, sy)
        bz = self._quotient_basis(self.ann_z, keep, sy)
        ball = self._quotient_basis(self.ann, keep, sy)
        for lx, lz in zip(self.lx, self.lz):
            hits = (
                self._known(lx, bx, keep, sy)
                + self._known(lz, bz, keep, sy)
                + self._known(lx ^ lz, ball, keep, sy)
            )
            if hits < 2:
                return False
        return True


def _check_config(code: CssCode, info: InfoConfiguration) -> None:
    if len(info) != code.n_qubits:
        raise ValueError(f"configuration has {len(info)} entries, code has {code.n_qubits} qubits")


def recoverable_logical_subspace(code: CssCode, info: InfoConfiguration) -> list[BitVector]:
    """Basis of the logical pair-operator classes whose values are determined.

    Coordinates ``0..k-1`` are the logical ``XX`` classes and ``k..2k-1`` the
    logical ``ZZ`` classes.
    """
    _check_config(code, info)
    residues = _Decoder(code).residues(*info.masks())
    width = len(residues)
    basis: dict[int, int] = {}
    kernel = []
    for i, r in enumerate(residues):
        v = (r << width) | (1 << i)
        while v >> width:
            top = v.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = v
                break
            v ^= b
        else:
            kernel.append(BitVector(width, v))
    return kernel


def decodable(code: CssCode, info: InfoConfiguration, criterion: str = "full") -> bool:
    """True iff every logical XX and ZZ value can be inferred."""
    _check_config(code, info)
    return _Decoder(code, criterion).decodable(*info.masks())


# ---------------------------------------------------------------------------
# loss tables


@dataclass(frozen=True)
class LossTable:
    """Exact counting table behind an efficiency.

    ``coefficients[(e_reg, e_s, r, f)]`` is the number of weighted outcome
    configurations that decode with ``e_reg`` erased ordinary pairs, ``e_s``
    erased-or-failed state-independent pairs, ``r`` rescued and ``f``
    unrescued ambiguous pairs.  The efficiency is

        sum c * eta^(n_reg - e_reg) (1 - eta)^e_reg
              * s^(n_s - e_s) (1 - s)^e_s * p_adv^r (1 - p_adv)^f / total

    with ``s = eta * p_bm``.
    """

    n_reg: int
    n_s: int
    total: int
    coefficients: dict[tuple[int, int, int, int], int]
    lossy: bool
    rescue: bool

    def evaluate(self, eta_tilde: Probability, p_adv: Probability = 0, p_bm: Probability = 1):
        if not self.lossy and eta_tilde != 1:
            raise ValueError("table was built without loss; only eta_tilde = 1 is valid")
        if not self.rescue and p_adv != 0:
            raise ValueError("table was built without rescue terms; only p_adv = 0 is valid")
        s = eta_tilde * p_bm
        acc = 0
        for (e_reg, e_s, r, f), c in self.coefficients.items():
            acc += (
                c
                * eta_tilde ** (self.n_reg - e_reg)
                * (1 - eta_tilde) ** e_reg
                * s ** (self.n_s - e_s)
                * (1 - s) ** e_s
                * p_adv**r
                * (1 - p_adv) ** f
            )
        if isinstance(acc, int):
            return Fraction(acc, self.total)
        if isinstance(acc, Fraction):
            return acc / self.total
        return acc / self.total

    def erasure_weights(self) -> list[Fraction]:
        """Decodable fraction summed per erasure weight, at ``p_adv = 0``.

        Only meaningful without state-independent pairs; entry ``j`` times
        ``eta^(N-j) (1-eta)^j`` summed over ``j`` is the efficiency.
        """
        out = [Fraction(0)] * (self.n_reg + 1)
        for (e_reg, e_s, r, f), c in self.coefficients.items():
            if r == 0 and e_s == 0:
                out[e_reg] += Fraction(c, self.total)
        return out


@dataclass(frozen=True)
class EfficiencyResult:
    """Logical BM efficiency with the counts behind it."""

    value: Fraction | float
    eta_tilde: Probability = 1
    success_count: int | None = None
    total_count: int | None = None
    table: LossTable | None = field(default=None, repr=False, compare=False)

    def __float__(self) -> float:
        return float(self.value)


class _Tabulator:
    """Precomputed integer data for one (code, formation) pair."""

    def __init__(self, code: CssCode, formation: Formation, sigma: int, criterion: str = "full"):
        formation.check_length(code.n_qubits)
        n = code.n_qubits
        self.n = n
        self.n_out = n + code.n_logical
        self.decoder = _Decoder(code, criterion)
        xm = ym = zm = um = sm = 0
        offset = 0
        for j, a in enumerate(formation):
            v = a.variant
            if isinstance(v, GuaranteedInfo):
                if v.basis == "X":
                    xm |= 1 << j
                elif v.basis == "Y":
                    ym |= 1 << j
                else:
                    zm |= 1 << j
                fire_bit = 1 ^ v.trigger ^ (sigma if v.basis == "Y" else 0)
                offset |= fire_bit << j
            elif isinstance(v, Unconstrained):
                um |= 1 << j
            else:
                sm |= 1 << j
        self.xm, self.ym, self.zm, self.um, self.sm = xm, ym, zm, um, sm
        self.gm = xm | ym | zm
        self.offset = offset
        # trigger bit t_j = 1 means the BM on pair j identifies the Bell state
        spaces = codeword_spaces(code)
        self.gens = [b.bits & (xm | ym) for b in spaces.c_x_basis]
        self.gens += [b.bits & (zm | ym) for b in spaces.c_z_basis]
        self.gens = [g for g in self.gens if g]
        self.rank_w = gf2.rank_bits(self.gens)
        self._memo: dict[tuple[int, int], bool] = {}

    def dec(self, erased: int, full: int) -> bool:
        key = (erased, full)
        hit = self._memo.get(key)
        if hit is None:
            single = self.gm & ~erased & ~full
            hit = self.decoder.decodable(full, single & self.xm, single & self.ym, single & self.zm)
            self._memo[key] = hit
        return hit

    def erasable(self, lossy: bool) -> int:
        return ((1 << self.n) - 1) if lossy else self.sm

    def estimate(self, lossy: bool, rescue: bool) -> int:
        g = self.gm.bit_count()
        others = self.n - g
        if lossy:
            per_g = 4 if rescue else 3
            return per_g**g * 2**others
        s = self.sm.bit_count()
        if rescue:
            return 2**s * min(3**g, 2 ** (self.rank_w + g))
        return 2**s * 2**self.rank_w

    def run(self, erasures: Sequence[int], rescue: bool) -> Counter:
        counts: Counter = Counter()
        n_out = self.n_out
        for erased in erasures:
            alive = ~erased & ((1 << self.n) - 1)
            e_reg = (erased & ~self.sm).bit_count()
            e_s = (erased & self.sm).bit_count()
            live_g = self.gm & alive
            basis = list(gf2.xor_basis(g & live_g for g in self.gens).values())
            mult = 1 << (n_out - len(basis))
            base_full = (self.um | self.sm) & alive
            for t in gf2.gray_span_bits(basis):
                trig = (t ^ self.offset) & live_g
                singles = live_g & ~trig
                n_single = singles.bit_count()
                if not rescue:
                    if self.dec(erased, trig | base_full):
                        counts[e_reg, e_s, 0, n_single] += mult
                    continue
                sub = singles
                while True:
                    if self.dec(erased, trig | base_full | sub):
                        r = sub.bit_count()
                        counts[e_reg, e_s, r, n_single - r] += mult
                    if sub == 0:
                        break
                    sub = (sub - 1) & singles
        return counts


def _submasks(mask: int) -> list[int]:
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            return out
        sub = (sub - 1) & mask


def _run_chunk(args) -> Counter:
    code, formation, sigma, criterion, erasures, rescue = args
    return _Tabulator(code, formation, sigma, criterion).run(erasures, rescue)


def _uniform_parameters(formation: Formation) -> tuple[Probability, Probability]:
    p_adv = {a.p_adv for a in formation if a.is_guaranteed}
    p_bm = {a.variant.p_bm for a in formation if isinstance(a.variant, StateIndependent)}
    if len(p_adv) > 1 or len(p_bm) > 1:
        raise ValueError(
            "the counting engine needs one p_adv for all guaranteed-information BMs "
            "and one p_bm for all state-independent BMs; use brute_force_reference "
            "for mixed values"
        )
    return (p_adv.pop() if p_adv else 0), (p_bm.pop() if p_bm else 1)


def _structure(formation: Formation) -> Formation:
    """Formation with probabilities stripped, used as a cache key."""
    out = []
    for a in formation:
        v = a.variant
        out.append(BmAssignment(StateIndependent(1) if isinstance(v, StateIndependent) else v))
    return Formation(tuple(out))


def loss_table(
    code: CssCode,
    formation: Formation,
    *,
    lossy: bool = True,
    rescue: bool | None = None,
    sigma: int = 0,
    criterion: str = "full",
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> LossTable:
    """Exact counting table for ``formation`` on ``code``.

    Args:
        lossy: Enumerate photon-loss erasures on every pair.  Without it only
            the failures of state-independent BMs are enumerated.
        rescue: Enumerate ``p_adv`` rescue subsets.  Defaults to whether any
            assignment has ``p_adv > 0``.
        sigma: YY sign convention.
        criterion: Decodability rule, see ``CRITERIA``.
        budget: Upper bound on enumeration steps.
        workers: Number of processes for the erasure loop.

    Raises:
        BudgetExceededError: if the estimated work exceeds ``budget``.
    """
    formation.check_length(code.n_qubits)
    _uniform_parameters(formation)
    if rescue is None:
        rescue = any(a.p_adv for a in formation if a.is_guaranteed)
    return _loss_table_cached(
        code, _structure(formation), lossy, bool(rescue), sigma, criterion, budget, workers
    )


@lru_cache(maxsize=256)
def _loss_table_cached(code, structure, lossy, rescue, sigma, criterion, budget, workers) -> LossTable:
    tab = _Tabulator(code, structure, sigma, criterion)
    estimate = tab.estimate(lossy, rescue)
    if estimate > budget:
        raise BudgetExceededError(
            estimate, budget, "use a smaller code, drop loss or p_adv, or raise the budget"
        )
    erasures = _submasks(tab.erasable(lossy))
    if workers > 1 and len(erasures) > 1:
        chunks = [erasures[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_run_chunk, [(code, structure, sigma, criterion, c, rescue) for c in chunks])
            counts: Counter = Counter()
            for part in parts:
                counts.update(part)
    else:
        counts = tab.run(erasures, rescue)
    n_s = tab.sm.bit_count()
    return LossTable(
        n_reg=code.n_qubits - n_s,
        n_s=n_s,
        total=1 << tab.n_out,
        coefficients=dict(sorted(counts.items())),
        lossy=lossy,
        rescue=rescue,
    )


def _result(table: LossTable, eta_tilde, p_adv, p_bm) -> EfficiencyResult:
    value = table.evaluate(eta_tilde, p_adv, p_bm)
    success = None
    if isinstance(value, Fraction) and (value * table.total).denominator == 1:
        success = int(value * table.total)
    return EfficiencyResult(value, eta_tilde, success, table.total if success is not None else None, table)


def efficiency_lossless(
    code: CssCode,
    formation: Formation,
    *,
    sigma: int = 0,
    criterion: str = "full",
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> EfficiencyResult:
    """Exact efficiency without photon loss.

    With ``p_adv = 0`` and no state-independent BMs the value is a count of
    decodable outcome pairs over ``2^(N+k)``.
    """
    p_adv, p_bm = _uniform_parameters(formation)
    table = loss_table(
        code, formation, lossy=False, sigma=sigma, criterion=criterion, budget=budget, workers=workers
    )
    return _result(table, 1, p_adv, p_bm)


def efficiency_with_loss(
    code: CssCode,
    formation: Formation,
    eta1: Probability,
    eta2: Probability = 1,
    *,
    sigma: int = 0,
    criterion: str = "full",
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> EfficiencyResult:
    """Efficiency when each pair survives with probability ``eta1 * eta2``.

    Exact when the inputs are Fractions or ints.
    """
    for name, eta in (("eta1", eta1), ("eta2", eta2)):
        if not 0 <= eta <= 1:
            raise ValueError(f"{name} must lie in [0, 1], got {eta}")
    p_adv, p_bm = _uniform_parameters(formation)
    table = loss_table(
        code, formation, lossy=True, sigma=sigma, criterion=criterion, budget=budget, workers=workers
    )
    return _result(table, eta1 * eta2, p_adv, p_bm)


def erasure_coefficients(code: CssCode, *, budget: int = DEFAULT_BUDGET, workers: int = 1) -> list[int]:
    """``e_j``: decodable erasure patterns of weight ``j`` under ideal BMs."""
    formation = Formation.from_variants([Unconstrained()] * code.n_qubits)
    table = loss_table(code, formation, lossy=True, budget=budget, workers=workers)
    return [int(w) for w in table.erasure_weights()]


def loss_polynomial(coefficients: Sequence[int], eta: Probability):
    """Evaluate ``sum_j e_j eta^(N-j) (1-eta)^j``."""
    n = len(coefficients) - 1
    return sum(e * eta ** (n - j) * (1 - eta) ** j for j, e in enumerate(coefficients))


# ---------------------------------------------------------------------------
# independent oracle


def _all_codewords(check_rows: Sequence[int], n: int) -> list[int]:
    return [v for v in range(1 << n) if all((v & r).bit_count() % 2 == 0 for r in check_rows)]


class _CosetOracle:
    """Decodability by searching every stabilizer element of each logical coset."""

    def __init__(self, code: CssCode, criterion: str = "full"):
        n = code.n_qubits
        self.n = n
        self.criterion = criterion
        x_group = list(gf2.gray_span_bits(list(gf2.xor_basis(code.h_x.row_bits).values())))
        z_group = [v << n for v in gf2.gray_span_bits(list(gf2.xor_basis(code.h_z.row_bits).values()))]
        self.group = [a ^ b for a in x_group for b in z_group]
        self.x_group, self.z_group = x_group, z_group
        self.lx = [v.bits for v in code.logical_x]
        self.lz = [v.bits << n for v in code.logical_z]
        logicals = self.lx + self.lz
        self.classes = []
        for coeffs in itertools.product((0, 1), repeat=len(logicals)):
            if any(coeffs):
                v = 0
                for c, l in zip(coeffs, logicals):
                    if c:
                        v ^= l
                self.classes.append(v)
        self._memo: dict[tuple[InfoSet, ...], bool] = {}

    def decodable(self, config: tuple[InfoSet, ...]) -> bool:
        hit = self._memo.get(config)
        if hit is not None:
            return hit
        n = self.n
        mask = (1 << n) - 1
        empty = xs = ys = zs = 0
        for j, info in enumerate(config):
            if info is InfoSet.EMPTY:
                empty |= 1 << j
            elif info is InfoSet.X:
                xs |= 1 << j
            elif info is InfoSet.Y:
                ys |= 1 << j
            elif info is InfoSet.Z:
                zs |= 1 << j

        def measurable(v: int) -> bool:
            vx, vz = v & mask, v >> n
            return not ((vx | vz) & empty or vz & xs or vx & zs or (vx ^ vz) & ys)

        if self.criterion == "full":
            hit = all(any(measurable(l ^ s) for s in self.group) for l in self.classes)
        else:
            hit = all(
                any(measurable(lx ^ s) for s in self.x_group)
                + any(measurable(lz ^ s) for s in self.z_group)
                + any(measurable(lx ^ lz ^ s) for s in self.group)
                >= 2
                for lx, lz in zip(self.lx, self.lz)
            )
        self._memo[config] = hit
        return hit


@lru_cache(maxsize=64)
def _oracle_weights(code: CssCode, formation: Formation, sigma: int, criterion: str) -> tuple:
    """Decodable probability mass summed per erasure weight."""
    n = code.n_qubits
    oracle = _CosetOracle(code, criterion)
    c_x = _all_codewords(code.h_x.row_bits, n)
    c_z = _all_codewords(code.h_z.row_bits, n)
    sums = [0] * (n + 1)
    for erased in range(1 << n):
        flags = [bool(erased >> j & 1) for j in range(n)]
        acc = 0
        for cx in c_x:
            for cz in c_z:
                dists = [
                    available_info(a, cx >> j & 1, cz >> j & 1, flags[j], sigma).items()
                    for j, a in enumerate(formation)
                ]
                for combo in itertools.product(*dists):
                    config = tuple(info for info, _ in combo)
                    if oracle.decodable(config):
                        w = 1
                        for _, p in combo:
                            w *= p
                        acc += w
        sums[erased.bit_count()] += acc
    total = len(c_x) * len(c_z)
    return tuple(s / total if not isinstance(s, int) else Fraction(s, total) for s in sums)


def brute_force_reference(
    code: CssCode,
    formation: Formation,
    eta1: Probability = 1,
    eta2: Probability = 1,
    *,
    sigma: int = 0,
    criterion: str = "full",
) -> EfficiencyResult:
    """Independent oracle for :func:`efficiency_with_loss`.

    Enumerates every erasure pattern and every outcome pair of the full
    spaces, draws per-pair information from :func:`available_info`, and
    decides decodability by coset search.  Test use only.

    Raises:
        BudgetExceededError: for codes with more than 10 qubits.
    """
    n = code.n_qubits
    if n > BRUTE_FORCE_MAX_QUBITS:
        raise BudgetExceededError(8**n, 8**BRUTE_FORCE_MAX_QUBITS, "brute force is limited to N <= 10")
    formation.check_length(n)
    eta = eta1 * eta2
    weights = _oracle_weights(code, formation, sigma, criterion)
    value = sum(w * eta ** (n - j) * (1 - eta) ** j for j, w in enumerate(weights))
    if not isinstance(value, (Fraction, float)):
        value = Fraction(value)
    return EfficiencyResult(value, eta)


__all__ = [
    "BudgetExceededError",
    "CRITERIA",
    "EfficiencyResult",
    "InfoConfiguration",
    "LossTable",
    "brute_force_reference",
    "decodable",
    "efficiency_lossless",
    "efficiency_with_loss",
    "erasure_coefficients",
    "loss_polynomial",
    "loss_table",
    "recoverable_logical_subspace",
]
