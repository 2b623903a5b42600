"""One-way repeater chains built on logical Bell measurements.

Each segment of length ``L0`` carries a code block through ``2N`` lossy modes;
a pair survives with probability ``eta1 * eta2`` where ``eta1 = exp(-L0 /
L_att)`` and ``eta2`` is the local Bell half's transmission.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from .codes import CssCode
from .engine import _uniform_parameters, loss_table
from .measurement import Formation, Probability

MAX_STATIONS = 10**6


@dataclass(frozen=True)
class ChannelModel:
    """Fiber attenuation and the local-half transmission convention."""

    attenuation_length: float = 22.0
    eta2: float = 1.0

    def __post_init__(self) -> None:
        if not self.attenuation_length > 0:
            raise ValueError("attenuation_length must be positive")
        if not 0 <= self.eta2 <= 1:
            raise ValueError("eta2 must lie in [0, 1]")

    def eta(self, length: float) -> float:
        """Single-mode transmission over ``length`` km."""
        return math.exp(-length / self.attenuation_length)


def grice_p_adv(v: int) -> Fraction:
    """Rescue probability ``1 - 2^-v`` of the Grice-type scheme at level ``v``."""
    return 1 - Fraction(1, 2**v)


def grice_level(p_adv: Probability) -> int:
    """Inverse of :func:`grice_p_adv`; ``p_adv = 0`` is level 0."""
    if p_adv == 0:
        return 0
    v = round(-math.log2(1 - float(p_adv)))
    if abs(float(grice_p_adv(v)) - float(p_adv)) > 1e-12:
        raise ValueError(f"p_adv = {p_adv} is not of the form 1 - 2^-v")
    return v


def ancillas_calibrated(v: int) -> int:
    """``2^(v+1) - 2`` ancilla photons per BM; reproduces the reference station counts."""
    return 2 ** (v + 1) - 2 if v > 0 else 0


def ancillas_plain(v: int) -> int:
    """``2^v - 2`` ancilla photons per BM, the naive Grice count."""
    return max(2**v - 2, 0)


COST_CONVENTIONS: dict[str, Callable[[int], int]] = {
    "calibrated": ancillas_calibrated,
    "plain": ancillas_plain,
}


@dataclass(frozen=True)
class CostModel:
    """Photon bookkeeping for the cost-normalized comparison.

    A station spends ``N * (2 + ancillas(v))`` photons per logical qubit sent:
    two photons per physical BM plus its ancillas.  Direct transmission spends
    one photon per qubit.
    """

    ancilla_photons_per_bm: Callable[[int], int] = field(default=ancillas_calibrated)

    @classmethod
    def named(cls, name: str) -> CostModel:
        try:
            return cls(COST_CONVENTIONS[name])
        except KeyError:
            raise ValueError(f"unknown cost convention {name!r}; known: {', '.join(COST_CONVENTIONS)}") from None

    def photons_per_station(self, n_qubits: int, v: int) -> int:
        return n_qubits * (2 + self.ancilla_photons_per_bm(v))

    @staticmethod
    def mode_count(n_qubits: int) -> int:
        return 2 * n_qubits


EtaLog = Callable[[float, float], float]


def eta_log_function(
    code: CssCode,
    formation: Formation,
    *,
    sigma: int = 0,
    criterion: str = "full",
) -> EtaLog:
    """``(eta1, eta2) -> eta_log`` evaluated from one exact loss table."""
    p_adv, p_bm = _uniform_parameters(formation)
    table = loss_table(code, formation, lossy=True, sigma=sigma, criterion=criterion)
    p_adv, p_bm = float(p_adv), float(p_bm)

    def eta_log(eta1: float, eta2: float = 1.0) -> float:
        return float(table.evaluate(float(eta1) * float(eta2), p_adv, p_bm))

    return eta_log


def chain_transmission(eta_log_fn: EtaLog, length: float, stations: int, channel: ChannelModel = ChannelModel()) -> float:
    """Probability that a logical qubit crosses ``length`` km in ``stations`` equal segments."""
    if stations < 1:
        raise ValueError("stations must be at least 1")
    segment = channel.eta(length / stations)
    return eta_log_fn(segment, channel.eta2) ** stations


def plob_bound(eta: float) -> float:
    """Repeaterless secret-key capacity ``-log2(1 - eta)`` of a pure-loss channel."""
    if not 0 <= eta < 1:
        raise ValueError("eta must lie in [0, 1)")
    return -math.log1p(-eta) / math.log(2)


@dataclass(frozen=True)
class SpacingResult:
    """Best segment length; ``spacing`` is None when the code never beats direct transmission."""

    spacing: float | None
    gain: float

    @property
    def helps(self) -> bool:
        return self.spacing is not None


def maximize_gain(
    eta_log_fn: EtaLog,
    channel: ChannelModel = ChannelModel(),
    *,
    bounds: tuple[float, float] | None = None,
    grid_points: int = 2000,
    xtol: float = 1e-4,
) -> SpacingResult:
    """Maximize ``eta_log(L0) / eta(L0)`` over the segment length.

    A grid scan locates the best bracket, then a bounded scalar minimizer
    refines it to ``xtol`` km.
    """
    lo, hi = bounds if bounds is not None else (0.01, 5 * channel.attenuation_length)

    def gain(length: float) -> float:
        eta1 = channel.eta(length)
        return eta_log_fn(eta1, channel.eta2) / eta1

    grid = np.linspace(lo, hi, grid_points)
    values = np.array([gain(x) for x in grid])
    i = int(np.argmax(values))
    left, right = grid[max(i - 1, 0)], grid[min(i + 1, grid_points - 1)]
    res = minimize_scalar(lambda x: -gain(x), bounds=(left, right), method="bounded", options={"xatol": xtol})
    if -res.fun >= values[i]:
        best_x, best_g = float(res.x), -float(res.fun)
    else:
        best_x, best_g = float(grid[i]), float(values[i])
    if best_g <= 1:
        return SpacingResult(None, best_g)
    return SpacingResult(best_x, best_g)


def optimize_spacing(
    code: CssCode,
    formation: Formation,
    p_adv: Probability = 0,
    channel: ChannelModel = ChannelModel(),
    *,
    sigma: int = 0,
    criterion: str = "full",
) -> SpacingResult:
    """Segment length maximizing the gain over direct transmission."""
    fn = eta_log_function(code, formation.with_p_adv(p_adv), sigma=sigma, criterion=criterion)
    return maximize_gain(fn, channel)


def count_stations(
    eta_log_fn: EtaLog,
    n_qubits: int,
    spacing: float,
    *,
    benchmark: str = "direct-with-cost",
    v: int = 0,
    channel: ChannelModel = ChannelModel(),
    cost: CostModel = CostModel(),
    max_stations: int = MAX_STATIONS,
) -> int | None:
    """Smallest station count for which the repeater beats ``benchmark``.

    Args:
        benchmark: ``"direct-with-cost"`` compares ``gain^S`` with the photon
            cost ``S * photons_per_station``; ``"plob"`` compares the per-mode
            rate ``eta_log^S / (2N)`` with the repeaterless bound at ``S * L0``.
        v: Ancilla level used for the photon cost.

    Returns:
        The count, or None when no count up to ``max_stations`` works.
    """
    if benchmark not in BENCHMARKS:
        raise ValueError(f"unknown benchmark {benchmark!r}")
    eta1 = channel.eta(spacing)
    log_eta_log = math.log(eta_log_fn(eta1, channel.eta2))
    if benchmark == "direct-with-cost":
        log_gain = log_eta_log - math.log(eta1)
        if log_gain <= 0:
            return None
        per_station = math.log(cost.photons_per_station(n_qubits, v))
        for s in range(1, max_stations + 1):
            if s * log_gain > math.log(s) + per_station:
                return s
        return None
    log_modes = math.log(cost.mode_count(n_qubits))
    for s in range(1, max_stations + 1):
        bound = plob_bound(channel.eta(s * spacing))
        if bound == 0:
            return s
        if s * log_eta_log - log_modes > math.log(bound):
            return s
    return None


BENCHMARKS = ("direct-with-cost", "plob")


def stations_to_beat(
    code: CssCode,
    formation: Formation,
    p_adv: Probability = 0,
    channel: ChannelModel = ChannelModel(),
    benchmark: str = "direct-with-cost",
    cost: CostModel = CostModel(),
    *,
    sigma: int = 0,
    criterion: str = "full",
    max_stations: int = MAX_STATIONS,
) -> int | None:
    """Stations needed at the optimal spacing; None when the benchmark is out of reach."""
    fn = eta_log_function(code, formation.with_p_adv(p_adv), sigma=sigma, criterion=criterion)
    best = maximize_gain(fn, channel)
    if not best.helps:
        return None
    return count_stations(
        fn,
        code.n_qubits,
        best.spacing,
        benchmark=benchmark,
        v=grice_level(p_adv),
        channel=channel,
        cost=cost,
        max_stations=max_stations,
    )


@dataclass(frozen=True)
class RepeaterRow:
    v: int
    p_adv: Fraction
    spacing: float | None
    gain: float
    stations_cost: int | None
    stations_plob: int | None


def repeater_row(
    code: CssCode,
    formation: Formation,
    p_adv: Probability,
    *,
    channel: ChannelModel = ChannelModel(),
    cost: CostModel = CostModel(),
    sigma: int = 0,
    criterion: str = "full",
) -> RepeaterRow:
    """Spacing, gain and both station counts at one rescue probability."""
    v = grice_level(p_adv)
    fn = eta_log_function(code, formation.with_p_adv(p_adv), sigma=sigma, criterion=criterion)
    best = maximize_gain(fn, channel)
    counts = [None, None]
    if best.helps:
        counts = [
            count_stations(fn, code.n_qubits, best.spacing, benchmark=b, v=v, channel=channel, cost=cost)
            for b in BENCHMARKS
        ]
    return RepeaterRow(v, Fraction(p_adv), best.spacing, best.gain, *counts)


def repeater_table(
    code: CssCode,
    formation: Formation,
    levels: Iterable[int] = range(1, 8),
    **kwargs,
) -> list[RepeaterRow]:
    """One :func:`repeater_row` per ancilla level ``v``."""
    return [repeater_row(code, formation, grice_p_adv(v), **kwargs) for v in levels]
