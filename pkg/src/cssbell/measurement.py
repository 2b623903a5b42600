"""Physical Bell-measurement models and the information they yield.

Bell states of one qubit pair are indexed by their outcome bits ``(x, z)``
(XX and ZZ eigenvalues, +1 -> 0 and -1 -> 1):

=====  =====  ===
state  (x,z)  idx
=====  =====  ===
Phi+   (0,0)  0
Phi-   (1,0)  1
Psi+   (0,1)  2
Psi-   (1,1)  3
=====  =====  ===

A guaranteed-information BM ``(basis, trigger)`` always returns the
eigenvalue of its basis and returns full information when that value equals
``trigger``.  The YY bit is ``x ^ z ^ sigma``; ``sigma = 0`` treats
``Y1Y2 = X1X2 Z1Z2`` and ``sigma = 1`` keeps the operator sign.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Real
from typing import Iterable, Sequence, Union

Probability = Union[Fraction, float, int]

BASES = ("X", "Y", "Z")


class InfoSet(Enum):
    """What is learned about one qubit pair."""

    EMPTY = "-"
    X = "X"
    Y = "Y"
    Z = "Z"
    FULL = "F"

    @classmethod
    def single(cls, basis: str) -> InfoSet:
        return cls(basis)

    @property
    def is_single(self) -> bool:
        return self in (InfoSet.X, InfoSet.Y, InfoSet.Z)

    def known_paulis(self) -> frozenset[str]:
        """Pair operators ``PP`` whose value is known."""
        if self is InfoSet.FULL:
            return frozenset(BASES)
        if self is InfoSet.EMPTY:
            return frozenset()
        return frozenset(self.value)

    def __le__(self, other: InfoSet) -> bool:
        return self.known_paulis() <= other.known_paulis()


def _check_probability(p: Probability, name: str, *, upper_open: bool = False) -> None:
    if not isinstance(p, Real):
        raise TypeError(f"{name} must be a real number, got {p!r}")
    if p < 0 or p > 1 or (upper_open and p == 1):
        bound = "[0, 1)" if upper_open else "[0, 1]"
        raise ValueError(f"{name} must lie in {bound}, got {p}")


@dataclass(frozen=True)
class GuaranteedInfo:
    basis: str
    trigger: int

    def __post_init__(self) -> None:
        if self.basis not in BASES:
            raise ValueError(f"basis must be one of {BASES}, got {self.basis!r}")
        if self.trigger not in (0, 1):
            raise ValueError(f"trigger must be 0 or 1, got {self.trigger!r}")

    def guaranteed_bit(self, x_bit: int, z_bit: int, sigma: int = 0) -> int:
        if self.basis == "X":
            return x_bit
        if self.basis == "Z":
            return z_bit
        return x_bit ^ z_bit ^ sigma

    def identifies(self, x_bit: int, z_bit: int, sigma: int = 0) -> bool:
        return self.guaranteed_bit(x_bit, z_bit, sigma) == self.trigger

    @property
    def token(self) -> str:
        return f"{self.basis}{self.trigger}"


@dataclass(frozen=True)
class Unconstrained:
    """An ideal BM that always identifies the pair's Bell state."""

    token = "U"


@dataclass(frozen=True)
class StateIndependent:
    """Identifies every Bell state with probability ``p_bm``, else learns nothing."""

    p_bm: Probability

    def __post_init__(self) -> None:
        _check_probability(self.p_bm, "p_bm")

    @property
    def token(self) -> str:
        return f"S({self.p_bm})"


Variant = Union[GuaranteedInfo, Unconstrained, StateIndependent]


@dataclass(frozen=True)
class BmAssignment:
    """One physical BM model, optionally enhanced.

    ``p_adv`` is the probability that an ancilla-assisted variant rescues an
    outcome the plain BM would leave ambiguous.  It only affects
    guaranteed-information BMs.
    """

    variant: Variant
    p_adv: Probability = 0

    def __post_init__(self) -> None:
        _check_probability(self.p_adv, "p_adv", upper_open=True)

    @classmethod
    def parse(cls, token: str, p_adv: Probability = 0) -> BmAssignment:
        return cls(parse_variant(token), p_adv)

    @property
    def token(self) -> str:
        return self.variant.token

    @property
    def is_guaranteed(self) -> bool:
        return isinstance(self.variant, GuaranteedInfo)


_S_TOKEN = re.compile(r"S\(([^()]+)\)")


def parse_variant(token: str) -> Variant:
    """Parse one of ``X0 X1 Y0 Y1 Z0 Z1 U S(p)``."""
    token = token.strip()
    if len(token) == 2 and token[0] in BASES and token[1] in "01":
        return GuaranteedInfo(token[0], int(token[1]))
    if token == "U":
        return Unconstrained()
    match = _S_TOKEN.fullmatch(token)
    if match:
        try:
            p = Fraction(match.group(1).strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad probability in token {token!r}") from None
        return StateIndependent(p)
    raise ValueError(f"unknown BM token {token!r}")


@dataclass(frozen=True)
class Formation:
    """One BM assignment per qubit pair."""

    assignments: tuple[BmAssignment, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignments", tuple(self.assignments))

    @classmethod
    def parse(cls, text: str, p_adv: Probability = 0, name: str = "") -> Formation:
        tokens = text.split()
        if not tokens:
            raise ValueError("empty formation string")
        return cls(tuple(BmAssignment.parse(t, p_adv) for t in tokens), name)

    @classmethod
    def from_variants(cls, variants: Iterable[Variant], p_adv: Probability = 0, name: str = "") -> Formation:
        return cls(tuple(BmAssignment(v, p_adv) for v in variants), name)

    def __len__(self) -> int:
        return len(self.assignments)

    def __iter__(self):
        return iter(self.assignments)

    def __getitem__(self, i: int) -> BmAssignment:
        return self.assignments[i]

    @property
    def tokens(self) -> str:
        return " ".join(a.token for a in self.assignments)

    def __str__(self) -> str:
        return self.tokens

    def with_p_adv(self, p_adv: Probability) -> Formation:
        return Formation(tuple(BmAssignment(a.variant, p_adv) for a in self.assignments), self.name)

    def check_length(self, n_qubits: int) -> None:
        if len(self.assignments) != n_qubits:
            raise ValueError(
                f"formation has {len(self.assignments)} entries but the code has {n_qubits} qubits"
            )


def available_info(
    bm: BmAssignment, x_bit: int, z_bit: int, erased: bool, sigma: int = 0
) -> dict[InfoSet, Probability]:
    """Distribution of the information one physical BM yields.

    Args:
        bm: The BM applied to this qubit pair.
        x_bit: The pair's XX outcome bit (its entry of the C_X codeword).
        z_bit: The pair's ZZ outcome bit (its entry of the C_Z codeword).
        erased: Whether a photon of the pair was lost.
        sigma: YY sign convention.

    Returns:
        Mapping from InfoSet to probability; zero-probability entries are
        omitted.
    """
    if erased:
        return {InfoSet.EMPTY: 1}
    v = bm.variant
    if isinstance(v, Unconstrained):
        return {InfoSet.FULL: 1}
    if isinstance(v, StateIndependent):
        return _drop_zero({InfoSet.FULL: v.p_bm, InfoSet.EMPTY: 1 - v.p_bm})
    if v.identifies(x_bit, z_bit, sigma):
        return {InfoSet.FULL: 1}
    return _drop_zero({InfoSet.FULL: bm.p_adv, InfoSet.single(v.basis): 1 - bm.p_adv})


def _drop_zero(dist: dict[InfoSet, Probability]) -> dict[InfoSet, Probability]:
    return {k: p for k, p in dist.items() if p != 0}


# ---------------------------------------------------------------------------
# Charlie's mixture over the six guaranteed-information BMs


class InfeasibleError(ValueError):
    """Target identification probabilities beat the ancilla-free bound."""


def identified_states(bm: GuaranteedInfo, sigma: int = 0) -> tuple[int, int]:
    """Indices of the two Bell states a guaranteed-information BM identifies."""
    return tuple(s for s in range(4) if bm.identifies(s & 1, s >> 1, sigma))


@dataclass(frozen=True)
class CharlieMixture:
    """A random choice among the six guaranteed-information BMs.

    After a full identification of state ``i`` Charlie reports failure with
    probability ``withhold[i]``; this is only nonzero when the requested
    probabilities sum to less than 2.
    """

    weights: dict[GuaranteedInfo, Fraction]
    withhold: tuple[Fraction, Fraction, Fraction, Fraction] = (Fraction(0),) * 4
    sigma: int = 0

    def identification_probabilities(self) -> tuple[Fraction, ...]:
        probs = [Fraction(0)] * 4
        for bm, w in self.weights.items():
            for s in identified_states(bm, self.sigma):
                probs[s] += w
        return tuple(p * (1 - h) for p, h in zip(probs, self.withhold))


def _as_fraction(p: Probability) -> Fraction:
    return p if isinstance(p, Fraction) else Fraction(p)


def charlie_distribution(p: Sequence[Probability], sigma: int = 0) -> CharlieMixture:
    """Mix guaranteed-information BMs to hit per-state identification rates.

    Args:
        p: Desired identification probability for each Bell state, indexed as
            in the module table.
        sigma: YY sign convention used to label the YY BMs.

    Raises:
        InfeasibleError: if the probabilities sum to more than 2.
    """
    if len(p) != 4:
        raise ValueError("need exactly four probabilities")
    target = [_as_fraction(x) for x in p]
    for x in target:
        if x < 0 or x > 1:
            raise ValueError(f"probabilities must lie in [0, 1], got {x}")
    if sum(target) > 2:
        raise InfeasibleError(f"sum of probabilities {sum(target)} exceeds 2")

    # lift to a dominating tuple on the boundary sum == 2
    lifted = list(target)
    deficit = 2 - sum(lifted)
    for i in sorted(range(4), key=lambda i: -lifted[i]):
        add = min(deficit, 1 - lifted[i])
        lifted[i] += add
        deficit -= add
    withhold = tuple(Fraction(0) if q == 0 else 1 - t / q for t, q in zip(target, lifted))

    order = sorted(range(4), key=lambda i: lifted[i])
    q = [lifted[i] for i in order]

    # move p_1 onto the other three so the smallest becomes zero
    delta = [Fraction(0)] * 4
    rest = q[0]
    for i in (1, 2, 3):
        delta[i] = min(rest, 1 - q[i])
        rest -= delta[i]
    aux = [Fraction(0)] + [q[i] + delta[i] for i in (1, 2, 3)]

    pair = {
        frozenset((2, 3)): (aux[3] + aux[2] - aux[1]) / 2,
        frozenset((1, 2)): (aux[2] + aux[1] - aux[3]) / 2,
        frozenset((1, 3)): (aux[3] + aux[1] - aux[2]) / 2,
    }
    # shift mass back: state i hands delta_i to state 0 proportionally
    shifted: dict[frozenset, Fraction] = {}
    for members, w in pair.items():
        i, j = sorted(members)
        take_i = delta[i] * w / aux[i] if aux[i] else Fraction(0)
        take_j = delta[j] * w / aux[j] if aux[j] else Fraction(0)
        for key, amount in (
            (members, w - take_i - take_j),
            (frozenset((0, j)), take_i),
            (frozenset((0, i)), take_j),
        ):
            shifted[key] = shifted.get(key, Fraction(0)) + amount

    by_states = {}
    for basis in BASES:
        for trigger in (0, 1):
            bm = GuaranteedInfo(basis, trigger)
            by_states[frozenset(identified_states(bm, sigma))] = bm
    weights = {bm: Fraction(0) for bm in by_states.values()}
    for members, w in shifted.items():
        states = frozenset(order[i] for i in members)
        weights[by_states[states]] += w
    return CharlieMixture(weights, withhold, sigma)
