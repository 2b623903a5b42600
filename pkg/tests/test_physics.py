"""State-vector oracle: logical Bell states measured by coarse-grained pair projectors.

Independent of the engine's algebra.  Each guaranteed-information BM is the
three-outcome projective measurement {the two identified Bell states, the
span of the other two}; an outcome record succeeds when exactly one logical
Bell state is consistent with it.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from cssbell import codes, gf2
from cssbell.engine import efficiency_lossless
from cssbell.measurement import Formation

BELL = {
    (0, 0): np.array([1, 0, 0, 1]) / np.sqrt(2),
    (1, 0): np.array([1, 0, 0, -1]) / np.sqrt(2),
    (0, 1): np.array([0, 1, 1, 0]) / np.sqrt(2),
    (1, 1): np.array([0, 1, -1, 0]) / np.sqrt(2),
}


def logical_states(code):
    n = code.n_qubits
    zero = np.zeros(2**n)
    for s in gf2.gray_span_bits(list(gf2.xor_basis(code.h_x.row_bits).values())):
        zero[s] += 1
    lx = code.logical_x[0].bits
    one = np.zeros(2**n)
    one[np.arange(2**n) ^ lx] = zero
    return zero / np.linalg.norm(zero), one / np.linalg.norm(one)


def logical_bell_states(code):
    zero, one = logical_states(code)
    out = {}
    for x in (0, 1):
        for z in (0, 1):
            a, b = (zero, one) if z else (zero, zero)
            c, d = (one, zero) if z else (one, one)
            # qubit q of the first block is bit q, of the second block bit n + q
            v = np.kron(b, a) + (-1) ** x * np.kron(d, c)
            out[x, z] = v / np.linalg.norm(v)
    return out


def outcome_groups(token, sigma):
    if token == "U":
        return [[s] for s in BELL]
    basis, trigger = token[0], int(token[1])
    bit = lambda x, z: {"X": x, "Z": z, "Y": x ^ z ^ sigma}[basis]
    hit = [s for s in BELL if bit(*s) == trigger]
    return [[s] for s in hit] + [[s for s in BELL if bit(*s) != trigger]]


def apply_pair(state, n, q, projector):
    t = state.reshape((2,) * (2 * n))
    # axis order is most significant bit first
    ax_a, ax_b = 2 * n - 1 - q, n - 1 - q
    t = np.moveaxis(t, (ax_a, ax_b), (0, 1)).reshape(4, -1)
    t = projector @ t
    t = np.moveaxis(t.reshape((2, 2) + (2,) * (2 * n - 2)), (0, 1), (ax_a, ax_b))
    return t.reshape(-1)


def physical_efficiency(code, tokens, sigma=0):
    n = code.n_qubits
    states = logical_bell_states(code)
    groups = [outcome_groups(t, sigma) for t in tokens]
    projectors = [
        [sum(np.outer(BELL[s], BELL[s]) for s in g) for g in per_pair] for per_pair in groups
    ]
    total = 0.0

    def walk(q, branch):
        nonlocal total
        if q == n:
            probs = [float(v @ v) for v in branch]
            if sum(p > 1e-12 for p in probs) == 1:
                total += sum(probs) / 4
            return
        for proj in projectors[q]:
            nxt = [apply_pair(v, n, q, proj) for v in branch]
            if any(v @ v > 1e-12 for v in nxt):
                walk(q + 1, nxt)

    walk(0, list(states.values()))
    return total


CASES = [
    (codes.qpc(2, 2), "Z1 Z1 Z1 Z1"),
    (codes.qpc(2, 2), "Y1 X1 Z1 Z1"),
    (codes.qpc(2, 2), "X0 Y0 X0 Y0"),
    (codes.qpc(2, 2), "X1 Y1 X1 Y1"),
    (codes.qpc(2, 2), "X1 X1 X1 X1"),
    (codes.qpc(2, 1), "Y0 Z1"),
    (codes.planar_surface(2, 2), "X1 Z1 Z1 Z1 X1"),
    (codes.planar_surface(2, 2), "X1 Z1 Y1 Z1 X1"),
    (codes.planar_surface(2, 2), "Y0 Y1 X0 Z1 Y1"),
]


@pytest.mark.parametrize("code,tokens", CASES, ids=[f"{c.name}:{t}" for c, t in CASES])
@pytest.mark.parametrize("sigma", [0, 1])
def test_engine_matches_state_vector(code, tokens, sigma):
    exact = efficiency_lossless(code, Formation.parse(tokens), sigma=sigma).value
    assert physical_efficiency(code, tokens.split(), sigma) == pytest.approx(float(exact), abs=1e-9)


def test_steane_fig3d_state_vector():
    assert physical_efficiency(codes.steane(), "X1 X1 Y1 X1 Z1 Z1 Z1".split()) == pytest.approx(31 / 32)


def test_qpc22_optimum_is_fifteen_sixteenths():
    """Exhaustive physical check over all 6^4 formations of qpc(2,2)."""
    c = codes.qpc(2, 2)
    tokens = [f"{b}{g}" for b in "XYZ" for g in (0, 1)]
    best = max(physical_efficiency(c, f) for f in itertools.product(tokens, repeat=4))
    assert Fraction(best).limit_denominator(64) == Fraction(15, 16)


def test_unconstrained_is_deterministic():
    assert physical_efficiency(codes.qpc(2, 2), ["U"] * 4) == pytest.approx(1.0)
