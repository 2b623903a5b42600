import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cssbell import codes
from cssbell.formations import catalog_formation, unconstrained
from cssbell.repeater import (
    ChannelModel,
    CostModel,
    chain_transmission,
    eta_log_function,
    grice_level,
    grice_p_adv,
    maximize_gain,
    optimize_spacing,
    plob_bound,
    repeater_table,
    stations_to_beat,
)

F = Fraction
# -log2(1 - exp(-100/22)) evaluated with mpmath at 30 digits
PLOB_100KM = 0.0153965730301006


def steane_fig3d():
    c = codes.steane()
    return c, catalog_formation("fig3d", c)


class TestChannel:
    def test_eta(self):
        assert ChannelModel().eta(22) == pytest.approx(math.exp(-1))

    def test_invariants(self):
        with pytest.raises(ValueError):
            ChannelModel(attenuation_length=0)
        with pytest.raises(ValueError):
            ChannelModel(eta2=1.5)


class TestChain:
    def test_bare_qubit(self):
        fn = eta_log_function(codes.qpc(1, 1), unconstrained(1))
        for length in (1.0, 10.0, 50.0):
            assert chain_transmission(fn, length, 1) == pytest.approx(math.exp(-length / 22))

    def test_perfect_code(self):
        assert chain_transmission(lambda e1, e2: 1.0, 100.0, 2) == 1.0

    def test_stations_checked(self):
        with pytest.raises(ValueError):
            chain_transmission(lambda e1, e2: 1.0, 10.0, 0)

    @given(st.integers(1, 20), st.integers(1, 20), st.floats(0.1, 10))
    def test_multiplicative(self, a, b, spacing):
        c, f = steane_fig3d()
        fn = eta_log_function(c, f.with_p_adv(F(1, 2)))
        whole = chain_transmission(fn, (a + b) * spacing, a + b)
        parts = chain_transmission(fn, a * spacing, a) * chain_transmission(fn, b * spacing, b)
        assert whole == pytest.approx(parts, rel=1e-9)

    def test_per_mode_inequality_direction(self):
        c, f = steane_fig3d()
        fn = eta_log_function(c, f.with_p_adv(F(1, 2)))
        spacing, stations = 2.0, 400
        eta = ChannelModel().eta(spacing)
        assert fn(eta, 1.0) ** stations / (2 * 7) > eta**stations / 2


class TestPlob:
    def test_values(self):
        assert plob_bound(0) == 0
        assert plob_bound(0.5) == pytest.approx(1.0)
        assert plob_bound(math.exp(-100 / 22)) == pytest.approx(PLOB_100KM, rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            plob_bound(1)

    @given(st.floats(0, 0.999), st.floats(0, 0.999))
    def test_increasing(self, a, b):
        if a < b:
            assert plob_bound(a) < plob_bound(b)


class TestSpacing:
    def test_table_row_v1(self):
        c, f = steane_fig3d()
        best = optimize_spacing(c, f, F(1, 2))
        assert best.spacing == pytest.approx(1.99, abs=0.05)
        assert best.gain == pytest.approx(1.02489, rel=5e-3)

    @pytest.mark.parametrize(
        "code,name",
        [(codes.steane(), "fig3d"), (codes.qpc(4, 2), "qpc-optimal"), (codes.planar_surface(3, 2), "zigzag")],
        ids=["steane", "qpc42", "surface32"],
    )
    def test_no_gain_without_rescue(self, code, name):
        best = optimize_spacing(code, catalog_formation(name, code), 0)
        assert not best.helps
        assert best.gain <= 1

    def test_unconstrained_helps(self):
        c = codes.steane()
        assert optimize_spacing(c, unconstrained(7), 0).helps

    def test_gain_at_zero_is_lossless_efficiency(self):
        c, f = steane_fig3d()
        fn = eta_log_function(c, f)
        assert fn(1.0, 1.0) == pytest.approx(31 / 32)
        best = maximize_gain(fn, bounds=(1e-6, 1.0))
        assert best.gain == pytest.approx(31 / 32, abs=1e-5)


class TestStations:
    def test_v5_cost(self):
        c, f = steane_fig3d()
        assert stations_to_beat(c, f, grice_p_adv(5), benchmark="direct-with-cost") == 58

    def test_v1_plob(self):
        c, f = steane_fig3d()
        assert stations_to_beat(c, f, grice_p_adv(1), benchmark="plob") == 123

    def test_unreachable(self):
        c, f = steane_fig3d()
        assert stations_to_beat(c, f, 0, benchmark="plob") is None

    def test_table(self):
        c, f = steane_fig3d()
        rows = repeater_table(c, f)
        assert [r.stations_cost for r in rows] == [377, 98, 66, 59, 58, 59, 62]
        plob = [r.stations_plob for r in rows]
        assert plob == sorted(plob, reverse=True)
        # reference column: 123, 34, 23, 19, 17, 17, 16
        assert all(abs(a - b) <= 1 for a, b in zip(plob, [123, 34, 23, 19, 17, 17, 16]))

    def test_plain_cost_convention_differs(self):
        c, f = steane_fig3d()
        plain = stations_to_beat(c, f, grice_p_adv(5), cost=CostModel.named("plain"))
        assert plain is not None and plain < 58

    def test_bad_benchmark(self):
        c, f = steane_fig3d()
        with pytest.raises(ValueError):
            stations_to_beat(c, f, grice_p_adv(1), benchmark="other")


class TestLevels:
    def test_round_trip(self):
        for v in range(0, 8):
            p = grice_p_adv(v) if v else F(0)
            assert grice_level(p) == v

    def test_rejects_other_p_adv(self):
        with pytest.raises(ValueError):
            grice_level(F(1, 3))

    def test_cost_model(self):
        assert CostModel().photons_per_station(7, 1) == 7 * 4
        assert CostModel.named("plain").photons_per_station(7, 3) == 7 * 8
        assert CostModel.mode_count(7) == 14
        with pytest.raises(ValueError):
            CostModel.named("other")
