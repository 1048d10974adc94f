import math
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from delayhopf.errors import NoHopfError, SeriesDivergenceError
from delayhopf.hopf_analytic import (
    ERNEUX_PAIRING_ALIGNED,
    ERNEUX_PAIRING_CROSSED,
    Branch,
    Method,
    approach1_delays,
    approach1_determinant,
    approach1_points,
    approach2_delays,
    approach2_omega,
    closed_form_branches,
    series_partial_sum,
)
from delayhopf.systems import SystemKind, SystemSpec

DUFFING = SystemSpec(SystemKind.DUFFING, epsilon=0.5, k=1.0, alpha=0.05, gamma=1.0)
VDP = SystemSpec(SystemKind.VAN_DER_POL, epsilon=0.5, k=2.0)
ERNEUX = SystemSpec(SystemKind.ERNEUX_GRASMAN, epsilon=0.5, k=2.0)


class TestApproach1:
    def test_duffing_values(self):
        lo, up = approach1_delays(DUFFING)
        assert lo == pytest.approx(3.1916136, abs=1e-6)
        assert up == pytest.approx(6.2331644, abs=1e-6)

    def test_duffing_undamped(self):
        spec = replace(DUFFING, alpha=0.0)
        lo, up = approach1_delays(spec)
        assert lo == pytest.approx(math.pi, abs=1e-15)
        assert up == pytest.approx(2.0 * math.pi, abs=1e-15)

    def test_vdp_values(self):
        lo, up = approach1_delays(replace(VDP, k=2.0))
        assert lo == pytest.approx(math.pi / 6.0, abs=1e-12)
        assert up == pytest.approx(5.0 * math.pi / 6.0, abs=1e-12)

    def test_condition_holds_on_returned_delays(self):
        for k in (0.1, 0.7, 2.4):
            lo, up = approach1_delays(replace(DUFFING, k=k))
            assert k * math.sin(lo) == pytest.approx(-DUFFING.alpha, abs=1e-12)
            assert k * math.sin(up) == pytest.approx(-DUFFING.alpha, abs=1e-12)
        for k in (1.1, 2.0, 3.0):
            lo, up = approach1_delays(replace(VDP, k=k))
            assert k * math.sin(lo) == pytest.approx(1.0, abs=1e-12)
            assert k * math.sin(up) == pytest.approx(1.0, abs=1e-12)

    def test_below_threshold_raises(self):
        with pytest.raises(NoHopfError):
            approach1_delays(replace(DUFFING, k=0.04))
        with pytest.raises(NoHopfError):
            approach1_delays(replace(VDP, k=0.9))

    def test_threshold_equality_raises(self):
        # omega_cr vanishes at equality: non-generic, rejected outright
        with pytest.raises(NoHopfError):
            approach1_delays(replace(DUFFING, k=DUFFING.alpha))
        with pytest.raises(NoHopfError):
            approach1_delays(replace(VDP, k=1.0))

    def test_erneux_threshold_equality_allowed(self):
        # the Erneux frequencies stay at 1/2 when k = 1; only branches merge
        lo, up = approach1_delays(replace(ERNEUX, k=1.0))
        assert lo == pytest.approx(math.pi / 2.0, abs=1e-12)
        assert up == pytest.approx(math.pi / 2.0, abs=1e-12)

    def test_branch_index_shifts_by_two_pi(self):
        lo0, up0 = approach1_delays(DUFFING)
        lo1, up1 = approach1_delays(DUFFING, n=1)
        assert lo1 - lo0 == pytest.approx(2.0 * math.pi, abs=1e-12)
        assert up1 - up0 == pytest.approx(2.0 * math.pi, abs=1e-12)

    def test_determinant_positive_at_returned_delays(self):
        for spec in (
            replace(DUFFING, k=0.3),
            replace(DUFFING, k=2.0),
            replace(VDP, k=1.2),
            replace(VDP, k=3.0),
            replace(ERNEUX, k=1.5),
        ):
            for T in approach1_delays(spec):
                assert approach1_determinant(spec, T) > 0.0

    def test_points_carry_method_and_branch(self):
        lo, up = approach1_points(VDP)
        assert lo.method == Method.APPROACH_I and up.method == Method.APPROACH_I
        assert lo.branch == Branch.LOWER and up.branch == Branch.UPPER
        assert lo.T < up.T


class TestApproach2Omega:
    def test_duffing_value(self):
        assert approach2_omega(DUFFING) == pytest.approx(0.4993746, abs=1e-7)

    def test_vdp_value(self):
        assert approach2_omega(VDP) == pytest.approx(math.sqrt(3.0) / 2.0, abs=1e-12)

    def test_erneux_pair_at_threshold(self):
        w1, w2 = approach2_omega(replace(ERNEUX, k=1.0))
        assert w1 == pytest.approx(0.5, abs=1e-12)
        assert w2 == pytest.approx(0.5, abs=1e-12)

    def test_erneux_pair_squares(self):
        k = 2.0
        w1, w2 = approach2_omega(replace(ERNEUX, k=k))
        root = math.sqrt(k * k - 1.0)
        assert w1 * w1 == pytest.approx(k * k / 2.0 - 0.25 - (k / 2.0) * root, abs=1e-12)
        assert w2 * w2 == pytest.approx(k * k / 2.0 - 0.25 + (k / 2.0) * root, abs=1e-12)


class TestApproach2Delays:
    def test_duffing_values(self):
        lo, up = approach2_delays(DUFFING)
        assert lo.T == pytest.approx(2.5539, abs=1e-4)
        assert up.T == pytest.approx(8.3074, abs=1e-4)
        assert lo.omega == up.omega == pytest.approx(0.4993746, abs=1e-7)

    def test_vdp_values(self):
        lo, up = approach2_delays(VDP)
        # (pi/6)/(1 - eps*omega0) and (5*pi/6)/(1 + eps*omega0) at
        # eps*omega0 = sqrt(3)/4, evaluated at full precision
        assert lo.T == pytest.approx(0.9234753183108629, abs=1e-12)
        assert up.T == pytest.approx(1.8269160311939792, abs=1e-12)

    @pytest.mark.parametrize("kind", [SystemKind.DUFFING, SystemKind.VAN_DER_POL])
    def test_tends_to_approach1_as_epsilon_vanishes(self, kind):
        base = DUFFING if kind == SystemKind.DUFFING else VDP
        t1_lo, t1_up = approach1_delays(base)
        gaps = []
        for eps in (1e-2, 1e-3, 1e-4):
            spec = replace(base, epsilon=eps)
            lo, up = approach2_delays(spec)
            gaps.append((abs(lo.T - t1_lo), abs(up.T - t1_up)))
        # linear rate in epsilon: each decade shrinks the gap tenfold
        for i in (0, 1):
            assert gaps[1][i] == pytest.approx(gaps[0][i] / 10.0, rel=0.05)
            assert gaps[2][i] == pytest.approx(gaps[1][i] / 10.0, rel=0.05)

    @given(
        st.sampled_from([SystemKind.DUFFING, SystemKind.VAN_DER_POL, SystemKind.ERNEUX_GRASMAN]),
        st.floats(min_value=0.05, max_value=0.5, allow_nan=False),
        st.floats(min_value=0.1, max_value=2.0, allow_nan=False),
    )
    def test_branch_ordering(self, kind, eps, k_above):
        if kind == SystemKind.DUFFING:
            spec = SystemSpec(kind, epsilon=eps, k=0.05 + k_above, alpha=0.05)
        else:
            spec = SystemSpec(kind, epsilon=eps, k=1.0 + k_above)
        lo, up = approach2_delays(spec)
        assert lo.T < up.T
        assert lo.branch == Branch.LOWER and up.branch == Branch.UPPER

    def test_gamma_never_changes_outputs(self):
        outs = set()
        for gamma in (-3.0, 0.0, 1.0, 9.9):
            spec = replace(DUFFING, gamma=gamma)
            outs.add(tuple(approach2_delays(spec)))
            outs_a1 = approach1_delays(spec)
        assert len(outs) == 1
        assert outs_a1 == approach1_delays(DUFFING)

    def test_series_divergence_on_geometric_branch(self):
        # epsilon*omega0 >= 1: the 1/(1 - eps*omega) sum no longer exists
        spec = replace(DUFFING, epsilon=0.9, k=3.0)
        with pytest.raises(SeriesDivergenceError):
            approach2_delays(spec)
        survivors = closed_form_branches(spec, skip_divergent=True)
        assert len(survivors) == 1
        assert survivors[0].branch == Branch.LOWER

    def test_erneux_pairings_share_values_but_swap_association(self):
        crossed = closed_form_branches(ERNEUX, erneux_pairing=ERNEUX_PAIRING_CROSSED)
        aligned = closed_form_branches(ERNEUX, erneux_pairing=ERNEUX_PAIRING_ALIGNED)
        assert {f.T0 for f in crossed} == {f.T0 for f in aligned}
        assert {f.omega for f in crossed} == {f.omega for f in aligned}
        by_branch_c = {f.branch: f for f in crossed}
        by_branch_a = {f.branch: f for f in aligned}
        assert by_branch_c[Branch.LOWER].omega == by_branch_a[Branch.UPPER].omega
        assert by_branch_c[Branch.LOWER].T0 == by_branch_a[Branch.LOWER].T0

    def test_denominator_is_T0_over_T(self):
        for form in closed_form_branches(VDP):
            assert form.denominator == pytest.approx(form.T0 / form.T, rel=1e-14)


class TestSeriesPartialSum:
    def test_zeroth_order(self):
        assert series_partial_sum(1.0, 0.5, +1, 0) == 1.0

    def test_geometric_limit(self):
        total = series_partial_sum(1.0, 0.5, +1, 60)
        assert total == pytest.approx(2.0, abs=1e-15)

    def test_tail_bound_against_closed_form(self):
        spec = DUFFING
        lo, up = approach2_delays(spec)
        w0 = approach2_omega(spec)
        q = spec.epsilon * w0
        T0_up = up.T * (1.0 - q)
        for N in range(0, 31):
            partial = series_partial_sum(T0_up, q, +1, N)
            bound = T0_up * q ** (N + 1) / (1.0 - q)
            # 1e-12 absolute slack: the bound itself sinks below the rounding
            # floor of summing numbers of size T0
            assert abs(partial - up.T) <= bound * (1.0 + 1e-12) + 1e-12

    def test_alternating_sign_hits_plus_denominator(self):
        assert series_partial_sum(1.0, 0.5, -1, 80) == pytest.approx(1.0 / 1.5, abs=1e-15)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            series_partial_sum(1.0, 0.5, 0, 3)
        with pytest.raises(ValueError):
            series_partial_sum(1.0, 0.5, +1, -1)
