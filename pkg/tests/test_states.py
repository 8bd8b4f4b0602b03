import math

import pytest

from gsp_mzi.errors import DomainError
from gsp_mzi.states import (
    GeneratingFunctions,
    GspParams,
    QuadraturePhases,
    antibunching_r,
    average_photon_number,
    delta_db_vs_tmsv,
    general_moment,
    normalization_pd,
    quadrature_variances,
    squeezing_db,
    tmsv_params,
)

GRID_S = (0.0, 0.5, 1.0)
GRID_MN = ((0, 0), (0, 1), (0, 2), (1, 1), (2, 2))
GRID_Z = tuple(round(0.1 * i, 1) for i in range(1, 10))


class TestGspParams:
    def test_t_completes_the_weight(self):
        p = GspParams(s=0.6, m=1, n=1, z=0.5)
        assert p.s**2 + p.t**2 == pytest.approx(1.0, abs=1e-12)
        assert GspParams(s=0.0, m=0, n=1, z=0.5).t == 1.0

    @pytest.mark.parametrize("kwargs", [
        dict(s=-0.1, m=0, n=0, z=0.5),
        dict(s=1.1, m=0, n=0, z=0.5),
        dict(s=0.5, m=-1, n=0, z=0.5),
        dict(s=0.5, m=7, n=0, z=0.5),
        dict(s=0.5, m=0, n=0, z=0.0),
        dict(s=0.5, m=0, n=0, z=1.0),
        dict(s=0.5, m=0, n=0, z=1.2),
    ])
    def test_rejects_out_of_domain(self, kwargs):
        with pytest.raises(DomainError):
            GspParams(**kwargs)


class TestGeneratingFunctions:
    def test_values_at_origin(self):
        p = GspParams(s=0.5, m=2, n=1, z=0.6)
        gf = GeneratingFunctions.build(p)
        root = math.sqrt(1 - 0.36)
        assert gf.u.constant_term == pytest.approx(root, rel=1e-15)
        assert gf.u1.constant_term == pytest.approx(root, rel=1e-15)
        assert gf.v.constant_term == pytest.approx(0.6, rel=1e-15)
        assert gf.v1.constant_term == pytest.approx(0.6, rel=1e-15)
        assert gf.delta.constant_term == pytest.approx(1 / (1 - 0.36), rel=1e-14)


class TestNormalization:
    def test_unoperated_state_is_exactly_one(self):
        for s in GRID_S:
            assert normalization_pd(GspParams(s=s, m=0, n=0, z=0.6)) == 1.0

    def test_pure_number_operator(self):
        # weights j^2 q^j under the squeezed-vacuum envelope, q = z^2
        q = 0.25
        want = q * (1 + q) / (1 - q) ** 2
        got = normalization_pd(GspParams(s=0.0, m=1, n=0, z=0.5))
        assert got == pytest.approx(want, rel=1e-12)

    def test_pure_antinormal_operator(self):
        q = 0.25
        want = (1 + q) / (1 - q) ** 2  # <(j+1)^2> envelope sum
        got = normalization_pd(GspParams(s=1.0, m=1, n=0, z=0.5))
        assert got == pytest.approx(want, rel=1e-12)

    def test_positive_on_grid(self):
        for s in GRID_S:
            for (m, n) in GRID_MN:
                for z in (0.1, 0.5, 0.9):
                    assert normalization_pd(GspParams(s=s, m=m, n=n, z=z)) > 0.0


class TestGeneralMoment:
    def test_normalization_moment(self):
        p = GspParams(s=0.3, m=2, n=1, z=0.7)
        assert general_moment(p, 0, 0, 0, 0) == 1.0

    def test_antinormal_number(self):
        p = tmsv_params(0.6)
        assert general_moment(p, 1, 0, 1, 0).real == pytest.approx(1.5625, rel=1e-12)

    def test_pair_selection_rule(self):
        # only equal pair-index shifts survive on these states
        for p in (tmsv_params(0.6), GspParams(s=0.5, m=1, n=1, z=0.5)):
            assert general_moment(p, 2, 0, 0, 2) == 0.0
            assert general_moment(p, 0, 2, 2, 0) == 0.0
            assert general_moment(p, 1, 0, 0, 0) == 0.0

    def test_hermitian_symmetry_is_exact(self):
        p = GspParams(s=0.5, m=2, n=1, z=0.6)
        for (l, k, h, g) in ((1, 0, 1, 0), (1, 1, 0, 0), (2, 2, 1, 1), (0, 1, 1, 2)):
            assert general_moment(p, l, k, h, g) == general_moment(p, h, g, l, k).conjugate()

    def test_order_ceiling(self):
        with pytest.raises(DomainError):
            general_moment(tmsv_params(0.5), 5, 0, 0, 0)

    def test_pair_coherence_real_nonnegative(self):
        for s in GRID_S:
            for (m, n) in GRID_MN:
                val = general_moment(GspParams(s=s, m=m, n=n, z=0.6), 1, 1, 0, 0)
                assert abs(val.imag) < 1e-12
                assert val.real >= 0.0


class TestPhotonNumber:
    def test_unoperated_value(self):
        assert average_photon_number(tmsv_params(0.6)) == pytest.approx(0.5625, rel=1e-12)

    def test_number_operated_value(self):
        assert average_photon_number(GspParams(s=0.0, m=1, n=0, z=0.5)) == pytest.approx(2.2, rel=1e-12)

    def test_decreases_with_s(self):
        values = [average_photon_number(GspParams(s=s, m=1, n=1, z=0.5)) for s in GRID_S]
        assert values[0] >= values[1] >= values[2]

    def test_increases_with_z(self):
        for s in GRID_S:
            values = [average_photon_number(GspParams(s=s, m=1, n=1, z=z)) for z in GRID_Z]
            assert all(a < b for a, b in zip(values, values[1:]))


class TestAntibunching:
    def test_unoperated_value(self):
        # -<j>/<j^2> for the geometric pair distribution at q = 0.36
        assert antibunching_r(tmsv_params(0.6)) == pytest.approx(-8.0 / 17.0, rel=1e-12)

    def test_negative_on_grid(self):
        for s in GRID_S:
            for (m, n) in ((0, 1), (0, 2), (1, 1), (2, 2)):
                for z in GRID_Z:
                    assert antibunching_r(GspParams(s=s, m=m, n=n, z=z)) < 0.0

    def test_small_squeezing_limit(self):
        # R -> -1 as the pair distribution collapses onto j in {0, 1}
        assert antibunching_r(tmsv_params(1e-3)) == pytest.approx(-1.0, abs=1e-5)


class TestQuadratures:
    def test_unoperated_values(self):
        v1, v2 = quadrature_variances(tmsv_params(0.6))
        assert v1 == pytest.approx(0.25, rel=1e-12)
        assert v2 == pytest.approx(4.0, rel=1e-12)
        assert v1 == pytest.approx((1 - 0.6) / (1 + 0.6), rel=1e-12)

    def test_vacuum_limit(self):
        v1, v2 = quadrature_variances(tmsv_params(1e-8))
        assert v1 == pytest.approx(1.0, abs=1e-7)
        assert v2 == pytest.approx(1.0, abs=1e-7)

    def test_uncertainty_product_on_grid(self):
        for s in GRID_S:
            for (m, n) in GRID_MN:
                for z in (0.1, 0.4, 0.7):
                    v1, v2 = quadrature_variances(GspParams(s=s, m=m, n=n, z=z))
                    assert v1 * v2 >= 1.0 - 1e-12

    def test_phase_convention(self):
        # theta1 + theta2 = 0 swaps which combination is squeezed
        p = tmsv_params(0.5)
        v1, v2 = quadrature_variances(p, QuadraturePhases(theta1=0.0, theta2=0.0))
        assert v1 > 1.0 > v2


class TestSqueezingDb:
    def test_state_vs_itself(self):
        for z in (0.2, 0.6, 0.9):
            assert delta_db_vs_tmsv(tmsv_params(z)) == pytest.approx(0.0, abs=1e-12)

    def test_vacuum_limit_db(self):
        assert squeezing_db(tmsv_params(1e-8)) == pytest.approx(0.0, abs=1e-6)

    def test_number_operation_never_improves(self):
        # the subtract-then-add operation cannot deepen two-mode squeezing
        assert delta_db_vs_tmsv(GspParams(s=0.0, m=1, n=1, z=0.5)) > 0.0

    def test_balanced_operation_improves_at_moderate_z(self):
        assert delta_db_vs_tmsv(GspParams(s=1.0, m=1, n=1, z=0.3)) < 0.0
