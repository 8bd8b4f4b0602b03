import math

import numpy as np
import pytest

from gsp_mzi.errors import DomainError
from gsp_mzi.metrology import (
    MZI_CONVENTION,
    PhasePoint,
    parity_expectation,
    phase_sensitivity,
    phase_sensitivity_limit,
    qcrb,
    qfi,
    sql_hl,
)
from gsp_mzi.states import GspParams, general_moment, tmsv_params


def tmsv_parity(z, phi):
    return (1 - z * z) / math.sqrt(1 - 2 * z * z * math.cos(2 * phi) + z**4)


class TestPhasePoint:
    def test_offset_is_exact(self):
        for phi in (0.0, 0.3, -1.2):
            pp = PhasePoint(phi)
            assert pp.mzi_angle - pp.detection_phase == math.pi / 2.0
        assert MZI_CONVENTION.detected_mode == "b"


class TestQfi:
    def test_unoperated_closed_form(self):
        assert qfi(tmsv_params(0.6)) == pytest.approx(3.515625, rel=1e-12)
        for z in (0.3, 0.8):
            assert qfi(tmsv_params(z)) == pytest.approx(4 * z**2 / (1 - z**2) ** 2, rel=1e-11)

    def test_number_operated_value(self):
        assert qfi(GspParams(s=0.0, m=1, n=0, z=0.5)) == pytest.approx(256.0 / 15.0, rel=1e-12)

    def test_vacuum_limit(self):
        assert 0.0 < qfi(tmsv_params(1e-3)) < 5e-6

    def test_generator_mean_vanishes(self):
        for s in (0.0, 0.5, 1.0):
            for (m, n) in ((0, 0), (0, 2), (1, 1)):
                p = GspParams(s=s, m=m, n=n, z=0.6)
                j2 = (general_moment(p, 0, 1, 1, 0) - general_moment(p, 1, 0, 0, 1)) / 2j
                assert abs(j2) < 1e-12

    def test_s_ordering_at_moderate_z(self):
        for (m, n) in ((0, 1), (1, 1), (2, 2)):
            for z in (0.2, 0.5, 0.8):
                f = [qfi(GspParams(s=s, m=m, n=n, z=z)) for s in (0.0, 0.5, 1.0)]
                f.append(qfi(tmsv_params(z)))
                assert f[0] >= f[1] >= f[2] >= f[3]


class TestQcrb:
    def test_unoperated_value(self):
        assert qcrb(tmsv_params(0.6)) == pytest.approx(8.0 / 15.0, rel=1e-12)

    def test_fisher_four(self):
        # 4 z^2 / (1 - z^2)^2 = 4 at the golden-ratio point z^2 + z = 1
        z = (math.sqrt(5.0) - 1.0) / 2.0
        assert qcrb(tmsv_params(z)) == pytest.approx(0.5, rel=1e-10)

    def test_number_operated_value(self):
        assert qcrb(GspParams(s=0.0, m=1, n=0, z=0.5)) == pytest.approx(
            1 / math.sqrt(256.0 / 15.0), rel=1e-12
        )


class TestParity:
    def test_central_peak_is_one(self):
        for s in (0.0, 0.5, 1.0):
            for (m, n) in ((0, 0), (0, 1), (1, 1), (2, 2)):
                p = GspParams(s=s, m=m, n=n, z=0.6)
                assert parity_expectation(p, PhasePoint(0.0)) == pytest.approx(1.0, abs=1e-9)

    def test_unoperated_closed_form(self):
        for z in (0.3, 0.6, 0.8):
            for phi in (0.1, 0.3, 0.7, 1.2):
                got = parity_expectation(tmsv_params(z), PhasePoint(phi))
                assert got == pytest.approx(tmsv_parity(z, phi), rel=1e-12)
        assert parity_expectation(tmsv_params(0.6), PhasePoint(0.3)) == pytest.approx(
            0.874697, abs=5e-7
        )

    def test_bounded_on_grid(self):
        for s in (0.0, 1.0):
            p = GspParams(s=s, m=2, n=2, z=0.7)
            for phi in np.linspace(-1.5, 1.5, 31):
                assert abs(parity_expectation(p, PhasePoint(phi))) <= 1.0 + 1e-12


class TestPhaseSensitivity:
    def test_limit_matches_bound(self):
        assert phase_sensitivity_limit(tmsv_params(0.6)) == pytest.approx(8.0 / 15.0, rel=1e-12)
        for z in (0.3, 0.8):
            assert phase_sensitivity_limit(tmsv_params(z)) == pytest.approx(
                (1 - z * z) / (2 * z), rel=1e-11
            )

    def test_jet_derivative_vs_finite_difference(self):
        h = 1e-5
        for p in (tmsv_params(0.6), GspParams(s=0.5, m=1, n=1, z=0.5), GspParams(s=0.0, m=2, n=1, z=0.4)):
            for phi in (0.1, 0.3):
                got = phase_sensitivity(p, PhasePoint(phi))
                val = parity_expectation(p, PhasePoint(phi))
                fd = (
                    parity_expectation(p, PhasePoint(phi + h))
                    - parity_expectation(p, PhasePoint(phi - h))
                ) / (2 * h)
                want = math.sqrt(1 - val * val) / abs(fd)
                assert got == pytest.approx(want, rel=1e-6)

    def test_never_beats_the_bound(self):
        for s in (0.0, 1.0):
            p = GspParams(s=s, m=1, n=1, z=0.6)
            bound = qcrb(p)
            for phi in (0.01, 0.05, 0.2, 0.4):
                assert phase_sensitivity(p, PhasePoint(phi)) >= bound - 1e-9

    def test_stationary_point_raises(self):
        with pytest.raises(DomainError):
            phase_sensitivity(tmsv_params(0.6), PhasePoint(0.0))


class TestLimits:
    def test_values(self):
        assert sql_hl(4.0) == (0.5, 0.25)
        assert sql_hl(1.0) == (1.0, 1.0)

    def test_ordering(self):
        for apn in (1.0, 2.5, 10.0):
            sql, hl = sql_hl(apn)
            assert sql >= hl

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            sql_hl(0.0)
        with pytest.raises(DomainError):
            sql_hl(-1.0)
