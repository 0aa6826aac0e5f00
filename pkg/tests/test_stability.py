import io
import math

import numpy as np
import pytest

from fractheta import ThetaScheme, a_theta_check, boundary_curve, real_intercept
from fractheta.stability import a_stability_angle, max_abs_arg

BT_THETAS = [-10.0, -1.0, 0.0, 0.2, 0.45, 0.5]
ALPHAS = [0.25, 0.5, 2 / 3]


class TestBoundaryCurve:
    def test_intercept_values(self):
        assert real_intercept(ThetaScheme("BT", 0.5, 0.0)) == pytest.approx(2.0, abs=1e-15)
        assert real_intercept(ThetaScheme("BT", 0.5, 0.45)) == pytest.approx(2 * math.sqrt(5.5), rel=1e-14)
        bn = real_intercept(ThetaScheme("BN", 2 / 3, 0.9))
        assert bn == pytest.approx(4 ** (2 / 3) * 0.1 ** (2 / 3) / -0.2, rel=1e-14)
        assert bn < 0

    @pytest.mark.parametrize(
        "scheme",
        [ThetaScheme("BT", 0.5, 0.0), ThetaScheme("BT", 0.5, 0.45), ThetaScheme("BN", 2 / 3, 0.9),
         ThetaScheme("BN", -0.5, 0.3), ThetaScheme("BT", -1.5, -1.0)],
        ids=str,
    )
    def test_sample_at_pi_matches_closed_form(self, scheme):
        # odd sample count places phi = pi exactly on the grid
        curve = boundary_curve(scheme, 4095)
        k = int(np.argmin(np.abs(curve.phi - np.pi)))
        assert curve.phi[k] == pytest.approx(np.pi, abs=1e-15)
        expect = real_intercept(scheme)
        assert abs(curve.z[k] - expect) <= 1e-12 * max(1.0, abs(expect))

    def test_conjugate_symmetry(self):
        curve = boundary_curve(ThetaScheme("BN", 0.7, 0.4), 1000)
        np.testing.assert_allclose(curve.z[::-1], np.conj(curve.z), rtol=1e-12, atol=1e-12)

    def test_limit_point(self):
        assert boundary_curve(ThetaScheme("BT", 0.5, 0.0), 64).limit_point == 0
        curve = boundary_curve(ThetaScheme("BT", -0.5, 0.0), 64)
        assert curve.limit_point is None
        assert len(curve.points) == 64
        assert len(boundary_curve(ThetaScheme("BT", 0.5, 0.0), 64).points) == 65

    def test_families_coincide_at_theta_zero(self):
        a = boundary_curve(ThetaScheme("BT", 0.6, 0.0), 512).z
        b = boundary_curve(ThetaScheme("BN", 0.6, 0.0), 512).z
        np.testing.assert_allclose(a, b, rtol=1e-14)

    def test_sample_minimum(self):
        with pytest.raises(ValueError):
            boundary_curve(ThetaScheme("BT", 0.5, 0.0), 8)

    def test_csv(self):
        buf = io.StringIO()
        boundary_curve(ThetaScheme("BT", 0.5, 0.0), 16).to_csv(buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "phi,re_z,im_z"
        assert len(lines) == 18


class TestIntercept:
    def test_marker_at_half(self):
        assert real_intercept(ThetaScheme("BT", 0.5, 0.5)) == math.inf

    def test_indeterminate(self):
        assert math.isnan(real_intercept(ThetaScheme("BN", 0.5, 1.0)))

    def test_monotone_towards_half(self):
        for a in ALPHAS:
            vals = [real_intercept(ThetaScheme("BT", a, th)) for th in (0.0, 0.2, 0.45)]
            assert vals[0] < vals[1] < vals[2]

    def test_order_zero(self):
        assert real_intercept(ThetaScheme("BN", 0.0, 0.4)) == 1.0


class TestSectorChecks:
    def test_bt_a_stable(self):
        curve = boundary_curve(ThetaScheme("BT", 0.5, 0.2), 4096)
        assert a_theta_check(curve, a_stability_angle(0.5))
        assert max_abs_arg(curve) <= 0.5 * math.pi / 2 + 1e-10

    def test_bn_violation(self):
        curve = boundary_curve(ThetaScheme("BN", 2 / 3, 0.9), 4096)
        verdict = a_theta_check(curve, math.pi / 2)
        assert not verdict
        assert verdict.phi is not None and 0 < verdict.phi < 2 * math.pi
        assert abs(np.angle(verdict.z)) > math.pi / 2

    def test_vacuous_sector(self):
        curve = boundary_curve(ThetaScheme("BN", 2 / 3, 0.9), 256)
        assert a_theta_check(curve, 1e-300)

    def test_angle_range(self):
        curve = boundary_curve(ThetaScheme("BT", 0.5, 0.0), 64)
        with pytest.raises(ValueError):
            a_theta_check(curve, 0.0)
        with pytest.raises(ValueError):
            a_theta_check(curve, 4.0)


@pytest.mark.parametrize("theta", BT_THETAS)
@pytest.mark.parametrize("alpha", ALPHAS)
def test_bt_arguments_within_analytic_sector(alpha, theta):
    curve = boundary_curve(ThetaScheme("BT", alpha, theta), 4096)
    assert max_abs_arg(curve) <= alpha * math.pi / 2 + 1e-8


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_bn_right_angle_sector(alpha):
    top = min(1.0, 1 / (2 * alpha))
    for theta in (-2.0, 0.0, 0.5 * top, top):
        curve = boundary_curve(ThetaScheme("BN", alpha, theta), 4096)
        assert a_theta_check(curve, math.pi / 2)
