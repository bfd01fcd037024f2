"""Constraint-curve checks against independent oracles.

The primary oracle for p_c is a bracketing root find on the defining
equation sqrt(m^2 + |p_perp|^2 + p3^2) = v_a p3 + kappa, which never sees
the closed forms under test.
"""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from diracwave import correlation as cor
from diracwave.errors import (
    InvalidParameterError,
    LuminalVelocityError,
    NoRealSolutionError,
    ParaxialDegeneracyError,
    SupportError,
)

SQRT5 = math.sqrt(5.0)


def pc_oracle(pperp_sq: float, P: float, v_a: float, m: float = 1.0) -> float:
    """Root of the on-shell/hyperplane intersection nearest the vertex P."""
    kappa = math.sqrt(m * m + P * P) - v_a * P

    def g(p3: float) -> float:
        return math.sqrt(m * m + pperp_sq + p3 * p3) - v_a * p3 - kappa

    # expand a bracket around the vertex
    lo, hi = P - 1e-9, P + 1e-9
    step = max(1e-6, 1e-6 * abs(P))
    while g(lo) * g(hi) > 0.0:
        lo -= step
        hi += step
        step *= 2.0
        if step > 1e6:
            raise RuntimeError("oracle failed to bracket")
    return brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16)


def test_group_velocity_spec_gamma_sq():
    for v in (-0.5, 0.5, 2.0, 3.0, -2.0):
        spec = cor.GroupVelocitySpec(v)
        assert spec.gamma_a_sq * (1.0 - v * v) == pytest.approx(1.0, abs=1e-14)
    assert cor.GroupVelocitySpec(2.0).gamma_a_sq == pytest.approx(-1.0 / 3.0, rel=1e-15)


def test_luminal_velocity_rejected():
    with pytest.raises(LuminalVelocityError):
        cor.GroupVelocitySpec(1.0)
    with pytest.raises(LuminalVelocityError):
        cor.GroupVelocitySpec(-1.0)


def test_carrier_parameters():
    c = cor.CarrierParameters.from_P(2.0, 2.0, 1.0)
    assert c.E * c.E - c.P * c.P == pytest.approx(1.0, rel=1e-14)
    assert c.beta_p * c.P == c.E
    assert c.kappa == pytest.approx(SQRT5 - 4.0, rel=1e-15)
    with pytest.raises(InvalidParameterError):
        cor.CarrierParameters.from_P(0.0, 2.0, 1.0)


def test_kappa_from_P_values():
    assert cor.kappa_from_P(2.0, 2.0, 1.0) == pytest.approx(SQRT5 - 4.0, rel=1e-15)
    assert abs(cor.kappa_from_P(2.0, 2.0, 1.0) - (-1.7639320)) < 5e-8
    assert cor.kappa_from_P(0.0, 7.3, 1.0) == 1.0
    assert cor.kappa_from_P(2.0, 0.0, 1.0) == pytest.approx(SQRT5, rel=1e-15)


def test_P_from_kappa_round_trip():
    rng = np.random.default_rng(23)
    for _ in range(300):
        v_a = rng.choice([-0.5, 0.5, 2.0, 3.0])
        P = rng.uniform(-5.0, 5.0)
        if P == 0.0:
            continue
        kappa = cor.kappa_from_P(P, v_a)
        roots = []
        for branch in (+1, -1):
            try:
                roots.append(cor.P_from_kappa(kappa, v_a, branch=branch))
            except NoRealSolutionError:
                pass
        assert any(abs(r - P) <= 1e-12 * max(1.0, abs(P)) for r in roots)


def test_P_from_kappa_explicit_cases():
    # invert the reference carrier
    kappa = SQRT5 - 4.0
    assert cor.P_from_kappa(kappa, 2.0, branch=+1) == pytest.approx(2.0, abs=1e-12)
    # v_a = 0: E = kappa, both signs
    assert cor.P_from_kappa(SQRT5, 0.0, branch=+1) == pytest.approx(2.0, abs=1e-12)
    assert cor.P_from_kappa(SQRT5, 0.0, branch=-1) == pytest.approx(-2.0, abs=1e-12)
    # discriminant < 0: kappa below the rest mass at v_a = 0
    with pytest.raises(NoRealSolutionError):
        cor.P_from_kappa(0.5, 0.0)


def test_pc_exact_vertex_and_reference_value():
    curve = cor.CorrelationCurve.from_P(2.0, 2.0, 1.0)
    assert cor.pc_exact(0.0, curve) == 2.0
    delta = cor.pc_exact(0.01, curve) - 2.0
    assert abs(delta - 0.0020201) < 5e-8
    # vs root-finding oracle
    assert cor.pc_exact(0.01, curve) == pytest.approx(pc_oracle(0.01, 2.0, 2.0), abs=1e-12)


def test_pc_exact_intermediates_reference():
    curve = cor.CorrelationCurve.from_P(2.0, 2.0, 1.0)
    g2 = curve.spec.gamma_a_sq
    drift = g2 * (2.0 * curve.carrier.E - 2.0)
    assert abs(drift - (-0.8240453)) < 5e-8
    bracket = drift * drift - g2 * 0.01
    assert abs(bracket - 0.6823840) < 5e-8
    assert abs(math.sqrt(bracket) - 0.8260654) < 5e-8
    assert curve.varpi == -1


def test_pc_exact_against_oracle_sweep():
    rng = np.random.default_rng(101)
    for v_a in (-0.5, 0.5, 2.0, 3.0):
        for _ in range(50):
            P = rng.uniform(0.3, 4.0) * rng.choice([-1.0, 1.0])
            curve = cor.CorrelationCurve.from_P(P, v_a, 1.0)
            limit = min(curve.pperp_max, 3.0)
            pperp = rng.uniform(0.0, 0.95 * limit)
            got = cor.pc_exact(pperp * pperp, curve)
            want = pc_oracle(pperp * pperp, P, v_a)
            assert got == pytest.approx(want, abs=1e-10 * max(1.0, abs(want)))


def test_pc_exact_out_of_support():
    curve = cor.CorrelationCurve.from_P(2.0, 0.5, 1.0)
    assert math.isfinite(curve.pperp_max)
    with pytest.raises(SupportError) as exc:
        cor.pc_exact((1.5 * curve.pperp_max) ** 2, curve)
    assert exc.value.pperp_max == pytest.approx(curve.pperp_max)


def test_pc_exact_edge_of_support_limit():
    curve = cor.CorrelationCurve.from_P(2.0, 0.5, 1.0)
    g2 = curve.spec.gamma_a_sq
    drift = g2 * (0.5 * curve.carrier.E - 2.0)
    edge = cor.pc_exact(curve.pperp_max**2, curve)
    assert edge == pytest.approx(2.0 + drift, rel=1e-12)


def test_pc_general_matches_pc_exact():
    rng = np.random.default_rng(41)
    for v_a in (-0.5, 0.5, 2.0, 3.0):
        spec = cor.GroupVelocitySpec(v_a)
        for _ in range(250):
            P = rng.uniform(0.3, 4.0) * rng.choice([-1.0, 1.0])
            curve = cor.CorrelationCurve.from_P(P, v_a, 1.0)
            limit = min(curve.pperp_max, 3.0)
            pperp_sq = rng.uniform(0.0, 0.95 * limit) ** 2
            kappa = cor.kappa_from_P(P, v_a)
            got = cor.pc_general(pperp_sq, kappa, spec, 1.0, branch=-curve.varpi)
            want = cor.pc_exact(pperp_sq, curve)
            assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_pc_general_vertex_and_free_sphere():
    spec = cor.GroupVelocitySpec(2.0)
    kappa = SQRT5 - 4.0
    curve = cor.CorrelationCurve.from_P(2.0, 2.0, 1.0)
    assert cor.pc_general(0.0, kappa, spec, branch=-curve.varpi) == pytest.approx(2.0, abs=1e-12)
    # v_a = 0 reduces to the on-shell sphere
    spec0 = cor.GroupVelocitySpec(0.0)
    got = cor.pc_general(0.25, 3.0, spec0, 1.0, branch=+1)
    assert got == pytest.approx(math.sqrt(9.0 - 1.0 - 0.25), rel=1e-14)
    got = cor.pc_general(0.25, 3.0, spec0, 1.0, branch=-1)
    assert got == pytest.approx(-math.sqrt(9.0 - 1.0 - 0.25), rel=1e-14)


def test_pc_paraxial_reference_and_vertex():
    curve = cor.CorrelationCurve.from_P(2.0, 2.0, 1.0)
    denom = 2.0 * 2.0 * (2.0 * curve.carrier.beta_p - 1.0)
    assert abs(denom - 4.9442719) < 5e-8
    got = cor.pc_paraxial(0.01, curve.carrier, curve.spec)
    assert abs(got - 2.0 - 0.0020225) < 5e-8
    assert cor.pc_paraxial(0.0, curve.carrier, curve.spec) == 2.0


def test_pc_paraxial_close_to_exact_within_width():
    curve = cor.CorrelationCurve.from_P(2.0, 2.0, 1.0)
    w = 0.1
    for pperp in np.linspace(1e-3, w, 20):
        exact = cor.pc_exact(pperp**2, curve)
        par = cor.pc_paraxial(pperp**2, curve.carrier, curve.spec)
        assert abs(par - exact) <= 5e-3 * abs(exact - 2.0)


def test_pc_paraxial_error_scales_as_fourth_power():
    curve = cor.CorrelationCurve.from_P(2.0, 2.0, 1.0)
    w = 0.1
    pperp = np.linspace(w / 4.0, w, 30)
    err = np.abs(
        cor.pc_paraxial(pperp**2, curve.carrier, curve.spec) - cor.pc_exact(pperp**2, curve)
    )
    slope = np.polyfit(np.log(pperp), np.log(err), 1)[0]
    assert abs(slope - 4.0) < 0.2


def test_pc_paraxial_degenerate_rejected():
    # v_a * beta_p = 1 means v_a = P/E: pick P = 2, m = 1 -> v_a = 2/sqrt(5)
    v_a = 2.0 / SQRT5
    carrier = cor.CarrierParameters.from_P(2.0, v_a, 1.0)
    spec = cor.GroupVelocitySpec(v_a)
    with pytest.raises(ParaxialDegeneracyError):
        cor.pc_paraxial(0.01, carrier, spec)
    # the exact path still works there
    curve = cor.CorrelationCurve(spec=spec, carrier=carrier, m=1.0)
    assert cor.pc_exact(0.0, curve) == 2.0


def test_xi0_reference_value_and_scaling():
    curve = cor.CorrelationCurve.from_P(2.0, 2.0, 1.0)
    val = cor.xi0(curve.carrier, curve.spec, 0.1)
    assert val == pytest.approx(247.2136, abs=5e-5)
    assert cor.xi0(curve.carrier, curve.spec, 0.2) == pytest.approx(val / 4.0, rel=1e-14)
    # degenerate numerator
    v_a = 2.0 / SQRT5
    carrier = cor.CarrierParameters.from_P(2.0, v_a, 1.0)
    assert cor.xi0(carrier, cor.GroupVelocitySpec(v_a), 0.1) == pytest.approx(0.0, abs=1e-14)


def test_support_radius_signs():
    unbounded = cor.CorrelationCurve.from_P(2.0, 2.0, 1.0)
    assert math.isinf(cor.support_radius(unbounded))
    bounded = cor.CorrelationCurve.from_P(2.0, 0.5, 1.0)
    g2 = bounded.spec.gamma_a_sq
    expected_sq = g2 * (0.5 * bounded.carrier.E - 2.0) ** 2
    assert cor.support_radius(bounded) ** 2 == pytest.approx(expected_sq, rel=1e-14)


def test_superluminal_pc_always_real():
    rng = np.random.default_rng(77)
    for v_a in (1.5, 2.0, 3.0, -2.0):
        for _ in range(100):
            P = rng.uniform(-4.0, 4.0)
            if abs(P) < 0.05:
                continue
            curve = cor.CorrelationCurve.from_P(P, v_a, 1.0)
            pperp_sq = rng.uniform(0.0, 100.0)
            val = cor.pc_exact(pperp_sq, curve)
            assert math.isfinite(val)


def test_branch_continuity_and_vertex():
    for v_a in (-0.5, 0.5, 2.0, 3.0):
        curve = cor.CorrelationCurve.from_P(2.0, v_a, 1.0)
        limit = min(curve.pperp_max, 1.0)
        grid = np.linspace(0.0, limit, 400) ** 2
        vals = cor.pc_exact(grid, curve)
        assert vals[0] == 2.0
        assert np.max(np.abs(np.diff(vals))) < 0.1  # no branch jumps


def test_on_shell_closure_property():
    rng = np.random.default_rng(53)
    for v_a in (-0.5, 0.5, 2.0, 3.0):
        for _ in range(250):
            P = rng.uniform(0.3, 4.0) * rng.choice([-1.0, 1.0])
            curve = cor.CorrelationCurve.from_P(P, v_a, 1.0)
            limit = min(curve.pperp_max, 3.0)
            pperp_sq = rng.uniform(0.0, 0.99 * limit) ** 2
            pc = cor.pc_exact(pperp_sq, curve)
            energy = math.sqrt(1.0 + pperp_sq + pc * pc)
            closure = v_a * pc + curve.carrier.kappa
            assert abs(energy - closure) <= 1e-12 * energy


def test_group_velocity_along_curve():
    # central difference of E(p3(p1), p1) along the constraint; the ratio
    # dE/dp1 over dp3/dp1 must equal v_a
    h = 1e-5
    rng = np.random.default_rng(61)
    for v_a in (-0.5, 0.5, 2.0, 3.0):
        for _ in range(50):
            P = rng.uniform(0.5, 3.0)
            curve = cor.CorrelationCurve.from_P(P, v_a, 1.0)
            limit = min(curve.pperp_max, 2.0)
            if 0.9 * limit <= 0.06:  # support too small near v_a = P/E
                continue
            p1 = rng.uniform(0.05, 0.9 * limit)

            def e_and_p3(x):
                p3 = cor.pc_exact(x * x, curve)
                return math.sqrt(1.0 + x * x + p3 * p3), p3

            e_hi, p3_hi = e_and_p3(p1 + h)
            e_lo, p3_lo = e_and_p3(p1 - h)
            dE_dp3 = (e_hi - e_lo) / (p3_hi - p3_lo)
            assert abs(dE_dp3 - v_a) < 1e-6


def test_projection_curve():
    curve = cor.CorrelationCurve.from_P(2.0, 2.0, 1.0)
    samples = np.array([-0.1, 0.0, 0.1])
    pts, dropped = cor.projection_curve(curve, samples)
    assert dropped == 0
    assert pts.shape == (3, 2)
    vertex = pts[pts[:, 0] == 0.0]
    assert vertex[0, 1] == 2.0
    plus = pts[pts[:, 0] == 0.1][0]
    minus = pts[pts[:, 0] == -0.1][0]
    assert plus[1] == pytest.approx(2.0020201, abs=5e-7)
    assert plus[1] == minus[1]  # even in p_perp


def test_projection_curve_drops_out_of_support():
    curve = cor.CorrelationCurve.from_P(2.0, 0.5, 1.0)
    samples = np.array([0.0, 0.5 * curve.pperp_max, 2.0 * curve.pperp_max])
    with pytest.warns(UserWarning, match="dropped 1"):
        pts, dropped = cor.projection_curve(curve, samples)
    assert dropped == 1
    assert pts.shape == (2, 2)
