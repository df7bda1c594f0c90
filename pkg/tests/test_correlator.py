"""Truncated correlators: Bessel oracle, contour invariance, symmetries."""
import numpy as np
import pytest
from scipy.integrate import dblquad
from scipy.special import k0

from shgff.combin import CompositionVector
from shgff.correlator import (
    ContourLadder, CorrelatorRequest, GaussianSmearing, SpacetimePoint,
    check_region, compute_I_n, compute_W_r, compute_W_r_mixed, default_ladder,
    eta_max, smeared_correlator,
)
from shgff.formfactor import load_operator
from shgff.specfun import ModelParams

P = ModelParams(b=0.25)
UNIT = {"name": "u", "omega": 0.0, "spin": 0.0, "growth": 0.0,
        "provider": {"kind": "unit"}}


def _unit_ops(k):
    return [load_operator(UNIT, P) for _ in range(k)]


def _req(points, r, ops=None, **kw):
    ops = ops or _unit_ops(len(points))
    pts = [SpacetimePoint(*xy) for xy in points]
    return CorrelatorRequest(params=P, operators=ops, points=pts, r=r, **kw)


# ---------------------------------------------------------------------------
# region and ladder admissibility
# ---------------------------------------------------------------------------

def test_check_region():
    assert check_region([SpacetimePoint(0, 1), SpacetimePoint(0, 0)])
    # wrong spatial ordering
    assert not check_region([SpacetimePoint(0, 0), SpacetimePoint(0, 1)])
    # time-like separation
    assert not check_region([SpacetimePoint(2.0, 1.0), SpacetimePoint(0, 0)])


def test_eta_max_positive_inside_coupling_range():
    assert eta_max(ModelParams(b=0.25)) > 0
    assert eta_max(ModelParams(b=0.05)) > 0
    assert eta_max(ModelParams(b=0.0)) > 0


def test_ladder_validation():
    comp = CompositionVector(3, (1, 1, 0))
    good = ContourLadder(3, {(2, 1): 0.1, (3, 1): 0.2, (3, 2): 0.0})
    good.validate(comp)  # (3,2) unoccupied, ordering holds on occupied blocks
    bad = ContourLadder(3, {(2, 1): 0.2, (3, 1): 0.1, (3, 2): 0.0})
    with pytest.raises(ValueError):
        bad.validate(comp)


def test_default_ladder_is_admissible():
    comp = CompositionVector(3, (1, 2, 1))
    lad = default_ladder(comp, P)
    lad.validate(comp)
    assert max(lad.eta.values()) <= eta_max(P) + 1e-15


def test_region_violation_raises():
    req = _req([(0.0, 0.0), (0.0, 1.0)], (1,))
    with pytest.raises(ValueError):
        compute_W_r(req)


# ---------------------------------------------------------------------------
# Bessel oracle (two-point function of the identity-normalized fixture)
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_two_point_single_particle_bessel(rho):
    req = _req([(0.0, rho), (0.0, 0.0)], (1,), nodes=96, tol=1e-10)
    res = compute_W_r(req)
    want = k0(rho) / np.pi
    assert abs(res.value - want) < 1e-8
    assert abs(res.value.imag) < 1e-10


def test_two_point_two_particle_factorizes():
    rho = 1.0
    req = _req([(0.0, rho), (0.0, 0.0)], (2,), nodes=96, tol=1e-10)
    res = compute_W_r(req)
    want = k0(rho) ** 2 / (2.0 * np.pi ** 2)
    assert abs(res.value - want) < 1e-7


def test_massive_two_point_scales_with_mass():
    pm = ModelParams(b=0.25, mass=1.7)
    ops = [load_operator(UNIT, pm) for _ in range(2)]
    req = CorrelatorRequest(params=pm, operators=ops,
                            points=[SpacetimePoint(0, 1.0), SpacetimePoint(0, 0)],
                            r=(1,), nodes=96, tol=1e-10)
    assert abs(compute_W_r(req).value - k0(1.7) / np.pi) < 1e-8


# ---------------------------------------------------------------------------
# contour-ladder invariance
# ---------------------------------------------------------------------------

def test_ladder_invariance_three_point():
    req = _req([(0.0, 2.0), (0.0, 1.0), (0.0, 0.0)], (1, 1), nodes=96, tol=1e-10)
    comp = CompositionVector(3, (1, 0, 1))
    em = eta_max(P)
    vals = []
    for (e1, e2) in [(0.2, 0.8), (0.4, 0.6), (0.1, 0.95)]:
        lad = ContourLadder(3, {(2, 1): e1 * em, (3, 1): 0.0, (3, 2): e2 * em})
        val, _ = compute_I_n(req, comp, ladder=lad)
        vals.append(val)
    for v in vals[1:]:
        assert abs(v - vals[0]) < 1e-9 * max(1.0, abs(vals[0]))


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------

def test_translation_invariance():
    req1 = _req([(0.0, 1.0), (0.0, 0.0)], (1,), tol=1e-10)
    req2 = _req([(0.3, 1.5), (0.3, 0.5)], (1,), tol=1e-10)
    v1 = compute_W_r(req1).value
    v2 = compute_W_r(req2).value
    assert abs(v1 - v2) < 1e-10 * max(1.0, abs(v1))


def test_boost_invariance_scalar_operators():
    th = 0.35
    x1, x2 = np.array([0.0, 1.0]), np.array([0.0, 0.0])
    boost = np.array([[np.cosh(th), np.sinh(th)], [np.sinh(th), np.cosh(th)]])
    y1, y2 = boost @ x1, boost @ x2
    v1 = compute_W_r(_req([tuple(x1), tuple(x2)], (1,), tol=1e-10)).value
    v2 = compute_W_r(_req([tuple(y1), tuple(y2)], (1,), tol=1e-10)).value
    assert abs(v1 - v2) < 1e-7 * max(1.0, abs(v1))


# ---------------------------------------------------------------------------
# representation cross-check (fast version with constant amplitudes)
# ---------------------------------------------------------------------------

def test_mixed_representation_matches_standard_unit_ops():
    req = _req([(0.0, 2.0), (0.0, 1.0), (0.0, 0.0)], (1, 1), nodes=96, tol=1e-8)
    base = compute_W_r(req).value
    for t in (1, 2, 3):
        vt = compute_W_r_mixed(req, t).value
        assert abs(vt - base) < 1e-6 * max(1.0, abs(base))


def test_mixed_rejects_bad_t():
    req = _req([(0.0, 1.0), (0.0, 0.0)], (1,))
    with pytest.raises(ValueError):
        compute_W_r(req, mixed_t=5)


# ---------------------------------------------------------------------------
# smeared correlators
# ---------------------------------------------------------------------------

def test_gaussian_fourier_against_quadrature():
    g = GaussianSmearing((0.4, -0.2), (0.7, 0.5))
    q0, q1 = 0.8, -1.1
    c0, c1 = g.center
    w0, w1 = g.width

    def f(x1, x0, part):
        val = np.exp(-(x0 - c0) ** 2 / (2 * w0 ** 2)
                     - (x1 - c1) ** 2 / (2 * w1 ** 2)
                     + 1j * (q0 * x0 - q1 * x1))
        return val.real if part == "re" else val.imag

    re, _ = dblquad(f, -8, 8, -8, 8, args=("re",), epsabs=1e-12)
    im, _ = dblquad(f, -8, 8, -8, 8, args=("im",), epsabs=1e-12)
    assert abs(g.fourier(q0, q1) - (re + 1j * im)) < 1e-9


def test_smeared_narrow_width_approaches_point_value():
    req = _req([(0.0, 1.0), (0.0, 0.0)], (1,), nodes=96, tol=1e-10)
    point = compute_W_r(req).value
    devs = []
    for w in (0.05, 0.02):
        sm = [GaussianSmearing((0.0, 1.0), (w, w)),
              GaussianSmearing((0.0, 0.0), (w, w))]
        res = smeared_correlator(req, sm)
        norm = (2 * np.pi * w * w) ** 2
        devs.append(abs(res.value / norm - point) / abs(point))
    assert devs[1] < 5e-3
    # quadratic small-width scaling
    assert 4.0 < devs[0] / devs[1] < 9.0


def test_smeared_requires_one_kernel_per_operator():
    req = _req([(0.0, 1.0), (0.0, 0.0)], (1,))
    with pytest.raises(ValueError):
        smeared_correlator(req, [GaussianSmearing((0, 0), (1, 1))])


# ---------------------------------------------------------------------------
# bookkeeping
# ---------------------------------------------------------------------------

def test_vacuum_composition_contributes_one():
    req = _req([(0.0, 1.0), (0.0, 0.0)], (0,))
    res = compute_W_r(req)
    assert res.value == pytest.approx(1.0)


def test_breakdown_weights_reassemble_total():
    req = _req([(0.0, 2.0), (0.0, 1.0), (0.0, 0.0)], (1, 1), nodes=64, tol=1e-6)
    res = compute_W_r(req)
    total = sum(ph * val / (comp.factorial_weight() * (2 * np.pi) ** comp.total)
                for comp, val, err, ph in res.breakdown)
    assert abs(total - res.value) < 1e-14
    assert isinstance(res.describe(), str)
