import math

import pytest

from anires import QuadratureError, QuadratureSpec, integrate_semiline, integrate_unit

TIGHT = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12, max_refinements=12)

# analytically known battery: (domain, integrand, exact value)
UNIT_CASES = [
    (lambda w: 1.0, 1.0),
    (lambda w: w**3, 0.25),
    (lambda w: w**-0.5, 2.0),
    (lambda w: math.log(1.0 / (1.0 - w)), 1.0),
    (lambda w: math.log(1.0 / w), 1.0),
    (lambda w: math.log(w) ** 2, 2.0),
    (lambda w: w**-0.9, 10.0),
    (lambda w: 1.0 / (1.0 + w * w), math.pi / 4.0),
]
SEMILINE_CASES = [
    (lambda t: math.exp(-t), 1.0),
    (lambda t: t**3 * math.exp(-t), 6.0),
    (lambda t: math.exp(-t * t), math.sqrt(math.pi) / 2.0),
    (lambda t: t ** -0.5 * math.exp(-t), math.sqrt(math.pi)),
    (lambda t: t * math.exp(-t * t), 0.5),
    (lambda t: math.exp(-t) * math.sin(t) ** 2, 0.4),  # 1/2 - 1/(2*5) ... = 2/5
]


@pytest.mark.parametrize("f,exact", UNIT_CASES)
def test_unit_battery(f, exact):
    res = integrate_unit(f, TIGHT)
    assert res.value == pytest.approx(exact, rel=1e-11, abs=1e-12)


@pytest.mark.parametrize("f,exact", SEMILINE_CASES)
def test_semiline_battery(f, exact):
    res = integrate_semiline(f, TIGHT)
    assert res.value == pytest.approx(exact, rel=1e-11, abs=1e-12)


def test_riemann_refinement_oracle():
    # brute-force midpoint refinement for int_0^inf e^{-r - r^2} dr
    f = lambda r: math.exp(-r - r * r)
    top = 10.0
    coarse = None
    for n in (1 << 12, 1 << 15, 1 << 18):
        h = top / n
        val = h * sum(f((i + 0.5) * h) for i in range(n))
        coarse = val
    res = integrate_semiline(f, TIGHT)
    assert res.value == pytest.approx(coarse, abs=5e-9)
    assert res.value == pytest.approx(0.5456413607650471, rel=1e-12)


def test_error_estimate_reported():
    res = integrate_semiline(lambda t: math.exp(-t), TIGHT)
    assert res.error <= 1e-12
    assert res.levels >= 1


def test_tolerance_looser_wins():
    # huge abs_tol converges immediately even though rel_tol is tiny
    spec = QuadratureSpec(abs_tol=1.0, rel_tol=1e-300, max_refinements=3)
    res = integrate_semiline(lambda t: math.exp(-t), spec)
    assert abs(res.value - 1.0) < 1e-2
    assert res.levels <= 1


def test_nonconvergence_raises_with_best_estimate():
    spec = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-13, max_refinements=1)
    with pytest.raises(QuadratureError) as err:
        integrate_unit(lambda w: math.sin(50.0 / (w + 0.01)), spec)
    assert math.isfinite(err.value.best)
    assert err.value.error > 0


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_refinements=0)


def test_peaked_integrand_far_from_center():
    # mass concentrated near w ~ 1e-3; the sweep must not truncate early
    def f(w):
        return math.exp(-((w - 1e-3) / 2e-4) ** 2)

    res = integrate_unit(f, TIGHT)
    assert res.value == pytest.approx(2e-4 * math.sqrt(math.pi), rel=1e-6)
