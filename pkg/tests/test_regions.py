import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ectorsion import regions as R
from ectorsion.curves import ShortCurve, disc_core, height, minimal_reduce
from ectorsion.torsion import TRIVIAL, three_torsion_witness, two_torsion_group

mpmath.mp.dps = 30


def _mp_real_roots(coeffs):
    return sorted(float(r.real) for r in mpmath.polyroots(coeffs, maxsteps=200, extraprec=60) if abs(r.imag) < 1e-20)


def test_alpha_pm():
    ap, am = R.alpha_pm()
    assert ap == pytest.approx(0.6823278038280193, abs=1e-13)
    assert am == pytest.approx(1.3247179572447460, abs=1e-13)
    assert abs(ap**3 + ap - 1) < 1e-12 and abs(am**3 - am - 1) < 1e-12


def test_quartic_roots_against_mpmath():
    a4, a1, a3, a0 = R.quartic_roots()
    plus = _mp_real_roots([3, 0, 6, 12, -1])
    minus = _mp_real_roots([3, 0, -6, 12, -1])
    assert [a1, a4] == pytest.approx(plus, abs=1e-12)
    assert [a0, a3] == pytest.approx(minus, abs=1e-12)
    for x, sgn in ((a4, 1), (a1, 1), (a3, -1), (a0, -1)):
        assert abs(3 * x**4 + sgn * 6 * x * x + 12 * x - 1) < 1e-10


def test_printed_alpha_decimals():
    a4, a1, a3, a0 = R.quartic_roots()
    for got, want in ((a0, -2.01637), (a1, -1.22259), (a3, 0.08711), (a4, 0.08011)):
        assert abs(got - want) < 5e-5


def test_betas_increasing_with_negative_beta3():
    b = R.betas()
    assert all(x < y for x, y in zip(b, b[1:]))
    assert b[3] == pytest.approx(-math.sqrt(0.08711329962483433 / 3), abs=1e-12)
    assert b[3] < 0


def test_printed_breakpoints_break_the_order():
    with pytest.raises(R.BetaOrderError):
        R.betas("printed")
    raw = R.raw_betas("printed")
    assert raw[5] == pytest.approx(math.sqrt(math.sqrt(3) / 3), abs=1e-12)  # 0.75984


def test_integrals_against_mpmath():
    b = R.betas()
    ip = mpmath.quad(lambda a: mpmath.sqrt(1 + 27 * a**6), [b[3], b[4]])
    im = mpmath.quad(lambda a: mpmath.sqrt(-1 + 27 * a**6), [b[0], b[1]])
    assert R.integral_I(1) == pytest.approx(float(ip), abs=1e-10)
    assert R.integral_I(-1) == pytest.approx(float(im), abs=1e-10)
    assert abs(R.integral_I(1) - 0.33383) < 1e-4
    assert abs(R.integral_I(-1) - 0.32030) < 1e-4


def test_adaptive_simpson():
    assert R.adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2, abs=1e-11)
    assert R.adaptive_simpson(lambda x: math.sqrt(x), 0, 1) == pytest.approx(2 / 3, abs=1e-9)


def test_areas_and_constants():
    ap, am = R.alpha_pm()
    area2 = 2 * math.log(am / ap) + 4 / 3 * (ap + am)
    assert R.area(1) == 4
    assert R.area(2) == pytest.approx(area2, rel=1e-14)
    assert R.area(2) == pytest.approx(4.0029, abs=1e-4)
    assert R.c_constant(1) == pytest.approx(4 / float(mpmath.zeta(10)), rel=1e-13)
    assert abs(R.c_constant(1) - 3.9960) < 5e-5
    assert R.c_constant(2) == pytest.approx(3.935, abs=5e-4)
    assert abs(R.c_constant(3) - 1.5221) < 5e-4
    assert R.area(3) == 2 * R.area3_plus()


def test_constants_report_flags():
    rep = R.constants_report(with_families=False)
    assert rep.flags["c2"] == "formula/printed mismatch"
    assert rep.flags["c1"] == rep.flags["c3"] == "consistent"
    assert rep.beta_printed_convention_increasing is False
    assert rep.c2_printed == 3.1969


def test_T_map_examples():
    assert R.T_map(2, 0, 1) == (0, 1)
    assert R.T_map(3, 1, 1) == (33, -26)
    assert R.T_map(3, -1, -1) == (33, -26)
    assert R.T_map(1, 5, -7) == (5, -7)


def test_in_region_examples():
    assert R.in_region(2, 10, 0, 1)
    assert R.in_region(3, 10**6, 1, 1)
    assert not R.in_region(2, 8, 2, 0)


@given(st.integers(1, 10**7), st.integers(-60, 60), st.integers(-3000, 3000), st.sampled_from([1, 2, 3]))
def test_in_region_is_height_test(X, a, b, i):
    A, B = R.T_map(i, a, b)
    assert R.in_region(i, X, a, b) == (height(A, B) < X)


@given(st.integers(1, 10**9), st.integers(-30, 30), st.integers(-3000, 3000))
def test_R3_symmetry(X, a, b):
    assert R.T_map(3, a, b) == R.T_map(3, -a, -b)
    assert R.in_region(3, X, a, b) == R.in_region(3, X, -a, -b)


def _brute_region(i, X, amax, bmax):
    out = set()
    for a in range(-amax, amax + 1):
        for b in range(-bmax, bmax + 1):
            if R.in_region(i, X, a, b) and disc_core(*R.T_map(i, a, b)) != 0:
                out.add((a, b))
    return out


def test_enumerate_region_examples():
    assert len(list(R.enumerate_region(1, 8))) == 14
    assert list(R.enumerate_region(3, 1)) == []
    assert set(R.enumerate_region(2, 100)) == _brute_region(2, 100, 4, 10)


@pytest.mark.parametrize("i", [1, 2, 3])
@pytest.mark.parametrize("X", [2, 64, 729, 4097, 10**4, 123457])
def test_enumerate_region_brute_force(i, X):
    # generous boxes: |a| <= X^(1/3) for i = 1, 2 and |b| <= 2 sqrt(7) X^(1/4) + 2 for i = 3
    amax = {1: 50, 2: 50, 3: 8}[i]
    bmax = {1: 360, 2: 12, 3: 140}[i]
    got = list(R.enumerate_region(i, X))
    assert len(got) == len(set(got)) == R.lattice_count(i, X)
    assert set(got) == _brute_region(i, X, amax, bmax)


@pytest.mark.parametrize("X", [10**3, 10**4, 10**5])
def test_region_images_have_the_torsion(X):
    for a, b in R.enumerate_region(2, X):
        assert two_torsion_group(ShortCurve(*R.T_map(2, a, b))) != TRIVIAL
    for a, b in R.enumerate_region(3, X):
        assert three_torsion_witness(ShortCurve(*R.T_map(3, a, b))) is not None


def test_equation_count():
    for X in (10, 10**3, 10**5):
        n, d = R.equation_count(1, X)
        assert n == d
    lat, dist = R.equation_count(3, 10**6)
    assert dist <= lat
    # T3 is two-to-one away from the fixed point (0, 0), which is singular
    assert lat == 2 * dist


def test_equation_count_R2_against_independent_scan():
    X = 10**4
    cA, cB = R._caps(X)
    brute = 0
    for A in range(-cA, cA + 1):
        for B in range(-cB, cB + 1):
            if disc_core(A, B) and two_torsion_group(ShortCurve(A, B)) != TRIVIAL:
                brute += 1
    assert R.equation_count(2, X)[1] == brute


@pytest.mark.parametrize("i", [1, 2, 3])
@pytest.mark.parametrize("X", [10**3, 10**4, 10**5, 10**6])
def test_sieve_identity(i, X):
    r = R.sieved_count(i, X)
    assert r.mobius == r.direct
    assert r.mobius <= r.distinct <= r.lattice


def test_sieve_small_X_is_trivial():
    for X in range(1, 64):
        for i in (1, 2, 3):
            r = R.sieved_count(i, X)
            assert r.mobius == r.distinct == r.direct


def test_sieve_i1_counts_minimal_box():
    X = 10**5
    brute = 0
    cA, cB = R._caps(X)
    for A in range(-cA, cA + 1):
        for B in range(-cB, cB + 1):
            if disc_core(A, B) and minimal_reduce(A, B) == (A, B):
                brute += 1
    assert R.sieved_count(1, X).mobius == brute


@pytest.mark.parametrize("i", [2, 3])
def test_scaling_closure(i):
    assert R.scaling_closure_violations(i, 10**6) == []


def test_piecewise_R3():
    ok, witness = R.piecewise_R3_check(10**6, 20000, seed=3)
    assert ok and witness is None
    ok, witness = R.piecewise_R3_check(10**12, 5000, seed=4)
    assert ok
    # with alpha_2 = -sqrt(3) the pieces no longer describe the region
    ok, witness = R.piecewise_R3_check(10**6, 20000, seed=3, convention="printed")
    assert not ok and witness is not None


def test_piecewise_R3_at_a_zero():
    # a = 0 sits in the middle piece, where the upper edge is sqrt(X^(1/2))
    bs = R.betas()
    X = 10**6
    for b in range(0, 40):
        assert (R.piecewise_R3_contains(X, 0, b, bs) == 3) == R.in_region(3, X, 0, b) == (b < 32)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_lipschitz_ratio_bounded(i):
    r = [R.lipschitz_ratio(i, 10**k) for k in range(4, 10)]
    assert max(r) < 5
