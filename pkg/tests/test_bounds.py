import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from syscow import bounds
from syscow.bounds import (
    ManifoldSpec, SymbolicBound, acw_upper_bound, asymptotic_check_s2_power, bounds_for,
    clifford_pair_count, envelope_constant, gamma_config, generic_2essential_bound,
    kahler_volume_bound_cp3, kahler_volume_bound_cp_line, kahler_volume_bound_cpn,
    parse_rational, stsys_bound_cp3, stsys_bound_cp_line, stsys_bound_s2_power)
from syscow.errors import UnsupportedError, ValidationError
from syscow.flat_model import FlatTorusMetric, ProductModel, product_model_stsys

F = Fraction
PI = math.pi


def sb(q, s, sym=()):
    return SymbolicBound(F(q), s, tuple(sym))


def test_acw_examples():
    assert acw_upper_bound(2, 4) == 6
    assert acw_upper_bound(3, 48) == F(5, 4)
    assert acw_upper_bound(1, 2) == 2
    with pytest.raises(ValidationError):
        acw_upper_bound(2, 0)
    with pytest.raises(ValidationError):
        acw_upper_bound(2, -1)


@pytest.mark.parametrize("n,c", [(1, 1), (2, 6), (3, 15), (10, 190)])
def test_clifford_pairs(n, c):
    assert clifford_pair_count(n) == c


def test_s2_power_examples():
    assert stsys_bound_s2_power(2, 4, F(3, 2)) == sb(36, 1)
    assert stsys_bound_s2_power(2, 4) == sb(36, 1)
    assert stsys_bound_s2_power(1, 2, 1) == sb(4, 1)
    b = stsys_bound_s2_power(4, 8)
    # 2 pi * V_4 * Gamma_4 * (4*4*7/8), V_4 = 6
    assert b == sb(2 * 6 * F(4 * 4 * 7, 8), 1, [("Gamma_4", 1)])
    assert b.float_value is None
    assert str(b) == "168*pi*Gamma_4"


def test_cp3_examples():
    assert stsys_bound_cp3(48) == sb(5, 1)
    assert stsys_bound_cp3(96) == sb(F(5, 2), 1)
    assert stsys_bound_cp3(24) == sb(10, 1)
    assert kahler_volume_bound_cp3(48) == sb(F(125, 6), 3)
    assert str(kahler_volume_bound_cp3(48)) == "125/6*pi^3"
    # scal = 48 * 5^3: stsys bound 5 pi / 125 = pi / 25, volume (pi/25)^3 / 6
    golden = kahler_volume_bound_cp3(48 * 125)
    assert golden == sb(F(1, 93750), 3)


def test_cpn_examples():
    b = kahler_volume_bound_cpn(1, 5)
    assert b == sb(F(2, 5), 1, [("c_1", 1)])
    assert b.float_value is None
    for n in (1, 2, 3, 4):
        a, c = kahler_volume_bound_cpn(n, 7), kahler_volume_bound_cpn(n, 14)
        assert c.rational == a.rational / 2**n and c.symbolic_factors == a.symbolic_factors


def test_cpn_matches_line_chain():
    # the line chain gives K-cw-type constant c_3 = k * 4n(2n-1) with twist k = 2
    c3 = 2 * 4 * 3 * 5
    for scal in (48, 7, F(3, 2)):
        assert kahler_volume_bound_cpn(3, scal, c_n=c3) == kahler_volume_bound_cp3(scal)


def test_cp_line_general():
    assert stsys_bound_cp_line(1, 2) == sb(4, 1)        # CP^1 = S^2: 4 pi at scal 2
    b5 = stsys_bound_cp_line(5, 1)
    assert b5 == sb(2 * 3 * 4 * 5 * 9, 1)              # twist 3, 4n(2n-1) = 180
    assert kahler_volume_bound_cp_line(5, 1) == sb(F(1080**5, 120), 5)
    with pytest.raises(UnsupportedError):
        stsys_bound_cp_line(4, 1)


def test_generic_examples():
    assert generic_2essential_bound(1, 3, 5) == sb(F(2, 5), 1, [("c_3", 1)])
    assert generic_2essential_bound(2, 3, 1) == sb(3, 1, [("c_3", 1)])
    b = generic_2essential_bound(100, 3, 1, banaszczyk_c=2.0)
    assert b.symbolic_factors == (("Gamma_100", 1), ("c_3", 1))
    env = [s for s in b.trace.steps if s.op == "gamma_envelope"][0]
    assert env.output == pytest.approx(2.0 * 100 * math.log(100))
    assert generic_2essential_bound(100, 3, 1, gamma=F(700)) == sb(1400, 1, [("c_3", 1)])


def test_admissibility_gate(monkeypatch):
    trace = stsys_bound_cp3(48).trace
    idx = [s for s in trace.steps if s.op == "line_index_cp"]
    assert len(idx) == 1 and idx[0].output == 1
    monkeypatch.setitem(bounds.OPS, "line_index_cp", lambda n, k: F(0))
    with pytest.raises(ValidationError, match="not admissible"):
        stsys_bound_cp3(48)


def test_parse_rational():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational(4.0) == 4
    assert parse_rational("0.25") == F(1, 4)
    with pytest.raises(ValidationError):
        parse_rational(math.pi)
    with pytest.raises(ValidationError):
        parse_rational("pi")
    with pytest.raises(ValidationError):
        stsys_bound_cp3(math.sqrt(2))


def test_float_value_consistency():
    for b in (stsys_bound_s2_power(2, 4), kahler_volume_bound_cp3(48), stsys_bound_cp3(7)):
        assert b.float_value == pytest.approx(float(b.rational) * PI**b.pi_power, rel=1e-12)


def test_json_format():
    out = kahler_volume_bound_cp3(48).to_json()
    assert out["q"] == "125/6" and out["pi_power"] == 3 and out["symbolic"] == []
    assert out["trace"][-1]["output"]["q"] == "125/6"
    assert stsys_bound_s2_power(2, 4).to_json()["q"] == "36/1"


# --- trace replay -------------------------------------------------------------

ALL_BOUNDS = [
    lambda: stsys_bound_s2_power(2, 4),
    lambda: stsys_bound_s2_power(5, F(7, 3), banaszczyk_c=1.5),
    lambda: stsys_bound_s2_power(6, 12, gamma_n=F(11, 2)),
    lambda: stsys_bound_cp3(48),
    lambda: kahler_volume_bound_cp3(F(9, 2)),
    lambda: kahler_volume_bound_cp_line(7, 3),
    lambda: kahler_volume_bound_cpn(4, 3),
    lambda: kahler_volume_bound_cpn(3, 3, c_n=120),
    lambda: generic_2essential_bound(2, 2, 1),
    lambda: generic_2essential_bound(9, 4, 2, banaszczyk_c=1.0),
]


@pytest.mark.parametrize("make", ALL_BOUNDS)
def test_replay(make):
    b = make()
    assert b.trace.replay() == b.without_trace()
    assert b.trace.lines()


def test_replay_detects_tampering():
    b = stsys_bound_cp3(48)
    s = b.trace.steps[0]
    b.trace.steps[0] = type(s)(s.rule, s.formula, s.op, s.inputs, F(1))
    with pytest.raises(AssertionError):
        b.trace.replay()


# --- properties -----------------------------------------------------------------

scals = st.fractions(min_value=F(1, 100), max_value=100)


@given(scals, scals)
def test_strictly_decreasing(s1, s2):
    if s1 == s2:
        return
    lo, hi = min(s1, s2), max(s1, s2)
    makers = [
        lambda s: stsys_bound_s2_power(2, s),
        lambda s: stsys_bound_s2_power(4, s),
        lambda s: stsys_bound_cp3(s),
        lambda s: kahler_volume_bound_cp3(s),
        lambda s: kahler_volume_bound_cpn(5, s),
        lambda s: generic_2essential_bound(3, 2, s),
    ]
    for make in makers:
        a, b = make(hi), make(lo)
        assert a.pi_power == b.pi_power and a.symbolic_factors == b.symbolic_factors
        assert a.rational < b.rational


@pytest.mark.parametrize("n", range(1, 9))
def test_model_compatibility_unit_spheres(n):
    stsys = product_model_stsys(ProductModel((1.0,) * n)).value
    assert stsys == pytest.approx(4 * PI)
    bound = stsys_bound_s2_power(n, 2 * n, gamma_n=None if n <= 2 else None,
                                 banaszczyk_c=None)
    gamma = float(bounds.EXACT_GAMMA.get(n, F(1))) if n <= 2 else gamma_config(n)
    value = bound.float_value if bound.float_value is not None else (
        float(bound.rational) * PI * gamma)
    assert stsys <= value


@given(st.fractions(min_value=F(1, 10), max_value=1))
def test_model_compatibility_small_spheres(r):
    stsys = product_model_stsys(ProductModel((float(r), float(r)))).value
    scal = F(4) / (r * r)
    assert stsys <= stsys_bound_s2_power(2, scal).float_value + 1e-12
    assert stsys <= 36 * PI


def test_torus_models_below_generic_shape():
    # (S^2)^1 x T^2 with unit data: systole 1, spherical systole 4 pi
    model = ProductModel((1.0,), FlatTorusMetric.identity(2))
    assert product_model_stsys(model).value == pytest.approx(1.0)


# --- asymptotics ------------------------------------------------------------------

def test_v_n_column():
    rows = asymptotic_check_s2_power(6)
    assert [r.v_n for r in rows] == [2, 4, 6, 9, 12]
    assert rows[0].exact == sb(36, 1) or rows[0].exact.rational * PI == pytest.approx(rows[0].bound)


@pytest.mark.parametrize("c", [0.5, 1.0, 3.0])
def test_envelope(c):
    rows = asymptotic_check_s2_power(64, c)
    assert all(r.ok for r in rows)
    assert envelope_constant(c) >= 36 * PI / (16 * math.log(2))


def test_ratio_envelope():
    # bound(2n)/bound(n) <= 16 (1 + log 2 / log n) (1 + o(1)): check with slack 1 + 3/n
    for n in range(4, 33):
        b = lambda m: 2 * PI * bounds.v_n(m) * gamma_config(m) * float(acw_upper_bound(m, 2 * m))
        assert b(2 * n) / b(n) <= 16 * (1 + math.log(2) / math.log(n)) * (1 + 3 / n)


# --- dispatch -----------------------------------------------------------------------

def test_bounds_for():
    assert bounds_for(ManifoldSpec("s2xs2", (), 4))["stsys2"] == sb(36, 1)
    cp3 = bounds_for(ManifoldSpec("cp3", (), 48))
    assert cp3["stsys2"] == sb(5, 1) and cp3["kahler_volume"] == sb(F(125, 6), 3)
    odd = bounds_for(ManifoldSpec("cpodd", (1,), 48))
    assert odd["stsys2"] == sb(5, 1)
    assert odd["kahler_volume_k_cowaist"].symbolic_factors == (("c_3", 3),)
    tor = bounds_for(ManifoldSpec("s2tor", (1, 2), 1))["stsys2_spherical"]
    assert tor.symbolic_factors == (("Gamma_2", 1), ("c_2", 1)) or tor == sb(3, 1, [("c_2", 1)])
    gen = bounds_for(ManifoldSpec("generic", (2, 6), 1))["stsys2"]
    assert gen == sb(3, 1, [("c_3", 1)])


def test_spec_validation():
    for kind, params in (("nope", ()), ("s2pow", ()), ("s2pow", (0,)), ("generic", (1, 3)),
                         ("cpodd", (-1,)), ("s2tor", (0, 1))):
        with pytest.raises(ValidationError):
            ManifoldSpec(kind, params, 1)
    with pytest.raises(ValidationError):
        ManifoldSpec("cp3", (), 0)
    assert ManifoldSpec("s2tor", (2, 3), 1).dimension == 7
