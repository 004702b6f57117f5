import math

import numpy as np
import pytest

from savark.errors import ConfigError, UnsupportedOrderError, ValidationError
from savark.tableaux import (
    DIRK,
    ERK,
    GENERAL,
    ButcherTableau,
    algebraic_stability,
    available_methods,
    base_tableau,
    build_rkpc_markII,
    builtin,
    check_ark_order,
    classify,
    parse_pair,
    load_pair,
    stability_function,
    stage_blocks,
    validate,
    validate_pair,
)
from savark.tableaux.library import GAMMA_DEFAULT, diark_2_2_2


BUILTIN_NAMES = ["diark_2_2_2", "diark_2_3_3", "diark_3_4_3", "diark_5_6_4", "gark_4_5_4"]


def test_available_methods_lists_every_builtin():
    assert available_methods() == sorted(BUILTIN_NAMES)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_pairs_validate_and_classify(name):
    pair = builtin(name)
    assert validate_pair(pair).ok
    assert classify(pair.explicit) == ERK
    expected = GENERAL if name == "gark_4_5_4" else DIRK
    assert classify(pair.implicit) == expected
    assert np.allclose(pair.implicit.c, pair.implicit.A.sum(axis=1))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_pairs_are_algebraically_stable(name):
    report = algebraic_stability(builtin(name).implicit)
    assert report.is_algebraically_stable
    assert report.b_min >= 0.0


@pytest.mark.parametrize("name,order", [
    ("diark_2_2_2", 2),
    ("diark_2_3_3", 3),
    ("diark_3_4_3", 3),
    ("diark_5_6_4", 3),
    ("gark_4_5_4", 3),
])
def test_achieved_order_up_to_three(name, order):
    report = check_ark_order(builtin(name), target=3)
    assert report.achieved_order == order


def test_diark_2_2_2_fails_an_order_three_condition():
    report = check_ark_order(diark_2_2_2(), target=3)
    failed = [r.condition for r in report.failed(3)]
    assert "bh.ch^2" in failed
    # b_hat . c_hat^2 = 1/2 for this explicit tableau
    res = next(r for r in report.conditions if r.condition == "bh.ch^2")
    assert res.residual == pytest.approx(0.5 - 1.0 / 3.0, abs=1e-14)


@pytest.mark.parametrize("target", [0, 4])
def test_unsupported_order_targets(target):
    with pytest.raises(UnsupportedOrderError):
        check_ark_order(builtin("diark_2_2_2"), target=target)


def test_diark_2_2_2_spectrum_matches_closed_form():
    # M = [[g - 1/4, 1/4 - g], [1/4 - g, g - 1/4]] -> eigenvalues {2g - 1/2, 0}
    report = algebraic_stability(diark_2_2_2().implicit)
    assert report.eigenvalues[0] == pytest.approx(2.0 * GAMMA_DEFAULT - 0.5, abs=1e-12)
    assert report.eigenvalues[1] == pytest.approx(0.0, abs=1e-12)


def test_diark_3_4_3_spectrum():
    eig = algebraic_stability(builtin("diark_3_4_3").implicit).eigenvalues
    assert eig[0] == pytest.approx(1.5530, abs=5e-4)
    assert np.allclose(eig[1:], 0.0, atol=1e-6)


@pytest.mark.parametrize("gamma", np.random.default_rng(11).uniform(0.25, 2.0, size=10))
def test_diark_2_2_2_matrix_closed_form(gamma):
    M = algebraic_stability(diark_2_2_2(gamma).implicit).M
    expected = (gamma - 0.25) * np.array([[1.0, -1.0], [-1.0, 1.0]])
    assert np.allclose(M, expected, atol=1e-13)


@pytest.mark.parametrize("tableau", [
    base_tableau("gauss_2"),
    builtin("gark_4_5_4").implicit,
], ids=["gauss_2", "gark_4_5_4"])
def test_gauss_based_matrices_vanish(tableau):
    report = algebraic_stability(tableau)
    assert np.allclose(report.M, 0.0, atol=1e-14)
    assert report.is_algebraically_stable


def test_diark_2_3_3_spectrum():
    eig = algebraic_stability(builtin("diark_2_3_3").implicit).eigenvalues
    assert eig[0] == pytest.approx(0.5 + math.sqrt(3.0) / 3.0, abs=1e-12)
    assert np.allclose(eig[1:], 0.0, atol=1e-12)


def test_diark_2_2_2_at_one_quarter():
    tab = diark_2_2_2(0.25).implicit
    assert validate(tab).ok
    assert np.allclose(tab.c, [0.25, 0.75], atol=1e-15)
    report = algebraic_stability(tab)
    assert np.allclose(report.M, 0.0, atol=1e-15)
    assert report.is_algebraically_stable


def test_stability_boundary_at_one_quarter():
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if algebraic_stability(diark_2_2_2(mid).implicit).is_algebraically_stable:
            hi = mid
        else:
            lo = mid
    assert hi == pytest.approx(0.25, abs=1e-10)


def test_stage_blocks():
    assert stage_blocks(builtin("diark_2_2_2").implicit.A) == [(0,), (1,)]
    assert stage_blocks(builtin("gark_4_5_4").implicit.A) == [(0,), (1,), (2,), (3, 4)]
    assert stage_blocks(base_tableau("gauss_2").A) == [(0, 1)]


def test_stability_functions_of_base_methods():
    z = np.array([-0.5, -2.0, -10.0 + 1.0j, 0.3j])
    assert np.allclose(stability_function(base_tableau("implicit_euler"), z), 1.0 / (1.0 - z))
    pade = (1 + z / 2 + z ** 2 / 12) / (1 - z / 2 + z ** 2 / 12)
    assert np.allclose(stability_function(base_tableau("gauss_2"), z), pade)
    assert stability_function(base_tableau("implicit_midpoint"), -1.0) == pytest.approx((1 - 0.5) / (1 + 0.5))


class TestValidate:
    def test_row_sum_violation(self):
        t = ButcherTableau(A=[[0.5]], b=[1.0], c=[0.3])
        result = validate(t)
        assert not result.ok
        assert any(v.startswith("c != A*1") for v in result.violations)

    def test_dimension_mismatch(self):
        t = ButcherTableau(A=[[0.5, 0.0], [0.5, 0.5]], b=[1.0], c=[0.5, 1.0])
        assert any("dimension mismatch" in v for v in validate(t).violations)

    def test_non_finite(self):
        t = ButcherTableau.from_matrix([[float("nan")]], [1.0])
        assert any("non-finite entries in A" in v for v in validate(t).violations)


class TestNames:
    @pytest.mark.parametrize("alias,name", [
        ("SAV-MDIARK(5,6,4)", "diark_5_6_4"),
        ("DIARK(2,2,2)", "diark_2_2_2"),
        ("sav-diark(3,4,3)", "diark_3_4_3"),
        ("magrk", "gark_4_5_4"),
        ("GARK(4,5,4)", "gark_4_5_4"),
    ])
    def test_aliases(self, alias, name):
        assert builtin(alias).name == name

    def test_unknown_name_lists_available(self):
        with pytest.raises(ConfigError, match="available"):
            builtin("rk4")

    def test_gamma_parameter(self):
        pair = builtin("diark_2_2_2", gamma=0.3)
        assert pair.implicit.A[0, 0] == pytest.approx(0.3)
        assert pair.implicit.A[1, 0] == pytest.approx(0.4)

    def test_unknown_base(self):
        with pytest.raises(ConfigError):
            base_tableau("radau_iia")
        assert base_tableau("gauss2").s == 2


class TestKronecker:
    def test_implicit_euler_one_sweep(self):
        tab = build_rkpc_markII(base_tableau("implicit_euler"), 1)
        assert tab.s == 2
        assert np.array_equal(tab.a.A, [[0, 0], [0, 1]])
        assert np.array_equal(tab.a_hat.A, [[0, 0], [1, 0]])
        assert np.array_equal(tab.a_tilde.A, [[0, 1], [0, 1]])
        assert np.array_equal(tab.a_bar.A, [[1, 0], [1, 0]])
        assert np.array_equal(tab.b, [0, 1])

    def test_stage_count_and_weights(self):
        base = base_tableau("gauss_2")
        tab = build_rkpc_markII(base, 3)
        assert tab.s == 8
        assert tab.b.sum() == pytest.approx(1.0)
        assert np.allclose(tab.b[-2:], base.b)
        for part in tab.parts():
            assert np.allclose(part.c, part.A.sum(axis=1))

    def test_zero_sweeps_rejected(self):
        with pytest.raises(ConfigError):
            build_rkpc_markII(base_tableau("gauss_2"), 0)


PAIR_TEXT = """
[method]
name = two_stage   # comment
order = 2

[implicit]
A = 0.25 0
    0.5 0.25
b = 0.5 0.5

[explicit]
A = 0 0 ; 1 0
b = 0.5 0.5
"""


class TestTextFormat:
    def test_parse(self):
        pair = parse_pair(PAIR_TEXT)
        assert pair.name == "two_stage"
        assert pair.claimed_order == 2
        assert np.allclose(pair.implicit.A, [[0.25, 0.0], [0.5, 0.25]])
        assert np.allclose(pair.explicit.c, [0.0, 1.0])

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "mine.tab"
        path.write_text(PAIR_TEXT.replace("name = two_stage   # comment", ""), encoding="utf-8")
        pair = load_pair(path)
        assert pair.name == "mine"

    def test_explicit_part_must_be_strictly_lower(self):
        text = PAIR_TEXT.replace("A = 0 0 ; 1 0", "A = 0.1 0 ; 1 0")
        with pytest.raises(ValidationError, match="strictly lower"):
            parse_pair(text)

    def test_size_mismatch(self):
        text = PAIR_TEXT.replace("A = 0 0 ; 1 0", "A = 0 0 1")
        with pytest.raises(ConfigError):
            parse_pair(text)

    def test_missing_section(self):
        with pytest.raises(ConfigError, match="explicit"):
            parse_pair(PAIR_TEXT.split("[explicit]")[0])
