"""
test_quadrature.py - Gauss型積分則モジュールのテスト
"""

import itertools
import math
import re

import numpy as np
import pytest

from modules.moments import WeightParams, power_moments
from modules.oracle import exact_exponential_integral
from modules.quadrature import (
    EigenSolverError,
    GaussRule,
    QuadratureError,
    apply_rule,
    bessel_weight_rule,
    condition_report,
    convergence_table,
    gauss_laguerre_rule,
    golub_welsch,
    integrate_bessel,
    integrate_laguerre,
    truncation_bound,
)
from modules.recurrence import (
    BreakdownError,
    RecurrenceCoefficients,
    compute_coefficients,
    laguerre_recurrence,
)


SQRT2 = math.sqrt(2.0)

# 収束実験の3組
RULE_PARAMS = [
    (0.9, 0.1, 0.1),
    (1.0, 0.7, 0.3),
    (1.5, 0.5, 0.2),
]

# 標本パラメータ格子 (ν, α, c)
SAMPLED_GRID = list(
    itertools.product((0.0, 0.5, 0.9, 1.0, 1.5), (-0.5, 0.0, 0.1, 0.5, 0.7), (0.1, 0.2, 0.3, 0.7, 1.0))
)


def check_rule_structure(rule: GaussRule):
    assert np.all(rule.nodes > 0)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    assert math.fsum(rule.weights.tolist()) == pytest.approx(rule.mass, rel=1e-12)


class TestGolubWelsch:
    """golub_welsch のテスト"""

    def test_single_point(self):
        """正常系: 1×1 の固有値問題"""
        rule = golub_welsch(RecurrenceCoefficients([0.5], [2.0]))
        assert rule.n == 1
        assert rule.nodes.tolist() == [0.5]
        assert rule.weights.tolist() == [2.0]
        assert rule.mass == 2.0

    def test_two_point_laguerre(self):
        """正常系: α={1,3}, β={1,1} → 節点 2∓√2"""
        rule = golub_welsch(laguerre_recurrence(0, 1, 2))
        np.testing.assert_allclose(rule.nodes, [2 - SQRT2, 2 + SQRT2], rtol=1e-14)
        np.testing.assert_allclose(rule.weights, [(2 + SQRT2) / 4, (2 - SQRT2) / 4], rtol=1e-14)

    @pytest.mark.parametrize("n", [3, 10, 40])
    def test_matches_numpy_laguerre(self, n):
        """正常系: numpy の Gauss-Laguerre 則と一致する"""
        rule = golub_welsch(laguerre_recurrence(0, 1, n))
        nodes, weights = np.polynomial.laguerre.laggauss(n)
        np.testing.assert_allclose(rule.nodes, nodes, rtol=1e-12)
        np.testing.assert_allclose(rule.weights, weights, rtol=1e-9, atol=1e-14)

    def test_sorted_output(self):
        """正常系: 対角が降順でも節点は昇順"""
        rule = golub_welsch(RecurrenceCoefficients([9.0, 5.0, 1.0], [1.0, 0.5, 0.5]))
        assert np.all(np.diff(rule.nodes) > 0)
        assert math.fsum(rule.weights.tolist()) == pytest.approx(1.0, rel=1e-14)

    def test_empty(self):
        """異常系: 係数が空"""
        with pytest.raises(QuadratureError, match="空"):
            golub_welsch(RecurrenceCoefficients([], []))

    def test_non_convergence(self, monkeypatch):
        """異常系: 反復回数の上限で収束しない場合は反復情報付きのエラー"""
        monkeypatch.setattr("modules.quadrature.MAX_QL_ITERATIONS", 0)
        with pytest.raises(EigenSolverError, match="QL法") as excinfo:
            golub_welsch(laguerre_recurrence(0, 1, 5))
        assert excinfo.value.iterations == 0
        assert excinfo.value.index == 0


class TestGaussLaguerreRule:
    """gauss_laguerre_rule のテスト"""

    def test_single_point(self):
        """正常系: α=0, c=1 と c=2 の1点則"""
        rule = gauss_laguerre_rule(0, 1, 1)
        assert rule.nodes.tolist() == [1.0]
        assert rule.weights.tolist() == [1.0]
        rule = gauss_laguerre_rule(0, 2, 1)
        assert rule.nodes.tolist() == [0.5]
        assert rule.weights.tolist() == [0.5]

    def test_two_points(self):
        """正常系: α=0, c=1 の2点則"""
        rule = gauss_laguerre_rule(0, 1, 2)
        np.testing.assert_allclose(rule.nodes, [2 - SQRT2, 2 + SQRT2], rtol=1e-14)

    @pytest.mark.parametrize("alpha, c", [(0.5, 0.2), (-0.5, 1.0), (0.1, 0.1)])
    def test_exact_on_polynomials(self, alpha, c):
        """正常系: x^j (j ≤ 2n-1) を Γ(j+α+1)/c^{j+α+1} と一致させる"""
        n = 8
        rule = gauss_laguerre_rule(alpha, c, n)
        check_rule_structure(rule)
        for j in range(2 * n):
            expected = math.exp(math.lgamma(j + alpha + 1) - (j + alpha + 1) * math.log(c))
            assert apply_rule(rule, lambda x: x**j) == pytest.approx(expected, rel=1e-10)

    def test_integrate_laguerre(self):
        """正常系: e^{-x/2} を重み e^{-x} で積分すると 1/1.5"""
        value = integrate_laguerre(0.0, 1.0, lambda x: np.exp(-0.5 * x), 20)
        assert value == pytest.approx(1 / 1.5, rel=1e-10)


class TestBesselWeightRule:
    """bessel_weight_rule のテスト"""

    def test_one_point(self):
        """正常系: (0, 0, 1) の1点則は節点 μ_1/μ_0、重み μ_0"""
        rule = bessel_weight_rule(WeightParams(0, 0, 1), 1)
        mu0 = 1 + 1 / SQRT2
        mu1 = 1 + 1 / (2 * SQRT2)
        assert rule.nodes[0] == pytest.approx(mu1 / mu0, rel=1e-14)
        assert rule.weights[0] == pytest.approx(mu0, rel=1e-14)

    @pytest.mark.parametrize("nu, alpha, c", RULE_PARAMS)
    @pytest.mark.parametrize("n", [5, 10, 20])
    def test_exactness(self, nu, alpha, c, n):
        """正常系: Σ w_i x_i^j = μ_j (j ≤ 2n-1)"""
        params = WeightParams(nu, alpha, c)
        rule = bessel_weight_rule(params, n, "cramer")
        check_rule_structure(rule)
        moments = power_moments(params, 2 * n).values
        for j in range(2 * n):
            assert apply_rule(rule, lambda x: x**j) == pytest.approx(moments[j], rel=1e-8)

    @pytest.mark.parametrize("nu, alpha, c", SAMPLED_GRID)
    def test_exactness_on_grid(self, nu, alpha, c):
        """正常系: 標本格子の全点で20点則が μ_j (j ≤ 39) を再現し、節点と重みが正"""
        params = WeightParams(nu, alpha, c)
        rule = bessel_weight_rule(params, 20, "cramer")
        check_rule_structure(rule)
        moments = power_moments(params, 40).values
        for j in range(40):
            assert apply_rule(rule, lambda x: x**j) == pytest.approx(moments[j], rel=1e-8)

    def test_chebyshev_exactness(self):
        """正常系: (1, -0.5, 1) では Chebyshev の則も μ_j を再現する"""
        params = WeightParams(1.0, -0.5, 1.0)
        n = 12
        rule = bessel_weight_rule(params, n, "chebyshev")
        check_rule_structure(rule)
        moments = power_moments(params, 2 * n).values
        for j in range(2 * n):
            assert apply_rule(rule, lambda x: x**j) == pytest.approx(moments[j], rel=1e-8)

    @pytest.mark.parametrize("nu, alpha, c", RULE_PARAMS + [(0.0, -0.5, 1.0), (0.5, 0.0, 0.7)])
    def test_interlacing(self, nu, alpha, c):
        """正常系: n 点則と n+1 点則の節点が交互に並ぶ (n ≤ 30)"""
        params = WeightParams(nu, alpha, c)
        coeffs = compute_coefficients(params, 31, "cramer")
        previous = bessel_weight_rule(params, 1, coeffs=coeffs)
        for n in range(2, 32):
            rule = bessel_weight_rule(params, n, coeffs=coeffs)
            assert np.all(rule.nodes[:-1] < previous.nodes)
            assert np.all(previous.nodes < rule.nodes[1:])
            previous = rule

    @pytest.mark.parametrize("nu, alpha, c", RULE_PARAMS)
    def test_sixty_point_structure(self, nu, alpha, c):
        """正常系: 収束実験の各組で60点則が作れ、節点・重みが正で Σw = μ_0"""
        params = WeightParams(nu, alpha, c)
        rule = bessel_weight_rule(params, 60, "cramer")
        assert rule.n == 60
        check_rule_structure(rule)
        assert rule.mass == pytest.approx(power_moments(params, 1)[0], rel=1e-12)

    def test_sixty_points(self):
        """正常系: (0.9, 0.1, 0.1) の60点則は Cramer 法で作れ、Chebyshev では破綻する"""
        params = WeightParams(0.9, 0.1, 0.1)
        assert bessel_weight_rule(params, 60, "cramer").n == 60
        with pytest.raises(BreakdownError) as excinfo:
            bessel_weight_rule(params, 60, "chebyshev")
        assert excinfo.value.algorithm == "chebyshev"

    def test_short_coefficients(self):
        """異常系: 渡した係数が足りない"""
        coeffs = laguerre_recurrence(0, 1, 3)
        with pytest.raises(QuadratureError, match="不足"):
            bessel_weight_rule(WeightParams(0, 0, 1), 4, coeffs=coeffs)


class TestIntegrateBessel:
    """apply_rule / integrate_bessel のテスト"""

    def test_constant(self):
        """正常系: f ≡ 1 の1点則は μ_0 - 1 = 1/√2"""
        value = integrate_bessel(WeightParams(0, 0, 1), lambda x: np.ones_like(x), 1)
        assert value == pytest.approx(1 / SQRT2, rel=1e-13)

    @pytest.mark.parametrize("n", [1, 3, 8])
    def test_linear(self, n):
        """正常系: f(x) = x は μ_{1,0} = 1/(2√2)"""
        value = integrate_bessel(WeightParams(0, 0, 1), lambda x: x, n)
        assert value == pytest.approx(1 / (2 * SQRT2), rel=1e-12)

    def test_exponential(self):
        """正常系: e^{-0.5x} を (0, 0, 0.5) の30点則で積分すると 1/√2"""
        params = WeightParams(0, 0, 0.5)
        value = integrate_bessel(params, lambda x: np.exp(-0.5 * x), 30, "cramer")
        assert value == pytest.approx(1 / SQRT2, abs=1e-10)
        assert exact_exponential_integral(0, 0, 1.0) == pytest.approx(1 / SQRT2, rel=1e-14)

    @pytest.mark.parametrize("nu, alpha, c", RULE_PARAMS)
    def test_machine_precision_at_sixty(self, nu, alpha, c):
        """正常系: 収束実験の各組で e^{-0.5x} の60点則の絶対誤差が 1e-12 以下"""
        params = WeightParams(nu, alpha, c)
        value = integrate_bessel(params, lambda x: np.exp(-0.5 * x), 60, "cramer")
        assert abs(value - exact_exponential_integral(nu, alpha, c + 0.5)) <= 1e-12

    def test_non_finite_value(self):
        """異常系: 節点で非有限なら節点を示すエラー"""
        rule = gauss_laguerre_rule(0, 1, 3)

        def f(x):
            values = np.ones_like(x)
            values[1] = np.nan
            return values

        with pytest.raises(QuadratureError, match=re.escape(f"x={float(rule.nodes[1])!r}")):
            apply_rule(rule, f)

    def test_scalar_result_broadcast(self):
        """正常系: スカラーを返す関数も使える"""
        rule = gauss_laguerre_rule(0, 1, 4)
        assert apply_rule(rule, lambda x: 2.0) == pytest.approx(2.0, rel=1e-14)


class TestTruncationBound:
    """truncation_bound のテスト"""

    def test_hand_value(self):
        """正常系: n=1, α=0, Laguerre係数 (c=1), sup=1 → 1"""
        assert truncation_bound(laguerre_recurrence(0, 1, 2), 0, 1, 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_zero_derivative(self):
        """正常系: sup = 0 なら 0"""
        assert truncation_bound(laguerre_recurrence(0, 1, 1), 0, 5, 0.0) == 0.0

    def test_monotone_and_dominates_error(self):
        """正常系: (1, -0.5, 1) の e^{-0.5x} で上界は n ∈ [2, 20] で減少し、実際の誤差以上"""
        params = WeightParams(1.0, -0.5, 1.0)
        coeffs = compute_coefficients(params, 21, "cramer")
        exact = exact_exponential_integral(1.0, -0.5, 1.5)
        bounds = []
        for n in range(2, 21):
            bound = truncation_bound(coeffs, params.alpha, n, 0.5 ** (2 * n), c=params.c)
            error = abs(integrate_bessel(params, lambda x: np.exp(-0.5 * x), n, coeffs=coeffs) - exact)
            assert error <= bound + 1e-14
            bounds.append(bound)
        assert all(later < earlier for earlier, later in zip(bounds, bounds[1:]))

    def test_overflow_is_infinite(self):
        """正常系: 上界がオーバーフローすると inf"""
        coeffs = RecurrenceCoefficients(np.ones(3), np.full(3, 1e300))
        assert truncation_bound(coeffs, 0, 2, 1e300) == math.inf

    def test_insufficient_coefficients(self):
        """異常系: β_n がない"""
        with pytest.raises(QuadratureError, match="β_0..β_3"):
            truncation_bound(laguerre_recurrence(0, 1, 3), 0, 3, 1.0)

    def test_negative_sup(self):
        """異常系: sup < 0"""
        with pytest.raises(QuadratureError, match="0以上"):
            truncation_bound(laguerre_recurrence(0, 1, 3), 0, 1, -1.0)


class TestConditionReport:
    """condition_report のテスト"""

    def test_table_values(self):
        """正常系: (0.9, 0.1, 0.1) の κ₂(Q_k) は高精度の独立計算と4桁で一致する"""
        expected = {5: 1.2949, 10: 1.3801, 15: 1.3886, 20: 1.4465, 25: 1.5664, 30: 1.6593}
        report = dict(condition_report(WeightParams(0.9, 0.1, 0.1), [1, *expected]))
        assert report[1] == 1.0
        for k, kappa in expected.items():
            assert report[k] == pytest.approx(kappa, abs=1e-4)

    def test_order_preserved(self):
        """正常系: 指定した順で返す"""
        report = condition_report(WeightParams(1.0, 0.7, 0.3), [10, 2, 6])
        assert [k for k, _ in report] == [10, 2, 6]
        assert all(kappa >= 1.0 for _, kappa in report)

    def test_empty_sizes(self):
        """異常系: 空の列"""
        with pytest.raises(QuadratureError, match="空"):
            condition_report(WeightParams(0, 0, 1), [])


class TestConvergenceTable:
    """convergence_table のテスト"""

    @pytest.mark.parametrize("nu, alpha, c", RULE_PARAMS)
    def test_reaches_machine_precision(self, nu, alpha, c):
        """正常系: 収束実験の各組で γ=0.5 の Cramer 法は n=60 で誤差 1e-12 以下"""
        table = convergence_table(WeightParams(nu, alpha, c), 0.5, 60, algorithms=("cramer",))
        assert list(table.columns) == ["algorithm", "n", "approx", "abs_error", "bound", "status"]
        assert len(table) == 60
        assert (table["status"] == "ok").all()
        errors = table["abs_error"].to_numpy()
        assert errors[-1] <= 1e-12
        assert errors[-1] <= errors[9]

    def test_breakdown_rows(self):
        """正常系: 破綻後の行は status に記録され、表の作成は続く"""
        table = convergence_table(
            WeightParams(0.5, 0.5, 0.2), 0.5, 30, algorithms=("chebyshev", "cramer")
        )
        chebyshev = table[table["algorithm"] == "chebyshev"]
        broken = chebyshev[chebyshev["status"] != "ok"]
        assert not broken.empty
        assert broken["status"].str.startswith("breakdown@").all()
        assert broken["approx"].isna().all()
        assert (table.loc[table["algorithm"] == "cramer", "status"] == "ok").all()

    def test_explicit_exact(self):
        """正常系: 厳密値を渡すとその値との差を誤差にする"""
        params = WeightParams(1.0, 0.5, 0.7)
        table = convergence_table(params, 0.5, 4, algorithms=("cramer",), exact=0.0)
        np.testing.assert_allclose(table["abs_error"], table["approx"].abs(), rtol=0, atol=0)

    def test_negative_gamma(self):
        """異常系: γ < 0"""
        with pytest.raises(QuadratureError, match="gamma"):
            convergence_table(WeightParams(0, 0, 1), -0.1, 3)
