"""
test_specfun.py - 特殊関数カーネルのテスト
"""

import math
import random

import numpy as np
import pytest
from scipy import special

from modules.specfun import (
    SignedLog,
    SpecfunError,
    bessel_j,
    gauss_2f1,
    log_gamma,
    log_gamma_table,
    signed_log_sum,
    signed_log_sum_array,
)


class TestLogGamma:
    """log_gamma のテスト"""

    def test_integers_are_log_factorials(self):
        """正常系: 整数では ln((x-1)!) と一致する"""
        assert log_gamma(1) == 0.0
        assert log_gamma(2) == 0.0
        assert log_gamma(5) == math.log(24)

    def test_half_integer(self):
        """正常系: Γ(1/2) = √π"""
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)

    @pytest.mark.parametrize("x", [0.01, 0.3, 1.7, 9.5, 42.25, 99.9])
    def test_functional_equation(self, x):
        """正常系: Γ(x+1) = xΓ(x)"""
        assert math.exp(log_gamma(x + 1) - log_gamma(x)) == pytest.approx(x, rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
    def test_invalid_argument(self, x):
        """異常系: x ≤ 0 や非有限値はエラー"""
        with pytest.raises(SpecfunError, match="正の有限値"):
            log_gamma(x)

    def test_table_matches_scalar(self):
        """正常系: 拡張精度テーブルが log_gamma と一致する"""
        table = log_gamma_table(0.1, 120)
        assert table.dtype == np.longdouble
        for k in (0, 1, 7, 50, 119):
            assert float(table[k]) == pytest.approx(log_gamma(0.1 + k), rel=1e-13)

    def test_table_single_entry(self):
        """正常系: 要素数1のテーブル"""
        table = log_gamma_table(3.0, 1)
        assert float(table[0]) == math.log(2)

    def test_table_invalid_count(self):
        """異常系: 要素数0はエラー"""
        with pytest.raises(SpecfunError, match="要素数"):
            log_gamma_table(1.0, 0)


class TestGauss2F1:
    """gauss_2f1 のテスト"""

    def test_terminating_polynomial(self):
        """正常系: a = -1 で多項式 1 + ab z/c になる"""
        assert gauss_2f1(-1, 2, 1, 0.2) == pytest.approx(0.6, rel=1e-15)

    def test_terminating_exact_sum(self):
        """正常系: 二進で正確な係数なら有限和と完全一致する"""
        # 1 - 2·1·0.25/1 + (-2)(-1)·1·2/(1·2·2)·0.25²
        assert gauss_2f1(-2, 1, 1, 0.25) == 0.5625

    def test_zero_parameter(self):
        """正常系: a = 0 なら 1"""
        assert gauss_2f1(0, 1, 1, 0.3) == 1.0

    def test_arcsine(self):
        """正常系: ₂F₁(1/2, 1/2; 3/2; z²) = arcsin(z)/z"""
        assert gauss_2f1(0.5, 0.5, 1.5, 0.25) == pytest.approx(
            math.asin(0.5) / 0.5, rel=1e-12
        )

    @pytest.mark.parametrize(
        "a, b, cc, z",
        [(0.3, 1.3, 1.9, 0.4), (-0.5, 0.5, 1.0, 0.1), (-1.7, 2.7, 2.5, 0.49), (2.0, 3.0, 1.5, -0.45)],
    )
    def test_matches_scipy(self, a, b, cc, z):
        """正常系: scipy.special.hyp2f1 と一致する"""
        assert gauss_2f1(a, b, cc, z) == pytest.approx(special.hyp2f1(a, b, cc, z), rel=1e-13)

    def test_extended_precision(self):
        """正常系: z が longdouble なら longdouble で返し、倍精度の値とも一致する"""
        z = np.longdouble(1) / np.longdouble(3)
        value = gauss_2f1(0.3, 1.3, 1.9, z, rtol=float(np.finfo(np.longdouble).eps))
        assert isinstance(value, np.longdouble)
        assert float(value) == pytest.approx(special.hyp2f1(0.3, 1.3, 1.9, 1 / 3), rel=1e-14)

    def test_outside_disc(self):
        """異常系: |z| ≥ 1/2 はエラー"""
        with pytest.raises(SpecfunError, match="1/2"):
            gauss_2f1(1, 1, 1, 0.5)

    def test_nonpositive_integer_lower(self):
        """異常系: 下側パラメータが非正整数ならエラー"""
        with pytest.raises(SpecfunError, match="非正整数"):
            gauss_2f1(1, 1, -2, 0.1)


class TestBesselJ:
    """bessel_j のテスト"""

    def test_values_at_origin(self):
        """正常系: J_0(0) = 1、J_ν(0) = 0 (ν > 0)"""
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(1.5, 0.0) == 0.0

    def test_half_order(self):
        """正常系: J_{1/2}(x) = √(2/(πx)) sin x"""
        x = np.linspace(0.1, 60.0, 200)
        expected = np.sqrt(2.0 / (np.pi * x)) * np.sin(x)
        np.testing.assert_allclose(bessel_j(0.5, x), expected, rtol=1e-12, atol=1e-15)

    @pytest.mark.parametrize("nu", [1.0, 1.3, 2.0, 2.9])
    def test_three_term_identity(self, nu):
        """正常系: J_{ν-1} + J_{ν+1} = (2ν/x) J_ν"""
        x = np.linspace(0.5, 40.0, 80)
        left = bessel_j(nu - 1, x) + bessel_j(nu + 1, x)
        right = 2.0 * nu / x * bessel_j(nu, x)
        np.testing.assert_allclose(left, right, rtol=1e-10, atol=1e-12)

    def test_bounded_by_one(self):
        """正常系: |J_ν(x)| ≤ 1"""
        x = np.linspace(0.0, 200.0, 2001)
        for nu in (0.0, 0.5, 0.9, 1.0, 1.5):
            assert np.all(np.abs(bessel_j(nu, x)) <= 1.0)

    def test_scalar_returns_float(self):
        """正常系: スカラー引数は float を返す"""
        assert isinstance(bessel_j(1.0, 2.0), float)

    def test_negative_argument(self):
        """異常系: 負の引数はエラー"""
        with pytest.raises(SpecfunError, match="引数"):
            bessel_j(0, -1.0)

    def test_negative_order(self):
        """異常系: 負の次数はエラー"""
        with pytest.raises(SpecfunError, match="次数"):
            bessel_j(-0.5, 1.0)


class TestSignedLog:
    """SignedLog と符号付き総和のテスト"""

    @pytest.mark.parametrize("value", [1.0, -2.5, 1e-300, -3e300, 0.125])
    def test_round_trip(self, value):
        """正常系: 実数との往復"""
        assert SignedLog.from_float(value).to_float() == pytest.approx(value, rel=1e-13)

    def test_zero(self):
        """正常系: 0 は sign = 0"""
        zero = SignedLog.from_float(0.0)
        assert zero.sign == 0
        assert zero.to_float() == 0.0
        assert zero == SignedLog(0, 12.0)

    def test_multiplication(self):
        """正常系: 積は符号を掛け対数を足す"""
        product = SignedLog(-1, 2.0) * SignedLog(-1, 3.0)
        assert product == SignedLog(1, 5.0)
        assert (SignedLog(1, 1.0) * SignedLog(0)).sign == 0

    def test_overflow_safe_sum(self):
        """正常系: exp(700) + exp(700) をオーバーフローせずに足す"""
        total = signed_log_sum([SignedLog(1, 700.0), SignedLog(1, 700.0)])
        assert total.sign == 1
        assert total.logmag == pytest.approx(700.0 + math.log(2), rel=1e-15)
        # 2e^{700} ≈ 2.0e304 は倍精度で表せる
        assert total.to_float() == pytest.approx(2.0 * math.exp(700.0), rel=1e-13)

    def test_sum_beyond_float_range(self):
        """正常系: 2e^{709.5} は対数のまま保持し、実数化すると inf"""
        total = signed_log_sum([SignedLog(1, 709.5), SignedLog(1, 709.5)])
        assert total.logmag == pytest.approx(709.5 + math.log(2), rel=1e-15)
        assert total.to_float() == math.inf

    def test_exact_cancellation(self):
        """正常系: 完全に打ち消し合えば 0"""
        total = signed_log_sum([SignedLog(1, math.log(2)), SignedLog(-1, math.log(2))])
        assert total.sign == 0

    def test_empty_sum(self):
        """正常系: 空の和は 0"""
        assert signed_log_sum([]).sign == 0

    def test_permutation_invariance(self):
        """正常系: 並べ替えても結果はビット単位で同じ"""
        rng = random.Random(7)
        terms = [SignedLog(rng.choice([-1, 1]), rng.uniform(-30.0, 30.0)) for _ in range(200)]
        reference = signed_log_sum(terms)
        for _ in range(5):
            shuffled = terms[:]
            rng.shuffle(shuffled)
            assert signed_log_sum(shuffled) == reference

    def test_array_version_agrees(self):
        """正常系: 配列版とリスト版が一致する"""
        rng = np.random.default_rng(3)
        signs = rng.choice([-1, 0, 1], size=300)
        logs = rng.uniform(-50.0, 50.0, size=300)
        expected = signed_log_sum(SignedLog(int(s), float(l)) for s, l in zip(signs, logs))
        result = signed_log_sum_array(signs, logs.astype(np.longdouble))
        assert result.sign == expected.sign
        assert result.logmag == pytest.approx(expected.logmag, rel=1e-14)

    def test_invalid_sign(self):
        """異常系: 符号が -1, 0, 1 以外ならエラー"""
        with pytest.raises(SpecfunError, match="符号"):
            SignedLog(2, 0.0)
