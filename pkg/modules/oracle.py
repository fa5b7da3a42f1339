"""
oracle.py - 独立な参照積分モジュール

責務:
- ∫₀^∞ f(x) x^α e^{-cx} J_ν(x) dx の適応的パネル積分（検証用の参照値）
- 閉形式 ∫₀^∞ x^α e^{-dx} J_ν(x) dx
- べきモーメントの参照値

moments モジュールの漸化式には依存しない。

パネル:
    長さ π（Bessel関数の漸近周期）のパネルに区切り、各パネルを
    15点Gauss-Legendre則で積分する。2等分した和との差が許容値を
    超えるパネルだけを幅優先で細分する。
    最初のパネル [0, π] は x = u^{1/(1+α)} と置換して端点特異性を除く。
"""

from dataclasses import dataclass
import math
from typing import Callable, Optional, Tuple

import numpy as np

from modules.specfun import SpecfunError, bessel_j, gauss_2f1, log_gamma


class OracleError(Exception):
    """参照積分のカスタム例外（予算切れ時は途中の推定値を保持）"""

    def __init__(self, message: str, estimate: Optional[float] = None, panels: int = 0):
        super().__init__(message)
        self.estimate = estimate
        self.panels = panels


@dataclass(frozen=True)
class OracleResult:
    """
    参照積分の結果

    Attributes:
        value: 積分値
        error_estimate: パネル細分の差と裾の上界から見積もった誤差
        panels: 評価したパネル数
    """

    value: float
    error_estimate: float
    panels: int


GAUSS_LEGENDRE_POINTS = 15
PANEL_BUDGET = 200000
MIN_TOLERANCE = 1e-13

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_LEGENDRE_POINTS)
_EPS = np.finfo(float).eps


def _panel_sums(integrand: Callable, lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """各パネルの積分値と、被積分関数の絶対値の積分値"""
    half = 0.5 * (hi - lo)
    points = (0.5 * (hi + lo))[:, None] + half[:, None] * _NODES[None, :]
    values = integrand(points.ravel()).reshape(points.shape)
    weighted = values * _WEIGHTS[None, :] * half[:, None]
    return weighted.sum(axis=1), np.abs(weighted).sum(axis=1)


def _adaptive(integrand: Callable, edges: np.ndarray, tol: float, budget: int) -> Tuple[float, float, int]:
    """
    パネル列を幅優先で細分して積分する

    Returns:
        (value, error, panels)
    """
    lo = edges[:-1].astype(float)
    hi = edges[1:].astype(float)
    length = float(hi[-1] - lo[0])
    coarse, _ = _panel_sums(integrand, lo, hi)
    panels = lo.size

    accepted = []
    errors = []
    while lo.size:
        mid = 0.5 * (lo + hi)
        left, left_abs = _panel_sums(integrand, lo, mid)
        right, right_abs = _panel_sums(integrand, mid, hi)
        panels += 2 * lo.size
        fine = left + right
        diff = np.abs(fine - coarse)
        allowed = np.maximum(tol * (hi - lo) / length, 64.0 * _EPS * (left_abs + right_abs))

        done = diff <= allowed
        accepted.extend(fine[done].tolist())
        errors.extend(diff[done].tolist())

        keep = ~done
        if panels > budget and np.any(keep):
            estimate = math.fsum(accepted) + math.fsum(fine[keep].tolist())
            raise OracleError(
                f"参照積分がパネル予算 {budget} 内で収束しません: 推定値 {estimate!r}",
                estimate=estimate,
                panels=panels,
            )

        lo, hi, mid = lo[keep], hi[keep], mid[keep]
        coarse = np.concatenate([left[keep], right[keep]])
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])

    return math.fsum(accepted), math.fsum(errors), panels


def _tail_cutoff(exponent: float, decay: float, scale: float, tol: float) -> Tuple[float, float]:
    """
    ∫_X^∞ scale·x^a e^{-dx} dx ≤ 2·scale·X^a e^{-dX}/d (X ≥ 2a/d) を tol 以下にする X

    Returns:
        (X, tail_bound): X は π の倍数
    """
    start = max(2.0 * exponent / decay, 1.0) if exponent > 0 else 1.0
    cutoff = math.pi * math.ceil(start / math.pi)
    while True:
        log_tail = (
            math.log(2.0 * scale / decay) + exponent * math.log(cutoff) - decay * cutoff
        )
        if log_tail < math.log(tol):
            return cutoff, math.exp(log_tail)
        cutoff += math.pi


def reference_integral(
    params,
    f: Callable,
    tol: float = 1e-12,
    growth: float = 0.0,
    scale: float = 1.0,
    power: float = 0.0,
    include_bessel: bool = True,
    max_panels: int = PANEL_BUDGET,
    verbose: bool = False,
) -> OracleResult:
    """
    ∫₀^∞ f(x) x^α e^{-cx} J_ν(x) dx の参照値

    呼び出し側は |f(x)| ≤ scale·x^power·e^{growth·x} (growth < c) を保証する。
    この包絡線で裾の打ち切り点 X を決め、裾の寄与を tol/10 未満に抑える。

    Args:
        params: ν, α, c を持つ重みパラメータ
        f: 配列を受け取り配列を返す関数
        tol: 絶対許容誤差 (≥ 1e-13)
        growth: f の指数増大率 γ (< c)
        scale: f の包絡線の係数
        power: f の包絡線のべき
        include_bessel: False なら J_ν を 1 に置き換える（Laguerre 重みの検証用）
        max_panels: パネル評価数の上限
        verbose: 詳細出力

    Returns:
        OracleResult: 値、誤差見積もり、パネル数

    Raises:
        OracleError: 引数が不正、または予算内に収束しない場合
    """
    if not tol >= MIN_TOLERANCE:
        raise OracleError(f"tol は {MIN_TOLERANCE} 以上である必要があります: {tol}")
    decay = params.c - growth
    if not decay > 0:
        raise OracleError(f"growth は c 未満である必要があります: growth={growth}, c={params.c}")

    nu, alpha, c = params.nu, params.alpha, params.c
    exponent_plus = alpha + 1.0

    def kernel(x):
        values = np.asarray(f(x), dtype=float) * np.exp(-c * x)
        if include_bessel:
            values = values * bessel_j(nu, x)
        return np.broadcast_to(values, np.shape(x))

    def head(u):
        x = u ** (1.0 / exponent_plus)
        return kernel(x) / exponent_plus

    def body(x):
        return kernel(x) * x**alpha

    tail_tol = 0.1 * tol
    cutoff, tail = _tail_cutoff(alpha + power, decay, scale, tail_tol)

    head_value, head_error, head_panels = _adaptive(
        head, np.array([0.0, math.pi**exponent_plus]), 0.45 * tol, max_panels
    )
    edges = math.pi * np.arange(1, int(round(cutoff / math.pi)) + 1)
    if edges.size > 1:
        body_value, body_error, body_panels = _adaptive(body, edges, 0.45 * tol, max_panels)
    else:
        body_value, body_error, body_panels = 0.0, 0.0, 0

    result = OracleResult(
        value=head_value + body_value,
        error_estimate=head_error + body_error + tail,
        panels=head_panels + body_panels,
    )
    if verbose:
        print(
            f"✓ 参照積分: {result.value!r} (誤差見積もり {result.error_estimate:.2e}, "
            f"パネル {result.panels}, X={cutoff:.1f})"
        )
    return result


def exact_exponential_integral(nu: float, alpha: float, d: float) -> float:
    """
    閉形式 ∫₀^∞ x^α e^{-dx} J_ν(x) dx

    Γ(α+ν+1)/(s^{α+1}Γ(ν+1))·(d+s)^{-ν}·₂F₁(-α, α+1; 1+ν; (s-d)/(2s))、s = √(d²+1)

    Examples:
        >>> exact_exponential_integral(0, 0, 1)
        0.7071067811865475
    """
    if not nu >= 0 or not alpha > -1 or not d > 0:
        raise OracleError(f"パラメータが不正です: nu={nu}, alpha={alpha}, d={d}")

    root = math.hypot(d, 1.0)
    z = 0.5 / (root * (root + d))
    try:
        series = gauss_2f1(-alpha, alpha + 1.0, 1.0 + nu, z)
        log_prefactor = (
            log_gamma(alpha + nu + 1.0)
            - (alpha + 1.0) * math.log(root)
            - log_gamma(nu + 1.0)
            - nu * math.log(d + root)
        )
    except SpecfunError as e:
        raise OracleError(f"閉形式の評価に失敗しました: {str(e)}")
    return math.exp(log_prefactor) * series


def moment_oracle(params, k: int, tol: Optional[float] = None, verbose: bool = False) -> float:
    """
    べきモーメント μ_k の参照値

    Bessel 部分 ∫x^{k+α}e^{-cx}J_ν は reference_integral で、
    Laguerre 部分 Γ(k+α+1)/c^{k+α+1} は解析的に求める。

    Args:
        params: 重みパラメータ
        k: 次数 (≥ 0)
        tol: Bessel 部分の絶対許容誤差（既定は max(1e-13, 1e-14·η_k)）
        verbose: 詳細出力

    Returns:
        float: μ_k
    """
    if int(k) != k or k < 0:
        raise OracleError(f"次数は0以上の整数である必要があります: {k}")
    k = int(k)

    eta = math.exp(log_gamma(k + params.alpha + 1.0) - (k + params.alpha + 1.0) * math.log(params.c))
    if tol is None:
        tol = max(MIN_TOLERANCE, 1e-14 * eta)

    core = reference_integral(
        params, lambda x: x**k, tol=tol, power=k, verbose=verbose
    )
    return core.value + eta
