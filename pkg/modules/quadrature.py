"""
quadrature.py - Gauss型積分則の構築と評価モジュール

責務:
- 漸化式係数からのGauss則構築（Golub-Welsch、陰的シフトQL法）
- スケーリング付き一般化Gauss-Laguerre則
- 重み x^α e^{-cx}[J_ν(x)+1] のGauss則と、分割積分 I_n^J(f) - I_n^L(f)
- 打ち切り誤差の上界
- 前処理付き行列 Q_k の条件数表
- 指数関数被積分関数に対する収束表
"""

from dataclasses import dataclass
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from modules.moments import WeightParams
from modules.oracle import exact_exponential_integral
from modules.recurrence import (
    ALGORITHMS,
    BreakdownError,
    RecurrenceCoefficients,
    build_preconditioned_system,
    compute_coefficients,
    laguerre_recurrence,
)
from modules.specfun import LOG_FLOAT_MAX, log_gamma


class QuadratureError(Exception):
    """積分則の構築・評価のカスタム例外"""

    pass


class EigenSolverError(QuadratureError):
    """三重対角固有値計算が収束しない場合の例外"""

    def __init__(self, index: int, iterations: int):
        self.index = index
        self.iterations = iterations
        super().__init__(f"QL法が収束しません: 固有値 {index} で {iterations} 回反復")


MAX_QL_ITERATIONS = 30
_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class GaussRule:
    """
    Gauss型積分則

    Attributes:
        nodes: 昇順の節点
        weights: 正の重み
        mass: 生成に使った β_0（重みの総和と一致する）
    """

    nodes: np.ndarray
    weights: np.ndarray
    mass: float

    def __post_init__(self):
        for name in ("nodes", "weights"):
            values = np.array(getattr(self, name), dtype=float)
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def n(self) -> int:
        return int(self.nodes.size)


def _implicit_ql(diag: np.ndarray, offdiag: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    対称三重対角行列の固有値と、正規化固有ベクトルの第1成分

    陰的シフトQL法で第1行の成分だけを更新する。

    Args:
        diag: 対角成分（長さ n）
        offdiag: 副対角成分（長さ n-1）

    Returns:
        (eigenvalues, first_components): 昇順に並べ替え済み
    """
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = offdiag
    z = np.zeros(n)
    z[0] = 1.0

    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= _EPS * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            if iterations == MAX_QL_ITERATIONS:
                raise EigenSolverError(l, iterations)
            iterations += 1

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                if abs(f) < abs(g):
                    s = f / g
                    r = math.hypot(s, 1.0)
                    e[i + 1] = g * r
                    c = 1.0 / r
                    s *= c
                else:
                    c = g / f
                    r = math.hypot(c, 1.0)
                    e[i + 1] = f * r
                    s = 1.0 / r
                    c *= s
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d, kind="stable")
    return d[order], z[order]


def golub_welsch(coeffs: RecurrenceCoefficients) -> GaussRule:
    """
    Golub-Welsch法で漸化式係数からGauss則を作る

    Jacobi行列（対角 α_k、副対角 √β_k）の固有値が節点、
    β_0·(固有ベクトル第1成分)² が重みになる。

    Args:
        coeffs: n 組の係数

    Returns:
        GaussRule: n 点の積分則

    Raises:
        QuadratureError: 係数が空の場合
        EigenSolverError: QL法が収束しない場合

    Examples:
        >>> rule = golub_welsch(RecurrenceCoefficients([0.5], [2.0]))
        >>> rule.nodes.tolist(), rule.weights.tolist()
        ([0.5], [2.0])
    """
    if coeffs.n == 0:
        raise QuadratureError("係数が空です")

    nodes, first = _implicit_ql(coeffs.alpha, np.sqrt(coeffs.beta[1:]))
    mass = float(coeffs.beta[0])
    return GaussRule(nodes=nodes, weights=mass * first * first, mass=mass)


def gauss_laguerre_rule(alpha: float, c: float, n: int) -> GaussRule:
    """
    重み x^α e^{-cx} の n 点Gauss則

    標準則 (c = 1) を作り、節点を 1/c 倍、重みを c^{-(α+1)} 倍する。

    Examples:
        >>> gauss_laguerre_rule(0, 2, 1).nodes.tolist()
        [0.5]
    """
    standard = golub_welsch(laguerre_recurrence(alpha, 1.0, n))
    scale = math.exp(-(alpha + 1.0) * math.log(c))
    return GaussRule(
        nodes=standard.nodes / c,
        weights=standard.weights * scale,
        mass=standard.mass * scale,
    )


def bessel_weight_rule(
    params: WeightParams,
    n: int,
    algorithm: str = "cramer",
    coeffs: Optional[RecurrenceCoefficients] = None,
    verbose: bool = False,
) -> GaussRule:
    """
    重み x^α e^{-cx}[J_ν(x)+1] の n 点Gauss則

    Args:
        params: 重みパラメータ
        n: 点数
        algorithm: 係数計算アルゴリズム
        coeffs: 計算済みの係数（先頭 n 組を使う）
        verbose: 詳細出力

    Raises:
        BreakdownError: 係数計算が破綻した場合
    """
    if coeffs is None:
        coeffs = compute_coefficients(params, n, algorithm, verbose=verbose)
    elif coeffs.n < n:
        raise QuadratureError(f"係数が不足しています: 要求 {n}, 保持 {coeffs.n}")

    return golub_welsch(coeffs.truncate(n))


def apply_rule(rule: GaussRule, f: Callable) -> float:
    """
    Σ w_i f(x_i) を評価

    Raises:
        QuadratureError: 節点で f が非有限になった場合（節点を示す）
    """
    values = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), rule.nodes.shape)
    bad = ~np.isfinite(values)
    if np.any(bad):
        node = float(rule.nodes[np.argmax(bad)])
        raise QuadratureError(f"被積分関数が節点 x={node!r} で非有限です")
    return math.fsum((rule.weights * values).tolist())


def integrate_bessel(
    params: WeightParams,
    f: Callable,
    n: int,
    algorithm: str = "cramer",
    coeffs: Optional[RecurrenceCoefficients] = None,
    verbose: bool = False,
) -> float:
    """
    ∫ f(x) x^α e^{-cx} J_ν(x) dx ≈ I_n^J(f) - I_n^L(f)

    同じ点数の Bessel 重み則と Laguerre 則の差で近似する。

    Args:
        params: 重みパラメータ
        f: 配列を受け取り配列を返す被積分関数
        n: 点数
        algorithm: 係数計算アルゴリズム
        coeffs: 計算済みの係数
        verbose: 詳細出力

    Returns:
        float: 積分の近似値
    """
    rule = bessel_weight_rule(params, n, algorithm, coeffs=coeffs, verbose=verbose)
    return apply_rule(rule, f) - integrate_laguerre(params.alpha, params.c, f, n)


def integrate_laguerre(alpha: float, c: float, f: Callable, n: int) -> float:
    """∫ f(x) x^α e^{-cx} dx の n 点Gauss近似"""
    return apply_rule(gauss_laguerre_rule(alpha, c, n), f)


def truncation_bound(
    coeffs: RecurrenceCoefficients, alpha: float, n: int, sup_f2n: float, c: float = 1.0
) -> float:
    """
    分割積分の打ち切り誤差の上界

    (sup|f^{(2n)}|/(2n)!)·(Π_{j≤n} β_j + n!Γ(n+α+1)/c^{2n+α+1}) を対数で計算する。

    Args:
        coeffs: Bessel 重みの係数（β_0..β_n が必要）
        alpha: べき指数
        n: 点数
        sup_f2n: sup|f^{(2n)}| (≥ 0)
        c: Laguerre 部分の減衰率

    Returns:
        float: 上界（オーバーフロー時は math.inf）

    Examples:
        >>> truncation_bound(laguerre_recurrence(0, 1, 2), 0, 1, 1.0)
        1.0
    """
    if sup_f2n < 0:
        raise QuadratureError(f"sup|f^(2n)| は0以上である必要があります: {sup_f2n}")
    if sup_f2n == 0:
        return 0.0
    if coeffs.n < n + 1:
        raise QuadratureError(f"β_0..β_{n} が必要です: 保持 {coeffs.n} 組")

    log_jacobi = math.fsum(math.log(b) for b in coeffs.beta[: n + 1])
    log_laguerre = (
        log_gamma(n + 1) + log_gamma(n + alpha + 1.0) - (2 * n + alpha + 1.0) * math.log(c)
    )
    peak = max(log_jacobi, log_laguerre)
    log_sum = peak + math.log(math.exp(log_jacobi - peak) + math.exp(log_laguerre - peak))

    log_bound = math.log(sup_f2n) - log_gamma(2 * n + 1) + log_sum
    if log_bound > LOG_FLOAT_MAX:
        return math.inf
    return math.exp(log_bound)


def condition_report(
    params: WeightParams, sizes: Sequence[int], verbose: bool = False
) -> List[Tuple[int, float]]:
    """
    前処理付き行列 Q_k の2ノルム条件数

    最大の k で Q を一度作り、先頭ブロックの固有値から κ₂ を求める。

    Returns:
        List[Tuple[int, float]]: (k, κ₂(Q_k)) の列
    """
    sizes = [int(k) for k in sizes]
    if not sizes:
        raise QuadratureError("サイズの列が空です")
    if min(sizes) < 1:
        raise QuadratureError(f"サイズは1以上である必要があります: {min(sizes)}")

    system = build_preconditioned_system(params, max(sizes), verbose=verbose)
    report = []
    for k in sizes:
        if k == 1:
            report.append((k, 1.0))
            continue
        eigenvalues = np.linalg.eigvalsh(system.q[:k, :k])
        if not eigenvalues[0] > 0:
            raise QuadratureError(f"Q_{k} が正定値ではありません: 最小固有値 {eigenvalues[0]}")
        report.append((k, float(eigenvalues[-1] / eigenvalues[0])))
        if verbose:
            print(f"  k={k}: κ₂(Q_k) = {report[-1][1]:.3e}")
    return report


def convergence_table(
    params: WeightParams,
    gamma: float,
    nmax: int,
    algorithms: Sequence[str] = ALGORITHMS,
    exact: Optional[float] = None,
    verbose: bool = False,
) -> pd.DataFrame:
    """
    f(x) = e^{-γx} に対する収束表

    各アルゴリズムで係数を nmax+1 組まとめて計算し、n = 1..nmax の近似値、
    絶対誤差、誤差上界を並べる。破綻後の行は status に記録する。

    Args:
        params: 重みパラメータ
        gamma: 指数 γ ≥ 0
        nmax: 最大点数
        algorithms: アルゴリズム名の列
        exact: 厳密値（None なら閉形式 ∫x^α e^{-(c+γ)x}J_ν を使う）
        verbose: 詳細出力

    Returns:
        pd.DataFrame: 列 algorithm, n, approx, abs_error, bound, status
    """
    if gamma < 0:
        raise QuadratureError(f"gamma は0以上である必要があります: {gamma}")
    if exact is None:
        exact = exact_exponential_integral(params.nu, params.alpha, params.c + gamma)

    def integrand(x):
        return np.exp(-gamma * x)

    rows = []
    for algorithm in algorithms:
        try:
            coeffs = compute_coefficients(params, nmax + 1, algorithm, verbose=verbose)
            failure = None
        except BreakdownError as e:
            coeffs = e.partial
            failure = e
            if verbose:
                print(f"⚠️  {algorithm}: k={e.index} で破綻しました")

        for n in range(1, nmax + 1):
            row = {"algorithm": algorithm, "n": n}
            if n > coeffs.n:
                row.update(
                    approx=np.nan, abs_error=np.nan, bound=np.nan,
                    status=f"breakdown@{failure.index}",
                )
                rows.append(row)
                continue

            approx = integrate_bessel(params, integrand, n, algorithm, coeffs=coeffs)
            if coeffs.n >= n + 1:
                bound = truncation_bound(coeffs, params.alpha, n, gamma ** (2 * n), c=params.c)
            else:
                bound = np.nan
            row.update(approx=approx, abs_error=abs(approx - exact), bound=bound, status="ok")
            rows.append(row)

    return pd.DataFrame(rows, columns=["algorithm", "n", "approx", "abs_error", "bound", "status"])
