"""
recurrence.py - 三項漸化式係数の計算モジュール

責務:
- Chebyshevアルゴリズム（べきモーメントから）
- 修正Chebyshevアルゴリズム（修正モーメントと参照漸化式から）
- スケーリング付きLaguerre多項式の漸化式係数
- Laguerreモーメント行列の明示的Cholesky因子とその逆行列の成分、両者の積の検算
- 前処理付き行列 Q = I + R^{-T} M R^{-1} の構築と逐次Cholesky分解
- 前処理付きCramer法による係数計算
- アルゴリズム名による統一的な呼び出しと係数表の作成

係数の規約:
    モニック直交多項式 π_{k+1} = (x - α_k) π_k - β_k π_{k-1}、β_0 は全質量。
"""

from dataclasses import dataclass, field
import math
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import solve_triangular

from modules.moments import (
    MomentError,
    WeightParams,
    core_moments,
    laguerre_gram,
    modified_moments,
    power_moment_values,
    scaled_laguerre_moments,
)
from modules.specfun import SignedLog, log_gamma, log_gamma_table, signed_log_sum_array


ALGORITHMS = ("chebyshev", "modified", "cramer")


class RecurrenceError(Exception):
    """漸化式係数計算のカスタム例外"""

    pass


class BreakdownError(RecurrenceError):
    """
    係数計算の破綻（σ_kk ≤ 0、β_k ≤ 0 など）

    Attributes:
        algorithm: アルゴリズム名
        index: 破綻した k
        partial: 破綻前までに得られた係数
    """

    def __init__(self, algorithm: str, index: int, partial: "RecurrenceCoefficients", message=None):
        self.algorithm = algorithm
        self.index = index
        self.partial = partial
        super().__init__(message or f"{algorithm} アルゴリズムが k={index} で破綻しました")


class PreconditionError(BreakdownError):
    """前処理付き行列 Q の先頭ブロックのCholesky分解に失敗した場合の例外"""

    def __init__(self, size: int, partial: Optional["RecurrenceCoefficients"] = None, index=None):
        self.size = size
        super().__init__(
            "cramer",
            size - 1 if index is None else index,
            partial if partial is not None else RecurrenceCoefficients([], []),
            f"Q の先頭 {size}×{size} ブロックが正定値ではありません",
        )


@dataclass(frozen=True, eq=False)
class RecurrenceCoefficients:
    """
    三項漸化式係数 α_0..α_{n-1}, β_0..β_{n-1}

    β_k > 0 でない値は保持しない（生成時に RecurrenceError）。
    """

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=float).ravel()
        beta = np.array(self.beta, dtype=float).ravel()
        if alpha.shape != beta.shape:
            raise RecurrenceError(f"α と β の長さが一致しません: {alpha.size} != {beta.size}")
        if not np.all(np.isfinite(alpha)):
            raise RecurrenceError("α に非有限の値が含まれています")
        if not np.all(beta > 0) or not np.all(np.isfinite(beta)):
            raise RecurrenceError("β は正の有限値である必要があります")
        alpha.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def n(self) -> int:
        return int(self.alpha.size)

    def truncate(self, n: int) -> "RecurrenceCoefficients":
        """先頭 n 組の係数を返す"""
        if n > self.n:
            raise RecurrenceError(f"係数が不足しています: 要求 {n}, 保持 {self.n}")
        return RecurrenceCoefficients(self.alpha[:n], self.beta[:n])

    def rescale(self, c: float) -> "RecurrenceCoefficients":
        """t = cx での係数を x での係数に戻す（β_0 はそのまま）"""
        beta = self.beta / (c * c)
        if self.n:
            beta[0] = self.beta[0]
        return RecurrenceCoefficients(self.alpha / c, beta)


def _sigma_ok(value) -> bool:
    return bool(value > 0 and np.isfinite(value))


def _initial(moments: np.ndarray, algorithm: str) -> Tuple[np.ndarray, int]:
    if moments.ndim != 1 or moments.size < 2 or moments.size % 2:
        raise RecurrenceError(f"モーメント数は2以上の偶数である必要があります: {moments.size}")
    if not _sigma_ok(moments[0]):
        raise BreakdownError(algorithm, 0, RecurrenceCoefficients([], []))
    return moments, moments.size // 2


def chebyshev(moments: Sequence[float]) -> RecurrenceCoefficients:
    """
    Chebyshevアルゴリズム: べきモーメント μ_0..μ_{2n-1} から係数 n 組を計算

    混合モーメント σ_{k,l} = σ_{k-1,l+1} - α_{k-1}σ_{k-1,l} - β_{k-1}σ_{k-2,l} を掃き出す。
    np.longdouble の配列を渡すと掃き出しも拡張精度で行う。

    Args:
        moments: 2n 個のモーメント

    Returns:
        RecurrenceCoefficients: n 組の係数

    Raises:
        BreakdownError: σ_kk ≤ 0 または非有限になった場合

    Examples:
        >>> coeffs = chebyshev([2.0, 1.0])
        >>> coeffs.alpha[0], coeffs.beta[0]
        (0.5, 2.0)
    """
    mom = np.asarray(moments)
    if mom.dtype != np.longdouble:
        mom = mom.astype(float)
    mom, n = _initial(mom, "chebyshev")
    size = 2 * n

    alpha = np.zeros(n, dtype=mom.dtype)
    beta = np.zeros(n, dtype=mom.dtype)
    alpha[0] = mom[1] / mom[0]
    beta[0] = mom[0]

    sig_prev2 = np.zeros(size, dtype=mom.dtype)
    sig_prev = mom.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n):
            sig = np.zeros(size, dtype=mom.dtype)
            hi = size - k
            sig[k:hi] = (
                sig_prev[k + 1 : hi + 1]
                - alpha[k - 1] * sig_prev[k:hi]
                - beta[k - 1] * sig_prev2[k:hi]
            )
            if not _sigma_ok(sig[k]):
                raise BreakdownError(
                    "chebyshev", k, RecurrenceCoefficients(alpha[:k], beta[:k])
                )
            alpha[k] = sig[k + 1] / sig[k] - sig_prev[k] / sig_prev[k - 1]
            beta[k] = sig[k] / sig_prev[k - 1]
            sig_prev2, sig_prev = sig_prev, sig

    return RecurrenceCoefficients(alpha, beta)


def modified_chebyshev(
    modified: Sequence[float], a: Sequence[float], b: Sequence[float]
) -> RecurrenceCoefficients:
    """
    修正Chebyshevアルゴリズム

    参照多項式の漸化式係数 a_l, b_l と修正モーメント m_0..m_{2n-1} から
    σ_{k,l} = σ_{k-1,l+1} - (α_{k-1} - a_l)σ_{k-1,l} - β_{k-1}σ_{k-2,l} + b_l σ_{k-1,l-1}
    で掃き出す。a = b = 0 なら chebyshev と同じ演算順になる。

    Args:
        modified: 2n 個の修正モーメント
        a, b: 参照漸化式係数（長さ 2n-1 以上）

    Returns:
        RecurrenceCoefficients: n 組の係数

    Raises:
        RecurrenceError: a, b が短い場合
        BreakdownError: σ_kk ≤ 0 または非有限になった場合
    """
    mom, n = _initial(np.asarray(modified, dtype=float), "modified")
    size = 2 * n
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < size - 1 or b.size < size - 1:
        raise RecurrenceError(
            f"参照漸化式係数は {size - 1} 個以上必要です: a={a.size}, b={b.size}"
        )

    alpha = np.zeros(n)
    beta = np.zeros(n)
    alpha[0] = a[0] + mom[1] / mom[0]
    beta[0] = mom[0]

    sig_prev2 = np.zeros(size)
    sig_prev = mom.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n):
            sig = np.zeros(size)
            hi = size - k
            sig[k:hi] = (
                sig_prev[k + 1 : hi + 1]
                - (alpha[k - 1] - a[k:hi]) * sig_prev[k:hi]
                - beta[k - 1] * sig_prev2[k:hi]
                + b[k:hi] * sig_prev[k - 1 : hi - 1]
            )
            if not _sigma_ok(sig[k]):
                raise BreakdownError(
                    "modified", k, RecurrenceCoefficients(alpha[:k], beta[:k])
                )
            alpha[k] = a[k] + sig[k + 1] / sig[k] - sig_prev[k] / sig_prev[k - 1]
            beta[k] = sig[k] / sig_prev[k - 1]
            sig_prev2, sig_prev = sig_prev, sig

    return RecurrenceCoefficients(alpha, beta)


def laguerre_recurrence(alpha: float, c: float, n: int) -> RecurrenceCoefficients:
    """
    重み x^α e^{-cx} のモニック直交多項式の漸化式係数

    α_k = (2k+α+1)/c、β_0 = Γ(α+1)/c^{α+1}、β_k = k(k+α)/c² (k ≥ 1)

    Examples:
        >>> laguerre_recurrence(0, 1, 3).beta.tolist()
        [1.0, 1.0, 4.0]
    """
    if not alpha > -1 or not c > 0 or int(n) != n or n < 1:
        raise RecurrenceError(
            f"Laguerre漸化式のパラメータが不正です: alpha={alpha}, c={c}, n={n}"
        )
    k = np.arange(int(n), dtype=float)
    coeff_alpha = (2.0 * k + alpha + 1.0) / c
    coeff_beta = k * (k + alpha) / (c * c)
    coeff_beta[0] = math.exp(log_gamma(alpha + 1.0) - (alpha + 1.0) * math.log(c))
    return RecurrenceCoefficients(coeff_alpha, coeff_beta)


def cholesky_factor_entry(alpha: float, i: int, j: int) -> float:
    """
    Laguerreモーメント行列 [Γ(α+i+j-1)] の上三角Cholesky因子 R の成分

    R_ij = ((j-1)!/(j-i)!)·Γ(α+j)/√(Γ(i)Γ(α+i))  (1 ≤ i ≤ j)

    Raises:
        RecurrenceError: i > j または i < 1 の場合
    """
    if i < 1 or i > j:
        raise RecurrenceError(f"上三角成分のみ参照できます: (i, j)=({i}, {j})")
    log_value = (
        log_gamma(j)
        - log_gamma(j - i + 1)
        + log_gamma(alpha + j)
        - 0.5 * (log_gamma(i) + log_gamma(alpha + i))
    )
    return math.exp(log_value)


def inverse_cholesky_entry(alpha: float, c: float, i: int, j: int) -> SignedLog:
    """
    スケーリング付きLaguerreモーメント行列の因子の逆行列 (R^{α,c})^{-1} の成分

    (-1)^{i+j}·√c^{α+1}·c^{i-1}·√((j-1)!Γ(α+j)) / ((j-i)!Γ(i)Γ(α+i))

    Returns:
        SignedLog: 成分の符号付き対数

    Raises:
        RecurrenceError: i > j または i < 1 の場合
    """
    if i < 1 or i > j:
        raise RecurrenceError(f"上三角成分のみ参照できます: (i, j)=({i}, {j})")
    log_c = math.log(c)
    logmag = (
        0.5 * (alpha + 1.0) * log_c
        + (i - 1) * log_c
        + 0.5 * (log_gamma(j) + log_gamma(alpha + j))
        - log_gamma(j - i + 1)
        - log_gamma(i)
        - log_gamma(alpha + i)
    )
    return SignedLog(1 if (i + j) % 2 == 0 else -1, logmag)


def _inverse_cholesky_log_table(alpha: float, c: float, size: int):
    """(R^{α,c})^{-1} の符号と対数を拡張精度の上三角配列で返す（0始まり添字）"""
    log_c = np.log(np.longdouble(c))
    log_factorials = log_gamma_table(1.0, size)
    log_gammas = log_gamma_table(alpha + 1.0, size)

    rows, cols = np.triu_indices(size)
    signs = np.zeros((size, size), dtype=int)
    logs = np.full((size, size), -np.inf, dtype=np.longdouble)
    signs[rows, cols] = np.where((rows + cols) % 2 == 0, 1, -1)
    logs[rows, cols] = (
        0.5 * (alpha + 1.0) * log_c
        + rows * log_c
        + 0.5 * (log_factorials[cols] + log_gammas[cols])
        - log_factorials[cols - rows]
        - log_factorials[rows]
        - log_gammas[rows]
    )
    return signs, logs


def _cholesky_log_table(alpha: float, c: float, size: int) -> np.ndarray:
    """スケーリング付き因子 R^{α,c}_{il} = R_il·c^{-(α+1)/2}·c^{-(l-1)} の対数（上三角、0始まり添字）"""
    log_c = np.log(np.longdouble(c))
    log_factorials = log_gamma_table(1.0, size)
    log_gammas = log_gamma_table(alpha + 1.0, size)

    rows, cols = np.triu_indices(size)
    logs = np.full((size, size), -np.inf, dtype=np.longdouble)
    logs[rows, cols] = (
        log_factorials[cols]
        - log_factorials[cols - rows]
        + log_gammas[cols]
        - 0.5 * (log_factorials[rows] + log_gammas[rows])
        - (0.5 * (alpha + 1.0) + cols) * log_c
    )
    return logs


def cholesky_inverse_product(alpha: float, c: float, size: int) -> np.ndarray:
    """
    R^{α,c}·(R^{α,c})^{-1} を成分ごとの符号付き対数和で計算

    因子とその逆の対数は np.longdouble で作り、各 (i, j) の項を
    signed_log_sum_array でまとめる。単位行列からのずれが
    明示式の検算になる。

    Args:
        alpha: べき指数 (> -1)
        c: 減衰率 (> 0)
        size: 大きさ k

    Returns:
        np.ndarray: k×k の積（上三角のみ非零）
    """
    if not alpha > -1 or not c > 0 or int(size) != size or size < 1:
        raise RecurrenceError(f"因子のパラメータが不正です: alpha={alpha}, c={c}, size={size}")
    size = int(size)
    factor_logs = _cholesky_log_table(alpha, c, size)
    inv_signs, inv_logs = _inverse_cholesky_log_table(alpha, c, size)

    product = np.zeros((size, size))
    for i in range(size):
        for j in range(i, size):
            middle = slice(i, j + 1)
            total = signed_log_sum_array(inv_signs[middle, j], factor_logs[i, middle] + inv_logs[middle, j])
            product[i, j] = total.to_float()
    return product


@dataclass(eq=False)
class PreconditionedSystem:
    """
    前処理付き行列 Q と、その先頭ブロックから逐次伸ばすCholesky因子

    Attributes:
        params: 重みパラメータ
        q: 対称行列 Q（読み取り専用）
        factor: 下三角因子 L (Q = L Lᵀ)、先頭 factored 行のみ有効
        factored: 分解済みの行数
    """

    params: WeightParams
    q: np.ndarray
    factor: np.ndarray = field(init=False)
    factored: int = field(init=False, default=0)

    def __post_init__(self):
        self.q = np.array(self.q, dtype=float)
        self.q.setflags(write=False)
        self.factor = np.zeros_like(self.q)

    @property
    def size(self) -> int:
        return self.q.shape[0]

    def extend(self) -> int:
        """
        因子を1行伸ばす

        Returns:
            int: 分解済みの行数

        Raises:
            PreconditionError: ピボットが正でない場合
        """
        r = self.factored
        if r >= self.size:
            raise RecurrenceError(f"Q の大きさ {self.size} を超えて分解できません")

        if r:
            row = solve_triangular(self.factor[:r, :r], self.q[r, :r], lower=True)
        else:
            row = np.zeros(0)
        pivot = self.q[r, r] - math.fsum((row * row).tolist())
        if not pivot > 0 or not math.isfinite(pivot):
            raise PreconditionError(size=r + 1)

        self.factor[r, :r] = row
        self.factor[r, r] = math.sqrt(pivot)
        self.factored = r + 1
        return self.factored

    def ensure(self, m: int):
        """先頭 m 行まで分解済みにする"""
        while self.factored < m:
            self.extend()

    def solve(self, m: int, rhs: np.ndarray) -> np.ndarray:
        """先頭 m×m ブロック Q_m y = rhs を解く"""
        self.ensure(m)
        lower = self.factor[:m, :m]
        z = solve_triangular(lower, rhs, lower=True)
        return solve_triangular(lower, z, lower=True, trans="T")


def build_preconditioned_system(
    params: WeightParams, size: int, verbose: bool = False
) -> PreconditionedSystem:
    """
    Q = I + R^{-T} M₀ R^{-1} を組み立てる

    Q_ij - δ_ij = Σ_l Σ_m Rinv_{li} μ_{l+m-2,0} Rinv_{mj} は、t = cx で
    正規直交Laguerre関数 q_k を使うと ∫ q_i q_j J_ν(t/c) dt に等しい。
    モーメントの和は大きさ (1+2c/√(1+c²))^{2n} 程度で打ち消し合うので、
    この積分を laguerre_gram で直接求める。結果は対称化して返す。

    Args:
        params: 重みパラメータ
        size: 行列の大きさ (n+1)
        verbose: 詳細出力

    Returns:
        PreconditionedSystem: 未分解の系

    Raises:
        RecurrenceError: 成分が有限でない場合
    """
    if int(size) != size or size < 1:
        raise RecurrenceError(f"行列の大きさは1以上である必要があります: {size}")
    size = int(size)

    try:
        gram = laguerre_gram(params, size)
    except MomentError as e:
        raise RecurrenceError(f"Q の積分に失敗しました ({params.label()}): {str(e)}")

    q = np.eye(size) + 0.5 * (gram + gram.T)
    bad = np.argwhere(~np.isfinite(q))
    if bad.size:
        i, j = bad[0]
        raise RecurrenceError(f"Q の成分が表現できません: (i, j)=({i + 1}, {j + 1})")

    if verbose:
        print(f"✓ 前処理付き行列を構築しました: {size}×{size} ({params.label()})")

    return PreconditionedSystem(params=params, q=q)


def _diag_ratio(alpha: float, k: int) -> float:
    return math.sqrt(k * (alpha + k))


def preconditioned_cramer(
    params: WeightParams,
    n: int,
    rhs: str = "unit",
    system: Optional[PreconditionedSystem] = None,
    verbose: bool = False,
) -> RecurrenceCoefficients:
    """
    前処理付きCramer法による係数計算

    α_0, β_0, β_1 はモーメントから直接求め、k ≥ 1 の係数は入れ子になった
    系 Q_m y^{(m)} = r_m の解の末尾成分の比から求める。因子は大きさ n+1 の
    Q を1行ずつ伸ばして使い回す。

    Args:
        params: 重みパラメータ
        n: 係数の組数 (≥ 1)
        rhs: "unit" なら r_m = e_m、"scaled" なら r_m = (Rinv)_{mm} e_m
        system: 構築済みの系（大きさ n+1 以上）。None なら新たに作る
        verbose: 詳細出力

    Returns:
        RecurrenceCoefficients: n 組の係数

    Raises:
        BreakdownError: β_k ≤ 0 の場合
        PreconditionError: Q の先頭ブロックが正定値でない場合
    """
    if int(n) != n or n < 1:
        raise RecurrenceError(f"係数の組数は1以上である必要があります: {n}")
    if rhs not in ("unit", "scaled"):
        raise RecurrenceError(f"右辺の種類が不正です: {rhs}")
    n = int(n)
    alpha, c = params.alpha, params.c

    count = min(n + 1, 3)
    mu = core_moments(params, count).values + scaled_laguerre_moments(alpha, c, count).values

    coeff_alpha = np.zeros(n)
    coeff_beta = np.zeros(n)
    coeff_alpha[0] = mu[1] / mu[0]
    coeff_beta[0] = mu[0]
    if n == 1:
        return RecurrenceCoefficients(coeff_alpha, coeff_beta)

    coeff_beta[1] = (mu[0] * mu[2] - mu[1] ** 2) / mu[0] ** 2
    if not _sigma_ok(coeff_beta[1]):
        raise BreakdownError("cramer", 1, RecurrenceCoefficients(coeff_alpha[:1], coeff_beta[:1]))

    if system is None:
        system = build_preconditioned_system(params, n + 1, verbose=verbose)
    elif system.size < n + 1:
        raise RecurrenceError(f"系の大きさが不足しています: {system.size} < {n + 1}")

    last = {}
    ratio = {}
    for m in range(1, n + 2):
        right = np.zeros(m)
        right[-1] = 1.0 if rhs == "unit" else inverse_cholesky_entry(alpha, c, m, m).to_float()
        try:
            y = system.solve(m, right)
        except PreconditionError as e:
            done = max(1, min(m - 2, n))
            raise PreconditionError(
                e.size,
                RecurrenceCoefficients(coeff_alpha[:done], coeff_beta[:done]),
                index=done,
            ) from e

        last[m] = y[m - 1]
        if m >= 2:
            ratio[m] = y[m - 2] / y[m - 1]

        k = m - 1
        if 2 <= k < n:
            factor = k * (alpha + k) / (c * c) if rhs == "unit" else _diag_ratio(alpha, k) / c
            coeff_beta[k] = factor * last[k] / last[m]
            if not _sigma_ok(coeff_beta[k]):
                raise BreakdownError(
                    "cramer", k, RecurrenceCoefficients(coeff_alpha[:k], coeff_beta[:k])
                )

        k = m - 2
        if 1 <= k < n:
            s_next = _diag_ratio(alpha, k + 1)
            s_here = _diag_ratio(alpha, k)
            coeff_alpha[k] = -(s_next / c) * (ratio[k + 2] - s_next) + (s_here / c) * (
                ratio[k + 1] - s_here
            )

    if verbose:
        print(f"✓ 前処理付きCramer法: {n} 組の係数を計算しました ({params.label()})")

    return RecurrenceCoefficients(coeff_alpha, coeff_beta)


def compute_coefficients(
    params: WeightParams, n: int, algorithm: str = "cramer", verbose: bool = False
) -> RecurrenceCoefficients:
    """
    アルゴリズム名を指定して重み関数の係数 n 組を計算

    chebyshev と modified は t = cx の変数で計算してから x に戻す。
    chebyshev は拡張精度のモーメントで掃き出す。
    破綻時の部分係数も x の変数に戻して再送出する。

    Args:
        params: 重みパラメータ
        n: 係数の組数
        algorithm: "chebyshev" | "modified" | "cramer"
        verbose: 詳細出力

    Raises:
        RecurrenceError: アルゴリズム名が不正な場合
        BreakdownError: 計算が破綻した場合
    """
    if algorithm not in ALGORITHMS:
        raise RecurrenceError(f"未知のアルゴリズムです: {algorithm} (候補: {', '.join(ALGORITHMS)})")
    if int(n) != n or n < 1:
        raise RecurrenceError(f"係数の組数は1以上である必要があります: {n}")
    n = int(n)

    if algorithm == "cramer":
        return preconditioned_cramer(params, n, verbose=verbose)

    try:
        if algorithm == "chebyshev":
            scaled = chebyshev(power_moment_values(params, 2 * n, scaled=True))
        else:
            reference = laguerre_recurrence(params.alpha, 1.0, 2 * n)
            scaled = modified_chebyshev(
                modified_moments(params, 2 * n, scaled=True).values,
                reference.alpha,
                reference.beta,
            )
    except BreakdownError as e:
        raise BreakdownError(e.algorithm, e.index, e.partial.rescale(params.c)) from e

    if verbose:
        print(f"✓ {algorithm}: {n} 組の係数を計算しました ({params.label()})")

    return scaled.rescale(params.c)


def coefficient_table(
    params: WeightParams, n: int, algorithms: Sequence[str] = ALGORITHMS, verbose: bool = False
) -> pd.DataFrame:
    """
    アルゴリズムごとの係数を並べた表

    列は k と、各アルゴリズムの {alg}_alpha, {alg}_beta, {alg}_status。
    status は ok / breakdown（破綻した k）/ unavailable（それ以降）。
    """
    table = pd.DataFrame({"k": np.arange(n)})
    for algorithm in algorithms:
        values_alpha = np.full(n, np.nan)
        values_beta = np.full(n, np.nan)
        status = ["ok"] * n
        try:
            coeffs = compute_coefficients(params, n, algorithm, verbose=verbose)
        except BreakdownError as e:
            coeffs = e.partial
            for k in range(coeffs.n, n):
                status[k] = "breakdown" if k == e.index else "unavailable"
            if verbose:
                print(f"⚠️  {algorithm}: k={e.index} で破綻しました")
        values_alpha[: coeffs.n] = coeffs.alpha
        values_beta[: coeffs.n] = coeffs.beta
        table[f"{algorithm}_alpha"] = values_alpha
        table[f"{algorithm}_beta"] = values_beta
        table[f"{algorithm}_status"] = status
    return table
