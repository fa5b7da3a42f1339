"""
moments.py - モーメント計算モジュール

責務:
- 重み関数 w(x) = x^α e^{-cx} [J_ν(x) + 1] のパラメータ検証 (WeightParams)
- コアモーメント μ_{k,0} = ∫ x^{k+α} e^{-cx} J_ν(x) dx
- べきモーメント μ_k = μ_{k,0} + Γ(k+α+1)/c^{k+α+1}
- Laguerreモーメント γ_k = Γ(k+α+1) と η_k = Γ(k+α+1)/c^{k+α+1}
- スケーリング付きLaguerre多項式に対する修正モーメント m_k
- 正規直交Laguerre関数の積と J_ν の積分（修正モーメントと前処理付き行列 Q に使う）

スケーリング:
    scaled=True のとき values[k] には c^k 倍した値を格納する。
    変数 t = cx での量に対応し、大きな k でもオーバーフローしにくい。
"""

from dataclasses import dataclass
from enum import Enum
import math
from typing import List, Optional, Tuple

import numpy as np

from modules.specfun import (
    LOG_FLOAT_MAX,
    SignedLog,
    SpecfunError,
    bessel_j,
    gauss_2f1,
    log_gamma,
    log_gamma_table,
)


# 正規直交Laguerre関数の積の積分則
LAGUERRE_PANEL_PHASE = 4.0
LAGUERRE_HEAD_TOL = 1e-18
LAGUERRE_TAIL_TOL = 1e-21
LAGUERRE_CHUNK = 4096

_RESCALE_LIMIT = 1e100
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


class MomentError(Exception):
    """モーメント計算のカスタム例外"""

    pass


class WeightParamsError(MomentError, ValueError):
    """重み関数パラメータが不正な場合の例外"""

    pass


class MomentRangeError(MomentError):
    """モーメントが倍精度で表現できない場合の例外（最初に失敗した k を保持）"""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


class MomentKind(str, Enum):
    """モーメントの種類"""

    POWER = "power"
    CORE = "core"
    MODIFIED = "modified"
    LAGUERRE = "laguerre"
    SCALED_LAGUERRE = "scaled_laguerre"


@dataclass(frozen=True)
class WeightParams:
    """
    重み関数 x^α e^{-cx} [J_ν(x) + 1] のパラメータ

    Attributes:
        nu: Bessel関数の次数 ν ≥ 0
        alpha: べき指数 α > -1
        c: 減衰率 c > 0
    """

    nu: float
    alpha: float
    c: float

    def __post_init__(self):
        for name in ("nu", "alpha", "c"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise WeightParamsError(f"{name} は実数である必要があります: {value!r}")
            if not math.isfinite(value):
                raise WeightParamsError(f"{name} は有限値である必要があります: {value}")
            object.__setattr__(self, name, value)

        if self.nu < 0:
            raise WeightParamsError(f"nu は0以上である必要があります: nu={self.nu}")
        if self.alpha <= -1:
            raise WeightParamsError(f"alpha は -1 より大きい必要があります: alpha={self.alpha}")
        if self.c <= 0:
            raise WeightParamsError(f"c は正である必要があります: c={self.c}")

    def label(self) -> str:
        """ログやファイル名に使う短い表記"""
        return f"nu={self.nu:g}, alpha={self.alpha:g}, c={self.c:g}"


@dataclass(frozen=True, eq=False)
class MomentTable:
    """
    モーメント列

    Attributes:
        kind: モーメントの種類
        values: k = 0 から始まる値の配列（読み取り専用）
        params: 重みパラメータ（Laguerre系では None）
        alpha: Laguerre系のべき指数
        c: scaled_laguerre の減衰率
        scaled: True なら values[k] は c^k 倍された値
    """

    kind: MomentKind
    values: np.ndarray
    params: Optional[WeightParams] = None
    alpha: Optional[float] = None
    c: Optional[float] = None
    scaled: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]


def _validate_count(count: int) -> int:
    if int(count) != count or count < 1:
        raise MomentError(f"モーメント数は1以上の整数である必要があります: {count}")
    return int(count)


def _validate_laguerre(alpha: float, c: float = 1.0):
    if not alpha > -1:
        raise MomentError(f"alpha は -1 より大きい必要があります: alpha={alpha}")
    if not c > 0:
        raise MomentError(f"c は正である必要があります: c={c}")


def _legendre_sequence(params: WeightParams, count: int, dtype=float) -> np.ndarray:
    """
    t_k = μ_{k,0}·s^{k+α+1}/Γ(k+α+ν+1) を返す (s = √(c²+1))

    t_0, t_1 は ₂F₁ から求め、以降は三項漸化式で前進する。
    dtype=np.longdouble なら根・級数・漸化式をすべて拡張精度で行う。
    """
    nu, alpha = params.nu, params.alpha
    c = dtype(params.c)
    root = np.sqrt(dtype(1) + c * c)
    x = c / root
    # (s - c) = 1/(s + c) を使い桁落ちを避ける
    z = dtype(0.5) / (root * (root + c))
    rtol = float(np.finfo(dtype).eps)

    try:
        factor = np.exp(-nu * np.log(c + root) - dtype(log_gamma(nu + 1.0)))
        t = np.empty(count, dtype=dtype)
        t[0] = factor * gauss_2f1(-alpha, alpha + 1.0, 1.0 + nu, z, rtol=rtol)
        if count > 1:
            t[1] = factor * gauss_2f1(-alpha - 1.0, alpha + 2.0, 1.0 + nu, z, rtol=rtol)
    except SpecfunError as e:
        raise MomentError(f"初期値の評価に失敗しました ({params.label()}): {str(e)}")

    for k in range(1, count - 1):
        lam = k + alpha
        t[k + 1] = ((2.0 * lam + 1.0) * x * t[k] - (lam - nu) * t[k - 1]) / (lam + nu + 1.0)

    return t


def core_moment_log_table(params: WeightParams, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    コアモーメント μ_{k,0} の符号と対数絶対値

    正規化した列 t_k を拡張精度で求め、対数部分も np.longdouble で保持する。
    倍精度の範囲を超える k でもオーバーフローしない。

    Args:
        params: 重みパラメータ
        count: モーメント数 K

    Returns:
        (signs, logmags): 整数の符号配列と longdouble の対数配列
    """
    count = _validate_count(count)
    t = _legendre_sequence(params, count, np.longdouble)

    log_root = np.log1p(np.longdouble(params.c) ** 2) / 2
    log_gammas = log_gamma_table(params.alpha + params.nu + 1.0, count)
    exponents = np.arange(count, dtype=np.longdouble) + (params.alpha + 1.0)

    with np.errstate(divide="ignore"):
        logmags = np.log(np.abs(t)) + log_gammas - exponents * log_root
    signs = np.sign(t).astype(int)
    return signs, logmags


def core_moment_logs(params: WeightParams, count: int) -> List[SignedLog]:
    """コアモーメントを SignedLog の列で返す（オーバーフローしない）"""
    signs, logmags = core_moment_log_table(params, count)
    return [
        SignedLog(int(sign), float(logmag)) if sign != 0 else SignedLog(0)
        for sign, logmag in zip(signs, logmags)
    ]


def core_moments(params: WeightParams, count: int) -> MomentTable:
    """
    コアモーメント μ_{k,0}, k = 0..K-1 を計算

    Args:
        params: 重みパラメータ
        count: モーメント数 K (≥ 1)

    Returns:
        MomentTable: kind=core

    Raises:
        MomentRangeError: 倍精度で表現できない値が現れた場合

    Examples:
        >>> core_moments(WeightParams(0, 0, 1), 1)[0]
        0.7071067811865476
    """
    signs, logmags = core_moment_log_table(params, count)
    values = np.zeros(len(signs))
    for k, (sign, logmag) in enumerate(zip(signs, logmags)):
        if sign == 0:
            continue
        if logmag > LOG_FLOAT_MAX:
            raise MomentRangeError(k, f"コアモーメントがオーバーフローします: k={k} ({params.label()})")
        values[k] = sign * math.exp(float(logmag))

    return MomentTable(kind=MomentKind.CORE, values=values, params=params)


def power_moment_values(params: WeightParams, count: int, scaled: bool = False) -> np.ndarray:
    """
    べきモーメント μ_k を拡張精度 (np.longdouble) の配列で返す

    μ_0, μ_1 はコアモーメントと Laguerre 部分の和で与え、以降は
    μ_{k+1} = [c(2s+1)μ_k - (s²-ν²)μ_{k-1} + Γ(s)(s²+s-c²ν²)/c^{s+2}]/(c²+1)
    (s = k+α) で前進する。Γ(s) は Γ(α+1) からの積で伸ばすので、
    倍精度で丸められるのは k によらない共通因子だけになる。
    chebyshev に渡すモーメントはこちらを使う。

    Args:
        params: 重みパラメータ
        count: モーメント数 K (≥ 1)
        scaled: True なら c^k μ_k を返す

    Returns:
        np.ndarray: dtype=np.longdouble の配列
    """
    count = _validate_count(count)
    nu, alpha = params.nu, params.alpha
    c = np.longdouble(params.c)
    c2 = c * c
    root = np.sqrt(1 + c2)

    t = _legendre_sequence(params, min(count, 2), np.longdouble)
    core_scale = np.exp(np.longdouble(log_gamma(alpha + nu + 1.0)) - (alpha + 1.0) * np.log(root))
    # η_0 = Γ(α+1)/c^{α+1}
    mass = np.exp(np.longdouble(log_gamma(alpha + 1.0)) - (alpha + 1.0) * np.log(c))

    values = np.empty(count, dtype=np.longdouble)
    values[0] = t[0] * core_scale + mass
    if count > 1:
        core_first = t[1] * core_scale * (alpha + nu + 1.0) / root
        if scaled:
            values[1] = c * core_first + mass * (alpha + 1.0)
        else:
            values[1] = core_first + mass * (alpha + 1.0) / c

    # Γ(k+α)/c^{α+1}（scaled）または Γ(k+α)/c^{k+α+2}
    gamma_term = mass if scaled else mass / c2
    for k in range(1, count - 1):
        s = k + alpha
        source = gamma_term * (s * s + s - c2 * nu * nu)
        if scaled:
            values[k + 1] = (
                c2 * (2.0 * s + 1.0) * values[k] - c2 * (s * s - nu * nu) * values[k - 1] + source
            ) / (c2 + 1)
        else:
            values[k + 1] = (
                c * (2.0 * s + 1.0) * values[k] - (s * s - nu * nu) * values[k - 1] + source
            ) / (c2 + 1)
        gamma_term = gamma_term * s if scaled else gamma_term * s / c

    return values


def power_moments(params: WeightParams, count: int, scaled: bool = False) -> MomentTable:
    """
    べきモーメント μ_k を三項漸化式で計算

    漸化式は power_moment_values が拡張精度で行い、ここで倍精度に丸める。

    Args:
        params: 重みパラメータ
        count: モーメント数 K (≥ 1)
        scaled: True なら c^k μ_k を返す

    Returns:
        MomentTable: kind=power

    Raises:
        MomentRangeError: 倍精度で表現できない値が現れた場合（最初の k を保持）

    Examples:
        >>> power_moments(WeightParams(0, 0, 1), 1)[0]
        1.7071067811865475
    """
    with np.errstate(over="ignore", invalid="ignore"):
        values = power_moment_values(params, count, scaled=scaled).astype(float)

    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        k = int(bad[0])
        raise MomentRangeError(k, f"べきモーメントがオーバーフローします: k={k} ({params.label()})")

    return MomentTable(kind=MomentKind.POWER, values=values, params=params, scaled=scaled)


def laguerre_moments(alpha: float, count: int) -> MomentTable:
    """
    Laguerreモーメント γ_k = Γ(k+α+1)

    Examples:
        >>> list(laguerre_moments(0, 4).values)
        [1.0, 1.0, 2.0, 6.0]
    """
    count = _validate_count(count)
    _validate_laguerre(alpha)

    values = np.empty(count)
    values[0] = math.exp(log_gamma(alpha + 1.0))
    for k in range(1, count):
        values[k] = values[k - 1] * (k + alpha)
        if not math.isfinite(values[k]):
            raise MomentRangeError(k, f"Laguerreモーメントがオーバーフローします: k={k}")

    return MomentTable(kind=MomentKind.LAGUERRE, values=values, alpha=float(alpha))


def scaled_laguerre_moments(alpha: float, c: float, count: int) -> MomentTable:
    """
    重み x^α e^{-cx} のモーメント η_k = Γ(k+α+1)/c^{k+α+1}

    Examples:
        >>> list(scaled_laguerre_moments(0, 1, 3).values)
        [1.0, 1.0, 2.0]
    """
    count = _validate_count(count)
    _validate_laguerre(alpha, c)

    log_first = log_gamma(alpha + 1.0) - (alpha + 1.0) * math.log(c)
    if log_first > LOG_FLOAT_MAX:
        raise MomentRangeError(0, "Laguerreモーメントがオーバーフローします: k=0")

    values = np.empty(count)
    values[0] = math.exp(log_first)
    for k in range(1, count):
        values[k] = values[k - 1] * (k + alpha) / c
        if not math.isfinite(values[k]):
            raise MomentRangeError(k, f"Laguerreモーメントがオーバーフローします: k={k}")

    return MomentTable(
        kind=MomentKind.SCALED_LAGUERRE, values=values, alpha=float(alpha), c=float(c)
    )


def laguerre_functions(alpha: float, size: int, t) -> np.ndarray:
    """
    正規直交Laguerre関数 q_k(t) = ℓ_k(t)·t^{α/2}·e^{-t/2} (k < size)

    ℓ_k は重み t^α e^{-t} の正規直交多項式（最高次係数は正）で、
    b_{k+1}ℓ_{k+1} = (t - a_k)ℓ_k - b_kℓ_{k-1}、a_k = 2k+α+1、b_k = √(k(k+α))、
    ℓ_0 = 1/√Γ(α+1) で前進する。因子 t^{α/2}e^{-t/2} は対数で持ち、
    値が大きくなった点だけくくり出すので大きな t でもアンダーフローしない。

    Args:
        alpha: べき指数 (> -1)
        size: 関数の個数
        t: 正の点の配列

    Returns:
        np.ndarray: 形状 (size, len(t))
    """
    t = np.asarray(t, dtype=float).ravel()
    log_scale = 0.5 * (alpha * np.log(t) - t - log_gamma(alpha + 1.0))
    values = np.empty((size, t.size))
    logs = np.empty((size, t.size))

    previous = np.zeros_like(t)
    current = np.ones_like(t)
    for k in range(size):
        values[k] = current
        logs[k] = log_scale
        if k + 1 == size:
            break
        following = (
            (t - (2.0 * k + alpha + 1.0)) * current - math.sqrt(k * (k + alpha)) * previous
        ) / math.sqrt((k + 1) * (k + 1 + alpha))
        previous, current = current, following

        peak = np.maximum(np.abs(previous), np.abs(current))
        if np.any(peak > _RESCALE_LIMIT):
            scale = np.where(peak > _RESCALE_LIMIT, peak, 1.0)
            previous = previous / scale
            current = current / scale
            log_scale = log_scale + np.log(scale)

    with np.errstate(under="ignore"):
        return values * np.exp(logs)


def laguerre_function_rule(alpha: float, c: float, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    ∫₀^∞ q_i(t) q_j(t) g(t) dt (i, j < size) 用の合成15点Gauss-Legendre則

    g は J_ν(t/c) のように周期 2πc 程度で振動する有界関数を想定する。
    パネル幅は t と LAGUERRE_PANEL_PHASE/Ω(t) の小さい方とし、
    Ω(t) = 2√(N'/t) + 1/c (N' = size + (α+1)/2) は被積分関数の局所的な角周波数の上界。
    原点側は幅が t に比例するので幾何的に細かくなる。
    先頭の [0, δ] は u = t^{1+α} と置換し、δ は ℓ_k(0)² δ^{1+α}/(1+α) が
    LAGUERRE_HEAD_TOL 以下になるように選ぶ。転回点 4N' を過ぎて
    max q_k² が LAGUERRE_TAIL_TOL を下回ったところで打ち切る。

    Returns:
        (nodes, weights): 点と重み（g は含まない）

    Raises:
        MomentError: パラメータが不正な場合
    """
    _validate_laguerre(alpha, c)
    if int(size) != size or size < 1:
        raise MomentError(f"関数の個数は1以上の整数である必要があります: {size}")
    size = int(size)
    order = size + 0.5 * (alpha + 1.0)

    # ℓ_k(0)² = Γ(k+α+1)/(k!Γ(α+1)²)
    log_origin = float(
        np.max(log_gamma_table(alpha + 1.0, size) - log_gamma_table(1.0, size))
    ) - 2.0 * log_gamma(alpha + 1.0)
    head = math.exp((math.log(LAGUERRE_HEAD_TOL * (alpha + 1.0)) - log_origin) / (alpha + 1.0))
    head = min(head, 0.25 / order)

    edges = [head]
    point = head
    while True:
        frequency = 2.0 * math.sqrt(order / point) + 1.0 / c
        point += min(point, LAGUERRE_PANEL_PHASE / frequency)
        edges.append(point)
        if point > 4.0 * order:
            edge_values = laguerre_functions(alpha, size, [point])
            if float(np.max(edge_values * edge_values)) < LAGUERRE_TAIL_TOL:
                break

    edges = np.asarray(edges)
    half = 0.5 * (edges[1:] - edges[:-1])
    middle = 0.5 * (edges[1:] + edges[:-1])
    nodes = (middle[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    weights = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()

    top = head ** (alpha + 1.0)
    u = 0.5 * top * (_GL_NODES + 1.0)
    head_nodes = u ** (1.0 / (alpha + 1.0))
    head_weights = 0.5 * top * _GL_WEIGHTS * head_nodes ** (-alpha) / (alpha + 1.0)

    return np.concatenate([head_nodes, nodes]), np.concatenate([head_weights, weights])


def laguerre_gram(params: WeightParams, size: int, columns: Optional[int] = None) -> np.ndarray:
    """
    G_ij = ∫₀^∞ q_i(t) q_j(t) J_ν(t/c) dt (i < size, j < columns)

    ℓ_k の係数行列はスケーリング付き Laguerre モーメント行列の逆Cholesky因子
    (R^{α,c})^{-1} の列と t = cx で対応するので、G = R^{-T} M₀ R^{-1} になる。
    各項の大きさは |q_i q_j| ≤ (q_i² + q_j²)/2 で抑えられ、和の丸め誤差は
    O(1) の量に対する誤差になる。点は LAGUERRE_CHUNK 個ずつ評価する。

    Args:
        params: 重みパラメータ
        size: 行数
        columns: 列数（None なら size）

    Returns:
        np.ndarray: 形状 (size, columns)
    """
    nodes, weights = laguerre_function_rule(params.alpha, params.c, size)
    weights = weights * bessel_j(params.nu, nodes / params.c)
    columns = size if columns is None else int(columns)

    gram = np.zeros((size, columns))
    for start in range(0, nodes.size, LAGUERRE_CHUNK):
        part = slice(start, start + LAGUERRE_CHUNK)
        values = laguerre_functions(params.alpha, size, nodes[part])
        gram += (values * weights[part]) @ values[:columns].T
    return gram


def modified_moments(params: WeightParams, count: int, scaled: bool = False) -> MomentTable:
    """
    スケーリング付きモニックLaguerre多項式 L_k^{α,c} に対する修正モーメント

    m_0 = μ_{0,0} + η_0、k ≥ 1 では直交性により Laguerre 部分が消え
    m_k = ((-1)^k k!/c^k) Σ_j (-1)^j C(k+α, k-j) (c^j/j!) μ_{j,0}
    となる。この和は k とともに激しく打ち消し合うので、同じ量を
    c^k m_k = c^{-(α+1)}·√(k!Γ(k+α+1)Γ(α+1))·G_{k0} (G は laguerre_gram)
    として求める。

    Args:
        params: 重みパラメータ
        count: モーメント数 K (≥ 1)
        scaled: True なら c^k m_k を返す

    Returns:
        MomentTable: kind=modified

    Raises:
        MomentRangeError: 結果が倍精度で表現できない場合
    """
    count = _validate_count(count)
    alpha, c = params.alpha, params.c

    values = np.empty(count)
    values[0] = core_moments(params, 1).values[0] + scaled_laguerre_moments(alpha, c, 1).values[0]

    if count > 1:
        column = laguerre_gram(params, count, columns=1)[:, 0]
        log_c = np.log(np.longdouble(c))
        log_norms = (
            0.5 * (log_gamma_table(1.0, count) + log_gamma_table(alpha + 1.0, count) + log_gamma(alpha + 1.0))
            - (alpha + 1.0) * log_c
        )
        if not scaled:
            log_norms = log_norms - np.arange(count) * log_c
        with np.errstate(over="ignore", invalid="ignore"):
            values[1:] = (column[1:] * np.exp(log_norms[1:])).astype(float)

    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        k = int(bad[0])
        raise MomentRangeError(k, f"修正モーメントがオーバーフローします: k={k} ({params.label()})")

    return MomentTable(kind=MomentKind.MODIFIED, values=values, params=params, scaled=scaled)


def compute_moments(
    kind: MomentKind,
    count: int,
    params: Optional[WeightParams] = None,
    alpha: Optional[float] = None,
    c: Optional[float] = None,
    scaled: bool = False,
) -> MomentTable:
    """
    種類を指定してモーメント列を計算（CLI から使う窓口）

    Raises:
        MomentError: 種類に必要なパラメータが不足している場合
    """
    kind = MomentKind(kind)
    if kind == MomentKind.LAGUERRE:
        if alpha is None:
            raise MomentError("laguerre には alpha が必要です")
        return laguerre_moments(alpha, count)
    if kind == MomentKind.SCALED_LAGUERRE:
        if alpha is None or c is None:
            raise MomentError("scaled_laguerre には alpha と c が必要です")
        return scaled_laguerre_moments(alpha, c, count)

    if params is None:
        raise MomentError(f"{kind.value} には nu, alpha, c が必要です")
    if kind == MomentKind.CORE:
        return core_moments(params, count)
    if kind == MomentKind.POWER:
        return power_moments(params, count, scaled=scaled)
    return modified_moments(params, count, scaled=scaled)
