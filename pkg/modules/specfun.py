"""
specfun.py - 特殊関数カーネル

責務:
- 対数ガンマ関数 lnΓ(x) (x > 0) とその拡張精度テーブル
- Gauss超幾何関数 ₂F₁(a, b; c; z) のべき級数評価 (|z| < 1/2)
- 第1種Bessel関数 J_ν(x) (ν ≥ 0, x ≥ 0)
- 符号付き対数 SignedLog と、オーバーフローしない符号付き総和

数値の扱い:
    SignedLog は sign·exp(logmag) を表す。
    総和は最大の logmag をくくり出し、正の項と負の項を別々に
    math.fsum で集計してから差を取る。
"""

from dataclasses import dataclass
import math
from typing import Iterable, Union

import numpy as np
from scipy import special


class SpecfunError(Exception):
    """特殊関数評価のカスタム例外"""

    pass


# ₂F₁ 級数の打ち切り
HYP2F1_MAX_TERMS = 500
HYP2F1_RTOL = 1e-16

# exp() がオーバーフローしない対数の上限
LOG_FLOAT_MAX = math.log(np.finfo(float).max)

# math.factorial で厳密に扱う整数引数の上限
_EXACT_FACTORIAL_LIMIT = 171


@dataclass(frozen=True)
class SignedLog:
    """
    符号付き対数表現 sign·exp(logmag)

    sign = 0 のとき logmag は無視され、-inf に正規化される。
    """

    sign: int
    logmag: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise SpecfunError(f"SignedLog の符号は -1, 0, +1 のいずれかです: {self.sign}")
        if self.sign == 0:
            object.__setattr__(self, "logmag", -math.inf)
        elif math.isnan(self.logmag):
            raise SpecfunError("SignedLog の logmag が NaN です")

    @classmethod
    def from_float(cls, value: float) -> "SignedLog":
        """
        実数を SignedLog に変換

        Examples:
            >>> SignedLog.from_float(-2.0)
            SignedLog(sign=-1, logmag=0.6931471805599453)
        """
        if value == 0:
            return cls(0)
        if math.isnan(value):
            raise SpecfunError("NaN は SignedLog に変換できません")
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    def to_float(self) -> float:
        """実数に戻す（表現範囲を超える場合は ±inf）"""
        if self.sign == 0:
            return 0.0
        if self.logmag > LOG_FLOAT_MAX:
            return math.copysign(math.inf, self.sign)
        return self.sign * math.exp(self.logmag)

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return SignedLog(0)
        return SignedLog(self.sign * other.sign, self.logmag + other.logmag)

    def __neg__(self) -> "SignedLog":
        return SignedLog(-self.sign, self.logmag)


def log_gamma(x: float) -> float:
    """
    対数ガンマ関数 ln Γ(x)

    正の整数では階乗から厳密に求め、それ以外は scipy.special.gammaln を使う。

    Args:
        x: 正の実数

    Returns:
        float: ln Γ(x)

    Raises:
        SpecfunError: x ≤ 0 または非有限の場合

    Examples:
        >>> log_gamma(5)
        3.1780538303479458
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise SpecfunError(f"log_gamma の引数は正の有限値である必要があります: x={x}")

    if x.is_integer() and x <= _EXACT_FACTORIAL_LIMIT:
        return math.log(math.factorial(int(x) - 1))

    return float(special.gammaln(x))


def log_gamma_table(x0: float, count: int) -> np.ndarray:
    """
    ln Γ(x0 + k), k = 0..count-1 を拡張精度 (np.longdouble) で返す

    先頭値のみ log_gamma で求め、以降は ln(x0 + k) の累積和で伸ばす。
    大きな k でも丸め誤差が値の大きさに比例して増えない。

    Args:
        x0: 先頭の引数 (> 0)
        count: 要素数 (≥ 1)

    Returns:
        np.ndarray: dtype=np.longdouble の配列
    """
    if count < 1:
        raise SpecfunError(f"テーブルの要素数は1以上である必要があります: {count}")

    table = np.empty(count, dtype=np.longdouble)
    table[0] = log_gamma(x0)
    steps = np.log(np.longdouble(x0) + np.arange(count - 1, dtype=np.longdouble))
    table[1:] = table[0] + np.cumsum(steps)
    return table


def gauss_2f1(a: float, b: float, cc: float, z: float, rtol: float = HYP2F1_RTOL) -> float:
    """
    Gauss超幾何関数 ₂F₁(a, b; cc; z) のべき級数評価

    項比の漸化式で項を更新し、|項| < rtol·|部分和| で打ち切る。
    z に np.longdouble を渡すと拡張精度で和を取る。
    a または b が非正整数なら多項式として正確に終わる。

    Args:
        a, b: 上側パラメータ
        cc: 下側パラメータ（非正整数は不可）
        z: 引数 (|z| < 1/2)
        rtol: 打ち切りの相対許容値

    Returns:
        float: 級数の値（z が np.longdouble なら np.longdouble）

    Raises:
        SpecfunError: |z| ≥ 1/2、cc が非正整数、または500項で収束しない場合

    Examples:
        >>> gauss_2f1(-1, 2, 1, 0.2)
        0.6
    """
    if not abs(z) < 0.5:
        raise SpecfunError(f"₂F₁ の引数は |z| < 1/2 である必要があります: z={z}")
    if cc <= 0 and float(cc).is_integer():
        raise SpecfunError(f"₂F₁ の下側パラメータが非正整数です: cc={cc}")
    if isinstance(z, np.longdouble):
        a, b, cc = np.longdouble(a), np.longdouble(b), np.longdouble(cc)

    term = 1.0
    total = 1.0
    for k in range(HYP2F1_MAX_TERMS):
        term *= (a + k) * (b + k) / ((cc + k) * (k + 1)) * z
        total += term
        if term == 0.0 or abs(term) < rtol * abs(total):
            return total

    raise SpecfunError(
        f"₂F₁ の級数が{HYP2F1_MAX_TERMS}項で収束しませんでした: "
        f"a={a}, b={b}, cc={cc}, z={z}"
    )


def bessel_j(nu: float, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    第1種Bessel関数 J_ν(x)

    実数次数 ν ≥ 0、実引数 x ≥ 0 のみ受け付ける。配列を渡すと配列で返す。

    Args:
        nu: 次数 (≥ 0)
        x: 引数 (≥ 0)、スカラーまたは numpy 配列

    Returns:
        J_ν(x)

    Raises:
        SpecfunError: 負の次数・負の引数・NaN の場合

    Examples:
        >>> bessel_j(0, 0.0)
        1.0
    """
    if not nu >= 0:
        raise SpecfunError(f"Bessel関数の次数は0以上である必要があります: nu={nu}")

    values = np.asarray(x, dtype=float)
    if np.any(np.isnan(values)) or np.any(values < 0):
        raise SpecfunError("Bessel関数の引数は0以上である必要があります")

    result = special.jv(nu, values)
    if np.ndim(result) == 0:
        return float(result)
    return result


def signed_log_sum(terms: Iterable[SignedLog]) -> SignedLog:
    """
    SignedLog の列の総和

    最大の logmag をくくり出し、正の部分と負の部分を math.fsum で別々に
    集計する。入力の並べ替えに対して結果は変わらない。

    Args:
        terms: SignedLog の列（空でもよい）

    Returns:
        SignedLog: 総和（完全に打ち消し合えば sign = 0）

    Examples:
        >>> signed_log_sum([SignedLog(1, 700.0), SignedLog(1, 700.0)]).logmag
        700.6931471805599
    """
    active = [term for term in terms if term.sign != 0]
    if not active:
        return SignedLog(0)

    peak = max(term.logmag for term in active)
    if math.isinf(peak):
        signs = {term.sign for term in active if term.logmag == peak}
        if len(signs) > 1:
            raise SpecfunError("無限大の項が正負両方に現れました")
        return SignedLog(signs.pop(), math.inf)

    positive = math.fsum(math.exp(t.logmag - peak) for t in active if t.sign > 0)
    negative = math.fsum(math.exp(t.logmag - peak) for t in active if t.sign < 0)
    return _combine(positive, negative, peak)


def signed_log_sum_array(signs: np.ndarray, logmags: np.ndarray) -> SignedLog:
    """
    配列で与えた符号付き対数の総和（signed_log_sum のベクトル版）

    logmags は np.longdouble でもよい。くくり出し後の相対値だけを
    float64 に落とすので、巨大な対数値でも各項の相対精度が保たれる。

    Args:
        signs: 符号の配列 (-1, 0, +1)
        logmags: 対数絶対値の配列（signs と同形状）

    Returns:
        SignedLog: 総和
    """
    signs = np.asarray(signs).ravel()
    logmags = np.asarray(logmags).ravel()
    mask = signs != 0
    if not np.any(mask):
        return SignedLog(0)

    signs = signs[mask]
    logmags = logmags[mask]
    if not np.all(np.isfinite(logmags)):
        raise SpecfunError("総和の項に非有限の対数値が含まれています")

    peak = logmags.max()
    scaled = np.exp(logmags - peak).astype(np.float64)
    positive = math.fsum(scaled[signs > 0].tolist())
    negative = math.fsum(scaled[signs < 0].tolist())
    return _combine(positive, negative, float(peak))


def _combine(positive: float, negative: float, peak: float) -> SignedLog:
    total = positive - negative
    if total == 0.0:
        return SignedLog(0)
    return SignedLog(1 if total > 0 else -1, peak + math.log(abs(total)))
