"""
emfields.py - 層状大地の電磁場計算モジュール

責務:
- 層状大地モデル (LayeredEarth) と測定配置 (SurveyGeometry) の検証
- 反射係数 R_0(λ) の後退漸化式
- 鉛直磁場 Im(H_z) と動径磁場 Im(H_ρ) の Bessel 重みGauss則による計算
- 同じ被積分関数の参照積分による検証値

積分の形:
    H = ±(m/(4πr³)) ∫₀^∞ Im R_0(x/r)·x²·e^{-(2H/r)x}·J_ν(x) dx
    ν = 0 が H_z、ν = 1 が H_ρ（符号は負）。
"""

from dataclasses import dataclass, field
import math
from typing import Callable, List, Optional, Sequence, Tuple
import warnings

import numpy as np

from modules.moments import WeightParams
from modules.oracle import OracleResult, reference_integral
from modules.quadrature import integrate_bessel
from modules.recurrence import BreakdownError, compute_coefficients


class EMFieldError(Exception):
    """電磁場計算のカスタム例外"""

    pass


VACUUM_PERMEABILITY = 4.0e-7 * math.pi
ORDER_STEP = 5

COMPONENTS = {
    # 成分名: (Bessel次数, 符号)
    "hz": (0.0, 1.0),
    "hrho": (1.0, -1.0),
}


@dataclass(frozen=True)
class LayeredEarth:
    """
    水平層状大地

    Attributes:
        sigma: 各層の導電率 σ_j [S/m]（長さ N）
        h: 各層の厚さ h_j [m]（長さ N-1、最下層は無限）
        omega: 角周波数 ω [rad/s]
        mu: 透磁率 [H/m]
    """

    sigma: Tuple[float, ...]
    h: Tuple[float, ...]
    omega: float
    mu: float = VACUUM_PERMEABILITY

    def __post_init__(self):
        sigma = tuple(float(v) for v in self.sigma)
        h = tuple(float(v) for v in self.h)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "h", h)

        if not sigma:
            raise EMFieldError("導電率が1層以上必要です")
        if len(h) != len(sigma) - 1:
            raise EMFieldError(
                f"層厚の数は導電率の数より1少ない必要があります: |h|={len(h)}, |sigma|={len(sigma)}"
            )
        for name, values in (("sigma", sigma), ("h", h)):
            if not all(v > 0 and math.isfinite(v) for v in values):
                raise EMFieldError(f"{name} は正の有限値である必要があります: {values}")
        for name in ("omega", "mu"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise EMFieldError(f"{name} は正の有限値である必要があります: {value}")

    @classmethod
    def from_frequency(cls, sigma: Sequence[float], h: Sequence[float], frequency: float, **kwargs):
        """周波数 [Hz] から作る"""
        return cls(sigma=tuple(sigma), h=tuple(h), omega=2.0 * math.pi * frequency, **kwargs)

    def wavenumbers(self) -> np.ndarray:
        """k_j = √(-iωμσ_j)（実部非負の分枝）"""
        return np.sqrt(-1j * self.omega * self.mu * np.asarray(self.sigma))


def half_space_model(sigma: float, frequency: float) -> LayeredEarth:
    """一様な半無限大地"""
    return LayeredEarth.from_frequency((sigma,), (), frequency)


@dataclass(frozen=True)
class SurveyModel:
    """
    3層モデルの測定条件

    Attributes:
        component: "hz" または "hrho"
        sigma: 各層の導電率 [S/m]
        height: ダイポールの高さ [m]
        h: 層厚 [m]
        offset: 送受信間距離 [m]
    """

    component: str
    sigma: Tuple[float, float, float]
    height: float
    h: Tuple[float, float] = (2.5, 0.5)
    offset: float = 8.0

    def build(self, frequency: float) -> Tuple["LayeredEarth", "SurveyGeometry"]:
        """周波数を与えて大地モデルと配置を作る"""
        model = LayeredEarth.from_frequency(self.sigma, self.h, frequency)
        return model, SurveyGeometry(self.height, self.offset)


# 浅い3層構造の測定例（鉛直・動径成分それぞれ2例）
SURVEY_MODELS = {
    "hz_model_a": SurveyModel("hz", (0.05, 0.0049, 0.0182), 0.4),
    "hz_model_b": SurveyModel("hz", (0.033, 0.1, 0.01), 0.2),
    "hrho_model_a": SurveyModel("hrho", (0.333, 0.02, 0.1), 0.4),
    "hrho_model_b": SurveyModel("hrho", (0.033, 0.1, 0.01), 0.4),
}


@dataclass(frozen=True)
class SurveyGeometry:
    """
    送受信配置

    Attributes:
        height: ダイポールの高さ H [m]
        offset: 送受信間距離 r [m]
        moment: ダイポールモーメント m [A·m²]
    """

    height: float
    offset: float
    moment: float = 1.0

    def __post_init__(self):
        for name in ("height", "offset"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise EMFieldError(f"{name} は正の有限値である必要があります: {value}")
        if not math.isfinite(self.moment):
            raise EMFieldError(f"moment は有限値である必要があります: {self.moment}")
        if self.c >= 1:
            warnings.warn(
                f"c = 2H/r = {self.c:g} が1以上です。Gauss則の収束が遅くなります",
                stacklevel=2,
            )

    @property
    def c(self) -> float:
        return 2.0 * self.height / self.offset

    @property
    def prefactor(self) -> float:
        """m/(4πr³)"""
        return self.moment / (4.0 * math.pi * self.offset**3)


@dataclass(frozen=True)
class FieldTraceRow:
    order: int
    value: float
    difference: float


@dataclass(frozen=True)
class FieldResult:
    """
    磁場の計算結果

    Attributes:
        value: 最後に評価した次数での値 [A/m]
        converged: 連続する次数の差が tol 未満になったか
        trace: 次数ごとの値と直前との差
        breakdown: 係数計算が破綻した k（破綻しなければ None）
    """

    value: float
    converged: bool
    trace: List[FieldTraceRow] = field(default_factory=list)
    breakdown: Optional[int] = None


def reflection_coefficient(model: LayeredEarth, lam):
    """
    反射係数 R_0(λ)

    R_N = 0 から R_j = ((R_{j+1}+Ψ_{j+1})/(R_{j+1}Ψ_{j+1}+1))·e^{-2u_j h_j} を
    後退させ、最後に R_0 = (R_1+Ψ_1)/(R_1Ψ_1+1) とする。
    u_0 = λ、u_j = √(λ² + iωμσ_j)（実部非負）、Ψ_j = (u_{j-1}-u_j)/(u_{j-1}+u_j)。

    Args:
        model: 層状大地
        lam: λ > 0（スカラーまたは配列）

    Returns:
        複素数（配列を渡すと複素配列）
    """
    lam_array = np.asarray(lam, dtype=float)
    if np.any(~(lam_array > 0)):
        raise EMFieldError("λ は正である必要があります")

    lam_c = lam_array.astype(complex)
    u = [lam_c] + [
        np.sqrt(lam_c * lam_c + 1j * model.omega * model.mu * s) for s in model.sigma
    ]

    reflection = np.zeros_like(lam_c)
    for j in range(len(model.sigma) - 1, 0, -1):
        psi = (u[j] - u[j + 1]) / (u[j] + u[j + 1])
        reflection = (reflection + psi) / (reflection * psi + 1.0) * np.exp(
            -2.0 * u[j] * model.h[j - 1]
        )
    psi = (u[0] - u[1]) / (u[0] + u[1])
    reflection = (reflection + psi) / (reflection * psi + 1.0)

    if np.ndim(reflection) == 0:
        return complex(reflection)
    return reflection


def field_integrand(model: LayeredEarth, geometry: SurveyGeometry) -> Callable:
    """f(x) = x²·Im R_0(x/r)"""
    offset = geometry.offset

    def integrand(x):
        x = np.asarray(x, dtype=float)
        return x * x * np.imag(reflection_coefficient(model, x / offset))

    return integrand


def _orders(n: int, step: int) -> List[int]:
    orders = list(range(step, n + 1, step))
    if not orders or orders[-1] != n:
        orders.append(n)
    if len(orders) < 2:
        orders = [n - 1, n]
    return orders


def magnetic_field(
    model: LayeredEarth,
    geometry: SurveyGeometry,
    component: str = "hz",
    n: int = 60,
    tol: float = 1e-8,
    algorithm: str = "cramer",
    step: int = ORDER_STEP,
    verbose: bool = False,
) -> FieldResult:
    """
    磁場の虚部を次数を上げながら計算

    次数 step, 2·step, … , n の順に評価し、直前との差が tol 未満になったら止める。
    次数は少なくとも2つ評価する。係数は最大次数で一度だけ計算し、各次数では先頭を使う。
    係数計算が途中で破綻した場合は、破綻前の係数で評価できる次数まで進める。

    Args:
        model: 層状大地
        geometry: 送受信配置
        component: "hz" または "hrho"
        n: 最大次数 (≥ 2)
        tol: 収束判定の閾値 [A/m]
        algorithm: 係数計算アルゴリズム
        step: 次数の刻み
        verbose: 詳細出力

    Returns:
        FieldResult: 値・収束フラグ・履歴（破綻時はその位置も）

    Raises:
        EMFieldError: 引数が不正な場合
        BreakdownError: 破綻前の係数が2組に満たない場合
    """
    if component not in COMPONENTS:
        raise EMFieldError(f"未知の成分です: {component} (候補: {', '.join(COMPONENTS)})")
    if int(n) != n or n < 2:
        raise EMFieldError(f"次数は2以上である必要があります: {n}")
    if int(step) != step or step < 1:
        raise EMFieldError(f"次数の刻みは1以上である必要があります: {step}")

    nu, sign = COMPONENTS[component]
    params = WeightParams(nu, 0.0, geometry.c)
    integrand = field_integrand(model, geometry)
    factor = sign * geometry.prefactor

    breakdown = None
    try:
        coeffs = compute_coefficients(params, int(n), algorithm, verbose=verbose)
    except BreakdownError as e:
        if e.partial.n < 2:
            raise
        coeffs = e.partial
        breakdown = e.index
        if verbose:
            print(f"⚠️  {algorithm} が k={e.index} で破綻しました。次数 {coeffs.n} まで評価します")

    trace = []
    previous = None
    converged = False
    value = math.nan
    for order in _orders(coeffs.n, int(step)):
        value = factor * integrate_bessel(params, integrand, order, algorithm, coeffs=coeffs)
        difference = math.nan if previous is None else abs(value - previous)
        trace.append(FieldTraceRow(order=order, value=value, difference=difference))
        if verbose:
            print(f"  n={order:3d}: {value:.15e} (差 {difference:.2e})")
        if previous is not None and difference < tol:
            converged = True
            break
        previous = value

    if verbose:
        mark = "✓" if converged else "⚠️ "
        print(f"{mark} {component}: {value!r} (収束: {converged})")

    return FieldResult(value=value, converged=converged, trace=trace, breakdown=breakdown)


def hz_field(model: LayeredEarth, geometry: SurveyGeometry, n: int = 60, tol: float = 1e-8, **kwargs) -> FieldResult:
    """鉛直磁場 Im(H_z)"""
    return magnetic_field(model, geometry, "hz", n, tol, **kwargs)


def hrho_field(model: LayeredEarth, geometry: SurveyGeometry, n: int = 60, tol: float = 1e-8, **kwargs) -> FieldResult:
    """動径磁場 Im(H_ρ)"""
    return magnetic_field(model, geometry, "hrho", n, tol, **kwargs)


def oracle_field(
    model: LayeredEarth,
    geometry: SurveyGeometry,
    component: str = "hz",
    tol: float = 1e-10,
    verbose: bool = False,
) -> OracleResult:
    """
    同じ被積分関数を参照積分で評価した磁場

    |Im R_0| ≤ 1 なので包絡線は x²。tol は磁場 [A/m] の単位で与える。
    """
    if component not in COMPONENTS:
        raise EMFieldError(f"未知の成分です: {component}")
    nu, sign = COMPONENTS[component]
    factor = sign * geometry.prefactor
    params = WeightParams(nu, 0.0, geometry.c)

    result = reference_integral(
        params,
        field_integrand(model, geometry),
        tol=max(tol / abs(factor), 1e-13) if factor else 1e-12,
        power=2.0,
        verbose=verbose,
    )
    return OracleResult(
        value=factor * result.value,
        error_estimate=abs(factor) * result.error_estimate,
        panels=result.panels,
    )
