"""
cli.py - コマンドラインインターフェース

責務:
- サブコマンド rule / convergence / condition / moments / coeffs / em の解析
- 引数の検証（RunConfig）と、計算前の使用法エラー
- 結果の CSV / JSON 出力（17桁、標準出力またはファイル）
- 終了コード: 0 成功、1 使用法・入力エラー、2 係数計算の破綻

使用例:
    python -m modules.cli rule --nu 0 --alpha 0 --c 1 --n 1 --algorithm cramer
"""

import argparse
from contextlib import nullcontext, redirect_stdout
from dataclasses import dataclass
import json
from pathlib import Path
import sys
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from modules.emfields import EMFieldError, LayeredEarth, SurveyGeometry, magnetic_field
from modules.moments import MomentError, MomentKind, WeightParams, compute_moments
from modules.oracle import OracleError
from modules.quadrature import (
    QuadratureError,
    bessel_weight_rule,
    condition_report,
    convergence_table,
)
from modules.recurrence import ALGORITHMS, BreakdownError, RecurrenceError, coefficient_table
from modules.specfun import SpecfunError


class CLIUsageError(Exception):
    """コマンドライン引数が不正な場合の例外"""

    pass


FLOAT_FORMAT = "%.17g"
FORMATS = ("csv", "json")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIUsageError(message)


def _float_list(text: str) -> Tuple[float, ...]:
    if not text.strip():
        return ()
    try:
        return tuple(float(item) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"comma-separated numbers expected: {text!r}")


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(item) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"comma-separated integers expected: {text!r}")


def _algorithm_list(text: str) -> Tuple[str, ...]:
    names = tuple(item.strip() for item in text.split(","))
    unknown = [name for name in names if name not in ALGORITHMS]
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown algorithm: {', '.join(unknown)} (choose from {', '.join(ALGORITHMS)})"
        )
    return names


@dataclass(frozen=True)
class RunConfig:
    """
    検証済みの実行設定

    Attributes:
        subcommand: サブコマンド名
        params: 重みパラメータ（必要なサブコマンドのみ）
        その他: 各サブコマンドのフラグ
    """

    subcommand: str
    params: Optional[WeightParams] = None
    nu: Optional[float] = None
    alpha: Optional[float] = None
    c: Optional[float] = None
    n: int = 0
    algorithms: Tuple[str, ...] = ("cramer",)
    output_format: str = "csv"
    output: Optional[Path] = None
    verbose: bool = False
    gamma: float = 0.5
    exact: Optional[float] = None
    sizes: Tuple[int, ...] = ()
    kind: str = MomentKind.POWER.value
    count: int = 0
    scaled: bool = False
    sigma: Tuple[float, ...] = ()
    h: Tuple[float, ...] = ()
    height: float = 0.0
    offset: float = 0.0
    frequency: float = 0.0
    moment: float = 1.0
    component: str = "hz"
    tolerance: float = 1e-8

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        """
        argparse の結果を検証して RunConfig にする

        Raises:
            CLIUsageError: 値や組み合わせが不正な場合
        """
        values = {
            key: value
            for key, value in vars(args).items()
            if key in cls.__dataclass_fields__ and value is not None
        }
        if "output" in values:
            values["output"] = Path(values["output"])
        if "algorithm" in vars(args) and args.algorithm is not None:
            values["algorithms"] = args.algorithm

        command = args.subcommand
        needs_params = command in ("rule", "convergence", "condition", "coeffs") or (
            command == "moments" and args.kind in ("power", "core", "modified")
        )
        if needs_params:
            missing = [name for name in ("nu", "alpha", "c") if getattr(args, name, None) is None]
            if missing:
                raise CLIUsageError(f"missing required flags: {', '.join('--' + m for m in missing)}")
            try:
                values["params"] = WeightParams(args.nu, args.alpha, args.c)
            except MomentError as e:
                raise CLIUsageError(str(e))

        if command == "moments":
            if args.alpha is None:
                raise CLIUsageError("--alpha is required")
            if args.kind == "scaled_laguerre" and args.c is None:
                raise CLIUsageError("--c is required for scaled_laguerre")

        if command in ("rule", "convergence", "coeffs", "em") and values.get("n", 0) < 1:
            raise CLIUsageError("--n must be a positive integer")
        if command == "em" and values.get("n", 0) < 2:
            raise CLIUsageError("--n must be at least 2 for em")
        if command in ("rule", "em") and len(values.get("algorithms", ())) != 1:
            raise CLIUsageError(f"{command} accepts a single --algorithm")
        if command == "moments" and values.get("count", 0) < 1:
            raise CLIUsageError("--count must be a positive integer")
        if command == "condition" and (not values.get("sizes") or min(values["sizes"]) < 1):
            raise CLIUsageError("--k must list positive sizes")
        if command == "convergence" and values.get("gamma", 0.0) < 0:
            raise CLIUsageError("--gamma must be nonnegative")
        if command == "em":
            for name in ("height", "offset", "frequency"):
                if not values.get(name, 0.0) > 0:
                    raise CLIUsageError(f"--{name} must be positive")
            if len(values.get("h", ())) != len(values.get("sigma", ())) - 1:
                raise CLIUsageError("--h must have one entry fewer than --sigma")

        return cls(**values)


def build_parser() -> argparse.ArgumentParser:
    """引数パーサを作る"""
    parser = _ArgumentParser(
        prog="besselquad",
        description="Gaussian rules for x^alpha e^(-cx) [J_nu(x) + 1]",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    def common(sub, params_required=True):
        sub.add_argument("--nu", type=float, required=params_required, help="Bessel order nu >= 0")
        sub.add_argument("--alpha", type=float, required=params_required, help="exponent alpha > -1")
        sub.add_argument("--c", type=float, required=params_required, help="decay rate c > 0")
        sub.add_argument("--format", dest="output_format", choices=FORMATS, default="csv")
        sub.add_argument("--output", help="output file (default: standard output)")
        sub.add_argument("--verbose", action="store_true", help="progress on standard error")

    rule = subparsers.add_parser("rule", help="nodes and weights of the n-point rule")
    common(rule)
    rule.add_argument("--n", type=int, required=True)
    rule.add_argument("--algorithm", type=_algorithm_list, default=("cramer",))

    convergence = subparsers.add_parser("convergence", help="error sweep for f(x) = exp(-gamma x)")
    common(convergence)
    convergence.add_argument("--n", type=int, required=True, help="largest rule order")
    convergence.add_argument("--algorithm", type=_algorithm_list, default=ALGORITHMS)
    convergence.add_argument("--gamma", type=float, default=0.5)
    convergence.add_argument("--exact", type=float, help="exact value (default: closed form)")

    condition = subparsers.add_parser("condition", help="condition numbers of Q_k")
    common(condition)
    condition.add_argument("--k", dest="sizes", type=_int_list, required=True)

    moments = subparsers.add_parser("moments", help="moment tables")
    common(moments, params_required=False)
    moments.add_argument("--kind", choices=[kind.value for kind in MomentKind], default="power")
    moments.add_argument("--count", type=int, required=True)
    moments.add_argument("--scaled", action="store_true", help="store c^k times each value")

    coeffs = subparsers.add_parser("coeffs", help="recurrence coefficients per algorithm")
    common(coeffs)
    coeffs.add_argument("--n", type=int, required=True)
    coeffs.add_argument("--algorithm", type=_algorithm_list, default=ALGORITHMS)

    em = subparsers.add_parser("em", help="magnetic field of a layered earth")
    em.add_argument("--sigma", type=_float_list, required=True, help="conductivities S/m")
    em.add_argument("--h", type=_float_list, default=(), help="thicknesses m")
    em.add_argument("--height", type=float, required=True, help="dipole height m")
    em.add_argument("--offset", type=float, required=True, help="coil offset m")
    em.add_argument("--frequency", type=float, required=True, help="frequency Hz")
    em.add_argument("--moment", type=float, default=1.0, help="dipole moment A m^2")
    em.add_argument("--component", choices=("hz", "hrho"), default="hz")
    em.add_argument("--n", type=int, default=60)
    em.add_argument("--tol", dest="tolerance", type=float, default=1e-8)
    em.add_argument("--algorithm", type=_algorithm_list, default=("cramer",))
    em.add_argument("--format", dest="output_format", choices=FORMATS, default="csv")
    em.add_argument("--output")
    em.add_argument("--verbose", action="store_true")

    return parser


def _emit_text(text: str, config: RunConfig):
    if config.output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        config.output.parent.mkdir(parents=True, exist_ok=True)
        with open(config.output, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def _to_json(value):
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_table(frame: pd.DataFrame, config: RunConfig):
    """表を CSV または JSON（レコードの配列）で書き出す"""
    if config.output_format == "json":
        records = [
            {key: _to_json(value) for key, value in record.items()}
            for record in frame.to_dict(orient="records")
        ]
        _emit_text(json.dumps(records, indent=2) + "\n", config)
    else:
        _emit_text(
            frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n"), config
        )


def _progress(config: RunConfig):
    """verbose 時のライブラリ出力を標準エラーへ回す"""
    return redirect_stdout(sys.stderr) if config.verbose else nullcontext()


def cmd_rule(config: RunConfig) -> int:
    """n 点Gauss則を出力"""
    algorithm = config.algorithms[0]
    with _progress(config):
        rule = bessel_weight_rule(config.params, config.n, algorithm, verbose=config.verbose)

    if config.output_format == "json":
        payload = {
            "nu": config.params.nu,
            "alpha": config.params.alpha,
            "c": config.params.c,
            "algorithm": algorithm,
            "nodes": rule.nodes.tolist(),
            "weights": rule.weights.tolist(),
        }
        _emit_text(json.dumps(payload, indent=2) + "\n", config)
    else:
        frame = pd.DataFrame(
            {"index": np.arange(rule.n), "node": rule.nodes, "weight": rule.weights}
        )
        write_table(frame, config)
    return 0


def cmd_convergence(config: RunConfig) -> int:
    """収束表を出力（破綻は status 列に記録）"""
    with _progress(config):
        table = convergence_table(
            config.params,
            config.gamma,
            config.n,
            config.algorithms,
            exact=config.exact,
            verbose=config.verbose,
        )
    write_table(table, config)
    return 0


def cmd_condition(config: RunConfig) -> int:
    """κ₂(Q_k) の表を出力"""
    with _progress(config):
        report = condition_report(config.params, config.sizes, verbose=config.verbose)
    write_table(pd.DataFrame(report, columns=["k", "kappa2_Q"]), config)
    return 0


def cmd_moments(config: RunConfig) -> int:
    """モーメント表を出力"""
    with _progress(config):
        table = compute_moments(
            MomentKind(config.kind),
            config.count,
            params=config.params,
            alpha=config.alpha,
            c=config.c,
            scaled=config.scaled,
        )
    frame = pd.DataFrame({"k": np.arange(len(table)), "value": table.values})
    write_table(frame, config)
    return 0


def cmd_coeffs(config: RunConfig) -> int:
    """アルゴリズムごとの係数表を出力"""
    with _progress(config):
        table = coefficient_table(config.params, config.n, config.algorithms, verbose=config.verbose)
    write_table(table, config)
    return 0


def cmd_em(config: RunConfig) -> int:
    """磁場の次数ごとの履歴と最終値を出力"""
    try:
        model = LayeredEarth.from_frequency(config.sigma, config.h, config.frequency)
        geometry = SurveyGeometry(config.height, config.offset, config.moment)
    except EMFieldError as e:
        raise CLIUsageError(str(e))

    with _progress(config):
        result = magnetic_field(
            model,
            geometry,
            config.component,
            n=config.n,
            tol=config.tolerance,
            algorithm=config.algorithms[0],
            verbose=config.verbose,
        )

    rows = [
        {"order": row.order, "value": row.value, "difference": row.difference, "status": "trace"}
        for row in result.trace
    ]
    rows.append(
        {
            "order": result.trace[-1].order,
            "value": result.value,
            "difference": result.trace[-1].difference,
            "status": "converged" if result.converged else "not_converged",
        }
    )
    write_table(pd.DataFrame(rows, columns=["order", "value", "difference", "status"]), config)
    if result.breakdown is not None:
        print(
            f"breakdown: algorithm={config.algorithms[0]} index={result.breakdown} "
            f"(evaluated up to n={result.trace[-1].order})",
            file=sys.stderr,
        )
        if not result.converged:
            return 2
    return 0


COMMANDS = {
    "rule": cmd_rule,
    "convergence": cmd_convergence,
    "condition": cmd_condition,
    "moments": cmd_moments,
    "coeffs": cmd_coeffs,
    "em": cmd_em,
}


def main(argv=None) -> int:
    """
    コマンドラインのエントリポイント

    Returns:
        int: 終了コード (0 / 1 / 2)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = RunConfig.from_namespace(args)
        return COMMANDS[config.subcommand](config)
    except CLIUsageError as e:
        sys.stderr.write(parser.format_usage())
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BreakdownError as e:
        print(
            f"breakdown: algorithm={e.algorithm} index={e.index} ({e})",
            file=sys.stderr,
        )
        return 2
    except (
        MomentError,
        RecurrenceError,
        QuadratureError,
        OracleError,
        EMFieldError,
        SpecfunError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    exit(main())
