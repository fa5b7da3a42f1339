"""
Bessel Weight Quadrature - Main Entry Point

数値実験パイプラインの統合実行
（条件数表・係数表・収束表・電磁場・Excel出力）
"""

from pathlib import Path
import sys
import time

# プロジェクトルートをPythonパスに追加
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

import pandas as pd

from modules.emfields import SURVEY_MODELS, magnetic_field, oracle_field
from modules.export_excel import export_to_excel, export_workbook
from modules.moments import WeightParams
from modules.quadrature import condition_report, convergence_table
from modules.recurrence import coefficient_table


FLOAT_FORMAT = "%.17g"

# 収束実験の重みパラメータ (ν, α, c)
CONVERGENCE_PARAMS = [
    (1.0, -0.5, 1.0),
    (0.5, 0.5, 0.2),
    (1.0, 0.5, 0.7),
    (1.0, 0.7, 0.3),
    (0.9, 0.1, 0.1),
    (1.5, 0.5, 0.2),
]
CONVERGENCE_GAMMA = 0.5
CONVERGENCE_NMAX = 60

# 電磁場の周波数 [Hz]
EM_FREQUENCY = 25.0


def format_elapsed_time(start_time):
    """
    経過時間を整形して返す
    """
    elapsed = time.time() - start_time
    minutes = int(elapsed // 60)
    seconds = int(elapsed % 60)
    return f"{minutes}分{seconds}秒"


def save_table(frame: pd.DataFrame, path: Path) -> Path:
    """結果表を17桁のCSVで保存"""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def phase_done(number, start_time):
    print("\n" + "=" * 70)
    print(f"✅ Phase {number} 完了 ⏱️  経過時間: {format_elapsed_time(start_time)}")
    print("=" * 70)


def main():
    """
    メイン処理
    """
    start_time = time.time()

    print("=" * 70)
    print("Bessel Weight Quadrature - Starting...")
    print("=" * 70)

    results_dir = project_root / "results"
    final_output_dir = project_root / "final_output"

    try:
        # Phase 1: 前処理付き行列の条件数
        print("\n[Phase 1] 条件数表の作成開始")
        print("-" * 70)

        params = WeightParams(0.9, 0.1, 0.1)
        print(f"📄 パラメータ: {params.label()}")
        report = condition_report(params, [5, 10, 15, 20, 25, 30], verbose=True)
        save_table(pd.DataFrame(report, columns=["k", "kappa2_Q"]), results_dir / "condition.csv")
        phase_done(1, start_time)

        # Phase 2: アルゴリズム別の係数表
        print("\n[Phase 2] 係数表の作成開始")
        print("-" * 70)

        table = coefficient_table(params, 40, verbose=True)
        save_table(table, results_dir / "coefficients.csv")
        for algorithm in ("chebyshev", "modified", "cramer"):
            status = table[f"{algorithm}_status"]
            broken = table.loc[status == "breakdown", "k"].tolist()
            mark = f"k={broken[0]} で破綻" if broken else "全係数を計算"
            print(f"  ├─ {algorithm}: {mark}")
        phase_done(2, start_time)

        # Phase 3: 収束表
        print("\n[Phase 3] 収束表の作成開始")
        print("-" * 70)

        frames = []
        for nu, alpha, c in CONVERGENCE_PARAMS:
            sweep_params = WeightParams(nu, alpha, c)
            print(f"🔍 {sweep_params.label()} ...", end=" ")
            frame = convergence_table(sweep_params, CONVERGENCE_GAMMA, CONVERGENCE_NMAX)
            frame.insert(0, "nu", nu)
            frame.insert(1, "alpha", alpha)
            frame.insert(2, "c", c)
            frames.append(frame)

            final = frame[(frame["algorithm"] == "cramer") & (frame["status"] == "ok")]
            if final.empty:
                print("⚠️  cramer の行なし")
            else:
                print(f"✓ (cramer 最終誤差 {final['abs_error'].iloc[-1]:.2e})")
        save_table(pd.concat(frames, ignore_index=True), results_dir / "convergence.csv")
        phase_done(3, start_time)

        # Phase 4: 電磁場
        print("\n[Phase 4] 電磁場計算開始")
        print("-" * 70)

        rows = []
        for name, survey in SURVEY_MODELS.items():
            model, geometry = survey.build(EM_FREQUENCY)
            print(f"\n🧲 {name} ({survey.component}, σ={survey.sigma}, H={survey.height})")
            result = magnetic_field(model, geometry, survey.component, n=60, tol=1e-8, verbose=True)
            reference = oracle_field(model, geometry, survey.component, tol=1e-10)
            for row in result.trace:
                rows.append(
                    {
                        "model": name,
                        "order": row.order,
                        "value": row.value,
                        "difference": row.difference,
                        "oracle": reference.value,
                        "converged": result.converged,
                    }
                )
            print(f"  └─ 参照積分との差: {abs(result.value - reference.value):.2e}")
        save_table(pd.DataFrame(rows), results_dir / "em_fields.csv")
        phase_done(4, start_time)

        # Phase 5: Excel最終出力
        print("\n[Phase 5] Excel最終出力処理開始")
        print("-" * 70)

        result_files = sorted(results_dir.glob("*.csv"))
        print(f"📄 対象ファイル数: {len(result_files)}")
        print("📊 Excel出力中...", end=" ")
        for result_file in result_files:
            export_to_excel(result_file, final_output_dir, verbose=False)
        export_workbook(result_files, final_output_dir / "all_results.xlsx", verbose=False)
        print(f"✓ ({len(result_files) + 1}ファイル)")
        phase_done(5, start_time)

        total_time = format_elapsed_time(start_time)
        print(f"🎉 全処理完了！ ⏱️  合計実行時間: {total_time}")
        print("=" * 70)

    except Exception as e:
        print("\n" + "=" * 70)
        print(f"❌ エラーが発生しました: {str(e)}")
        import traceback

        traceback.print_exc()
        print("=" * 70)
        return 1

    return 0


if __name__ == "__main__":
    exit(main())
