"""
Bessel Weight Quadrature - Command Line Entry Point

サブコマンド形式のCLI（絵文字なし・Windows対応）
  rule / convergence / condition / moments / coeffs / em

Examples:
    python run_with_args.py rule --nu 0.9 --alpha 0.1 --c 0.1 --n 60 --algorithm cramer
    python run_with_args.py condition --nu 0.9 --alpha 0.1 --c 0.1 --k 5,10,15,20,25,30
"""

from pathlib import Path
import sys

# プロジェクトルートをPythonパスに追加
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from modules.cli import main


if __name__ == "__main__":
    exit(main())
