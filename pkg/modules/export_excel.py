"""
Excel出力モジュール（xlsxwriter版）

results/*.csv（収束表・係数表・条件数表・電磁場履歴）を Excel形式で出力
- フォント: 游ゴシック 11pt
- ヘッダー: 太字、先頭行固定
- 数値: 指数表記 17桁（倍精度をそのまま残す）
- 列幅: 自動調整
"""

from pathlib import Path
from typing import Iterable, Union

import pandas as pd


class ExportExcelError(Exception):
    """Excel出力処理でのエラー"""

    pass


NUMBER_FORMAT = "0.0000000000000000E+00"
# 指数表記の表示幅
NUMBER_WIDTH = len("-1.0000000000000000E+00")
SHEET_NAME_LIMIT = 31


def _write_sheet(writer, df: pd.DataFrame, sheet_name: str, font_name, font_size, min_width, max_width):
    df.to_excel(writer, index=False, sheet_name=sheet_name)
    workbook = writer.book
    worksheet = writer.sheets[sheet_name]

    header_format = workbook.add_format(
        {"font_name": font_name, "font_size": font_size, "bold": True}
    )
    text_format = workbook.add_format({"font_name": font_name, "font_size": font_size})
    number_format = workbook.add_format(
        {"font_name": font_name, "font_size": font_size, "num_format": NUMBER_FORMAT}
    )

    for col_num, value in enumerate(df.columns.values):
        worksheet.write(0, col_num, value, header_format)
    worksheet.freeze_panes(1, 0)

    for i, col in enumerate(df.columns):
        if pd.api.types.is_float_dtype(df[col]):
            column_len = NUMBER_WIDTH
            cell_format = number_format
        else:
            column_len = df[col].astype(str).str.len().max()
            column_len = 0 if pd.isna(column_len) else column_len
            cell_format = text_format
        column_len = max(column_len, len(str(col)))

        adjusted_width = min(max(column_len + 2, min_width), max_width)
        worksheet.set_column(i, i, adjusted_width, cell_format)


def export_to_excel(
    input_file: Union[str, Path],
    output_dir: Union[str, Path],
    font_name: str = "游ゴシック",
    font_size: int = 11,
    min_width: int = 10,
    max_width: int = 50,
    verbose: bool = True,
) -> Path:
    """
    結果CSVを1シートのExcelファイルとして出力

    Args:
        input_file: 入力CSVファイルのパス
        output_dir: 出力先ディレクトリ
        font_name: フォント名
        font_size: フォントサイズ
        min_width: 列の最小幅
        max_width: 列の最大幅
        verbose: 詳細ログを出力するか

    Returns:
        Path: 出力されたExcelファイルのPath

    Raises:
        ExportExcelError: Excel出力に失敗した場合

    Examples:
        >>> output = export_to_excel(Path("results/convergence.csv"), Path("final_output"))
        >>> print(output)
        final_output/convergence.xlsx
    """
    input_path = Path(input_file)
    output_dir = Path(output_dir)

    if not input_path.exists():
        raise ExportExcelError(f"入力ファイルが存在しません: {input_path}")

    output_dir.mkdir(parents=True, exist_ok=True)
    output_path = output_dir / (input_path.stem + ".xlsx")

    try:
        df = pd.read_csv(input_path, encoding="utf-8")

        if verbose:
            print(f"  📄 入力: {input_path.name} ({len(df)}行)")

        with pd.ExcelWriter(output_path, engine="xlsxwriter") as writer:
            _write_sheet(writer, df, "results", font_name, font_size, min_width, max_width)

        if verbose:
            print(f"  💾 出力: {output_path}")

        return output_path

    except Exception as e:
        raise ExportExcelError(f"Excel出力に失敗しました: {e}")


def export_workbook(
    input_files: Iterable[Union[str, Path]],
    output_path: Union[str, Path],
    font_name: str = "游ゴシック",
    font_size: int = 11,
    min_width: int = 10,
    max_width: int = 50,
    verbose: bool = True,
) -> Path:
    """
    複数の結果CSVを1つのExcelファイルにまとめる（ファイル名をシート名にする）

    Raises:
        ExportExcelError: 入力が空・存在しない、または出力に失敗した場合
    """
    input_paths = [Path(p) for p in input_files]
    if not input_paths:
        raise ExportExcelError("入力ファイルがありません")
    for path in input_paths:
        if not path.exists():
            raise ExportExcelError(f"入力ファイルが存在しません: {path}")

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    try:
        with pd.ExcelWriter(output_path, engine="xlsxwriter") as writer:
            for path in input_paths:
                df = pd.read_csv(path, encoding="utf-8")
                sheet_name = path.stem[:SHEET_NAME_LIMIT]
                _write_sheet(writer, df, sheet_name, font_name, font_size, min_width, max_width)
                if verbose:
                    print(f"  ✓ シート {sheet_name} ({len(df)}行)")
    except Exception as e:
        raise ExportExcelError(f"Excel出力に失敗しました: {e}")

    if verbose:
        print(f"  💾 出力: {output_path}")
    return output_path
