"""
test_export_excel.py - Excel出力モジュールのテスト
"""

import pytest
import pandas as pd
from openpyxl import load_workbook
from modules.export_excel import NUMBER_FORMAT, ExportExcelError, export_to_excel, export_workbook


@pytest.fixture
def convergence_csv(tmp_path):
    """テスト用の収束表CSVを作成"""
    csv_file = tmp_path / "convergence.csv"
    df = pd.DataFrame(
        {
            "algorithm": ["cramer", "cramer", "chebyshev"],
            "n": [1, 2, 1],
            "approx": [1.2345678901234567, 1.0000000000000002, float("nan")],
            "status": ["ok", "ok", "breakdown@1"],
        }
    )
    df.to_csv(csv_file, index=False, encoding="utf-8", float_format="%.17g")
    return csv_file


@pytest.fixture
def condition_csv(tmp_path):
    """テスト用の条件数表CSVを作成"""
    csv_file = tmp_path / "condition.csv"
    pd.DataFrame({"k": [1, 5], "kappa2_Q": [1.0, 1.0123]}).to_csv(csv_file, index=False)
    return csv_file


def test_export_excel_basic(convergence_csv, tmp_path):
    """基本的なExcel出力が正しく動作する"""
    output_dir = tmp_path / "output"

    result = export_to_excel(convergence_csv, output_dir, verbose=False)

    assert result.exists()
    assert result.name == "convergence.xlsx"

    df = pd.read_excel(result, sheet_name="results", engine="openpyxl")
    assert len(df) == 3
    assert df["status"].tolist() == ["ok", "ok", "breakdown@1"]
    # 倍精度の値がそのまま残る
    assert df["approx"].iloc[0] == 1.2345678901234567
    assert df["approx"].iloc[1] == 1.0000000000000002
    assert pd.isna(df["approx"].iloc[2])


def test_export_excel_formatting(convergence_csv, tmp_path):
    """ヘッダーは太字で先頭行固定、浮動小数点列は指数表記"""
    result = export_to_excel(convergence_csv, tmp_path / "output", verbose=False)

    wb = load_workbook(result)
    ws = wb["results"]

    for cell in ws[1]:
        assert cell.font.bold is True
        assert cell.font.name == "游ゴシック"
        assert cell.font.size == 11
    assert ws.freeze_panes == "A2"

    # approx 列（C列）
    assert ws["C2"].number_format == NUMBER_FORMAT
    assert ws["A2"].font.name == "游ゴシック"


def test_export_excel_column_width(convergence_csv, tmp_path):
    """列幅は最小幅と最大幅の範囲に収まる"""
    result = export_to_excel(convergence_csv, tmp_path / "output", verbose=False)

    ws = load_workbook(result)["results"]
    for column in ws.columns:
        width = ws.column_dimensions[column[0].column_letter].width
        assert 10 <= width <= 50


def test_export_excel_file_not_found(tmp_path):
    """存在しないファイルを指定した場合、エラーが発生する"""
    with pytest.raises(ExportExcelError, match="入力ファイルが存在しません"):
        export_to_excel(tmp_path / "non_existent.csv", tmp_path / "output", verbose=False)


class TestExportWorkbook:
    """export_workbook のテスト"""

    def test_sheets_named_by_stem(self, convergence_csv, condition_csv, tmp_path):
        """正常系: CSVのファイル名がシート名になる"""
        output = tmp_path / "final" / "all_results.xlsx"

        result = export_workbook([convergence_csv, condition_csv], output, verbose=False)

        assert result == output
        wb = load_workbook(result)
        assert wb.sheetnames == ["convergence", "condition"]
        df = pd.read_excel(result, sheet_name="condition", engine="openpyxl")
        assert df["k"].tolist() == [1, 5]
        assert df["kappa2_Q"].tolist() == [1.0, 1.0123]

    def test_empty_inputs(self, tmp_path):
        """異常系: 入力が空"""
        with pytest.raises(ExportExcelError, match="入力ファイルがありません"):
            export_workbook([], tmp_path / "all.xlsx", verbose=False)

    def test_missing_input(self, convergence_csv, tmp_path):
        """異常系: 存在しない入力が混ざっている"""
        with pytest.raises(ExportExcelError, match="入力ファイルが存在しません"):
            export_workbook([convergence_csv, tmp_path / "missing.csv"], tmp_path / "all.xlsx", verbose=False)
        assert not (tmp_path / "all.xlsx").exists()
