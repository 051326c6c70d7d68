"""CSV, SVG and report emission."""

import io
import math

import pytest

from npaboundary.core.bell import criterion_report
from npaboundary.core.exceptions import EmptyOutputError, OutputError
from npaboundary.core.models import Level, SampleMode, ScatterRecord, TableRow
from npaboundary.experiments.output import (
    SCATTER_HEADER,
    emit_csv,
    emit_svg_scatter,
    format_number,
    format_report,
)


def _records(count: int):
    records = []
    for i in range(count):
        lam = 0.5 - 0.01 * i
        records.append(ScatterRecord(
            sample_id=i, mode=SampleMode.RANDOM_POINT, seed=7,
            lambda_per_level={Level.ONE_AB: lam + (0.1 if i % 3 == 0 else 0.0), Level.TWO: lam},
            deviated=i % 3 == 0,
        ))
    return records


class TestCsv:

    def test_scatter_schema(self, tmp_path):
        path = tmp_path / "scatter.csv"
        emit_csv(_records(500), path)
        lines = path.read_text().split("\n")
        assert lines[-1] == ""
        assert len(lines) - 1 == 501
        assert lines[0] == "sample_id,mode,seed,lambda_1,lambda_1ab,lambda_2,lambda_3,lambda_4,deviated"
        assert lines[0].split(",") == SCATTER_HEADER
        assert lines[1] == "0,random,7,,0.6,0.5,,,true"
        assert lines[2] == "1,random,7,,0.49,0.49,,,false"

    def test_table_schema(self):
        row = TableRow(x=0.0, quantum=2 * math.sqrt(2),
                       value_per_level={Level.TWO: 2.8284271247461903, Level.ONE_AB: 2.82842712474619})
        out = io.StringIO()
        emit_csv([row], out)
        header, line, end = out.getvalue().split("\n")
        assert header == "x,quantum,value_1ab,value_2"
        assert line == "0,2.82842712474619,2.82842712474619,2.82842712474619"
        assert end == ""

    def test_empty_input_creates_no_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        with pytest.raises(EmptyOutputError):
            emit_csv([], path)
        assert not path.exists()

    def test_unwritable_path(self, tmp_path):
        path = tmp_path / "missing" / "out.csv"
        with pytest.raises(OutputError, match="missing"):
            emit_csv(_records(2), path)

    def test_number_format(self):
        assert format_number(1.0) == "1"
        assert format_number(3.0173892213352712) == "3.01738922133527"


class TestSvg:

    def test_writes_square_plot(self, tmp_path):
        path = tmp_path / "scatter.svg"
        emit_svg_scatter(_records(20), path)
        text = path.read_text()
        assert text.lstrip().startswith("<?xml")
        assert "<svg" in text

    def test_empty(self, tmp_path):
        with pytest.raises(EmptyOutputError):
            emit_svg_scatter([], tmp_path / "none.svg")
        assert not (tmp_path / "none.svg").exists()

    def test_missing_level(self, tmp_path):
        with pytest.raises(OutputError):
            emit_svg_scatter(_records(3), tmp_path / "bad.svg", axes=(Level.THREE, Level.TWO))


class TestReport:

    def test_keys(self, chsh_realization):
        text = format_report(criterion_report(chsh_realization))
        pairs = dict(line.split(" = ") for line in text.strip().split("\n"))
        for key in ("s_plus_00", "s_plus_11", "s_minus_01", "eq11_residual", "eq8_product",
                    "tlm_b_residual", "tlm_a_residual", "d_b_0", "d_a_1", "branch_condition",
                    "eq11_satisfied", "eq8_satisfied", "tlm_b_satisfied", "tlm_a_satisfied"):
            assert key in pairs
        assert pairs["satisfied"] == "true"
        assert float(pairs["s_plus_00"]) == pytest.approx(1.0)
