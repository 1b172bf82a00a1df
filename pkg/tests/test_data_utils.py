import io
import json

import pandas as pd
import pytest

from core.capacity import bounds_report
from core.errors import InputValidationError, UnsupportedSqueezingError
from core.state import REPORT_COLUMNS, ChannelParams
from utils.data_utils import TableWriter, read_squeezing_file, read_table
from utils.report_templates import summary_builder


@pytest.fixture
def records():
    params = ChannelParams.nearest_neighbor(3, 0.7, 0.5, 0.1)
    return [bounds_report(params, N).to_record() for N in (0.5, 1.0)]


def test_read_squeezing_file(tmp_path):
    path = tmp_path / "z.txt"
    path.write_text("# nearest neighbour\n0 0.1\n0.1 0\n")
    assert read_squeezing_file(str(path)).n == 2


def test_read_squeezing_file_errors(tmp_path):
    with pytest.raises(InputValidationError):
        read_squeezing_file(str(tmp_path / "missing.txt"))
    path = tmp_path / "bad.txt"
    path.write_text("0 0.1\n0.3 0\n")
    with pytest.raises(UnsupportedSqueezingError):
        read_squeezing_file(str(path))


def test_csv_round_trip_keeps_twelve_digits(tmp_path, records):
    out = tmp_path / "table.csv"
    TableWriter("csv").write(records, str(out))
    frame = read_table(str(out))
    assert list(frame.columns) == REPORT_COLUMNS
    for column in ("s0", "baseline", "upper_output"):
        for written, original in zip(frame[column], (r[column] for r in records)):
            assert written == pytest.approx(original, rel=1e-11)


def test_jsonl_lines(records):
    stream = io.StringIO()
    TableWriter("jsonl").write(records, stream=stream)
    lines = stream.getvalue().splitlines()
    assert len(lines) == 2
    first = json.loads(lines[0])
    assert list(first) == REPORT_COLUMNS
    assert first["capacity_status"] == "conjectured"
    assert first["lower"] == pytest.approx(records[0]["lower"], rel=1e-11)


def test_unknown_format_rejected():
    with pytest.raises(InputValidationError):
        TableWriter("xlsx")


def test_frame_column_order(records):
    frame = TableWriter().to_frame(records)
    assert isinstance(frame, pd.DataFrame)
    assert list(frame.columns) == REPORT_COLUMNS


def test_verify_template_renders_failures():
    text = summary_builder.render_template(
        "verify", n=2, eta=0.7, M=0.5, N=1.0, seed=0, passed=False, failed=["commutation"],
        checks=[
            {"name": "commutation", "deviation": 1e-3, "threshold": 1e-10, "passed": False, "skipped": False,
             "detail": ""},
            {"name": "oracle_mean", "deviation": 0.0, "threshold": 1e-6, "passed": True, "skipped": True,
             "detail": "oracle disabled"},
        ],
    )
    assert "FAIL" in text
    assert "SKIP  oracle disabled" in text
    assert text.strip().endswith("result: FAIL (commutation)")


def test_unknown_template_rejected():
    with pytest.raises(ValueError):
        summary_builder.render_template("missing")
