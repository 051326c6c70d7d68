"""
CSV, SVG and text emission for experiment results.
"""

import csv
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, TextIO, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ..core.exceptions import EmptyOutputError, OutputError  # noqa: E402
from ..core.models import CriterionReport, Level, ScatterRecord, TableRow  # noqa: E402

logger = logging.getLogger(__name__)

Destination = Union[str, Path, TextIO, None]

ALL_LEVELS = (Level.ONE, Level.ONE_AB, Level.TWO, Level.THREE, Level.FOUR)
SCATTER_HEADER = ["sample_id", "mode", "seed"] + [f"lambda_{level.column_suffix}" for level in ALL_LEVELS] + ["deviated"]
DEFAULT_AXES = (Level.TWO, Level.ONE_AB)


def format_number(value: float) -> str:
    return format(value, ".15g")


@contextmanager
def _open_destination(destination: Destination) -> Iterator[TextIO]:
    if destination is None or destination == "-":
        yield sys.stdout
        return
    if not isinstance(destination, (str, Path)):
        yield destination
        return
    path = Path(destination)
    try:
        with path.open("w", newline="", encoding="utf-8") as handle:
            yield handle
    except OSError as exc:
        raise OutputError(f"Cannot write {path}: {exc}") from exc


def _scatter_rows(records: Sequence[ScatterRecord]) -> List[List[str]]:
    rows = []
    for record in records:
        lambdas = [format_number(record.lambda_per_level[level]) if level in record.lambda_per_level else ""
                   for level in ALL_LEVELS]
        rows.append([str(record.sample_id), record.mode.value, str(record.seed), *lambdas,
                     "true" if record.deviated else "false"])
    return rows


def _table_rows(rows: Sequence[TableRow]) -> Tuple[List[str], List[List[str]]]:
    levels = [level for level in ALL_LEVELS if any(level in row.value_per_level for row in rows)]
    header = ["x", "quantum"] + [f"value_{level.column_suffix}" for level in levels]
    body = []
    for row in rows:
        values = [format_number(row.value_per_level[level]) if level in row.value_per_level else ""
                  for level in levels]
        body.append([format_number(row.x), format_number(row.quantum), *values])
    return header, body


def emit_csv(items: Sequence[Union[ScatterRecord, TableRow]], destination: Destination = None) -> None:
    """Write scatter records or table rows; the schema follows the item type."""
    if not items:
        raise EmptyOutputError("Nothing to write: empty result list")
    if isinstance(items[0], ScatterRecord):
        header, body = SCATTER_HEADER, _scatter_rows(items)
    else:
        header, body = _table_rows(items)
    with _open_destination(destination) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
    logger.info("Wrote %d rows to %s", len(body), destination if destination is not None else "stdout")


def emit_svg_scatter(records: Sequence[ScatterRecord], destination: Union[str, Path],
                     axes: Optional[Tuple[Level, Level]] = None) -> None:
    """Scatter of lambda at axes[1] against axes[0] with the diagonal; deviated points in red."""
    if not records:
        raise EmptyOutputError("Nothing to plot: empty record list")
    x_level, y_level = axes or DEFAULT_AXES
    missing = [level for level in (x_level, y_level)
               if any(level not in record.lambda_per_level for record in records)]
    if missing:
        raise OutputError(f"Records lack lambda at level(s) {', '.join(map(str, missing))}")

    xs = [record.lambda_per_level[x_level] for record in records]
    ys = [record.lambda_per_level[y_level] for record in records]
    low = min(min(xs), min(ys))
    high = max(max(xs), max(ys))
    pad = 0.05 * max(high - low, 1e-6)
    limits = (low - pad, high + pad)

    fig, ax = plt.subplots(figsize=(5, 5))
    try:
        ax.plot(limits, limits, color="0.6", linewidth=0.8, zorder=1)
        normal = [i for i, record in enumerate(records) if not record.deviated]
        deviated = [i for i, record in enumerate(records) if record.deviated]
        ax.scatter([xs[i] for i in normal], [ys[i] for i in normal], s=8, color="black", zorder=2)
        if deviated:
            ax.scatter([xs[i] for i in deviated], [ys[i] for i in deviated], s=8, color="red", zorder=3)
        ax.set_xlim(limits)
        ax.set_ylim(limits)
        ax.set_aspect("equal", adjustable="box")
        ax.set_xlabel(f"max lambda, level {x_level}")
        ax.set_ylabel(f"max lambda, level {y_level}")
        path = Path(destination)
        try:
            fig.savefig(path, format="svg")
        except OSError as exc:
            raise OutputError(f"Cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)
    logger.info("Wrote scatter plot (%d points, %d deviated) to %s", len(records), len(deviated), path)


def format_report(report: CriterionReport) -> str:
    """Criterion report as 'key = value' lines."""
    lines = []
    for name, grid in (("s_plus", report.s_plus), ("s_minus", report.s_minus)):
        for x in (0, 1):
            for y in (0, 1):
                lines.append(f"{name}_{x}{y} = {format_number(grid[x][y])}")
    lines.append(f"eq11_residual = {format_number(report.eq11_residual)}")
    lines.append(f"eq8_product = {format_number(report.eq8_product)}")
    lines.append(f"tlm_b_residual = {format_number(report.tlm_scaled_residual_b)}")
    lines.append(f"tlm_a_residual = {format_number(report.tlm_scaled_residual_a)}")
    for x in (0, 1):
        lines.append(f"d_b_{x} = {format_number(report.d_b[x])}")
    for y in (0, 1):
        lines.append(f"d_a_{y} = {format_number(report.d_a[y])}")
    flags = (
        ("branch_condition", report.branch_condition),
        ("eq11_satisfied", report.eq11_satisfied),
        ("eq8_satisfied", report.eq8_satisfied),
        ("tlm_b_satisfied", report.tlm_b_satisfied),
        ("tlm_a_satisfied", report.tlm_a_satisfied),
        ("satisfied", report.satisfied),
    )
    lines.extend(f"{key} = {'true' if value else 'false'}" for key, value in flags)
    return "\n".join(lines) + "\n"
