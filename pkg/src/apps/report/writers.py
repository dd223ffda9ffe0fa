"""
Machine-readable artefacts of nested sampling runs.

Every writer takes a binary sink (a file opened in "wb" mode,
`sys.stdout.buffer`, a BytesIO, ...) and leaves it open. Floats are written
with 17 significant digits so that parsing restores them exactly.
"""

import contextlib
import csv
import dataclasses
import io
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

from apps.core.exceptions import ReportError, TraceFormatError, TraceWriteError
from apps.diagnostics.rjd import rjd_histogram
from apps.report.models import (
    SEQUENCE_FIELDS,
    TRACE_FIELDS,
    TRACE_TYPES,
    SequenceRow,
    SequenceTable,
    TraceRecord,
)

logger = logging.getLogger(__name__)


def format_value(value):
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


@contextlib.contextmanager
def _text_sink(sink):
    """Text view of a binary sink that does not close it afterwards."""
    text = io.TextIOWrapper(sink, encoding="utf-8", newline="", write_through=True)
    try:
        yield text
    finally:
        text.flush()
        text.detach()


def _csv_writer(text):
    return csv.writer(text, lineterminator="\n")


@contextlib.contextmanager
def atomic_write(path):
    """
    Open `path` for binary writing through a temporary file in the same directory.

    The file only appears under its final name once the block completes
    without error; otherwise the temporary file is removed.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            yield handle
        os.replace(tmp_name, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp_name)
        raise


def trace_records(result):
    return [
        TraceRecord.from_iteration(
            record, result.problem_name, result.num_live, result.num_steps, result.seed
        )
        for record in result.records
    ]


def write_trace_records(records, sink):
    """
    Write trace lines, header first.

    Returns:
        int: Number of records written.

    Raises:
        TraceWriteError: The sink failed; `written` tells how far it got.
    """
    written = 0
    try:
        with _text_sink(sink) as text:
            writer = _csv_writer(text)
            writer.writerow(TRACE_FIELDS)
            for record in records:
                writer.writerow(
                    [format_value(getattr(record, name)) for name in TRACE_FIELDS]
                )
                written += 1
    except (OSError, ValueError) as err:
        raise TraceWriteError(f"trace write failed: {err}", written) from err
    return written


def write_trace(result, sink):
    """Write the iteration trace of `result`; returns the number of records."""
    return write_trace_records(trace_records(result), sink)


def _parse_field(name, raw):
    kind = TRACE_TYPES[name]
    if kind is str:
        return raw
    return kind(raw)


def read_trace(source):
    """
    Parse a trace written by `write_trace`.

    Args:
        source (BinaryIO): Binary stream positioned at the header.

    Returns:
        list[TraceRecord]

    Raises:
        TraceFormatError: Header mismatch, wrong number of columns,
            unparsable value or a final line without its newline
            (truncated file). The error carries the 1-based line number.
    """
    text = io.TextIOWrapper(source, encoding="utf-8", newline="")
    try:
        lines = text.read().split("\n")
    except UnicodeDecodeError as err:
        raise TraceFormatError(f"not UTF-8 text: {err}", 1) from err
    finally:
        text.detach()

    if lines[-1] != "":
        raise TraceFormatError("file is truncated (no final newline)", len(lines))
    lines.pop()
    if not lines:
        raise TraceFormatError("missing header", 1)
    if tuple(lines[0].split(",")) != TRACE_FIELDS:
        raise TraceFormatError(
            f"unexpected header, expected {','.join(TRACE_FIELDS)}", 1
        )

    records = []
    for line_number, row in enumerate(csv.reader(lines[1:]), start=2):
        if len(row) != len(TRACE_FIELDS):
            raise TraceFormatError(
                f"expected {len(TRACE_FIELDS)} fields, found {len(row)}", line_number
            )
        try:
            values = {
                name: _parse_field(name, raw) for name, raw in zip(TRACE_FIELDS, row)
            }
        except ValueError as err:
            raise TraceFormatError(str(err), line_number) from err
        records.append(TraceRecord(**values))
    return records


def write_trace_jsonl(result, sink):
    """One JSON object per trace record; returns the number of records."""
    count = 0
    with _text_sink(sink) as text:
        for record in trace_records(result):
            text.write(json.dumps(dataclasses.asdict(record)) + "\n")
            count += 1
    return count


def build_sequence_table(runs):
    """
    Collect the runs of a step-doubling sequence.

    Raises:
        ReportError: No runs, mixed problems or K, or steps that do not
            double from one row to the next.
    """
    if not runs:
        raise ReportError("a sequence table needs at least one run")
    problems = {run.problem_name for run in runs}
    if len(problems) > 1:
        raise ReportError(f"runs of different problems: {sorted(problems)}")
    nlive = {run.num_live for run in runs}
    if len(nlive) > 1:
        raise ReportError(f"runs with different numbers of live points: {sorted(nlive)}")

    rows = tuple(sorted((SequenceRow.from_result(run) for run in runs), key=_steps))
    validate_schedule([row.num_steps for row in rows])
    return SequenceTable(problem=problems.pop(), num_live=nlive.pop(), rows=rows)


def _steps(row):
    return row.num_steps


def validate_schedule(schedule):
    """Raise ReportError unless every entry is twice the previous one."""
    for previous, current in zip(schedule, schedule[1:]):
        if current != 2 * previous:
            raise ReportError(
                f"steps {list(schedule)} do not follow a doubling schedule"
            )


def write_sequence_table(runs, sink):
    """
    Write one CSV row per run and return the table.

    Columns: num_steps, seed, logz, logz_err, geometric_mean_rjd,
    frac_rjd_above_1, ks_p_value, wall_time_s.
    """
    table = build_sequence_table(runs)
    with _text_sink(sink) as text:
        writer = _csv_writer(text)
        writer.writerow(SEQUENCE_FIELDS)
        for row in table.rows:
            writer.writerow([format_value(getattr(row, name)) for name in SEQUENCE_FIELDS])
    return table


def write_histogram(records, bins_per_decade, sink):
    """
    Write the RJD histogram as (bin_low, bin_high, count) in RJD units.

    Returns:
        RjdHistogram
    """
    histogram = rjd_histogram(records, bins_per_decade)
    edges = histogram.edges()
    with _text_sink(sink) as text:
        writer = _csv_writer(text)
        writer.writerow(("bin_low", "bin_high", "count"))
        for low, high, count in zip(edges[:-1], edges[1:], histogram.counts):
            writer.writerow((format_value(low), format_value(high), int(count)))
    return histogram


def summary_data(result, true_logz=None, recommendation=None):
    """Flat description of a run; keys with empty values are left out."""
    summary = result.summary
    test = result.insertion_test
    data = {
        "problem": result.problem_name,
        "num_live": result.num_live,
        "num_steps": result.num_steps,
        "seed": result.seed,
        "num_iterations": result.num_iterations,
        "ncall": result.ncall,
        "radius_update_interval": result.radius_update_interval,
        "logz": result.logz,
        "logz_err": result.logz_err,
        "information": result.information,
        "true_logz": true_logz,
        "diagnostics": summary.as_dict() if summary else None,
        "insertion_order": (
            {
                "ks_statistic": test.ks_statistic,
                "p_value": test.p_value,
                "num_samples": test.num_samples,
            }
            if test
            else None
        ),
        "recommendation": recommendation.value if recommendation else None,
        "wall_time_s": result.wall_time_s,
    }
    return {key: value for key, value in data.items() if value is not None}


def write_summary_json(result, sink, true_logz=None, recommendation=None):
    data = summary_data(result, true_logz=true_logz, recommendation=recommendation)
    with _text_sink(sink) as text:
        text.write(json.dumps(data, ensure_ascii=False, indent=2) + "\n")
    return data


def write_weighted_samples(result, problem, sink):
    """
    Write dead and final live points with their normalised posterior weights.

    Columns: weight, the unit-cube coordinates u1..ud, then the physical
    parameters under their problem names.
    """
    samples_u = result.samples_u()
    weights = result.posterior_weights()
    theta = np.asarray(problem.prior_transform(samples_u), dtype=float)
    header = (
        ["weight"]
        + [f"u{i + 1}" for i in range(problem.ndim)]
        + list(problem.param_names)
    )
    with _text_sink(sink) as text:
        writer = _csv_writer(text)
        writer.writerow(header)
        for weight, u_row, theta_row in zip(weights, samples_u, theta):
            writer.writerow(
                [format_value(weight)]
                + [format_value(value) for value in u_row]
                + [format_value(value) for value in theta_row]
            )
    logger.debug("wrote %d weighted samples of %s", len(weights), problem.name)
    return len(weights)


def write_radius_scaling(rows, sink):
    """Write RadiusScalingRow-like records with their dataclass fields as columns."""
    rows = list(rows)
    if not rows:
        raise ReportError("no radius scaling rows to write")
    columns = [field.name for field in dataclasses.fields(rows[0])]
    with _text_sink(sink) as text:
        writer = _csv_writer(text)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(getattr(row, name)) for name in columns])
    return len(rows)
