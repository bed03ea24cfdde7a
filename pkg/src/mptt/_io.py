"""Serialization helpers shared by the result types and the CLI."""

import csv
import io
import json
import math
import os
import tempfile

# Tables, fit records and plot data are written at this many significant
# digits so that diffs between runs are stable.
SIG_DIGITS = 12


def fmt_float(x):
    """Format a number for CSV output at the fixed table precision."""
    if x is None:
        return "NA"
    x = float(x)
    if math.isnan(x):
        return "NA"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{SIG_DIGITS}g")


def json_float(x):
    """Round to the table precision; non-finite values become strings."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return float(format(x, f".{SIG_DIGITS}g"))


def jsonable(obj):
    """Recursively convert numpy scalars, tuples and floats for json.dumps."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "item") and not hasattr(obj, "__len__"):
        obj = obj.item()
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return json_float(obj)
    if hasattr(obj, "tolist"):
        return jsonable(obj.tolist())
    return obj


def dumps_json(obj):
    return json.dumps(jsonable(obj), indent=2, sort_keys=False, allow_nan=False) + "\n"


def rows_to_csv(header, rows):
    """Render rows to CSV text; floats use the fixed table precision."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [fmt_float(v) if isinstance(v, float) or v is None else _cell(v) for v in row]
        )
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if hasattr(v, "item"):
        v = v.item()
        if isinstance(v, float):
            return fmt_float(v)
        if isinstance(v, bool):
            return "true" if v else "false"
    return str(v)


def atomic_write(path, text):
    """Write ``text`` to ``path`` via a temp file in the same directory + rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
