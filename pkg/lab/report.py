"""CSV / JSON report emission. Column order is the ReportRow field order."""

import csv
import io
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from lab.sweep import COLUMNS, ReportRow

log = logging.getLogger(__name__)

SCHEMA = "evencycle.report/1"
FORMATS = ("csv", "json")


def _cell(key, value):
    if value is None:
        return ""
    if key == "witness":
        return " ".join(str(x) for x in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return value


def format_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        d = asdict(row)
        writer.writerow([_cell(c, d[c]) for c in COLUMNS])
    return buf.getvalue()


def format_json(rows, summary=None):
    out = {
        "schema": SCHEMA,
        "columns": list(COLUMNS),
        "summary": summary or {},
        "rows": [{**asdict(r), "witness": list(r.witness) if r.witness is not None else None} for r in rows],
    }
    return json.dumps(out, indent=2) + "\n"


def emit_report(rows, path, fmt="csv", summary=None):
    """Write rows to path ("-" for stdout)."""
    if fmt not in FORMATS:
        raise ValueError(f"report format must be one of {', '.join(FORMATS)}, got {fmt!r}")
    text = format_csv(rows) if fmt == "csv" else format_json(rows, summary)
    if str(path) == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
    log.info("wrote %d rows to %s (%s)", len(rows), path, fmt)


def load_report(path):
    """Re-read a JSON report: (rows, summary)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("schema") != SCHEMA:
        raise ValueError(f"{path}: unsupported report schema {data.get('schema')!r}")
    rows = []
    for d in data["rows"]:
        if d.get("witness") is not None:
            d = {**d, "witness": tuple(d["witness"])}
        rows.append(ReportRow(**d))
    return rows, data.get("summary", {})
