"""CSV and manifest emission with strict formatting rules.

Data files are plain RFC-4180 CSV with LF endings and shortest
round-trip float formatting, written atomically so a crashed run never
leaves a half-written table.  Every table gets a JSON sidecar manifest
carrying the resolved parameters, seed, package version, and wall time.
NaN or infinite values in a table are treated as upstream bugs and
rejected; a deliberately empty cell is spelled None.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile

from . import __version__

__all__ = [
    "format_cell",
    "emit_csv",
    "emit_text",
    "read_csv",
    "manifest_path",
    "write_manifest",
]


def format_cell(value) -> str:
    """One CSV cell: shortest round-trip for floats, empty for None."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)):
        return str(value)
    x = float(value)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value {x!r} in output table")
    return repr(x)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_csv(path, header: list[str], rows) -> None:
    """Write a rectangular table; every row must match the header width."""
    lines = []
    width = len(header)
    for row in [list(header)] + [list(r) for r in rows]:
        if len(row) != width:
            raise ValueError(
                f"{path}: row of width {len(row)} against header of width {width}"
            )
        cells = [format_cell(c) for c in row]
        quoted = []
        for cell in cells:
            if any(ch in cell for ch in (',', '"', '\n', '\r')):
                cell = '"' + cell.replace('"', '""') + '"'
            quoted.append(cell)
        lines.append(",".join(quoted))
    _atomic_write(str(path), "\n".join(lines) + "\n")


def emit_text(path, values) -> None:
    """Write scalar values one per line (the loadable gain-file format)."""
    lines = [format_cell(v) for v in values]
    _atomic_write(str(path), "\n".join(lines) + "\n")


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    """Parse a table back as raw strings (header, rows)."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        parsed = list(reader)
    if not parsed:
        raise ValueError(f"{path}: empty file, expected at least a header")
    return parsed[0], parsed[1:]


def manifest_path(path) -> str:
    return str(path) + ".manifest.json"


def write_manifest(path, command: str, parameters: dict, seed, wall_time_s: float) -> None:
    """JSON sidecar next to a data file; keys sorted for stable diffs."""
    payload = {
        "command": command,
        "version": __version__,
        "seed": seed,
        "parameters": parameters,
        "wall_time_s": round(float(wall_time_s), 6),
    }
    _atomic_write(manifest_path(path), json.dumps(payload, indent=2, sort_keys=True) + "\n")
