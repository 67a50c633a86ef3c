import csv
import hashlib
import io
import json
import os
import sys
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import SIG_DIGITS
from .logger import setup_logger

logger = setup_logger("reports")

SECTION_HEADER = ("sigma", "x", "v", "u", "energy_residual")
FULL_HEADER = ("sigma", "rho", "v", "sx", "sy", "sz", "wx", "wy", "wz", "energy_residual")
DIGEST_SUFFIX = ".sha256"


class ReportError(Exception):
    pass


class IntegrityError(ReportError):
    pass


def format_float(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.{SIG_DIGITS}g}"


def _normalize(obj):
    """Floats rounded through format_float so JSON output is byte-stable."""
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not np.isfinite(value):
            return str(value)
        return float(format_float(value))
    return obj


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _emit(text: str, path: Optional[str]):
    """Writes to `path` with a sha256 sidecar, or to stdout when path is None or '-'."""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    data = text.encode("utf-8")
    try:
        directory = os.path.dirname(os.path.abspath(path))
        if not os.path.exists(directory):
            os.makedirs(directory)
        with open(path, "wb") as f:
            f.write(data)
        with open(path + DIGEST_SUFFIX, "w", encoding="utf-8") as f:
            f.write(f"{digest(data)}  {os.path.basename(path)}\n")
    except OSError as e:
        logger.error(f"Failed to write report {path}: {e}")
        raise ReportError(f"Cannot write {path}") from e
    logger.info(f"Wrote {path} ({len(data)} bytes)")


def write_json(obj, path: Optional[str] = None) -> str:
    text = json.dumps(_normalize(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    _emit(text, path)
    return text


def write_csv(header: Sequence[str], rows: Iterable[Sequence], path: Optional[str] = None,
              comments: Sequence[str] = ()) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    for line in comments:
        buffer.write(f"# {line}\n")
    text = buffer.getvalue()
    _emit(text, path)
    return text


def write_trajectory_csv(sigma: np.ndarray, states: np.ndarray, residuals: Optional[np.ndarray] = None,
                         events: Sequence[Tuple[float, str]] = (), path: Optional[str] = None,
                         full: bool = False) -> str:
    """
    One row per accepted step; events follow as `# event,<sigma>,<kind>` lines.
    """
    header = FULL_HEADER if full else SECTION_HEADER
    width = len(header) - 2
    states = np.asarray(states, dtype=float)
    if states.shape[1] != width:
        raise ReportError(f"Expected {width} state columns for {'full' if full else 'section'} runs, "
                          f"got {states.shape[1]}")
    residuals = np.zeros(len(sigma)) if residuals is None else residuals
    rows = [[float(t), *map(float, y), float(r)] for t, y, r in zip(sigma, states, residuals)]
    comments = [f"event,{format_float(t)},{kind}" for t, kind in events]
    return write_csv(header, rows, path, comments)


def read_trajectory_csv(path: str) -> Tuple[List[str], np.ndarray, List[Tuple[float, str]]]:
    """Inverse of write_trajectory_csv: (header, data rows, events)."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        logger.error(f"Failed to read {path}: {e}")
        raise ReportError(f"Cannot read {path}") from e
    if not lines:
        raise ReportError(f"{path} is empty")
    header = lines[0].split(",")
    rows, events = [], []
    for line in lines[1:]:
        if line.startswith("# event,"):
            _, t, kind = line[2:].split(",", 2)
            events.append((float(t), kind))
        elif line and not line.startswith("#"):
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError as e:
                raise ReportError(f"Malformed row in {path}: {line}") from e
    data = np.array(rows) if rows else np.zeros((0, len(header)))
    logger.debug(f"Read {len(rows)} rows and {len(events)} events from {path}")
    return header, data, events


def verify_report(path: str) -> str:
    """
    Recomputes the SHA-256 of `path` and compares it to the sidecar.

    :return: the verified hex digest
    """
    try:
        with open(path, "rb") as f:
            data = f.read()
        with open(path + DIGEST_SUFFIX, "r", encoding="utf-8") as f:
            expected = f.read().split()[0]
    except (OSError, IndexError) as e:
        logger.error(f"Cannot verify {path}: {e}")
        raise ReportError(f"Missing report or digest for {path}") from e
    actual = digest(data)
    if actual != expected:
        logger.error(f"Hash mismatch for {path}! Potential corruption or manual edit.")
        raise IntegrityError(f"Digest verification failed for {path}")
    logger.debug(f"Verified {path}: {actual}")
    return actual


def bound_table_markdown(reports) -> str:
    lines = ["| name | step | direction | computed | reference | diff | status |",
             "|---|---|---|---|---|---|---|"]
    for r in reports:
        lines.append(f"| {r.name} | {r.step} | {r.direction} | {format_float(r.computed)} | "
                     f"{format_float(r.reference)} | {format_float(r.difference)} | {r.status} |")
    return "\n".join(lines) + "\n"


def bound_rows(reports) -> Tuple[Tuple[str, ...], List[list]]:
    header = ("name", "step", "direction", "computed", "reference", "diff", "status")
    rows = [[r.name, r.step, r.direction, r.computed, r.reference, r.difference, r.status] for r in reports]
    return header, rows
