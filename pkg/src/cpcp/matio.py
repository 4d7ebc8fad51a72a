"""MatrixMarket matrices and CSV / JSON-lines solver traces.

Masked matrices travel in coordinate format (1-based indices), dense
matrices in array format (column-major, per the MatrixMarket spec).
Values are written with %.17g so a save/load round trip is
bit-identical.  Parse failures report the file, line number and reason.
"""

import csv
import json

import numpy as np

from .iterates import SparseIterate
from .mask import ObservationMask
from .trace import IterationRecord, SolverTrace

_COORD_HEADER = "%%MatrixMarket matrix coordinate real general"
_ARRAY_HEADER = "%%MatrixMarket matrix array real general"

TRACE_COLUMNS = ["k", "objective", "dual_gap", "step_a", "step_b",
                 "rank", "nnz", "wall_nanos", "U_L", "U_S"]


class MatrixMarketError(ValueError):
    def __init__(self, path, lineno, reason):
        super().__init__(f"{path}:{lineno}: {reason}")
        self.path = path
        self.lineno = lineno
        self.reason = reason


def _fmt(x):
    return format(float(x), ".17g")


def save_matrix(path, data):
    """Write a matrix file.

    A dense ndarray goes to array format; a SparseIterate or an
    (ObservationMask, values) pair goes to coordinate format.
    """
    if isinstance(data, SparseIterate):
        data = (data.mask, data.values)
    if isinstance(data, tuple):
        mask, values = data
        values = mask._check_values(values)
        m, n = mask.shape
        with open(path, "w") as fh:
            fh.write(_COORD_HEADER + "\n")
            fh.write(f"{m} {n} {mask.nnz}\n")
            rows, cols = mask.rows, mask.cols
            for i, j, v in zip(rows, cols, values):
                fh.write(f"{i + 1} {j + 1} {_fmt(v)}\n")
        return
    dense = np.asarray(data, dtype=np.float64)
    if dense.ndim != 2:
        raise ValueError("dense matrix must be 2-D")
    m, n = dense.shape
    with open(path, "w") as fh:
        fh.write(_ARRAY_HEADER + "\n")
        fh.write(f"{m} {n}\n")
        for v in dense.T.ravel():  # array format is column-major
            fh.write(_fmt(v) + "\n")


def load_matrix(path):
    """Read a matrix file.

    Returns (ObservationMask, values) for coordinate files and a dense
    ndarray for array files.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MatrixMarketError(path, 1, "empty file")
    header = lines[0].strip()
    if header == _COORD_HEADER:
        coordinate = True
    elif header == _ARRAY_HEADER:
        coordinate = False
    else:
        raise MatrixMarketError(path, 1, f"unsupported header {header!r}")

    body = [(no, ln.strip()) for no, ln in enumerate(lines[1:], start=2)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixMarketError(path, len(lines), "missing size line")
    size_no, size_line = body[0]
    fields = size_line.split()

    if coordinate:
        if len(fields) != 3:
            raise MatrixMarketError(path, size_no, "size line must be 'm n nnz'")
        try:
            m, n, nnz = (int(f) for f in fields)
        except ValueError:
            raise MatrixMarketError(path, size_no, f"bad size line {size_line!r}") from None
        entries = body[1:]
        if len(entries) != nnz:
            raise MatrixMarketError(path, size_no,
                                    f"expected {nnz} entries, found {len(entries)}")
        rows = np.empty(nnz, dtype=np.int64)
        cols = np.empty(nnz, dtype=np.int64)
        vals = np.empty(nnz, dtype=np.float64)
        for t, (no, line) in enumerate(entries):
            parts = line.split()
            if len(parts) != 3:
                raise MatrixMarketError(path, no, f"expected 'i j value', got {line!r}")
            try:
                i, j, v = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise MatrixMarketError(path, no, f"malformed entry {line!r}") from None
            if not 1 <= i <= m or not 1 <= j <= n:
                raise MatrixMarketError(path, no, f"index ({i}, {j}) outside {m}x{n}")
            rows[t], cols[t], vals[t] = i - 1, j - 1, v
        try:
            mask = ObservationMask((m, n), rows, cols)
        except ValueError as exc:
            raise MatrixMarketError(path, size_no, str(exc)) from None
        # reorder values into the mask's row-major order
        order = np.argsort(rows * n + cols, kind="stable")
        return mask, vals[order]

    if len(fields) != 2:
        raise MatrixMarketError(path, size_no, "size line must be 'm n'")
    try:
        m, n = (int(f) for f in fields)
    except ValueError:
        raise MatrixMarketError(path, size_no, f"bad size line {size_line!r}") from None
    entries = body[1:]
    if len(entries) != m * n:
        raise MatrixMarketError(path, size_no,
                                f"expected {m * n} values, found {len(entries)}")
    vals = np.empty(m * n, dtype=np.float64)
    for t, (no, line) in enumerate(entries):
        try:
            vals[t] = float(line)
        except ValueError:
            raise MatrixMarketError(path, no, f"malformed value {line!r}") from None
    return vals.reshape((n, m)).T.copy()  # stored column-major


def export_trace(path, trace, fmt=None):
    """Write a trace as CSV (default) or JSON-lines (fmt='jsonl' or *.jsonl)."""
    if fmt is None:
        fmt = "jsonl" if str(path).endswith(".jsonl") else "csv"
    if fmt == "jsonl":
        with open(path, "w") as fh:
            for rec in trace:
                fh.write(json.dumps({c: getattr(rec, c) for c in TRACE_COLUMNS}) + "\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown trace format {fmt!r}")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for rec in trace:
            row = []
            for col in TRACE_COLUMNS:
                val = getattr(rec, col)
                if val is None:
                    row.append("")
                elif col in ("k", "rank", "nnz", "wall_nanos"):
                    row.append(str(int(val)))
                else:
                    row.append(_fmt(val))
            writer.writerow(row)


def load_trace(path, fmt=None):
    """Parse a trace written by export_trace."""
    if fmt is None:
        fmt = "jsonl" if str(path).endswith(".jsonl") else "csv"
    trace = SolverTrace()
    if fmt == "jsonl":
        with open(path) as fh:
            for line in fh:
                if line.strip():
                    trace.append(IterationRecord(**json.loads(line)))
        return trace
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRACE_COLUMNS:
            raise ValueError(f"{path}: unexpected trace header {header!r}")
        for row in reader:
            kwargs = {}
            for col, cell in zip(TRACE_COLUMNS, row):
                if cell == "":
                    kwargs[col] = None
                elif col in ("k", "rank", "nnz", "wall_nanos"):
                    kwargs[col] = int(cell)
                else:
                    kwargs[col] = float(cell)
            trace.append(IterationRecord(**kwargs))
    return trace
