"""Per-iteration solver records."""

from dataclasses import dataclass
from typing import Optional


@dataclass
class IterationRecord:
    k: int
    objective: float
    dual_gap: Optional[float] = None
    step_a: Optional[float] = None
    step_b: Optional[float] = None
    rank: Optional[int] = None
    nnz: Optional[int] = None
    wall_nanos: Optional[int] = None
    U_L: Optional[float] = None
    U_S: Optional[float] = None


class SolverTrace:
    """Ordered iteration records (k strictly increasing from 0)."""

    def __init__(self, records=None):
        self.records = []
        for rec in records or []:
            self.append(rec)

    def append(self, record):
        expected = self.records[-1].k + 1 if self.records else 0
        if record.k != expected:
            raise ValueError(f"iteration index {record.k} out of order, expected {expected}")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def __iter__(self):
        return iter(self.records)

    def __eq__(self, other):
        if not isinstance(other, SolverTrace):
            return NotImplemented
        return self.records == other.records

    def objectives(self):
        return [r.objective for r in self.records]

    def gaps(self):
        """(k, gap) pairs for records where the gap was computed."""
        return [(r.k, r.dual_gap) for r in self.records if r.dual_gap is not None]

    def final(self):
        return self.records[-1]
