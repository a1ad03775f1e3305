"""Summary metrics over a result archive."""

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class MetricsReport:
    qd_score: float
    coverage: float
    best: Optional[float]
    elapsed_ms: int

    def as_row(self):
        best = "" if self.best is None else repr(self.best)
        return [repr(self.qd_score), repr(self.coverage), best,
                str(self.elapsed_ms)]

    def __str__(self):
        best = "n/a" if self.best is None else f"{self.best:.4f}"
        return (f"QD score {self.qd_score:.6g}  coverage {self.coverage:.4f}  "
                f"best {best}  time {self.elapsed_ms / 60000:.2f} min")


def summarize(result, min_f, elapsed_ms=0):
    """Metrics over a result archive.

    ``min_f`` is subtracted from every stored objective so that no solution
    lowers the score.
    """
    occupied = result.occupied.astype(bool)
    count = int(occupied.sum())
    if count == 0:
        return MetricsReport(0.0, 0.0, None, int(elapsed_ms))
    # fixed summation layout keeps the score monotone under insertion
    qd = float(np.where(occupied, result.objective - min_f, 0.0).sum())
    best = float(result.objective[occupied].max())
    return MetricsReport(qd, count / result.n_cells, best, int(elapsed_ms))
