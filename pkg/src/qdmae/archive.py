"""Soft (annealed) archive and the separately tracked result archive."""

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class SolutionRecord:
    solution: np.ndarray
    objective: float
    measures: np.ndarray


@dataclass(frozen=True)
class InsertResult:
    improvement: float
    accepted: bool
    cell: int


class GridSpec:
    """Uniform grid over a box in measure space, row-major cell order."""

    def __init__(self, dims, lower, upper):
        self.dims = tuple(int(d) for d in dims)
        self.lower = np.asarray(lower, dtype=np.float64)
        self.upper = np.asarray(upper, dtype=np.float64)
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError("every grid dimension needs at least one cell")
        if self.lower.shape != (len(self.dims),) or \
                self.upper.shape != (len(self.dims),):
            raise ValueError("bounds must match the number of grid dimensions")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("bounds must be finite")
        if not np.all(self.lower < self.upper):
            raise ValueError("lower bounds must be strictly below upper bounds")
        self._dims_arr = np.array(self.dims, dtype=np.int64)
        self._width = self.upper - self.lower

    @property
    def n_cells(self):
        return int(np.prod(self.dims))

    @property
    def measure_dim(self):
        return len(self.dims)

    def cell_indices(self, measures):
        """Flat cell index for each row of ``measures``.

        Measures outside the bounds are clipped into the boundary cells; a
        measure equal to the upper bound lands in the last cell.
        """
        measures = np.asarray(measures, dtype=np.float64)
        if measures.ndim == 1:
            measures = measures[None, :]
        if measures.shape[1] != self.measure_dim:
            raise ValueError(
                f"expected {self.measure_dim} measures, got {measures.shape[1]}")
        if not np.all(np.isfinite(measures)):
            raise ValueError("measures must be finite")
        scaled = (measures - self.lower) / self._width * self._dims_arr
        idx = np.clip(np.floor(scaled).astype(np.int64), 0, self._dims_arr - 1)
        return np.ravel_multi_index(idx.T, self.dims).astype(np.int64)

    def cell_index(self, measures):
        return int(self.cell_indices(np.asarray(measures, dtype=np.float64))[0])

    def unravel(self, cell):
        return np.unravel_index(cell, self.dims)


def cell_index(spec, measures):
    return spec.cell_index(measures)


class _GridStore:
    """Per-cell objective and occupancy, with lazily allocated solution rows."""

    def __init__(self, spec):
        self.spec = spec
        m = spec.n_cells
        self.objective = np.zeros(m)
        self.occupied = np.zeros(m, dtype=np.uint8)
        self.measures = np.zeros((m, spec.measure_dim))
        self.solutions = None

    def _ensure_solutions(self, dim):
        if self.solutions is None:
            self.solutions = np.zeros((self.spec.n_cells, dim))
        elif self.solutions.shape[1] != dim:
            raise ValueError(
                f"solution dimension {dim} does not match archive "
                f"dimension {self.solutions.shape[1]}")

    def __len__(self):
        return int(self.occupied.sum())

    @property
    def n_cells(self):
        return self.spec.n_cells

    def occupied_cells(self):
        return np.flatnonzero(self.occupied)

    def record(self, cell):
        if not self.occupied[cell]:
            return None
        return SolutionRecord(self.solutions[cell].copy(),
                              float(self.objective[cell]),
                              self.measures[cell].copy())

    def snapshot(self):
        """``(cell, SolutionRecord)`` pairs in increasing cell order."""
        return [(int(c), self.record(c)) for c in self.occupied_cells()]


class SoftArchive(_GridStore):
    """Archive whose cells carry acceptance thresholds.

    A solution enters a cell when its objective strictly exceeds the cell
    threshold, and the threshold then moves toward the objective by a
    fraction ``alpha``.
    """

    def __init__(self, spec, alpha, min_f):
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        super().__init__(spec)
        self.alpha = float(alpha)
        self.min_f = float(min_f)
        self.threshold = np.full(spec.n_cells, self.min_f)

    def random_elite(self, rng):
        cells = self.occupied_cells()
        if cells.size == 0:
            raise IndexError("cannot draw an elite from an empty archive")
        return self.record(int(cells[rng.integers(cells.size)]))


class ResultArchive(_GridStore):
    """Best objective ever seen per cell; the basis of all metrics.

    A cell is first filled only by a solution the paired soft archive
    accepted, so both archives always cover the same cells and every stored
    objective exceeds ``min_f``.
    """


def _last_per_cell(mask, cells):
    """Indices of the last masked entry for each distinct cell."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return idx
    rev = idx[::-1]
    _, first = np.unique(cells[rev], return_index=True)
    return rev[first]


@dataclass
class BatchInsertResult:
    improvements: np.ndarray
    accepted: np.ndarray
    cells: np.ndarray
    result_improved: np.ndarray

    def __getitem__(self, i):
        return InsertResult(float(self.improvements[i]),
                            bool(self.accepted[i]), int(self.cells[i]))

    def __len__(self):
        return len(self.improvements)


def insert_batch(soft, result, solutions, objectives, measures):
    """Insert solutions in order, returning their improvement values.

    Rows whose objective or measures are not finite are skipped: they get
    improvement ``-inf``, cell ``-1`` and are never stored.
    """
    solutions = np.asarray(solutions, dtype=np.float64)
    objectives = np.asarray(objectives, dtype=np.float64)
    measures = np.asarray(measures, dtype=np.float64)
    if solutions.ndim == 1:
        solutions = solutions[None, :]
    objectives = np.atleast_1d(objectives)
    if measures.ndim == 1:
        measures = measures[None, :]
    size = len(solutions)
    if objectives.shape != (size,) or len(measures) != size:
        raise ValueError("batch arrays differ in length")
    if soft.spec is not result.spec and soft.spec.dims != result.spec.dims:
        raise ValueError("soft and result archives use different grids")

    valid = np.isfinite(objectives) & np.all(np.isfinite(measures), axis=1)
    cells = np.full(size, -1, dtype=np.int64)
    if valid.any():
        cells[valid] = soft.spec.cell_indices(measures[valid])
    soft._ensure_solutions(solutions.shape[1])
    result._ensure_solutions(solutions.shape[1])

    deltas, accepted, improved, prev = kernels.insert_batch(
        cells, np.ascontiguousarray(objectives), valid.astype(np.uint8),
        soft.alpha, soft.threshold, soft.objective, soft.occupied,
        result.objective, result.occupied)

    writers = _last_per_cell(accepted, cells)
    if writers.size:
        soft.solutions[cells[writers]] = solutions[writers]
        soft.measures[cells[writers]] = measures[writers]
    # later improvements in a batch always carry the higher objective
    writers = _last_per_cell(improved, cells)
    if writers.size:
        result.solutions[cells[writers]] = solutions[writers]
        result.measures[cells[writers]] = measures[writers]

    return BatchInsertResult(deltas, accepted.astype(bool), cells,
                             improved.astype(bool))


def insert(soft, result, record):
    """Insert one :class:`SolutionRecord`; non-finite inputs raise."""
    objective = float(record.objective)
    measures = np.asarray(record.measures, dtype=np.float64)
    if not np.isfinite(objective) or not np.all(np.isfinite(measures)):
        raise ValueError("objective and measures must be finite")
    return insert_batch(soft, result, np.asarray(record.solution)[None, :],
                        np.array([objective]), measures[None, :])[0]


def random_elite(soft, rng):
    return soft.random_elite(rng)


def snapshot(archive):
    return archive.snapshot()


def _fmt(x):
    return repr(float(x))


def write_archive_csv(archive, path):
    """Sparse export: one row per occupied cell, cell order."""
    d = archive.spec.measure_dim
    header = ["cell_index"] + [f"m_{i}" for i in range(d)] + ["objective"]
    soft = isinstance(archive, SoftArchive)
    if soft:
        header.append("threshold")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for cell in archive.occupied_cells():
            row = [int(cell)] + [_fmt(v) for v in archive.measures[cell]]
            row.append(_fmt(archive.objective[cell]))
            if soft:
                row.append(_fmt(archive.threshold[cell]))
            writer.writerow(row)


def read_archive_csv(path):
    """Return ``(cells, objectives)`` arrays from an exported archive."""
    cells, objectives = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "cell_index" not in reader.fieldnames \
                or "objective" not in reader.fieldnames:
            raise ValueError(f"{path} is not an archive export")
        for row in reader:
            cells.append(int(row["cell_index"]))
            objectives.append(float(row["objective"]))
    return np.array(cells, dtype=np.int64), np.array(objectives)


def write_heatmap_csv(dims, cells, objectives, path):
    """Dense 2-D objective grid; empty cells are left blank."""
    if len(dims) != 2:
        raise ValueError("heatmaps are only defined for 2-D grids")
    rows, cols = dims
    grid = [[""] * cols for _ in range(rows)]
    for cell, obj in zip(cells, objectives):
        r, c = divmod(int(cell), cols)
        grid[r][c] = _fmt(obj)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row"] + [str(c) for c in range(cols)])
        for r in range(rows):
            writer.writerow([r] + grid[r])
