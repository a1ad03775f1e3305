"""Shared ask/tell machinery for the four evolution strategies."""

from dataclasses import dataclass, field

import numpy as np

#: Generations without a single positive improvement before a restart.
STALL_PATIENCE = 50
MIN_STEP_SIZE = 1e-12
MAX_CONDITION = 1e14
EIGEN_FLOOR = 1e-20


class DivergenceError(FloatingPointError):
    """Raised when a distribution parameter stops being finite."""

    def __init__(self, name):
        super().__init__(f"non-finite value in ES parameter '{name}'")
        self.parameter = name


def rank_batch(improvements, objectives=None):
    """Order batch indices by descending improvement.

    Ties are broken by descending objective, then by batch index. NaN
    objectives (failed evaluations) sort last among equal improvements.
    """
    improvements = np.asarray(improvements, dtype=np.float64)
    if objectives is None:
        objectives = np.zeros_like(improvements)
    objectives = np.asarray(objectives, dtype=np.float64)
    obj_key = np.where(np.isnan(objectives), np.inf, -objectives)
    index = np.arange(len(improvements))
    # lexsort sorts by the last key first
    return np.lexsort((index, obj_key, -improvements))


@dataclass
class RankedBatch:
    """A batch of solutions with their improvement values.

    ``ranking`` lists batch indices from best (largest improvement) to worst.
    """

    solutions: np.ndarray
    improvements: np.ndarray
    objectives: np.ndarray = None
    ranking: np.ndarray = field(default=None)

    def __post_init__(self):
        self.solutions = np.asarray(self.solutions, dtype=np.float64)
        self.improvements = np.asarray(self.improvements, dtype=np.float64)
        if self.objectives is None:
            self.objectives = np.zeros(len(self.improvements))
        else:
            self.objectives = np.asarray(self.objectives, dtype=np.float64)
        size = len(self.solutions)
        if self.improvements.shape != (size,):
            raise ValueError(
                f"got {self.improvements.shape[0]} improvement values "
                f"for {size} solutions")
        if np.isnan(self.improvements).any() or np.isposinf(
                self.improvements).any():
            raise ValueError("improvement values must be finite or -inf")
        if self.ranking is None:
            self.ranking = rank_batch(self.improvements, self.objectives)
        else:
            self.ranking = np.asarray(self.ranking, dtype=np.int64)
            if not np.array_equal(np.sort(self.ranking), np.arange(size)):
                raise ValueError("ranking is not a permutation of the batch")


def log_weights(batch_size):
    """Positive log-linear recombination weights over the top half."""
    mu = batch_size // 2
    raw = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    weights = raw / raw.sum()
    mueff = 1.0 / np.sum(weights**2)
    return weights, mueff


class EvolutionStrategy:
    """Common surface: ``ask``, ``tell``, ``needs_restart``, ``reset``.

    Subclasses implement ``_init_state``, ``_sample``, ``_update`` and
    ``_parameters``. ``tell`` mutates the instance in place; use
    ``copy.deepcopy`` to keep a snapshot.
    """

    name = "es"

    def __init__(self, mean, sigma0, batch_size):
        mean = np.array(mean, dtype=np.float64)
        if mean.ndim != 1 or mean.size == 0:
            raise ValueError("mean must be a non-empty vector")
        if batch_size < 2:
            raise ValueError("batch_size must be at least 2")
        if not sigma0 > 0:
            raise ValueError("sigma0 must be positive")
        self.dim = mean.size
        self.batch_size = int(batch_size)
        self.mean = mean
        self.sigma0 = float(sigma0)
        self.step_size = float(sigma0)
        self.generation = 0
        self.stall = 0
        self._last = None
        self._init_state()

    # subclass hooks -------------------------------------------------------

    def _init_state(self):
        raise NotImplementedError

    def _sample(self, rng):
        raise NotImplementedError

    def _update(self, solutions, ranking):
        raise NotImplementedError

    def _parameters(self):
        """Mapping of name -> array of every adapted quantity."""
        raise NotImplementedError

    def _extra_restart_checks(self):
        return False

    # public surface -------------------------------------------------------

    def parameters(self):
        params = {"mean": self.mean,
                  "step_size": np.array([self.step_size])}
        params.update(self._parameters())
        return params

    def num_stored_reals(self):
        return int(sum(np.size(v) for v in self.parameters().values()))

    def check_finite(self):
        for name, value in self.parameters().items():
            if not np.all(np.isfinite(value)):
                raise DivergenceError(name)

    def ask(self, rng):
        """Sample ``batch_size`` solutions as a ``(batch_size, dim)`` array."""
        self.check_finite()
        solutions, cache = self._sample(rng)
        self._last = (solutions, cache)
        return solutions

    def tell(self, batch):
        """Adapt the distribution from a ranked batch produced by ``ask``."""
        solutions = batch.solutions
        if solutions.shape != (self.batch_size, self.dim):
            raise ValueError(
                f"expected a batch of shape {(self.batch_size, self.dim)}, "
                f"got {solutions.shape}")
        self._update(solutions, batch.ranking)
        self._last = None
        self.generation += 1
        if np.max(batch.improvements) > 0:
            self.stall = 0
        else:
            self.stall += 1

    def needs_restart(self):
        if self.generation == 0:
            return False
        if self.stall >= STALL_PATIENCE:
            return True
        if not self.step_size >= MIN_STEP_SIZE:
            return True
        for value in self.parameters().values():
            if not np.all(np.isfinite(value)):
                return True
        return self._extra_restart_checks()

    def reset(self, mean, sigma0):
        mean = np.array(mean, dtype=np.float64)
        if mean.shape != (self.dim,):
            raise ValueError(
                f"reset mean has shape {mean.shape}, expected ({self.dim},)")
        if not sigma0 > 0:
            raise ValueError("sigma0 must be positive")
        self.mean = mean
        self.sigma0 = float(sigma0)
        self.step_size = float(sigma0)
        self.generation = 0
        self.stall = 0
        self._last = None
        self._init_state()

    def _cached(self, solutions):
        """Return the noise cached by ``ask`` for exactly these solutions."""
        if self._last is None:
            return None
        last, cache = self._last
        if last is solutions or np.array_equal(last, solutions):
            return cache
        return None
