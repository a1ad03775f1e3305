"""Limited-memory matrix adaptation ES (rank-k transformation)."""

import numpy as np

from .. import kernels
from .base import EvolutionStrategy, log_weights


class LMMAEvolutionStrategy(EvolutionStrategy):
    """LM-MA-ES: ``C^(1/2)`` is approximated by ``k`` direction vectors.

    Each direction contributes a rank-one transform applied to a standard
    normal draw, so sampling and adaptation cost O(k n) per solution. Only
    the first ``min(generation, k)`` directions are active.
    """

    name = "lm-ma-es"

    def __init__(self, mean, sigma0, batch_size, n_vectors=None):
        self.n_vectors = int(n_vectors) if n_vectors is not None else batch_size
        if self.n_vectors < 1:
            raise ValueError("n_vectors must be at least 1")
        super().__init__(mean, sigma0, batch_size)

    def _init_state(self):
        n, lam, k = self.dim, self.batch_size, self.n_vectors
        self.weights, self.mueff = log_weights(lam)
        # rates above 1 would flip the sign of the paths for lam > n / 2
        self.cs = min(1.0, 2 * lam / n)
        index = np.arange(k)
        self.decay_rates = 1.5 ** -index / n
        self.learning_rates = np.minimum(1.0, lam * 4.0 ** -index / n)
        self.directions = np.zeros((k, n))
        self.path_sigma = np.zeros(n)

    def _parameters(self):
        return {"direction_vectors": self.directions,
                "evo_path_sigma": self.path_sigma}

    def _sample(self, rng):
        z = rng.standard_normal((self.batch_size, self.dim))
        active = min(self.generation, self.n_vectors)
        d = kernels.lm_transform(z, self.directions, self.decay_rates, active)
        return self.mean + self.step_size * d, z

    def _update(self, solutions, ranking):
        n = self.dim
        mu = len(self.weights)
        w = self.weights
        top = ranking[:mu]
        z = self._cached(solutions)
        if z is None:
            raise RuntimeError("tell() needs the batch returned by the last ask()")
        d = (solutions[top] - self.mean) / self.step_size
        z_w = w @ z[top]
        d_w = w @ d
        self.mean = self.mean + self.step_size * d_w

        self.path_sigma = ((1 - self.cs) * self.path_sigma
                           + np.sqrt(self.mueff * self.cs * (2 - self.cs)) * z_w)
        lr = self.learning_rates[:, None]
        self.directions = ((1 - lr) * self.directions
                           + np.sqrt(self.mueff * lr * (2 - lr)) * z_w)
        self.step_size *= np.exp(
            0.5 * self.cs * (self.path_sigma @ self.path_sigma / n - 1))
