"""Separable CMA-ES: covariance restricted to its diagonal."""

import numpy as np

from .base import EIGEN_FLOOR, EvolutionStrategy, log_weights


class SeparableCMAEvolutionStrategy(EvolutionStrategy):
    """CMA-ES with a diagonal covariance, O(n) time and space.

    Learning rates for the covariance are scaled up by ``(n + 2) / 3`` since
    only ``n`` entries are adapted.
    """

    name = "sep-cma-es"

    def __init__(self, mean, sigma0, batch_size, diag_variance=None):
        self._initial_diag = diag_variance
        super().__init__(mean, sigma0, batch_size)
        self._initial_diag = None

    def _init_state(self):
        n, lam = self.dim, self.batch_size
        self.weights, self.mueff = log_weights(lam)
        mueff = self.mueff
        self.cs = (mueff + 2) / (n + mueff + 5)
        self.ds = 1 + 2 * max(0.0, np.sqrt((mueff - 1) / (n + 1)) - 1) + self.cs
        self.cc = (4 + mueff / n) / (n + 4 + 2 * mueff / n)
        scale = (n + 2) / 3
        self.c1 = min(1.0, scale * 2 / ((n + 1.3) ** 2 + mueff))
        self.cmu = min(1 - self.c1, scale * 2 * (mueff - 2 + 1 / mueff)
                       / ((n + 2) ** 2 + mueff))
        self.chi_n = np.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n**2))

        if self._initial_diag is not None:
            diag = np.array(self._initial_diag, dtype=np.float64)
            if diag.shape != (n,) or not np.all(diag > 0):
                raise ValueError("diag_variance must be n positive values")
            self.diag_variance = diag
        else:
            self.diag_variance = np.ones(n)
        self.path_sigma = np.zeros(n)
        self.path_cov = np.zeros(n)

    def _parameters(self):
        return {"diag_variance": self.diag_variance,
                "evo_path_sigma": self.path_sigma,
                "evo_path_cov": self.path_cov}

    def _sample(self, rng):
        scale = self.step_size * np.sqrt(
            np.maximum(self.diag_variance, EIGEN_FLOOR))
        z = rng.standard_normal((self.batch_size, self.dim))
        return self.mean + z * scale, None

    def _update(self, solutions, ranking):
        n = self.dim
        mu = len(self.weights)
        w = self.weights
        y = (solutions[ranking[:mu]] - self.mean) / self.step_size
        y_w = w @ y
        self.mean = self.mean + self.step_size * y_w

        root = np.sqrt(np.maximum(self.diag_variance, EIGEN_FLOOR))
        self.path_sigma = ((1 - self.cs) * self.path_sigma
                           + np.sqrt(self.cs * (2 - self.cs) * self.mueff)
                           * (y_w / root))
        norm_ps = np.linalg.norm(self.path_sigma)
        denom = np.sqrt(1 - (1 - self.cs) ** (2 * (self.generation + 1)))
        hsig = float(norm_ps / denom / self.chi_n < 1.4 + 2 / (n + 1))
        self.path_cov = ((1 - self.cc) * self.path_cov
                         + hsig * np.sqrt(self.cc * (2 - self.cc) * self.mueff)
                         * y_w)

        c1, cmu = self.c1, self.cmu
        lost = (1 - hsig) * self.cc * (2 - self.cc)
        self.diag_variance = ((1 - c1 - cmu + c1 * lost) * self.diag_variance
                              + c1 * self.path_cov**2
                              + cmu * (w @ (y * y)))
        self.step_size *= np.exp(
            (self.cs / self.ds) * (norm_ps / self.chi_n - 1))
