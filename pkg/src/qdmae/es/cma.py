"""Full-covariance CMA-ES with rank-one + rank-mu updates."""

import numpy as np

from .base import EIGEN_FLOOR, MAX_CONDITION, EvolutionStrategy, log_weights


class CMAEvolutionStrategy(EvolutionStrategy):
    """CMA-ES holding an ``n x n`` covariance matrix.

    The transformation matrix ``C^(1/2)`` (and its inverse) is cached and only
    recomputed every ``max(1, n // batch_size)`` generations, which keeps the
    eigendecomposition cost at O(n^2) per sampled solution.
    """

    name = "cma-es"

    def __init__(self, mean, sigma0, batch_size, covariance=None):
        self._initial_cov = covariance
        super().__init__(mean, sigma0, batch_size)
        self._initial_cov = None

    def _init_state(self):
        n, lam = self.dim, self.batch_size
        self.weights, self.mueff = log_weights(lam)
        mueff = self.mueff
        self.cs = (mueff + 2) / (n + mueff + 5)
        self.ds = 1 + 2 * max(0.0, np.sqrt((mueff - 1) / (n + 1)) - 1) + self.cs
        self.cc = (4 + mueff / n) / (n + 4 + 2 * mueff / n)
        self.c1 = 2 / ((n + 1.3) ** 2 + mueff)
        self.cmu = min(1 - self.c1,
                       2 * (mueff - 2 + 1 / mueff) / ((n + 2) ** 2 + mueff))
        self.chi_n = np.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n**2))
        self.eigen_every = max(1, n // lam)

        if self._initial_cov is not None:
            cov = np.array(self._initial_cov, dtype=np.float64)
            if cov.shape != (n, n):
                raise ValueError(f"covariance must be {n}x{n}")
            self.cov = 0.5 * (cov + cov.T)
        else:
            self.cov = np.eye(n)
        self.path_sigma = np.zeros(n)
        self.path_cov = np.zeros(n)
        self._decompose()

    def _decompose(self):
        eigvals, basis = np.linalg.eigh(self.cov)
        eigvals = np.maximum(eigvals, EIGEN_FLOOR)
        root = np.sqrt(eigvals)
        self.eigvals = eigvals
        self.sqrt_cov = (basis * root) @ basis.T
        self.inv_sqrt_cov = (basis / root) @ basis.T
        self._eigen_generation = self.generation

    def _refresh(self):
        if self.generation - self._eigen_generation >= self.eigen_every:
            self._decompose()

    def _parameters(self):
        return {"covariance": self.cov,
                "evo_path_sigma": self.path_sigma,
                "evo_path_cov": self.path_cov}

    def num_stored_reals(self):
        # transform caches are part of the footprint
        return super().num_stored_reals() + 2 * self.dim**2

    def condition_number(self):
        return float(self.eigvals[-1] / self.eigvals[0])

    def _extra_restart_checks(self):
        return self.condition_number() > MAX_CONDITION

    def _sample(self, rng):
        self._refresh()
        z = rng.standard_normal((self.batch_size, self.dim))
        y = z @ self.sqrt_cov
        return self.mean + self.step_size * y, None

    def _update(self, solutions, ranking):
        n = self.dim
        mu = len(self.weights)
        w = self.weights
        y = (solutions[ranking[:mu]] - self.mean) / self.step_size
        y_w = w @ y
        self.mean = self.mean + self.step_size * y_w

        self.path_sigma = ((1 - self.cs) * self.path_sigma
                           + np.sqrt(self.cs * (2 - self.cs) * self.mueff)
                           * (self.inv_sqrt_cov @ y_w))
        norm_ps = np.linalg.norm(self.path_sigma)
        denom = np.sqrt(1 - (1 - self.cs) ** (2 * (self.generation + 1)))
        hsig = float(norm_ps / denom / self.chi_n < 1.4 + 2 / (n + 1))
        self.path_cov = ((1 - self.cc) * self.path_cov
                         + hsig * np.sqrt(self.cc * (2 - self.cc) * self.mueff)
                         * y_w)

        rank_one = np.outer(self.path_cov, self.path_cov)
        rank_mu = (y.T * w) @ y
        c1, cmu = self.c1, self.cmu
        lost = (1 - hsig) * self.cc * (2 - self.cc)
        cov = ((1 - c1 - cmu + c1 * lost) * self.cov
               + c1 * rank_one + cmu * rank_mu)
        self.cov = 0.5 * (cov + cov.T)

        self.step_size *= np.exp(
            (self.cs / self.ds) * (norm_ps / self.chi_n - 1))
