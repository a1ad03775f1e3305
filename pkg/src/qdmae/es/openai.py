"""OpenAI-ES: isotropic Gaussian, mean moved by Adam on a rank gradient."""

import numpy as np

from .base import EvolutionStrategy


def centered_ranks(ranking):
    """Utilities in [-0.5, 0.5]; the first entry of ``ranking`` gets 0.5."""
    size = len(ranking)
    utilities = np.empty(size)
    utilities[ranking] = np.arange(size - 1, -1, -1) / (size - 1) - 0.5
    return utilities


class OpenAIEvolutionStrategy(EvolutionStrategy):
    """Fixed ``sigma``; only the mean adapts.

    The pseudo-gradient is the centered-rank weighted sum of the sampling
    noise. L2 regularization adds ``-l2_coeff * mean`` to the ascent
    direction before the Adam step.
    """

    name = "openai-es"

    def __init__(self, mean, sigma0, batch_size, learning_rate=0.01,
                 l2_coeff=0.005, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.learning_rate = float(learning_rate)
        self.l2_coeff = float(l2_coeff)
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        super().__init__(mean, sigma0, batch_size)

    @property
    def sigma(self):
        return self.step_size

    def _init_state(self):
        self.first_moment = np.zeros(self.dim)
        self.second_moment = np.zeros(self.dim)
        self.adam_step = 0

    def _parameters(self):
        return {"adam_first_moment": self.first_moment,
                "adam_second_moment": self.second_moment}

    def _sample(self, rng):
        noise = rng.standard_normal((self.batch_size, self.dim))
        return self.mean + self.step_size * noise, noise

    def _update(self, solutions, ranking):
        noise = self._cached(solutions)
        if noise is None:
            noise = (solutions - self.mean) / self.step_size
        utilities = centered_ranks(ranking)
        gradient = utilities @ noise / (self.batch_size * self.step_size)
        gradient -= self.l2_coeff * self.mean

        self.adam_step += 1
        t = self.adam_step
        self.first_moment = (self.beta1 * self.first_moment
                             + (1 - self.beta1) * gradient)
        self.second_moment = (self.beta2 * self.second_moment
                              + (1 - self.beta2) * gradient * gradient)
        rate = (self.learning_rate * np.sqrt(1 - self.beta2**t)
                / (1 - self.beta1**t))
        self.mean = self.mean + rate * self.first_moment / (
            np.sqrt(self.second_moment) + self.epsilon)
