"""Benchmark domains: sphere linear projection and planar arm repertoire.

Both map a batch of solutions to objectives in [0, 100] (100 is optimal)
and 2-D measures.
"""

import re

import numpy as np

SPHERE_BOUND = 5.12
SPHERE_OFFSET = 0.4 * SPHERE_BOUND


def fold_clip(x, bound):
    """Identity inside ``[-bound, bound]``, ``bound**2 / x`` outside."""
    x = np.asarray(x, dtype=np.float64)
    outside = np.abs(x) > bound
    with np.errstate(divide="ignore"):
        return np.where(outside, bound * bound / np.where(outside, x, 1.0), x)


class SphereDomain:
    """Shifted sphere; measures are clipped sums over each half of ``x``."""

    def __init__(self, n, offset=SPHERE_OFFSET, measure_bound=SPHERE_BOUND):
        if n < 2 or n % 2:
            raise ValueError("sphere dimension must be even and at least 2")
        self.n = int(n)
        self.offset = float(offset)
        self.measure_bound = float(measure_bound)
        # worst corner of the box is x = -bound in every coordinate
        self.raw_worst = self.n * (-self.measure_bound - self.offset) ** 2

    @property
    def name(self):
        return f"sphere-{self.n}"

    @property
    def initial_solution(self):
        return np.zeros(self.n)

    def evaluate_batch(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        raw = np.sum(np.square(x - self.offset), axis=1)
        objective = 100.0 * (self.raw_worst - raw) / self.raw_worst
        clipped = fold_clip(x, self.measure_bound)
        half = self.n // 2
        measures = np.stack([clipped[:, :half].sum(axis=1),
                             clipped[:, half:].sum(axis=1)], axis=1)
        return objective, measures

    def measure_bounds(self):
        edge = self.n / 2 * self.measure_bound
        return np.array([-edge, -edge]), np.array([edge, edge])


class ArmDomain:
    """Planar arm with ``n`` links of length ``1/n``.

    The objective rewards low variance of the joint angles; the measures are
    the end-effector position.
    """

    max_variance = np.pi**2

    def __init__(self, n):
        if n < 1:
            raise ValueError("arm needs at least one link")
        self.n = int(n)
        self.link_length = 1.0 / self.n

    @property
    def name(self):
        return f"arm-{self.n}"

    @property
    def initial_solution(self):
        return np.zeros(self.n)

    def evaluate_batch(self, theta):
        theta = np.atleast_2d(np.asarray(theta, dtype=np.float64))
        theta = np.clip(theta, -np.pi, np.pi)
        objective = 100.0 * (1.0 - np.var(theta, axis=1) / self.max_variance)
        cum = np.cumsum(theta, axis=1)
        measures = np.stack([self.link_length * np.cos(cum).sum(axis=1),
                             self.link_length * np.sin(cum).sum(axis=1)],
                            axis=1)
        return objective, measures

    def measure_bounds(self):
        return np.array([-1.0, -1.0]), np.array([1.0, 1.0])


def sphere_eval(domain, x):
    objective, measures = domain.evaluate_batch(np.asarray(x)[None, :])
    return float(objective[0]), measures[0]


def arm_eval(domain, theta):
    objective, measures = domain.evaluate_batch(np.asarray(theta)[None, :])
    return float(objective[0]), measures[0]


def measure_bounds(domain):
    return domain.measure_bounds()


DOMAINS = ("sphere-100", "sphere-1000", "arm-100", "arm-1000")

_NAME = re.compile(r"^(sphere|arm)-(\d+)$")


def make_domain(name):
    """Build a domain from ``sphere-<n>`` or ``arm-<n>``."""
    match = _NAME.match(name)
    if not match:
        raise ValueError(
            f"unknown domain '{name}' (expected one of {', '.join(DOMAINS)})")
    kind, n = match.group(1), int(match.group(2))
    return SphereDomain(n) if kind == "sphere" else ArmDomain(n)
