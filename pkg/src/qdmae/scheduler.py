"""Outer loop: emitters sample, the archive ranks, the ES adapts."""

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .archive import GridSpec, ResultArchive, SoftArchive, insert_batch
from .es import DivergenceError, RankedBatch, make_es
from .metrics import summarize


@dataclass
class Emitter:
    es: object
    rng: np.random.Generator
    restarts: int = 0


@dataclass
class SchedulerConfig:
    psi: int
    iterations: int
    batch_size: int
    sigma0: float
    initial_solution: np.ndarray
    algorithm: str = "sep-cma-mae"
    es_options: dict = field(default_factory=dict)

    def __post_init__(self):
        self.initial_solution = np.asarray(self.initial_solution,
                                           dtype=np.float64)
        if self.psi < 1:
            raise ValueError("psi must be at least 1")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.batch_size < 2:
            raise ValueError("batch_size (lambda) must be at least 2")
        if not self.sigma0 > 0:
            raise ValueError("sigma0 must be positive")


@dataclass(frozen=True)
class IterationStats:
    iteration: int
    evaluations: int
    qd_score: float
    coverage: float
    best: float
    restarts_this_iter: int
    wall_time_ms: int

    header = ("iter", "evals", "qd_score", "coverage", "best", "restarts",
              "wall_time_ms")

    def as_row(self):
        best = "" if self.best is None else repr(self.best)
        return [str(self.iteration), str(self.evaluations),
                repr(self.qd_score), repr(self.coverage), best,
                str(self.restarts_this_iter), str(self.wall_time_ms)]


def spawn_streams(master_seed, psi):
    """One independent generator per emitter plus one for the scheduler."""
    children = np.random.SeedSequence(master_seed).spawn(psi + 1)
    gens = [np.random.Generator(np.random.Philox(s)) for s in children]
    return gens[:psi], gens[psi]


def eval_threads():
    try:
        return max(1, int(os.environ.get("QD_THREADS", "1")))
    except ValueError:
        return 1


def batch_evaluator(evaluate, threads=None):
    """Adapt a per-solution ``evaluate(x) -> (f, measures)`` to batches.

    With more than one thread, evaluations of a batch run concurrently and
    are joined in batch order.
    """
    threads = eval_threads() if threads is None else threads

    def run(solutions):
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                results = list(pool.map(evaluate, solutions))
        else:
            results = [evaluate(x) for x in solutions]
        objectives = np.array([r[0] for r in results], dtype=np.float64)
        measures = np.array([np.asarray(r[1], dtype=np.float64)
                             for r in results])
        return objectives, measures

    return run


class Scheduler:
    """Owns the archives and steps every emitter once per iteration.

    ``evaluate_batch`` maps a ``(batch, n)`` array to objectives and a
    ``(batch, d)`` measure array.
    """

    def __init__(self, emitters, soft, result, evaluate_batch,
                 initial_solution, sigma0, rng):
        self.emitters = emitters
        self.soft = soft
        self.result = result
        self.evaluate_batch = evaluate_batch
        self.initial_solution = np.asarray(initial_solution, dtype=np.float64)
        self.sigma0 = sigma0
        self.rng = rng
        self.iteration = 0
        self.evaluations = 0
        self.history = []  # per-emitter (improvements, ranking) of last step

    def _restart(self, emitter):
        if len(self.soft):
            mean = self.soft.random_elite(self.rng).solution
        else:
            mean = self.initial_solution
        emitter.es.reset(mean, self.sigma0)
        emitter.restarts += 1

    def _ask(self, emitter):
        try:
            return emitter.es.ask(emitter.rng)
        except DivergenceError:
            self._restart(emitter)
            return emitter.es.ask(emitter.rng)

    def step(self, start_time=None):
        start = time.perf_counter() if start_time is None else start_time
        restarts = 0
        self.history = []
        for emitter in self.emitters:
            solutions = self._ask(emitter)
            objectives, measures = self.evaluate_batch(solutions)
            objectives = np.asarray(objectives, dtype=np.float64)
            inserted = insert_batch(self.soft, self.result, solutions,
                                    objectives, measures)
            self.evaluations += len(solutions)
            batch = RankedBatch(solutions, inserted.improvements, objectives)
            self.history.append((inserted.improvements, batch.ranking,
                                 objectives))
            emitter.es.tell(batch)
            if emitter.es.needs_restart():
                self._restart(emitter)
                restarts += 1
        self.iteration += 1
        report = summarize(self.result, self.soft.min_f)
        elapsed = int(round((time.perf_counter() - start) * 1000))
        return IterationStats(self.iteration, self.evaluations,
                              report.qd_score, report.coverage, report.best,
                              restarts, elapsed)


def build(config, domain, alpha, min_f, master_seed, grid_dims=(100, 100)):
    """Wire up the archives and emitters of one trial."""
    lower, upper = domain.measure_bounds()
    spec = GridSpec(grid_dims, lower, upper)
    soft = SoftArchive(spec, alpha, min_f)
    result = ResultArchive(spec)
    x0 = config.initial_solution
    if x0.shape != (domain.n,):
        raise ValueError(
            f"initial solution has {x0.size} entries, domain needs {domain.n}")
    streams, sched_rng = spawn_streams(master_seed, config.psi)
    emitters = [Emitter(make_es(config.algorithm, x0, config.sigma0,
                                config.batch_size, **config.es_options), rng)
                for rng in streams]
    return Scheduler(emitters, soft, result, domain.evaluate_batch, x0,
                     config.sigma0, sched_rng)


def run(config, domain, alpha, min_f, master_seed, grid_dims=(100, 100),
        callback=None):
    """Run ``config.iterations`` iterations; returns archives and the log."""
    scheduler = build(config, domain, alpha, min_f, master_seed, grid_dims)
    log = []
    start = time.perf_counter()
    for _ in range(config.iterations):
        stats = scheduler.step(start)
        log.append(stats)
        if callback is not None:
            callback(scheduler, stats)
    return scheduler.soft, scheduler.result, log
