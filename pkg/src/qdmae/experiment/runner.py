"""Seeded trials and alpha sweeps, with the files they leave behind."""

import csv
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from ..archive import write_archive_csv, write_heatmap_csv
from ..domains import make_domain
from ..metrics import MetricsReport, summarize
from ..scheduler import IterationStats, SchedulerConfig, build, eval_threads

log = logging.getLogger(__name__)

SUMMARY_HEADER = ["seed", "qd_score", "coverage", "best", "elapsed_ms",
                  "evaluations"]


def threaded(evaluate_batch, threads):
    """Split each batch into ``threads`` contiguous chunks evaluated in
    parallel; results are concatenated in batch order."""
    if threads <= 1:
        return evaluate_batch
    pool = ThreadPoolExecutor(threads)

    def run(solutions):
        chunks = np.array_split(solutions, min(threads, len(solutions)))
        parts = list(pool.map(evaluate_batch, chunks))
        return (np.concatenate([p[0] for p in parts]),
                np.concatenate([p[1] for p in parts]))

    return run


def _write_archives(scheduler, trial_dir, grid_dims):
    write_archive_csv(scheduler.result, trial_dir / "result_archive.csv")
    write_archive_csv(scheduler.soft, trial_dir / "soft_archive.csv")
    if len(grid_dims) == 2:
        result = scheduler.result
        cells = result.occupied_cells()
        write_heatmap_csv(grid_dims, cells, result.objective[cells],
                          trial_dir / "heatmap.csv")


def run_trial(config, seed, trial_dir):
    """One seeded run; writes the per-trial files and returns final metrics."""
    trial_dir = Path(trial_dir)
    trial_dir.mkdir(parents=True, exist_ok=True)
    domain = make_domain(config.domain)
    sched_config = SchedulerConfig(
        psi=config.psi, iterations=config.iterations,
        batch_size=config.batch_size, sigma0=config.sigma0,
        initial_solution=domain.initial_solution,
        algorithm=config.algorithm, es_options=config.es_options())
    scheduler = build(sched_config, domain, config.alpha, config.min_f, seed,
                      config.grid_dims)
    scheduler.evaluate_batch = threaded(scheduler.evaluate_batch,
                                        eval_threads())
    start = time.perf_counter()
    with open(trial_dir / "log.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(IterationStats.header)
        for _ in range(config.iterations):
            stats = scheduler.step(start)
            writer.writerow(stats.as_row())
            if config.checkpoint_every and \
                    stats.iteration % config.checkpoint_every == 0:
                _write_archives(scheduler, trial_dir, config.grid_dims)
    elapsed = int(round((time.perf_counter() - start) * 1000))
    _write_archives(scheduler, trial_dir, config.grid_dims)
    return summarize(scheduler.result, config.min_f, elapsed)


def _mean_report(reports):
    bests = [r.best for r in reports if r.best is not None]
    return MetricsReport(
        float(np.mean([r.qd_score for r in reports])),
        float(np.mean([r.coverage for r in reports])),
        float(np.mean(bests)) if bests else None,
        int(round(np.mean([r.elapsed_ms for r in reports]))))


def run_experiment(config, echo=print):
    """Run every seed of ``config``; returns ``{seed: MetricsReport}``.

    Writes ``trial_<seed>/`` directories and ``summary.csv`` (one row per
    seed plus a ``mean`` row) under ``config.output_dir``.
    """
    config.validate()
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    echo(f"{config.algorithm} on {config.domain}: "
         f"{config.evaluations} evaluations per trial, "
         f"{len(config.seeds)} trial(s)")
    reports = {}
    for seed in config.seeds:
        report = run_trial(config, seed, out / f"trial_{seed}")
        reports[seed] = report
        echo(f"  seed {seed}: {report}")
    mean = _mean_report(list(reports.values()))
    with open(out / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for seed, report in reports.items():
            writer.writerow([seed] + report.as_row() + [config.evaluations])
        writer.writerow(["mean"] + mean.as_row() + [config.evaluations])
    echo(f"  mean: {mean}")
    return reports


def alpha_label(alpha):
    return f"alpha_{alpha:g}"


def sweep_alpha(config, alphas, echo=print):
    """One :func:`run_experiment` per alpha under ``alpha_<value>/``."""
    if not alphas:
        raise ValueError("alphas: at least one archive learning rate is needed")
    base = Path(config.output_dir)
    results = {}
    rows = []
    for alpha in alphas:
        sub = config.replace(alpha=float(alpha),
                             output_dir=base / alpha_label(alpha))
        reports = run_experiment(sub, echo=echo)
        results[float(alpha)] = reports
        mean = _mean_report(list(reports.values()))
        rows.append([f"{alpha:g}"] + mean.as_row())
    with open(base / "alpha_summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["alpha", "qd_score", "coverage", "best",
                         "elapsed_ms"])
        writer.writerows(rows)
    return results
