"""CMA-MAE and its scalable variants for quality-diversity optimization."""

from .archive import (
    GridSpec,
    InsertResult,
    ResultArchive,
    SoftArchive,
    SolutionRecord,
    insert,
    insert_batch,
)
from .domains import ArmDomain, SphereDomain, make_domain
from .es import ALGORITHMS, make_es
from .kernels import BACKEND
from .metrics import MetricsReport, summarize
from .scheduler import Scheduler, SchedulerConfig, run

__version__ = "0.1.0"
