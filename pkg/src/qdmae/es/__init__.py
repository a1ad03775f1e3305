"""Ask/tell evolution strategies used by the emitters."""

from .base import (
    DivergenceError,
    EvolutionStrategy,
    RankedBatch,
    rank_batch,
)
from .cma import CMAEvolutionStrategy
from .lm_ma import LMMAEvolutionStrategy
from .openai import OpenAIEvolutionStrategy, centered_ranks
from .sep_cma import SeparableCMAEvolutionStrategy

ES_CLASSES = {
    "cma-es": CMAEvolutionStrategy,
    "lm-ma-es": LMMAEvolutionStrategy,
    "sep-cma-es": SeparableCMAEvolutionStrategy,
    "openai-es": OpenAIEvolutionStrategy,
}

#: Algorithm names (as used on the command line) -> ES name.
ALGORITHMS = {
    "cma-mae": "cma-es",
    "lm-ma-mae": "lm-ma-es",
    "sep-cma-mae": "sep-cma-es",
    "openai-mae": "openai-es",
}


def make_es(name, mean, sigma0, batch_size, **options):
    """Build an ES by ES name or algorithm name.

    ``options`` may carry ``k`` (LM-MA), ``learning_rate`` and ``l2_coeff``
    (OpenAI); options that do not apply to the chosen ES are ignored.
    """
    name = ALGORITHMS.get(name, name)
    if name not in ES_CLASSES:
        raise ValueError(f"unknown evolution strategy '{name}'")
    if name == "lm-ma-es":
        return LMMAEvolutionStrategy(mean, sigma0, batch_size,
                                     n_vectors=options.get("k"))
    if name == "openai-es":
        kwargs = {key: options[key] for key in ("learning_rate", "l2_coeff")
                  if options.get(key) is not None}
        return OpenAIEvolutionStrategy(mean, sigma0, batch_size, **kwargs)
    return ES_CLASSES[name](mean, sigma0, batch_size)


__all__ = [
    "ALGORITHMS",
    "CMAEvolutionStrategy",
    "DivergenceError",
    "ES_CLASSES",
    "EvolutionStrategy",
    "LMMAEvolutionStrategy",
    "OpenAIEvolutionStrategy",
    "RankedBatch",
    "SeparableCMAEvolutionStrategy",
    "centered_ranks",
    "make_es",
    "rank_batch",
]
