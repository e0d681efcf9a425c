"""Static configuration for the decision engine and its command-line front end."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


DEFAULT_BUDGET = 10**7
DEFAULT_SEED = 0
EDGE_DELETION_PROBABILITY = 0.3
JSON_INDENT = 2
CORPUS_DIR = "corpus"

DECIDE_MODES = ("auto", "algocon", "star", "exhaustive")

# Category names produced by instances.classify.
ALL_ISOLATED = "AllIsolated"
STAR = "Star"
SINGLE_NONTRIVIAL = "SingleNontrivial"
MULTI = "Multi"
CATEGORIES = (ALL_ISOLATED, STAR, SINGLE_NONTRIVIAL, MULTI)

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2


def get_decide_mode(mode: str) -> str:
    """Return one supported decision mode."""

    if mode not in DECIDE_MODES:
        supported = ", ".join(DECIDE_MODES)
        raise ValueError(f"Unsupported mode='{mode}'. Supported: {supported}")
    return mode


@dataclass(frozen=True)
class RunConfig:
    """Settings for one command-line invocation."""

    command: str
    input_path: Path | None = None
    output_path: Path | None = None
    certificate_path: Path | None = None
    mode: str = "auto"
    budget: int = DEFAULT_BUDGET
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        get_decide_mode(self.mode)
        if self.budget < 1:
            raise ValueError(f"budget must be at least 1, got {self.budget}")
