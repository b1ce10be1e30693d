"""
Configuration module for cu-factor.

Defines the global settings shared by the checkers, the lemma suite and
the command-line runner: grid depth, fraction bound, seed, report format,
worker count and the bounds used by chain verification and witness search.
"""

import os
from dataclasses import dataclass
from typing import Any, Dict, Optional

from dotenv import load_dotenv


@dataclass
class Config:
    """
    Global configuration for cu-factor.

    Values left as None are filled from the environment in __post_init__.
    Scenario settings override these defaults; CLI flags override both.
    """

    depth: int = 6
    """Default grid depth for bounded checks."""

    frac_bound: int = 8
    """Bound on numerators and denominators of sampled fractions t."""

    seed: int = 0
    """Seed for sampled (non-exhaustive) sweeps."""

    report_format: str = "text"  # "text" | "machine"
    """Report format written by the runner."""

    jobs: Optional[int] = None
    """Maximum number of workers used inside a command."""

    out_dir: str = "reports"
    """Directory receiving persisted reports."""

    chain_depth: int = 16
    """Number of chain terms checked for monotonicity."""

    witness_depth_factor: int = 2
    """Codomain grids are enlarged by this factor for witness searches."""

    probe_count: int = 16
    """Leading chain indices inspected by brute-force checks."""

    include_timing: bool = True
    """Whether reports carry elapsed times (disable for byte-identical output)."""

    log_level: Optional[str] = None
    """Root log level used by the CLI."""

    def __post_init__(self):
        """Load configuration from environment variables if not set."""
        if self.jobs is None:
            self.jobs = int(os.getenv("CU_FACTOR_JOBS", "1"))
        if self.log_level is None:
            self.log_level = os.getenv("CU_FACTOR_LOG_LEVEL", "WARNING")
        if self.jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {self.jobs}")
        if self.report_format not in ("text", "machine"):
            raise ValueError(f"unknown report format: {self.report_format}")

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "Config":
        """Create a Config instance from a dictionary."""
        return cls(**{k: v for k, v in config_dict.items() if k in cls.__annotations__})

    @classmethod
    def load_from_env(cls) -> "Config":
        """Load configuration from the environment (and a .env file if present)."""
        load_dotenv()
        return cls(
            depth=int(os.getenv("CU_FACTOR_DEPTH", "6")),
            frac_bound=int(os.getenv("CU_FACTOR_FRAC_BOUND", "8")),
            seed=int(os.getenv("CU_FACTOR_SEED", "0")),
            report_format=os.getenv("CU_FACTOR_FORMAT", "text"),
            jobs=int(os.getenv("CU_FACTOR_JOBS", "1")),
            out_dir=os.getenv("CU_FACTOR_OUT_DIR", "reports"),
            chain_depth=int(os.getenv("CU_FACTOR_CHAIN_DEPTH", "16")),
            witness_depth_factor=int(os.getenv("CU_FACTOR_WITNESS_FACTOR", "2")),
            probe_count=int(os.getenv("CU_FACTOR_PROBE_COUNT", "16")),
            include_timing=os.getenv("CU_FACTOR_TIMING", "true").lower() == "true",
            log_level=os.getenv("CU_FACTOR_LOG_LEVEL", "WARNING"),
        )


DEFAULT_CONFIG = Config(jobs=1, log_level="WARNING")
