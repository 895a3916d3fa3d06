"""Two-level (sum-of-products) minimization with don't-cares."""
from .cube import BoolFunction, Cover, Cube, MinimizeStats, Provenance
from .exact import minimize_exact
from .heuristic import minimize_heuristic
from .pla import pla_read, pla_write
from .segmented import minimize_stats, segmented_literal_estimate
from .verify import VerifyReport, verify_cover

__all__ = [
    "BoolFunction", "Cover", "Cube", "MinimizeStats", "Provenance",
    "minimize_exact", "minimize_heuristic", "minimize_stats", "pla_read", "pla_write",
    "segmented_literal_estimate", "verify_cover", "VerifyReport",
]
