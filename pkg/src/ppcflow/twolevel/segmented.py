"""Literal-count estimates for blocks too wide for direct minimization.

A wide block is split into segment sub-blocks (see
:func:`ppcflow.truthtab.segmented_blocks`), each minimized on its own with the
operand fields it actually sees.  The adders that recombine partial results
are not part of the estimate.
"""
from __future__ import annotations

from functools import lru_cache

from ..errors import ParameterError
from ..sparsity import ValueSet
from ..truthtab import BlockSpec, gen_block_tt, segmented_blocks
from .cube import MinimizeStats
from .exact import EXACT_GUARD_BITS, minimize_exact
from .heuristic import minimize_heuristic

MODES = ("exact", "heuristic", "auto")

EXCLUDED_NOTE = "inter-segment adders and carries are excluded from the count"


@lru_cache(maxsize=256)
def _minimize_block(spec: BlockSpec, reach_a: ValueSet, reach_b: ValueSet, mode: str) -> MinimizeStats:
    tt = gen_block_tt(spec, reach_a, reach_b)
    if mode == "auto":
        mode = "exact" if spec.n_inputs <= EXACT_GUARD_BITS else "heuristic"
    if mode == "exact":
        return minimize_exact(tt)[1]
    return minimize_heuristic(tt)[1]


def minimize_stats(spec: BlockSpec, reach_a: ValueSet | None = None, reach_b: ValueSet | None = None,
                   mode: str = "auto") -> MinimizeStats:
    """Minimized literal/cube counts of one block; results are memoized."""
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
    reach_a = ValueSet.full(spec.wl_a) if reach_a is None else reach_a
    reach_b = ValueSet.full(spec.wl_b) if reach_b is None else reach_b
    return _minimize_block(spec, reach_a, reach_b, mode)


def segmented_literal_estimate(spec: BlockSpec, reach_a: ValueSet | None = None,
                               reach_b: ValueSet | None = None, segment_wl: int = 4,
                               mode: str = "auto") -> MinimizeStats:
    """Sum of per-segment minimized literal counts.

    Sub-blocks are always full width, so an output truncation on ``spec`` is
    not reflected.  A block that is a single segment is minimized directly.
    """
    segs = segmented_blocks(spec, segment_wl, reach_a, reach_b)
    if len(segs) == 1:
        return minimize_stats(spec, segs[0].reach_a, segs[0].reach_b, mode)
    lits = cubes = iters = 0
    exact = True
    for seg in segs:
        st = minimize_stats(seg.spec, seg.reach_a, seg.reach_b, mode)
        lits += st.literals
        cubes += st.cubes
        iters += st.iterations
        exact = exact and st.exact
    notes = (f"{len(segs)} segments of {segment_wl} bits", EXCLUDED_NOTE)
    if spec.keep_high is not None:
        notes += ("output truncation ignored: segments keep full width",)
    return MinimizeStats(lits, cubes, iters, exact, notes)
