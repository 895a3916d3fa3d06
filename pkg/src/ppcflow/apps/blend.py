"""Integer alpha blending with two truncating 8x8 multipliers and one adder.

``out = ((c1 * p1) >> 8) + ((c2 * p2) >> 8)`` with ``c1 = alpha_int`` and
``c2 = 255 - alpha_int``.  When the natural coefficient split is asserted,
multiplier 1 only ever sees coefficients in 0..127 and multiplier 2 in 128..255.
"""
from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..fxblocks import PpcBlock, Strictness
from ..sparsity import NaturalRange, PreprocessChain
from ..truthtab import BlockSpec, Op
from .image import ImageU8
from .trace import SignalTrace

MULT_SPEC = BlockSpec(Op.MUL, 8, 8, keep_high=8)
COEFF1_RANGE = NaturalRange(0, 127)
COEFF2_RANGE = NaturalRange(128, 255)


def alpha_to_int(alpha: float) -> int:
    """Map a blend weight in [0, 1] onto the coefficient of multiplier 1.

    0.5 maps to 127, the top of multiplier 1's natural range.
    """
    if not 0 <= alpha <= 1:
        raise ParameterError(f"alpha must lie in [0, 1], got {alpha}")
    return min(255, int(alpha * 255))


def blend_blocks(chain: PreprocessChain = PreprocessChain(), use_natural: bool = True) -> tuple[PpcBlock, PpcBlock]:
    """The two multipliers; operand a is the pixel, operand b the coefficient."""
    strict = Strictness.STRICT if use_natural else Strictness.PERMISSIVE
    n1 = COEFF1_RANGE if use_natural else None
    n2 = COEFF2_RANGE if use_natural else None
    return (PpcBlock(MULT_SPEC, chain, chain, None, n1, strict),
            PpcBlock(MULT_SPEC, chain, chain, None, n2, strict))


def blend(img1: ImageU8, img2: ImageU8, alpha_int: int, chain: PreprocessChain = PreprocessChain(),
          use_natural: bool = True, trace: bool = True) -> tuple[ImageU8, SignalTrace | None]:
    if img1.shape != img2.shape:
        raise ParameterError(f"image sizes differ: {img1.shape} vs {img2.shape}")
    if not 0 <= alpha_int <= 255:
        raise ParameterError(f"alpha_int must lie in 0..255, got {alpha_int}")
    c1, c2 = alpha_int, 255 - alpha_int
    m1, m2 = blend_blocks(chain, use_natural)
    p1 = img1.pixels.astype(np.int64)
    p2 = img2.pixels.astype(np.int64)
    # strict blocks raise RangeViolation for a coefficient outside its split
    o1 = m1.eval_array(p1, np.full_like(p1, c1))
    o2 = m2.eval_array(p2, np.full_like(p2, c2))
    out = o1 + o2
    tr = None
    if trace:
        tr = SignalTrace()
        tr.record("mult1.pixel", m1.chain_a.apply_array(p1), 8)
        tr.record("mult1.coeff", [m1.chain_b.apply(c1)], 8)
        tr.record("mult1.out", o1, 8)
        tr.record("mult2.pixel", m2.chain_a.apply_array(p2), 8)
        tr.record("mult2.coeff", [m2.chain_b.apply(c2)], 8)
        tr.record("mult2.out", o2, 8)
        tr.record("adder.out", out, 9)
        tr.pair("mult1", "mult1.pixel", "mult1.coeff")
        tr.pair("mult2", "mult2.pixel", "mult2.coeff")
        tr.pair("adder", "mult1.out", "mult2.out")
    return ImageU8(out), tr
