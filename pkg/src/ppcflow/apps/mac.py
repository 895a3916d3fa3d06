"""Multiply-accumulate dot products for the face-recognition neuron."""
from __future__ import annotations

from typing import Sequence

from ..errors import ParameterError
from ..fxblocks import ACC_WL, MAC_MAX_TERMS, FixedWord, PpcBlock, mac_step


def mac_dotproduct(pixels: Sequence[int], weights: Sequence[int], block: PpcBlock,
                   acc_wl: int = ACC_WL) -> FixedWord:
    """Left fold of :func:`mac_step` from a zero accumulator."""
    if len(pixels) != len(weights):
        raise ParameterError(f"{len(pixels)} pixels but {len(weights)} weights")
    if len(pixels) > MAC_MAX_TERMS:
        raise ParameterError(f"at most {MAC_MAX_TERMS} terms, got {len(pixels)}")
    s = block.spec
    acc = FixedWord(0, acc_wl, True)
    for p, w in zip(pixels, weights):
        acc = mac_step(acc, FixedWord.of(int(p), s.wl_a, s.signed_a),
                       FixedWord.of(int(w), s.wl_b, s.signed_b), block)
    return acc
