"""Behavioral fixed-point models of partially-precise blocks.

A block computes the precise operation on preprocessed operands.  Inputs
outside the natural ranges are either rejected (strict) or evaluated
precisely (permissive), which is one legal choice for the don't-care rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import AccumulatorOverflow, ParameterError, RangeViolation
from .sparsity import NaturalRange, PreprocessChain, ValueSet, decode, encode, reachable_set
from .truthtab import BlockSpec, Op

# 960 products of at most 159 * 127 in magnitude stay below 2**25
ACC_WL = 26
MAC_MAX_TERMS = 960


@dataclass(frozen=True)
class FixedWord:
    """A ``wl``-bit word; ``value`` is the two's-complement encoding when signed."""

    value: int
    wl: int
    signed: bool = False

    def __post_init__(self):
        if self.wl < 1:
            raise ParameterError("word length must be positive")
        if not 0 <= self.value < 1 << self.wl:
            raise ParameterError(f"encoding {self.value} outside {self.wl} bits")

    @classmethod
    def of(cls, number: int, wl: int, signed: bool = False) -> "FixedWord":
        """Word holding the integer ``number``; it must be representable."""
        lo, hi = (-(1 << (wl - 1)), (1 << (wl - 1)) - 1) if signed else (0, (1 << wl) - 1)
        if not lo <= number <= hi:
            raise ParameterError(f"{number} is not representable in {wl} {'signed' if signed else 'unsigned'} bits")
        return cls(encode(number, wl), wl, signed)

    @property
    def number(self) -> int:
        return int(decode(self.value, self.wl, self.signed))

    def __int__(self) -> int:
        return self.number


class Strictness(str, Enum):
    STRICT = "strict"
    PERMISSIVE = "permissive"


@dataclass(frozen=True)
class PpcBlock:
    spec: BlockSpec
    chain_a: PreprocessChain = PreprocessChain()
    chain_b: PreprocessChain = PreprocessChain()
    natural_a: NaturalRange | None = None
    natural_b: NaturalRange | None = None
    strictness: Strictness = Strictness.PERMISSIVE
    _nat: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        s = self.spec
        self.chain_a.validate(s.wl_a, s.signed_a)
        self.chain_b.validate(s.wl_b, s.signed_b)
        na = self.natural_a or NaturalRange.full(s.wl_a, s.signed_a)
        nb = self.natural_b or NaturalRange.full(s.wl_b, s.signed_b)
        na.validate(s.wl_a)
        nb.validate(s.wl_b)
        object.__setattr__(self, "strictness", Strictness(self.strictness))
        object.__setattr__(self, "_nat", (na, nb))

    @property
    def reach_a(self) -> ValueSet:
        return reachable_set(self.spec.wl_a, self.spec.signed_a, self._nat[0], self.chain_a)

    @property
    def reach_b(self) -> ValueSet:
        return reachable_set(self.spec.wl_b, self.spec.signed_b, self._nat[1], self.chain_b)

    def _check(self, a: FixedWord, b: FixedWord) -> None:
        s = self.spec
        if (a.wl, a.signed) != (s.wl_a, s.signed_a) or (b.wl, b.signed) != (s.wl_b, s.signed_b):
            raise ParameterError(f"operands ({a.wl}, {b.wl} bits) do not match {s}")
        if self.strictness is Strictness.STRICT:
            for name, w, nat in (("a", a, self._nat[0]), ("b", b, self._nat[1])):
                if w.number not in nat:
                    raise RangeViolation(f"operand {name}={w.number} outside natural range [{nat.lo}, {nat.hi}]")

    def eval(self, a: FixedWord, b: FixedWord) -> FixedWord:
        self._check(a, b)
        s = self.spec
        pa = self.chain_a.apply(a.number, s.signed_a)
        pb = self.chain_b.apply(b.number, s.signed_b)
        out = s.output_encoding(encode(pa, s.wl_a), encode(pb, s.wl_b))
        return FixedWord(int(out), s.out_wl, s.signed_out)

    def eval_array(self, a, b) -> np.ndarray:
        """Vectorized evaluation on operand *values*; returns output values (decoded)."""
        s = self.spec
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.strictness is Strictness.STRICT:
            for name, v, nat in (("a", a, self._nat[0]), ("b", b, self._nat[1])):
                if v.size and (v.min() < nat.lo or v.max() > nat.hi):
                    raise RangeViolation(f"operand {name} outside natural range [{nat.lo}, {nat.hi}]")
        pa = self.chain_a.apply_array(a, s.signed_a)
        pb = self.chain_b.apply_array(b, s.signed_b)
        enc = s.output_encoding(encode(pa, s.wl_a), encode(pb, s.wl_b))
        return s.output_value(enc)


def ppa_eval(block: PpcBlock, a: FixedWord, b: FixedWord) -> FixedWord:
    if block.spec.op is not Op.ADD:
        raise ParameterError(f"{block.spec} is not an adder")
    return block.eval(a, b)


def ppm_eval(block: PpcBlock, a: FixedWord, b: FixedWord) -> FixedWord:
    if block.spec.op is not Op.MUL:
        raise ParameterError(f"{block.spec} is not a multiplier")
    return block.eval(a, b)


def mac_block(chain_pixel: PreprocessChain = PreprocessChain(), natural_pixel: NaturalRange | None = None,
              strictness: Strictness = Strictness.PERMISSIVE) -> PpcBlock:
    """MAC multiplier: unsigned 8-bit pixel times signed 8-bit weight."""
    spec = BlockSpec(Op.MUL, 8, 8, signed_a=False, signed_b=True)
    return PpcBlock(spec, chain_pixel, PreprocessChain(), natural_pixel, None, strictness)


def mac_step(acc: FixedWord, pixel: FixedWord, weight: FixedWord, block: PpcBlock) -> FixedWord:
    """``acc + block(pixel, weight)``; raises instead of wrapping."""
    if not acc.signed:
        raise ParameterError("the accumulator must be signed")
    prod = ppm_eval(block, pixel, weight).number
    total = acc.number + prod
    lim = 1 << (acc.wl - 1)
    if not -lim <= total < lim:
        raise AccumulatorOverflow(f"accumulator overflow: {acc.number} + {prod} needs more than {acc.wl} bits")
    return FixedWord.of(total, acc.wl, True)
