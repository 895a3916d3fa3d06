"""Truth tables of adder/multiplier blocks with don't-cares on unreachable inputs."""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import CapacityError, ParameterError
from .sparsity import NaturalRange, PreprocessChain, ValueSet, decode, reachable_set

ENUM_GUARD_BITS = 24
KM_MAX_BITS = 4

DONT_CARE = None


class Op(str, Enum):
    ADD = "add"
    MUL = "mul"


@dataclass(frozen=True)
class BlockSpec:
    """An arithmetic block.

    ``keep_high`` is ``None`` for a full-width output, otherwise the number of
    most significant bits of the full-width result that are kept.
    """

    op: Op
    wl_a: int
    wl_b: int
    signed_a: bool = False
    signed_b: bool = False
    keep_high: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "op", Op(self.op))
        if self.wl_a < 1 or self.wl_b < 1:
            raise ParameterError("operand word lengths must be positive")
        if self.op is Op.ADD and self.signed_a != self.signed_b:
            raise ParameterError("mixed-signedness adders are not supported")
        if self.keep_high is not None and not 1 <= self.keep_high <= self.full_wl:
            raise ParameterError(f"cannot keep {self.keep_high} of {self.full_wl} output bits")

    @property
    def full_wl(self) -> int:
        if self.op is Op.ADD:
            return max(self.wl_a, self.wl_b) + 1
        return self.wl_a + self.wl_b

    @property
    def out_wl(self) -> int:
        return self.full_wl if self.keep_high is None else self.keep_high

    @property
    def n_inputs(self) -> int:
        return self.wl_a + self.wl_b

    @property
    def signed_out(self) -> bool:
        return self.signed_a or self.signed_b

    def exact(self, a, b):
        """Exact arithmetic result on operand values (ints or int64 arrays)."""
        return a + b if self.op is Op.ADD else a * b

    def output_encoding(self, a_enc, b_enc):
        """Output encoding for operand encodings; works elementwise on arrays."""
        a = decode(a_enc, self.wl_a, self.signed_a)
        b = decode(b_enc, self.wl_b, self.signed_b)
        full = self.exact(a, b) & ((1 << self.full_wl) - 1)
        if self.keep_high is not None:
            full = full >> (self.full_wl - self.keep_high)
        return full

    def output_value(self, out_enc):
        return decode(out_enc, self.out_wl, self.signed_out)

    def widened(self, wl_a: int, wl_b: int) -> "BlockSpec":
        return replace(self, wl_a=wl_a, wl_b=wl_b)

    def __str__(self) -> str:
        def w(wl, s):
            return f"{wl}{'s' if s else 'u'}"
        tail = "" if self.keep_high is None else f" keep{self.keep_high}"
        return f"{self.op.value} {w(self.wl_a, self.signed_a)}x{w(self.wl_b, self.signed_b)}{tail}"


@dataclass(frozen=True)
class TruthTable:
    """Row ``(a, b)`` holds the block output, or ``DONT_CARE`` when either operand is unreachable.

    Rows are indexed row-major: ``index = (a << wl_b) | b``.  Input bit columns
    run from the MSB of ``a`` to the LSB of ``b``; output columns from MSB to LSB.
    """

    spec: BlockSpec
    reach_a: ValueSet
    reach_b: ValueSet

    @property
    def n_inputs(self) -> int:
        return self.spec.n_inputs

    @property
    def n_outputs(self) -> int:
        return self.spec.out_wl

    @property
    def n_rows(self) -> int:
        return 1 << self.n_inputs

    def row(self, a: int, b: int):
        if a not in self.reach_a or b not in self.reach_b:
            return DONT_CARE
        return int(self.spec.output_encoding(a, b))

    def rows(self):
        """Yield ``(a, b, output_or_None)`` in row-major order."""
        for a in range(1 << self.spec.wl_a):
            for b in range(1 << self.spec.wl_b):
                yield a, b, self.row(a, b)

    def outputs(self) -> np.ndarray:
        """Output encodings for every row as int64, with -1 marking don't-cares."""
        if self.n_inputs > ENUM_GUARD_BITS:
            raise CapacityError(f"{self.n_inputs} input bits exceeds the enumeration guard")
        wa, wb = self.spec.wl_a, self.spec.wl_b
        a = np.arange(1 << wa, dtype=np.int64)[:, None]
        b = np.arange(1 << wb, dtype=np.int64)[None, :]
        out = self.spec.output_encoding(a, b)
        care = self.reach_a.mask()[:, None] & self.reach_b.mask()[None, :]
        return np.where(care, out, -1).ravel()

    def care_mask(self) -> np.ndarray:
        return np.logical_and.outer(self.reach_a.mask(), self.reach_b.mask()).ravel()

    def to_function(self):
        from .twolevel.cube import BoolFunction
        return BoolFunction.from_outputs(self.n_inputs, self.n_outputs, self.outputs())


def gen_block_tt(spec: BlockSpec, reach_a: ValueSet | None = None,
                 reach_b: ValueSet | None = None) -> TruthTable:
    reach_a = ValueSet.full(spec.wl_a) if reach_a is None else reach_a
    reach_b = ValueSet.full(spec.wl_b) if reach_b is None else reach_b
    if reach_a.wl != spec.wl_a or reach_b.wl != spec.wl_b:
        raise ParameterError(
            f"value sets ({reach_a.wl}, {reach_b.wl} bits) do not match {spec}")
    return TruthTable(spec, reach_a, reach_b)


def block_tt(spec: BlockSpec, chain_a=PreprocessChain(), chain_b=PreprocessChain(),
             natural_a: NaturalRange | None = None, natural_b: NaturalRange | None = None) -> TruthTable:
    """Truth table of a block whose operands come from natural ranges through preprocessing chains."""
    ra = reachable_set(spec.wl_a, spec.signed_a, natural_a, chain_a)
    rb = reachable_set(spec.wl_b, spec.signed_b, natural_b, chain_b)
    return gen_block_tt(spec, ra, rb)


def dc_count_enumerate(tt: TruthTable) -> int:
    if tt.n_inputs > ENUM_GUARD_BITS:
        raise CapacityError(f"{tt.n_inputs} input bits exceeds the enumeration guard of {ENUM_GUARD_BITS}")
    return int(np.count_nonzero(~tt.care_mask()))


def _check_pow2(*xs):
    for x in xs:
        if x < 1 or x & (x - 1):
            raise ParameterError(f"DS step must be a power of two, got {x}")


def dc_formula_ds(wl_a: int, wl_b: int, x: int, x2: int) -> int:
    """DC rows of a block with DS_x on operand a and DS_x2 on operand b."""
    _check_pow2(x, x2)
    total = 1 << (wl_a + wl_b)
    return int(total * (1 - Fraction(1, x * x2)))


@dataclass(frozen=True)
class PaperAssertedCount:
    value: Fraction
    enumerated: int | None = None
    note: str = "paper-asserted"

    @property
    def agrees(self) -> bool | None:
        return None if self.enumerated is None else self.value == self.enumerated


def dc_formula_th(wl: int, x: int, x2: int, y: int = 0, y2: int = 0) -> PaperAssertedCount:
    """Thresholding DC count as printed, 2^(2wl) * (x/2^wl) * (x2/2^wl), beside the enumerated count.

    The printed closed form counts the thresholded region itself.  Under the
    mapping "values below x become y" the unreachable operand values are the
    x values below the threshold minus y when y < x, so the two disagree; the
    enumeration is normative.
    """
    scale = Fraction(1 << (2 * wl))
    printed = scale * Fraction(x, 1 << wl) * Fraction(x2, 1 << wl)
    enumerated = None
    if 2 * wl <= ENUM_GUARD_BITS:
        from .sparsity import TH
        spec = BlockSpec(Op.MUL, wl, wl)
        tt = block_tt(spec, PreprocessChain((TH(x, y),)), PreprocessChain((TH(x2, y2),)))
        enumerated = dc_count_enumerate(tt)
    return PaperAssertedCount(printed, enumerated)


def gray_sequence(bits: int) -> list[int]:
    return [i ^ (i >> 1) for i in range(1 << bits)]


def km_sequence(bits: int) -> list[int]:
    """Karnaugh-map axis order: a 2-bit Gray code on the low bits, nested
    inside a Gray code on the remaining high bits (000 001 011 010 100 101 111 110
    for 3 bits)."""
    if bits <= 2:
        return gray_sequence(bits)
    return [(h << 2) | g for h in gray_sequence(bits - 2) for g in gray_sequence(2)]


def km_grid(tt: TruthTable, output_bit: int) -> list[list[str]]:
    """Karnaugh map cells of one output bit (bit 0 = LSB): rows a, columns b, in ``km_sequence`` order."""
    wa, wb = tt.spec.wl_a, tt.spec.wl_b
    if wa > KM_MAX_BITS or wb > KM_MAX_BITS:
        raise CapacityError("Karnaugh maps are limited to 4-bit operands")
    if not 0 <= output_bit < tt.n_outputs:
        raise ParameterError(f"output bit {output_bit} outside 0..{tt.n_outputs - 1}")
    grid = []
    for a in km_sequence(wa):
        line = []
        for b in km_sequence(wb):
            v = tt.row(a, b)
            line.append("d" if v is DONT_CARE else str((v >> output_bit) & 1))
        grid.append(line)
    return grid


def km_render(tt: TruthTable, output_bit: int) -> str:
    wa, wb = tt.spec.wl_a, tt.spec.wl_b
    grid = km_grid(tt, output_bit)
    a_lbl = "".join(f"a{i}" for i in reversed(range(wa)))
    b_lbl = "".join(f"b{i}" for i in reversed(range(wb)))
    corner = f"{a_lbl}\\{b_lbl}"
    width = max(len(corner), wa)
    lines = [corner.ljust(width) + " " + " ".join(format(b, f"0{wb}b") for b in km_sequence(wb))]
    for a, cells in zip(km_sequence(wa), grid):
        lines.append(format(a, f"0{wa}b").ljust(width) + " "
                     + " ".join(c.center(wb) for c in cells).rstrip())
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Segment:
    """One sub-block of a segmented block.

    ``shift`` is the weight (in bits) of the sub-block's result within the
    composed result; ``a_field``/``b_field`` index the operand fields it reads.
    """

    spec: BlockSpec
    reach_a: ValueSet
    reach_b: ValueSet
    shift: int
    a_field: int
    b_field: int


def segmented_blocks(spec: BlockSpec, segment_wl: int, reach_a: ValueSet | None = None,
                     reach_b: ValueSet | None = None) -> list[Segment]:
    """Split a block into ``segment_wl``-bit sub-blocks.

    Multipliers become the grid of partial-product sub-multipliers, adders a
    chain of segment adders.  Operand value sets are projected onto each field
    independently, so correlations between fields are not exploited.  Only the
    most significant field of a signed operand stays signed.
    """
    reach_a = ValueSet.full(spec.wl_a) if reach_a is None else reach_a
    reach_b = ValueSet.full(spec.wl_b) if reach_b is None else reach_b
    if spec.wl_a % segment_wl or spec.wl_b % segment_wl:
        raise ParameterError(f"{spec} is not divisible into {segment_wl}-bit segments")
    na, nb = spec.wl_a // segment_wl, spec.wl_b // segment_wl
    fa = [reach_a.project(i * segment_wl, segment_wl) for i in range(na)]
    fb = [reach_b.project(j * segment_wl, segment_wl) for j in range(nb)]
    if na == 1 and nb == 1:
        return [Segment(spec, reach_a, reach_b, 0, 0, 0)]
    out = []
    if spec.op is Op.MUL:
        for i in range(na):
            for j in range(nb):
                sub = BlockSpec(Op.MUL, segment_wl, segment_wl,
                                spec.signed_a and i == na - 1, spec.signed_b and j == nb - 1)
                out.append(Segment(sub, fa[i], fb[j], (i + j) * segment_wl, i, j))
    else:
        if na != nb:
            raise ParameterError("segmented adders need equal operand widths")
        for i in range(na):
            top = i == na - 1
            sub = BlockSpec(Op.ADD, segment_wl, segment_wl, spec.signed_a and top, spec.signed_b and top)
            out.append(Segment(sub, fa[i], fb[i], i * segment_wl, i, i))
    return out
