"""Input preprocessings, natural ranges and reachable value sets.

Values handled here are operand *values*: plain non-negative integers for
unsigned operands and signed integers for two's-complement operands.
`ValueSet` always stores *encodings* (``value & (2**wl - 1)``) so that it can
be used directly to mark truth-table rows.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, ParameterError, UnsupportedPreprocessing


def _is_pow2(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


def ds_apply(v: int, x: int) -> int:
    """Down-sample: clear the low ``log2(x)`` bits of ``v``.

    For unsigned values this is ``v - v % x``; for negative values it rounds
    toward minus infinity, which is the same bit operation on the encoding.
    """
    if not _is_pow2(x):
        raise ParameterError(f"DS step must be a power of two, got {x}")
    return v & ~(x - 1)


def th_apply(v: int, x: int, y: int, signed: bool = False) -> int:
    """Threshold: every value below ``x`` becomes ``y``."""
    if signed:
        raise UnsupportedPreprocessing("thresholding is only defined for unsigned operands")
    return y if v < x else v


@dataclass(frozen=True)
class Preprocessing:
    kind: str  # "id", "ds" or "th"
    x: int = 1
    y: int = 0

    def __post_init__(self):
        if self.kind not in ("id", "ds", "th"):
            raise ParameterError(f"unknown preprocessing kind {self.kind!r}")
        if self.kind == "ds" and not _is_pow2(self.x):
            raise ParameterError(f"DS step must be a power of two, got {self.x}")
        if self.kind == "th" and (self.x < 0 or self.y < 0):
            raise ParameterError("threshold parameters must be non-negative")

    @property
    def k(self) -> int:
        """log2 of the DS step."""
        if self.kind != "ds":
            raise ParameterError("k is only defined for down-sampling")
        return self.x.bit_length() - 1

    def validate(self, wl: int, signed: bool = False) -> None:
        if self.kind == "ds" and self.x > 1 << wl:
            raise ParameterError(f"DS_{self.x} exceeds the {wl}-bit domain")
        if self.kind == "th":
            if signed:
                raise UnsupportedPreprocessing("thresholding is only defined for unsigned operands")
            if self.x > 1 << wl or self.y >= 1 << wl:
                raise ParameterError(f"TH_{self.x}^{self.y} outside the {wl}-bit domain")

    def apply(self, v: int, signed: bool = False) -> int:
        if self.kind == "ds":
            return ds_apply(v, self.x)
        if self.kind == "th":
            return th_apply(v, self.x, self.y, signed)
        return v

    def apply_array(self, arr: np.ndarray, signed: bool = False) -> np.ndarray:
        if self.kind == "ds":
            return arr & ~np.asarray(self.x - 1, dtype=arr.dtype)
        if self.kind == "th":
            if signed:
                raise UnsupportedPreprocessing("thresholding is only defined for unsigned operands")
            return np.where(arr < self.x, np.asarray(self.y, dtype=arr.dtype), arr)
        return arr

    def __str__(self) -> str:
        if self.kind == "ds":
            return f"ds:{self.x}"
        if self.kind == "th":
            return f"th:{self.x}:{self.y}"
        return "id"


IDENTITY = Preprocessing("id")


def DS(x: int) -> Preprocessing:
    return Preprocessing("ds", x)


def TH(x: int, y: int) -> Preprocessing:
    return Preprocessing("th", x, y)


@dataclass(frozen=True)
class PreprocessChain:
    """Preprocessings applied left to right.

    The conventional order when thresholding and down-sampling are combined is
    TH first, then DS (background removal before quantization).
    """

    steps: tuple[Preprocessing, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(s for s in self.steps if s.kind != "id"))

    @property
    def is_identity(self) -> bool:
        return not self.steps

    def validate(self, wl: int, signed: bool = False) -> None:
        for s in self.steps:
            s.validate(wl, signed)

    def apply(self, v: int, signed: bool = False) -> int:
        for s in self.steps:
            v = s.apply(v, signed)
        return v

    def apply_array(self, arr, signed: bool = False) -> np.ndarray:
        arr = np.asarray(arr)
        for s in self.steps:
            arr = s.apply_array(arr, signed)
        return arr

    def ds_only_step(self) -> int | None:
        """The DS step if the chain is pure down-sampling (1 for identity), else None."""
        step = 1
        for s in self.steps:
            if s.kind != "ds":
                return None
            step = max(step, s.x)
        return step

    def __str__(self) -> str:
        return "+".join(str(s) for s in self.steps) or "id"

    def __add__(self, other: "PreprocessChain") -> "PreprocessChain":
        return PreprocessChain(self.steps + other.steps)


def chain_apply(chain: PreprocessChain, v: int, signed: bool = False) -> int:
    return chain.apply(v, signed)


def parse_preprocessing(text: str) -> Preprocessing:
    parts = text.strip().lower().split(":")
    try:
        if parts == ["id"] or parts == [""]:
            return IDENTITY
        if parts[0] == "ds" and len(parts) == 2:
            return DS(int(parts[1]))
        if parts[0] == "th" and len(parts) == 3:
            return TH(int(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise ParameterError(f"cannot parse preprocessing {text!r} (expected ds:<x>, th:<x>:<y> or id)")


def parse_chain(text: str) -> PreprocessChain:
    """Parse ``"th:48:48+ds:16"`` style strings."""
    return PreprocessChain(tuple(parse_preprocessing(p) for p in text.split("+")))


@dataclass(frozen=True)
class NaturalRange:
    lo: int
    hi: int
    signed: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise ParameterError(f"empty natural range [{self.lo}, {self.hi}]")

    @classmethod
    def full(cls, wl: int, signed: bool = False) -> "NaturalRange":
        if signed:
            return cls(-(1 << (wl - 1)), (1 << (wl - 1)) - 1, True)
        return cls(0, (1 << wl) - 1, False)

    def validate(self, wl: int) -> None:
        dom = NaturalRange.full(wl, self.signed)
        if self.lo < dom.lo or self.hi > dom.hi:
            raise ParameterError(f"natural range [{self.lo}, {self.hi}] outside the {wl}-bit domain")

    def __contains__(self, v: int) -> bool:
        return self.lo <= v <= self.hi

    def __str__(self) -> str:
        return f"{self.lo}:{self.hi}"


def parse_range(text: str, signed: bool = False) -> NaturalRange:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise ParameterError(f"cannot parse natural range {text!r} (expected lo:hi)") from None
    return NaturalRange(lo, hi, signed)


@dataclass(frozen=True)
class ValueSet:
    """Set of reachable encodings of a ``wl``-bit operand, as sorted inclusive intervals."""

    wl: int
    intervals: tuple[tuple[int, int], ...]
    _starts: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        top = (1 << self.wl) - 1
        prev = -2
        for lo, hi in self.intervals:
            if lo > hi or lo <= prev + 1 or lo < 0 or hi > top:
                raise ParameterError(f"invalid interval list {self.intervals!r} for wl={self.wl}")
            prev = hi
        object.__setattr__(self, "_starts", tuple(lo for lo, _ in self.intervals))

    @classmethod
    def full(cls, wl: int) -> "ValueSet":
        return cls(wl, ((0, (1 << wl) - 1),))

    @classmethod
    def from_values(cls, wl: int, values: Iterable[int]) -> "ValueSet":
        arr = np.unique(np.fromiter((int(v) for v in values), dtype=np.int64))
        return cls.from_sorted_array(wl, arr)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "ValueSet":
        """Build from a boolean membership array of length ``2**wl``."""
        wl = int(len(mask)).bit_length() - 1
        return cls.from_sorted_array(wl, np.flatnonzero(mask))

    @classmethod
    def from_sorted_array(cls, wl: int, arr: np.ndarray) -> "ValueSet":
        if len(arr) == 0:
            return cls(wl, ())
        if arr[0] < 0 or arr[-1] >= 1 << wl:
            raise DataError(f"value outside the {wl}-bit encoding domain")
        breaks = np.flatnonzero(np.diff(arr) != 1)
        starts = np.concatenate(([arr[0]], arr[breaks + 1]))
        ends = np.concatenate((arr[breaks], [arr[-1]]))
        return cls(wl, tuple((int(a), int(b)) for a, b in zip(starts, ends)))

    def __len__(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    cardinality = property(__len__)

    def __contains__(self, v: int) -> bool:
        i = bisect.bisect_right(self._starts, v) - 1
        return i >= 0 and v <= self.intervals[i][1]

    def __iter__(self):
        for lo, hi in self.intervals:
            yield from range(lo, hi + 1)

    def to_array(self) -> np.ndarray:
        if not self.intervals:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in self.intervals])

    def mask(self) -> np.ndarray:
        m = np.zeros(1 << self.wl, dtype=bool)
        for lo, hi in self.intervals:
            m[lo:hi + 1] = True
        return m

    def issubset(self, other: "ValueSet") -> bool:
        return all(v in other for v in self)

    def project(self, shift: int, width: int) -> "ValueSet":
        """Set of bit fields ``(v >> shift) & (2**width - 1)`` over all members."""
        vals = (self.to_array() >> shift) & ((1 << width) - 1)
        return ValueSet.from_values(width, np.unique(vals))

    def widen(self, wl: int) -> "ValueSet":
        if wl < self.wl:
            raise ParameterError("cannot narrow a value set")
        return ValueSet(wl, self.intervals)

    def __str__(self) -> str:
        parts = [f"{lo}" if lo == hi else f"{lo}..{hi}" for lo, hi in self.intervals]
        return "{" + ", ".join(parts) + "}"


def encode(v, wl: int):
    return v & ((1 << wl) - 1)


def decode(enc, wl: int, signed: bool):
    if not signed:
        return enc
    half = 1 << (wl - 1)
    return ((enc + half) & ((1 << wl) - 1)) - half


def reachable_set(wl: int, signed: bool = False, natural: NaturalRange | None = None,
                  chain: PreprocessChain = PreprocessChain()) -> ValueSet:
    """Encodings reachable at an operand after natural-range restriction and preprocessing."""
    if natural is None:
        natural = NaturalRange.full(wl, signed)
    natural.validate(wl)
    chain.validate(wl, signed)
    vals = np.arange(natural.lo, natural.hi + 1, dtype=np.int64)
    out = chain.apply_array(vals, signed)
    return ValueSet.from_values(wl, np.unique(encode(out, wl)))


@dataclass(frozen=True)
class Histogram:
    wl: int
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def normalized(self) -> np.ndarray:
        tot = self.total
        if tot == 0:
            return np.zeros(len(self.counts))
        return self.counts / tot

    def support(self) -> ValueSet:
        return ValueSet.from_mask(self.counts > 0)


def histogram_of(values: Sequence[int] | np.ndarray, wl: int) -> Histogram:
    arr = np.asarray(values, dtype=np.int64).ravel()
    if arr.size and (arr.min() < 0 or arr.max() >= 1 << wl):
        raise DataError(f"value outside the {wl}-bit domain")
    return Histogram(wl, np.bincount(arr, minlength=1 << wl))
