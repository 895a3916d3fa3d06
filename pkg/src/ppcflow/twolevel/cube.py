"""Cubes, covers and multi-output Boolean functions with don't-cares.

Minterm sets are Python ints used as bitsets over ``2**n`` minterms.  Input
column 0 is the most significant bit of the minterm index, matching the
row-major ``(a << wl_b) | b`` ordering of truth tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from ..errors import ParameterError


@lru_cache(maxsize=32)
def var_masks(n: int) -> tuple[tuple[int, int], ...]:
    """For each input column, the bitsets of minterms where it is 0 and where it is 1."""
    full = (1 << (1 << n)) - 1
    idx = np.arange(1 << n, dtype=np.int64)
    out = []
    for col in range(n):
        ones = bits_to_mask((idx >> (n - 1 - col)) & 1)
        out.append((full & ~ones, ones))
    return tuple(out)


def bits_to_mask(bits: np.ndarray) -> int:
    """Bitset whose bit ``i`` is ``bits[i]`` (a boolean array)."""
    packed = np.packbits(np.asarray(bits, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def mask_to_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_to_bits(mask: int, size: int) -> np.ndarray:
    raw = mask.to_bytes((size + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size].astype(bool)


def cube_mask(inputs: str) -> int:
    """Minterm bitset of an input cube string over ``'01-'``."""
    n = len(inputs)
    vm = var_masks(n)
    m = (1 << (1 << n)) - 1
    for col, ch in enumerate(inputs):
        if ch == "0":
            m &= vm[col][0]
        elif ch == "1":
            m &= vm[col][1]
    return m


def supercube(mask: int, n: int) -> str:
    """Smallest input cube containing every minterm of a non-empty bitset."""
    vm = var_masks(n)
    chars = []
    for col in range(n):
        if mask & vm[col][1] == 0:
            chars.append("0")
        elif mask & vm[col][0] == 0:
            chars.append("1")
        else:
            chars.append("-")
    return "".join(chars)


@dataclass(frozen=True, order=True)
class Cube:
    """Product term: input part over ``'01-'``, output part over ``'01'`` (1 = participates)."""

    inputs: str
    outputs: str

    def __post_init__(self):
        if set(self.inputs) - set("01-") or set(self.outputs) - set("01"):
            raise ParameterError(f"bad cube {self.inputs} {self.outputs}")

    @property
    def literals(self) -> int:
        return len(self.inputs) - self.inputs.count("-")

    def output_indices(self) -> list[int]:
        return [k for k, c in enumerate(self.outputs) if c == "1"]

    def mask(self) -> int:
        return cube_mask(self.inputs)

    def __str__(self) -> str:
        return f"{self.inputs} {self.outputs}"


class Provenance(str, Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"
    IMPORTED = "imported"
    MINTERM = "minterm"


@dataclass(frozen=True)
class Cover:
    """Multi-output sum of products.

    ``dc`` holds cubes that only mark don't-care space (PLA rows whose output
    part uses ``-``); minimizers never produce them.
    """

    num_inputs: int
    num_outputs: int
    cubes: tuple[Cube, ...]
    dc: tuple[Cube, ...] = ()
    provenance: Provenance = field(default=Provenance.IMPORTED, compare=False)
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        seen = set()
        for c in self.cubes + self.dc:
            if len(c.inputs) != self.num_inputs or len(c.outputs) != self.num_outputs:
                raise ParameterError(f"cube {c} does not match {self.num_inputs}/{self.num_outputs}")
        for c in self.cubes:
            if "1" not in c.outputs:
                raise ParameterError(f"cube {c} drives no output")
            if c in seen:
                raise ParameterError(f"duplicate cube {c}")
            seen.add(c)

    @property
    def literal_count(self) -> int:
        return sum(c.literals for c in self.cubes)

    def output_masks(self) -> list[int]:
        """Per output column, the bitset of minterms the cover asserts."""
        out = [0] * self.num_outputs
        for c in self.cubes:
            m = c.mask()
            for k in c.output_indices():
                out[k] |= m
        return out

    def to_function(self) -> "BoolFunction":
        """Read the cover as an ON/DC specification (``fd`` semantics)."""
        on = self.output_masks()
        dc = [0] * self.num_outputs
        for c in self.dc:
            m = c.mask()
            for k in c.output_indices():
                dc[k] |= m
        dc = [d & ~o for d, o in zip(dc, on)]
        return BoolFunction(self.num_inputs, self.num_outputs, tuple(on), tuple(dc))


@dataclass(frozen=True)
class MinimizeStats:
    literals: int
    cubes: int
    iterations: int
    exact: bool
    notes: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {"literals": self.literals, "cubes": self.cubes, "iterations": self.iterations,
                "exact": self.exact, "notes": list(self.notes)}


def stats_for(cover: Cover, iterations: int, exact: bool, notes=()) -> MinimizeStats:
    return MinimizeStats(cover.literal_count, len(cover.cubes), iterations, exact, tuple(notes))


@dataclass(frozen=True)
class BoolFunction:
    """Incompletely specified multi-output function: per output, ON and DC minterm bitsets."""

    n_inputs: int
    n_outputs: int
    on: tuple[int, ...]
    dc: tuple[int, ...]

    def __post_init__(self):
        if len(self.on) != self.n_outputs or len(self.dc) != self.n_outputs:
            raise ParameterError("ON/DC lists must have one entry per output")
        for o, d in zip(self.on, self.dc):
            if o & d:
                raise ParameterError("ON and DC sets overlap")
            if (o | d) >> (1 << self.n_inputs):
                raise ParameterError("minterm outside the input space")

    @property
    def full(self) -> int:
        return (1 << (1 << self.n_inputs)) - 1

    @property
    def off(self) -> tuple[int, ...]:
        return tuple(self.full & ~(o | d) for o, d in zip(self.on, self.dc))

    @classmethod
    def from_outputs(cls, n_inputs: int, n_outputs: int, outputs: np.ndarray) -> "BoolFunction":
        """From per-row output encodings (MSB = output column 0); negative entries are DC rows."""
        outputs = np.asarray(outputs, dtype=np.int64)
        dcrows = outputs < 0
        dc_mask = bits_to_mask(dcrows)
        on, dc = [], []
        for col in range(n_outputs):
            bit = n_outputs - 1 - col
            on.append(bits_to_mask(((outputs >> bit) & 1).astype(bool) & ~dcrows))
            dc.append(dc_mask)
        return cls(n_inputs, n_outputs, tuple(on), tuple(dc))

    def minterm_cover(self) -> Cover:
        """Canonical cover: one minterm cube per row with at least one ON output."""
        n = self.n_inputs
        rows: dict[int, list[str]] = {}
        for k, o in enumerate(self.on):
            for m in mask_to_indices(o):
                rows.setdefault(m, ["0"] * self.n_outputs)[k] = "1"
        cubes = tuple(Cube(format(m, f"0{n}b") if n else "", "".join(rows[m])) for m in sorted(rows))
        return Cover(n, self.n_outputs, cubes, provenance=Provenance.MINTERM)


def as_function(obj) -> BoolFunction:
    if isinstance(obj, BoolFunction):
        return obj
    if isinstance(obj, Cover):
        return obj.to_function()
    if hasattr(obj, "to_function"):
        return obj.to_function()
    raise ParameterError(f"cannot interpret {type(obj).__name__} as a Boolean function")
