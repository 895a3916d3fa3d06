"""3x3 Gaussian denoising filter as a shift-and-add adder tree.

Kernel (divided by 16)::

    1 2 1
    2 4 2
    1 2 1

Window positions are numbered A1..A9 row by row.  The tree is

    adder1 = A1 + A3            adder3 = (A2 << 1) + (A4 << 1)
    adder2 = A7 + A9            adder4 = (A6 << 1) + (A8 << 1)
    adder5 = adder1 + adder2    adder6 = adder3 + adder4
    adder7 = adder5 + adder6    adder8 = adder7 + (A5 << 2)

and the output is ``adder8 >> 4``.  Borders use edge replication.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..sparsity import PreprocessChain, ValueSet, reachable_set
from ..truthtab import BlockSpec, Op
from .image import ImageU8
from .trace import SignalTrace


@dataclass(frozen=True)
class TreeAdder:
    name: str
    wl_a: int
    wl_b: int

    @property
    def spec(self) -> BlockSpec:
        return BlockSpec(Op.ADD, self.wl_a, self.wl_b)


# operand word lengths follow the largest value each input can carry
ADDERS = (
    TreeAdder("adder1", 8, 8),
    TreeAdder("adder2", 8, 8),
    TreeAdder("adder3", 9, 9),
    TreeAdder("adder4", 9, 9),
    TreeAdder("adder5", 9, 9),
    TreeAdder("adder6", 10, 10),
    TreeAdder("adder7", 10, 11),
    TreeAdder("adder8", 12, 10),
)


def _windows(p: np.ndarray) -> list[np.ndarray]:
    h, w = p.shape
    q = np.pad(p, 1, mode="edge")
    return [q[r:r + h, c:c + w] for r in range(3) for c in range(3)]


def gaussian_filter(img: ImageU8, chain: PreprocessChain = PreprocessChain(),
                    trace: bool = True) -> tuple[ImageU8, SignalTrace | None]:
    if img.width < 3 or img.height < 3:
        raise DataError(f"image must be at least 3x3, got {img.width}x{img.height}")
    chain.validate(8)
    p = chain.apply_array(img.pixels.astype(np.int32))
    a1, a2, a3, a4, a5, a6, a7, a8, a9 = _windows(p)

    ops = {
        "adder1": (a1, a3),
        "adder2": (a7, a9),
        "adder3": (a2 << 1, a4 << 1),
        "adder4": (a6 << 1, a8 << 1),
    }
    s = {k: l + r for k, (l, r) in ops.items()}
    ops["adder5"] = (s["adder1"], s["adder2"])
    s["adder5"] = s["adder1"] + s["adder2"]
    ops["adder6"] = (s["adder3"], s["adder4"])
    s["adder6"] = s["adder3"] + s["adder4"]
    ops["adder7"] = (s["adder5"], s["adder6"])
    s["adder7"] = s["adder5"] + s["adder6"]
    ops["adder8"] = (s["adder7"], a5 << 2)
    s["adder8"] = s["adder7"] + (a5 << 2)
    out = s["adder8"] >> 4

    tr = None
    if trace:
        tr = SignalTrace()
        tr.record("input", p, 8)
        for ad in ADDERS:
            left, right = ops[ad.name]
            tr.record(f"{ad.name}.a", left, ad.wl_a)
            tr.record(f"{ad.name}.b", right, ad.wl_b)
            tr.record(f"{ad.name}.out", s[ad.name], ad.spec.full_wl)
            tr.pair(ad.name, f"{ad.name}.a", f"{ad.name}.b")
        tr.record("output", out, 8)
    return ImageU8(out.astype(np.uint8)), tr


def gaussian_reference(img: ImageU8) -> ImageU8:
    """Direct floor(sum(kernel * window) / 16); independent of the adder tree."""
    k = np.array([[1, 2, 1], [2, 4, 2], [1, 2, 1]], dtype=np.int64)
    q = np.pad(img.pixels.astype(np.int64), 1, mode="edge")
    h, w = img.shape
    acc = np.zeros((h, w), dtype=np.int64)
    for r in range(3):
        for c in range(3):
            acc += k[r, c] * q[r:r + h, c:c + w]
    return ImageU8(acc // 16)


def _sumset(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.unique(np.add.outer(a, b))


def adder_operand_sets(chain: PreprocessChain = PreprocessChain(),
                       natural=None) -> dict[str, tuple[ValueSet, ValueSet]]:
    """Reachable operand sets of every tree adder, propagated from the pixel set.

    The nine window pixels are independent primary inputs, so each sumset is
    exactly the set of values the adder operand can take.
    """
    r = reachable_set(8, False, natural, chain).to_array()
    r2 = r << 1
    s1 = _sumset(r, r)
    s3 = _sumset(r2, r2)
    s5 = _sumset(s1, s1)
    s6 = _sumset(s3, s3)
    s7 = _sumset(s5, s6)
    vals = {
        "adder1": (r, r), "adder2": (r, r),
        "adder3": (r2, r2), "adder4": (r2, r2),
        "adder5": (s1, s1), "adder6": (s3, s3),
        "adder7": (s5, s6), "adder8": (s7, r << 2),
    }
    out = {}
    for ad in ADDERS:
        a, b = vals[ad.name]
        out[ad.name] = (ValueSet.from_values(ad.wl_a, a), ValueSet.from_values(ad.wl_b, b))
    return out
