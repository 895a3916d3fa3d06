"""Per-signal value tracing for application pipelines."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError
from ..sparsity import Histogram, ValueSet, histogram_of


@dataclass
class SignalTrace:
    """Histograms of named unsigned signals, plus which signals feed the same adder."""

    hists: dict[str, Histogram] = field(default_factory=dict)
    pairs: dict[str, tuple[str, str]] = field(default_factory=dict)

    def record(self, name: str, values, wl: int) -> None:
        h = histogram_of(values, wl)
        old = self.hists.get(name)
        if old is not None:
            if old.wl != wl:
                raise DataError(f"signal {name} recorded with two widths")
            h = Histogram(wl, old.counts + h.counts)
        self.hists[name] = h

    def pair(self, block: str, left: str, right: str) -> None:
        self.pairs[block] = (left, right)

    def observed(self, name: str) -> ValueSet:
        return self.hists[name].support()

    def as_dict(self) -> dict:
        return {name: {"wl": h.wl, "counts": {int(v): int(h.counts[v]) for v in np.flatnonzero(h.counts)}}
                for name, h in self.hists.items()}


@dataclass(frozen=True)
class SignalInfo:
    name: str
    wl: int
    observed: ValueSet
    sparsity: float       # 1 - |observed| / 2**wl
    ds_step: int          # largest power of two dividing every observed value
    ds_like: bool

    def as_dict(self) -> dict:
        return {"signal": self.name, "wl": self.wl, "observed_count": len(self.observed),
                "observed": str(self.observed), "sparsity_pct": 100 * self.sparsity,
                "ds_step": self.ds_step, "ds_like": self.ds_like}


@dataclass(frozen=True)
class PairInfo:
    block: str
    left: str
    right: str
    row_sparsity: float   # share of the block's input rows never reached

    def as_dict(self) -> dict:
        return {"block": self.block, "left": self.left, "right": self.right,
                "row_sparsity_pct": 100 * self.row_sparsity}


@dataclass(frozen=True)
class TraceReport:
    signals: tuple[SignalInfo, ...]
    pairs: tuple[PairInfo, ...]

    def signal(self, name: str) -> SignalInfo:
        for s in self.signals:
            if s.name == name:
                return s
        raise KeyError(name)

    def pair(self, block: str) -> PairInfo:
        for p in self.pairs:
            if p.block == block:
                return p
        raise KeyError(block)

    def as_dict(self) -> dict:
        return {"signals": [s.as_dict() for s in self.signals], "pairs": [p.as_dict() for p in self.pairs]}


def _ds_step(h: Histogram) -> int:
    vals = np.flatnonzero(h.counts)
    acc = int(np.bitwise_or.reduce(vals)) if vals.size else 0
    if acc == 0:
        return 1 << h.wl
    return acc & -acc


def trace_report(trace: SignalTrace) -> TraceReport:
    infos = {}
    for name, h in trace.hists.items():
        obs = h.support()
        step = _ds_step(h)
        infos[name] = SignalInfo(name, h.wl, obs, 1 - len(obs) / (1 << h.wl), step,
                                 bool(len(obs)) and step >= 2)
    pairs = []
    for block, (l, r) in trace.pairs.items():
        a, b = infos[l], infos[r]
        reached = len(a.observed) * len(b.observed)
        pairs.append(PairInfo(block, l, r, 1 - reached / (1 << (a.wl + b.wl))))
    return TraceReport(tuple(infos.values()), tuple(pairs))
