"""Cost/quality sweep tables for the Gaussian filter and blending pipelines.

Each row pairs a sparsity configuration with the pipeline's PSNR against the
precise pipeline and the summed literal count of the pipeline's blocks,
normalized by the precise configuration, which is always evaluated first.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .apps.blend import COEFF1_RANGE, COEFF2_RANGE, MULT_SPEC, alpha_to_int, blend
from .apps.gaussian import ADDERS, adder_operand_sets, gaussian_filter
from .apps.image import ImageU8, psnr
from .errors import ParameterError
from .sparsity import PreprocessChain, parse_chain, reachable_set
from .twolevel.segmented import segmented_literal_estimate

COLUMNS = ("sparsity_spec", "psnr_db", "literals", "normalized_literals")
APPS = ("gaussian", "blend")


@dataclass(frozen=True)
class SweepConfig:
    """``label`` is the user-facing spec, e.g. ``"natural+ds:16"`` or ``"precise"``."""

    label: str
    chain: PreprocessChain
    natural: bool

    @classmethod
    def parse(cls, text: str) -> "SweepConfig":
        text = text.strip().lower()
        if text in ("precise", ""):
            return cls("precise", PreprocessChain(), False)
        parts = text.split("+")
        natural = "natural" in parts
        rest = [p for p in parts if p != "natural"]
        chain = parse_chain("+".join(rest)) if rest else PreprocessChain()
        return cls(text, chain, natural)

    @property
    def is_precise(self) -> bool:
        return not self.natural and self.chain.is_identity


PRECISE = SweepConfig("precise", PreprocessChain(), False)


@dataclass(frozen=True)
class ReportRow:
    sparsity_spec: str
    psnr_db: float
    literals: int
    normalized_literals: float

    def as_dict(self) -> dict:
        return {"sparsity_spec": self.sparsity_spec,
                "psnr_db": "inf" if math.isinf(self.psnr_db) else round(self.psnr_db, 4),
                "literals": self.literals,
                "normalized_literals": round(self.normalized_literals, 6)}


def _round_up(wl: int, seg: int) -> int:
    return -(-wl // seg) * seg


def gaussian_literals(chain: PreprocessChain, segment_wl: int = 4, mode: str = "auto") -> int:
    """Summed segmented literal estimate over the eight tree adders.

    Operands are zero-extended to a common multiple of ``segment_wl`` bits.
    """
    sets = adder_operand_sets(chain)
    total = 0
    for ad in ADDERS:
        ra, rb = sets[ad.name]
        wl = _round_up(max(ad.wl_a, ad.wl_b), segment_wl)
        spec = ad.spec.widened(wl, wl)
        total += segmented_literal_estimate(spec, ra.widen(wl), rb.widen(wl), segment_wl, mode).literals
    return total


def blend_literals(chain: PreprocessChain, natural: bool, segment_wl: int = 4, mode: str = "auto") -> int:
    """Summed segmented literal estimate of the two blend multipliers."""
    pix = reachable_set(8, False, None, chain)
    total = 0
    for rng in (COEFF1_RANGE, COEFF2_RANGE):
        coeff = reachable_set(8, False, rng if natural else None, chain)
        total += segmented_literal_estimate(MULT_SPEC, pix, coeff, segment_wl, mode).literals
    return total


def report_tables(app: str, configs, image: ImageU8, image2: ImageU8 | None = None,
                  alpha: float = 0.5, segment_wl: int = 4, mode: str = "auto") -> list[ReportRow]:
    """One row per configuration, precise first; an empty sweep gives no rows."""
    if app not in APPS:
        raise ParameterError(f"app must be one of {APPS}, got {app!r}")
    cfgs = [c if isinstance(c, SweepConfig) else SweepConfig.parse(c) for c in configs]
    if not cfgs:
        return []
    if app == "blend" and image2 is None:
        raise ParameterError("the blend sweep needs two images")
    cfgs = [PRECISE] + [c for c in cfgs if not c.is_precise]

    if app == "gaussian":
        ref, _ = gaussian_filter(image, trace=False)
    else:
        a = alpha_to_int(alpha)
        ref, _ = blend(image, image2, a, use_natural=False, trace=False)

    rows = []
    base = None
    for c in cfgs:
        if app == "gaussian":
            if c.natural:
                raise ParameterError("the Gaussian filter has no natural coefficient sparsity")
            out, _ = gaussian_filter(image, c.chain, trace=False)
            lits = gaussian_literals(c.chain, segment_wl, mode)
        else:
            out, _ = blend(image, image2, a, c.chain, use_natural=c.natural, trace=False)
            lits = blend_literals(c.chain, c.natural, segment_wl, mode)
        if base is None:
            base = lits
        rows.append(ReportRow(c.label, psnr(ref, out).psnr_db, lits, lits / base if base else math.nan))
    return rows


def rows_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.as_dict())
    return buf.getvalue()
