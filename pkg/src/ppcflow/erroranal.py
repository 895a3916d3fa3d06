"""Exact error statistics of partially-precise adders and multipliers.

The error of a pair is ``e(a, b) = f(a, b) - f(chain_a(a), chain_b(b))`` where
``f`` is the precise block.  Aggregation uses exact integers and
:class:`fractions.Fraction`, so results do not depend on summation order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapacityError, ParameterError
from .sparsity import DS, TH, Histogram, NaturalRange, PreprocessChain
from .truthtab import BlockSpec, Op

ORACLE_GUARD_BITS = 24
_CHUNK = 1 << 20


@dataclass(frozen=True)
class ErrorStats:
    pe: Fraction
    me: Fraction
    mae: Fraction
    n_pairs: int
    method: str = "oracle"

    def as_dict(self) -> dict:
        return {"pe": float(self.pe), "me": float(self.me), "mae": float(self.mae),
                "pe_exact": str(self.pe), "me_exact": str(self.me), "mae_exact": str(self.mae),
                "n_pairs": self.n_pairs, "method": self.method}


def _domain(wl: int, signed: bool, natural: NaturalRange | None) -> np.ndarray:
    if natural is None:
        natural = NaturalRange.full(wl, signed)
    natural.validate(wl)
    return np.arange(natural.lo, natural.hi + 1, dtype=np.int64)


def _weights(hist: Histogram | None, vals: np.ndarray, wl: int) -> np.ndarray | None:
    if hist is None:
        return None
    if hist.wl != wl:
        raise ParameterError(f"histogram is {hist.wl}-bit, operand is {wl}-bit")
    return np.asarray(hist.counts, dtype=np.int64)[vals & ((1 << wl) - 1)]


def _block_value(spec: BlockSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if spec.keep_high is None:
        return spec.exact(a, b)
    enc = spec.output_encoding(a & ((1 << spec.wl_a) - 1), b & ((1 << spec.wl_b) - 1))
    return spec.output_value(enc)


def metrics_oracle(spec: BlockSpec, chain_a: PreprocessChain = PreprocessChain(),
                   chain_b: PreprocessChain = PreprocessChain(),
                   natural_a: NaturalRange | None = None, natural_b: NaturalRange | None = None,
                   hist_a: Histogram | None = None, hist_b: Histogram | None = None) -> ErrorStats:
    """Exhaustive PE/ME/MAE over all operand pairs.

    Operands are uniform over their natural ranges (the full domain by
    default) unless histograms are given, in which case each pair is
    weighted by ``hist_a[a] * hist_b[b]``.
    """
    if spec.n_inputs > ORACLE_GUARD_BITS:
        raise CapacityError(f"{spec.n_inputs} input bits exceeds the oracle guard of {ORACLE_GUARD_BITS}")
    chain_a.validate(spec.wl_a, spec.signed_a)
    chain_b.validate(spec.wl_b, spec.signed_b)
    av = _domain(spec.wl_a, spec.signed_a, natural_a)
    bv = _domain(spec.wl_b, spec.signed_b, natural_b)
    wa = _weights(hist_a, av, spec.wl_a)
    wb = _weights(hist_b, bv, spec.wl_b)
    pa = chain_a.apply_array(av, spec.signed_a)
    pb = chain_b.apply_array(bv, spec.signed_b)

    n_err = s_err = s_abs = 0
    total = 0
    step = max(1, _CHUNK // len(bv))
    for lo in range(0, len(av), step):
        a = av[lo:lo + step, None]
        e = _block_value(spec, a, bv[None, :]) - _block_value(spec, pa[lo:lo + step, None], pb[None, :])
        if wa is None and wb is None:
            n_err += int(np.count_nonzero(e))
            s_err += int(e.sum())
            s_abs += int(np.abs(e).sum())
            continue
        # weighted: reduce over b in int64, then combine rows as Python ints
        w_b = np.ones(len(bv), dtype=np.int64) if wb is None else wb
        w_a = np.ones(len(a), dtype=np.int64) if wa is None else wa[lo:lo + step]
        rows = [((e != 0) * w_b).sum(axis=1), (e * w_b).sum(axis=1), (np.abs(e) * w_b).sum(axis=1)]
        n_err += sum(int(x) * int(w) for x, w in zip(rows[0], w_a))
        s_err += sum(int(x) * int(w) for x, w in zip(rows[1], w_a))
        s_abs += sum(int(x) * int(w) for x, w in zip(rows[2], w_a))
    if wa is None and wb is None:
        total = len(av) * len(bv)
    else:
        ta = len(av) if wa is None else int(wa.sum())
        tb = len(bv) if wb is None else int(wb.sum())
        total = ta * tb
    if total == 0:
        raise ParameterError("histogram weights sum to zero")
    return ErrorStats(Fraction(n_err, total), Fraction(s_err, total), Fraction(s_abs, total),
                      len(av) * len(bv))


def _check_steps(wl: int, *xs: int) -> None:
    for x in xs:
        DS(x).validate(wl)


def metrics_closed_ds_add(wl: int, x: int, x2: int) -> ErrorStats:
    """Closed form for an unsigned ``wl``-bit adder with DS_x and DS_x2 on its operands.

    Each operand loses ``v mod x``, uniform on ``0..x-1``, independently of the
    other, so the error is always non-negative and is zero only when both
    remainders are.
    """
    _check_steps(wl, x, x2)
    pe = 1 - Fraction(1, x * x2)
    me = Fraction(x - 1, 2) + Fraction(x2 - 1, 2)
    return ErrorStats(pe, me, me, 1 << (2 * wl), "closed-form")


def metrics_closed_ds_mul(wl: int, x: int, x2: int) -> ErrorStats:
    """Closed form for an unsigned ``wl``-bit multiplier with DS_x and DS_x2.

    The product is unchanged when both remainders are zero, or when either
    operand is zero (the other then has zero remainder or not, it does not
    matter).  The mean error follows from independence:
    E[ab] - E[a'] E[b'] with E[a'] = mu - (x - 1) / 2.
    """
    _check_steps(wl, x, x2)
    n = 1 << wl
    # P(exact) = P(ra=0, rb=0) + P(a=0, rb!=0) + P(b=0, ra!=0)
    p_ok = Fraction(1, x * x2) + Fraction(1, n) * (1 - Fraction(1, x2)) + Fraction(1, n) * (1 - Fraction(1, x))
    mu = Fraction(n - 1, 2)
    me = mu * mu - (mu - Fraction(x - 1, 2)) * (mu - Fraction(x2 - 1, 2))
    return ErrorStats(1 - p_ok, me, me, n * n, "closed-form")


FAMILIES = ("ds-add", "ds-mul", "th-add", "th-mul")


@dataclass(frozen=True)
class FormulaEntry:
    metric: str          # "pe" or "me"
    reading: str         # which evaluation of the printed expression
    printed: Fraction | None
    oracle: Fraction
    note: str = ""

    @property
    def agree(self) -> bool | None:
        return None if self.printed is None else self.printed == self.oracle

    def as_dict(self) -> dict:
        return {"metric": self.metric, "reading": self.reading,
                "printed": None if self.printed is None else float(self.printed),
                "oracle": float(self.oracle), "agree": self.agree, "note": self.note}


@dataclass(frozen=True)
class FormulaReport:
    family: str
    wl: int
    x: int
    x2: int
    y: int
    entries: tuple[FormulaEntry, ...] = field(default=())

    @property
    def disagreements(self) -> list[FormulaEntry]:
        return [e for e in self.entries if e.agree is False]

    def as_dict(self) -> dict:
        return {"family": self.family, "wl": self.wl, "x": self.x, "x2": self.x2, "y": self.y,
                "entries": [e.as_dict() for e in self.entries]}


def _pow2(e: int) -> Fraction:
    return Fraction(2) ** e


def paper_formula_report(wl: int, x: int, x2: int | None = None, y: int = 0, family: str = "ds-add",
                         M: Fraction | int | None = None) -> FormulaReport:
    """Evaluate the published closed forms verbatim and compare them with the oracle.

    The published expressions assume the same step or threshold on both
    operands, so they are evaluated with ``x``; the oracle uses ``x`` and
    ``x2``.  The thresholding mean-error expressions contain a symbol ``M``
    that is never defined, so the caller must supply it.  Nothing is corrected:
    an entry with ``agree=False`` reports a published value that does not
    match enumeration.
    """
    family = family.lower()
    if family not in FAMILIES:
        raise ParameterError(f"family must be one of {FAMILIES}, got {family!r}")
    x2 = x if x2 is None else x2
    op = Op.ADD if family.endswith("add") else Op.MUL
    spec = BlockSpec(op, wl, wl)
    n = _pow2(wl)
    entries = []
    mismatch = "" if x == x2 else "published form assumes equal parameters; evaluated with x"

    if family.startswith("ds"):
        _check_steps(wl, x, x2)
        k = x.bit_length() - 1
        oracle = metrics_oracle(spec, PreprocessChain((DS(x),)), PreprocessChain((DS(x2),)))
        if op is Op.ADD:
            pe = 1 - _pow2(-k) * _pow2(-k)
            me = _pow2(k - 1) * (_pow2(wl - 1) - 1) + Fraction(1, 4)
            entries += [FormulaEntry("pe", "as printed", pe, oracle.pe, mismatch),
                        FormulaEntry("me", "as printed", me, oracle.me, mismatch)]
        else:
            pe = 1 - (_pow2(-2 * k) + (2 / n - 2 * _pow2(-(k + wl))))
            me = _pow2(wl + k - 1) - _pow2(wl - 1) - _pow2(2 * wl - 2) + Fraction(1, 4)
            me_alt = _pow2(wl + k - 1) - _pow2(wl - 1) - _pow2(2 * k - 2) + Fraction(1, 4)
            entries += [FormulaEntry("pe", "as printed", pe, oracle.pe, mismatch),
                        FormulaEntry("me", "as printed", me, oracle.me, mismatch),
                        FormulaEntry("me", "2^(2k-2) in place of 2^(2wl-2)", me_alt, oracle.me, mismatch)]
    else:
        th_a, th_b = TH(x, y), TH(x2, y)
        th_a.validate(wl)
        th_b.validate(wl)
        oracle = metrics_oracle(spec, PreprocessChain((th_a,)), PreprocessChain((th_b,)))
        xf = Fraction(x)
        if op is Op.ADD:
            pe = 1 - (xf / n) * (xf / n)
            entries.append(FormulaEntry("pe", "as printed", pe, oracle.pe, mismatch))
            if M is None:
                raise ParameterError("the thresholding mean-error expression needs M; pass M=<value>")
            Mf = Fraction(M)
            me = (1 - xf / n) * (n + xf - 1 - 2 * Mf)
            entries.append(FormulaEntry("me", f"as printed, M={Mf}", me, oracle.me, mismatch))
        else:
            pe = 1 - ((xf / n) * (xf / n) + 2 * (_pow2(wl - x) / (n * n)))
            entries.append(FormulaEntry("pe", "as printed", pe, oracle.pe, mismatch))
            if M is None:
                raise ParameterError("the thresholding mean-error expression needs M; pass M=<value>")
            Mf = Fraction(M)
            r = _pow2(wl - x) / n
            h = _pow2(wl + x - 1) / 2
            me = 2 * (r * (xf / n)) * h * ((xf - 1) / 2 - Mf) + (r * r) * (h * h - Mf * Mf)
            entries.append(FormulaEntry("me", f"as printed, M={Mf}", me, oracle.me, mismatch))
    entries.append(FormulaEntry("mae", "oracle only", None, oracle.mae))
    return FormulaReport(family, wl, x, x2, y, tuple(entries))
