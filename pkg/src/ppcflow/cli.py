"""Command-line front end: ``ppcflow <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (bad data, failed
verification, capacity guard) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import erroranal
from .apps.blend import alpha_to_int, blend as blend_images
from .apps.gaussian import gaussian_filter
from .apps.image import pgm_read, pgm_write, psnr
from .apps.mac import mac_dotproduct
from .apps.trace import trace_report
from .errors import PPCError
from .fxblocks import Strictness, mac_block
from .sparsity import PreprocessChain, parse_chain, parse_range
from .truthtab import (BlockSpec, Op, block_tt, dc_count_enumerate, dc_formula_ds, dc_formula_th,
                       km_render)
from .twolevel import minimize_exact, minimize_heuristic, pla_read, pla_write, verify_cover
from .twolevel.cube import as_function
from .twolevel.segmented import segmented_literal_estimate


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# flag grammar

def _operand_map(text: str | None, parse, flag: str) -> dict:
    """``a=X,b=Y`` / ``both=X`` / bare ``X`` (both operands)."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" in item:
            key, val = item.split("=", 1)
            key = key.strip().lower()
        else:
            key, val = "both", item
        if key not in ("a", "b", "both"):
            raise UsageError(f"{flag}: operand must be a, b or both, got {key!r}")
        keys = ("a", "b") if key == "both" else (key,)
        for k in keys:
            if k in out:
                raise UsageError(f"{flag}: operand {k} given twice")
            out[k] = parse(val)
    return out


def _wl_pair(text: str) -> tuple[int, int]:
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"--wl expects N or N,M, got {text!r}") from None
    if len(parts) == 1:
        return parts[0], parts[0]
    if len(parts) == 2:
        return parts[0], parts[1]
    raise UsageError(f"--wl expects N or N,M, got {text!r}")


def _block(args):
    wa, wb = _wl_pair(args.wl)
    signed = {s.strip() for s in (args.signed or "").split(",") if s.strip()}
    if signed - {"a", "b", "both"}:
        raise UsageError("--signed takes a, b or both")
    sa = bool(signed & {"a", "both"})
    sb = bool(signed & {"b", "both"})
    spec = BlockSpec(Op(args.op), wa, wb, sa, sb, args.keep_high)
    pre = _operand_map(args.pre, parse_chain, "--pre")
    raw = _operand_map(args.natural, str, "--natural")
    nat = {k: parse_range(v, sa if k == "a" else sb) for k, v in raw.items()}
    return spec, pre.get("a", PreprocessChain()), pre.get("b", PreprocessChain()), nat.get("a"), nat.get("b")


def _add_block_flags(p, required=True):
    p.add_argument("--op", choices=[o.value for o in Op], required=required)
    p.add_argument("--wl", required=required, help="operand word lengths, N or N,M")
    p.add_argument("--signed", help="signed operands: a, b or both")
    p.add_argument("--keep-high", type=int, default=None, help="keep only the N most significant output bits")
    p.add_argument("--pre", help="preprocessing, e.g. a=ds:2,b=th:48:48 or both=ds:4")
    p.add_argument("--natural", help="natural ranges, e.g. a=0:159")


def _emit(obj, args, fmt=None):
    fmt = fmt or getattr(args, "format", "json")
    if fmt == "json":
        text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    elif fmt == "csv":
        rows = obj if isinstance(obj, list) else [obj]
        keys = list(rows[0]) if rows else []
        lines = [",".join(keys)] + [",".join(str(r[k]) for k in keys) for r in rows]
        text = "\n".join(lines) + "\n"
    else:
        if isinstance(obj, dict):
            text = "".join(f"{k}: {v}\n" for k, v in obj.items())
        else:
            text = str(obj)
    sys.stdout.write(text)


def _table_from_flags(args):
    spec, ca, cb, na, nb = _block(args)
    return block_tt(spec, ca, cb, na, nb)


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen_tt(args) -> int:
    tt = _table_from_flags(args)
    if args.format == "km":
        sys.stdout.write(km_render(tt, args.bit))
        return 0
    text = pla_write(tt, args.out)
    dc = dc_count_enumerate(tt)
    if args.out:
        _emit({"rows": tt.n_rows, "dc_rows": dc, "dc_fraction": dc / tt.n_rows, "pla": str(args.out)}, args, "json")
    else:
        sys.stdout.write(text)
    return 0


def _load_function(args):
    if args.pla:
        return as_function(pla_read(args.pla)), None
    if not (args.op and args.wl):
        raise UsageError("give --pla FILE or block flags (--op and --wl)")
    return None, _table_from_flags(args)


def cmd_minimize(args) -> int:
    fn, tt = _load_function(args)
    src = tt if tt is not None else fn
    if args.mode == "segmented":
        if tt is None:
            raise UsageError("segmented mode needs block flags, not a PLA")
        stats = segmented_literal_estimate(tt.spec, tt.reach_a, tt.reach_b, args.segment, args.sub_mode)
        _emit(stats.as_dict(), args)
        return 0
    if args.mode == "exact":
        cover, stats = minimize_exact(src, args.node_limit)
    else:
        cover, stats = minimize_heuristic(src, args.max_iters)
    if args.out:
        pla_write(cover, args.out)
    _emit(stats.as_dict(), args)
    return 0


def cmd_verify(args) -> int:
    cover = pla_read(args.cover)
    if args.against:
        target = pla_read(args.against)
    elif args.op and args.wl:
        target = _table_from_flags(args)
    else:
        raise UsageError("give --against FILE or block flags (--op and --wl)")
    rep = verify_cover(cover, target)
    _emit(rep.as_dict(), args)
    return 0 if rep.ok else 1


def cmd_error(args) -> int:
    spec, ca, cb, na, nb = _block(args)
    if args.method == "oracle":
        st = erroranal.metrics_oracle(spec, ca, cb, na, nb)
        _emit(st.as_dict(), args)
        return 0
    xa, xb = ca.ds_only_step(), cb.ds_only_step()
    if args.method == "closed":
        if xa is None or xb is None or spec.wl_a != spec.wl_b or spec.signed_out or na or nb \
                or spec.keep_high is not None:
            raise UsageError("closed forms cover unsigned, full-width, equal-width blocks with DS-only chains")
        f = erroranal.metrics_closed_ds_add if spec.op is Op.ADD else erroranal.metrics_closed_ds_mul
        _emit(f(spec.wl_a, xa, xb).as_dict(), args)
        return 0
    # published formulas
    family = args.family
    if family is None:
        kind = "ds" if xa is not None and xb is not None else "th"
        family = f"{kind}-{spec.op.value}"
    if family.startswith("ds"):
        x, x2, y = xa or 1, xb or 1, 0
    else:
        steps = [s for s in ca.steps if s.kind == "th"]
        steps_b = [s for s in cb.steps if s.kind == "th"]
        if not steps or not steps_b:
            raise UsageError("thresholding formulas need th:<x>:<y> on both operands")
        x, y, x2 = steps[0].x, steps[0].y, steps_b[0].x
    rep = erroranal.paper_formula_report(spec.wl_a, x, x2, y, family, args.M)
    _emit(rep.as_dict(), args)
    return 0


def cmd_dc_stats(args) -> int:
    spec, ca, cb, na, nb = _block(args)
    tt = block_tt(spec, ca, cb, na, nb)
    dc = dc_count_enumerate(tt)
    out = {"block": str(spec), "pre_a": str(ca), "pre_b": str(cb), "rows": tt.n_rows,
           "dc_rows": dc, "dc_fraction": dc / tt.n_rows}
    xa, xb = ca.ds_only_step(), cb.ds_only_step()
    if xa is not None and xb is not None and na is None and nb is None:
        out["dc_formula"] = dc_formula_ds(spec.wl_a, spec.wl_b, xa, xb)
    tha = [s for s in ca.steps if s.kind == "th"]
    thb = [s for s in cb.steps if s.kind == "th"]
    if tha and thb and spec.wl_a == spec.wl_b and len(ca.steps) == len(cb.steps) == 1:
        pa = dc_formula_th(spec.wl_a, tha[0].x, thb[0].x, tha[0].y, thb[0].y)
        out["dc_formula_th_printed"] = float(pa.value)
        out["dc_formula_th_agrees"] = pa.agrees
    _emit(out, args)
    return 0


def _write_trace(tr, args):
    if getattr(args, "trace_json", None):
        Path(args.trace_json).write_text(json.dumps(trace_report(tr).as_dict(), indent=2) + "\n")
    if getattr(args, "hist_png", None):
        from .figures import plot_histograms
        plot_histograms(tr, args.hist_png)


def cmd_gaussian(args) -> int:
    img = pgm_read(args.input)
    chain = parse_chain(args.pre) if args.pre else PreprocessChain()
    out, tr = gaussian_filter(img, chain)
    if args.out:
        pgm_write(out, args.out)
    res = {"pre": str(chain), "width": out.width, "height": out.height}
    if args.psnr_against_precise:
        ref, _ = gaussian_filter(img, trace=False)
        q = psnr(ref, out)
        res.update(q.as_dict())
    _write_trace(tr, args)
    _emit(res, args)
    return 0


def cmd_blend(args) -> int:
    i1, i2 = pgm_read(args.in1), pgm_read(args.in2)
    chain = parse_chain(args.pre) if args.pre else PreprocessChain()
    a = args.alpha_int if args.alpha_int is not None else alpha_to_int(args.alpha)
    out, tr = blend_images(i1, i2, a, chain, use_natural=args.natural_split)
    if args.out:
        pgm_write(out, args.out)
    res = {"pre": str(chain), "alpha_int": a, "natural_split": args.natural_split}
    if args.psnr_against_precise:
        ref, _ = blend_images(i1, i2, a, use_natural=False, trace=False)
        res.update(psnr(ref, out).as_dict())
    _write_trace(tr, args)
    _emit(res, args)
    return 0


def _ints(text: str | None, path: str | None, flag: str) -> list[int]:
    if path:
        text = Path(path).read_text()
    if text is None:
        raise UsageError(f"{flag} is required")
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"{flag}: expected integers") from None


def cmd_mac(args) -> int:
    pixels = _ints(args.pixels, args.pixels_file, "--pixels")
    weights = _ints(args.weights, args.weights_file, "--weights")
    chain = parse_chain(args.pre) if args.pre else PreprocessChain()
    nat = parse_range(args.natural) if args.natural else None
    block = mac_block(chain, nat, Strictness.STRICT if args.strict else Strictness.PERMISSIVE)
    acc = mac_dotproduct(pixels, weights, block)
    _emit({"acc": acc.number, "acc_wl": acc.wl, "terms": len(pixels), "pre": str(chain)}, args)
    return 0


def cmd_trace(args) -> int:
    chain = parse_chain(args.pre) if args.pre else PreprocessChain()
    if args.app == "gaussian":
        _, tr = gaussian_filter(pgm_read(args.input), chain)
    else:
        if not args.in2:
            raise UsageError("blend tracing needs --in2")
        a = alpha_to_int(args.alpha)
        _, tr = blend_images(pgm_read(args.input), pgm_read(args.in2), a, chain,
                                use_natural=args.natural_split)
    rep = trace_report(tr)
    if args.hist_png:
        from .figures import plot_histograms
        plot_histograms(tr, args.hist_png)
    if args.format == "csv":
        _emit([{k: v for k, v in s.as_dict().items() if k != "observed"} for s in rep.signals], args)
    else:
        _emit(rep.as_dict(), args)
    return 0


def cmd_report(args) -> int:
    from .report import report_tables, rows_to_csv
    sweep = [s for s in (args.sweep or "").split(",") if s.strip()]
    img = pgm_read(args.input)
    img2 = pgm_read(args.in2) if args.in2 else None
    rows = report_tables(args.app, sweep, img, img2, args.alpha, args.segment, args.mode)
    csv_text = rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(csv_text)
    if args.fig and rows:
        from .figures import plot_sweep
        plot_sweep(rows, args.fig, title=args.app)
    if args.format == "json":
        _emit([r.as_dict() for r in rows], args)
    else:
        sys.stdout.write(csv_text)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ppcflow", description="Partially-precise block design flow")
    sub = ap.add_subparsers(dest="cmd", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("gen-tt", help="generate a block truth table (PLA or Karnaugh map)")
    _add_block_flags(p)
    p.add_argument("--out", help="PLA file to write (stdout if omitted)")
    p.add_argument("--format", choices=["pla", "km"], default="pla")
    p.add_argument("--bit", type=int, default=0, help="output bit for --format km (0 = LSB)")
    p.set_defaults(fn=cmd_gen_tt)

    p = sub.add_parser("minimize", help="two-level minimization of a block or PLA")
    _add_block_flags(p, required=False)
    p.add_argument("--pla", help="read the function from a PLA file instead of block flags")
    p.add_argument("--mode", choices=["exact", "heuristic", "segmented"], default="heuristic")
    p.add_argument("--segment", type=int, default=4)
    p.add_argument("--sub-mode", choices=["exact", "heuristic", "auto"], default="auto",
                   help="minimizer used per segment")
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=20)
    p.add_argument("--out", help="PLA file for the minimized cover")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(fn=cmd_minimize)

    p = sub.add_parser("verify", help="check a cover against a table")
    _add_block_flags(p, required=False)
    p.add_argument("--cover", required=True)
    p.add_argument("--against", help="PLA specification to check against")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("error", help="PE/ME/MAE of a preprocessed block")
    _add_block_flags(p)
    p.add_argument("--method", choices=["oracle", "closed", "published"], default="oracle",
                   help="published = evaluate the published closed forms beside the oracle")
    p.add_argument("--family", choices=list(erroranal.FAMILIES))
    p.add_argument("--M", type=float, default=None, help="value for the undefined symbol M")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(fn=cmd_error)

    p = sub.add_parser("dc-stats", help="don't-care counts, enumerated and closed form")
    _add_block_flags(p)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(fn=cmd_dc_stats)

    p = sub.add_parser("gaussian", help="run the 3x3 Gaussian filter on a PGM image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pre", help="chain applied to every input pixel, e.g. ds:16")
    p.add_argument("--out")
    p.add_argument("--psnr-against-precise", action="store_true")
    p.add_argument("--trace-json")
    p.add_argument("--hist-png")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(fn=cmd_gaussian)

    p = sub.add_parser("blend", help="alpha-blend two PGM images")
    p.add_argument("--in1", required=True)
    p.add_argument("--in2", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float, default=0.5)
    g.add_argument("--alpha-int", type=int)
    p.add_argument("--pre")
    p.add_argument("--natural-split", action=argparse.BooleanOptionalAction, default=True,
                   help="assert the 0..127 / 128..255 coefficient ranges (strict)")
    p.add_argument("--out")
    p.add_argument("--psnr-against-precise", action="store_true")
    p.add_argument("--trace-json")
    p.add_argument("--hist-png")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(fn=cmd_blend)

    p = sub.add_parser("mac", help="MAC dot product of pixels and signed weights")
    p.add_argument("--pixels")
    p.add_argument("--pixels-file")
    p.add_argument("--weights")
    p.add_argument("--weights-file")
    p.add_argument("--pre", help="pixel preprocessing, e.g. th:48:48")
    p.add_argument("--natural", help="pixel natural range, e.g. 0:159")
    p.add_argument("--strict", action="store_true", help="reject pixels outside the natural range")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(fn=cmd_mac)

    p = sub.add_parser("trace", help="per-signal value sets and sparsity of a pipeline")
    p.add_argument("--app", choices=["gaussian", "blend"], required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--in2")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--natural-split", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--pre")
    p.add_argument("--hist-png")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("report", help="PSNR / literal sweep table with optional figure")
    p.add_argument("--app", choices=["gaussian", "blend"], required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--in2")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--sweep", default="", help="comma-separated configs, e.g. ds:2,ds:4,natural+ds:16")
    p.add_argument("--segment", type=int, default=4)
    p.add_argument("--mode", choices=["exact", "heuristic", "auto"], default="auto")
    p.add_argument("--csv", help="also write the table to this file")
    p.add_argument("--fig", help="PNG figure of PSNR and normalized literals")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(fn=cmd_report)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"ppcflow {args.cmd}: error: {e}", file=sys.stderr)
        return 2
    except (PPCError, OSError) as e:
        print(f"ppcflow {args.cmd}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
