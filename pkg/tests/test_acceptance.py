"""Acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible even under output
capture) and then asserts the same condition.
"""
import math
import random
import time
from fractions import Fraction

import pytest

from ppcflow.apps import alpha_to_int, blend, gaussian_filter, mac_dotproduct, psnr
from ppcflow.errors import RangeViolation
from ppcflow.erroranal import metrics_closed_ds_add, metrics_closed_ds_mul, metrics_oracle, paper_formula_report
from ppcflow.fxblocks import ACC_WL, MAC_MAX_TERMS, Strictness, mac_block
from ppcflow.report import blend_literals
from ppcflow.sparsity import DS, TH, NaturalRange, PreprocessChain
from ppcflow.truthtab import (BlockSpec, Op, block_tt, dc_count_enumerate, dc_formula_ds, gen_block_tt,
                              km_grid, km_render, km_sequence)
from ppcflow.twolevel import Cover, Cube, minimize_exact, minimize_heuristic, pla_read, pla_write, verify_cover

POW2 = (1, 2, 4, 8, 16)


def ds(x):
    return PreprocessChain((DS(x),))


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return emit


def test_criterion_01_dc_count_identities(verdict):
    t0 = time.perf_counter()
    mismatches = 0
    for wa in range(2, 9):
        for wb in range(2, 9):
            for op in (Op.ADD, Op.MUL):
                spec = BlockSpec(op, wa, wb)
                for x in POW2:
                    for x2 in POW2:
                        if x > 1 << wa or x2 > 1 << wb:
                            continue
                        tt = block_tt(spec, ds(x), ds(x2))
                        mismatches += dc_formula_ds(wa, wb, x, x2) != dc_count_enumerate(tt)
    fractions = []
    for x in (2, 4, 8):
        tt = block_tt(BlockSpec(Op.MUL, 8, 8), ds(x), ds(x))
        fractions.append(Fraction(dc_count_enumerate(tt), tt.n_rows))
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and fractions == [Fraction(3, 4), Fraction(15, 16), Fraction(63, 64)] and dt < 1
    verdict(1, ok, f"{mismatches} formula mismatches, DC fractions {[float(f) for f in fractions]}, {dt:.2f}s")


def test_criterion_02_error_formulas(verdict):
    t0 = time.perf_counter()
    bad = []
    for wl in range(2, 9):
        for x in POW2:
            for x2 in POW2:
                if x > 1 << wl or x2 > 1 << wl:
                    continue
                for op, closed in ((Op.ADD, metrics_closed_ds_add), (Op.MUL, metrics_closed_ds_mul)):
                    o = metrics_oracle(BlockSpec(op, wl, wl), ds(x), ds(x2))
                    c = closed(wl, x, x2)
                    if (o.pe, o.me, o.mae) != (c.pe, c.me, c.mae):
                        bad.append((op.value, wl, x, x2))
    spot = metrics_closed_ds_mul(3, 2, 2).pe
    add_rep = paper_formula_report(4, 2, family="ds-add")
    mul_rep = paper_formula_report(3, 2, family="ds-mul")
    pe_entry = [e for e in mul_rep.entries if e.metric == "pe"][0]
    flagged = bool(add_rep.disagreements) and bool(mul_rep.disagreements)
    dt = time.perf_counter() - t0
    ok = not bad and spot == Fraction(5, 8) and pe_entry.printed == spot and flagged and dt < 10
    verdict(2, ok, f"{len(bad)} grid mismatches, PE(wl 3, x 2) = {spot}, "
                   f"printed mean-error forms flagged: {flagged}, {dt:.2f}s")


def _random_function(rng):
    from ppcflow.twolevel import BoolFunction
    n, k = rng.randint(1, 6), rng.randint(1, 3)
    size = 1 << n
    on, dc = [], []
    for _ in range(k):
        d = rng.getrandbits(size) & rng.getrandbits(size)
        on.append(rng.getrandbits(size) & ~d)
        dc.append(d)
    return BoolFunction(n, k, tuple(on), tuple(dc))


def test_criterion_03_minimizer_soundness(verdict):
    rng = random.Random(20240603)
    t0 = time.perf_counter()
    unsound = worse = compared = 0
    for _ in range(1000):
        fn = _random_function(rng)
        h, hs = minimize_heuristic(fn)
        e, es = minimize_exact(fn)
        unsound += (not verify_cover(h, fn).ok) + (not verify_cover(e, fn).ok)
        if es.exact:
            compared += 1
            worse += es.literals > hs.literals
    dt = time.perf_counter() - t0
    ok = unsound == 0 and worse == 0 and dt < 60
    verdict(3, ok, f"{unsound} unsound covers, exact > heuristic in {worse}/{compared}, {dt:.1f}s")


def test_criterion_04_exact_dc_monotonicity(verdict):
    t0 = time.perf_counter()
    counts = []
    for x in (1, 2, 4):
        _, st = minimize_exact(block_tt(BlockSpec(Op.MUL, 4, 4), ds(x), ds(x)))
        counts.append((st.literals, st.exact))
    dt = time.perf_counter() - t0
    lits = [c for c, _ in counts]
    ok = (all(e for _, e in counts) and all(a >= b for a, b in zip(lits, lits[1:]))
          and any(a > b for a, b in zip(lits, lits[1:])) and dt < 300)
    verdict(4, ok, f"exact literals DS1/DS2/DS4 = {lits}, {dt:.1f}s")


def test_criterion_05_karnaugh_fixtures(verdict, fixtures_dir):
    precise = gen_block_tt(BlockSpec(Op.MUL, 2, 3))
    sparse = block_tt(BlockSpec(Op.MUL, 2, 3), ds(2), ds(2))
    same_precise = km_render(precise, 2) == (fixtures_dir / "km_2x3_bit2.txt").read_text()
    same_sparse = km_render(sparse, 2) == (fixtures_dir / "km_2x3_ds2_bit2.txt").read_text()
    odd_ok = True
    for bit in range(sparse.n_outputs):
        grid = km_grid(sparse, bit)
        for i, a in enumerate(km_sequence(2)):
            for j, b in enumerate(km_sequence(3)):
                odd_ok &= (grid[i][j] == "d") == (a % 2 == 1 or b % 2 == 1)
    ok = same_precise and same_sparse and odd_ok
    verdict(5, ok, f"precise grid matches: {same_precise}, DS2 grid matches: {same_sparse}, "
                   f"'d' exactly on odd operands: {odd_ok}")


def test_criterion_06_gaussian_quality(verdict, camera):
    t0 = time.perf_counter()
    ref, _ = gaussian_filter(camera, trace=False)
    vals = {x: psnr(ref, gaussian_filter(camera, ds(x), trace=False)[0]).psnr_db for x in (2, 4, 8, 16, 32)}
    ident = psnr(ref, gaussian_filter(camera, PreprocessChain(), trace=False)[0]).psnr_db
    dt = time.perf_counter() - t0
    seq = [vals[x] for x in (2, 4, 8, 16, 32)]
    ok = (28 <= vals[16] <= 34 and 23 <= vals[32] <= 29 and all(a > b for a, b in zip(seq, seq[1:]))
          and math.isinf(ident) and dt < 5)
    verdict(6, ok, "PSNR DS2..DS32 = " + ", ".join(f"{v:.2f}" for v in seq) + f" dB, identity {ident}, {dt:.2f}s")


def test_criterion_07_blend_quality(verdict, camera, astronaut):
    t0 = time.perf_counter()
    a = alpha_to_int(0.5)
    ref, _ = blend(camera, astronaut, a, use_natural=False, trace=False)
    natural, _ = blend(camera, astronaut, a, use_natural=True, trace=False)
    vals = {x: psnr(ref, blend(camera, astronaut, a, ds(x), trace=False)[0]).psnr_db for x in (16, 32)}
    dt = time.perf_counter() - t0
    identical = natural == ref
    ok = 27 <= vals[16] <= 33 and 20 <= vals[32] <= 26 and identical and dt < 5
    verdict(7, ok, f"PSNR DS16 = {vals[16]:.2f} dB (band 27..33), DS32 = {vals[32]:.2f} dB (band 20..26), "
                   f"natural-only bit-identical: {identical}, {dt:.2f}s")


def test_criterion_08_blend_literal_ordering(verdict):
    t0 = time.perf_counter()
    precise = blend_literals(PreprocessChain(), natural=False)
    natural = blend_literals(PreprocessChain(), natural=True)
    both = blend_literals(ds(16), natural=True)
    dt = time.perf_counter() - t0
    ok = natural / precise < 1.0 and both < natural and dt < 900
    verdict(8, ok, f"segmented literals precise {precise}, natural {natural} ({natural / precise:.3f}), "
                   f"natural+DS16 {both} ({both / precise:.3f}), {dt:.1f}s")


def _random_cover(rng):
    n, k = rng.randint(1, 8), rng.randint(1, 5)
    cubes = set()
    for _ in range(rng.randint(0, 20)):
        inp = "".join(rng.choice("01-") for _ in range(n))
        out = "".join(rng.choice("01") for _ in range(k))
        if "1" in out:
            cubes.add(Cube(inp, out))
    return Cover(n, k, tuple(sorted(cubes)))


def test_criterion_09_pla_interop(verdict, fixtures_dir):
    rng = random.Random(99)
    failures = sum(pla_read(pla_write(c)) != c for c in (_random_cover(rng) for _ in range(100)))
    external = pla_read(fixtures_dir / "mul2x2_espresso.pla")
    rep = verify_cover(external, gen_block_tt(BlockSpec(Op.MUL, 2, 2)))
    ok = failures == 0 and rep.ok
    verdict(9, ok, f"{failures}/100 round-trip failures, external 2x2 multiplier cover verifies: {rep.ok}")


def test_criterion_10_mac(verdict):
    strict = mac_block(natural_pixel=NaturalRange(0, 159), strictness=Strictness.STRICT)
    try:
        mac_dotproduct([10, 160], [1, 1], strict)
        rejected = False
    except RangeViolation:
        rejected = True
    th = mac_block(PreprocessChain((TH(48, 48),)))
    example = mac_dotproduct([10, 100], [2, 1], th).number
    lo = mac_dotproduct([159] * MAC_MAX_TERMS, [-128] * MAC_MAX_TERMS, strict).number
    hi = mac_dotproduct([159] * MAC_MAX_TERMS, [127] * MAC_MAX_TERMS, strict).number
    fits = lo == -159 * 128 * MAC_MAX_TERMS and hi == 159 * 127 * MAC_MAX_TERMS
    ok = rejected and example == 196 and fits and MAC_MAX_TERMS == 960
    verdict(10, ok, f"pixel 160 rejected: {rejected}, TH(48,48) dot product = {example}, "
                    f"960-term extremes {lo}..{hi} fit {ACC_WL}-bit accumulator: {fits}")
