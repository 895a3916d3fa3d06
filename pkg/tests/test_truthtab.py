from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ppcflow.errors import CapacityError, ParameterError
from ppcflow.sparsity import DS, TH, NaturalRange, PreprocessChain, ValueSet, reachable_set
from ppcflow.truthtab import (DONT_CARE, BlockSpec, Op, block_tt, dc_count_enumerate, dc_formula_ds,
                              dc_formula_th, gen_block_tt, km_grid, km_render, km_sequence,
                              segmented_blocks)


def ds(x):
    return PreprocessChain((DS(x),))


def test_add_row():
    tt = gen_block_tt(BlockSpec(Op.ADD, 2, 2))
    assert tt.row(3, 1) == 4
    assert tt.n_outputs == 3


def test_ds2_mul_dc_rows():
    tt = block_tt(BlockSpec(Op.MUL, 2, 3), ds(2), ds(2))
    for a, b, out in tt.rows():
        assert (out is DONT_CARE) == (a % 2 == 1 or b % 2 == 1)


def test_th_on_three_bit_operand():
    tt = block_tt(BlockSpec(Op.MUL, 2, 3), PreprocessChain(), PreprocessChain((TH(5, 0),)))
    dcs = {(a, b) for a, b, out in tt.rows() if out is DONT_CARE}
    assert len(dcs) == 16
    assert {b for _, b in dcs} == {1, 2, 3, 4}


def test_outputs_array_matches_rows():
    tt = block_tt(BlockSpec(Op.MUL, 3, 3), ds(2), PreprocessChain((TH(3, 4),)))
    arr = tt.outputs()
    for a, b, out in tt.rows():
        assert arr[(a << 3) | b] == (-1 if out is None else out)


def test_specified_rows_match_bigint_oracle():
    for spec in [BlockSpec(Op.MUL, 4, 4, True, True), BlockSpec(Op.ADD, 4, 4, True, True),
                 BlockSpec(Op.MUL, 4, 3, False, True), BlockSpec(Op.MUL, 5, 5, keep_high=4)]:
        tt = gen_block_tt(spec)
        for a, b, out in tt.rows():
            va = a - (1 << spec.wl_a) if spec.signed_a and a >> (spec.wl_a - 1) else a
            vb = b - (1 << spec.wl_b) if spec.signed_b and b >> (spec.wl_b - 1) else b
            full = (va + vb if spec.op is Op.ADD else va * vb) % (1 << spec.full_wl)
            if spec.keep_high is not None:
                full //= 1 << (spec.full_wl - spec.keep_high)
            assert out == full


@given(st.integers(0, 255), st.integers(0, 255), st.integers(1, 16))
def test_truncation_is_floor_division(a, b, n):
    spec = BlockSpec(Op.MUL, 8, 8, keep_high=n)
    assert spec.output_encoding(a, b) == (a * b) // 2 ** (16 - n)


def test_spec_validation():
    with pytest.raises(ParameterError):
        BlockSpec(Op.MUL, 4, 4, keep_high=9)
    with pytest.raises(ParameterError):
        BlockSpec(Op.ADD, 4, 4, True, False)
    with pytest.raises(ParameterError):
        gen_block_tt(BlockSpec(Op.ADD, 4, 4), ValueSet.full(3))


def test_dc_count_examples():
    assert dc_count_enumerate(gen_block_tt(BlockSpec(Op.MUL, 4, 4))) == 0
    tt = block_tt(BlockSpec(Op.ADD, 5, 3), ds(2), ds(2))
    assert Fraction(dc_count_enumerate(tt), tt.n_rows) == Fraction(3, 4)
    th = block_tt(BlockSpec(Op.MUL, 3, 3), PreprocessChain((TH(5, 0),)), PreprocessChain((TH(5, 0),)))
    assert dc_count_enumerate(th) == 48


def test_dc_formula_ds():
    assert dc_formula_ds(2, 2, 2, 2) == 12
    assert dc_formula_ds(6, 6, 1, 1) == 0
    with pytest.raises(ParameterError):
        dc_formula_ds(4, 4, 3, 2)


@pytest.mark.parametrize("wl", range(2, 7))
def test_dc_formula_ds_equals_enumeration(wl):
    for x in (1, 2, 4, 8, 16):
        for x2 in (1, 2, 4, 8, 16):
            if x > 1 << wl or x2 > 1 << wl:
                continue
            tt = block_tt(BlockSpec(Op.MUL, wl, wl), ds(x), ds(x2))
            assert dc_formula_ds(wl, wl, x, x2) == dc_count_enumerate(tt)


def test_dc_formula_th_reports_both():
    r = dc_formula_th(3, 5, 5)
    assert r.value == 25
    assert r.enumerated == 48
    assert r.agrees is False
    assert r.note == "paper-asserted"
    assert dc_formula_th(4, 0, 0).value == 0


def test_km_sequence():
    assert [format(v, "03b") for v in km_sequence(3)] == ["000", "001", "011", "010", "100", "101", "111", "110"]
    assert km_sequence(2) == [0, 1, 3, 2]


def _fixture_grid(path):
    lines = path.read_text().splitlines()[1:]
    return [line.split()[1:] for line in lines]


def test_km_precise_matches_figure(fixtures_dir):
    tt = gen_block_tt(BlockSpec(Op.MUL, 2, 3))
    assert km_grid(tt, 2) == _fixture_grid(fixtures_dir / "km_2x3_bit2.txt")
    assert km_render(tt, 2) == (fixtures_dir / "km_2x3_bit2.txt").read_text()
    assert all(c != "d" for row in km_grid(tt, 0) for c in row)


def test_km_ds2_matches_figure(fixtures_dir):
    tt = block_tt(BlockSpec(Op.MUL, 2, 3), ds(2), ds(2))
    assert km_render(tt, 2) == (fixtures_dir / "km_2x3_ds2_bit2.txt").read_text()
    rows, cols = km_sequence(2), km_sequence(3)
    grid = km_grid(tt, 2)
    for i, a in enumerate(rows):
        for j, b in enumerate(cols):
            assert (grid[i][j] == "d") == (a % 2 == 1 or b % 2 == 1)


def test_km_all_dc_and_guards():
    tt = gen_block_tt(BlockSpec(Op.ADD, 2, 2), ValueSet(2, ()), ValueSet(2, ()))
    assert all(c == "d" for row in km_grid(tt, 1) for c in row)
    with pytest.raises(CapacityError):
        km_grid(gen_block_tt(BlockSpec(Op.MUL, 5, 2)), 0)
    with pytest.raises(ParameterError):
        km_grid(tt, 7)


def test_segmented_blocks():
    segs = segmented_blocks(BlockSpec(Op.MUL, 8, 8), 4)
    assert len(segs) == 4
    assert sorted(s.shift for s in segs) == [0, 4, 4, 8]
    assert all(s.spec == BlockSpec(Op.MUL, 4, 4) for s in segs)
    adds = segmented_blocks(BlockSpec(Op.ADD, 12, 12), 4)
    assert [s.shift for s in adds] == [0, 4, 8]
    one = segmented_blocks(BlockSpec(Op.MUL, 4, 4), 4)
    assert len(one) == 1 and one[0].spec == BlockSpec(Op.MUL, 4, 4)
    with pytest.raises(ParameterError):
        segmented_blocks(BlockSpec(Op.MUL, 6, 8), 4)


def test_segmented_projection_and_signed_top():
    ra = reachable_set(8, natural=NaturalRange(0, 127))
    segs = segmented_blocks(BlockSpec(Op.MUL, 8, 8, True, True), 4, ValueSet.full(8), ra)
    for s in segs:
        assert s.spec.signed_a == (s.a_field == 1)
        assert s.spec.signed_b == (s.b_field == 1)
        if s.b_field == 1:
            assert list(s.reach_b) == list(range(8))


@settings(max_examples=30)
@given(st.lists(st.integers(0, 255), min_size=1, max_size=30), st.lists(st.integers(0, 255), min_size=1, max_size=30))
def test_segmented_mul_recombines_exactly(av, bv):
    # sum of shifted partial products over the fields reproduces the product
    segs = segmented_blocks(BlockSpec(Op.MUL, 8, 8), 4)
    for a in av[:5]:
        for b in bv[:5]:
            fa = [(a >> (4 * i)) & 15 for i in range(2)]
            fb = [(b >> (4 * j)) & 15 for j in range(2)]
            assert sum((fa[s.a_field] * fb[s.b_field]) << s.shift for s in segs) == a * b
