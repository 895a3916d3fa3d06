import numpy as np
import pytest
from hypothesis import given, strategies as st

from ppcflow.errors import DataError, ParameterError, UnsupportedPreprocessing
from ppcflow.sparsity import (DS, TH, NaturalRange, PreprocessChain, ValueSet, decode, ds_apply, encode,
                              histogram_of, parse_chain, parse_range, reachable_set, th_apply)


def test_ds_examples():
    assert ds_apply(7, 4) == 4
    assert ds_apply(200, 16) == 192
    assert ds_apply(5, 1) == 5
    with pytest.raises(ParameterError):
        ds_apply(5, 3)


def test_th_examples():
    assert th_apply(10, 48, 48) == 48
    assert th_apply(48, 48, 48) == 48
    assert th_apply(100, 48, 48) == 100
    assert th_apply(3, 5, 0) == 0
    with pytest.raises(UnsupportedPreprocessing):
        th_apply(-3, 5, 0, signed=True)


@given(st.integers(0, 255), st.sampled_from([1, 2, 4, 8, 16, 32]))
def test_ds_matches_modulo_definition(v, x):
    assert ds_apply(v, x) == v - v % x


@given(st.integers(-128, 127), st.sampled_from([1, 2, 4, 8]))
def test_ds_on_signed_acts_on_encoding(v, x):
    # clearing low bits of the two's-complement word rounds toward minus infinity
    assert decode(ds_apply(encode(v, 8), x), 8, True) == ds_apply(v, x) == (v // x) * x


@given(st.integers(0, 255), st.integers(0, 256), st.integers(0, 255))
def test_th_idempotent(v, x, y):
    once = th_apply(v, x, y)
    if y >= x:
        assert th_apply(once, x, y) == once


def test_chain_order_th_then_ds():
    ch = parse_chain("th:48:48+ds:16")
    assert ch.apply(10) == 48
    assert ch.apply(100) == 96
    assert str(ch) == "th:48:48+ds:16"
    assert parse_chain("id").is_identity


def test_chain_drops_identity_and_ds_only():
    assert PreprocessChain((DS(1), DS(4))).ds_only_step() == 4
    assert PreprocessChain().ds_only_step() == 1
    assert PreprocessChain((TH(5, 0),)).ds_only_step() is None


@pytest.mark.parametrize("bad", ["ds:3", "ds", "th:4", "xx:1", "ds:a"])
def test_parse_errors(bad):
    with pytest.raises(ParameterError):
        parse_chain(bad)


def test_natural_range():
    r = parse_range("0:159")
    assert 159 in r and 160 not in r
    with pytest.raises(ParameterError):
        NaturalRange(5, 4)
    with pytest.raises(ParameterError):
        reachable_set(8, natural=NaturalRange(0, 300))


def test_reachable_examples():
    assert len(reachable_set(8, chain=PreprocessChain((DS(16),)))) == 16
    th = reachable_set(3, chain=PreprocessChain((TH(5, 0),)))
    assert list(th) == [0, 5, 6, 7]
    nat = reachable_set(8, natural=NaturalRange(0, 159), chain=PreprocessChain((TH(48, 48),)))
    assert list(nat) == list(range(48, 160))
    signed = reachable_set(4, signed=True, chain=PreprocessChain((DS(4),)))
    assert sorted(decode(v, 4, True) for v in signed) == [-8, -4, 0, 4]


@given(st.lists(st.integers(0, 255), max_size=60))
def test_valueset_roundtrip(values):
    vs = ValueSet.from_values(8, values)
    assert list(vs) == sorted(set(values))
    assert len(vs) == len(set(values))
    assert all(v in vs for v in values)
    assert ValueSet.from_mask(vs.mask()) == vs
    assert vs.issubset(ValueSet.full(8))


@given(st.lists(st.integers(0, 255), min_size=1, max_size=60), st.integers(0, 7), st.integers(1, 4))
def test_project_matches_direct(values, shift, width):
    vs = ValueSet.from_values(8, values)
    expect = sorted({(v >> shift) & ((1 << width) - 1) for v in values})
    assert list(vs.project(shift, width)) == expect


def test_valueset_rejects_bad_intervals():
    with pytest.raises(ParameterError):
        ValueSet(3, ((0, 2), (3, 4)))  # adjacent intervals must be merged
    with pytest.raises(ParameterError):
        ValueSet(3, ((0, 9),))


def test_histogram():
    h = histogram_of([0, 1, 1, 255], 8)
    assert h.total == 4 and h.counts[1] == 2
    assert list(h.support()) == [0, 1, 255]
    assert np.isclose(h.normalized().sum(), 1)
    with pytest.raises(DataError):
        histogram_of([256], 8)
