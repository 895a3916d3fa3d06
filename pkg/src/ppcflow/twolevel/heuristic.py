"""Heuristic two-level minimization in the style of Espresso.

The loop is EXPAND -> IRREDUNDANT, then REDUCE -> EXPAND -> IRREDUNDANT
until the (literals, cubes) cost stops improving.  Per-output coverage
counters over all minterms make redundancy and uniqueness tests local to
each cube.
"""
from __future__ import annotations

import numpy as np

from ..errors import CapacityError
from .cube import Cover, Cube, Provenance, as_function, mask_to_bits, stats_for, var_masks
from .exact import _cube_minterms

HEURISTIC_GUARD_BITS = 20


class _State:
    def __init__(self, fn):
        self.fn = fn
        self.n = fn.n_inputs
        self.k = fn.n_outputs
        size = 1 << self.n
        self.on = [mask_to_bits(o, size) for o in fn.on]
        self.off_mask = list(fn.off)
        self.on_mask = list(fn.on)
        self.cnt = [np.zeros(size, dtype=np.int32) for _ in range(self.k)]
        self.cubes: list[tuple[str, int]] = []  # (inputs, output bitmask)
        self._ms: dict[str, np.ndarray] = {}

    def minterms(self, inputs: str) -> np.ndarray:
        ms = self._ms.get(inputs)
        if ms is None:
            ms = _cube_minterms(inputs)
            if len(self._ms) > 50000:
                self._ms.clear()
            self._ms[inputs] = ms
        return ms

    def add(self, inputs: str, outs: int, sign: int = 1):
        ms = self.minterms(inputs)
        for j in range(self.k):
            if outs >> j & 1:
                self.cnt[j][ms] += sign

    def load(self, cubes):
        for c in self.cubes:
            self.add(*c, sign=-1)
        self.cubes = list(cubes)
        for c in self.cubes:
            self.add(*c)

    def covered_elsewhere(self, inputs: str, outs: int) -> bool:
        """True if every ON point of the cube is also covered by another cube."""
        ms = self.minterms(inputs)
        for j in range(self.k):
            if outs >> j & 1:
                pts = ms[self.on[j][ms]]
                if pts.size and self.cnt[j][pts].min() < 2:
                    return False
        return True

    def cost(self):
        lits = sum(len(i) - i.count("-") for i, _ in self.cubes)
        return lits, len(self.cubes)


def _order(state: _State, cubes):
    # descending minterm coverage, then lexicographic
    return sorted(cubes, key=lambda c: (-(c[0].count("-")), -bin(c[1]).count("1"), c[0], c[1]))


def _expand_cube(state: _State, inputs: str, outs: int) -> tuple[str, int]:
    n = state.n
    vm = var_masks(n)
    mask = (1 << (1 << n)) - 1
    for col, ch in enumerate(inputs):
        if ch != "-":
            mask &= vm[col][int(ch)]
    off = 0
    for j in range(state.k):
        if outs >> j & 1:
            off |= state.off_mask[j]
    chars = list(inputs)
    for col in range(n):
        ch = chars[col]
        if ch == "-":
            continue
        shift = 1 << (n - 1 - col)
        sibling = (mask >> shift) if ch == "1" else (mask << shift)
        if sibling & off == 0:
            mask |= sibling
            chars[col] = "-"
    for j in range(state.k):
        if not outs >> j & 1 and mask & state.off_mask[j] == 0 and mask & state.on_mask[j]:
            outs |= 1 << j
    return "".join(chars), outs


def expand(state: _State):
    new = []
    for inputs, outs in _order(state, state.cubes):
        if state.covered_elsewhere(inputs, outs):
            state.add(inputs, outs, -1)
            continue
        e_in, e_out = _expand_cube(state, inputs, outs)
        state.add(inputs, outs, -1)
        state.add(e_in, e_out)
        new.append((e_in, e_out))
    # expanded cubes can coincide; merge duplicates
    seen = {}
    for inputs, outs in new:
        if inputs in seen:
            state.add(inputs, outs, -1)
            merged = seen[inputs] | outs
            state.add(inputs, seen[inputs], -1)
            state.add(inputs, merged)
            seen[inputs] = merged
        else:
            seen[inputs] = outs
    state.cubes = list(seen.items())


def irredundant(state: _State):
    # try to drop the most expensive cubes first
    order = sorted(state.cubes, key=lambda c: (-(len(c[0]) - c[0].count("-")), c[0]))
    keep = set(state.cubes)
    for c in order:
        if state.covered_elsewhere(*c):
            state.add(*c, sign=-1)
            keep.discard(c)
    state.cubes = [c for c in state.cubes if c in keep]


def reduce_(state: _State):
    new = []
    for inputs, outs in _order(state, state.cubes):
        ms = state.minterms(inputs)
        pts_all = []
        new_outs = 0
        for j in range(state.k):
            if outs >> j & 1:
                pts = ms[state.on[j][ms] & (state.cnt[j][ms] == 1)]
                if pts.size:
                    new_outs |= 1 << j
                    pts_all.append(pts)
        state.add(inputs, outs, -1)
        if not new_outs:
            continue
        pts = np.concatenate(pts_all)
        hi = int(np.bitwise_and.reduce(pts))
        lo = int(np.bitwise_or.reduce(pts))
        n = state.n
        chars = []
        for col in range(n):
            bit = 1 << (n - 1 - col)
            chars.append("1" if hi & bit else ("0" if not lo & bit else "-"))
        r_in = "".join(chars)
        state.add(r_in, new_outs)
        new.append((r_in, new_outs))
    seen = {}
    for inputs, outs in new:
        if inputs in seen:
            state.add(inputs, outs, -1)
            merged = seen[inputs] | outs
            state.add(inputs, seen[inputs], -1)
            state.add(inputs, merged)
            seen[inputs] = merged
        else:
            seen[inputs] = outs
    state.cubes = list(seen.items())


def make_sparse(state: _State):
    """Drop output connections whose ON points are all covered by other cubes."""
    out = []
    for inputs, outs in sorted(state.cubes):
        ms = state.minterms(inputs)
        for j in range(state.k):
            if outs >> j & 1:
                pts = ms[state.on[j][ms]]
                if pts.size == 0 or state.cnt[j][pts].min() >= 2:
                    state.cnt[j][ms] -= 1
                    outs &= ~(1 << j)
        if outs:
            out.append((inputs, outs))
    state.cubes = out


def _to_cover(state: _State, iterations: int) -> Cover:
    k = state.k
    cubes = tuple(sorted(Cube(i, "".join("1" if o >> j & 1 else "0" for j in range(k)))
                         for i, o in state.cubes))
    return Cover(state.n, k, cubes, provenance=Provenance.HEURISTIC, metadata={"iterations": iterations})


def minimize_heuristic(tt, max_iters: int = 20):
    """Espresso-style minimization; returns ``(Cover, MinimizeStats)``.

    The result never has more literals than the canonical minterm cover.
    """
    fn = as_function(tt)
    if fn.n_inputs > HEURISTIC_GUARD_BITS:
        raise CapacityError(f"{fn.n_inputs} input bits exceeds the heuristic guard of {HEURISTIC_GUARD_BITS}")
    state = _State(fn)
    start = [(c.inputs, int(c.outputs[::-1], 2)) for c in fn.minterm_cover().cubes]
    state.load(start)
    if not start:
        cover = _to_cover(state, 0)
        return cover, stats_for(cover, 0, False)
    expand(state)
    irredundant(state)
    best, best_cost = list(state.cubes), state.cost()
    iterations = 1
    while iterations < max_iters:
        iterations += 1
        reduce_(state)
        expand(state)
        irredundant(state)
        cost = state.cost()
        if cost < best_cost:
            best, best_cost = list(state.cubes), cost
        else:
            break
    state.load(best)
    make_sparse(state)
    cover = _to_cover(state, iterations)
    return cover, stats_for(cover, iterations, False)
