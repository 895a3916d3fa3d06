"""Exact minimum-literal two-level minimization.

Candidate cubes are the multi-output primes, found by tabulating every cube
of the ``3**n`` lattice at once.  The covering problem is then solved by
branch and bound with essential-column extraction, dominance reductions and
LP-relaxation bounds.
"""
from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from ..errors import CapacityError
from .cube import (BoolFunction, Cover, Cube, Provenance, as_function, bits_to_mask,
                   mask_to_bits, stats_for)

EXACT_GUARD_BITS = 12


def _lattice(base: np.ndarray, n: int, combine) -> np.ndarray:
    """Extend a ``(2,)*n`` array to ``(3,)*n``; index 2 on an axis is a free variable."""
    t = base.reshape((2,) * n) if n else base.reshape(())
    for axis in range(n):
        lo = np.take(t, [0], axis=axis)
        hi = np.take(t, [1], axis=axis)
        t = np.concatenate([t, combine(lo, hi)], axis=axis)
    return t


@dataclass
class Candidates:
    cubes: list[str]  # input parts, lexicographically sorted
    outputs: list[int]  # bitmask over output columns the cube may usefully drive


def multi_output_primes(fn: BoolFunction) -> Candidates:
    """Multi-output prime implicants that cover at least one ON minterm.

    A cube ``c`` is kept when no cube obtained by freeing one of its literals
    is an implicant of every output that ``c`` usefully covers.
    """
    n, k = fn.n_inputs, fn.n_outputs
    if k > 63:
        raise CapacityError("at most 63 outputs are supported")
    size = 1 << n
    care = np.zeros(size, dtype=np.uint64)
    onb = np.zeros(size, dtype=np.uint64)
    for j in range(k):
        bit = np.uint64(1 << j)
        care |= np.where(mask_to_bits(fn.on[j] | fn.dc[j], size), bit, np.uint64(0))
        onb |= np.where(mask_to_bits(fn.on[j], size), bit, np.uint64(0))
    tag = _lattice(care, n, np.bitwise_and)
    anyon = _lattice(onb, n, np.bitwise_or)
    useful = tag & anyon
    keep = useful != 0
    for axis in range(n):
        raised = np.take(tag, [2], axis=axis)
        for side in (0, 1):
            sl = [slice(None)] * n
            sl[axis] = slice(side, side + 1)
            sub = useful[tuple(sl)]
            keep[tuple(sl)] &= (sub & ~raised) != 0
    idx = np.flatnonzero(keep.ravel())
    digits = np.array(np.unravel_index(idx, (3,) * n)).T if n else np.zeros((len(idx), 0), int)
    lut = np.array(["0", "1", "-"])
    cubes = ["".join(row) for row in lut[digits]] if n else [""] * len(idx)
    outs = useful.ravel()[idx].tolist()
    order = sorted(range(len(cubes)), key=cubes.__getitem__)
    return Candidates([cubes[i] for i in order], [int(outs[i]) for i in order])


def _cube_minterms(inputs: str) -> np.ndarray:
    n = len(inputs)
    base = 0
    free = []
    for col, ch in enumerate(inputs):
        bit = n - 1 - col
        if ch == "1":
            base |= 1 << bit
        elif ch == "-":
            free.append(bit)
    ms = np.array([base], dtype=np.int64)
    for bit in free:
        ms = np.concatenate([ms, ms | (1 << bit)])
    return ms


class CoverProblem:
    """Unate covering: choose columns (with integer costs) so every row is covered.

    Rows and columns are tracked as bitsets.  Each search node applies
    essential-column and dominance reductions, then bounds with the LP
    relaxation (which also drives reduced-cost fixing and the branching
    choice).  Branching is on a column: take it first, then forbid it.
    """

    def __init__(self, col_rows: list[int], costs: list[int], n_rows: int):
        self.col_rows = col_rows
        self.costs = costs
        self.n_rows = n_rows
        self.row_cols = [0] * n_rows
        for c, rows in enumerate(col_rows):
            for r in self._bits(rows):
                self.row_cols[r] |= 1 << c
        n_cols = len(col_rows)
        ri, ci = [], []
        for c, rows in enumerate(col_rows):
            for r in self._bits(rows):
                ri.append(r)
                ci.append(c)
        self.matrix = sparse.csr_matrix((np.ones(len(ri)), (ri, ci)), shape=(n_rows, n_cols))
        self.cost_arr = np.asarray(costs, dtype=float)
        self.nodes = 0
        self.lp_solves = 0
        self.best_cost = None
        self.best_sel = None

    @staticmethod
    def _bits(x: int):
        while x:
            low = x & -x
            yield low.bit_length() - 1
            x ^= low

    def _greedy(self, R: int, C: int, start=()):
        sel = list(start)
        cost = sum(self.costs[c] for c in sel)
        for c in sel:
            R &= ~self.col_rows[c]
        while R:
            best, best_key = None, None
            for c in self._bits(C):
                gain = (self.col_rows[c] & R).bit_count()
                if gain:
                    key = (self.costs[c] / gain, c)
                    if best_key is None or key < best_key:
                        best, best_key = c, key
            if best is None:
                return None, None
            sel.append(best)
            cost += self.costs[best]
            R &= ~self.col_rows[best]
        # drop columns made redundant by later picks
        for c in sorted(sel, key=lambda c: -self.costs[c]):
            rest = 0
            for d in sel:
                if d != c:
                    rest |= self.col_rows[d]
            if self.col_rows[c] & ~rest & self._all_rows == 0:
                sel.remove(c)
                cost -= self.costs[c]
        return cost, sel

    def _reduce(self, R: int, C: int, sel: list[int], cost: int):
        """Essential columns and column dominance; returns updated state or None if infeasible."""
        changed = True
        while changed and R:
            changed = False
            for r in self._bits(R):
                if not R >> r & 1:
                    continue
                cols = self.row_cols[r] & C
                if cols == 0:
                    return None
                if cols & (cols - 1) == 0:
                    c = cols.bit_length() - 1
                    sel = sel + [c]
                    cost += self.costs[c]
                    R &= ~self.col_rows[c]
                    C &= ~cols
                    changed = True
            if changed:
                continue
            live = list(self._bits(C))
            if len(live) <= 300:
                proj = {c: self.col_rows[c] & R for c in live}
                for c in live:
                    pc = proj[c]
                    if pc == 0:
                        C &= ~(1 << c)
                        changed = True
                        continue
                    for d in live:
                        if d == c or not (C >> d) & 1:
                            continue
                        pd = proj[d]
                        if pc & ~pd == 0 and self.costs[d] <= self.costs[c] and \
                                (pd != pc or self.costs[d] < self.costs[c] or d < c):
                            C &= ~(1 << c)
                            changed = True
                            break
        return R, C, sel, cost

    def _lp(self, R: int, C: int):
        rows = np.fromiter(self._bits(R), dtype=np.int64)
        cols = np.fromiter(self._bits(C), dtype=np.int64)
        sub = self.matrix[rows][:, cols]
        self.lp_solves += 1
        res = linprog(self.cost_arr[cols], A_ub=-sub, b_ub=-np.ones(len(rows)),
                      bounds=(0, 1), method="highs")
        if res.status != 0:
            return None
        return res.fun, cols, res.x, res.lower.marginals

    def solve(self, node_limit: int | None = None) -> tuple[int, list[int], bool]:
        self._all_rows = R = (1 << self.n_rows) - 1
        C = (1 << len(self.col_rows)) - 1
        g_cost, g_sel = self._greedy(R, C)
        if g_cost is None:
            raise ValueError("covering problem is infeasible")
        self.best_cost, self.best_sel = g_cost, sorted(g_sel)
        self.node_limit = node_limit
        self.complete = True
        self._search(R, C, [], 0)
        return self.best_cost, sorted(self.best_sel), self.complete

    def _offer(self, cost: int, sel: list[int]):
        key = (cost, sorted(sel))
        if cost < self.best_cost or (cost == self.best_cost and key[1] < self.best_sel):
            self.best_cost, self.best_sel = key

    def _search(self, R: int, C: int, sel: list[int], cost: int):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.complete = False
            return
        red = self._reduce(R, C, sel, cost)
        if red is None:
            return
        R, C, sel, cost = red
        if R == 0:
            self._offer(cost, sel)
            return
        if cost >= self.best_cost:
            return
        lp = self._lp(R, C)
        if lp is None:
            return
        obj, cols, x, reduced = lp
        bound = cost + math.ceil(obj - 1e-7 * max(1.0, abs(obj)))
        if bound >= self.best_cost:
            return
        # rounding heuristic: LP support first, then greedy completion
        support = [int(c) for c, v in zip(cols, x) if v > 0.5 - 1e-9]
        h_cost, h_sel = self._greedy(R, C, support)
        if h_cost is not None:
            self._offer(cost + h_cost, sel + h_sel)
            if bound >= self.best_cost:
                return
        frac = [(abs(v - 0.5), int(c)) for c, v in zip(cols, x) if 1e-6 < v < 1 - 1e-6]
        if not frac:
            # integral LP optimum; it is the best completion of this node
            return
        # reduced-cost fixing: a column whose inclusion lifts the bound past the incumbent is useless
        slack = self.best_cost - cost - obj
        for c, v, d in zip(cols, x, reduced):
            if v < 1e-9 and d > slack + 1e-7:
                C &= ~(1 << int(c))
        c = min(frac)[1]
        self._search(R & ~self.col_rows[c], C & ~(1 << c), sel + [c], cost + self.costs[c])
        if self.node_limit is not None and self.nodes > self.node_limit:
            return
        self._search(R, C & ~(1 << c), sel, cost)


def build_cover_problem(fn: BoolFunction, cand: Candidates):
    size = 1 << fn.n_inputs
    row_id = []  # per output: array minterm -> row index or -1
    n_rows = 0
    for j in range(fn.n_outputs):
        bits = mask_to_bits(fn.on[j], size)
        ids = np.full(size, -1, dtype=np.int64)
        cnt = int(bits.sum())
        ids[bits] = np.arange(n_rows, n_rows + cnt)
        n_rows += cnt
        row_id.append(ids)
    col_rows, costs = [], []
    for inputs, outs in zip(cand.cubes, cand.outputs):
        ms = _cube_minterms(inputs)
        rows = []
        for j in range(fn.n_outputs):
            if outs >> j & 1:
                r = row_id[j][ms]
                rows.append(r[r >= 0])
        rows = np.concatenate(rows) if rows else np.zeros(0, np.int64)
        mark = np.zeros(n_rows, dtype=bool)
        mark[rows] = True
        col_rows.append(bits_to_mask(mark))
        lits = len(inputs) - inputs.count("-")
        # one literal outweighs any possible cube count, so cubes only break literal ties
        costs.append(lits * (n_rows + 1) + 1)
    return CoverProblem(col_rows, costs, n_rows)


def _outputs_str(mask: int, k: int) -> str:
    return "".join("1" if mask >> j & 1 else "0" for j in range(k))


def minimize_exact(tt, node_limit: int | None = None):
    """Minimum input-literal SOP cover of a (multi-output) table with don't-cares.

    Ties in literal count are broken by fewer cubes.  Returns ``(Cover, MinimizeStats)``.
    With ``node_limit`` set the search may stop early; the stats then report
    ``exact=False``.
    """
    fn = as_function(tt)
    if fn.n_inputs > EXACT_GUARD_BITS:
        raise CapacityError(
            f"{fn.n_inputs} input bits exceeds the exact guard of {EXACT_GUARD_BITS}; "
            "use minimize_heuristic or a segmented estimate")
    k = fn.n_outputs
    if not any(fn.on):
        cover = Cover(fn.n_inputs, k, (), provenance=Provenance.EXACT)
        return cover, stats_for(cover, 0, True)
    cand = multi_output_primes(fn)
    prob = build_cover_problem(fn, cand)
    _, sel, complete = prob.solve(node_limit)
    # drive only outputs whose ON-set the cube actually touches
    cubes = tuple(sorted(Cube(cand.cubes[c], _outputs_str(cand.outputs[c], k)) for c in sel))
    cover = Cover(fn.n_inputs, k, cubes, provenance=Provenance.EXACT,
                  metadata={"primes": len(cand.cubes), "nodes": prob.nodes})
    notes = [f"{len(cand.cubes)} primes", f"{prob.nodes} search nodes"]
    if not complete:
        notes.append("node limit reached: cover is the best found, not proven minimum")
    return cover, stats_for(cover, prob.nodes, complete, notes)
