"""Exhaustive correctness check of a cover against its specification."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import CapacityError, ParameterError
from .cube import Cover, as_function, mask_to_indices

VERIFY_GUARD_BITS = 22
MAX_REPORTED = 10


@dataclass(frozen=True)
class Violation:
    row: int
    output: int  # output column
    kind: str  # "uncovered" (specified 1 not asserted) or "false" (asserted on a specified 0)
    a: int | None = None
    b: int | None = None

    def __str__(self) -> str:
        where = f"row {self.row}" if self.a is None else f"row {self.row} (a={self.a}, b={self.b})"
        what = "ON minterm not covered" if self.kind == "uncovered" else "cube asserts an OFF minterm"
        return f"{where}, output column {self.output}: {what}"


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    violations: tuple[Violation, ...] = field(default=())
    total_violations: int = 0
    checked_rows: int = 0

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return f"PASS ({self.checked_rows} rows checked)"
        lines = [f"FAIL: {self.total_violations} violation(s), first {len(self.violations)}:"]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checked_rows": self.checked_rows,
                "total_violations": self.total_violations,
                "violations": [str(v) for v in self.violations]}


def verify_cover(cover: Cover, tt) -> VerifyReport:
    fn = as_function(tt)
    if cover.num_inputs != fn.n_inputs or cover.num_outputs != fn.n_outputs:
        raise ParameterError(
            f"cover is {cover.num_inputs}x{cover.num_outputs}, table is {fn.n_inputs}x{fn.n_outputs}")
    if fn.n_inputs > VERIFY_GUARD_BITS:
        raise CapacityError(f"{fn.n_inputs} input bits exceeds the verification guard")
    wl_b = getattr(getattr(tt, "spec", None), "wl_b", None)
    asserted = cover.output_masks()
    found = []
    total = 0
    off = fn.off
    for k in range(fn.n_outputs):
        for kind, bad in (("uncovered", fn.on[k] & ~asserted[k]), ("false", asserted[k] & off[k])):
            if not bad:
                continue
            total += bad.bit_count()
            if len(found) < MAX_REPORTED:
                for row in mask_to_indices(bad)[:MAX_REPORTED - len(found)]:
                    ab = (row >> wl_b, row & ((1 << wl_b) - 1)) if wl_b is not None else (None, None)
                    found.append(Violation(row, k, kind, *ab))
    found.sort(key=lambda v: (v.row, v.output))
    return VerifyReport(total == 0, tuple(found), total, 1 << fn.n_inputs)
