"""Berkeley PLA reading and writing (``.type fd``).

Writer output is byte-stable: ASCII, LF line endings, one space between the
input and output parts, ``.e`` terminator.
"""
from __future__ import annotations

import io
import os

from ..errors import FormatError
from .cube import Cover, Cube, Provenance


def _table_lines(tt) -> list[str]:
    n, k = tt.n_inputs, tt.n_outputs
    outs = tt.outputs()
    lines = []
    for row, v in enumerate(outs.tolist()):
        bits = format(row, f"0{n}b")
        lines.append(f"{bits} {'-' * k if v < 0 else format(v, f'0{k}b')}")
    return lines


def pla_text(obj) -> str:
    """PLA text for a `Cover` or a `TruthTable` (one line per row, DC rows all ``-``)."""
    if isinstance(obj, Cover):
        n, k = obj.num_inputs, obj.num_outputs
        lines = [f"{c.inputs} {c.outputs}" for c in obj.cubes]
        lines += [f"{c.inputs} {c.outputs.replace('1', '-')}" for c in obj.dc]
    else:
        n, k = obj.n_inputs, obj.n_outputs
        lines = _table_lines(obj)
    head = [f".i {n}", f".o {k}", f".p {len(lines)}", ".type fd"]
    return "\n".join(head + lines + [".e"]) + "\n"


def pla_write(obj, destination=None) -> str:
    """Write PLA text to a path or text stream (if given) and return it."""
    text = pla_text(obj)
    if destination is None:
        return text
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        destination.write(text)
    return text


_KNOWN = {".i", ".o", ".p", ".type", ".e", ".end"}


def pla_read(source) -> Cover:
    """Parse a PLA file (path, text stream or string containing newlines).

    Rows with ``1`` outputs become cover cubes, rows with ``-`` outputs become
    don't-care cubes, ``0``/``~`` entries carry no information (``fd``
    semantics).  Unknown directives are kept in ``metadata["directives"]``.
    """
    if isinstance(source, (str, os.PathLike)) and not (isinstance(source, str) and "\n" in source):
        with open(source, encoding="ascii") as fh:
            text = fh.read()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
    n = k = p = p_line = None
    ptype = "fd"
    directives: dict[str, str] = {}
    on: dict[Cube, None] = {}
    dc: dict[Cube, None] = {}
    rows = 0
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("."):
            key, _, rest = line.partition(" ")
            rest = rest.strip()
            try:
                if key == ".i":
                    n = int(rest)
                elif key == ".o":
                    k = int(rest)
                elif key == ".p":
                    p, p_line = int(rest), lineno
            except ValueError:
                raise FormatError(f"bad {key} directive", lineno) from None
            if key == ".type":
                ptype = rest
                if ptype not in ("f", "fd"):
                    raise FormatError(f"unsupported PLA type {ptype!r}", lineno)
            elif key in (".e", ".end"):
                break
            elif key not in _KNOWN:
                directives[key] = rest
            continue
        if n is None or k is None:
            raise FormatError("cube before .i/.o declarations", lineno)
        parts = line.split()
        if len(parts) == 1 and len(parts[0]) == n + k:
            parts = [parts[0][:n], parts[0][n:]]
        if len(parts) != 2:
            raise FormatError(f"expected '<inputs> <outputs>', got {line!r}", lineno)
        inp, outp = parts
        if len(inp) != n:
            raise FormatError(f"input part has {len(inp)} positions, .i declares {n}", lineno)
        if len(outp) != k:
            raise FormatError(f"output part has {len(outp)} positions, .o declares {k}", lineno)
        if set(inp) - set("01-2"):
            raise FormatError(f"bad input symbol in {inp!r}", lineno)
        if set(outp) - set("01-~2"):
            raise FormatError(f"bad output symbol in {outp!r}", lineno)
        inp = inp.replace("2", "-")
        rows += 1
        o_bits = ["1" if ch == "1" else "0" for ch in outp]
        d_bits = ["1" if ch in "-2" else "0" for ch in outp]
        # dicts keep file order and drop repeated lines
        if "1" in o_bits:
            on[Cube(inp, "".join(o_bits))] = None
        if "1" in d_bits and ptype == "fd":
            dc[Cube(inp, "".join(d_bits))] = None
    if n is None or k is None:
        raise FormatError("missing .i or .o declaration")
    if p is not None and p != rows:
        raise FormatError(f".p declares {p} cubes but {rows} were read", p_line)
    cubes, dcs = tuple(on), tuple(dc)
    meta = {"directives": directives, "type": ptype, "rows": rows}
    return Cover(n, k, cubes, dcs, provenance=Provenance.IMPORTED, metadata=meta)
