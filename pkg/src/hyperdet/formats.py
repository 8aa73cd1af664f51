"""Text formats: HDT v1 tensors, poset files and colored families.

HDT v1::

    hdt 1
    d=<d> n=<n> ring=<descriptor>
    layout=dense|sparse
    <body>

A dense body lists the n^d values in lexicographic index order; a sparse
body has lines ``i_1 ... i_d value`` (1-based) and omits zeros.  Blank lines
and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .capset import ColoredFamily
from .errors import ParseError
from .order import Poset, poset_new
from .ring import parse_ring
from .tensor import Tensor, nonzero_mask

__all__ = [
    "parse_tensor",
    "format_tensor",
    "load_tensor",
    "save_tensor",
    "parse_poset",
    "format_poset",
    "load_poset",
    "parse_family",
    "format_family",
    "load_family",
]


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _fields(line: str, keys: tuple[str, ...]) -> dict[str, str]:
    got = {}
    for tok in line.split():
        k, sep, v = tok.partition("=")
        if not sep or k not in keys or k in got:
            raise ParseError(f"unexpected field {tok!r}")
        got[k] = v
    missing = [k for k in keys if k not in got]
    if missing:
        raise ParseError(f"missing field(s) {', '.join(missing)}")
    return got


def _int(text: str, what: str, low: int = 0) -> int:
    if not re.fullmatch(r"\d+", text):
        raise ParseError(f"{what} must be a nonnegative integer, got {text!r}")
    v = int(text)
    if v < low:
        raise ParseError(f"{what} must be at least {low}")
    return v


# -- tensors ------------------------------------------------------------------------


def parse_tensor(text: str) -> Tensor:
    lines = _lines(text)
    if len(lines) < 3 or lines[0].split() != ["hdt", "1"]:
        raise ParseError("expected an 'hdt 1' header")
    head = _fields(lines[1], ("d", "n", "ring"))
    d = _int(head["d"], "d", 1)
    n = _int(head["n"], "n")
    spec = parse_ring(head["ring"])
    layout = lines[2].replace(" ", "")
    if layout not in ("layout=dense", "layout=sparse"):
        raise ParseError(f"bad layout line {lines[2]!r}")
    body = lines[3:]
    if layout == "layout=dense":
        values = [tok for line in body for tok in line.split()]
        if len(values) != n**d:
            raise ParseError(f"dense body has {len(values)} values, expected {n ** d}")
        flat = [spec.parse_value(v) for v in values]
        arr = np.empty(len(flat), dtype=object)
        arr[:] = flat
        return Tensor(spec, arr.reshape((n,) * d), canonical=True)
    arr = np.empty((n,) * d, dtype=object)
    arr.fill(spec.zero())
    seen = set()
    for line in body:
        toks = line.split()
        if len(toks) != d + 1:
            raise ParseError(f"sparse line {line!r} needs {d} indices and a value")
        idx = tuple(_int(t, "index", 1) for t in toks[:d])
        if any(i > n for i in idx):
            raise ParseError(f"index {idx} outside [1, {n}]")
        if idx in seen:
            raise ParseError(f"duplicate index {idx}")
        seen.add(idx)
        arr[tuple(i - 1 for i in idx)] = spec.parse_value(toks[d])
    return Tensor(spec, arr, canonical=True)


def format_tensor(T: Tensor, layout: str = "dense") -> str:
    head = ["hdt 1", f"d={T.d} n={T.n} ring={T.spec}", f"layout={layout}"]
    fmt = T.spec.format
    if layout == "dense":
        if T.d == 1:
            rows = [" ".join(fmt(v) for v in T.entries())] if T.n else []
        else:
            flat = T.data.reshape(-1, T.n) if T.n else np.empty((0, 0), dtype=object)
            rows = [" ".join(fmt(v) for v in row) for row in flat]
    elif layout == "sparse":
        mask = nonzero_mask(T)
        rows = [
            " ".join(str(int(i) + 1) for i in idx) + " " + fmt(T.data[tuple(idx)])
            for idx in np.argwhere(mask)
        ]
    else:
        raise ValueError(f"unknown layout {layout!r}")
    return "\n".join(head + rows) + "\n"


def load_tensor(path) -> Tensor:
    return parse_tensor(Path(path).read_text(encoding="utf-8"))


def save_tensor(T: Tensor, path, layout: str = "dense"):
    Path(path).write_text(format_tensor(T, layout), encoding="utf-8")


# -- posets ---------------------------------------------------------------------------

_REL_RE = re.compile(r"(\d+)\s*<\s*(\d+)\Z")


def parse_poset(text: str) -> Poset:
    lines = _lines(text)
    if not lines or not lines[0].startswith("poset"):
        raise ParseError("expected a 'poset d=<d>' header")
    head = _fields(lines[0][len("poset"):], ("d",))
    d = _int(head["d"], "d", 1)
    pairs = []
    for line in lines[1:]:
        m = _REL_RE.match(line)
        if not m:
            raise ParseError(f"bad relation line {line!r}")
        pairs.append((int(m.group(1)), int(m.group(2))))
    try:
        return poset_new(d, pairs)
    except ValueError as exc:
        if type(exc) is ValueError:
            raise ParseError(str(exc)) from None
        raise


def format_poset(P: Poset) -> str:
    return "\n".join([f"poset d={P.d}"] + [f"{a} < {b}" for a, b in P.covers]) + "\n"


def load_poset(path) -> Poset:
    return parse_poset(Path(path).read_text(encoding="utf-8"))


# -- colored families -----------------------------------------------------------------


def parse_family(text: str) -> ColoredFamily:
    lines = _lines(text)
    if not lines or not lines[0].startswith("csf"):
        raise ParseError("expected a 'csf p= n= d= N=' header")
    head = _fields(lines[0][len("csf"):], ("p", "n", "d", "N"))
    p, n, d, N = (_int(head[k], k) for k in ("p", "n", "d", "N"))
    vectors = np.zeros((d, N, n), dtype=np.int64)
    pos = 1
    for color in range(1, d + 1):
        if pos >= len(lines) or lines[pos].split() != ["color", str(color)]:
            raise ParseError(f"expected 'color {color}'")
        pos += 1
        # zero-dimensional vectors leave no lines
        for i in range(N if n else 0):
            if pos >= len(lines):
                raise ParseError(f"color {color} has fewer than {N} vectors")
            toks = lines[pos].split()
            if len(toks) != n:
                raise ParseError(f"vector {lines[pos]!r} needs {n} residues")
            vals = [_int(t, "residue") for t in toks]
            if any(v >= p for v in vals):
                raise ParseError(f"residue out of range in {lines[pos]!r}")
            vectors[color - 1, i] = vals
            pos += 1
    if pos != len(lines):
        raise ParseError(f"trailing content: {lines[pos]!r}")
    try:
        return ColoredFamily(p, vectors)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_family(F: ColoredFamily) -> str:
    out = [f"csf p={F.p} n={F.n} d={F.d} N={F.N}"]
    for l in range(F.d):
        out.append(f"color {l + 1}")
        out.extend(" ".join(str(int(x)) for x in F.vectors[l, i]) for i in range(F.N))
    return "\n".join(out) + "\n"


def load_family(path) -> ColoredFamily:
    return parse_family(Path(path).read_text(encoding="utf-8"))
