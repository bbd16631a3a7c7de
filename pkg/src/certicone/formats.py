"""Text formats: native problems, solutions, certificates, SDPA, graphs, reports.

Native problem file (``#`` starts a comment)::

    conic v1
    cone sdp 2 | soc 3 | lin 2
    m 2
    ill-posed                      # optional
    b 1 0x1.8p+1
    c
    s1 1 1 2.5                     # SDP block 1, entry (1, 1)
    q1 3 -1                        # SOC block 1, coordinate 3 (the apex)
    l 2 [0x1p-1,0x1p+0]            # orthant coordinate 2, an interval
    end
    a 1                            # constraint row 1
    s1 2 1 1
    end

Indices are 1-based.  SDP entries name one triangle; writing both ``(i, j)``
and ``(j, i)`` is a duplicate.  Numbers are decimals (enclosed exactly), hex
floats (bit-exact) or ``[lo,hi]`` pairs.  :func:`write_problem` emits hex
floats, so ``write_problem(parse_problem(text)) == text`` for canonical files.

Solution file::

    solution v1
    y 1 -0.5
    x
    l 1 3
    end
    xbar
    s1 10
    l * 5                          # every orthant coordinate
    end
    ybar 10 10                     # or: ybar * 10

Approximations (``x``, ``y``) round decimals to nearest; caps (``xbar``,
``ybar``) round them upward so they stay valid.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .bounds import BoundReport, ConicProblem
from .certificates import Certificate
from .cones import BlockVector, ConeSpec, UpperBoundX, UpperBoundY
from .equicut import WeightedGraph
from .errors import ParseError
from .interval import Interval, from_decimal, parse_exact
from .sdpmat import pack_indices

__all__ = [
    "SolutionBundle", "parse_problem", "read_problem", "write_problem",
    "parse_solution", "read_solution", "write_solution", "parse_sdpa", "read_sdpa",
    "parse_certificate", "write_certificate", "parse_graph", "read_graph", "write_graph",
    "format_report", "format_value", "parse_report",
]


# ---------------------------------------------------------------------------
# tokenizing
# ---------------------------------------------------------------------------

@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _lines(text: str, comment: str = "#") -> list[list[_Tok]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        cut = raw.find(comment)
        body = raw if cut < 0 else raw[:cut]
        toks = [_Tok(m.group(), lineno, m.start() + 1) for m in re.finditer(r"\S+", body)]
        if toks:
            out.append(toks)
    return out


class _Cursor:
    def __init__(self, lines: list[list[_Tok]], source: str | None):
        self.lines = lines
        self.pos = 0
        self.source = source

    def error(self, msg: str, tok: _Tok | None = None) -> ParseError:
        if tok is None:
            last = self.lines[-1][0].line + 1 if self.lines else 1
            return ParseError(msg, last, None, self.source)
        return ParseError(msg, tok.line, tok.col, self.source)

    def peek(self) -> list[_Tok] | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def next(self, what: str) -> list[_Tok]:
        line = self.peek()
        if line is None:
            raise self.error(f"unexpected end of input, expected {what}")
        self.pos += 1
        return line

    def expect(self, keyword: str, nargs: int | None = None) -> list[_Tok]:
        line = self.next(repr(keyword))
        if line[0].text != keyword:
            raise self.error(f"expected {keyword!r}, found {line[0].text!r}", line[0])
        if nargs is not None and len(line) - 1 != nargs:
            raise self.error(f"{keyword!r} takes {nargs} argument(s), got {len(line) - 1}", line[0])
        return line


def _int(tok: _Tok, cur: _Cursor, lo: int = 1, hi: int | None = None, what: str = "index") -> int:
    if not re.fullmatch(r"[+-]?\d+", tok.text):
        raise cur.error(f"expected an integer {what}, found {tok.text!r}", tok)
    v = int(tok.text)
    if v < lo or (hi is not None and v > hi):
        bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
        raise cur.error(f"{what} {v} out of range {bound}", tok)
    return v


def _interval_value(tok: _Tok, cur: _Cursor) -> Interval:
    t = tok.text
    try:
        if t.startswith("["):
            if not t.endswith("]") or t.count(",") != 1:
                raise ValueError(f"malformed interval literal {t!r}")
            a, b = t[1:-1].split(",")
            lo, hi = float(from_decimal(a).lo), float(from_decimal(b).hi)
            if not lo <= hi:
                raise ValueError(f"empty interval {t!r}")
            return Interval(lo, hi)
        return from_decimal(t)
    except ValueError as exc:
        raise cur.error(str(exc), tok) from None


def _nearest(tok: _Tok, cur: _Cursor) -> float:
    try:
        v = float(parse_exact(tok.text))
    except (ValueError, OverflowError) as exc:
        raise cur.error(str(exc) or f"bad number {tok.text!r}", tok) from None
    if not math.isfinite(v):
        raise cur.error(f"value {tok.text!r} overflows", tok)
    return v


def _upward(tok: _Tok, cur: _Cursor) -> float:
    try:
        v = float(from_decimal(tok.text).hi)
    except ValueError as exc:
        raise cur.error(str(exc), tok) from None
    if not math.isfinite(v):
        raise cur.error(f"value {tok.text!r} overflows", tok)
    return v


def format_value(v: float) -> str:
    """Canonical hexadecimal encoding of a binary64 value."""
    return float(v).hex()


def _format_interval(lo: float, hi: float) -> str:
    if lo == hi:
        return format_value(lo)
    return f"[{format_value(lo)},{format_value(hi)}]"


# ---------------------------------------------------------------------------
# block entries
# ---------------------------------------------------------------------------

def _sdp_lookup(s: int) -> np.ndarray:
    rows, cols = pack_indices(s)
    idx = np.full((s, s), -1, dtype=np.int64)
    idx[rows, cols] = np.arange(rows.size)
    idx[cols, rows] = np.arange(rows.size)
    return idx


def _entry_index(toks: list[_Tok], spec: ConeSpec, cur: _Cursor) -> tuple[int, _Tok]:
    """Flat index named by an entry line and the value token."""
    head = toks[0]
    m = re.fullmatch(r"([sq])(\d+)|(l)", head.text)
    if not m:
        raise cur.error(f"unknown block {head.text!r} (expected s<k>, q<k> or l)", head)
    if m.group(1) == "s":
        if len(toks) != 4:
            raise cur.error("SDP entry needs 's<k> i j value'", head)
        k = _int(_Tok(m.group(2), head.line, head.col + 1), cur, 1, len(spec.sdp_orders), "SDP block")
        s = spec.sdp_orders[k - 1]
        i = _int(toks[1], cur, 1, s, "row")
        j = _int(toks[2], cur, 1, s, "column")
        return spec.sdp_slice(k - 1).start + int(_sdp_lookup(s)[i - 1, j - 1]), toks[3]
    if m.group(1) == "q":
        if len(toks) != 3:
            raise cur.error("SOC entry needs 'q<k> i value'", head)
        k = _int(_Tok(m.group(2), head.line, head.col + 1), cur, 1, len(spec.soc_dims), "SOC block")
        i = _int(toks[1], cur, 1, spec.soc_dims[k - 1], "coordinate")
        return spec.soc_slice(k - 1).start + i - 1, toks[2]
    if len(toks) != 3:
        raise cur.error("orthant entry needs 'l i value'", head)
    if spec.lin_dim == 0:
        raise cur.error("cone has no orthant block", head)
    i = _int(toks[1], cur, 1, spec.lin_dim, "coordinate")
    return spec.lin_slice.start + i - 1, toks[2]


def _read_entries(cur: _Cursor, spec: ConeSpec, value) -> dict[int, object]:
    entries: dict[int, object] = {}
    while True:
        toks = cur.next("'end'")
        if toks[0].text == "end":
            if len(toks) != 1:
                raise cur.error("'end' takes no arguments", toks[1])
            return entries
        idx, vtok = _entry_index(toks, spec, cur)
        if idx in entries:
            raise cur.error("duplicate entry", toks[0])
        entries[idx] = value(vtok, cur)


def _entry_labels(spec: ConeSpec) -> list[str]:
    labels = []
    for k, s in enumerate(spec.sdp_orders):
        rows, cols = pack_indices(s)
        labels += [f"s{k + 1} {r + 1} {c + 1}" for r, c in zip(rows, cols)]
    for j, n in enumerate(spec.soc_dims):
        labels += [f"q{j + 1} {i + 1}" for i in range(n)]
    labels += [f"l {i + 1}" for i in range(spec.lin_dim)]
    return labels


def _write_entries(lo: np.ndarray, hi: np.ndarray, labels: list[str]) -> list[str]:
    out = []
    for idx in np.flatnonzero((lo != 0) | (hi != 0)):
        out.append(f"{labels[idx]} {_format_interval(lo[idx], hi[idx])}")
    out.append("end")
    return out


# ---------------------------------------------------------------------------
# problems
# ---------------------------------------------------------------------------

def _parse_spec(toks: list[_Tok], cur: _Cursor) -> ConeSpec:
    if toks[0].text != "cone" or len(toks) < 2:
        raise cur.error("expected 'cone <spec>'", toks[0])
    text = " ".join(t.text for t in toks[1:])
    try:
        return ConeSpec.parse(text)
    except ValueError as exc:
        raise cur.error(str(exc), toks[1]) from None


def parse_problem(text: str, source: str | None = None) -> ConicProblem:
    """Parse the native ``conic v1`` format."""
    cur = _Cursor(_lines(text), source)
    head = cur.next("header")
    if [t.text for t in head] != ["conic", "v1"]:
        raise cur.error("expected header 'conic v1'", head[0])
    spec = _parse_spec(cur.next("cone line"), cur)
    m = _int(cur.expect("m", 1)[1], cur, 1, None, "constraint count")
    ill_posed = False
    if cur.peek() is not None and cur.peek()[0].text == "ill-posed":
        if len(cur.next("ill-posed")) != 1:
            raise cur.error("'ill-posed' takes no arguments", cur.lines[cur.pos - 1][1])
        ill_posed = True
    btoks = cur.expect("b", m)
    b = Interval.stack([_interval_value(t, cur) for t in btoks[1:]])
    N = spec.dim
    cur.expect("c", 0)
    c_entries = _read_entries(cur, spec, _interval_value)
    rows: dict[int, dict] = {}
    while cur.peek() is not None:
        toks = cur.expect("a", 1)
        i = _int(toks[1], cur, 1, m, "row")
        if i in rows:
            raise cur.error(f"row {i} given twice", toks[0])
        rows[i] = _read_entries(cur, spec, _interval_value)

    def dense(entries: dict, shape) -> Interval:
        lo, hi = np.zeros(shape), np.zeros(shape)
        for idx, v in entries.items():
            lo[idx], hi[idx] = float(v.lo), float(v.hi)
        return Interval(lo, hi)

    c = dense(c_entries, N)
    Alo, Ahi = np.zeros((m, N)), np.zeros((m, N))
    for i, entries in rows.items():
        r = dense(entries, N)
        Alo[i - 1], Ahi[i - 1] = r.lo, r.hi
    name = Path(source).stem if source else ""
    return ConicProblem(spec, Interval(Alo, Ahi), b, c, ill_posed=ill_posed, name=name)


def read_problem(path) -> ConicProblem:
    path = Path(path)
    return parse_problem(path.read_text(), str(path))


def write_problem(p: ConicProblem) -> str:
    """Serialize in the native format with hexadecimal floats."""
    spec = p.spec
    labels = _entry_labels(spec)
    out = ["conic v1", f"cone {spec}", f"m {p.m}"]
    if p.ill_posed:
        out.append("ill-posed")
    out.append("b " + " ".join(_format_interval(lo, hi) for lo, hi in zip(p.b.lo, p.b.hi)))
    out.append("c")
    out += _write_entries(p.c.lo, p.c.hi, labels)
    for i in range(p.m):
        out.append(f"a {i + 1}")
        out += _write_entries(p.A.lo[i], p.A.hi[i], labels)
    return "\n".join(out) + "\n"


def input_width(p: ConicProblem) -> float:
    """Largest width among the problem data (nonzero when decimals were widened)."""
    return float(max(np.max(p.A.width(), initial=0.0), np.max(p.b.width(), initial=0.0),
                     np.max(p.c.width(), initial=0.0)))


# ---------------------------------------------------------------------------
# solutions
# ---------------------------------------------------------------------------

@dataclass
class SolutionBundle:
    """Approximate solutions and caps read from a solution file."""

    x: BlockVector | None = None
    y: np.ndarray | None = None
    xbar: UpperBoundX | None = None
    ybar: UpperBoundY | None = None


def _parse_xbar(cur: _Cursor, spec: ConeSpec) -> UpperBoundX:
    sdp: list = [None] * len(spec.sdp_orders)
    soc: list = [None] * len(spec.soc_dims)
    lin = np.full(spec.lin_dim, np.nan)
    seen = set()
    while True:
        toks = cur.next("'end'")
        head = toks[0]
        if head.text == "end":
            break
        m = re.fullmatch(r"([sq])(\d+)|(l)", head.text)
        if not m:
            raise cur.error(f"unknown block {head.text!r}", head)
        if m.group(3):
            if len(toks) != 3:
                raise cur.error("orthant cap needs 'l i value' or 'l * value'", head)
            if toks[1].text == "*":
                idx = list(range(spec.lin_dim))
            else:
                idx = [_int(toks[1], cur, 1, spec.lin_dim, "coordinate") - 1]
            if spec.lin_dim == 0:
                raise cur.error("cone has no orthant block", head)
            v = _upward(toks[2], cur)
            for i in idx:
                if ("l", i) in seen:
                    raise cur.error("duplicate entry", head)
                seen.add(("l", i))
                lin[i] = v
            continue
        if len(toks) != 2:
            raise cur.error("block cap needs '<block> value'", head)
        kind = m.group(1)
        count = len(spec.sdp_orders) if kind == "s" else len(spec.soc_dims)
        k = _int(_Tok(m.group(2), head.line, head.col + 1), cur, 1, count, "block")
        if (kind, k) in seen:
            raise cur.error("duplicate entry", head)
        seen.add((kind, k))
        (sdp if kind == "s" else soc)[k - 1] = _upward(toks[1], cur)
    if np.all(np.isnan(lin)):
        lin = None
    elif np.any(np.isnan(lin)):
        raise cur.error("orthant caps must cover every coordinate (use 'l * value')")
    try:
        return UpperBoundX(sdp, soc, lin)
    except ValueError as exc:
        raise cur.error(str(exc)) from None


def _vector_line(toks: list[_Tok], cur: _Cursor, m: int | None, conv) -> np.ndarray:
    vals = toks[1:]
    if len(vals) == 2 and vals[0].text == "*":
        if m is None:
            raise cur.error("'*' needs a known length", vals[0])
        return np.full(m, conv(vals[1], cur))
    if m is not None and len(vals) != m:
        raise cur.error(f"expected {m} values, got {len(vals)}", toks[0])
    return np.array([conv(t, cur) for t in vals], dtype=np.float64)


def parse_solution(text: str, spec: ConeSpec, m: int | None = None,
                   source: str | None = None) -> SolutionBundle:
    """Parse a ``solution v1`` file against a cone spec (and row count ``m``)."""
    cur = _Cursor(_lines(text), source)
    head = cur.next("header")
    if [t.text for t in head] != ["solution", "v1"]:
        raise cur.error("expected header 'solution v1'", head[0])
    out = SolutionBundle()
    seen = set()
    while cur.peek() is not None:
        toks = cur.next("section")
        key = toks[0].text
        if key in seen:
            raise cur.error(f"section {key!r} given twice", toks[0])
        seen.add(key)
        if key == "y":
            out.y = _vector_line(toks, cur, m, _nearest)
        elif key == "ybar":
            v = _vector_line(toks, cur, m, _upward)
            if np.any(v < 0):
                raise cur.error("ybar must be nonnegative", toks[0])
            out.ybar = UpperBoundY(v)
        elif key == "x":
            if len(toks) != 1:
                raise cur.error("'x' takes no arguments", toks[1])
            entries = _read_entries(cur, spec, _nearest)
            x = np.zeros(spec.dim)
            for idx, v in entries.items():
                x[idx] = v
            out.x = BlockVector(spec, x)
        elif key == "xbar":
            if len(toks) != 1:
                raise cur.error("'xbar' takes no arguments", toks[1])
            out.xbar = _parse_xbar(cur, spec)
        else:
            raise cur.error(f"unknown section {key!r}", toks[0])
    if out.y is not None and out.ybar is not None and out.ybar.values.shape != out.y.shape:
        raise cur.error("ybar and y have different lengths")
    return out


def read_solution(path, spec: ConeSpec, m: int | None = None) -> SolutionBundle:
    path = Path(path)
    return parse_solution(path.read_text(), spec, m, str(path))


def write_solution(spec: ConeSpec, sol: SolutionBundle) -> str:
    labels = _entry_labels(spec)
    out = ["solution v1"]
    if sol.y is not None:
        out.append("y " + " ".join(format_value(v) for v in sol.y))
    if sol.x is not None:
        out.append("x")
        xd = np.asarray(sol.x.data if isinstance(sol.x, BlockVector) else sol.x, dtype=np.float64)
        out += _write_entries(xd, xd, labels)
    if sol.xbar is not None:
        out.append("xbar")
        for k, v in enumerate(sol.xbar.sdp):
            if v is not None:
                out.append(f"s{k + 1} {format_value(v)}")
        for j, v in enumerate(sol.xbar.soc):
            if v is not None:
                out.append(f"q{j + 1} {format_value(v)}")
        if sol.xbar.lin is not None:
            for i, v in enumerate(sol.xbar.lin):
                out.append(f"l {i + 1} {format_value(v)}")
        out.append("end")
    if sol.ybar is not None:
        out.append("ybar " + " ".join(format_value(v) for v in sol.ybar.values))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# SDPA sparse format
# ---------------------------------------------------------------------------

def parse_sdpa(text: str, source: str | None = None) -> ConicProblem:
    """Parse an SDPA ``.dat-s`` file.

    SDPA's primal ``min c^T x  s.t.  sum_i F_i x_i - F_0 psd`` has as dual
    ``max <F_0, Y>  s.t.  <F_i, Y> = c_i,  Y psd``; the latter is read as our
    primal with ``C = -F_0``, ``A_i = F_i``, ``b = c``, so our optimal value is
    the negated SDPA value.  Diagonal (negative size) blocks fold into the
    orthant in declaration order.  Only upper-triangle entries are accepted.
    """
    lines: list[list[_Tok]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.lstrip().startswith(('"', "*")):
            continue
        body = re.sub(r"[{}(),]", " ", raw)
        toks = [_Tok(m.group(), lineno, m.start() + 1) for m in re.finditer(r"\S+", body)]
        if toks:
            lines.append(toks)
    cur = _Cursor(lines, source)
    # header items start on a fresh line; trailing annotations such as
    # "=mdim" after the last needed number are ignored
    pending: list[_Tok] = []

    def take(what: str) -> _Tok:
        nonlocal pending
        if not pending:
            pending = list(cur.next(what))
        return pending.pop(0)

    def header(count: int, what: str) -> list[_Tok]:
        nonlocal pending
        pending = []
        out = [take(what) for _ in range(count)]
        pending = []
        return out

    m = _int(header(1, "m")[0], cur, 1, None, "constraint count")
    nblocks = _int(header(1, "block count")[0], cur, 1, None, "block count")
    sizes = [_int(t, cur, -10 ** 7, None, "block size") for t in header(nblocks, "block sizes")]
    if any(s == 0 for s in sizes):
        raise cur.error("block size 0 is not allowed")
    cvec = [_interval_value(t, cur) for t in header(m, "objective")]
    sdp_orders = tuple(s for s in sizes if s > 0)
    lin_dim = sum(-s for s in sizes if s < 0)
    spec = ConeSpec(sdp_orders, (), lin_dim)
    # where each SDPA block lands in the flat layout
    place = []
    sdp_k, lin_off = 0, spec.lin_slice.start
    for s in sizes:
        if s > 0:
            place.append(("s", sdp_k, s))
            sdp_k += 1
        else:
            place.append(("l", lin_off, -s))
            lin_off += -s
    N = spec.dim
    F = [dict() for _ in range(m + 1)]
    while cur.peek() is not None:
        row = cur.next("entry")
        if len(row) != 5:
            raise cur.error("entry needs 'matno blkno i j value'", row[0])
        first = row[0]
        mat = _int(first, cur, 0, m, "matrix number")
        blk = _int(row[1], cur, 1, nblocks, "block number")
        kind, where, size = place[blk - 1]
        i = _int(row[2], cur, 1, size, "row")
        j = _int(row[3], cur, 1, size, "column")
        vtok = row[4]
        if i > j:
            raise cur.error("entry below the diagonal (only the upper triangle is allowed)", first)
        if kind == "s":
            idx = spec.sdp_slice(where).start + int(_sdp_lookup(size)[j - 1, i - 1])
        else:
            if i != j:
                raise cur.error("off-diagonal entry in a diagonal block", first)
            idx = where + i - 1
        if idx in F[mat]:
            raise cur.error("duplicate entry", first)
        F[mat][idx] = _interval_value(vtok, cur)

    def dense(entries: dict) -> Interval:
        lo, hi = np.zeros(N), np.zeros(N)
        for idx, v in entries.items():
            lo[idx], hi[idx] = float(v.lo), float(v.hi)
        return Interval(lo, hi)

    c = -dense(F[0])
    A = Interval.stack([dense(F[i]) for i in range(1, m + 1)])
    b = Interval.stack(cvec)
    name = Path(source).stem if source else ""
    return ConicProblem(spec, A, b, c, name=name)


def read_sdpa(path) -> ConicProblem:
    path = Path(path)
    return parse_sdpa(path.read_text(), str(path))


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def write_certificate(cert: Certificate) -> str:
    out = ["certificate v1", f"kind {cert.kind}",
           "approx " + " ".join(format_value(v) for v in cert.approx),
           "witness_lo " + " ".join(format_value(v) for v in np.ravel(cert.witness.lo)),
           "witness_hi " + " ".join(format_value(v) for v in np.ravel(cert.witness.hi))]
    return "\n".join(out) + "\n"


def parse_certificate(text: str, source: str | None = None) -> Certificate:
    cur = _Cursor(_lines(text), source)
    head = cur.next("header")
    if [t.text for t in head] != ["certificate", "v1"]:
        raise cur.error("expected header 'certificate v1'", head[0])
    kind_line = cur.expect("kind", 1)
    kind = kind_line[1].text
    if kind not in ("primal_infeasible", "dual_infeasible"):
        raise cur.error(f"unknown certificate kind {kind!r}", kind_line[1])

    def hexes(key: str) -> np.ndarray:
        toks = cur.expect(key)
        vals = []
        for t in toks[1:]:
            try:
                vals.append(float.fromhex(t.text))
            except ValueError:
                raise cur.error(f"expected a hexadecimal float, found {t.text!r}", t) from None
        return np.array(vals, dtype=np.float64)

    approx = hexes("approx")
    lo, hi = hexes("witness_lo"), hexes("witness_hi")
    if not (lo.shape == hi.shape == approx.shape):
        raise cur.error("certificate vectors have different lengths")
    if np.any(lo > hi):
        raise cur.error("witness box has an empty component")
    if cur.peek() is not None:
        raise cur.error("trailing content", cur.peek()[0])
    return Certificate(kind, approx, Interval(lo, hi), {})


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

def parse_graph(text: str, source: str | None = None) -> WeightedGraph:
    """Graph file: a line ``n``, then ``i j w`` lines (1-based, ``i < j``)."""
    cur = _Cursor(_lines(text), source)
    head = cur.next("vertex count")
    if len(head) != 1:
        raise cur.error("first line must hold only the vertex count", head[0])
    n = _int(head[0], cur, 2, None, "vertex count")
    if n % 2:
        raise cur.error("vertex count must be even", head[0])
    edges = {}
    while cur.peek() is not None:
        toks = cur.next("edge")
        if len(toks) != 3:
            raise cur.error("edge line needs 'i j w'", toks[0])
        i = _int(toks[0], cur, 1, n, "vertex")
        j = _int(toks[1], cur, 1, n, "vertex")
        if not i < j:
            raise cur.error("edge endpoints must satisfy i < j", toks[0])
        if (i, j) in edges:
            raise cur.error("duplicate edge", toks[0])
        edges[(i, j)] = _interval_value(toks[2], cur)
    return WeightedGraph.from_edges(n, [(i - 1, j - 1, w) for (i, j), w in edges.items()])


def read_graph(path) -> WeightedGraph:
    path = Path(path)
    return parse_graph(path.read_text(), str(path))


def write_graph(g: WeightedGraph) -> str:
    out = [str(g.n)]
    for i in range(g.n):
        for j in range(i + 1, g.n):
            lo, hi = g.w.lo[i, j], g.w.hi[i, j]
            if lo != 0 or hi != 0:
                out.append(f"{i + 1} {j + 1} {_format_interval(lo, hi)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _report_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_report_value(x) for x in v)
    return str(v)


def format_report(items) -> str:
    """``key value`` lines; floats in ``%.17g`` (round-trips) and ``inf``/``-inf``."""
    pairs = items.items() if isinstance(items, dict) else items
    return "".join(f"{k} {_report_value(v)}\n" for k, v in pairs)


def bound_items(rep: BoundReport, p: ConicProblem) -> list[tuple[str, object]]:
    key = "lower_bound" if rep.kind == "lower" else "upper_bound"
    items: list[tuple[str, object]] = [(key, rep.value), (key + "_hex", format_value(rep.value))]
    if rep.kind == "lower":
        items.append(("dual_feasible", "proved" if rep.dual_feasible_proved else "not_proved"))
    else:
        items.append(("primal_feasible", "proved" if rep.primal_feasible_proved else "not_proved"))
    items.append(("input_max_width", input_width(p)))
    for k in sorted(rep.diagnostics):
        items.append((k, rep.diagnostics[k]))
    return items


def parse_report(text: str) -> dict[str, str]:
    """Inverse of :func:`format_report` at the string level."""
    out = {}
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition(" ")
            out[key] = value
    return out
