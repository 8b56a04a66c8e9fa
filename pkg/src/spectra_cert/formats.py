"""graph6 and plain edge-list serialisation.

graph6 follows the standard byte layout used by nauty: a size header
followed by the upper triangle of the adjacency matrix, read column by
column, packed six bits per printable character (offset 63).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

from .graph import Graph, GraphError


class FormatError(GraphError):
    """Malformed graph6 or edge-list text.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def _encode_size(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: Graph) -> str:
    bits: list[int] = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    body = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        body.append(chr(val + 63))
    return _encode_size(g.n) + "".join(body)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s:
        raise FormatError("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if any(not 0 <= d <= 63 for d in data):
        raise FormatError(f"invalid graph6 character in {text!r}")
    if data[0] == 63:
        if len(data) > 1 and data[1] == 63:
            if len(data) < 8:
                raise FormatError("truncated graph6 size header")
            n = 0
            for d in data[2:8]:
                n = (n << 6) | d
            data = data[8:]
        else:
            if len(data) < 4:
                raise FormatError("truncated graph6 size header")
            n = (data[1] << 12) | (data[2] << 6) | data[3]
            data = data[4:]
    else:
        n = data[0]
        data = data[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) != need:
        raise FormatError(f"graph6 body has {len(data)} bytes, expected {need} for n={n}")
    bits = []
    for d in data:
        bits.extend((d >> s) & 1 for s in (5, 4, 3, 2, 1, 0))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    if any(bits[k:]):
        raise FormatError("non-zero padding bits in graph6 string")
    return Graph(n, tuple(sorted(edges)))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    """Parse one graph per non-blank line; errors name the offending line."""
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            yield from_graph6(line)
        except GraphError as exc:
            raise FormatError(str(exc), line=lineno) from exc


def to_edge_list(g: Graph) -> str:
    """Edge-list text: vertex count on the first line, then one ``u v`` per line."""
    lines = [str(g.n)]
    for u, v, w in g.weighted_edges():
        lines.append(f"{u} {v}" if g.weights is None else f"{u} {v} {w}")
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    rows = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not rows:
        raise FormatError("empty edge list")
    first_line, head = rows[0]
    if len(head) != 1 or not head[0].isdigit():
        raise FormatError("first line must hold the vertex count", line=first_line)
    n = int(head[0])
    edges = []
    weights = []
    for lineno, parts in rows[1:]:
        if len(parts) not in (2, 3):
            raise FormatError(f"expected 'u v' or 'u v w', got {' '.join(parts)!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError(f"non-integer vertex in {' '.join(parts)!r}", line=lineno) from exc
        edges.append((u, v))
        weights.append(parts[2] if len(parts) == 3 else None)
    weighted = any(w is not None for w in weights)
    try:
        if weighted:
            return Graph.from_edges(n, edges, [Fraction(w if w is not None else 1) for w in weights])
        return Graph.from_edges(n, edges)
    except GraphError as exc:
        raise FormatError(str(exc)) from exc
