"""Directed partition graphs whose even/quasi-even partitions count Selmer classes.

Four builders, one per (curve side, sign of eps).  Vertices are labeled by
the integers they stand for (-1, 2, -2, p, q, and the prime factors D_i of
D), so the class attached to a partition is literally the product of the
V_1 labels.  Edges are (source, target, kind) with kind "dir" (directed) or
"und" (undirected); an undirected edge counts once in the crossing
out-degree of BOTH endpoints.

A partition (V1, V2) is even when every vertex has an even number of
crossing edges.  It is quasi-even when every vertex P has crossing count
congruent mod 2 to 0 or 1 according to (2/P) = +1 or -1; for P = -1 that
symbol is a convention attached to the graph (conv_2_over_minus1, possibly
undefined), and for P = +-2 it is taken as +1.

Each family of parameters selects one case row of its builder's definition;
the eps=-1 dual-side builder has a genuine hole at m = 4, pD = 7 (mod 8),
which raises CaseGap (callers report it; the instance is then handled by
descent and the oracle only).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ._backend import jacobi as _jac
from .model import CurveParams

EDGE_DIR = "dir"
EDGE_UND = "und"


class CaseGap(ValueError):
    """The (m, p, D) residues match no case row of the graph definition."""


class ConventionUndefined(ValueError):
    """Quasi-even check needed (2/-1) but the convention list defines none."""


@dataclass(frozen=True)
class PartitionGraph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, str], ...]
    conv_2_over_minus1: int | None
    case_id: str

    def has_vertex(self, v: int) -> bool:
        return v in self.vertices


def _leg(a: int, l: int) -> int:
    return _jac(a % l, l)


def _dedup(edges: list[tuple[int, int, str]]) -> tuple[tuple[int, int, str], ...]:
    return tuple(dict.fromkeys(edges))


def _pick_case(flags: list[bool], where: str, params: CurveParams) -> int:
    hits = [i for i, f in enumerate(flags) if f]
    if not hits:
        raise CaseGap("%s: no case row for m=%d, p=%d, D=%d (pD mod 8 = %d)"
                      % (where, params.m, params.p, params.D,
                         (params.p * params.D) % 8))
    if len(hits) > 1:
        raise AssertionError("%s: case rows overlap for %s" % (where, params.key))
    return hits[0] + 1


def _split_edges(params: CurveParams) -> list[tuple[int, int, str]]:
    # D_i -> D_j for split sources: present when (D_j / D_i) = -1
    f, s, n = params.factors, params.s, params.n
    out = []
    for i in range(s):
        for j in range(n):
            if j != i and _leg(f[j], f[i]) == -1:
                out.append((f[i], f[j], EDGE_DIR))
    return out


def _reverse_split_edges(params: CurveParams) -> list[tuple[int, int, str]]:
    # D_j -> D_i from non-split sources into split targets
    f, s, n = params.factors, params.s, params.n
    out = []
    for i in range(s):
        for j in range(s, n):
            if _leg(f[i], f[j]) == -1:
                out.append((f[j], f[i], EDGE_DIR))
    return out


def _pq_edges(params: CurveParams) -> list[tuple[int, int, str]]:
    # l -> D_i for l in {p, q} and split targets with (D_i / l) = -1
    f, s = params.factors, params.s
    out = []
    for l in (params.p, params.q):
        for i in range(s):
            if _leg(f[i], l) == -1:
                out.append((l, f[i], EDGE_DIR))
    return out


def _di_p_edges(params: CurveParams) -> list[tuple[int, int, str]]:
    # D_i -> p for split sources with (p / D_i) = -1
    f, s = params.factors, params.s
    return [(f[i], params.p, EDGE_DIR) for i in range(s)
            if _leg(params.p, f[i]) == -1]


def _special_fanout(source: int, value: int, params: CurveParams,
                    include_p: bool = True) -> list[tuple[int, int, str]]:
    # source -> D_k over all k with (value / D_k) = -1, plus source -> p
    out = [(source, dk, EDGE_DIR) for dk in params.factors
           if _leg(value, dk) == -1]
    if include_p and _leg(value, params.p) == -1:
        out.append((source, params.p, EDGE_DIR))
    return out


def build_G_plus(params: CurveParams) -> PartitionGraph:
    """Curve-side graph for eps = +1."""
    if params.eps != 1:
        raise ValueError("graph applies to eps=+1 parameters")
    p, q, D, m, s = params.p, params.q, params.D, params.m, params.s
    f = params.factors
    case = _pick_case([
        m == 1 or (m == 2 and ((p + 2) * D) % 8 != 5) or (m >= 3 and (p * D) % 4 == 1),
        (m == 2 and ((p + 2) * D) % 8 == 5) or (m >= 3 and (p * D) % 4 == 3),
    ], "G(+D)", params)
    edges = (_split_edges(params) + _reverse_split_edges(params)
             + _pq_edges(params))
    if case == 1:
        verts = (-1, p, q) + f
        edges += [(-1, f[i], EDGE_DIR) for i in range(s) if _leg(-1, f[i]) == -1]
    else:
        verts = (p, q) + f
    edges += _di_p_edges(params)
    pD8, D4 = (p * D) % 8, D % 4
    conv = None
    if ((m == 1 and pD8 == 7 and D4 == 1) or (m == 1 and pD8 == 1 and D4 == 3)
            or (m >= 4 and pD8 == 1)):
        conv = 1
    elif ((m == 1 and pD8 == 5 and D4 == 1) or (m == 1 and pD8 == 7 and D4 == 3)
            or (m >= 4 and pD8 == 5)):
        conv = -1
    return PartitionGraph(verts, _dedup(edges), conv, "G(+D).case%d" % case)


def build_g_plus(params: CurveParams) -> PartitionGraph:
    """Dual-side graph for eps = +1."""
    if params.eps != 1:
        raise ValueError("graph applies to eps=+1 parameters")
    p, D, m, s = params.p, params.D, params.m, params.s
    f = params.factors
    pD8, pD4, D4 = (p * D) % 8, (p * D) % 4, D % 4
    case = _pick_case([
        ((m == 1 and p % 4 == 1 and (p - D) % 8 in (0, 6))
         or (m == 1 and p % 4 == 3 and (p - D) % 8 in (2, 4))
         or (m == 2 and pD4 == 1)
         or (m == 2 and D4 == 3 and pD8 == 3)
         or (m == 2 and D4 == 1 and pD8 == 7)
         or (m == 3 and pD4 == 1)),
        ((m == 1 and p % 4 == 1 and (p - D) % 8 in (2, 4))
         or (m >= 4 and pD8 == 5)),
        ((m == 1 and p % 4 == 3 and (p - D) % 8 in (0, 6))
         or (m >= 4 and pD8 == 1)),
        ((m == 2 and D4 == 1 and pD8 == 3)
         or (m == 2 and D4 == 3 and pD8 == 7)
         or (m == 3 and pD8 == 3)
         or (m == 4 and pD4 == 3)
         or (m >= 5 and pD8 == 3)),
        ((m == 3 and pD8 == 7) or (m >= 5 and pD8 == 7)),
    ], "g(+D)", params)
    base = (_split_edges(params)
            + [(f[i], -1, EDGE_DIR) for i in range(s) if _leg(-1, f[i]) == -1]
            + _di_p_edges(params))
    if case == 1:
        verts: tuple[int, ...] = (-1, p) + f
        edges = base
    elif case == 2:
        verts = (-1, -2, p) + f
        edges = base + _special_fanout(-2, -2, params) + [(-2, -1, EDGE_DIR)]
    elif case == 3:
        verts = (-1, p, 2) + f
        edges = base + _special_fanout(2, 2, params)
    elif case == 4:
        verts = (-1, p) + f
        edges = base + _special_fanout(-1, -1, params)
    else:
        verts = (-1, p, -2, 2) + f
        edges = (base + _special_fanout(-2, -2, params)
                 + _special_fanout(2, 2, params) + [(-2, -1, EDGE_DIR)])
    return PartitionGraph(verts, _dedup(edges), None, "g(+D).case%d" % case)


def build_G_minus(params: CurveParams) -> PartitionGraph:
    """Curve-side graph for eps = -1."""
    if params.eps != -1:
        raise ValueError("graph applies to eps=-1 parameters")
    p, q, D, m = params.p, params.q, params.D, params.m
    f = params.factors
    pD8, pD4, D4 = (p * D) % 8, (p * D) % 4, D % 4
    case = _pick_case([
        m == 1 and D4 == 1,
        ((m == 1 and D4 == 3)
         or (m == 2 and D4 == 3 and ((p + 2) * D) % 8 != 3)),
        ((m == 2 and ((p + 2) * D) % 8 == 3) or (m >= 3 and pD4 == 1)),
        (m == 2 and ((p + 2) * D) % 8 != 3 and D4 == 1),
        m >= 3 and pD4 == 3,
    ], "G(-D)", params)
    verts = (-1, p, q) + f
    edges = (_split_edges(params) + _reverse_split_edges(params)
             + _pq_edges(params) + _di_p_edges(params))
    minus_dk = [dk for dk in f if _leg(-1, dk) == -1]
    minus_pq = [l for l in (p, q) if _leg(-1, l) == -1]
    if case == 1:
        edges += [(dk, -1, EDGE_UND) for dk in minus_dk]
        edges += [(-1, l, EDGE_UND) for l in minus_pq]
    elif case == 2:
        edges += [(-1, dk, EDGE_UND) for dk in minus_dk]
        edges += [(l, -1, EDGE_DIR) for l in minus_pq]
    elif case == 3:
        edges += [(dk, -1, EDGE_DIR) for dk in minus_dk]
        edges += [(l, -1, EDGE_DIR) for l in minus_pq]
    elif case == 4:
        edges += [(dk, -1, EDGE_UND) for dk in minus_dk]
        edges += [(l, -1, EDGE_DIR) for l in minus_pq]
        edges += [(-1, p, EDGE_DIR)]
    else:
        edges += [(dk, -1, EDGE_UND) for dk in minus_dk]
        edges += [(l, -1, EDGE_DIR) for l in minus_pq]
        if _leg(-1, p) == -1:
            edges += [(-1, p, EDGE_DIR)]
    conv = None
    if ((m == 1 and pD8 == 7 and D4 == 1) or (m == 1 and pD8 == 1 and D4 == 3)
            or (m == 3 and pD8 == 1) or (m >= 4 and pD8 == 7)
            or (m >= 5 and pD8 == 1)):
        conv = 1
    elif ((m == 1 and pD8 == 1 and D4 == 1) or (m == 1 and pD8 == 3 and D4 == 3)
            or (m >= 4 and pD8 == 3)):
        conv = -1
    return PartitionGraph(verts, _dedup(edges), conv, "G(-D).case%d" % case)


def build_g_minus(params: CurveParams) -> PartitionGraph:
    """Dual-side graph for eps = -1.

    The defining case list genuinely misses m = 4 with pD = 7 (mod 8); that
    combination raises CaseGap rather than guessing a row.
    """
    if params.eps != -1:
        raise ValueError("graph applies to eps=-1 parameters")
    p, D, m = params.p, params.D, params.m
    f = params.factors
    pD8, pD4, D4 = (p * D) % 8, (p * D) % 4, D % 4
    case = _pick_case([
        ((m == 1 and (p - D) % 8 in (2, 4))
         or (m == 2 and pD4 == 3)
         or (m == 2 and D4 == 1 and pD8 == 5)
         or (m == 2 and D4 == 3 and pD8 == 1)
         or (m == 3 and pD4 == 3)),
        ((m == 1 and p % 4 == 1 and (p - D) % 8 in (0, 6))
         or (m >= 4 and pD8 == 3)),
        ((m == 1 and p % 4 == 3 and (p - D) % 8 in (0, 6))
         or (m >= 5 and pD8 == 7)),
        ((m == 2 and D4 == 1 and pD8 == 1)
         or (m == 2 and D4 == 3 and pD8 == 5)
         or (m >= 3 and pD8 == 5)
         or (m == 4 and pD8 == 1)),
        ((m == 3 and pD8 == 1) or (m >= 5 and pD8 == 1)),
    ], "g(-D)", params)
    base = _split_edges(params) + _di_p_edges(params)
    if case == 1:
        verts: tuple[int, ...] = (p,) + f
        edges = base
    elif case == 2:
        verts = (p, -2) + f
        edges = base + _special_fanout(-2, -2, params)
    elif case == 3:
        verts = (p, 2) + f
        edges = base + _special_fanout(2, 2, params)
    elif case == 4:
        verts = (p, -1) + f
        edges = base + _special_fanout(-1, -1, params)
    else:
        verts = (p, -1, 2) + f
        edges = base + _special_fanout(-1, -1, params) + _special_fanout(2, 2, params)
    return PartitionGraph(verts, _dedup(edges), None, "g(-D).case%d" % case)


def _cross_counts(graph: PartitionGraph, v1: frozenset[int]) -> dict[int, int]:
    counts = {v: 0 for v in graph.vertices}
    for u, v, kind in graph.edges:
        crossing = (u in v1) != (v in v1)
        if not crossing:
            continue
        counts[u] += 1
        if kind == EDGE_UND:
            counts[v] += 1
    return counts


def is_even(graph: PartitionGraph, v1) -> bool:
    """Every vertex has an even number of crossing edges."""
    v1 = frozenset(v1)
    return all(c % 2 == 0 for c in _cross_counts(graph, v1).values())


def _two_symbol(graph: PartitionGraph, vertex: int, crossings: int) -> int:
    if vertex == -1:
        conv = graph.conv_2_over_minus1
        if conv is None:
            if crossings:
                raise ConventionUndefined(
                    "(2/-1) undefined for %s but -1 has %d crossing edges"
                    % (graph.case_id, crossings))
            return 1
        return conv
    if vertex in (2, -2):
        return 1
    return _leg(2, vertex)


def is_quasi_even(graph: PartitionGraph, v1) -> bool:
    """Crossing count parity at each vertex P matches the symbol (2/P)."""
    v1 = frozenset(v1)
    for vertex, crossings in _cross_counts(graph, v1).items():
        want = 0 if _two_symbol(graph, vertex, crossings) == 1 else 1
        if crossings % 2 != want:
            return False
    return True


def enumerate_partitions(graph: PartitionGraph, force_v1=(), force_v2=()) -> Iterator[frozenset[int]]:
    """All partitions (V1, V2) respecting the forced side assignments.

    Yields V1 as a frozenset; V2 is the complement.  Forced vertices must
    exist in the graph and not be forced both ways.
    """
    force_v1 = tuple(force_v1)
    force_v2 = tuple(force_v2)
    for v in (*force_v1, *force_v2):
        if v not in graph.vertices:
            raise ValueError("vertex %r not in graph %s" % (v, graph.case_id))
    if set(force_v1) & set(force_v2):
        raise ValueError("a vertex is forced into both sides")
    free = [v for v in graph.vertices if v not in force_v1 and v not in force_v2]
    base = frozenset(force_v1)
    for mask in range(1 << len(free)):
        yield base | frozenset(v for i, v in enumerate(free) if mask >> i & 1)


def serialize_graph(graph: PartitionGraph) -> str:
    """Stable text form: header with case and convention, then one edge per line."""
    conv = graph.conv_2_over_minus1
    lines = [
        "# case: %s" % graph.case_id,
        "# conv(2/-1): %s" % ("undefined" if conv is None else "%+d" % conv),
        "# vertices: %s" % " ".join(str(v) for v in graph.vertices),
    ]
    for u, v, kind in graph.edges:
        lines.append("%d -> %d" % (u, v) if kind == EDGE_DIR else "%d -- %d" % (u, v))
    return "\n".join(lines) + "\n"
