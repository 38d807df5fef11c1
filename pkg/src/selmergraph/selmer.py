"""Selmer groups of the isogeny pair, computed three independent ways.

* selmer_by_descent walks every square class through the congruence tables,
  place by place, falling back to the generic local oracle for the few
  (class, place) pairs the tables leave open;
* selmer_by_graph reads the group off even / quasi-even partitions of the
  parameter graphs;
* theorem_count evaluates the closed counting formulas.

All three must agree instance by instance; verify_instance packages the
cross-checks (plus the subgroup / kill invariants, the containment of the
four rational 2-isogeny points on the dual side, and the appendix rank
lower bounds) into one report.

Class masks follow the Q(S,2) basis order: bit 0 is -1, bit 1 is 2, bit 2
is p, bit 3 is q, bit 4+i is D_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

from ._backend import jacobi as _jac
from .graphs import (
    PartitionGraph,
    build_G_minus,
    build_G_plus,
    build_g_minus,
    build_g_plus,
    enumerate_partitions,
    is_even,
    is_quasi_even,
)
from .local import UnsupportedClass, table_verdict
from .model import (
    CurveParams,
    Place,
    SquareClass,
    enumerate_classes,
    places,
)
from .oracle import locally_solvable

FAMILIES = ("E", "Eprime")


class OutOfScope(ValueError):
    """The requested bound is not defined for these parameters."""


def _leg(a: int, l: int) -> int:
    return _jac(a % l, l)


@dataclass(frozen=True)
class SelmerSet:
    """A set of square classes, normally a subgroup of Q(S,2)."""

    params: CurveParams
    family: str
    masks: frozenset[int]

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, d) -> bool:
        if isinstance(d, SquareClass):
            return d.mask in self.masks
        from .model import class_from_integer
        return class_from_integer(self.params, int(d)).mask in self.masks

    def classes(self) -> list[SquareClass]:
        return [SquareClass(self.params, m) for m in sorted(self.masks)]

    def representatives(self) -> list[int]:
        return [c.as_integer() for c in self.classes()]

    def is_subgroup(self) -> bool:
        if 0 not in self.masks:
            return False
        ms = self.masks
        return all((a ^ b) in ms for a in ms for b in ms)

    @property
    def dim2(self) -> int:
        size = len(self.masks)
        if size == 0 or size & (size - 1):
            raise ValueError("set of order %d is not an F_2 vector space" % size)
        return size.bit_length() - 1


# ---------------------------------------------------------------------------
# descent through the congruence tables


class DescentRecord(NamedTuple):
    mask: int
    rep: int
    member: bool
    decided_by: str               # "table" or "oracle"
    kill_place: str | None
    kill_rule: str | None
    gap_places: tuple


@dataclass(frozen=True)
class DescentResult:
    selmer: SelmerSet
    records: tuple[DescentRecord, ...]
    oracle_fallbacks: int


def _place_name(place: Place) -> str:
    return "inf" if place.tag == "inf" else str(place.value)


def selmer_by_descent(params: CurveParams, family: str,
                      depth: int | None = None,
                      oracle: Callable[[int, Place], bool] | None = None) -> DescentResult:
    """Membership class by class: table clauses first, oracle for the gaps.

    A class is excluded as soon as any clause reports a failing place; it is
    admitted when every place carries a passing clause.  Places no clause
    covers (on the dual side, the odd classes with q in their support) are
    settled by the oracle.
    """
    if family not in FAMILIES:
        raise ValueError("family must be 'E' or 'Eprime', got %r" % (family,))
    if oracle is None:
        def oracle(rep: int, place: Place) -> bool:
            return locally_solvable(params, rep, family, place, depth)
    members: set[int] = set()
    records: list[DescentRecord] = []
    fallbacks = 0
    all_places = places(params)
    for cls in enumerate_classes(params):
        rep = cls.as_integer()
        kill: tuple[str, str] | None = None
        gaps: list[Place] = []
        for place in all_places:
            try:
                verdict = table_verdict(params, cls, family, place)
            except UnsupportedClass:
                gaps.append(place)
                continue
            if not verdict.solvable:
                kill = (_place_name(place), verdict.rule)
                break
        if kill is not None:
            member, decided = False, "table"
        elif not gaps:
            member, decided = True, "table"
        else:
            decided = "oracle"
            fallbacks += 1
            member = all(oracle(rep, place) for place in gaps)
        if member:
            members.add(cls.mask)
        records.append(DescentRecord(
            cls.mask, rep, member, decided,
            kill[0] if kill else None, kill[1] if kill else None,
            tuple(_place_name(g) for g in gaps)))
    return DescentResult(SelmerSet(params, family, frozenset(members)),
                         tuple(records), fallbacks)


# ---------------------------------------------------------------------------
# partition graphs and counting formulas


def even_only_regime(params: CurveParams) -> bool:
    """Whether the curve-side group consists of even-partition classes only.

    Outside these residue combinations the even-class part contributes too,
    through quasi-even partitions.
    """
    p, D, m = params.p, params.D, params.m
    pD8, pD4, D4 = (p * D) % 8, (p * D) % 4, D % 4
    if params.eps == 1:
        return ((m == 1 and pD8 == 5 and D4 == 3)
                or (m == 1 and pD8 == 1 and D4 == 1)
                or m == 2
                or pD8 == 3
                or (m == 3 and pD4 == 1)
                or (m == 4 and pD8 == 7))
    return ((m == 1 and pD8 in (5, 7) and D4 == 3)
            or (m == 1 and pD8 in (3, 5) and D4 == 1)
            or m == 2
            or (m == 3 and pD8 != 1)
            or (m == 4 and pD4 == 1)
            or (m >= 5 and pD8 == 5))


def _vertex_mask(params: CurveParams, v: int) -> int:
    if v == -1:
        return 0b0001
    if v == 2:
        return 0b0010
    if v == -2:
        return 0b0011
    if v == params.p:
        return 0b0100
    if v == params.q:
        return 0b1000
    return 1 << (4 + params.factors.index(v))


def _partition_mask(params: CurveParams, v1) -> int:
    mask = 0
    for v in v1:
        mask ^= _vertex_mask(params, v)
    return mask


def _graph_for(params: CurveParams, family: str) -> PartitionGraph:
    if family == "E":
        return build_G_plus(params) if params.eps == 1 else build_G_minus(params)
    if family == "Eprime":
        return build_g_plus(params) if params.eps == 1 else build_g_minus(params)
    raise ValueError("family must be 'E' or 'Eprime', got %r" % (family,))


def _forced_v2(params: CurveParams, family: str, graph: PartitionGraph) -> list[int]:
    if family == "E":
        forced = [params.p, params.q]
        forced += list(params.factors[params.s:])
        if params.eps == 1 and graph.has_vertex(-1):
            forced.append(-1)
        return forced
    forced = [v for v in (2, -2) if graph.has_vertex(v)]
    if params.eps == -1 and graph.has_vertex(-1):
        forced.append(-1)
    return forced


PQ_MASK = 0b1100
TWO_MASK = 0b0010


@dataclass(frozen=True)
class GraphResult:
    selmer: SelmerSet
    case_id: str
    even_count: int
    quasi_even_count: int | None   # None when the regime counts evens only
    even_only: bool | None         # None on the dual side (no regime split)


def selmer_by_graph(params: CurveParams, family: str) -> GraphResult:
    """Read the group off the parameter graph.

    Curve side: even partitions give the odd classes directly; outside the
    even-only regime, quasi-even partitions contribute the classes 2 * prod(V1).
    Dual side: even partitions avoiding +-2 give half the group, the other
    half is the pq-coset.  Raises CaseGap / ConventionUndefined when the
    graph definitions do not reach the instance.
    """
    graph = _graph_for(params, family)
    forced = _forced_v2(params, family, graph)
    evens = [v1 for v1 in enumerate_partitions(graph, force_v2=forced)
             if is_even(graph, v1)]
    masks = {_partition_mask(params, v1) for v1 in evens}
    if len(masks) != len(evens):
        raise AssertionError("even partitions collide in %s" % graph.case_id)
    qe_count: int | None = None
    even_only: bool | None = None
    if family == "E":
        even_only = even_only_regime(params)
        if not even_only:
            quasi = [v1 for v1 in enumerate_partitions(graph, force_v2=forced)
                     if is_quasi_even(graph, v1)]
            qe_masks = {_partition_mask(params, v1) ^ TWO_MASK for v1 in quasi}
            if len(qe_masks) != len(quasi):
                raise AssertionError("quasi-even partitions collide in %s" % graph.case_id)
            qe_count = len(quasi)
            masks |= qe_masks
    else:
        masks |= {m ^ PQ_MASK for m in masks}
    return GraphResult(SelmerSet(params, family, frozenset(masks)),
                       graph.case_id, len(evens), qe_count, even_only)


def theorem_count(params: CurveParams, family: str) -> int:
    """The closed count: evens (plus quasi-evens off-regime) or twice evens."""
    graph = _graph_for(params, family)
    forced = _forced_v2(params, family, graph)
    evens = sum(1 for v1 in enumerate_partitions(graph, force_v2=forced)
                if is_even(graph, v1))
    if family == "Eprime":
        return 2 * evens
    if even_only_regime(params):
        return evens
    quasi = sum(1 for v1 in enumerate_partitions(graph, force_v2=forced)
                if is_quasi_even(graph, v1))
    return evens + quasi


# ---------------------------------------------------------------------------
# appendix lower bounds


@dataclass(frozen=True)
class BoundReport:
    """One product-formula bound: rho <= dim_2 of the target group.

    pi_values lists (witness representative, Pi) for every eligible index;
    witnesses are the representatives whose Pi vanished.  Each witness class
    is expected to be a member in its own right, so the bound is realized by
    an explicit subgroup.
    """

    label: str
    rho: int
    pi_values: tuple[tuple[int, int], ...]
    witnesses: tuple[int, ...]
    targets: tuple[str, ...]


def _legterm(a: int, l: int) -> int:
    # 1 - (a/l) as an integer in {0, 2}
    return 1 - _leg(a, l)


def _odd_primes_of(params: CurveParams, skip: int | None = None) -> list[int]:
    out = [params.p, params.q]
    out += [f for f in params.factors if f != skip]
    return out


def bound_curve_side(params: CurveParams) -> BoundReport:
    """Vanishing products bounding the curve-side group from below."""
    p, q, D, m = params.p, params.q, params.D, params.m
    eps = params.eps
    pi_values: list[tuple[int, int]] = []
    for i, di in enumerate(params.factors):
        dhat = params.dhat(i)
        if eps == 1:
            delta = 0 if (di % 4 == 1
                          or (m == 2 and (p - D) % 8 == 2)
                          or (m >= 3 and (p + D) % 4 == 0)) else 1
            pi = (delta
                  + _legterm(q * dhat, di) * _legterm(p * dhat, di)
                  + sum(_legterm(di, l) for l in _odd_primes_of(params, skip=di)))
        else:
            delta = 0 if (di % 4 == 1
                          or (m == 2 and (p + D) % 8 == 2)
                          or (m >= 3 and (p - D) % 4 == 0)) else 1
            pi = (delta
                  + _legterm(-q * dhat, di) * _legterm(-p * dhat, di)
                  + sum(_legterm(di, l) for l in _odd_primes_of(params, skip=di)))
        pi_values.append((di, pi))
    pD8 = (p * D) % 8
    if eps == 1:
        delta2 = 0 if ((m == 3 and pD8 == 7) or (m == 4 and pD8 == 1)
                       or m >= 5) else 1
    else:
        delta2 = 0 if ((m == 3 and pD8 == 1) or (m == 4 and pD8 == 7)
                       or m >= 5) else 1
    pi_values.append((2, delta2 + sum(_legterm(2, l) for l in _odd_primes_of(params))))
    if eps == -1:
        delta_m1 = 0 if (pD8 == 1 or (m >= 3 and pD8 == 5)) else 1
        pi_values.append((-1, delta_m1 + sum(_legterm(-1, l)
                                             for l in _odd_primes_of(params))))
    witnesses = tuple(rep for rep, pi in pi_values if pi == 0)
    label = "A1" if eps == 1 else "A3"
    return BoundReport(label, len(witnesses), tuple(pi_values), witnesses, ("E",))


def bound_dual_side(params: CurveParams) -> BoundReport:
    """Vanishing products on the dual side; defined for m >= 2 only."""
    p, q, D, m = params.p, params.q, params.D, params.m
    eps = params.eps
    if m < 2:
        raise OutOfScope("dual-side bound needs m >= 2, got m=%d" % m)
    sign = 1 if eps == -1 else -1   # sign inside the paired symbols
    pi_values: list[tuple[int, int]] = []
    eligible: list[int] = []
    for i, di in enumerate(params.factors):
        dhat = params.dhat(i)
        pi = _legterm(sign * q * dhat, di) * _legterm(sign * p * dhat, di)
        for j, dj in enumerate(params.factors):
            if j != i:
                pi += _legterm(di, dj) * _legterm(p * q * di, dj)
        pi_values.append((di, pi))
        if _in_dual_index_set(params, di):
            eligible.append(di)
    if eps == 1:
        pmD = (p - D) % 8
        delta = 0 if ((m == 2 and pmD != 2) or (m == 3 and pmD % 4 == 0)
                      or (m >= 4 and pmD == 0)) else 1
        pi = delta + sum(_legterm(-1, di) * _legterm(-p * q, di)
                         for di in params.factors)
        pi_values.append((-1, pi))
        eligible.append(-1)
    by_rep = dict(pi_values)
    witnesses = tuple(rep for rep in eligible if by_rep[rep] == 0)
    label = "A2" if eps == 1 else "A4"
    return BoundReport(label, len(witnesses), tuple(pi_values), witnesses,
                       ("E", "Eprime"))


def _in_dual_index_set(params: CurveParams, di: int) -> bool:
    p, D, m = params.p, params.D, params.m
    pD = p * D
    if params.eps == 1:
        if m == 2:
            return (di % 4 == 1 or (di + pD) % 4 == 0
                    or (di % 4 == 3 and (p - D) % 8 == 6))
        if m == 3:
            return (di % 8 == 1 or (di + pD) % 8 == 0
                    or (di % 4 == 3 and (pD + di) % 8 == 4)
                    or (di % 8 == 5 and (pD - di) % 4 == 0))
        if m == 4:
            return (di % 8 == 1 or (di + pD) % 8 == 0
                    or (di % 8 == 5 and (pD + di) % 8 == 4))
        return di % 8 == 1 or (di + pD) % 8 == 0
    if m == 2:
        return (di % 4 == 1 or (di - pD) % 4 == 0
                or (di % 4 == 3 and (p + D) % 8 == 6))
    if m == 3:
        return (di % 8 == 1 or (di - pD) % 8 == 0
                or (di % 4 == 3 and (pD - di) % 8 == 4)
                or (di % 8 == 5 and (pD + di) % 4 == 0))
    if m == 4:
        return (di % 8 == 1 or (di - pD) % 8 == 0
                or (di % 8 == 5 and (pD - di) % 8 == 4))
    return di % 8 == 1 or (di - pD) % 8 == 0


def appendix_bounds(params: CurveParams) -> dict[str, BoundReport]:
    out = {}
    rep = bound_curve_side(params)
    out[rep.label] = rep
    if params.m >= 2:
        rep = bound_dual_side(params)
        out[rep.label] = rep
    return out


def bound_check(report: BoundReport, groups: dict[str, SelmerSet]) -> dict[str, bool]:
    """Which target groups realize the bound (dimension and witnesses)."""
    out = {}
    for family in report.targets:
        grp = groups[family]
        ok = grp.is_subgroup() and grp.dim2 >= report.rho
        ok = ok and all(wit in grp for wit in report.witnesses)
        out[family] = ok
    return out


# ---------------------------------------------------------------------------
# instance-level cross-checks


class Mismatch(NamedTuple):
    family: str
    rep: int
    place: str
    rule: str
    table: bool
    oracle: bool


@dataclass
class InstanceReport:
    params: CurveParams
    table_pairs: int
    mismatch_count: int
    mismatches: tuple[Mismatch, ...]
    rules_exercised: frozenset[str]
    descent: dict[str, DescentResult]
    graph: dict[str, GraphResult | None]
    graph_error: dict[str, str | None]
    theorem: dict[str, int | None]
    methods_agree: dict[str, bool | None]
    containment_ok: bool
    containment_missing: tuple[int, ...]
    invariants: dict[str, bool]
    bounds: dict[str, BoundReport]
    bounds_ok: dict[str, dict[str, bool]]
    rank_upper_bound: int | None

    @property
    def table_ok(self) -> bool:
        return self.mismatch_count == 0

    @property
    def all_methods_ok(self) -> bool:
        return all(v for v in self.methods_agree.values() if v is not None)

    @property
    def bounds_satisfied(self) -> bool:
        return all(any(per.values()) for per in self.bounds_ok.values())


def _kill_mask_ok(params: CurveParams, family: str, mask: int) -> bool:
    if family == "E":
        if mask & PQ_MASK:
            return False
        return params.eps == -1 or not mask & 0b0001
    if mask & TWO_MASK:
        return False
    return params.eps == 1 or not mask & 0b0001


def _containment_reps(params: CurveParams) -> list[int]:
    p, q, D = params.p, params.q, params.D
    sign = -1 if params.eps == 1 else 1
    return [1, p * q, sign * p * D, sign * q * D]


def verify_instance(params: CurveParams, depth: int | None = None,
                    mismatch_limit: int = 25) -> InstanceReport:
    """Run every cross-check on one parameter instance.

    The oracle is consulted once per (family, class, place) and shared
    between the table comparison and the descent fallback.
    """
    cache: dict[tuple[str, int, Place], bool] = {}

    def cached(family: str, rep: int, place: Place) -> bool:
        key = (family, rep, place)
        if key not in cache:
            cache[key] = locally_solvable(params, rep, family, place, depth)
        return cache[key]

    table_pairs = 0
    mismatch_count = 0
    mismatches: list[Mismatch] = []
    rules: set[str] = set()
    descent: dict[str, DescentResult] = {}
    graph: dict[str, GraphResult | None] = {}
    graph_error: dict[str, str | None] = {}
    theorem: dict[str, int | None] = {}
    agree: dict[str, bool | None] = {}
    all_places = places(params)
    for family in FAMILIES:
        for cls in enumerate_classes(params):
            rep = cls.as_integer()
            for place in all_places:
                try:
                    verdict = table_verdict(params, cls, family, place)
                except UnsupportedClass:
                    continue
                table_pairs += 1
                rules.add(verdict.rule)
                oracle_says = cached(family, rep, place)
                if verdict.solvable != oracle_says:
                    mismatch_count += 1
                    if len(mismatches) < mismatch_limit:
                        mismatches.append(Mismatch(
                            family, rep, _place_name(place), verdict.rule,
                            verdict.solvable, oracle_says))
        descent[family] = selmer_by_descent(
            params, family,
            oracle=lambda rep, place, fam=family: cached(fam, rep, place))
        try:
            gres = selmer_by_graph(params, family)
            graph[family] = gres
            graph_error[family] = None
            theorem[family] = theorem_count(params, family)
            agree[family] = (gres.selmer.masks == descent[family].selmer.masks
                             and len(gres.selmer) == theorem[family])
        except Exception as exc:   # CaseGap, ConventionUndefined
            graph[family] = None
            graph_error[family] = "%s: %s" % (type(exc).__name__, exc)
            theorem[family] = None
            agree[family] = None
    se, sp = descent["E"].selmer, descent["Eprime"].selmer
    missing = tuple(rep for rep in _containment_reps(params) if rep not in sp)
    invariants = {
        "subgroup_E": se.is_subgroup(),
        "subgroup_Eprime": sp.is_subgroup(),
        "kills_E": all(_kill_mask_ok(params, "E", m) for m in se.masks),
        "kills_Eprime": all(_kill_mask_ok(params, "Eprime", m) for m in sp.masks),
    }
    bounds = appendix_bounds(params)
    groups = {"E": se, "Eprime": sp}
    bounds_ok = {label: bound_check(rep, groups) for label, rep in bounds.items()}
    rank = None
    if invariants["subgroup_E"] and invariants["subgroup_Eprime"]:
        rank = se.dim2 + sp.dim2 - 2
    return InstanceReport(
        params=params, table_pairs=table_pairs, mismatch_count=mismatch_count,
        mismatches=tuple(mismatches),
        rules_exercised=frozenset(rules), descent=descent, graph=graph,
        graph_error=graph_error, theorem=theorem, methods_agree=agree,
        containment_ok=not missing, containment_missing=missing,
        invariants=invariants, bounds=bounds, bounds_ok=bounds_ok,
        rank_upper_bound=rank)
