"""Command line front end: compute one instance, verify cross-checks, survey.

Exit codes: 0 all requested checks agree, 1 a cross-check failed, 2 the
request is invalid (bad parameters, or an instance the graph definitions do
not reach), 3 the local oracle ran out of refinement depth.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass

from .arith import is_prime
from .graphs import serialize_graph
from .model import CurveParams, validate_params
from .oracle import DepthExceeded
from .selmer import (
    InstanceReport,
    selmer_by_descent,
    selmer_by_graph,
    theorem_count,
    verify_instance,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_DEPTH = 3

CSV_HEADER = "# selmergraph-csv v1"
INSTANCE_SCHEMA = "selmergraph-instance-v1"
COMPUTE_SCHEMA = "selmergraph-compute-v1"


# ---------------------------------------------------------------------------
# instance generation


@dataclass(frozen=True)
class SweepSpec:
    """A rectangular family sweep; defaults cover the standard survey."""

    p_max: int = 49
    m_set: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    d_prime_max: int = 37
    n_max: int = 2
    eps_set: tuple[int, ...] = (1, -1)


def _odd_primes_upto(bound: int) -> list[int]:
    return [r for r in range(3, bound + 1, 2) if is_prime(r)]


def generate_instances(spec: SweepSpec) -> list[CurveParams]:
    """All valid parameter tuples in the sweep, in deterministic order."""
    out: list[CurveParams] = []
    pool_all = _odd_primes_upto(spec.d_prime_max)
    for p in _odd_primes_upto(spec.p_max):
        for m in sorted(spec.m_set):
            q = p + (1 << m)
            if not is_prime(q):
                continue
            pool = [r for r in pool_all if r != p and r != q]
            for size in range(0, spec.n_max + 1):
                for combo in itertools.combinations(pool, size):
                    D = 1
                    for r in combo:
                        D *= r
                    for eps in spec.eps_set:
                        out.append(validate_params(eps, p, q, D))
    return out


def parse_sweep(text: str) -> SweepSpec:
    """Parse "p_max=13,m_set=1-6,d_prime_max=7,n_max=1,eps_set=both"."""
    kwargs: dict = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, _, value = chunk.partition("=")
        if not value:
            raise ValueError("sweep entry %r is not key=value" % chunk)
        if key in ("p_max", "d_prime_max", "n_max"):
            kwargs[key] = int(value)
        elif key == "m_set":
            lo, dash, hi = value.partition("-")
            if dash:
                kwargs[key] = tuple(range(int(lo), int(hi) + 1))
            else:
                kwargs[key] = (int(lo),)
        elif key == "eps_set":
            if value == "both":
                kwargs[key] = (1, -1)
            elif value in ("+1", "1"):
                kwargs[key] = (1,)
            elif value == "-1":
                kwargs[key] = (-1,)
            else:
                raise ValueError("eps_set must be both, +1 or -1, got %r" % value)
        else:
            raise ValueError("unknown sweep key %r" % key)
    return SweepSpec(**kwargs)


# ---------------------------------------------------------------------------
# serialization


def _params_dict(params: CurveParams) -> dict:
    return {"eps": params.eps, "p": params.p, "q": params.q, "m": params.m,
            "D": params.D, "factors": list(params.factors), "s": params.s}


def _selmer_dict(selmer) -> dict:
    return {"classes": selmer.representatives(),
            "dim": selmer.dim2 if selmer.is_subgroup() else None}


def report_to_dict(report: InstanceReport) -> dict:
    """Stable JSON form of one verified instance."""
    counts_graph = {fam: (len(res.selmer) if res else None)
                    for fam, res in report.graph.items()}
    bounds = {}
    for label, rep in report.bounds.items():
        bounds[label] = {
            "rho": rep.rho,
            "pi": [[r, v] for r, v in rep.pi_values],
            "witnesses": list(rep.witnesses),
            "targets": list(rep.targets),
            "satisfied": report.bounds_ok[label],
        }
    return {
        "schema": INSTANCE_SCHEMA,
        "key": report.params.key,
        "params": _params_dict(report.params),
        "selmer_E": _selmer_dict(report.descent["E"].selmer),
        "selmer_Eprime": _selmer_dict(report.descent["Eprime"].selmer),
        "counts": {
            "descent": {fam: len(res.selmer) for fam, res in report.descent.items()},
            "graph": counts_graph,
            "theorem": dict(report.theorem),
        },
        "graph_cases": {fam: (res.case_id if res else None)
                        for fam, res in report.graph.items()},
        "graph_errors": dict(report.graph_error),
        "checks": {
            "table_pairs": report.table_pairs,
            "mismatches": report.mismatch_count,
            "methods_agree": dict(report.methods_agree),
            "containment_ok": report.containment_ok,
            "containment_missing": list(report.containment_missing),
            "invariants": dict(report.invariants),
        },
        "mismatch_records": [
            {"family": m.family, "rep": m.rep, "place": m.place,
             "rule": m.rule, "table": m.table, "oracle": m.oracle}
            for m in report.mismatches],
        "bounds": bounds,
        "derived": {
            "rank_upper_bound": report.rank_upper_bound,
            "note": "dim S(phi)(E) + dim S(phihat)(E') - 2; an upper bound "
                    "for the Mordell-Weil rank, not part of the checked claims",
        },
    }


def dump_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": ")) + "\n"


def _report_ok(report: InstanceReport) -> bool:
    return (report.table_ok and report.all_methods_ok and report.containment_ok
            and all(report.invariants.values()) and report.bounds_satisfied)


# ---------------------------------------------------------------------------
# compute


def _add_instance_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--eps", type=int, choices=(1, -1), help="sign of the family")
    sub.add_argument("--p", type=int, help="smaller prime")
    sub.add_argument("--q", type=int, help="larger prime, q = p + 2^m")
    sub.add_argument("--d", type=int, help="twist parameter D (1 allowed)")


def _instance_from_args(args) -> CurveParams | None:
    given = [args.eps, args.p, args.q, args.d]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given):
        raise ValueError("--eps, --p, --q and --d must be given together")
    return validate_params(args.eps, args.p, args.q, args.d)


def cmd_compute(args) -> int:
    params = _instance_from_args(args)
    if params is None:
        raise ValueError("compute needs --eps, --p, --q and --d")
    results: dict = {}
    if args.method in ("descent", "both"):
        results["descent"] = {fam: selmer_by_descent(params, fam, depth=args.oracle_depth)
                              for fam in ("E", "Eprime")}
    if args.method in ("graph", "both"):
        results["graph"] = {fam: selmer_by_graph(params, fam)
                            for fam in ("E", "Eprime")}
        results["theorem"] = {fam: theorem_count(params, fam)
                              for fam in ("E", "Eprime")}
    if args.dump_graph:
        with open(args.dump_graph, "w") as fh:
            for fam in ("E", "Eprime"):
                fh.write("# family: %s\n" % fam)
                fh.write(serialize_graph_for(params, fam))
                fh.write("\n")
    agree = None
    if args.method == "both":
        agree = all(results["descent"][fam].selmer.masks
                    == results["graph"][fam].selmer.masks
                    and len(results["graph"][fam].selmer) == results["theorem"][fam]
                    for fam in ("E", "Eprime"))
    _emit_compute(args, params, results, agree)
    if agree is False:
        return EXIT_MISMATCH
    return EXIT_OK


def serialize_graph_for(params: CurveParams, family: str) -> str:
    from .selmer import _graph_for
    return serialize_graph(_graph_for(params, family))


def _emit_compute(args, params: CurveParams, results: dict, agree) -> None:
    if args.format == "json":
        out = {"schema": COMPUTE_SCHEMA, "key": params.key,
               "params": _params_dict(params), "agree": agree, "results": {}}
        if "descent" in results:
            out["results"]["descent"] = {
                fam: _selmer_dict(res.selmer) for fam, res in results["descent"].items()}
        if "graph" in results:
            out["results"]["graph"] = {
                fam: dict(_selmer_dict(res.selmer), case=res.case_id)
                for fam, res in results["graph"].items()}
            out["results"]["theorem"] = results["theorem"]
        sys.stdout.write(dump_json(out))
        return
    if args.format == "csv":
        lines = [CSV_HEADER, "method,family,mask,representative"]
        for method in ("descent", "graph"):
            if method not in results:
                continue
            for fam, res in results[method].items():
                for cls in res.selmer.classes():
                    lines.append("%s,%s,%d,%d" % (method, fam, cls.mask, cls.as_integer()))
        sys.stdout.write("\n".join(lines) + "\n")
        return
    print("instance %s  (p=%d q=%d m=%d D=%d factors=%s s=%d)"
          % (params.key, params.p, params.q, params.m, params.D,
             list(params.factors), params.s))
    for method in ("descent", "graph"):
        if method not in results:
            continue
        for fam, res in results[method].items():
            sel = res.selmer
            dim = sel.dim2 if sel.is_subgroup() else None
            name = "S(phi)(E)" if fam == "E" else "S(phihat)(E')"
            extra = "" if method == "descent" else "  [%s]" % res.case_id
            print("  %-14s %-7s #%d dim=%s classes=%s%s"
                  % (name, method, len(sel), dim, sel.representatives(), extra))
    if "theorem" in results:
        print("  theorem counts: E=%d Eprime=%d"
              % (results["theorem"]["E"], results["theorem"]["Eprime"]))
    if agree is not None:
        print("  methods agree: %s" % ("yes" if agree else "NO"))


# ---------------------------------------------------------------------------
# verify


def _instances_from_args(args) -> list[CurveParams]:
    single = _instance_from_args(args)
    if single is not None and args.sweep:
        raise ValueError("give either --sweep or a single instance, not both")
    if single is not None:
        return [single]
    spec = parse_sweep(args.sweep) if args.sweep else SweepSpec()
    return generate_instances(spec)


def _verify_many(instances, depth, jobs):
    if jobs and jobs > 1:
        import multiprocessing
        with multiprocessing.Pool(jobs) as pool:
            yield from pool.imap(_verify_one, [(p, depth) for p in instances],
                                 chunksize=8)
    else:
        for params in instances:
            yield verify_instance(params, depth=depth)


def _verify_one(work) -> InstanceReport:
    params, depth = work
    return verify_instance(params, depth=depth)


def cmd_verify(args) -> int:
    instances = _instances_from_args(args)
    total = len(instances)
    failed = 0
    excluded: list[str] = []
    for idx, report in enumerate(_verify_many(instances, args.oracle_depth, args.jobs)):
        key = report.params.key
        gaps = [fam for fam, err in report.graph_error.items() if err]
        ok = _report_ok(report)
        if gaps:
            excluded.append(key)
        if not ok:
            failed += 1
            print("FAIL %-14s mismatches=%d methods=%s containment=%s invariants=%s bounds=%s"
                  % (key, report.mismatch_count, report.methods_agree,
                     report.containment_ok, report.invariants, report.bounds_satisfied))
            for mm in report.mismatches[:5]:
                print("     %s d=%d place=%s rule=%s table=%s oracle=%s"
                      % (mm.family, mm.rep, mm.place, mm.rule, mm.table, mm.oracle))
        elif not args.quiet:
            note = " graph-gap:%s" % ",".join(gaps) if gaps else ""
            print("ok   %-14s table_pairs=%d dims=(%d,%d)%s"
                  % (key, report.table_pairs,
                     report.descent["E"].selmer.dim2,
                     report.descent["Eprime"].selmer.dim2, note))
        if args.progress and (idx + 1) % args.progress == 0:
            print("... %d/%d done" % (idx + 1, total), file=sys.stderr)
    print("verified %d instance(s): %d failed, %d outside the graph case lists (%.1f%%)"
          % (total, failed, len(excluded),
             100.0 * len(excluded) / total if total else 0.0))
    if excluded and not args.quiet:
        print("excluded from the graph cross-check: %s"
              % " ".join(excluded[:20]) + (" ..." if len(excluded) > 20 else ""))
    return EXIT_MISMATCH if failed else EXIT_OK


# ---------------------------------------------------------------------------
# survey


def cmd_survey(args) -> int:
    if args.spec:
        with open(args.spec) as fh:
            raw = json.load(fh)
        spec = SweepSpec(
            p_max=raw.get("p_max", SweepSpec.p_max),
            m_set=tuple(raw.get("m_set", SweepSpec.m_set)),
            d_prime_max=raw.get("d_prime_max", SweepSpec.d_prime_max),
            n_max=raw.get("n_max", SweepSpec.n_max),
            eps_set=tuple(raw.get("eps_set", SweepSpec.eps_set)))
    elif args.sweep:
        spec = parse_sweep(args.sweep)
    else:
        spec = SweepSpec()
    instances = generate_instances(spec)
    done: set[str] = set()
    if args.resume:
        try:
            with open(args.out) as fh:
                for line in fh:
                    if line.strip():
                        done.add(json.loads(line)["key"])
        except FileNotFoundError:
            pass
    todo = [p for p in instances if p.key not in done]
    failed = 0
    mode = "a" if args.resume else "w"
    with open(args.out, mode) as fh:
        for idx, report in enumerate(_verify_many(todo, args.oracle_depth, args.jobs)):
            fh.write(dump_json(report_to_dict(report)))
            if not _report_ok(report):
                failed += 1
            if args.progress and (idx + 1) % args.progress == 0:
                print("... %d/%d written" % (idx + 1, len(todo)), file=sys.stderr)
    print("survey wrote %d new record(s) to %s (%d skipped as done, %d failed)"
          % (len(todo), args.out, len(done & {p.key for p in instances}), failed))
    return EXIT_MISMATCH if failed else EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selmergraph",
        description="Selmer groups of the 2-isogeny family by congruence "
                    "tables, partition graphs, and a generic local oracle.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute one instance")
    _add_instance_args(c)
    c.add_argument("--method", choices=("descent", "graph", "both"), default="both")
    c.add_argument("--format", choices=("text", "json", "csv"), default="text")
    c.add_argument("--dump-graph", metavar="PATH", help="write the partition graphs")
    c.add_argument("--oracle-depth", type=int, default=None)
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="cross-check instances")
    _add_instance_args(v)
    v.add_argument("--sweep", help="p_max=..,m_set=..,d_prime_max=..,n_max=..,eps_set=..")
    v.add_argument("--oracle-depth", type=int, default=None)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--quiet", action="store_true")
    v.add_argument("--progress", type=int, default=0, metavar="N",
                   help="report every N instances on stderr")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("survey", help="verify a sweep and write JSON lines")
    s.add_argument("--spec", metavar="FILE", help="JSON sweep description")
    s.add_argument("--sweep", help="inline sweep, same syntax as verify")
    s.add_argument("--out", required=True, metavar="PATH")
    s.add_argument("--resume", action="store_true",
                   help="skip instances already present in the output")
    s.add_argument("--oracle-depth", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--progress", type=int, default=0, metavar="N")
    s.set_defaults(func=cmd_survey)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DepthExceeded as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DEPTH
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
