"""Compare the compiled disc-search kernel against the pure Python fallback.

Two workloads: the Jacobi symbol ladder, and full quartic local solvability
on coefficient tuples taken from real sweep instances.  Results are checked
for agreement while timing, so a fast-but-wrong kernel cannot win.

Run:  python3 bench/bench_backends.py [--instances N] [--repeat N]
"""

import argparse
import random
import time

from selmergraph import _pure
from selmergraph.cli import SweepSpec, generate_instances
from selmergraph.model import enumerate_classes, places, torsor_coeffs
from selmergraph.oracle import default_depth

try:
    from selmergraph import _fast
except ImportError:
    _fast = None


def jacobi_workload(n: int):
    rng = random.Random(2024)
    out = []
    for _ in range(n):
        a = rng.randint(-10**9, 10**9)
        b = rng.randrange(1, 10**9, 2)
        out.append((a, b))
    return out


def quartic_workload(max_instances: int):
    spec = SweepSpec(p_max=13, m_set=(1, 2, 3, 4, 5), d_prime_max=13, n_max=2)
    work = []
    for idx, params in enumerate(generate_instances(spec)):
        if idx >= max_instances:
            break
        for family in ("E", "Eprime"):
            for cls in enumerate_classes(params):
                rep = cls.as_integer()
                a, b, c = torsor_coeffs(params, rep, family)
                for place in places(params):
                    if place.tag == "inf":
                        continue
                    l = place.value
                    work.append((rep, a, b, c, l, default_depth(a, b, c, l)))
    return work


def timed(fn, work):
    start = time.perf_counter()
    out = [fn(*item) for item in work]
    return time.perf_counter() - start, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=40,
                    help="sweep instances feeding the quartic workload")
    ap.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = ap.parse_args()

    if _fast is None:
        print("compiled kernel not built (SELMERGRAPH_NO_EXT or missing Cython);"
              " benchmarking the pure backend only")

    rows = []
    jw = jacobi_workload(20000)
    qw = quartic_workload(args.instances)
    print("workloads: %d jacobi pairs, %d quartic solvability calls"
          % (len(jw), len(qw)))

    for name, work, pure_fn, fast_fn in (
            ("jacobi", jw, _pure.jacobi,
             _fast.jacobi if _fast else None),
            ("quartic", qw, _pure.quartic_padic_solvable,
             _fast.quartic_padic_solvable if _fast else None)):
        t_pure = min(timed(pure_fn, work)[0] for _ in range(args.repeat))
        _, ref = timed(pure_fn, work)
        if fast_fn is None:
            rows.append((name, t_pure, None, None))
            continue
        t_fast = min(timed(fast_fn, work)[0] for _ in range(args.repeat))
        _, got = timed(fast_fn, work)
        if name == "quartic":
            # -2 is the compiled kernel's "defer to the reference" marker
            mismatch = sum(1 for g, r in zip(got, ref) if g != -2 and g != r)
        else:
            mismatch = sum(1 for g, r in zip(got, ref) if g != r)
        if mismatch:
            raise SystemExit("backend disagreement on %d %s inputs" % (mismatch, name))
        rows.append((name, t_pure, t_fast, t_pure / t_fast))

    print()
    print("%-10s %12s %12s %10s" % ("workload", "pure (s)", "compiled (s)", "speedup"))
    for name, tp, tf, speed in rows:
        if tf is None:
            print("%-10s %12.4f %12s %10s" % (name, tp, "-", "-"))
        else:
            print("%-10s %12.4f %12.4f %9.1fx" % (name, tp, tf, speed))


if __name__ == "__main__":
    main()
