"""Time the pure-Python and compiled kernels on the largest corpus scales plus a 64-element cube.

    python3 benchmarks/bench_kernels.py [--repeat R] [--top K]

Each kernel is called with identical arguments on both backends; the results
are compared before timing so a speedup never hides a disagreement.
"""

import argparse
import sys
import timeit

from dimscale import kernels
from dimscale.corpus import all_scales
from dimscale.targets import chain, product_scale


def kernel_calls(t):
    flat, n = t.flat, t.n
    leq, orth = t.leq_bytes, t.orth_bytes
    return {
        "associativity": ("first_nonassociative", (flat, n)),
        "leq_matrix": ("leq_matrix", (flat, n)),
        "refinement": ("first_refinement_failure", (flat, n)),
        "n1": ("first_n1_failure", (flat, n, orth)),
        "n3": ("first_n3_failure", (flat, n, leq)),
        "meets": ("meet_table", (leq, n)),
    }


def normalize(result):
    # The compiled backend may return memoryviews or arrays where the pure one returns lists.
    if result is None or isinstance(result, (int, tuple)):
        return result
    return list(result)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--top", type=int, default=5, help="number of largest scales to time")
    args = ap.parse_args(argv)

    if kernels.compiled is None:
        print("compiled kernels unavailable; build the extension first", file=sys.stderr)
        return 1

    scales = sorted(all_scales(), key=lambda item: (-item[1].n, item[0]))[: args.top]
    scales.append(("chain3^3", product_scale([chain(3)] * 3)))
    print(f"{'scale':<28}{'n':>4}  {'kernel':<14}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for name, t in scales:
        for label, (fn, call_args) in kernel_calls(t).items():
            py_fn = getattr(kernels.pure, fn)
            c_fn = getattr(kernels.compiled, fn)
            if normalize(py_fn(*call_args)) != normalize(c_fn(*call_args)):
                print(f"backends disagree on {label} for {name}", file=sys.stderr)
                return 1
            py = min(timeit.repeat(lambda: py_fn(*call_args), number=1, repeat=args.repeat))
            cy = min(timeit.repeat(lambda: c_fn(*call_args), number=1, repeat=args.repeat))
            speed = py / cy if cy > 0 else float("inf")
            print(f"{name:<28}{t.n:>4}  {label:<14}{py:>10.4f}{cy:>10.4f}{speed:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
