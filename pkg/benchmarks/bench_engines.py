#!/usr/bin/env python3
"""Compare the pure-Python and compiled enumeration kernels.

Runs the three hot kernels (equilibrium scan over the full outcome space,
set-valued backward induction, deterministic backward induction) with both
backends on the same instances, checks that the results agree, and prints a
timing table.
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from transportgames import _kernel_py, gen_random_metric, gen_uniform_star
from transportgames.engine import compiled_available, scaled_view

try:
    from transportgames import _kernel_c
except ImportError:
    _kernel_c = None


def _time(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - start


def run(nash_n: int, spe_n: int, zermelo_n: int) -> int:
    tasks = []

    star = gen_uniform_star(nash_n, 2, Fraction(1, 4), "reverse")
    view = scaled_view(star)
    tasks.append(
        (
            f"nash scan, uniform-star n={nash_n} m=2 ({2 ** nash_n} outcomes)",
            "scan_nash",
            (view.n, view.m, view.dist, view.perms, 2, view.m, False),
            view,
        )
    )

    rnd = gen_random_metric(spe_n, 2, seed=7)
    view = scaled_view(rnd)
    order = tuple(range(spe_n))
    tasks.append(
        (
            f"spe set, random-metric n={spe_n} m=2 ({2 ** spe_n} leaves)",
            "spe_codes",
            (view.n, view.m, view.dist, view.perms, order, 10**7),
            view,
        )
    )

    rnd2 = gen_random_metric(zermelo_n, 2, seed=11)
    view = scaled_view(rnd2)
    order = tuple(range(zermelo_n))
    tasks.append(
        (
            f"zermelo, random-metric n={zermelo_n} m=2 ({2 ** zermelo_n} leaves)",
            "zermelo_code",
            (view.n, view.m, view.dist, view.perms, order),
            view,
        )
    )

    print(f"compiled backend available: {compiled_available()}")
    header = f"{'task':52} {'pure [s]':>10} {'compiled [s]':>13} {'speedup':>8}  agree"
    print(header)
    print("-" * len(header))
    for label, fname, args, _view in tasks:
        pure_result, pure_time = _time(getattr(_kernel_py, fname), *args)
        if _kernel_c is None:
            print(f"{label:52} {pure_time:10.3f} {'-':>13} {'-':>8}  -")
            continue
        fast_result, fast_time = _time(getattr(_kernel_c, fname), *args)
        if fname == "scan_nash":
            agree = tuple(pure_result[1:]) == tuple(fast_result[1:])
        elif fname == "spe_codes":
            agree = list(pure_result) == list(fast_result)
        else:
            agree = pure_result == fast_result
        speedup = pure_time / fast_time if fast_time > 0 else float("inf")
        print(f"{label:52} {pure_time:10.3f} {fast_time:13.3f} {speedup:7.1f}x  {agree}")
        if not agree:
            return 1
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nash-n", type=int, default=16, help="players for the equilibrium scan")
    parser.add_argument("--spe-n", type=int, default=13, help="players for the SPE-set benchmark")
    parser.add_argument("--zermelo-n", type=int, default=16, help="players for the zermelo benchmark")
    args = parser.parse_args()
    return run(args.nash_n, args.spe_n, args.zermelo_n)


if __name__ == "__main__":
    raise SystemExit(main())
