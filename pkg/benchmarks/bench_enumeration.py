"""Compiled vs pure-Python allocation enumeration.

    python benchmarks/bench_enumeration.py [--repeat N]

Both kernels receive identical inputs; outputs are checked equal before
timing. Also times one full MAP computation per instance with each kernel.
"""

import argparse
import time

from cutprice import _enum_py, allocations
from cutprice.generate import GenParams, generate_random_instance
from cutprice.pme import map_prices

try:
    from cutprice import _speedups
except ImportError:  # extension not built
    _speedups = None

CASES = [
    ("xor J=3 I=4", GenParams(items=3, bidders=4, max_bids_per_bidder=3, max_supply=2), "xor"),
    ("xor J=4 I=5", GenParams(items=4, bidders=5, max_bids_per_bidder=3, max_supply=2), "xor"),
    ("oxs J=4 I=4", GenParams(items=4, bidders=4, max_bids_per_bidder=5, max_supply=2), "oxs"),
    ("xor J=5 I=6", GenParams(items=5, bidders=6, max_bids_per_bidder=3, max_supply=3), "xor"),
    ("xor J=6 I=8", GenParams(items=6, bidders=8, max_bids_per_bidder=3, max_supply=3), "xor"),
    # enumeration only (MAP skipped above MAP_LIMIT bids)
    ("unit J=6 I=12", GenParams(items=6, bidders=12, max_bids_per_bidder=2, max_supply=2), "unit-demand"),
    ("xor J=8 I=12", GenParams(items=8, bidders=12, max_bids_per_bidder=2, max_supply=2), "xor"),
]
MAP_LIMIT = 16


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    if _speedups is None:
        print("compiled extension not available; only the Python kernel can run")
        return
    print(f"{'case':14s} {'K':>3s} {'allocs':>7s} {'python ms':>10s} {'compiled ms':>12s} {'speedup':>8s} "
          f"{'MAP py ms':>10s} {'MAP cy ms':>10s}")
    for name, params, profile in CASES:
        inst = generate_random_instance(params, args.seed, profile)
        flat = [inst.A[j][k] for j in range(inst.J) for k in range(inst.K)]
        call = (flat, inst.J, inst.K, list(inst.c), list(inst.bid_owner), inst.I, True)
        py = list(_enum_py.enumerate_allocations(*call))
        cy = list(_speedups.enumerate_allocations(*call))
        assert py == cy, name
        t_py = best_of(lambda: _enum_py.enumerate_allocations(*call), args.repeat)
        t_cy = best_of(lambda: _speedups.enumerate_allocations(*call), args.repeat)
        maps = "         -          -"
        if inst.K <= MAP_LIMIT:
            ts = []
            for kernel in (_enum_py.enumerate_allocations, _speedups.enumerate_allocations):
                allocations._enumerate = kernel
                ts.append(best_of(lambda: map_prices(inst), 1))
            maps = f"{ts[0] * 1e3:10.1f} {ts[1] * 1e3:10.1f}"
        print(f"{name:14s} {inst.K:3d} {len(py):7d} {t_py * 1e3:10.2f} {t_cy * 1e3:12.3f} {t_py / t_cy:7.1f}x {maps}")


if __name__ == "__main__":
    main()
