"""Compare the recursion and closed routes of the Satake image over a grid of weights.

    python3 scripts/route_crosscheck.py --config configs/hyperbolic.json --depth 4 --max-coord 2
"""

import argparse
import itertools
import time
from dataclasses import dataclass

from kmsatake import build_root_datum, load_config
from kmsatake.satake import SatakeEngine
from kmsatake.series import first_difference


@dataclass
class CrossCheckConfig:
    config: str
    depth: int = 4
    max_coord: int = 2
    element_cap: int | None = None


def dominant_grid(rd, bound):
    for lam in itertools.product(range(-bound, bound + 1), repeat=rd.lattice_dim):
        if rd.is_dominant(lam):
            yield lam


def run(cfg: CrossCheckConfig) -> int:
    rd = build_root_datum(load_config(cfg.config), element_cap=cfg.element_cap)
    eng = SatakeEngine(rd, cfg.depth)
    failures = 0
    print(f"{'lambda':>16}  {'terms':>5}  {'closed s':>8}  {'recursion s':>11}  result")
    for lam in dominant_grid(rd, cfg.max_coord):
        t0 = time.perf_counter()
        closed = eng.closed(lam)
        t1 = time.perf_counter()
        rec = eng.recursion(lam)
        t2 = time.perf_counter()
        diff = first_difference(closed, rec, cfg.depth)
        failures += diff is not None
        status = "agree" if diff is None else f"differ at {diff}"
        print(f"{str(lam):>16}  {len(closed.terms):>5}  {t1 - t0:8.2f}  {t2 - t1:11.2f}  {status}")
    return failures


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--max-coord", type=int, default=2)
    p.add_argument("--element-cap", type=int, default=None)
    args = p.parse_args()
    failures = run(CrossCheckConfig(args.config, args.depth, args.max_coord, args.element_cap))
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
