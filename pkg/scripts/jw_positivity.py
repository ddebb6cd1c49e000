"""Evaluate every J_w(lambda) at prime-power q and report negative coefficients.

Experiment only: positivity of the individual J_w is not an invariant of the package.

    python3 scripts/jw_positivity.py --config configs/affine_a1.json --lambda 0,0,1 --max-length 6
"""

import argparse
import math
from dataclasses import dataclass, field

from kmsatake import build_root_datum, load_config, min_coset_reps
from kmsatake.satake import SatakeEngine


@dataclass
class PositivityConfig:
    config: str
    lam: tuple
    max_length: int = 6
    qs: list = field(default_factory=lambda: [2, 3, 4, 5, 7, 8, 9])


def evaluate(c, q: float) -> float:
    r = math.sqrt(q)
    return sum(float(k) * r ** sum(e) for e, k in c.terms.items())


def run(cfg: PositivityConfig) -> int:
    rd = build_root_datum(load_config(cfg.config))
    eng = SatakeEngine(rd, 0)
    negatives = 0
    reps = min_coset_reps(rd, cfg.lam, cfg.max_length)
    for w in reps:
        f = eng.j_w(w, cfg.lam, check=False)
        for mu, c in f.sorted_items():
            bad = [q for q in cfg.qs if evaluate(c, q) < 0]
            if bad:
                negatives += 1
                print(f"w={w.word} e^{mu}: {c} negative at q in {bad}")
    print(f"{len(reps)} elements, {negatives} negative coefficients")
    return negatives


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--max-length", type=int, default=6)
    args = p.parse_args()
    lam = tuple(int(x) for x in args.lam.split(","))
    run(PositivityConfig(args.config, lam, args.max_length))


if __name__ == "__main__":
    main()
