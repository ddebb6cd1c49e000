"""Print the multiplier m = Gamma Delta^{-1} of a root datum, coefficient by coefficient.

For the affine datum the coefficients along -k delta are compared with the
product prod_j (1 - t x^j)^2 / ((1 - x^j)(1 - t^2 x^j)), t = sigma^2, x = e^{-delta}.

    python3 scripts/multiplier_study.py --config configs/hyperbolic.json --depth 6
    python3 scripts/multiplier_study.py --config configs/affine_a1.json --depth 6 --affine-product
"""

import argparse
import time
from dataclasses import dataclass

import sympy

from kmsatake import build_root_datum, load_config
from kmsatake.series import format_series
from kmsatake.symmetrizers import SymContext


@dataclass
class StudyConfig:
    config: str
    depth: int = 6
    affine_product: bool = False


def affine_product_coeffs(order: int) -> list:
    x, s = sympy.symbols("x s")
    f = sympy.Integer(1)
    for j in range(1, order + 1):
        f *= (1 - s ** 2 * x ** j) ** 2 * sum(x ** (j * k) for k in range(order // j + 1)) \
            * sum((s ** 4 * x ** j) ** k for k in range(order // j + 1))
    poly = sympy.Poly(sympy.expand(f), x)
    return [sympy.expand(poly.coeff_monomial(x ** k)) for k in range(order + 1)]


def run(cfg: StudyConfig) -> bool:
    rd = build_root_datum(load_config(cfg.config))
    t0 = time.perf_counter()
    m = SymContext(rd, cfg.depth).m_sigma()
    print(f"depth {cfg.depth}, {len(m.terms)} terms, {time.perf_counter() - t0:.2f}s")
    for mu, c in m.sorted_items():
        x = rd.coroot_coords(tuple(-a for a in mu))
        print(f"  -{x}: {c}")
    if not cfg.affine_product:
        print(format_series(m))
        return True
    delta = tuple(a + b for a, b in zip(rd.coroots[0], rd.coroots[1]))
    order = cfg.depth // 2
    s = sympy.Symbol("s")
    ok = True
    for k, want in enumerate(affine_product_coeffs(order)):
        c = m.coeff(tuple(-k * d for d in delta))
        got = sympy.expand(sum(v * s ** e[0] for e, v in c.terms.items()))
        match = sympy.expand(got - want) == 0
        ok &= match
        print(f"  x^{k}: {'match' if match else 'MISMATCH'}  {want}")
    return ok


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--affine-product", action="store_true")
    args = p.parse_args()
    raise SystemExit(0 if run(StudyConfig(args.config, args.depth, args.affine_product)) else 1)


if __name__ == "__main__":
    main()
