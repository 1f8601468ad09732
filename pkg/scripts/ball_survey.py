"""Sphere sizes, hyperplane counts and quasi-median verdicts for the built-in systems."""

import argparse
import time

from quandle.cayley import enumerate_ball, hyperplanes, prism_bound, prism_dimension_at, verify_quasi_median
from quandle.constructions import builtin_systems


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--cap", type=int, default=2, help="exponent cap for infinite factors")
    p.add_argument("--skip", nargs="*", default=[], help="system names to leave out")
    args = p.parse_args()
    for name, sys in builtin_systems().items():
        if name in args.skip:
            continue
        start = time.perf_counter()
        cap = None if all(f.finite for f in sys.factors) else args.cap
        ball = enumerate_ball(sys, args.radius, cap)
        spheres = [ball.dist.count(d) for d in range(args.radius + 1)]
        planes = hyperplanes(ball)
        report = verify_quasi_median(ball) if args.radius >= 3 else None
        verdict = "-" if report is None else ("pass" if report.passed else "FAIL")
        print(f"{name:18s} spheres {spheres}  hyperplanes {len(planes):5d}  "
              f"prism {prism_dimension_at(ball, 0)}/{prism_bound(sys)}  quasi-median {verdict}  "
              f"({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
