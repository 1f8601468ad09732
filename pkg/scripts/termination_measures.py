"""Count normalization steps on which the length-plus-increasing-pairs measure fails to drop."""

import argparse
import random

from quandle.constructions import build_cactus, build_oriented_cactus, builtin_systems
from quandle.rewrite import complexity, format_word, letters, normalization_trace


def survey(sys, words: int, orders: int, max_length: int, cap: int, seed: int) -> dict:
    rng = random.Random(seed)
    gens = letters(sys, cap)
    counts = {"steps": 0, "equal": 0, "increase": 0}
    example = None
    for _ in range(words):
        word = [rng.choice(gens) for _ in range(rng.randint(0, max_length))]
        for _ in range(orders):
            trace = normalization_trace(sys, word, random.Random(rng.random()))
            for a, b in zip(trace, trace[1:]):
                ca, cb = complexity(sys, a), complexity(sys, b)
                counts["steps"] += 1
                if cb == ca:
                    counts["equal"] += 1
                elif cb > ca:
                    counts["increase"] += 1
                if cb >= ca and example is None:
                    example = f"{format_word(sys, a)} -> {format_word(sys, b)} ({ca} -> {cb})"
    counts["example"] = example
    return counts


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--words", type=int, default=500)
    p.add_argument("--orders", type=int, default=20)
    p.add_argument("--max-length", type=int, default=8)
    p.add_argument("--cap", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    systems = dict(builtin_systems())
    systems["cactus-5"] = build_cactus(5)
    systems["oriented-cactus-4"] = build_oriented_cactus(4)
    for name, sys in systems.items():
        c = survey(sys, args.words, args.orders, args.max_length, args.cap, args.seed)
        print(f"{name:20s} steps {c['steps']:7d}  equal {c['equal']:6d}  increase {c['increase']:6d}"
              + (f"  e.g. {c['example']}" if c["example"] else ""))


if __name__ == "__main__":
    main()
