"""Holonomy groups and dotted-subgroup indices, index by index."""

import argparse

from quandle.constructions import build_cactus, build_oriented_cactus, builtin_systems, dihedral_semidirect
from quandle.groups import dotted_subgroup, has_trivial_holonomy, holonomy_group


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-n", type=int, default=5, help="largest cactus size to include")
    args = p.parse_args()
    systems = dict(builtin_systems())
    for n in range(3, args.max_n + 1):
        systems[f"cactus-{n}"] = build_cactus(n)
        systems[f"oriented-cactus-{n}"] = build_oriented_cactus(n)
    systems["z4:z2"] = dihedral_semidirect(4)
    for name, sys in systems.items():
        verdict = "trivial" if has_trivial_holonomy(sys) else "nontrivial"
        print(f"{name}: {verdict} holonomy")
        for i in range(sys.n):
            hol = sorted(str(x) for x in holonomy_group(sys, i))
            print(f"    {sys.names[i]:8s} holonomy {{{', '.join(hol)}}}  dotted index {dotted_subgroup(sys, i).index}")


if __name__ == "__main__":
    main()
