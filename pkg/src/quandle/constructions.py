"""Built-in quandle systems and the trickle graph converters."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .groups import (Cyclic, GeneratorAction, QuandleError, QuandleSystem, ScaleIso,
                     Subgroup, TableGroup, TableIso, has_trivial_holonomy, validate_system)
from .oposet import make_oposet


class NotNormal(QuandleError):
    pass


class NotChain(QuandleError):
    pass


class NonCyclicFactor(QuandleError):
    pass


class NontrivialHolonomy(QuandleError):
    pass


class TrickleAxiomFails(QuandleError):
    def __init__(self, letter: str, witness: tuple):
        self.letter = letter
        self.witness = witness
        super().__init__(f"trickle axiom ({letter}) fails at {witness}")


def _factor(spec):
    if isinstance(spec, (Cyclic, TableGroup)):
        return spec
    return Cyclic(spec or None)


# --- graph products and semidirect products ------------------------------------------

def build_graph_product(vertices, edges, factors) -> QuandleSystem:
    """Factors commute along edges and are free otherwise.

    ``factors`` holds a FactorGroup or a cyclic order (0 or None for Z) per vertex.
    """
    names = [str(v) for v in vertices]
    op = make_oposet(names, perp_pairs=[(str(a), str(b)) for a, b in edges])
    sys = QuandleSystem(op, [_factor(f) for f in factors], {}, name="graph-product",
                        provenance=f"graph product over {len(names)} vertices and {len(op.perp_pairs())} edges")
    return validate_system(sys)


def build_semidirect(g1, g2, action, names=("x", "t")) -> QuandleSystem:
    """``G1 ⋊ G2`` as a quandle system on the chain ``x < t``.

    ``action`` is the automorphism of ``G1`` applied by each generator of
    ``G2``: an integer multiplier or a ScaleIso/TableIso, or a list with one
    entry per generator.
    """
    g1, g2 = _factor(g1), _factor(g2)
    per_gen = action if isinstance(action, (list, tuple)) else [action] * len(g2.generators)
    actions = {}
    for pos, iso in enumerate(per_gen):
        if isinstance(iso, int):
            iso = ScaleIso(iso, g1.order or 0)
        elif isinstance(iso, (list, tuple)):
            iso = TableIso(tuple(iso))
        actions[(1, pos)] = GeneratorAction({0: (0, iso)})
    op = make_oposet(list(names), less_pairs=[(names[0], names[1])])
    sys = QuandleSystem(op, [g1, g2], actions, name="semidirect",
                        provenance=f"semidirect product {g1!r} by {g2!r}")
    return validate_system(sys)


# --- cactus systems -----------------------------------------------------------------

@dataclass
class Part:
    name: str
    points: frozenset
    involution: dict


@dataclass
class CardinalityData:
    group: object
    dotted: Subgroup
    alpha: object


@dataclass
class CactusSystem:
    """Parts of a ground set with involutions, plus group data per part size."""
    parts: list
    groups: dict
    label: str = "cactus product"

    def check(self):
        by_points = {p.points: p for p in self.parts}
        if len(by_points) != len(self.parts):
            raise ValueError("two parts share the same point set")
        for p in self.parts:
            inv = p.involution
            if set(inv) != set(p.points) or any(inv[inv[x]] != x for x in p.points):
                raise ValueError(f"involution of {p.name} is not an involution of the part")
            if len(p.points) not in self.groups:
                raise ValueError(f"no group data for parts of size {len(p.points)}")
        for size, data in self.groups.items():
            g, dotted, alpha = data.group, data.dotted, data.alpha
            if dotted.index != 2:
                raise ValueError(f"dotted subgroup for size {size} has index {dotted.index}")
            why = g.check_iso(alpha, g)
            if why:
                raise ValueError(f"alpha for size {size}: {why}")
            if not alpha.after(alpha).is_identity:
                raise ValueError(f"alpha for size {size} is not an involution")
            sample = range(-4, 5) if not g.finite else g.elements()
            if any((alpha(x) in dotted) != (x in dotted) for x in sample):
                raise ValueError(f"alpha for size {size} does not preserve the dotted subgroup")
        for a, b in itertools.permutations(self.parts, 2):
            if a.points < b.points:
                image = frozenset(b.involution[x] for x in a.points)
                if image not in by_points:
                    raise ValueError(f"{b.name} moves {a.name} outside the parts")


def build_cactus_product(cs: CactusSystem) -> QuandleSystem:
    cs.check()
    parts = cs.parts
    pos = {p.points: k for k, p in enumerate(parts)}
    names = [p.name for p in parts]
    less = [(a.name, b.name) for a in parts for b in parts if a.points < b.points]
    perp = [(a.name, b.name) for a, b in itertools.combinations(parts, 2) if not a.points & b.points]
    op = make_oposet(names, less, perp)
    factors = [cs.groups[len(p.points)].group for p in parts]
    actions = {}
    for k, b in enumerate(parts):
        data = cs.groups[len(b.points)]
        for gpos, g in enumerate(data.group.generators):
            if g in data.dotted:
                continue
            moves = {}
            for a in parts:
                if a.points < b.points:
                    image = frozenset(b.involution[x] for x in a.points)
                    moves[pos[a.points]] = (pos[image], cs.groups[len(a.points)].alpha)
            actions[(k, gpos)] = GeneratorAction(moves)
    sys = QuandleSystem(op, factors, actions, name="cactus-product", provenance=cs.label)
    return validate_system(sys)


def _interval_name(p, q, n):
    return f"s{p}{q}" if n < 10 else f"s{p}_{q}"


def interval_parts(n):
    out = []
    for length in range(1, n):
        for p in range(1, n - length + 1):
            q = p + length
            inv = {x: p + q - x for x in range(p, q + 1)}
            out.append(Part(_interval_name(p, q, n), frozenset(range(p, q + 1)), inv))
    return out


def _uniform_groups(parts, group, dotted, alpha):
    return {len(p.points): CardinalityData(group, dotted, alpha) for p in parts}


def build_cactus(n: int) -> QuandleSystem:
    if n < 2:
        raise ValueError("need n >= 2")
    parts = interval_parts(n)
    z2 = Cyclic(2)
    cs = CactusSystem(parts, _uniform_groups(parts, z2, Subgroup(0, 2, step=2), ScaleIso(1, 2)),
                      label=f"cactus group J_{n}: interval reversals of [1..{n}]")
    sys = build_cactus_product(cs)
    sys.name = f"cactus-{n}"
    return sys


def build_oriented_cactus(n: int) -> QuandleSystem:
    if n < 2:
        raise ValueError("need n >= 2")
    parts = interval_parts(n)
    cs = CactusSystem(parts, _uniform_groups(parts, Cyclic(None), Subgroup(0, 2, step=2), ScaleIso(-1)),
                      label=f"oriented cactus group on [1..{n}]: reversed intervals invert their twist")
    sys = build_cactus_product(cs)
    sys.name = f"oriented-cactus-{n}"
    return sys


def build_higher_cactus(n: int, d: int) -> QuandleSystem:
    """Subcubes of the grid ``[1..n]^d`` with coordinatewise central symmetries."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    parts = []
    for side in range(1, n):
        for corner in itertools.product(range(1, n - side + 1), repeat=d):
            box = [(a, a + side) for a in corner]
            points = frozenset(itertools.product(*[range(a, b + 1) for a, b in box]))
            inv = {x: tuple(a + b - c for c, (a, b) in zip(x, box)) for x in points}
            name = "q" + "_".join(f"{a}-{b}" for a, b in box)
            parts.append(Part(name, points, inv))
    cs = CactusSystem(parts, _uniform_groups(parts, Cyclic(2), Subgroup(0, 2, step=2), ScaleIso(1, 2)),
                      label=f"higher cactus group on the grid [1..{n}]^{d}")
    sys = build_cactus_product(cs)
    sys.name = f"cube-cactus-{n}-{d}"
    return sys


def induced_paths(vertices, edges):
    """Vertex sequences of induced paths with at least two vertices, one per vertex set."""
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    found = {}

    def extend(path):
        last = path[-1]
        for w in sorted(adj[last], key=str):
            if w in path:
                continue
            # induced: w may only touch the current end of the path
            if any(w in adj[u] for u in path[:-1]):
                continue
            nxt = path + [w]
            key = frozenset(nxt)
            if key not in found:
                found[key] = nxt
            extend(nxt)

    for v in sorted(vertices, key=str):
        extend([v])
    return list(found.values())


def build_graph_cactus(vertices, edges) -> QuandleSystem:
    """Cactus group over a graph: one involution per induced path, reversing it."""
    order = {v: k for k, v in enumerate(vertices)}
    paths = induced_paths(vertices, edges)
    paths.sort(key=lambda p: (len(p), sorted(order[v] for v in p)))
    parts = []
    for path in paths:
        path = path if order[path[0]] < order[path[-1]] else path[::-1]
        inv = {v: path[-1 - k] for k, v in enumerate(path)}
        parts.append(Part("p" + "-".join(str(v) for v in path), frozenset(path), inv))
    cs = CactusSystem(parts, _uniform_groups(parts, Cyclic(2), Subgroup(0, 2, step=2), ScaleIso(1, 2)),
                      label=f"cactus group over a graph with {len(vertices)} vertices")
    sys = build_cactus_product(cs)
    sys.name = "graph-cactus"
    return sys


# --- normal chains and permutation systems -------------------------------------------

def permutation_group(perms, labels=None) -> TableGroup:
    """Table of a permutation group given by all of its elements (tuples, composition left after right)."""
    perms = [tuple(p) for p in perms]
    where = {p: k for k, p in enumerate(perms)}
    table = [[where[tuple(p[x] for x in q)] for q in perms] for p in perms]
    if labels is None:
        labels = ["".join(str(x + 1) for x in p) for p in perms]
    return TableGroup(table, labels=labels)


def symmetric_group(n: int) -> TableGroup:
    return permutation_group(list(itertools.permutations(range(n))))


def cyclic_table(n: int) -> TableGroup:
    return TableGroup([[(x + y) % n for y in range(n)] for x in range(n)])


def build_normal_chain_quandle(group: TableGroup, chain) -> QuandleSystem:
    """One Z factor per element; ``z_h ∗ z_g = z_{h g h^-1}`` when ``g`` enters the chain earlier.

    ``chain`` lists element sets (ids or labels) ``N_1 <= ... <= N_n = G``;
    the last level is appended if missing.
    """
    def ids(level):
        return frozenset(group.labels.index(x) if isinstance(x, str) else x for x in level)

    levels = [ids(level) for level in chain]
    whole = frozenset(group.elements())
    if not levels or levels[-1] != whole:
        levels.append(whole)
    for a, b in zip(levels, levels[1:]):
        if not a < b:
            raise NotChain("chain must be strictly increasing")
    for k, level in enumerate(levels):
        if group.closure(level) != level:
            raise NotChain(f"level {k + 1} is not a subgroup")
        for g in group.elements():
            for x in level:
                if group.mul(group.mul(g, x), group.inv(g)) not in level:
                    raise NotNormal(f"level {k + 1} is not normal: conjugating {group.labels[x]} "
                                    f"by {group.labels[g]}")
    rank = {x: min(k for k, level in enumerate(levels) if x in level) for x in whole}
    elements = sorted(whole, key=lambda x: (rank[x], x))
    names = [f"z{group.labels[x]}" for x in elements]
    pos = {x: k for k, x in enumerate(elements)}
    less = [(pos[g], pos[h]) for g in elements for h in elements if rank[g] < rank[h]]
    op = make_oposet(names, less)
    actions = {}
    for h in elements:
        moves = {pos[g]: (pos[group.mul(group.mul(h, g), group.inv(h))], ScaleIso(1))
                 for g in elements if rank[g] < rank[h]}
        if moves:
            actions[(pos[h], 0)] = GeneratorAction(moves)
    sys = QuandleSystem(op, [Cyclic(None)] * len(elements), actions, name="normal-chain",
                        provenance=f"normal chain quandle of a group of order {group.order} "
                                   f"with {len(levels)} levels")
    return validate_system(sys)


def build_permutation_system(points, perms, perm_names=None) -> QuandleSystem:
    """Z factors for points and for permutations; each permutation moves the point factors."""
    points = [str(p) for p in points]
    perms = [tuple(p) for p in perms]
    for p in perms:
        if sorted(p) != list(range(len(points))):
            raise ValueError(f"{p} is not a permutation of {len(points)} points")
    perm_names = list(perm_names or [f"sigma{k + 1}" for k in range(len(perms))])
    names = points + perm_names
    less = [(x, s) for x in points for s in perm_names]
    op = make_oposet(names, less)
    n = len(points)
    actions = {}
    for k, p in enumerate(perms):
        moves = {x: (p[x], ScaleIso(1)) for x in range(n) if p[x] != x}
        actions[(n + k, 0)] = GeneratorAction(moves)
    sys = QuandleSystem(op, [Cyclic(None)] * len(names), actions, name="permutation",
                        provenance=f"{len(perms)} permutations acting on {n} points")
    return validate_system(sys)


# --- trickle graphs -------------------------------------------------------------------

@dataclass
class TrickleGraph:
    """Graph with a partial order, vertex labels in {2, 3, ..., None=infinity} and star maps.

    ``phi[x]`` maps vertices of the closed star of ``x``; missing entries are fixed.
    """
    vertices: tuple
    edges: frozenset
    less: frozenset
    mu: dict
    phi: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = tuple(self.vertices)
        self.edges = frozenset(frozenset(e) for e in self.edges)
        self.less = frozenset(tuple(p) for p in self.less)

    def adjacent(self, x, y):
        return frozenset((x, y)) in self.edges

    def lt(self, x, y):
        return (x, y) in self.less

    def le(self, x, y):
        return x == y or (x, y) in self.less

    def star(self, x):
        return [x] + [y for y in self.vertices if y != x and self.adjacent(x, y)]

    def map(self, x, y):
        return self.phi.get(x, {}).get(y, y)


def trickle_violations(tg: TrickleGraph) -> list[tuple[str, tuple]]:
    """Every failed condition as (letter, witness); letters 'order' and 'star' are preconditions."""
    V = tg.vertices
    out = []
    for x in V:
        if tg.lt(x, x):
            out.append(("order", (x,)))
    for x, y, z in itertools.product(V, repeat=3):
        if tg.lt(x, y) and tg.lt(y, z) and not tg.lt(x, z):
            out.append(("order", (x, y, z)))
    for x in V:
        star = tg.star(x)
        image = [tg.map(x, y) for y in star]
        if sorted(image, key=str) != sorted(star, key=str) or set(tg.phi.get(x, {})) - set(star):
            out.append(("star", (x,)))
            continue
        for y, z in itertools.combinations(star, 2):
            if tg.adjacent(y, z) != tg.adjacent(tg.map(x, y), tg.map(x, z)):
                out.append(("star", (x, y, z)))
    if out:
        return out

    def parallel(x, y):
        return tg.adjacent(x, y) and not tg.le(x, y) and not tg.le(y, x)

    for x, y in itertools.permutations(V, 2):
        if tg.lt(x, y) and not tg.adjacent(x, y):
            out.append(("a", (x, y)))
    for x, y, z in itertools.product(V, repeat=3):
        if parallel(x, y) and tg.lt(z, y) and not parallel(x, z):
            out.append(("b", (x, y, z)))
    for x in V:
        star = tg.star(x)
        for y, z in itertools.product(star, repeat=2):
            if tg.le(z, y) != tg.le(tg.map(x, z), tg.map(x, y)):
                out.append(("c", (x, y, z)))
        for y in star:
            if tg.map(x, y) != y and not tg.lt(y, x):
                out.append(("d", (x, y)))
        if tg.mu.get(x) is not None:
            period = _perm_order({y: tg.map(x, y) for y in star})
            if tg.mu[x] % period:
                out.append(("e", (x, period, tg.mu[x])))
        for y in star:
            if tg.mu.get(tg.map(x, y)) != tg.mu.get(y):
                out.append(("f", (x, y)))
    for x, y, z in itertools.product(V, repeat=3):
        if tg.lt(z, y) and tg.lt(y, x):
            y2 = tg.map(x, y)
            if tg.map(x, tg.map(y, z)) != tg.map(y2, tg.map(x, z)):
                out.append(("g", (x, y, z)))
    return out


def _perm_order(perm):
    order, seen = 1, set()
    for start in perm:
        if start in seen:
            continue
        length, x = 0, start
        while x not in seen:
            seen.add(x)
            x = perm[x]
            length += 1
        order = order * length // _gcd(order, length)
    return order


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def check_trickle(tg: TrickleGraph) -> TrickleGraph:
    found = trickle_violations(tg)
    if found:
        raise TrickleAxiomFails(*found[0])
    return tg


def trickle_to_quandle(tg: TrickleGraph) -> QuandleSystem:
    check_trickle(tg)
    names = [str(v) for v in tg.vertices]
    pos = {v: k for k, v in enumerate(tg.vertices)}
    less = [(pos[a], pos[b]) for a, b in tg.less]
    perp = [(pos[a], pos[b]) for a, b in itertools.combinations(tg.vertices, 2)
            if tg.adjacent(a, b) and not tg.lt(a, b) and not tg.lt(b, a)]
    op = make_oposet(names, less, perp)
    factors = [Cyclic(tg.mu.get(v)) for v in tg.vertices]
    actions = {}
    for u in tg.vertices:
        moves = {}
        for v in tg.vertices:
            if tg.lt(v, u) and tg.map(u, v) != v:
                moves[pos[v]] = (pos[tg.map(u, v)], ScaleIso(1, tg.mu.get(v) or 0))
        if moves:
            actions[(pos[u], 0)] = GeneratorAction(moves)
    sys = QuandleSystem(op, factors, actions, name="trickle",
                        provenance=f"trickle graph with {len(names)} vertices")
    return validate_system(sys)


def generator_units(sys: QuandleSystem) -> list[int]:
    """Exponents ``u_i`` so that every twisting isomorphism sends ``z_j^{u_j}`` to ``z_k^{u_k}``.

    Exists exactly when all factors are cyclic and the holonomy is trivial.
    """
    for i, f in enumerate(sys.factors):
        if f.kind != "cyclic":
            raise NonCyclicFactor(f"factor {sys.names[i]} is not cyclic")
    if not has_trivial_holonomy(sys):
        raise NontrivialHolonomy("holonomy is not trivial")
    units = [None] * sys.n
    edges = {i: [] for i in range(sys.n)}
    for k in range(sys.n):
        t = sys.twist(k, 1)
        for j, (target, iso) in t.moves.items():
            edges[j].append((target, iso))
            edges[target].append((j, iso.inverse()))
    for root in range(sys.n):
        if units[root] is not None:
            continue
        units[root] = 1
        queue = deque([root])
        while queue:
            j = queue.popleft()
            for target, iso in edges[j]:
                u = iso(units[j])
                if units[target] is None:
                    units[target] = u
                    queue.append(target)
                elif units[target] != u:
                    raise NontrivialHolonomy(f"inconsistent generator at {sys.names[target]}")
    return units


def quandle_to_trickle(sys: QuandleSystem) -> TrickleGraph:
    units = generator_units(sys)
    V = sys.names
    edges = [(V[i], V[j]) for i, j in itertools.combinations(range(sys.n), 2)
             if sys.less[i][j] or sys.less[j][i] or sys.perp[i][j]]
    less = [(V[i], V[j]) for i, j in sys.oposet.less_pairs()]
    mu = {V[i]: sys.factors[i].order for i in range(sys.n)}
    phi = {}
    for i in range(sys.n):
        t = sys.twist(i, units[i])
        moved = {V[j]: V[k] for j, (k, _) in t.moves.items() if j != k}
        if moved:
            phi[V[i]] = moved
    return check_trickle(TrickleGraph(tuple(V), frozenset(frozenset(e) for e in edges),
                                      frozenset(less), mu, phi))


# --- isomorphism of systems ---------------------------------------------------------------

def _signature(sys, i):
    return (sys.factors[i], len(sys.below(i)), len(sys.above(i)),
            sum(sys.perp[i]), len(sys.factors[i].generators))


def find_isomorphism(a: QuandleSystem, b: QuandleSystem):
    """An index bijection carrying a's oposet, factors and generator twists onto b's, or None.

    Generators correspond position by position; twisting isomorphisms must
    agree exactly.
    """
    if a.n != b.n:
        return None
    sig_b = {}
    for j in range(b.n):
        sig_b.setdefault(_signature(b, j), []).append(j)
    order = sorted(range(a.n), key=lambda i: (len(a.below(i)), i))
    cands = [sig_b.get(_signature(a, i), []) for i in order]
    pi = {}
    used = set()

    def consistent(i, j):
        for i2, j2 in pi.items():
            if a.less[i][i2] != b.less[j][j2] or a.less[i2][i] != b.less[j2][j]:
                return False
            if a.perp[i][i2] != b.perp[j][j2]:
                return False
        return True

    def actions_match():
        for i in range(a.n):
            for pos in range(len(a.factors[i].generators)):
                ta = a.generator_twist(i, pos).moves
                tb = b.generator_twist(pi[i], pos).moves
                for j, (k, iso) in ta.items():
                    k2, iso2 = tb[pi[j]]
                    if k2 != pi[k] or iso != iso2:
                        return False
        return True

    def search(depth):
        if depth == len(order):
            return actions_match()
        i = order[depth]
        for j in cands[depth]:
            if j in used or not consistent(i, j):
                continue
            pi[i] = j
            used.add(j)
            if search(depth + 1):
                return True
            del pi[i]
            used.discard(j)
        return False

    return dict(pi) if search(0) else None


def normalize_generators(sys: QuandleSystem) -> QuandleSystem:
    """Same group with cyclic generators rechosen so every twisting multiplier is 1."""
    return trickle_to_quandle(quandle_to_trickle(sys))


# --- named examples -------------------------------------------------------------------

def free_product_z2() -> QuandleSystem:
    sys = build_graph_product(["x", "y"], [], [2, 2])
    sys.name = "z2*z2"
    return sys


def z2_times_z2() -> QuandleSystem:
    sys = build_graph_product(["x", "y"], [("x", "y")], [2, 2])
    sys.name = "z2xz2"
    return sys


def z2_cubed() -> QuandleSystem:
    sys = build_graph_product(["x", "y", "w"], [("x", "y"), ("y", "w"), ("x", "w")], [2, 2, 2])
    sys.name = "z2^3"
    return sys


def dihedral_semidirect(n: int) -> QuandleSystem:
    """``Z_n ⋊ Z_2`` with the generator of ``Z_2`` inverting ``Z_n``."""
    sys = build_semidirect(Cyclic(n), Cyclic(2), -1)
    sys.name = f"z{n}:z2"
    return sys


def s3_normal_chain() -> QuandleSystem:
    s3 = symmetric_group(3)
    a3 = [x for x in s3.elements() if _is_even(s3.labels[x])]
    sys = build_normal_chain_quandle(s3, [a3])
    sys.name = "s3-chain"
    return sys


def _is_even(label):
    p = [int(c) - 1 for c in label]
    return sum(1 for x, y in itertools.combinations(range(len(p)), 2) if p[x] > p[y]) % 2 == 0


def builtin_systems() -> dict:
    """Small systems used across the tests and scripts, keyed by name."""
    return {
        "cactus-3": build_cactus(3),
        "cactus-4": build_cactus(4),
        "oriented-cactus-3": build_oriented_cactus(3),
        "z2*z2": free_product_z2(),
        "z2xz2": z2_times_z2(),
        "z3:z2": dihedral_semidirect(3),
        "s3-chain": s3_normal_chain(),
        "permutation-3": build_permutation_system([1, 2, 3], [(1, 2, 0)]),
    }
