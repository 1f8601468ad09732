"""Finite balls of the Cayley graph over the union of the factors.

Vertices are ranked braids, so equality of group elements is equality of
keys.  Infinite cyclic factors are materialized through an exponent cap
``c``: the ball is the window of elements whose ranked form has length at
most ``R`` and whose letters all satisfy ``|k| <= c``.  Geodesics toward the
root stay inside the window, so window distances are word lengths, and every
coset of a factor meets the window in a connected set of capped steps; the
construction completes each such set to a clique.

Checks that need a witness quote the root-centred metric (the graph is
vertex-transitive, so rooted triangle and quadrangle conditions cover all
base points).  Local configurations at non-root vertices whose witnesses
fall outside the window are translated to the root and re-checked there.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .groups import Letter, QuandleSystem, stable_closure
from .oposet import max_comparable_family, minimal_elements
from .rewrite import (Explosion, format_letter, letters, linear, ranked_normal_form,
                      within_cap)

MAX_RADIUS = 8


class BoundaryVertex(ValueError):
    pass


class BoundaryPair(ValueError):
    pass


class RadiusTooSmall(ValueError):
    pass


class NoGateWitnessed(RuntimeError):
    """The ball is too small to certify a gate; not evidence against gatedness."""


class NotGated(RuntimeError):
    pass


class CliqueError(RuntimeError):
    pass


@dataclass
class CayleyBall:
    radius: int
    cap: int | None
    keys: list  # id -> ranked braid; the root has id 0
    dist: list[int]
    edges: list[tuple[int, int, Letter | None]]  # (u, v, s) with u < v and u·s = v
    system: QuandleSystem | None = None
    adj: list[dict[int, int]] = field(default_factory=list, repr=False)  # neighbour -> edge id
    index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.adj:
            self.adj = [{} for _ in self.keys]
            for e, (u, v, _) in enumerate(self.edges):
                self.adj[u][v] = e
                self.adj[v][u] = e
        if not self.index:
            self.index = {k: i for i, k in enumerate(self.keys)}

    @property
    def root(self) -> int:
        return 0

    @property
    def size(self) -> int:
        return len(self.keys)

    def neighbours(self, v: int) -> set[int]:
        return set(self.adj[v])

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def label(self, u: int, v: int) -> Letter:
        """The letter ``s`` with ``u·s = v``."""
        a, b, s = self.edges[self.adj[u][v]]
        return s if a == u else self.system.inv(s)

    def vertex(self, word) -> int:
        return self.index[ranked_normal_form(self.system, word)]

    def interior(self, margin: int = 2) -> list[int]:
        return [v for v in range(self.size) if self.dist[v] <= self.radius - margin]

    @classmethod
    def from_graph(cls, n: int, edges, radius: int | None = None) -> "CayleyBall":
        """An unlabelled graph rooted at vertex 0, for negative controls."""
        edges = [(min(u, v), max(u, v), None) for u, v in edges]
        adj = [set() for _ in range(n)]
        for u, v, _ in edges:
            adj[u].add(v)
            adj[v].add(u)
        dist = _bfs(adj, 0)
        if len(dist) < n:
            raise ValueError("graph is not connected")
        far = max(dist.values())
        return cls(radius if radius is not None else far + 3, None, list(range(n)),
                   [dist[v] for v in range(n)], edges)


def _bfs(adj, start, skip=None) -> dict[int, int]:
    """Distances from ``start``; ``skip`` is a set of edge ids that may not be crossed."""
    seen = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        nbrs = adj[x].items() if skip is not None else ((y, None) for y in adj[x])
        for y, e in nbrs:
            if y not in seen and (skip is None or e not in skip):
                seen[y] = seen[x] + 1
                queue.append(y)
    return seen


# --- construction ---------------------------------------------------------------------

def enumerate_ball(sys: QuandleSystem, radius: int, cap: int | None = None,
                   budget: int = 200_000) -> CayleyBall:
    if radius > MAX_RADIUS:
        raise ValueError(f"radius is limited to {MAX_RADIUS}")
    gens = letters(sys, cap)
    dist = {(): 0}
    found = {}  # frozenset{u, v} -> (u, v, s)
    frontier = [()]
    for d in range(radius + 1):
        nxt = []
        for u in frontier:
            base = list(linear(u))
            for s in gens:
                v = ranked_normal_form(sys, base + [s])
                if v not in dist:
                    if d == radius or len(linear(v)) != d + 1 or not within_cap(sys, v, cap):
                        continue
                    dist[v] = d + 1
                    nxt.append(v)
                    if len(dist) > budget:
                        raise Explosion(f"more than {budget} vertices at radius {d + 1}")
                found.setdefault(frozenset((u, v)), (u, v, s))
        frontier = nxt

    keys = sorted(dist, key=lambda b: (dist[b], b))
    index = {k: i for i, k in enumerate(keys)}
    edges = set()
    for u, v, s in found.values():
        a, b = index[u], index[v]
        edges.add((a, b, s) if a < b else (b, a, sys.inv(s)))
    edges |= _complete_cosets(sys, keys, sorted(edges))
    ball = CayleyBall(radius, cap, keys, [dist[k] for k in keys], sorted(edges), system=sys,
                      index=index)
    return ball


def _complete_cosets(sys, keys, edges) -> set:
    """Edges between window vertices of one infinite cyclic coset beyond the cap."""
    infinite = {i for i in range(sys.n) if not sys.factors[i].finite}
    steps = {}  # (vertex, factor) -> [(neighbour, exponent)]
    for u, v, s in edges:
        if s.index in infinite:
            steps.setdefault((u, s.index), []).append((v, s.value))
            steps.setdefault((v, s.index), []).append((u, -s.value))
    extra = set()
    placed = set()
    for start in sorted(steps):
        if start in placed:
            continue
        u, i = start
        pos = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y, k in steps[(x, i)]:
                if y not in pos:
                    pos[y] = pos[x] + k
                    queue.append(y)
        placed.update((x, i) for x in pos)
        for x, y in itertools.combinations(sorted(pos), 2):
            extra.add((x, y, Letter(i, pos[y] - pos[x])))
    return extra


# --- cliques --------------------------------------------------------------------------

def cliques_at(ball: CayleyBall, v: int) -> list[frozenset[int]]:
    """The cosets ``vG_i`` met at ``v``, one per nontrivial factor, in index order."""
    if ball.dist[v] > ball.radius - 1:
        raise BoundaryVertex(f"vertex {v} is at distance {ball.dist[v]} of radius {ball.radius}")
    groups = {}
    for y in ball.adj[v]:
        groups.setdefault(ball.label(v, y).index, {v}).add(y)
    out = []
    for i in sorted(groups):
        members = frozenset(groups[i])
        for x, y in itertools.combinations(members, 2):
            if not ball.adjacent(x, y):
                raise CliqueError(f"coset of factor {i} at {v} is not complete: {x}, {y}")
        outside = set.intersection(*(ball.neighbours(x) for x in members)) - members
        if outside:
            raise CliqueError(f"coset of factor {i} at {v} extends to {min(outside)}")
        out.append(members)
    return out


def _clique_of(ball, v, y) -> frozenset[int]:
    i = ball.label(v, y).index
    return frozenset([v] + [x for x in ball.adj[v] if ball.label(v, x).index == i])


# --- hyperplanes ----------------------------------------------------------------------

@dataclass
class Hyperplane:
    id: int
    edges: frozenset[int]
    carrier: frozenset[int]
    sectors: list[int] | None = None  # per vertex: sector number, computed on demand


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x != y:
            self.parent[max(x, y)] = min(x, y)


def _square_corners(ball, x, y, z) -> list[int]:
    """Vertices ``w`` making ``x, y, w, z`` an induced 4-cycle."""
    if y == z or ball.adjacent(y, z):
        return []
    return [w for w in ball.adj[y].keys() & ball.adj[z].keys()
            if w != x and not ball.adjacent(w, x)]


def hyperplanes(ball: CayleyBall) -> list[Hyperplane]:
    """Classes of edges under sharing a 3-cycle or sitting opposite in an induced 4-cycle."""
    uf = _UnionFind(len(ball.edges))
    adj = ball.adj
    for e, (y, z, _) in enumerate(ball.edges):
        for x in adj[y].keys() & adj[z].keys():
            uf.union(e, adj[x][y])
            uf.union(e, adj[x][z])
    for x in range(ball.size):
        for y, z in itertools.combinations(adj[x], 2):
            for w in _square_corners(ball, x, y, z):
                uf.union(adj[x][y], adj[z][w])
                uf.union(adj[x][z], adj[y][w])
    classes = {}
    for e in range(len(ball.edges)):
        classes.setdefault(uf.find(e), []).append(e)
    out = []
    for k, root in enumerate(sorted(classes)):
        members = frozenset(classes[root])
        carrier = frozenset(v for e in members for v in ball.edges[e][:2])
        out.append(Hyperplane(k, members, carrier))
    return out


def sectors(ball: CayleyBall, hp: Hyperplane) -> list[int]:
    """Component numbers of the ball with the edges of ``hp`` removed."""
    if hp.sectors is None:
        labels = [-1] * ball.size
        count = 0
        for v in range(ball.size):
            if labels[v] < 0:
                for x in _bfs(ball.adj, v, skip=hp.edges):
                    labels[x] = count
                count += 1
        hp.sectors = labels
    return hp.sectors


def hyperplane_of(planes: list[Hyperplane]) -> dict[int, int]:
    return {e: hp.id for hp in planes for e in hp.edges}


# --- quasi-median axioms --------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    boundary_resolved: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class QuasiMedianReport:
    radius: int
    vertices: int
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "radius": self.radius,
            "vertices": self.vertices,
            "passed": self.passed,
            "checks": [{"name": c.name, "checked": c.checked, "passed": c.passed,
                        "boundary_resolved": c.boundary_resolved,
                        "failures": [list(w) for w in c.failures[:10]]} for c in self.checks],
        }


def _triangle_condition(ball, res):
    for e, (x, y, _) in enumerate(ball.edges):
        d = ball.dist[x]
        if d != ball.dist[y] or d == 0:
            continue
        res.checked += 1
        if not any(ball.dist[z] == d - 1 for z in ball.adj[x].keys() & ball.adj[y].keys()):
            res.failures.append((x, y))


def _quadrangle_condition(ball, res):
    for y in range(ball.size):
        d = ball.dist[y]
        down = [x for x in ball.adj[y] if ball.dist[x] == d - 1]
        for x, z in itertools.combinations(down, 2):
            if ball.adjacent(x, z):
                continue
            res.checked += 1
            if not any(ball.dist[w] == d - 2 for w in ball.adj[x].keys() & ball.adj[z].keys()):
                res.failures.append((x, y, z))


def _no_k4_minus(ball, res, inner):
    for x, y, _ in ball.edges:
        if x not in inner and y not in inner:
            continue
        res.checked += 1
        common = ball.adj[x].keys() & ball.adj[y].keys()
        for z, w in itertools.combinations(sorted(common), 2):
            if not ball.adjacent(z, w):
                res.failures.append((x, y, z, w))
                break


def _no_k32(ball, res, inner):
    for x in sorted(inner):
        far = {w for y in ball.adj[x] for w in ball.adj[y]} - ball.neighbours(x) - {x}
        for w in sorted(far):
            common = sorted(ball.adj[x].keys() & ball.adj[w].keys())
            if len(common) < 3:
                continue
            res.checked += 1
            for trio in itertools.combinations(common, 3):
                if not any(ball.adjacent(a, b) for a, b in itertools.combinations(trio, 2)):
                    res.failures.append((x, w) + trio)
                    break


def _induced(ball, vertices, edges) -> bool:
    want = {frozenset(e) for e in edges}
    return all(ball.adjacent(a, b) == (frozenset((a, b)) in want)
               for a, b in itertools.combinations(vertices, 2))


def _house_configs(ball, x):
    """Neighbour triples ``(y1, y2, y3)`` with ``y1 ~ y3`` and both spanning squares with ``y2``."""
    nbrs = sorted(ball.adj[x])
    for y2 in nbrs:
        squares = [y for y in nbrs if _square_corners(ball, x, y, y2)]
        for y1, y3 in itertools.combinations(squares, 2):
            if ball.adjacent(y1, y3):
                yield (y1, y2, y3)


def _has_prism(ball, x, y1, y2, y3) -> bool:
    for w1 in _square_corners(ball, x, y1, y2):
        for w3 in _square_corners(ball, x, y3, y2):
            if _induced(ball, (x, y1, y3, y2, w1, w3),
                        [(x, y1), (x, y3), (y1, y3), (y2, w1), (y2, w3), (w1, w3),
                         (x, y2), (y1, w1), (y3, w3)]):
                return True
    return False


def _cube_configs(ball, x):
    nbrs = sorted(ball.adj[x])
    for trio in itertools.combinations(nbrs, 3):
        if all(_square_corners(ball, x, a, b) for a, b in itertools.combinations(trio, 2)):
            yield trio


def _has_cube(ball, x, y1, y2, y3) -> bool:
    for w12 in _square_corners(ball, x, y1, y2):
        for w13 in _square_corners(ball, x, y1, y3):
            for w23 in _square_corners(ball, x, y2, y3):
                for u in ball.adj[w12].keys() & ball.adj[w13].keys() & ball.adj[w23].keys():
                    if u == x:
                        continue
                    edges = [(x, y1), (x, y2), (x, y3), (y1, w12), (y2, w12), (y1, w13),
                             (y3, w13), (y2, w23), (y3, w23), (w12, u), (w13, u), (w23, u)]
                    if _induced(ball, (x, y1, y2, y3, w12, w13, w23, u), edges):
                        return True
    return False


def _at_root(ball, x, config):
    """Translate neighbours of ``x`` to neighbours of the root through their edge labels."""
    out = []
    for y in config:
        key = ranked_normal_form(ball.system, [ball.label(x, y)])
        if key not in ball.index:
            return None
        out.append(ball.index[key])
    return tuple(out)


def _local_condition(ball, res, inner, configs, holds, depth):
    for x in sorted(inner):
        for config in configs(ball, x):
            res.checked += 1
            if holds(ball, x, *config):
                continue
            if ball.dist[x] + depth <= ball.radius:
                res.failures.append((x,) + config)
                continue
            # the witness may lie beyond the ball; the root sees the same configuration
            moved = _at_root(ball, x, config) if ball.system is not None else None
            if moved is not None and holds(ball, 0, *moved):
                res.boundary_resolved += 1
            else:
                res.failures.append((x,) + config)


def verify_quasi_median(ball: CayleyBall) -> QuasiMedianReport:
    """Weakly modular (rooted), no induced K4- or K3,2, house and 3-cube conditions.

    Rooted conditions run over the whole ball.  Local ones run at vertices at
    distance at most ``R - 2`` from the root.
    """
    if ball.radius < 3:
        raise RadiusTooSmall(f"radius {ball.radius} < 3")
    inner = set(ball.interior(2))
    checks = [CheckResult(name) for name in
              ("triangle", "quadrangle", "no-K4-", "no-K3,2", "house", "3-cube")]
    _triangle_condition(ball, checks[0])
    _quadrangle_condition(ball, checks[1])
    _no_k4_minus(ball, checks[2], inner)
    _no_k32(ball, checks[3], inner)
    _local_condition(ball, checks[4], inner, _house_configs, _has_prism, 2)
    _local_condition(ball, checks[5], inner, _cube_configs, _has_cube, 3)
    return QuasiMedianReport(ball.radius, ball.size, checks)


# --- metric, gates, prisms ------------------------------------------------------------

def _word_distance(sys, a, b) -> int:
    return len(linear(ranked_normal_form(sys, [sys.inv(s) for s in reversed(linear(a))]
                                         + list(linear(b)))))


def distance_vs_hyperplanes(ball: CayleyBall, u: int, v: int,
                            planes: list[Hyperplane] | None = None) -> tuple[int, int]:
    """Graph distance and the number of ball hyperplanes separating ``u`` from ``v``."""
    limit = ball.radius - 2
    if ball.dist[u] > limit or ball.dist[v] > limit:
        raise BoundaryPair(f"({u}, {v}) is not interior")
    from_u = _bfs(ball.adj, u)
    d = from_u[v]
    if d > limit:
        raise BoundaryPair(f"d({u}, {v}) = {d} > {limit}")
    if ball.system is not None and _word_distance(ball.system, ball.keys[u], ball.keys[v]) != d:
        raise BoundaryPair(f"ball distance {d} between {u} and {v} is not the word distance")
    if planes is None:
        planes = hyperplanes(ball)
    owner = hyperplane_of(planes)
    # every separating hyperplane is crossed by every path, in particular by this geodesic
    path = [v]
    while path[-1] != u:
        x = path[-1]
        path.append(next(y for y in ball.adj[x] if from_u.get(y) == from_u[x] - 1))
    crossed = {owner[ball.adj[a][b]] for a, b in zip(path, path[1:])}
    count = 0
    for k in crossed:
        labels = sectors(ball, planes[k])
        count += labels[u] != labels[v]
    return d, count


def parabolic_vertices(ball: CayleyBall, subset) -> list[int]:
    """Vertices of the ball lying in the subgroup generated by ``subset``'s factors."""
    closure = stable_closure(ball.system, subset)
    return [v for v, key in enumerate(ball.keys) if all(s.index in closure for s in linear(key))]


def gate(ball: CayleyBall, subset, x: int) -> int:
    """The vertex of the parabolic subgraph through which ``x`` reaches all of it.

    Distances are word lengths, so they are exact; only the candidate set is
    limited to the ball.
    """
    sys = ball.system
    members = parabolic_vertices(ball, subset)
    d = {y: _word_distance(sys, ball.keys[x], ball.keys[y]) for y in members}
    best = min(d.values())
    if best > ball.radius - 2:
        raise BoundaryVertex(f"vertex {x} is {best} away from the subgraph")
    nearest = [y for y in members if d[y] == best]
    if len(nearest) > 1:
        raise NotGated(f"{len(nearest)} nearest points {nearest[:4]} to {x}")
    p = nearest[0]
    bad = [y for y in members
           if d[y] != best + _word_distance(sys, ball.keys[p], ball.keys[y])]
    if bad:
        certified = ball.cap is None and ball.dist[x] + best <= ball.radius
        if certified:
            raise NotGated(f"{p} is not a gate for {x}: fails at {bad[0]}")
        raise NoGateWitnessed(f"no gate for {x} visible in the ball")
    return p


def _cliques_span(ball, v, c1, c2) -> bool:
    return all(_square_corners(ball, v, y, z) for y in c1 - {v} for z in c2 - {v})


def prism_dimension_at(ball: CayleyBall, v: int) -> int:
    """Largest number of cliques at ``v`` pairwise spanning squares."""
    cliques = cliques_at(ball, v)
    spans = {(a, b) for a, b in itertools.combinations(range(len(cliques)), 2)
             if _cliques_span(ball, v, cliques[a], cliques[b])}
    best = min(1, len(cliques))

    def grow(chosen, rest):
        nonlocal best
        best = max(best, len(chosen))
        for pos, k in enumerate(rest):
            if all((c, k) in spans for c in chosen):
                grow(chosen + [k], rest[pos + 1:])

    grow([], list(range(len(cliques))))
    return best


def prism_bound(sys: QuandleSystem) -> int:
    return max_comparable_family(sys.oposet)


# --- invariants used by the tests -----------------------------------------------------

def four_cycle_templates(ball: CayleyBall, inner: set[int] | None = None) -> list[tuple]:
    """Induced squares at ``inner`` vertices whose two edge indices are neither ⊥ nor comparable."""
    sys = ball.system
    inner = set(ball.interior(2)) if inner is None else inner
    bad = []
    for x in sorted(inner):
        for y, z in itertools.combinations(sorted(ball.adj[x]), 2):
            if _square_corners(ball, x, y, z):
                i, j = ball.label(x, y).index, ball.label(x, z).index
                if not (sys.perp[i][j] or sys.less[i][j] or sys.less[j][i]):
                    bad.append((x, y, z))
    return bad


def geodesic_crossings(ball: CayleyBall, planes: list[Hyperplane] | None = None) -> list[int]:
    """Vertices whose ranked word, read as a root path, crosses some hyperplane twice."""
    sys = ball.system
    owner = hyperplane_of(planes if planes is not None else hyperplanes(ball))
    bad = []
    for v, key in enumerate(ball.keys):
        word = linear(key)
        prefix, here, seen = [], 0, set()
        for s in word:
            prefix.append(s)
            nxt = ball.index[ranked_normal_form(sys, prefix)]
            h = owner[ball.adj[here][nxt]]
            if h in seen:
                bad.append(v)
                break
            seen.add(h)
            here = nxt
    return bad


# --- decomposition, commutation, torsion ----------------------------------------------

def retract(sys: QuandleSystem, word, minimal=None) -> tuple:
    """Delete minimal-index letters; ranked braid of what remains."""
    minimal = minimal_elements(sys.oposet) if minimal is None else minimal
    if word and isinstance(word[0][0], tuple):
        word = linear(word)
    return ranked_normal_form(sys, [s for s in word if s[0] not in minimal])


def closes(sys: QuandleSystem, radius: int, cap: int | None = None,
           budget: int = 200_000) -> dict | None:
    """All elements with their lengths, if the group has none longer than ``radius``."""
    from .rewrite import ball_elements
    elems = ball_elements(sys, radius + 1, cap, budget)
    if max(elems.values()) > radius:
        return None
    return elems


@dataclass
class DecompositionReport:
    minimal: list[str]
    checks: dict[str, bool]
    order: int | None = None
    kernel_order: int | None = None
    quotient_order: int | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {"minimal": self.minimal, "checks": self.checks, "order": self.order,
                "kernel_order": self.kernel_order, "quotient_order": self.quotient_order,
                "passed": self.passed}


def semidirect_decomposition(sys: QuandleSystem, radius: int = 3,
                             cap: int | None = None) -> DecompositionReport:
    minimal = minimal_elements(sys.oposet)
    checks = {}

    # defining relations go to relations: commutations and twisted commutations
    ok = True
    for i in range(sys.n):
        for j in range(sys.n):
            if not (sys.perp[i][j] or sys.less[i][j]):
                continue
            for a in _relation_letters(sys, i, cap):
                for b in _relation_letters(sys, j, cap):
                    rhs = [b, a] if sys.perp[i][j] else [b, sys.act(b, a)]
                    ok &= retract(sys, [a, b], minimal) == retract(sys, rhs, minimal)
    checks["relations"] = ok

    sample = _elements(sys, radius, cap)
    upper = [b for b in sample if all(s.index not in minimal for s in linear(b))]
    checks["fixes_upper"] = all(retract(sys, b, minimal) == b for b in upper)

    # an element with trivial image is the product of its minimal letters, each
    # conjugated by the non-minimal prefix before it
    ok = True
    for b in sample:
        word = linear(b)
        if retract(sys, word, minimal):
            continue
        pieces, prefix = [], []
        for s in word:
            if s.index in minimal:
                pieces += prefix + [s] + [sys.inv(t) for t in reversed(prefix)]
            else:
                prefix.append(s)
        ok &= ranked_normal_form(sys, pieces) == b
    checks["kernel_conjugates"] = ok

    report = DecompositionReport(sorted(sys.names[i] for i in minimal), checks)
    whole = closes(sys, radius, cap)
    if whole is not None:
        kernel = [b for b in whole if not retract(sys, b, minimal)]
        image = {retract(sys, b, minimal) for b in whole}
        report.order, report.kernel_order, report.quotient_order = len(whole), len(kernel), len(image)
        checks["order_factorization"] = len(whole) == len(kernel) * len(image)
    return report


def _relation_letters(sys, j, cap):
    factor = sys.factors[j]
    if factor.finite:
        return letters(sys, indices=[j])
    return letters(sys, cap or 1, indices=[j])


def _elements(sys, radius, cap):
    from .rewrite import ball_elements
    return list(ball_elements(sys, radius, cap if cap is not None else _default_cap(sys)))


def _default_cap(sys):
    return None if all(f.finite for f in sys.factors) else 2


def retraction_is_homomorphism(sys: QuandleSystem, radius: int = 4, cap: int | None = None) -> list:
    """Pairs ``(g, h)`` of ball elements with ``r(gh) != r(g) r(h)``."""
    minimal = minimal_elements(sys.oposet)
    sample = _elements(sys, radius, cap)
    image = {b: retract(sys, b, minimal) for b in sample}
    bad = []
    for g in sample:
        for h in sample:
            gh = linear(g) + linear(h)
            if retract(sys, gh, minimal) != ranked_normal_form(sys, linear(image[g]) + linear(image[h])):
                bad.append((g, h))
    return bad


def transverse_commutation_check(ball: CayleyBall) -> CheckResult:
    """Minimal-index labels of two edges spanning a square at a corner must commute."""
    if ball.radius < 3:
        raise RadiusTooSmall(f"radius {ball.radius} < 3")
    sys = ball.system
    minimal = minimal_elements(sys.oposet)
    res = CheckResult("transverse-commutation")
    for x in ball.interior(2):
        for y, z in itertools.combinations(sorted(ball.adj[x]), 2):
            a, b = ball.label(x, y), ball.label(x, z)
            if a.index not in minimal or b.index not in minimal:
                continue
            if not _square_corners(ball, x, y, z):
                continue
            res.checked += 1
            if ranked_normal_form(sys, [a, b]) != ranked_normal_form(sys, [b, a]):
                res.failures.append((x, y, z))
    return res


def _primes(m: int) -> set[int]:
    out, p = set(), 2
    while p * p <= m:
        while m % p == 0:
            out.add(p)
            m //= p
        p += 1
    if m > 1:
        out.add(m)
    return out


def element_order(sys: QuandleSystem, braid, limit: int = 64, max_length: int = 24) -> int | None:
    """Order of an element, or None when no power up to ``limit`` (of bounded length) is trivial."""
    g = list(linear(braid))
    if not g:
        return 1
    power = g
    for m in range(1, limit + 1):
        if not power:
            return m
        if len(power) > max_length:
            return None
        power = list(linear(ranked_normal_form(sys, power + g)))
    return None


@dataclass
class TorsionReport:
    primes: set[int]
    expected: set[int]
    exact: bool
    sampled: int = 0
    undetermined: int = 0

    @property
    def consistent(self) -> bool:
        return self.primes == self.expected if self.exact else self.primes <= self.expected

    def as_dict(self) -> dict:
        return {"primes": sorted(self.primes), "expected": sorted(self.expected),
                "exact": self.exact, "consistent": self.consistent,
                "sampled": self.sampled, "undetermined": self.undetermined}


def torsion_primes(sys: QuandleSystem, radius: int = 4, cap: int | None = None) -> TorsionReport:
    """Primes occurring as element orders: exact for finite groups, sampled otherwise."""
    expected = set()
    for f in sys.factors:
        if f.finite:
            expected |= _primes(f.order)
    whole = closes(sys, radius, cap) if all(f.finite for f in sys.factors) else None
    elems = whole if whole is not None else _elements(sys, radius, cap)
    found, unknown = set(), 0
    size = len(elems) if whole is not None else 64
    for b in elems:
        m = element_order(sys, b, limit=size, max_length=10**9 if whole is not None else 4 * radius)
        if m is None:
            unknown += 1
        else:
            found |= _primes(m)
    return TorsionReport(found, expected, whole is not None, len(elems), unknown)


# --- export ---------------------------------------------------------------------------

def serialize_key(sys: QuandleSystem, braid) -> str:
    if not braid:
        return "1"
    return "".join("(" + " ".join(format_letter(sys, s) for s in step) + ")" for step in braid)


def ball_to_json(ball: CayleyBall, planes: list[Hyperplane] | None = None) -> dict:
    sys = ball.system
    out = {
        "schema": 1,
        "radius": ball.radius,
        "vertices": [{"id": v, "key": serialize_key(sys, k), "dist": ball.dist[v]}
                     for v, k in enumerate(ball.keys)],
        "edges": [{"u": u, "v": v, "letter": format_letter(sys, s)} for u, v, s in ball.edges],
    }
    if planes is not None:
        out["hyperplanes"] = [sorted(hp.edges) for hp in planes]
    return out
