import itertools

import pytest

from models import bfs_model, dihedral_mul
from quandle.cayley import closes
from quandle.constructions import (CactusSystem, CardinalityData, NonCyclicFactor, NotChain,
                                   NotNormal, NontrivialHolonomy, Part, TrickleAxiomFails,
                                   TrickleGraph, build_cactus, build_cactus_product,
                                   build_graph_cactus, build_graph_product, build_higher_cactus,
                                   build_normal_chain_quandle, build_oriented_cactus,
                                   build_permutation_system, build_semidirect, cyclic_table,
                                   find_isomorphism, interval_parts, quandle_to_trickle,
                                   symmetric_group, trickle_to_quandle, trickle_violations)
from quandle.groups import Cyclic, Letter, ScaleIso, Subgroup, TableIso, has_trivial_holonomy, holonomy_group
from quandle.rewrite import are_equal, ball_elements, parse_word


def path(n):
    """The path with ``n`` vertices."""
    vertices = list(range(1, n + 1))
    return vertices, [(k, k + 1) for k in range(1, n)]


def test_graph_product_shapes():
    free = build_graph_product("ab", [], [2, 2])
    assert closes(free, 6) is None
    k3 = build_graph_product("abc", [("a", "b"), ("b", "c"), ("a", "c")], [2, 2, 2])
    assert len(closes(k3, 3)) == 8
    assert k3.oposet.less_pairs() == []


def _free_product_ball(radius):
    """Elements of (Z2 x Z2) * Z2 as alternating syllable tuples, by BFS over generators."""
    def mul(x, g):
        side, val = g
        if x and x[-1][0] == side:
            last = x[-1][1] ^ val
            return x[:-1] if last == 0 else x[:-1] + ((side, last),)
        return x + (g,)
    gens = [("A", 1), ("A", 2), ("B", 1)]
    return bfs_model(gens, mul, (), radius)


def test_graph_product_on_an_edge_plus_a_point():
    sys = build_graph_product("abc", [("a", "b")], [2, 2, 2])
    mine = ball_elements(sys, 5)
    oracle = _free_product_ball(5)
    for r in range(6):
        assert sum(1 for d in mine.values() if d == r) == sum(1 for d in oracle.values() if d == r)


@pytest.mark.parametrize("n,action,order", [(3, -1, 6), (3, 1, 6), (4, -1, 8)])
def test_semidirect_orders(n, action, order):
    sys = build_semidirect(Cyclic(n), Cyclic(2), action)
    elems = closes(sys, 6)
    assert len(elems) == order
    gens = [(k, 0) for k in range(1, n)] + [(0, 1)]
    if action == -1:
        oracle = bfs_model(gens, lambda x, y: dihedral_mul(x, y, n), (0, 0), 6)
    else:
        oracle = bfs_model(gens, lambda x, y: ((x[0] + y[0]) % n, (x[1] + y[1]) % 2), (0, 0), 6)
    assert sorted(elems.values()) == sorted(oracle.values())


def test_semidirect_over_a_table_factor():
    s3 = symmetric_group(3)
    # conjugation by the transposition 213 as a permutation of element ids
    t = s3.labels.index("213")
    perm = tuple(s3.mul(s3.mul(t, x), s3.inv(t)) for x in s3.elements())
    sys = build_semidirect(s3, Cyclic(2), [TableIso(perm)])
    assert len(closes(sys, 8)) == 12


def test_cactus_presentation():
    j3 = build_cactus(3)
    assert j3.n == 3
    assert are_equal(j3, parse_word(j3, "s12 s13"), parse_word(j3, "s13 s23"))
    assert are_equal(j3, parse_word(j3, "s23 s13"), parse_word(j3, "s13 s12"))
    assert has_trivial_holonomy(j3)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_graph_cactus_of_a_path_is_the_cactus_group(n):
    vertices, edges = path(n)
    assert find_isomorphism(build_graph_cactus(vertices, edges), build_cactus(n)) is not None


def test_graph_cactus_of_a_triangle():
    sys = build_graph_cactus([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    # induced paths of a triangle: the three edges; they pairwise share a vertex
    assert sys.n == 3 and sys.oposet.less_pairs() == [] and sys.oposet.perp_pairs() == []


def test_higher_cactus_in_dimension_one_is_the_cactus_group():
    assert find_isomorphism(build_higher_cactus(4, 1), build_cactus(4)) is not None
    sq = build_higher_cactus(3, 2)
    assert sq.n == 4 + 1 and sq.validated


def test_cactus_product_examples():
    n = 4
    parts = interval_parts(n)
    z2 = {len(p.points): CardinalityData(Cyclic(2), Subgroup(0, 2, step=2), ScaleIso(1, 2))
          for p in parts}
    assert find_isomorphism(build_cactus_product(CactusSystem(parts, z2)), build_cactus(n))
    z = {len(p.points): CardinalityData(Cyclic(), Subgroup(0, 2, step=2), ScaleIso(-1)) for p in parts}
    assert find_isomorphism(build_cactus_product(CactusSystem(parts, z)), build_oriented_cactus(n))
    one = [Part("p", frozenset({1, 2}), {1: 2, 2: 1})]
    single = build_cactus_product(CactusSystem(one, {2: CardinalityData(Cyclic(), Subgroup(0, 2, step=2),
                                                                        ScaleIso(1))}))
    assert single.n == 1 and single.generator_twist(0, 0).is_identity


def test_cactus_product_rejects_bad_involution():
    bad = [Part("p", frozenset({1, 2, 3}), {1: 2, 2: 3, 3: 1})]
    data = {3: CardinalityData(Cyclic(2), Subgroup(0, 2, step=2), ScaleIso(1, 2))}
    with pytest.raises(ValueError):
        build_cactus_product(CactusSystem(bad, data))


def test_oriented_cactus_holonomy():
    assert not has_trivial_holonomy(build_oriented_cactus(4))


def _check_all_triples(sys, exps):
    for i, j, k in itertools.permutations(range(sys.n), 3):
        if not (sys.less[i][j] and sys.less[j][k]):
            continue
        for x, y, z in itertools.product(exps, repeat=3):
            a, b, c = Letter(i, x), Letter(j, y), Letter(k, z)
            assert sys.act(c, sys.act(b, a)) == sys.act(sys.act(c, b), sys.act(c, a))


def test_normal_chain_s3():
    s3 = symmetric_group(3)
    a3 = ["123", "231", "312"]
    sys = build_normal_chain_quandle(s3, [a3])
    assert sys.n == 6 and all(not f.finite for f in sys.factors)
    _check_all_triples(sys, [-2, -1, 1, 2])


def test_normal_chain_small_groups():
    z2 = cyclic_table(2)
    sys = build_normal_chain_quandle(z2, [])
    assert sys.n == 2 and sys.oposet.less_pairs() == []
    z4 = cyclic_table(4)
    sys = build_normal_chain_quandle(z4, [[0, 2]])
    _check_all_triples(sys, [-1, 1, 3])
    assert holonomy_group(sys, sys.names.index("z2")) == {ScaleIso(1)}


def test_normal_chain_errors():
    s3 = symmetric_group(3)
    with pytest.raises(NotNormal):
        build_normal_chain_quandle(s3, [["123", "213"]])
    with pytest.raises(NotChain):
        build_normal_chain_quandle(s3, [["123", "231", "312"], ["123", "231", "312"]])
    with pytest.raises(NotChain):
        build_normal_chain_quandle(s3, [["123", "231"]])


def test_permutation_systems():
    swap = build_permutation_system([1, 2], [(1, 0)])
    t = swap.names.index("sigma1")
    for point in ("1", "2"):
        s = parse_word(swap, point)
        other = "2" if point == "1" else "1"
        assert are_equal(swap, s + parse_word(swap, "sigma1"), parse_word(swap, f"sigma1 {other}"))
    assert t == 2
    free = build_permutation_system([1, 2, 3], [])
    assert free.oposet.less_pairs() == [] and free.oposet.perp_pairs() == []
    cyc = build_permutation_system([1, 2, 3], [(1, 2, 0)])
    assert all(holonomy_group(cyc, i) == {ScaleIso(1)} for i in range(cyc.n))


def _j3_trickle():
    return quandle_to_trickle(build_cactus(3))


@pytest.mark.parametrize("n", [3, 4])
def test_trickle_round_trip_cactus(n):
    sys = build_cactus(n)
    tg = quandle_to_trickle(sys)
    assert trickle_violations(tg) == []
    assert find_isomorphism(trickle_to_quandle(tg), sys) is not None


def test_trickle_raag():
    tg = TrickleGraph(("a", "b", "c"), {("a", "b"), ("b", "c")}, set(), {"a": None, "b": None, "c": None})
    sys = trickle_to_quandle(tg)
    raag = build_graph_product("abc", [("a", "b"), ("b", "c")], [0, 0, 0])
    assert find_isomorphism(sys, raag) is not None
    gp = quandle_to_trickle(build_graph_product("ab", [("a", "b")], [2, 2]))
    assert gp.less == frozenset()


def test_quandle_to_trickle_errors():
    with pytest.raises(NontrivialHolonomy):
        quandle_to_trickle(build_oriented_cactus(4))
    s3 = symmetric_group(3)
    with pytest.raises(NonCyclicFactor):
        quandle_to_trickle(build_semidirect(s3, Cyclic(2), [TableIso(tuple(s3.elements()))]))


def test_trickle_axiom_e():
    # phi_x is a 3-cycle on the star but mu(x) = 2
    vertices = ("a", "b", "c", "x")
    edges = {("a", "x"), ("b", "x"), ("c", "x")}
    less = {("a", "x"), ("b", "x"), ("c", "x")}
    mu = {"a": 2, "b": 2, "c": 2, "x": 2}
    tg = TrickleGraph(vertices, edges, less, mu, {"x": {"a": "b", "b": "c", "c": "a"}})
    with pytest.raises(TrickleAxiomFails) as exc:
        trickle_to_quandle(tg)
    assert exc.value.letter == "e"


def test_trickle_axioms_each_detected():
    base = _j3_trickle()
    cases = {
        "a": TrickleGraph(base.vertices, set(), base.less, base.mu, {}),
        "d": TrickleGraph(("a", "b"), {("a", "b")}, set(), {"a": 2, "b": 2}, {"a": {"a": "b", "b": "a"}}),
        "f": TrickleGraph(base.vertices, base.edges, base.less, dict(base.mu, s12=3), base.phi),
    }
    for letter, tg in cases.items():
        letters_found = {v[0] for v in trickle_violations(tg)}
        assert letter in letters_found, (letter, letters_found)
