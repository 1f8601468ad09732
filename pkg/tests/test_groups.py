import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quandle.constructions import (build_cactus, build_graph_product, build_normal_chain_quandle,
                                   build_oriented_cactus, cyclic_table, dihedral_semidirect,
                                   symmetric_group)
from quandle.groups import (Cyclic, GeneratorAction, Letter, MixedFactors, NotBelow, NotStable,
                            QuandleSystem, ScaleIso, SystemViolation, apply_action,
                            dotted_subgroup, factor_multiply, has_trivial_holonomy,
                            holonomy_group, reachable_isos, restrict_subsystem, stable_closure,
                            validate_system)


def test_cyclic_products():
    assert factor_multiply(Letter(0, 1), Letter(0, 1), [Cyclic(2)]) == Letter(0, 0)
    assert factor_multiply(Letter(0, 3), Letter(0, -1), [Cyclic()]) == Letter(0, 2)
    with pytest.raises(MixedFactors):
        factor_multiply(Letter(0, 1), Letter(1, 1), [Cyclic(2), Cyclic(2)])


def test_table_product_matches_composition():
    s3 = symmetric_group(3)
    t12 = s3.labels.index("213")
    t23 = s3.labels.index("132")
    # composition of one-line permutations, right factor applied first
    p, q = (1, 0, 2), (0, 2, 1)
    expected = "".join(str(p[q[x]] + 1) for x in range(3))
    assert s3.labels[s3.mul(t12, t23)] == expected
    assert s3.element_order(s3.mul(t12, t23)) == 3


def test_table_rejects_non_group():
    from quandle.groups import TableGroup
    with pytest.raises(ValueError):
        TableGroup([[0, 1], [1, 1]])


def test_cactus_action_on_objects():
    j3 = build_cactus(3)
    assert apply_action(j3, 2, 1, 0) == 1
    assert apply_action(j3, 2, 0, Letter(0, 1)) == Letter(0, 1)
    with pytest.raises(NotBelow):
        apply_action(j3, 0, 1, 1)


def test_oriented_cactus_inverts():
    oc = build_oriented_cactus(3)
    assert apply_action(oc, 2, 1, Letter(0, 1)) == Letter(1, -1)


def test_builtins_validate(builtins):
    for sys in builtins.values():
        assert sys.validated


def test_normal_chain_on_s3_validates():
    s3 = symmetric_group(3)
    even = ["123", "231", "312"]
    sys = build_normal_chain_quandle(s3, [even])
    assert sys.n == 6 and sys.validated


def test_element_image_inconsistent_with_object_image():
    j3 = build_cactus(3)
    actions = dict(j3.actions)
    spec = actions[(2, 0)]
    actions[(2, 0)] = GeneratorAction(spec.moves, objects={0: 0, 1: 1})
    tampered = QuandleSystem(j3.oposet, j3.factors, actions)
    with pytest.raises(SystemViolation) as exc:
        validate_system(tampered)
    assert exc.value.kind == "ActionIllDefined"


def test_finite_cyclic_action_must_respect_order():
    # the generator of Z_3 cannot swap two factors: its cube would be a swap
    from quandle.oposet import make_oposet
    op = make_oposet(["a", "b", "t"], [("a", "t"), ("b", "t")])
    actions = {(2, 0): GeneratorAction({0: (1, ScaleIso(1, 2)), 1: (0, ScaleIso(1, 2))})}
    sys = QuandleSystem(op, [Cyclic(2), Cyclic(2), Cyclic(3)], actions)
    with pytest.raises(SystemViolation) as exc:
        validate_system(sys)
    assert exc.value.kind == "ActionIllDefined"


def test_order_not_preserved():
    from quandle.oposet import make_oposet
    op = make_oposet(["a", "b", "c", "t"], [("a", "b"), ("a", "t"), ("b", "t"), ("c", "t")])
    z2 = ScaleIso(1, 2)
    actions = {(3, 0): GeneratorAction({1: (2, z2), 2: (1, z2)})}
    sys = QuandleSystem(op, [Cyclic(2)] * 4, actions)
    with pytest.raises(SystemViolation) as exc:
        validate_system(sys)
    assert exc.value.kind == "OrderNotPreserved"


def test_quandle_relation_failure():
    # b swaps a1, a2 and c swaps a2, a3 while fixing b, so c b c^-1 != b on the a's
    from quandle.oposet import make_oposet
    lower = ("a1", "a2", "a3")
    op = make_oposet(list(lower) + ["b", "c"],
                     [(x, "b") for x in lower] + [(x, "c") for x in lower + ("b",)])
    z2 = ScaleIso(1, 2)
    actions = {
        (3, 0): GeneratorAction({0: (1, z2), 1: (0, z2)}),
        (4, 0): GeneratorAction({1: (2, z2), 2: (1, z2)}),
    }
    sys = QuandleSystem(op, [Cyclic(2)] * 5, actions)
    with pytest.raises(SystemViolation) as exc:
        validate_system(sys)
    assert exc.value.kind == "QuandleRelationFails"


def _mutated_j4(seed):
    rng = random.Random(seed)
    j4 = build_cactus(4)
    keys = sorted(k for k in j4.actions if len(j4.below(k[0])) > 1)
    i, pos = rng.choice(keys)
    moves = dict(j4.generator_twist(i, pos).moves)
    j = rng.choice(sorted(moves))
    target, iso = moves[j]
    choices = [k for k in j4.below(i) if k != target]
    moves[j] = (rng.choice(choices), iso)
    actions = dict(j4.actions)
    actions[(i, pos)] = GeneratorAction(moves)
    return QuandleSystem(j4.oposet, j4.factors, actions)


@pytest.mark.parametrize("seed", range(100))
def test_mutating_one_action_entry_breaks_j4(seed):
    with pytest.raises(SystemViolation):
        validate_system(_mutated_j4(seed))


def test_holonomy_examples():
    for n in (3, 4):
        assert has_trivial_holonomy(build_cactus(n))
    gp = build_graph_product("abc", [("a", "b")], [2, 0, 3])
    assert has_trivial_holonomy(gp)
    assert not has_trivial_holonomy(dihedral_semidirect(3))
    assert ScaleIso(2, 3) in holonomy_group(dihedral_semidirect(3), 0)


def test_oriented_cactus_holonomy_depends_on_n():
    # n = 3: the two inversions picked up along s12 -> s23 -> s12 cancel
    assert has_trivial_holonomy(build_oriented_cactus(3))
    oc4 = build_oriented_cactus(4)
    assert not has_trivial_holonomy(oc4)
    assert ScaleIso(-1) in holonomy_group(oc4, oc4.oposet.index("s12"))


def test_stable_closure_examples():
    j3 = build_cactus(3)
    assert stable_closure(j3, {0, 2}) == {0, 1, 2}
    assert stable_closure(j3, {0, 1}) == {0, 1}
    gp = build_graph_product("abc", [], [2, 2, 2])
    assert stable_closure(gp, {1}) == {1}


def test_restrict_subsystem():
    j4 = build_cactus(4)
    names = j4.names
    sub = restrict_subsystem(j4, {names.index(x) for x in ("s12", "s23", "s13")})
    j3 = build_cactus(3)
    assert sub.names == j3.names
    assert all(sub.generator_twist(i, 0) == j3.generator_twist(i, 0) for i in range(3))
    assert restrict_subsystem(j4, range(j4.n)).names == j4.names
    assert restrict_subsystem(j4, set()).n == 0
    with pytest.raises(NotStable):
        restrict_subsystem(j4, {names.index("s12"), names.index("s13")})


def test_dotted_subgroup_examples():
    gp = build_graph_product("ab", [], [2, 2])
    assert dotted_subgroup(gp, 0).index == 1
    j3 = build_cactus(3)
    assert dotted_subgroup(j3, 2).index == 2
    oc = build_oriented_cactus(3)
    d = dotted_subgroup(oc, 2)
    assert d.index == 2 and 2 in d and 1 not in d


def test_normal_chain_over_z4():
    z4 = cyclic_table(4)
    sys = build_normal_chain_quandle(z4, [[0, 2]])
    assert sys.validated
    # Z_4 is abelian, so conjugation fixes everything
    assert all(holonomy_group(sys, i) == {ScaleIso(1)} for i in range(sys.n))


SYSTEMS = {
    "cactus-4": build_cactus(4),
    "oriented-cactus-4": build_oriented_cactus(4),
    "z3:z2": dihedral_semidirect(3),
}


@given(st.sampled_from(sorted(SYSTEMS)), st.data())
def test_action_is_functorial(name, data):
    sys = SYSTEMS[name]
    i = data.draw(st.sampled_from([k for k in range(sys.n) if sys.below(k)]))
    f = sys.factors[i]
    g1 = data.draw(st.integers(-4, 4)) if f.kind == "cyclic" else data.draw(st.sampled_from(f.elements()))
    g2 = data.draw(st.integers(-4, 4)) if f.kind == "cyclic" else data.draw(st.sampled_from(f.elements()))
    g1, g2 = f.canon(g1), f.canon(g2)
    j = data.draw(st.sampled_from(sys.below(i)))
    h = Letter(j, sys.factors[j].canon(data.draw(st.integers(1, 3))))
    both = f.mul(g1, g2)
    assert apply_action(sys, i, both, j) == apply_action(sys, i, g1, apply_action(sys, i, g2, j))
    assert apply_action(sys, i, both, h) == apply_action(sys, i, g1, apply_action(sys, i, g2, h))


@pytest.mark.parametrize("name", sorted(SYSTEMS) + ["builtin"])
def test_holonomy_is_a_group(name, builtins):
    systems = list(builtins.values()) if name == "builtin" else [SYSTEMS[name]]
    for sys in systems:
        for i in range(sys.n):
            hol = holonomy_group(sys, i)
            assert sys.factors[i].identity_iso() in hol
            for a in hol:
                assert a.inverse() in hol
                for b in hol:
                    assert a.after(b) in hol


@given(st.sampled_from(sorted(SYSTEMS)), st.data())
def test_stable_closure_is_a_closure(name, data):
    sys = SYSTEMS[name]
    s = data.draw(st.sets(st.integers(0, sys.n - 1)))
    t = s | data.draw(st.sets(st.integers(0, sys.n - 1)))
    cs = stable_closure(sys, s)
    assert s <= cs
    assert stable_closure(sys, cs) == cs
    assert cs <= stable_closure(sys, t)


def test_dotted_subgroups_correspond(builtins):
    systems = list(builtins.values()) + list(SYSTEMS.values())
    for sys in systems:
        for i in range(sys.n):
            di = dotted_subgroup(sys, i)
            for m, psi in reachable_isos(sys, i):
                dm = dotted_subgroup(sys, m)
                f = sys.factors[i]
                if f.kind == "cyclic":
                    sample = range(-12, 13) if not f.finite else f.elements()
                    image = {sys.factors[m].canon(psi(x)) for x in sample if x in di}
                    expected = {sys.factors[m].canon(y) for y in sample if y in dm}
                    assert image == expected
                else:
                    assert {psi(x) for x in di.elements} == dm.elements
