import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import L, word_strategy
from models import eval_affine, eval_dihedral, eval_z2_cubed, free_z2_images, j3_images
from quandle.constructions import (build_cactus, build_graph_product, dihedral_semidirect,
                                   free_product_z2, z2_cubed)
from quandle.groups import stable_closure
from quandle.rewrite import (FUSION, TWISTED_LEFT, CapExceeded, NotRankable, Ranking, are_equal,
                             braid_of, diaph_ball, diaphanous_type, enumerate_geodesics,
                             find_ranking, format_word, geodesic_word, inverse_word, is_ranked,
                             letters, linear, parabolic_membership, parse_word, rank_step,
                             ranked_normal_form, ranking_candidates, word_moves)

J3 = build_cactus(3)
J4 = build_cactus(4)
ZZ = build_graph_product("xy", [("x", "y")], [0, 0])


def w(sys, text):
    return parse_word(sys, text)


def test_braid_of():
    assert braid_of(J4, w(J4, "s12 s34")) == braid_of(J4, w(J4, "s34 s12"))
    assert braid_of(J4, w(J4, "s12 s13")) != braid_of(J4, w(J4, "s13 s12"))
    assert braid_of(J4, ()) == ()


def test_find_ranking():
    assert find_ranking(J3, braid_of(J3, w(J3, "s12 s13"))) == Ranking(0, 1, TWISTED_LEFT)
    assert find_ranking(J3, braid_of(J3, w(J3, "s12 s12"))).kind == FUSION
    assert find_ranking(J3, braid_of(J3, w(J3, "s13 s23"))) is None


def test_rank_step():
    b = rank_step(J3, braid_of(J3, w(J3, "s12 s13")))
    assert format_word(J3, b) == "s13 s23"
    assert rank_step(J3, braid_of(J3, w(J3, "s12 s12"))) == ()
    gp = build_graph_product("z", [], [0])
    assert linear(rank_step(gp, braid_of(gp, [L(0, 2), L(0, 3)]))) == (L(0, 5),)
    with pytest.raises(NotRankable):
        rank_step(J3, braid_of(J3, w(J3, "s13 s23")))


def test_ranked_normal_form_examples():
    assert format_word(J3, ranked_normal_form(J3, w(J3, "s12 s13"))) == "s13 s23"
    assert ranked_normal_form(J3, w(J3, "s13 s13")) == ()
    assert format_word(J3, ranked_normal_form(J3, w(J3, "s13 s12 s13"))) == "s23"


def test_are_equal_examples():
    assert are_equal(J4, w(J4, "s12 s34"), w(J4, "s34 s12"))
    assert not are_equal(J3, w(J3, "s12"), w(J3, "s23"))
    assert are_equal(J3, w(J3, "s12 s13"), w(J3, "s13 s23"))


def test_geodesic_word_examples():
    assert geodesic_word(J3, w(J3, "s13 s12 s13"))[1] == 1
    fp = free_product_z2()
    assert geodesic_word(fp, w(fp, "x y x y x y"))[1] == 6
    word, length = geodesic_word(ZZ, w(ZZ, "x y x^-1"))
    assert length == 1 and format_word(ZZ, word) == "y"


def _brute_reduce(sys, word):
    """Shortest word reachable by commutations and fusions, searched exhaustively."""
    seen = {word}
    queue = [word]
    best = len(word)
    while queue:
        cur = queue.pop()
        best = min(best, len(cur))
        nexts = []
        for x in range(len(cur) - 1):
            s, t = cur[x], cur[x + 1]
            if sys.perp[s[0]][t[0]]:
                nexts.append(cur[:x] + (t, s) + cur[x + 2:])
            if s[0] == t[0]:
                p = sys.mul(s, t)
                nexts.append(cur[:x] + (() if sys.is_identity(p) else (p,)) + cur[x + 2:])
        for n in nexts:
            if n not in seen:
                seen.add(n)
                queue.append(n)
    return best


def test_zz_reduction_matches_brute_force():
    rng = random.Random(5)
    gens = letters(ZZ, 2)
    for _ in range(200):
        word = tuple(rng.choice(gens) for _ in range(rng.randint(0, 6)))
        assert geodesic_word(ZZ, word)[1] == _brute_reduce(ZZ, word)


def test_enumerate_geodesics_examples():
    assert enumerate_geodesics(J3, w(J3, "s12")) == {w(J3, "s12")}
    assert enumerate_geodesics(J3, w(J3, "s12 s13")) == {w(J3, "s12 s13"), w(J3, "s13 s23")}
    assert enumerate_geodesics(J4, w(J4, "s12 s34")) == {w(J4, "s12 s34"), w(J4, "s34 s12")}
    with pytest.raises(CapExceeded):
        enumerate_geodesics(J4, w(J4, "s14 s23 s12 s34 s13"), cap=3)


def test_diaphanous_examples():
    for i in range(3):
        assert diaphanous_type(J3, (), i) == i
    assert diaphanous_type(J3, w(J3, "s13"), 0) == 1
    assert diaphanous_type(J3, w(J3, "s12"), 0) is None


def test_parabolic_membership_examples():
    assert parabolic_membership(J3, w(J3, "s13 s12 s13"), {1})
    assert not parabolic_membership(J3, w(J3, "s13"), {0, 1})
    rng = random.Random(0)
    for _ in range(20):
        word = tuple(rng.choice(letters(J3)) for _ in range(5))
        assert parabolic_membership(J3, word, {0, 1, 2})


def test_diaph_ball_examples():
    assert diaph_ball(J3, 0, 0) == {()}
    # x and y do not interact with each other in Z2*Z2, so only the empty word is (0,0)-diaphanous
    assert diaph_ball(free_product_z2(), 0, 3) == {()}
    # with w orthogonal to x, words in w alone are diaphanous for x
    gp = build_graph_product("xyw", [("x", "w")], [2, 2, 2])
    found = diaph_ball(gp, 0, 3)
    assert found == {(), braid_of(gp, [L(2)])}
    found = diaph_ball(J3, 0, 2)
    assert () in found
    for b in found:
        inv = ranked_normal_form(J3, inverse_word(J3, linear(b)))
        assert inv in found


def _orbit(sys, word):
    seen = {word}
    stack = [word]
    while stack:
        cur = stack.pop()
        for x in range(len(cur) - 1):
            if sys.perp[cur[x][0]][cur[x + 1][0]]:
                n = cur[:x] + (cur[x + 1], cur[x]) + cur[x + 2:]
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
    return seen


def _adjacent_moves(sys, word):
    out = set()
    for rep in _orbit(sys, word):
        for x in range(len(rep) - 1):
            a, b = rep[x], rep[x + 1]
            if a[0] == b[0]:
                p = sys.mul(a, b)
                mid = () if sys.is_identity(p) else (p,)
            elif sys.less[a[0]][b[0]]:
                mid = (b, sys.act(b, a))
            else:
                continue
            out.add(braid_of(sys, rep[:x] + mid + rep[x + 2:]))
    return out


@pytest.mark.parametrize("name", ["cactus-4", "oriented-cactus-3", "z3:z2", "s3-chain"])
def test_covering_pairs_match_orbit_enumeration(name, builtins):
    sys = builtins[name]
    rng = random.Random(11)
    gens = letters(sys, 2)
    for _ in range(150):
        word = linear(braid_of(sys, [rng.choice(gens) for _ in range(rng.randint(0, 6))]))
        braid = braid_of(sys, word)
        via_pairs = {rank_step(sys, braid, r) for r in ranking_candidates(sys, word)}
        assert via_pairs == _adjacent_moves(sys, word)


def _model(name):
    if name == "cactus-3":
        images = j3_images()
        return lambda word: eval_affine(images, word)
    if name == "z2*z2":
        images = free_z2_images()
        return lambda word: eval_affine(images, word)
    if name == "z3:z2":
        return lambda word: eval_dihedral(word, 3)
    if name == "z2^3":
        return eval_z2_cubed
    raise KeyError(name)


MODELLED = {"cactus-3": J3, "z2*z2": free_product_z2(), "z3:z2": dihedral_semidirect(3),
            "z2^3": z2_cubed()}


@pytest.mark.parametrize("name", sorted(MODELLED))
def test_normal_form_is_sound_in_faithful_model(name):
    sys = MODELLED[name]
    model = _model(name)
    rng = random.Random(3)
    gens = letters(sys)
    for _ in range(300):
        word = tuple(rng.choice(gens) for _ in range(rng.randint(0, 8)))
        nf = linear(ranked_normal_form(sys, word))
        assert model(word) == model(nf)
        for moved in word_moves(sys, word):
            assert model(moved) == model(word)


@pytest.mark.parametrize("name", sorted(MODELLED))
def test_word_problem_agrees_with_model(name):
    sys = MODELLED[name]
    model = _model(name)
    rng = random.Random(4)
    gens = letters(sys)
    for _ in range(300):
        word = tuple(rng.choice(gens) for _ in range(rng.randint(0, 8)))
        assert (ranked_normal_form(sys, word) == ()) == (model(word) == model(()))


@given(st.data())
def test_moves_preserve_equality(data):
    sys = build_cactus(4)
    word = data.draw(word_strategy(sys, 7))
    for moved in word_moves(sys, word):
        assert len(moved) == len(word)
        assert are_equal(sys, moved, word)


@given(st.data())
def test_normal_form_is_ranked_and_idempotent(data):
    sys = dihedral_semidirect(4)
    word = data.draw(word_strategy(sys, 8))
    nf = ranked_normal_form(sys, word)
    assert is_ranked(sys, nf)
    assert ranked_normal_form(sys, linear(nf)) == nf
    assert len(linear(nf)) <= len(word)


@given(st.data())
def test_inverse_cancels(data):
    sys = build_cactus(4)
    word = data.draw(word_strategy(sys, 8))
    assert ranked_normal_form(sys, word + inverse_word(sys, word)) == ()


def test_geodesics_are_pairwise_equal_and_minimal():
    rng = random.Random(8)
    gens = letters(J4)
    for _ in range(40):
        word = tuple(rng.choice(gens) for _ in range(6))
        found = enumerate_geodesics(J4, word)
        length = geodesic_word(J4, word)[1]
        assert all(len(g) == length and are_equal(J4, g, word) for g in found)


def test_parabolic_intersection_law_j3():
    sys = J3
    stable = [s for r in range(4) for s in map(set, itertools.combinations(range(3), r))
              if stable_closure(sys, s) == s]
    rng = random.Random(9)
    words = [tuple(rng.choice(letters(sys)) for _ in range(rng.randint(0, 5))) for _ in range(100)]
    for r, s in itertools.product(stable, repeat=2):
        for word in words:
            both = parabolic_membership(sys, word, r) and parabolic_membership(sys, word, s)
            assert both == parabolic_membership(sys, word, r & s)
