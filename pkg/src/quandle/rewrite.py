"""Words, braids and the ranked normal form.

A braid is a word up to commuting letters whose indices are orthogonal.  It
is stored in Foata form: a tuple of steps, each step a sorted tuple of
pairwise-orthogonal letters, each letter in the earliest step its
dependencies allow.

A braid is *rankable* when some representative has adjacent letters
``a ∈ G_i, b ∈ G_j`` with ``i == j`` (fusion: replace ``ab`` by the product)
or ``i < j`` (twisted left move: ``ab -> b (b∗a)``).  Adjacent in some
representative is the same as a covering pair of the dependence order of
the trace, which is what ``ranking_candidates`` computes.  Exhausting the
moves gives the unique ranked braid of an element.
"""

from __future__ import annotations

import random
import re
from collections import deque
from typing import NamedTuple

from .groups import Letter, QuandleSystem, stable_closure

FUSION = "fusion"
TWISTED_LEFT = "twisted_left"


class NotRankable(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


class Ranking(NamedTuple):
    p: int  # position of the earlier letter in the Foata linearization
    q: int
    kind: str


def _check_word(sys, word):
    out = []
    for s in word:
        s = Letter(*s)
        factor = sys.factors[s.index]
        if factor.canon(s.value) != s.value:
            s = Letter(s.index, factor.canon(s.value))
        if s.value == factor.identity:
            raise ValueError(f"identity letter in factor {sys.names[s.index]}")
        out.append(s)
    return out


def _foata(perp, word):
    levels = []
    steps = []
    for b, s in enumerate(word):
        row = perp[s[0]]
        lev = 0
        for a in range(b):
            if not row[word[a][0]] and levels[a] >= lev:
                lev = levels[a] + 1
        levels.append(lev)
        if lev == len(steps):
            steps.append([])
        steps[lev].append(s)
    return tuple(tuple(sorted(step)) for step in steps)


def braid_of(sys: QuandleSystem, word) -> tuple:
    """Canonical Foata form of the braid of ``word``."""
    return _foata(sys.perp, _check_word(sys, word))


def linear(braid) -> tuple:
    """The Foata linearization: steps concatenated."""
    return tuple(s for step in braid for s in step)


def _predecessors(perp, word):
    """Bitmask per position of all strictly earlier letters in the trace order."""
    below = []
    for b, s in enumerate(word):
        row = perp[s[0]]
        m = 0
        for a in range(b):
            if not row[word[a][0]]:
                m |= below[a] | (1 << a)
        below.append(m)
    return below


def ranking_candidates(sys: QuandleSystem, word) -> list[Ranking]:
    """All rankable covering pairs of ``word``, ordered by (q, p)."""
    perp, less = sys.perp, sys.less
    below = _predecessors(perp, word)
    out = []
    for b, mask in enumerate(below):
        if not mask:
            continue
        union = 0
        rest = mask
        while rest:
            low = rest & -rest
            union |= below[low.bit_length() - 1]
            rest ^= low
        covers = mask & ~union
        ib = word[b][0]
        while covers:
            low = covers & -covers
            a = low.bit_length() - 1
            covers ^= low
            ia = word[a][0]
            if ia == ib:
                out.append(Ranking(a, b, FUSION))
            elif less[ia][ib]:
                out.append(Ranking(a, b, TWISTED_LEFT))
    return out


def find_ranking(sys: QuandleSystem, braid, rng: random.Random | None = None) -> Ranking | None:
    """A ranking of the braid: the least ``(q, p)`` one, or a uniform random one given ``rng``."""
    found = ranking_candidates(sys, linear(braid))
    if not found:
        return None
    return rng.choice(found) if rng is not None else found[0]


def _apply(sys, word, ranking):
    """Bring the pair together in a representative and rewrite it; returns a word."""
    a, b, kind = ranking
    below = _predecessors(sys.perp, word)
    before, after = [], []
    for c in range(a + 1, b):
        (after if below[c] >> a & 1 else before).append(word[c])
    p, q = word[a], word[b]
    if kind == FUSION:
        prod = sys.mul(p, q)
        middle = [] if sys.is_identity(prod) else [prod]
    else:
        middle = [q, sys.act(q, p)]
    return list(word[:a]) + before + middle + after + list(word[b + 1:])


def rank_step(sys: QuandleSystem, braid, ranking: Ranking | None = None) -> tuple:
    word = linear(braid)
    if ranking is None:
        ranking = find_ranking(sys, braid)
    if ranking is None:
        raise NotRankable("braid is ranked")
    a, b, kind = ranking
    valid = ranking_candidates(sys, word)
    if ranking not in valid:
        raise NotRankable(f"no {kind} ranking at positions {(a, b)}")
    return _foata(sys.perp, _apply(sys, word, ranking))


def normalization_trace(sys: QuandleSystem, word, rng: random.Random | None = None) -> list:
    """Every braid visited by the normalization, starting with ``braid_of(word)``."""
    braid = braid_of(sys, word)
    trace = [braid]
    while True:
        found = ranking_candidates(sys, linear(braid))
        if not found:
            return trace
        step = rng.choice(found) if rng is not None else found[0]
        braid = _foata(sys.perp, _apply(sys, linear(braid), step))
        trace.append(braid)


def ranked_normal_form(sys: QuandleSystem, word, rng: random.Random | None = None) -> tuple:
    braid = braid_of(sys, word)
    perp = sys.perp
    while True:
        w = linear(braid)
        found = ranking_candidates(sys, w)
        if not found:
            return braid
        step = rng.choice(found) if rng is not None else found[0]
        braid = _foata(perp, _apply(sys, w, step))


def is_ranked(sys: QuandleSystem, braid) -> bool:
    return not ranking_candidates(sys, linear(braid))


def complexity(sys: QuandleSystem, braid) -> int:
    """Length plus the number of letter pairs whose indices increase from left to right."""
    word = linear(braid)
    less = sys.less
    up = sum(1 for x in range(len(word)) for y in range(x + 1, len(word))
             if less[word[x][0]][word[y][0]])
    return len(word) + up


def are_equal(sys: QuandleSystem, w1, w2) -> bool:
    return ranked_normal_form(sys, w1) == ranked_normal_form(sys, w2)


def inverse_word(sys: QuandleSystem, word) -> tuple:
    return tuple(sys.inv(Letter(*s)) for s in reversed(word))


def multiply(sys: QuandleSystem, *elements) -> tuple:
    """Ranked braid of the product of words or braids."""
    word = []
    for x in elements:
        if x and isinstance(x[0][0], tuple):
            x = linear(x)
        word.extend(x)
    return ranked_normal_form(sys, word)


def geodesic_word(sys: QuandleSystem, word) -> tuple[tuple, int]:
    w = linear(ranked_normal_form(sys, word))
    return w, len(w)


def word_moves(sys: QuandleSystem, word):
    """Words one orthogonal or twisted (left or right) commutation away."""
    perp, less = sys.perp, sys.less
    for x in range(len(word) - 1):
        s, t = word[x], word[x + 1]
        if perp[s[0]][t[0]]:
            pair = (t, s)
        elif less[s[0]][t[0]]:
            pair = (t, sys.act(t, s))
        elif less[t[0]][s[0]]:
            pair = (sys.act(sys.inv(s), t), s)
        else:
            continue
        yield word[:x] + pair + word[x + 2:]


def enumerate_geodesics(sys: QuandleSystem, word, cap: int = 10_000) -> set:
    start, length = geodesic_word(sys, word)
    if length > 10:
        raise ValueError("geodesic enumeration is limited to elements of length 10")
    seen = {start}
    queue = deque([start])
    while queue:
        for nxt in word_moves(sys, queue.popleft()):
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise CapExceeded(f"more than {cap} geodesic words")
                queue.append(nxt)
    return seen


def diaphanous_type(sys: QuandleSystem, word, i: int) -> int | None:
    """Final index ``j`` if ``word`` is ``(i, j)``-diaphanous, else None."""
    less, perp = sys.less, sys.perp
    j = i
    for s in word:
        k = s[0]
        if k == j:
            return None
        if less[j][k]:
            j = sys.act_index(s, j)
        elif not (less[k][j] or perp[k][j]):
            return None
    return j


def parabolic_membership(sys: QuandleSystem, word, subset) -> bool:
    closure = stable_closure(sys, subset)
    return all(s[0] in closure for s in linear(ranked_normal_form(sys, word)))


# --- enumeration ----------------------------------------------------------------------

def letters(sys: QuandleSystem, cap: int | None = None, indices=None) -> list[Letter]:
    """All non-identity letters; infinite cyclic factors contribute ``z^k`` for ``0 < |k| <= cap``."""
    out = []
    for i in (range(sys.n) if indices is None else sorted(indices)):
        factor = sys.factors[i]
        if factor.finite:
            out.extend(Letter(i, x) for x in factor.elements() if x != factor.identity)
        else:
            if cap is None:
                raise ValueError(f"factor {sys.names[i]} is infinite; an exponent cap is needed")
            out.extend(Letter(i, k) for k in range(-cap, cap + 1) if k)
    return out


def within_cap(sys: QuandleSystem, braid, cap: int | None) -> bool:
    if cap is None:
        return True
    return all(sys.factors[s[0]].finite or abs(s[1]) <= cap for step in braid for s in step)


class Explosion(RuntimeError):
    pass


def ball_elements(sys: QuandleSystem, radius: int, cap: int | None = None,
                  budget: int = 500_000) -> dict:
    """Ranked braids of length at most ``radius`` (and exponents within ``cap``) mapped to length."""
    gens = letters(sys, cap)
    dist = {(): 0}
    frontier = [()]
    for d in range(1, radius + 1):
        nxt = []
        for braid in frontier:
            base = list(linear(braid))
            for s in gens:
                b = ranked_normal_form(sys, base + [s])
                if b not in dist and len(linear(b)) == d and within_cap(sys, b, cap):
                    dist[b] = d
                    nxt.append(b)
                    if len(dist) > budget:
                        raise Explosion(f"more than {budget} vertices")
        frontier = nxt
    return dist


def diaph_ball(sys: QuandleSystem, i: int, radius: int, cap: int | None = None) -> set:
    """All ``(i, i)``-diaphanous elements of length at most ``radius``."""
    if radius > 6:
        raise ValueError("radius is limited to 6")
    return {b for b in ball_elements(sys, radius, cap) if diaphanous_type(sys, linear(b), i) == i}


# --- text syntax ---------------------------------------------------------------------

_TOKEN = re.compile(r"^([^\s^:]+)(?:\^(-?\d+)|:(\S+))?$")


def format_letter(sys: QuandleSystem, s) -> str:
    name = sys.names[s[0]]
    factor = sys.factors[s[0]]
    if factor.kind == "table":
        return f"{name}:{factor.labels[s[1]]}"
    return name if s[1] == 1 else f"{name}^{s[1]}"


def format_word(sys: QuandleSystem, word) -> str:
    if word and isinstance(word[0][0], tuple):
        word = linear(word)
    return " ".join(format_letter(sys, s) for s in word) if word else "1"


def parse_letter(sys: QuandleSystem, token: str) -> Letter:
    m = _TOKEN.match(token)
    if not m:
        raise ValueError(f"bad letter {token!r}")
    name, exp, label = m.groups()
    i = sys.oposet.index(name)
    factor = sys.factors[i]
    if factor.kind == "table":
        if label is None:
            raise ValueError(f"table letter needs an element: {name}:<elt>")
        try:
            value = factor.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown element {label!r} of {name}") from None
    else:
        if label is not None:
            raise ValueError(f"cyclic letter takes an exponent: {name}^k")
        k = 1 if exp is None else int(exp)
        if k == 0:
            raise ValueError(f"zero exponent in {token!r}")
        value = factor.canon(k)
    if value == factor.identity:
        raise ValueError(f"{token!r} is the identity")
    return Letter(i, value)


def parse_word(sys: QuandleSystem, text: str) -> tuple:
    text = text.strip()
    if text == "" or (text == "1" and "1" not in sys.names):
        return ()
    return tuple(parse_letter(sys, tok) for tok in text.split())
