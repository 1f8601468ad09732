"""Factor groups, twisting actions and quandle systems.

A quandle system attaches a group ``G_i`` to every index of an oposet and,
for every ``i``, an action of ``G_i`` on the groupoid of factors indexed
strictly below ``i``.  Actions are given on generators only; validation
proves that they extend to genuine actions satisfying the quandle relation.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .oposet import Oposet


class QuandleError(Exception):
    pass


class MixedFactors(QuandleError):
    pass


class NotBelow(QuandleError):
    pass


class NotStable(QuandleError):
    pass


class SystemViolation(QuandleError):
    """A failed validation check.

    ``kind`` is one of ActionIllDefined, OrderNotPreserved, PerpNotPreserved,
    QuandleRelationFails; ``witness`` names the indices or letters involved.
    """

    def __init__(self, kind: str, witness: tuple, detail: str = ""):
        self.kind = kind
        self.witness = witness
        self.detail = detail
        super().__init__(f"{kind}{witness}" + (f": {detail}" if detail else ""))


class Letter(NamedTuple):
    """An element of the factor ``G_index``; as a word letter it is never the identity."""
    index: int
    value: int


GroupElement = Letter


# --- factor groups -----------------------------------------------------------

class Cyclic:
    """Cyclic group of the given order, written additively on exponents.

    ``order=None`` (or 0) is the infinite cyclic group.
    """

    kind = "cyclic"
    identity = 0
    generators = (1,)

    def __init__(self, order=None):
        if order is not None and order < 0:
            raise ValueError("cyclic order must be positive or None")
        self.order = order or None

    @property
    def finite(self):
        return self.order is not None

    def __eq__(self, other):
        return isinstance(other, Cyclic) and other.order == self.order

    def __hash__(self):
        return hash(("cyclic", self.order))

    def __repr__(self):
        return f"Cyclic({self.order if self.order else 'inf'})"

    def canon(self, x: int) -> int:
        return x % self.order if self.order else x

    def mul(self, x, y):
        return self.canon(x + y)

    def inv(self, x):
        return self.canon(-x)

    def power(self, x, k):
        return self.canon(x * k)

    def elements(self):
        if not self.order:
            raise ValueError("infinite cyclic group has no element list")
        return range(self.order)

    def element_order(self, x):
        if not self.order:
            return 1 if x == 0 else None
        return self.order // math.gcd(x, self.order)

    def identity_iso(self):
        return ScaleIso(1, self.order or 0)

    def automorphisms(self):
        if not self.order:
            return [ScaleIso(1, 0), ScaleIso(-1, 0)]
        return [ScaleIso(e, self.order) for e in range(1, self.order + 1)
                if math.gcd(e, self.order) == 1 or self.order == 1]

    def check_iso(self, iso, target) -> str | None:
        """Reason why ``iso`` is not an isomorphism onto ``target``, or None."""
        if not isinstance(target, Cyclic) or target.order != self.order:
            return f"{self!r} is not isomorphic to {target!r}"
        if not isinstance(iso, ScaleIso) or iso.modulus != (self.order or 0):
            return "cyclic factors need an exponent multiplier"
        if self.order is None and iso.scale not in (1, -1):
            return f"multiplier {iso.scale} is not a unit of Z"
        if self.order and math.gcd(iso.scale, self.order) != 1 and self.order != 1:
            return f"multiplier {iso.scale} is not a unit mod {self.order}"
        return None


class TableGroup:
    """Finite group given by a multiplication table on ids ``0..size-1``."""

    kind = "table"
    finite = True
    ASSOCIATIVITY_LIMIT = 64

    def __init__(self, table, generators=None, labels=None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        size = len(self.table)
        if size == 0 or any(len(row) != size for row in self.table):
            raise ValueError("multiplication table must be square and nonempty")
        if any(not 0 <= x < size for row in self.table for x in row):
            raise ValueError("table entries out of range")
        ids = [e for e in range(size)
               if all(self.table[e][x] == x == self.table[x][e] for x in range(size))]
        if len(ids) != 1:
            raise ValueError("table has no two-sided identity")
        self.identity = ids[0]
        inverse = []
        for x in range(size):
            found = [y for y in range(size) if self.table[x][y] == self.identity]
            if len(found) != 1 or self.table[found[0]][x] != self.identity:
                raise ValueError(f"element {x} has no inverse")
            inverse.append(found[0])
        self.inverse = tuple(inverse)
        self.associativity_checked = size <= self.ASSOCIATIVITY_LIMIT
        if self.associativity_checked:
            t = self.table
            for x in range(size):
                for y in range(size):
                    xy = t[x][y]
                    for z in range(size):
                        if t[xy][z] != t[x][t[y][z]]:
                            raise ValueError(f"table not associative at {(x, y, z)}")
        self.labels = tuple(labels) if labels else tuple(str(x) for x in range(size))
        if len(self.labels) != size or len(set(self.labels)) != size:
            raise ValueError("labels must be distinct, one per element")
        if generators is None:
            generators = self._greedy_generators()
        self.generators = tuple(generators)
        if self.closure(self.generators) != frozenset(range(size)):
            raise ValueError("generators do not generate the table group")

    @property
    def order(self):
        return len(self.table)

    def __eq__(self, other):
        return isinstance(other, TableGroup) and other.table == self.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"TableGroup(order={self.order})"

    def canon(self, x):
        return x

    def mul(self, x, y):
        return self.table[x][y]

    def inv(self, x):
        return self.inverse[x]

    def power(self, x, k):
        if k < 0:
            x, k = self.inverse[x], -k
        out = self.identity
        for _ in range(k):
            out = self.table[out][x]
        return out

    def elements(self):
        return range(self.order)

    def element_order(self, x):
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k

    def closure(self, gens):
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    def _greedy_generators(self):
        gens, span = [], frozenset([self.identity])
        for x in range(self.order):
            if x not in span:
                gens.append(x)
                span = self.closure(gens)
        return gens

    def identity_iso(self):
        return TableIso(tuple(range(self.order)))

    def check_iso(self, iso, target) -> str | None:
        if not isinstance(target, TableGroup) or target.order != self.order:
            return f"{self!r} is not isomorphic to {target!r}"
        if not isinstance(iso, TableIso) or sorted(iso.images) != list(range(self.order)):
            return "table factors need a bijection of element ids"
        f = iso.images
        for x in range(self.order):
            for y in range(self.order):
                if f[self.table[x][y]] != target.table[f[x]][f[y]]:
                    return f"bijection is not multiplicative at {(x, y)}"
        return None


@dataclass(frozen=True)
class ScaleIso:
    """Isomorphism between cyclic groups multiplying exponents by ``scale``."""
    scale: int
    modulus: int = 0

    def __post_init__(self):
        if self.modulus:
            object.__setattr__(self, "scale", self.scale % self.modulus)

    def __call__(self, x):
        y = self.scale * x
        return y % self.modulus if self.modulus else y

    def after(self, other: "ScaleIso") -> "ScaleIso":
        return ScaleIso(self.scale * other.scale, self.modulus)

    def inverse(self) -> "ScaleIso":
        if not self.modulus:
            return self
        return ScaleIso(pow(self.scale, -1, self.modulus), self.modulus)

    @property
    def is_identity(self):
        return self.scale == 1 or self.modulus == 1

    def signed(self) -> int:
        """The multiplier as the representative of least absolute value."""
        if self.modulus and self.scale > self.modulus // 2:
            return self.scale - self.modulus
        return self.scale

    def __str__(self):
        return f"exp*{self.signed()}"


@dataclass(frozen=True)
class TableIso:
    """Isomorphism between table groups as a list of element images."""
    images: tuple

    def __call__(self, x):
        return self.images[x]

    def after(self, other: "TableIso") -> "TableIso":
        return TableIso(tuple(self.images[y] for y in other.images))

    def inverse(self) -> "TableIso":
        inv = [0] * len(self.images)
        for x, y in enumerate(self.images):
            inv[y] = x
        return TableIso(tuple(inv))

    @property
    def is_identity(self):
        return all(x == y for x, y in enumerate(self.images))

    def __str__(self):
        return "perm: " + " ".join(map(str, self.images))


def factor_multiply(x: Letter, y: Letter, factors) -> Letter:
    if x.index != y.index:
        raise MixedFactors(f"cannot multiply elements of factors {x.index} and {y.index}")
    return Letter(x.index, factors[x.index].mul(x.value, y.value))


# --- actions -----------------------------------------------------------------

class Twist:
    """Action of one element of ``G_i`` on the factors below ``i``.

    ``moves[j] = (k, iso)`` sends index ``j`` to ``k`` and ``G_j`` to ``G_k``
    through ``iso``.
    """

    __slots__ = ("moves", "key")

    def __init__(self, moves):
        self.moves = moves
        self.key = tuple((j,) + moves[j] for j in sorted(moves))

    def __eq__(self, other):
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def after(self, other: "Twist") -> "Twist":
        """The composite ``self ∘ other``."""
        out = {}
        for j, (k, iso) in other.moves.items():
            m, iso2 = self.moves[k]
            out[j] = (m, iso2.after(iso))
        return Twist(out)

    @property
    def is_identity(self):
        return all(j == k and iso.is_identity for j, (k, iso) in self.moves.items())


@dataclass
class GeneratorAction:
    """How one generator of ``G_i`` moves the factors below ``i``.

    ``moves`` maps ``j`` to ``(target, iso)``; entries left out are fixed
    with the identity isomorphism.  ``objects`` optionally states the object
    permutation separately; it must agree with the targets in ``moves``.
    """
    moves: dict = field(default_factory=dict)
    objects: dict | None = None


def identity_twist(oposet: Oposet, factors, i: int) -> Twist:
    return Twist({j: (j, factors[j].identity_iso()) for j in oposet.below(i)})


class QuandleSystem:
    """Oposet, factor groups and generator actions.

    ``actions`` maps ``(i, generator position)`` to a ``GeneratorAction``.
    Call ``validate_system`` before rewriting with it.
    """

    PERIOD_LIMIT = 100_000

    def __init__(self, oposet: Oposet, factors, actions=None, name: str = "", provenance: str = ""):
        if len(factors) != oposet.n:
            raise ValueError(f"{oposet.n} indices but {len(factors)} factors")
        self.oposet = oposet
        self.factors = tuple(factors)
        self.actions = dict(actions or {})
        self.name = name
        self.provenance = provenance
        self.validated = False
        self.perp = oposet.perp
        self.less = oposet.less
        self._below = [oposet.below(i) for i in range(oposet.n)]
        self._above = [oposet.above(i) for i in range(oposet.n)]
        self._twists = {}
        self._periods = {}

    def __repr__(self):
        return f"QuandleSystem({self.name or 'unnamed'}, n={self.n})"

    @property
    def n(self):
        return self.oposet.n

    @property
    def names(self):
        return self.oposet.names

    def below(self, i):
        return self._below[i]

    def above(self, i):
        return self._above[i]

    # generator twists as declared, identity where unspecified
    def generator_twist(self, i: int, pos: int) -> Twist:
        moves = {j: (j, self.factors[j].identity_iso()) for j in self._below[i]}
        spec = self.actions.get((i, pos))
        if spec is not None:
            moves.update(spec.moves)
        return Twist(moves)

    def _powers(self, i):
        """Twists of ``z^0, z^1, ...`` up to the period of the generator twist."""
        powers = self._periods.get(i)
        if powers is None:
            gen = self.generator_twist(i, 0)
            cur = identity_twist(self.oposet, self.factors, i)
            powers = [cur]
            cur = gen.after(cur)
            while not cur.is_identity:
                powers.append(cur)
                if len(powers) > self.PERIOD_LIMIT:
                    raise SystemViolation("ActionIllDefined", (i,), "generator action has no finite period")
                cur = gen.after(cur)
            order = self.factors[i].order
            if order and order % len(powers):
                raise SystemViolation("ActionIllDefined", (i,), f"z^{order} does not act trivially")
            self._periods[i] = powers
        return powers

    def _table_twists(self, i):
        """Element twists of a table factor, built along its Cayley graph.

        Raises ActionIllDefined if two paths to an element disagree, i.e.
        some relation of the factor acts nontrivially.
        """
        factor = self.factors[i]
        gens = [self.generator_twist(i, p) for p in range(len(factor.generators))]
        twists = {factor.identity: identity_twist(self.oposet, self.factors, i)}
        queue = deque([factor.identity])
        while queue:
            x = queue.popleft()
            for g, gt in zip(factor.generators, gens):
                y = factor.mul(x, g)
                t = twists[x].after(gt)
                if y not in twists:
                    twists[y] = t
                    queue.append(y)
                elif twists[y] != t:
                    raise SystemViolation("ActionIllDefined", (i, x, g),
                                          "a relation of the factor acts nontrivially")
        return twists

    def twist(self, i: int, x: int) -> Twist:
        key = (i, x)
        t = self._twists.get(key)
        if t is None:
            factor = self.factors[i]
            if factor.kind == "cyclic":
                powers = self._powers(i)
                t = powers[x % len(powers)]
            else:
                for y, ty in self._table_twists(i).items():
                    self._twists[(i, y)] = ty
                t = self._twists[key]
            self._twists[key] = t
        return t

    def period(self, i: int) -> int:
        """Order of the image of a cyclic factor in the action; its kernel is generated by z^period."""
        return len(self._powers(i))

    def act(self, b: Letter, a: Letter) -> Letter:
        """``b ∗ a`` for ``a`` in a factor strictly below ``b``'s."""
        k, iso = self.twist(b[0], b[1]).moves[a[0]]
        return Letter(k, iso(a[1]))

    def act_index(self, b: Letter, j: int) -> int:
        return self.twist(b[0], b[1]).moves[j][0]

    def mul(self, a: Letter, b: Letter) -> Letter:
        return factor_multiply(a, b, self.factors)

    def inv(self, a: Letter) -> Letter:
        return Letter(a[0], self.factors[a[0]].inv(a[1]))

    def is_identity(self, a: Letter) -> bool:
        return a[1] == self.factors[a[0]].identity

    def generator_letters(self, i: int):
        return [Letter(i, g) for g in self.factors[i].generators]


def apply_action(sys: QuandleSystem, i: int, g: int, target):
    """``g ∗ target`` where ``g ∈ G_i`` and the target is an index or a Letter below ``i``."""
    j = target if isinstance(target, int) else target[0]
    if not sys.less[j][i]:
        raise NotBelow(f"index {j} is not below {i}")
    if isinstance(target, int):
        return sys.act_index(Letter(i, g), j)
    return sys.act(Letter(i, g), target)


# --- validation ----------------------------------------------------------------

def _check_structure(sys: QuandleSystem):
    op, factors = sys.oposet, sys.factors
    for (i, pos), spec in sys.actions.items():
        if not 0 <= i < op.n or not 0 <= pos < len(factors[i].generators):
            raise SystemViolation("ActionIllDefined", (i, pos), "no such generator")
        below = set(op.below(i))
        for j, (k, iso) in spec.moves.items():
            if j not in below or k not in below:
                raise SystemViolation("ActionIllDefined", (i, j, k), "moves must stay strictly below i")
            why = factors[j].check_iso(iso, factors[k])
            if why:
                raise SystemViolation("ActionIllDefined", (i, j, k), why)
        if spec.objects is not None:
            for j in below:
                obj = spec.objects.get(j, j)
                elt = spec.moves.get(j, (j, None))[0]
                if obj != elt:
                    raise SystemViolation("ActionIllDefined", (i, j, obj),
                                          f"object image {obj} but elements land in factor {elt}")
        image = sorted(sys.generator_twist(i, pos).moves[j][0] for j in below)
        if image != sorted(below):
            raise SystemViolation("ActionIllDefined", (i, pos), "not a permutation of the indices below")


def _check_order_and_perp(sys: QuandleSystem):
    less, perp = sys.less, sys.perp
    for i in range(sys.n):
        below = sys.below(i)
        for pos in range(len(sys.factors[i].generators)):
            moves = sys.generator_twist(i, pos).moves
            for j in below:
                for k in below:
                    jj, kk = moves[j][0], moves[k][0]
                    if less[j][k] and not less[jj][kk]:
                        raise SystemViolation("OrderNotPreserved", (i, j, k))
                    if perp[j][k] and not perp[jj][kk]:
                        raise SystemViolation("PerpNotPreserved", (i, j, k))


def _check_quandle_relation(sys: QuandleSystem):
    # On generators c of G_k, b of G_j and a of G_i (i < j < k) plus objects i:
    # both sides of c*(b*a) = (c*b)*(c*a) are multiplicative in each of a, b, c
    # (c permutes the factors below k, and b' = c*b again lies below k), so
    # generator triples cover all elements.
    for k in range(sys.n):
        for c in sys.generator_letters(k):
            for j in sys.below(k):
                for b in sys.generator_letters(j):
                    cb = sys.act(c, b)
                    for i in sys.below(j):
                        lhs = sys.act_index(c, sys.act_index(b, i))
                        rhs = sys.act_index(cb, sys.act_index(c, i))
                        if lhs != rhs:
                            raise SystemViolation("QuandleRelationFails", (k, j, i),
                                                  f"objects: {lhs} != {rhs}")
                        for a in sys.generator_letters(i):
                            lhs = sys.act(c, sys.act(b, a))
                            rhs = sys.act(cb, sys.act(c, a))
                            if lhs != rhs:
                                raise SystemViolation("QuandleRelationFails", (c, b, a),
                                                      f"elements: {lhs} != {rhs}")


def validate_system(sys: QuandleSystem) -> QuandleSystem:
    """Run every check; returns the same system marked validated or raises SystemViolation."""
    if sys.validated:
        return sys
    sys._twists.clear()
    sys._periods.clear()
    _check_structure(sys)
    for i in range(sys.n):
        factor = sys.factors[i]
        if factor.kind == "cyclic":
            sys.twist(i, 1)
        else:
            sys.twist(i, factor.identity)
    _check_order_and_perp(sys)
    _check_quandle_relation(sys)
    sys.validated = True
    return sys


def system_violation(sys: QuandleSystem) -> SystemViolation | None:
    try:
        validate_system(sys)
    except SystemViolation as exc:
        return exc
    return None


# --- holonomy, closures, subsystems ----------------------------------------------

def reachable_isos(sys: QuandleSystem, i: int) -> set:
    """All states ``(m, ψ)`` with ``ψ: G_i → G_m`` reachable from ``(i, id)``."""
    start = (i, sys.factors[i].identity_iso())
    seen = {start}
    queue = deque([start])
    while queue:
        m, psi = queue.popleft()
        for k in sys.above(m):
            for g in sys.factors[k].generators:
                target, phi = sys.twist(k, g).moves[m]
                state = (target, phi.after(psi))
                if state not in seen:
                    seen.add(state)
                    queue.append(state)
    return seen


def holonomy_group(sys: QuandleSystem, i: int) -> frozenset:
    return frozenset(psi for m, psi in reachable_isos(sys, i) if m == i)


def has_trivial_holonomy(sys: QuandleSystem) -> bool:
    return all(all(psi.is_identity for psi in holonomy_group(sys, i)) for i in range(sys.n))


def stable_closure(sys: QuandleSystem, subset) -> frozenset:
    closed = set(subset)
    changed = True
    while changed:
        changed = False
        for j in list(closed):
            for i in sys.below(j):
                if i not in closed:
                    continue
                for g in sys.factors[j].generators:
                    k = sys.twist(j, g).moves[i][0]
                    if k not in closed:
                        closed.add(k)
                        changed = True
    return frozenset(closed)


def is_stable(sys: QuandleSystem, subset) -> bool:
    return stable_closure(sys, subset) == frozenset(subset)


def restrict_subsystem(sys: QuandleSystem, subset) -> QuandleSystem:
    subset = frozenset(subset)
    if not is_stable(sys, subset):
        missing = sorted(stable_closure(sys, subset) - subset)
        raise NotStable(f"not stable; closure adds {[sys.names[k] for k in missing]}")
    keep = sorted(subset)
    new = {old: pos for pos, old in enumerate(keep)}
    actions = {}
    for (i, pos), spec in sys.actions.items():
        if i not in subset:
            continue
        moves = {new[j]: (new[k], iso) for j, (k, iso) in spec.moves.items() if j in subset}
        actions[(new[i], pos)] = GeneratorAction(moves)
    sub = QuandleSystem(sys.oposet.subposet(keep), [sys.factors[i] for i in keep], actions,
                        name=f"{sys.name}|{len(keep)}", provenance=sys.provenance)
    return validate_system(sub)


# --- dotted subgroups ---------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a factor: ``<z^step>`` for cyclic factors, an element set for tables."""
    factor: int
    index: int
    step: int | None = None
    elements: frozenset | None = None

    def __contains__(self, x):
        if self.step is not None:
            return x % self.step == 0
        return x in self.elements


def kernel(sys: QuandleSystem, j: int) -> Subgroup:
    """Kernel of ``G_j`` acting on the factors below ``j``."""
    factor = sys.factors[j]
    if factor.kind == "cyclic":
        step = sys.period(j)
        return Subgroup(j, step, step=step)
    members = frozenset(x for x in factor.elements() if sys.twist(j, x).is_identity)
    return Subgroup(j, factor.order // len(members), elements=members)


def dotted_subgroup(sys: QuandleSystem, i: int) -> Subgroup:
    """Intersection of the pulled-back kernels over all isomorphisms reachable from ``G_i``.

    Kernels always have finite index here: the image of a factor in the
    action is a subgroup of a finite group of twists.
    """
    factor = sys.factors[i]
    states = reachable_isos(sys, i)
    if factor.kind == "cyclic":
        # subgroups of a cyclic group are characteristic, so pulling back is a no-op
        step = 1
        for m, _ in states:
            step = math.lcm(step, kernel(sys, m).step)
        return Subgroup(i, step, step=step)
    members = set(factor.elements())
    for m, psi in states:
        k = kernel(sys, m)
        members = {x for x in members if psi(x) in k}
    members = frozenset(members)
    return Subgroup(i, factor.order // len(members), elements=members)
