"""Finite orthogonal posets.

An oposet is a finite set with a strict partial order ``<`` and a symmetric,
irreflexive orthogonality relation ``⊥`` such that orthogonal elements are
incomparable and orthogonality descends along the order.  Indices are dense
integers ``0..n-1``; names live in a side table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence


class OposetError(ValueError):
    """Raised when a candidate violates the oposet axioms."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{v.kind}{v.witness}" for v in self.violations]
        super().__init__("invalid oposet: " + "; ".join(lines))


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple


@dataclass(frozen=True)
class Oposet:
    names: tuple[str, ...]
    less: tuple[tuple[bool, ...], ...]
    perp: tuple[tuple[bool, ...], ...]
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.names)})

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown index {name!r}") from None

    def lt(self, i: int, j: int) -> bool:
        return self.less[i][j]

    def le(self, i: int, j: int) -> bool:
        return i == j or self.less[i][j]

    def is_perp(self, i: int, j: int) -> bool:
        return self.perp[i][j]

    def comparable(self, i: int, j: int) -> bool:
        return i == j or self.less[i][j] or self.less[j][i]

    def below(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.less[j][i])

    def above(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.less[i][j])

    def less_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.less[i][j]]

    def perp_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.perp[i][j]]

    def subposet(self, keep: Sequence[int]) -> "Oposet":
        keep = list(keep)
        return Oposet(
            tuple(self.names[i] for i in keep),
            tuple(tuple(self.less[i][j] for j in keep) for i in keep),
            tuple(tuple(self.perp[i][j] for j in keep) for i in keep),
        )


def _tables(n, less_pairs, perp_pairs):
    less = [[False] * n for _ in range(n)]
    perp = [[False] * n for _ in range(n)]
    for i, j in less_pairs:
        less[i][j] = True
    for i, j in perp_pairs:
        perp[i][j] = True
    return less, perp


def oposet_violations(less, perp) -> list[Violation]:
    """Every axiom failure of the given tables, each with a witness."""
    n = len(less)
    if any(len(row) != n for row in less) or len(perp) != n or any(len(row) != n for row in perp):
        return [Violation("NotSquare", (n,))]
    found = []
    for i in range(n):
        if less[i][i]:
            found.append(Violation("NotIrreflexive", (i,)))
        if perp[i][i]:
            found.append(Violation("PerpNotIrreflexive", (i,)))
    for i, j, k in product(range(n), repeat=3):
        if less[i][j] and less[j][k] and not less[i][k]:
            found.append(Violation("NonTransitive", (i, j, k)))
    for i, j in product(range(n), repeat=2):
        if perp[i][j] and not perp[j][i]:
            found.append(Violation("PerpNotSymmetric", (i, j)))
        if perp[i][j] and (less[i][j] or less[j][i]) and i < j:
            found.append(Violation("ComparableOrthogonal", (i, j)))
    for i, j, k in product(range(n), repeat=3):
        # i <= j and j ⊥ k forces i ⊥ k; the i == j case is vacuous
        if less[i][j] and perp[j][k] and not perp[i][k]:
            found.append(Violation("DownwardPerpFails", (i, j, k)))
    return found


def validate_oposet(names, less, perp) -> Oposet:
    """Check the axioms on boolean tables and return the frozen oposet."""
    names = tuple(names)
    if len(set(names)) != len(names):
        raise OposetError([Violation("DuplicateName", tuple(names))])
    if len(less) != len(names):
        raise OposetError([Violation("NotSquare", (len(names), len(less)))])
    found = oposet_violations(less, perp)
    if found:
        raise OposetError(found)
    return Oposet(names, tuple(tuple(bool(x) for x in row) for row in less),
                  tuple(tuple(bool(x) for x in row) for row in perp))


def make_oposet(names: Sequence[str], less_pairs: Iterable = (), perp_pairs: Iterable = (),
                close: bool = False) -> Oposet:
    """Build from pairs of names (or integer indices).

    ``close=True`` takes the transitive closure of ``less_pairs`` and the
    downward closure of ``perp_pairs`` before validating.
    """
    names = list(names)
    pos = {name: i for i, name in enumerate(names)}

    def idx(x):
        return x if isinstance(x, int) else pos[x]

    less_pairs = [(idx(a), idx(b)) for a, b in less_pairs]
    perp_pairs = [(idx(a), idx(b)) for a, b in perp_pairs]
    perp_pairs += [(b, a) for a, b in perp_pairs]
    n = len(names)
    less, perp = _tables(n, less_pairs, perp_pairs)
    if close:
        for k in range(n):
            for i in range(n):
                if less[i][k]:
                    for j in range(n):
                        if less[k][j]:
                            less[i][j] = True
        changed = True
        while changed:
            changed = False
            for i, j, k in product(range(n), repeat=3):
                if less[i][j] and perp[j][k] and not perp[i][k]:
                    perp[i][k] = perp[k][i] = True
                    changed = True
    return validate_oposet(names, less, perp)


def minimal_elements(p: Oposet) -> frozenset[int]:
    return frozenset(i for i in range(p.n) if not any(p.less[j][i] for j in range(p.n)))


def combine(p: Oposet, q: Oposet, mode: str = "oproduct") -> Oposet:
    """Disjoint union; cross pairs are unrelated (oproduct) or orthogonal (oposum)."""
    if mode not in ("oproduct", "oposum"):
        raise ValueError(f"unknown mode {mode!r}")
    names = list(p.names) + list(q.names)
    if len(set(names)) != len(names):
        # keep names unique by tagging the right-hand copy
        names = list(p.names) + [f"{name}'" for name in q.names]
    n, m = p.n, q.n
    cross = mode == "oposum"
    less = [[False] * (n + m) for _ in range(n + m)]
    perp = [[False] * (n + m) for _ in range(n + m)]
    for i, j in product(range(n), repeat=2):
        less[i][j], perp[i][j] = p.less[i][j], p.perp[i][j]
    for i, j in product(range(m), repeat=2):
        less[n + i][n + j], perp[n + i][n + j] = q.less[i][j], q.perp[i][j]
    for i, j in product(range(n), range(m)):
        perp[i][n + j] = perp[n + j][i] = cross
    return validate_oposet(names, less, perp)


MAX_ATOM_INDICES = 16


def atoms(p: Oposet) -> list[frozenset[int]]:
    """All nonempty subsets whose elements are pairwise non-orthogonal."""
    if p.n > MAX_ATOM_INDICES:
        raise ValueError(f"atom enumeration is limited to {MAX_ATOM_INDICES} indices")
    found = []

    def extend(current, start):
        for k in range(start, p.n):
            if all(not p.perp[k][j] for j in current):
                nxt = current + [k]
                found.append(frozenset(nxt))
                extend(nxt, k + 1)

    extend([], 0)
    return found


def atoms_realization(p: Oposet) -> dict[int, frozenset[frozenset[int]]]:
    """Realize the oposet as a family of sets: inclusion mirrors ``<=``,
    disjointness mirrors ``⊥``."""
    all_atoms = atoms(p)
    return {
        i: frozenset(a for a in all_atoms if any(p.le(j, i) for j in a))
        for i in range(p.n)
    }


def is_antichain(p: Oposet, subset) -> bool:
    return not any(p.less[i][j] for i, j in product(subset, repeat=2))


def max_comparable_family(p: Oposet) -> int:
    """Largest set of indices that are pairwise ``<``-comparable or orthogonal."""
    related = [[i != j and (p.less[i][j] or p.less[j][i] or p.perp[i][j]) for j in range(p.n)]
               for i in range(p.n)]
    best = 0

    def grow(chosen, candidates):
        nonlocal best
        best = max(best, len(chosen))
        if len(chosen) + len(candidates) <= best:
            return
        for pos, k in enumerate(candidates):
            grow(chosen + [k], [c for c in candidates[pos + 1:] if related[k][c]])

    grow([], list(range(p.n)))
    return best
