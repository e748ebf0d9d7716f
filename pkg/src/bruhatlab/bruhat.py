"""Bruhat order: comparison, intervals, quotient restriction, coset slices.

Two independent comparison routes are kept: a one-line-notation dominance
test for the symmetric-group backend (fast path) and the lifting-property
recursion for every backend (also the cross-check oracle).

Intervals are materialized eagerly: element set, cover relation, and the
order relation as bitmasks derived from the covers by transitive closure,
so poset-level operations never touch group arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .coxeter import CoxeterError, CoxeterSystem, Element, PermutationBackend


class IntervalSizeError(CoxeterError):
    """An interval exceeded the configured size cap."""


def _same_system(u: Element, v: Element) -> CoxeterSystem:
    if u.system is not v.system:
        raise CoxeterError("elements belong to different systems")
    return u.system


# ---------------------------------------------------------------------------
# Comparison


def bruhat_leq(u: Element, v: Element) -> bool:
    """Whether u <= v in (strong) Bruhat order."""
    sys = _same_system(u, v)
    if isinstance(sys.backend, PermutationBackend):
        return _leq_dominance(u.data, v.data)
    return bruhat_leq_lifting(u, v)


def _leq_dominance(u: tuple[int, ...], v: tuple[int, ...]) -> bool:
    # One-line dominance: each sorted prefix of u is entrywise <= that of v.
    if u == v:
        return True
    n = len(u)
    pu: list[int] = []
    pv: list[int] = []
    for k in range(n - 1):
        pu.append(u[k])
        pu.sort()
        pv.append(v[k])
        pv.sort()
        for a, b in zip(pu, pv):
            if a > b:
                return False
    return True


def bruhat_leq_lifting(u: Element, v: Element) -> bool:
    """Lifting-property recursion; works on every backend, memoized."""
    sys = _same_system(u, v)
    cache = sys._caches.setdefault("bruhat_leq", {})

    def rec(a: Element, b: Element) -> bool:
        la, lb = a.length, b.length
        if la == 0:
            return True
        if la > lb:
            return False
        if la == lb:
            return a == b
        key = (a.data, b.data)
        hit = cache.get(key)
        if hit is not None:
            return hit
        s = min(b.left_descents())
        sb = sys.mul_gen(b, s, "left")
        if s in a.left_descents():
            out = rec(sys.mul_gen(a, s, "left"), sb)
        else:
            out = rec(a, sb)
        cache[key] = out
        return out

    return rec(u, v)


# ---------------------------------------------------------------------------
# Covers and interval enumeration


def covers_down(v: Element) -> list[Element]:
    """All y covered by v (l(y) = l(v) - 1 and y <= v), i.e. y = v t for a reflection."""
    sys = v.system
    cache = sys._caches.setdefault("covers_down", {})
    hit = cache.get(v.data)
    if hit is not None:
        return hit
    lv = v.length
    out = []
    for t in _reflections_for(sys, 2 * lv - 1):
        y = sys.mul(v, t)
        if y.length == lv - 1:
            out.append(y)
    out.sort(key=lambda y: y.data)
    cache[v.data] = out
    return out


def _reflections_for(sys: CoxeterSystem, max_length: int) -> list[Element]:
    if sys.is_finite:
        return sys.reflections()
    return sys.reflections_up_to(max(max_length, 1))


def lower_interval_elements(v: Element) -> list[Element]:
    """The elements of [e, v], by downward cover closure from v."""
    sys = v.system
    cache = sys._caches.setdefault("lower_interval", {})
    hit = cache.get(v.data)
    if hit is not None:
        return hit
    seen = {v.data: v}
    stack = [v]
    while stack:
        y = stack.pop()
        for z in covers_down(y):
            if z.data not in seen:
                seen[z.data] = z
                stack.append(z)
    out = sorted(seen.values(), key=lambda y: (y.length, y.data))
    cache[v.data] = out
    return out


def interval_elements(u: Element, v: Element) -> list[Element]:
    """The elements of [u, v], sorted by (length, canonical data)."""
    _same_system(u, v)
    return [y for y in lower_interval_elements(v) if bruhat_leq(u, y)]


# ---------------------------------------------------------------------------
# Materialized intervals


@dataclass(frozen=True)
class BruhatInterval:
    """The closed interval [u, v] as a finite graded poset.

    ``elements`` is sorted by (length, data); ``up_masks[i]`` is the bitmask
    of indices j with elements[i] <= elements[j], computed from the cover
    relation alone.  ``bruhat_edges`` is populated on request with triples
    (y, y', t) where y' = y t for a reflection t and l(y) < l(y').
    """

    system: CoxeterSystem
    bottom: Element
    top: Element
    elements: tuple[Element, ...]
    up_masks: tuple[int, ...]
    covers: tuple[tuple[Element, Element], ...]
    bruhat_edges: Optional[tuple[tuple[Element, Element, Element], ...]] = None

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def height(self) -> int:
        return self.top.length - self.bottom.length

    def index_of(self, y: Element) -> int:
        return self._index()[y.data]

    def _index(self) -> dict:
        idx = getattr(self, "_index_cache", None)
        if idx is None:
            idx = {y.data: i for i, y in enumerate(self.elements)}
            object.__setattr__(self, "_index_cache", idx)
        return idx

    def __contains__(self, y: Element) -> bool:
        return y.data in self._index()

    def leq(self, a: Element, b: Element) -> bool:
        """Order relation of the materialized poset (no group arithmetic)."""
        return bool(self.up_masks[self.index_of(a)] >> self.index_of(b) & 1)

    def rank_of(self, y: Element) -> int:
        return y.length - self.bottom.length

    def rank_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.height + 1)
        for y in self.elements:
            counts[self.rank_of(y)] += 1
        return tuple(counts)

    def atoms(self) -> tuple[Element, ...]:
        return tuple(y for y in self.elements if self.rank_of(y) == 1)

    def coatoms(self) -> tuple[Element, ...]:
        h = self.height
        return tuple(y for y in self.elements if self.rank_of(y) == h - 1)


def build_interval(
    u: Element,
    v: Element,
    with_bruhat_graph: bool = False,
    max_size: Optional[int] = None,
) -> BruhatInterval:
    """Materialize [u, v]; requires u <= v.

    ``max_size`` raises IntervalSizeError when the interval is larger than
    the cap (harness campaigns turn this into a reported skip).
    """
    sys = _same_system(u, v)
    if not bruhat_leq(u, v):
        raise CoxeterError("interval bottom is not below top in Bruhat order")
    elements = tuple(interval_elements(u, v))
    if max_size is not None and len(elements) > max_size:
        raise IntervalSizeError(
            f"interval has {len(elements)} elements, cap is {max_size}"
        )
    index = {y.data: i for i, y in enumerate(elements)}

    covers = []
    covers_idx: list[list[int]] = [[] for _ in elements]
    for i, y in enumerate(elements):
        for z in covers_down(y):
            j = index.get(z.data)
            if j is not None:
                covers.append((z, y))
                covers_idx[j].append(i)

    # transitive closure over covers, highest rank first
    up = [1 << i for i in range(len(elements))]
    for i in reversed(range(len(elements))):
        mask = up[i]
        for j in covers_idx[i]:
            mask |= up[j]
        up[i] = mask
    # elements are length-sorted, so covers_idx[i] only points to later
    # indices and a single reversed sweep closes the relation

    edges = None
    if with_bruhat_graph:
        edges = []
        lv = v.length
        for t in _reflections_for(sys, 2 * lv):
            for y in elements:
                yt = sys.mul(y, t)
                if yt.length > y.length and yt.data in index:
                    edges.append((y, yt, t))
        edges.sort(key=lambda e: (e[0].data, e[1].data))
        edges = tuple(edges)

    covers.sort(key=lambda c: (c[0].data, c[1].data))
    return BruhatInterval(
        system=sys,
        bottom=u,
        top=v,
        elements=elements,
        up_masks=tuple(up),
        covers=tuple(covers),
        bruhat_edges=edges,
    )


# ---------------------------------------------------------------------------
# Parabolic quotients inside intervals


@dataclass(frozen=True)
class QuotientRestriction:
    """The trace of the parabolic quotient W^J on an interval."""

    parent: BruhatInterval
    J: frozenset[int]
    members: frozenset[Element]


def quotient_restrict(interval: BruhatInterval, J: Iterable[int]) -> QuotientRestriction:
    """Members of the interval with no right descent in J."""
    sys = interval.system
    J = sys.check_subset(J)
    members = frozenset(
        y for y in interval.elements if sys.is_min_coset_rep(y, J)
    )
    return QuotientRestriction(parent=interval, J=J, members=members)


def atoms_in_quotient(u: Element, v: Element, J: Iterable[int]) -> frozenset[Element]:
    """The atoms of [u, v] lying in W^J; requires u, v in W^J with u <= v."""
    sys = _same_system(u, v)
    J = sys.check_subset(J)
    if not (sys.is_min_coset_rep(u, J) and sys.is_min_coset_rep(v, J)):
        raise CoxeterError("endpoints must be minimal coset representatives")
    if not bruhat_leq(u, v):
        raise CoxeterError("interval bottom is not below top in Bruhat order")
    lu = u.length
    return frozenset(
        a for a in interval_elements(u, v)
        if a.length == lu + 1 and sys.is_min_coset_rep(a, J)
    )


def non_dominated_set(
    interval: BruhatInterval, atoms: Iterable[Element]
) -> frozenset[Element]:
    """Members of the interval lying above none of the given atoms.

    Purely order-theoretic: only the interval's materialized relation is
    consulted, never group data.
    """
    atoms = list(atoms)
    atom_masks = [interval.up_masks[interval.index_of(a)] for a in atoms]
    out = []
    for i, y in enumerate(interval.elements):
        if all(not (mask >> i & 1) for mask in atom_masks):
            out.append(y)
    return frozenset(out)


def coset_slice(u: Element, v: Element, J: Iterable[int]) -> frozenset[Element]:
    """The set {u w : w in W_J, u w <= v}; requires u, v in W^J.

    Because u is a minimal coset representative, l(u w) = l(u) + l(w), so
    only w of length at most l(v) - l(u) can contribute.
    """
    sys = _same_system(u, v)
    J = sys.check_subset(J)
    if not (sys.is_min_coset_rep(u, J) and sys.is_min_coset_rep(v, J)):
        raise CoxeterError("endpoints must be minimal coset representatives")
    budget = v.length - u.length
    if budget < 0:
        return frozenset()
    out = []
    for w in sys.parabolic_subgroup_elements(J, budget):
        uw = sys.mul(u, w)
        if bruhat_leq(uw, v):
            out.append(uw)
    return frozenset(out)
