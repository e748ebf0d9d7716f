"""Constrained order-isomorphism search between Bruhat intervals,
plus the interval classes the invariance campaigns care about
(lower, short-edge, cosimple, corpus-coelementary).

The search is rank-stratified backtracking: Bruhat intervals are graded,
so an order isomorphism must preserve rank, and candidates are further
restricted by cover-degree profiles and by the active constraint (atom
bijection or quotient isomorphism).  Witnesses come out in lexicographic
order of the mapping, so golden files are reproducible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .bruhat import (
    BruhatInterval,
    atoms_in_quotient,
    bruhat_leq,
    non_dominated_set,
    quotient_restrict,
)
from .coxeter import CoxeterError, Element, PermutationBackend


# ---------------------------------------------------------------------------
# Fingerprints


@dataclass(frozen=True)
class Fingerprint:
    """Cheap isomorphism invariants used to bucket intervals before search.

    Equality is necessary for the existence of an order isomorphism, never
    sufficient.  ``edge_gaps`` is only filled on request: the Bruhat graph
    is extra structure on top of the poset.
    """

    size: int
    rank_vector: tuple[int, ...]
    atom_count: int
    coatom_count: int
    degree_profiles: tuple[tuple[tuple[int, int], ...], ...]
    edge_gaps: Optional[tuple[int, ...]] = None

    def key(self) -> str:
        blob = repr((self.size, self.rank_vector, self.atom_count,
                     self.coatom_count, self.degree_profiles, self.edge_gaps))
        digest = hashlib.sha256(blob.encode()).hexdigest()[:12]
        return f"{self.size}:{len(self.rank_vector) - 1}:{digest}"


def fingerprint(interval: BruhatInterval, include_graph: bool = False) -> Fingerprint:
    """Order-invariant summary of an interval."""
    n = interval.size
    up_deg = [0] * n
    down_deg = [0] * n
    idx = {y.data: i for i, y in enumerate(interval.elements)}
    for z, y in interval.covers:
        up_deg[idx[z.data]] += 1
        down_deg[idx[y.data]] += 1
    height = interval.height
    profiles = []
    for r in range(height + 1):
        profile = sorted(
            (down_deg[i], up_deg[i])
            for i, y in enumerate(interval.elements)
            if interval.rank_of(y) == r
        )
        profiles.append(tuple(profile))
    gaps = None
    if include_graph:
        if interval.bruhat_edges is None:
            raise CoxeterError("interval was built without its Bruhat graph")
        gaps = tuple(sorted(y2.length - y1.length for y1, y2, _ in interval.bruhat_edges))
    rv = interval.rank_vector()
    return Fingerprint(
        size=n,
        rank_vector=rv,
        atom_count=rv[1] if height >= 1 else 0,
        coatom_count=rv[height - 1] if height >= 1 else 0,
        degree_profiles=tuple(profiles),
        edge_gaps=gaps,
    )


# ---------------------------------------------------------------------------
# Witnesses


@dataclass(frozen=True)
class IsoWitness:
    """An explicit order isomorphism between two intervals.

    ``respects_atoms`` / ``respects_quotient`` report whether the mapping
    carries the source atom set / quotient trace onto the target one; they
    are only meaningful when the search was given generator subsets.
    """

    source: BruhatInterval
    target: BruhatInterval
    mapping: dict[Element, Element]
    respects_atoms: bool = False
    respects_quotient: bool = False

    def as_pairs(self) -> list[tuple[str, str]]:
        pairs = [(a.word_str(), b.word_str()) for a, b in self.mapping.items()]
        return sorted(pairs)

    def is_order_isomorphism(self) -> bool:
        """Full pairwise re-check that order is preserved and reflected."""
        items = list(self.mapping.items())
        for a1, b1 in items:
            for a2, b2 in items:
                if self.source.leq(a1, a2) != self.target.leq(b1, b2):
                    return False
        return True


Constraint = Optional[tuple]  # None | ("atoms", J1, J2) | ("quotient", J1, J2)


def find_isomorphisms(
    source: BruhatInterval,
    target: BruhatInterval,
    constraint: Constraint = None,
    limit: int = 1,
    max_size: Optional[int] = None,
) -> list[IsoWitness]:
    """Up to ``limit`` order isomorphisms source -> target.

    If fewer than ``limit`` exist, all of them are returned, so an empty
    list is a certificate of non-isomorphism (under the constraint).
    Constraints: ``("atoms", J1, J2)`` demands that the source atom set in
    W^J1 maps onto the target atom set in W^J2; ``("quotient", J1, J2)``
    demands the same for the full quotient traces.
    """
    if limit < 1:
        raise CoxeterError("limit must be positive")
    if max_size is not None and max(source.size, target.size) > max_size:
        raise CoxeterError(f"interval size exceeds cap {max_size}")
    if source.size != target.size or fingerprint(source) != fingerprint(target):
        return []

    n = source.size
    src = sorted(source.elements, key=lambda y: (source.rank_of(y), y.data))
    tgt = sorted(target.elements, key=lambda y: (target.rank_of(y), y.data))
    si = {y.data: i for i, y in enumerate(src)}
    ti = {y.data: i for i, y in enumerate(tgt)}
    sleq = [[source.leq(a, b) for b in src] for a in src]
    tleq = [[target.leq(a, b) for b in tgt] for a in tgt]

    def degs(order, leq):
        up = [sum(1 for j in range(n) if leq[i][j]) for i in range(n)]
        down = [sum(1 for j in range(n) if leq[j][i]) for i in range(n)]
        return list(zip(up, down))

    sdeg = degs(src, sleq)
    tdeg = degs(tgt, tleq)

    # constraint classes: each source element carries a label that its
    # image must carry as well
    slabel = [0] * n
    tlabel = [0] * n
    J1 = J2 = None
    if constraint is not None:
        kind, J1, J2 = constraint
        if kind == "atoms":
            a1 = atoms_in_quotient(source.bottom, source.top, J1)
            a2 = atoms_in_quotient(target.bottom, target.top, J2)
            if len(a1) != len(a2):
                return []
            for y in a1:
                slabel[si[y.data]] = 1
            for y in a2:
                tlabel[ti[y.data]] = 1
        elif kind == "quotient":
            q1 = quotient_restrict(source, J1).members
            q2 = quotient_restrict(target, J2).members
            if len(q1) != len(q2):
                return []
            for y in q1:
                slabel[si[y.data]] = 1
            for y in q2:
                tlabel[ti[y.data]] = 1
        else:
            raise CoxeterError(f"unknown constraint kind {kind!r}")

    srank = [source.rank_of(y) for y in src]
    trank = [target.rank_of(y) for y in tgt]
    candidates = [
        [
            j
            for j in range(n)
            if trank[j] == srank[i]
            and tdeg[j] == sdeg[i]
            and tlabel[j] == slabel[i]
        ]
        for i in range(n)
    ]
    if any(not c for c in candidates):
        return []

    out: list[IsoWitness] = []
    assigned: list[int] = []
    used = [False] * n

    def backtrack(i: int) -> bool:
        if i == n:
            mapping = {src[k]: tgt[assigned[k]] for k in range(n)}
            out.append(_make_witness(source, target, mapping, J1, J2))
            return len(out) >= limit
        for j in candidates[i]:
            if used[j]:
                continue
            row_i, col_i = sleq[i], [sleq[k][i] for k in range(i)]
            ok = True
            for k in range(i):
                jk = assigned[k]
                if row_i[k] != tleq[j][jk] or col_i[k] != tleq[jk][j]:
                    ok = False
                    break
            if not ok:
                continue
            used[j] = True
            assigned.append(j)
            if backtrack(i + 1):
                return True
            assigned.pop()
            used[j] = False
        return False

    backtrack(0)
    return out


def _make_witness(
    source: BruhatInterval,
    target: BruhatInterval,
    mapping: dict[Element, Element],
    J1,
    J2,
) -> IsoWitness:
    respects_atoms = respects_quotient = False
    if J1 is not None and J2 is not None:
        a1 = atoms_in_quotient(source.bottom, source.top, J1)
        a2 = atoms_in_quotient(target.bottom, target.top, J2)
        respects_atoms = {mapping[y] for y in a1} == set(a2)
        q1 = quotient_restrict(source, J1).members
        q2 = quotient_restrict(target, J2).members
        respects_quotient = {mapping[y] for y in q1} == set(q2)
        if respects_quotient and not respects_atoms:
            raise CoxeterError("quotient-respecting mapping must respect atoms")
    return IsoWitness(
        source=source,
        target=target,
        mapping=mapping,
        respects_atoms=respects_atoms,
        respects_quotient=respects_quotient,
    )


def check_nondominated_transport(witness: IsoWitness, J1: Iterable[int], J2: Iterable[int]) -> bool:
    """Whether the witness carries the source non-dominated set onto the target one.

    The non-dominated set of [u, v] with respect to its quotient atoms is an
    order-theoretic shadow of the coset slice u W_J; an atom-respecting
    isomorphism must transport it, so a False return indicates a bug.
    """
    if not witness.respects_atoms:
        raise CoxeterError("transport check requires an atom-respecting witness")
    src, tgt = witness.source, witness.target
    nd1 = non_dominated_set(src, atoms_in_quotient(src.bottom, src.top, J1))
    nd2 = non_dominated_set(tgt, atoms_in_quotient(tgt.bottom, tgt.top, J2))
    return {witness.mapping[y] for y in nd1} == set(nd2)


# ---------------------------------------------------------------------------
# Interval classes


def is_lower_interval(interval: BruhatInterval) -> bool:
    """Whether the bottom is the group identity."""
    return interval.bottom == interval.system.identity()


def is_short_edge(interval: BruhatInterval) -> bool:
    """Whether every Bruhat-graph edge inside the interval has length gap 1.

    Gaps are odd, so intervals of height at most 2 qualify automatically;
    otherwise the interval must have been built with its Bruhat graph.
    """
    if interval.height <= 2:
        return True
    if interval.bruhat_edges is None:
        raise CoxeterError("interval was built without its Bruhat graph")
    return all(y2.length - y1.length == 1 for y1, y2, _ in interval.bruhat_edges)


def is_cosimple(interval: BruhatInterval) -> bool:
    """Whether the coatom transposition roots of a symmetric-group interval
    are linearly independent.

    For [u, v] in S_n, collect the transpositions (i j) with
    u <= v.(i j) lessdot v; the difference vectors e_i - e_j are linearly
    independent exactly when the graph with edges {i, j} is acyclic.
    """
    sys = interval.system
    if not isinstance(sys.backend, PermutationBackend):
        raise CoxeterError("cosimplicity is defined for symmetric groups only")
    u, v = interval.bottom, interval.top
    lv = v.length
    n = len(v.data)
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            w = list(v.data)
            w[i], w[j] = w[j], w[i]
            cand = Element(sys, tuple(w))
            if cand.length != lv - 1 or not bruhat_leq(u, cand):
                continue
            ri, rj = find(i + 1), find(j + 1)
            if ri == rj:
                return False  # cycle: the roots are dependent
            parent[ri] = rj
    return True


def is_corpus_coelementary(
    interval: BruhatInterval, corpus: Sequence[BruhatInterval]
) -> bool:
    """Whether the interval is order-isomorphic to some cosimple interval
    in the given symmetric-group corpus.

    Only decides the question relative to the corpus: a False answer can be
    a corpus-insufficiency artifact, never a proof.
    """
    fp = fingerprint(interval)
    for other in corpus:
        if not is_cosimple(other):
            continue
        if fingerprint(other) != fp:
            continue
        if find_isomorphisms(interval, other, limit=1):
            return True
    return False
