"""Interval isomorphism search, constraints, and interval classes."""

import warnings

import pytest
import sympy

from bruhatlab import (
    CoxeterError,
    bruhat_leq,
    build_interval,
    build_system,
    check_nondominated_transport,
    find_isomorphisms,
    fingerprint,
    is_corpus_coelementary,
    is_cosimple,
    is_lower_interval,
    is_short_edge,
    lower_interval_elements,
    quotient_restrict,
)


def all_intervals(sys, max_height=None):
    out = []
    for v in sys.elements():
        for u in lower_interval_elements(v):
            if max_height is not None and v.length - u.length > max_height:
                continue
            out.append(build_interval(u, v))
    return out


def test_fingerprint_matches_under_isomorphism():
    sys = build_system("A3")
    intervals = all_intervals(sys, max_height=3)
    for a in intervals[:40]:
        for b in intervals[:40]:
            if fingerprint(a) != fingerprint(b):
                assert find_isomorphisms(a, b, limit=1) == []


def test_automorphism_counts_of_boolean_lattices():
    # automorphisms of the Boolean lattice on k atoms form the symmetric
    # group on the atoms: 2 for k=2, 6 for k=3
    sys = build_system("A3")
    square = build_interval(sys.identity(), sys.from_word([0, 1]))
    assert len(find_isomorphisms(square, square, limit=100)) == 2
    cube = build_interval(sys.identity(), sys.from_word([0, 1, 2]))
    assert len(find_isomorphisms(cube, cube, limit=100)) == 6


def test_witnesses_are_order_isomorphisms():
    sys = build_system("B3")
    i1 = build_interval(sys.identity(), sys.from_word([0, 1, 0]))
    i2 = build_interval(sys.identity(), sys.from_word([1, 0, 1]))
    found = find_isomorphisms(i1, i2, limit=100)
    assert found
    for w in found:
        assert w.is_order_isomorphism()
        assert w.mapping[i1.bottom] == i2.bottom
        assert w.mapping[i1.top] == i2.top


def test_non_isomorphic_intervals_give_no_witness():
    sys = build_system("A3")
    e = sys.identity()
    dihedral = build_interval(e, sys.from_word([0, 1, 0]))
    cube = build_interval(e, sys.from_word([0, 1, 2]))
    assert dihedral.rank_vector() == (1, 2, 2, 1)
    assert cube.rank_vector() == (1, 3, 3, 1)
    assert find_isomorphisms(dihedral, cube, limit=1) == []


def test_witness_order_is_deterministic():
    sys = build_system("A3")
    cube = build_interval(sys.identity(), sys.from_word([0, 1, 2]))
    w1 = [w.as_pairs() for w in find_isomorphisms(cube, cube, limit=100)]
    w2 = [w.as_pairs() for w in find_isomorphisms(cube, cube, limit=100)]
    assert w1 == w2
    assert len(set(map(tuple, w1))) == len(w1)
    # the identity automorphism comes first under the lexicographic search
    assert all(a == b for a, b in w1[0])


def test_atom_constraint_labels_respected():
    sys = build_system("A3")
    e = sys.identity()
    i1 = build_interval(e, sys.from_word([0, 1, 2]))
    i2 = build_interval(e, sys.from_word([1, 0, 2]))
    J1, J2 = frozenset([0]), frozenset([1])
    found = find_isomorphisms(i1, i2, ("atoms", J1, J2), limit=100)
    assert found
    for w in found:
        assert w.respects_atoms
        assert w.is_order_isomorphism()
        assert check_nondominated_transport(w, J1, J2)
    unconstrained = find_isomorphisms(i1, i2, limit=1000)
    assert len(found) < len(unconstrained)


def test_quotient_constraint_implies_atoms():
    sys = build_system("A3")
    intervals = all_intervals(sys, max_height=4)
    subsets = [frozenset([0]), frozenset([1]), frozenset([2]), frozenset([0, 2])]
    seen = 0
    for a in intervals:
        for J1 in subsets:
            if not (
                sys.is_min_coset_rep(a.bottom, J1) and sys.is_min_coset_rep(a.top, J1)
            ):
                continue
            found = find_isomorphisms(a, a, ("quotient", J1, J1), limit=5)
            for w in found:
                assert w.respects_quotient
                assert w.respects_atoms
                q = quotient_restrict(a, J1).members
                assert {w.mapping[y] for y in q} == q
                seen += 1
    assert seen > 20


def test_quotient_witness_restricts_to_upper_subintervals():
    # restricting a quotient-respecting isomorphism to [y, top] for any
    # quotient member y again gives an order isomorphism onto its image
    sys = build_system("A3")
    i1 = build_interval(sys.identity(), sys.from_word([0, 1, 2]))
    i2 = i1
    J = frozenset([0])
    found = [
        w
        for w in find_isomorphisms(i1, i2, ("quotient", J, J), limit=100)
        if w.respects_quotient
    ]
    assert found
    for w in found:
        for y in quotient_restrict(i1, J).members:
            sub1 = [z for z in i1.elements if i1.leq(y, z)]
            for a in sub1:
                for b in sub1:
                    assert i1.leq(a, b) == i2.leq(w.mapping[a], w.mapping[b])


def test_lower_and_short_edge_classes():
    sys = build_system("A3")
    e = sys.identity()
    s1 = sys.gen(0)
    assert is_lower_interval(build_interval(e, sys.from_word([0, 1])))
    assert not is_lower_interval(build_interval(s1, sys.from_word([0, 1])))
    dihedral = build_interval(e, sys.from_word([0, 1, 0]), with_bruhat_graph=True)
    assert not is_short_edge(dihedral)  # has the long edge e -> s1s2s1
    boolean = build_interval(e, sys.from_word([0, 1, 2]), with_bruhat_graph=True)
    assert is_short_edge(boolean)
    # height <= 2 never has long edges (gaps are odd)
    assert is_short_edge(build_interval(e, sys.from_word([0, 1])))


def test_short_edge_needs_graph_above_height_two():
    sys = build_system("A3")
    tall = build_interval(sys.identity(), sys.from_word([0, 1, 0]))
    with pytest.raises(CoxeterError):
        is_short_edge(tall)


def _cosimple_rank_oracle(interval):
    """Exact-arithmetic oracle: rank of the coatom transposition root matrix."""
    sys = interval.system
    v = interval.top
    n = len(v.data)
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            w = list(v.data)
            w[i], w[j] = w[j], w[i]
            cand = type(v)(sys, tuple(w))
            if cand.length == v.length - 1 and bruhat_leq(interval.bottom, cand):
                root = [0] * n
                root[i], root[j] = 1, -1
                roots.append(root)
    if not roots:
        return True
    m = sympy.Matrix(roots)
    return m.rank() == len(roots)


def test_cosimple_agrees_with_rank_oracle():
    sys = build_system("A3")
    for interval in all_intervals(sys):
        assert is_cosimple(interval) == _cosimple_rank_oracle(interval)


def test_cosimple_examples():
    sys = build_system("A3")
    e = sys.identity()
    assert is_cosimple(build_interval(e, sys.from_word([0, 1, 2])))
    assert is_cosimple(build_interval(e, sys.longest_element()))
    # some interval must fail: the longest element of S4 has dependent
    # coatom roots below suitable bottoms; find a frozen witness
    noncosimple = [
        i for i in all_intervals(sys) if not is_cosimple(i)
    ]
    assert noncosimple
    words = {(i.bottom.word_str() or "e", i.top.word_str()) for i in noncosimple}
    assert ("2", "2,3,1,2") in words  # the Boolean [s2, 3412-type] interval


def test_cosimple_rejects_other_types():
    sys = build_system("B3")
    with pytest.raises(CoxeterError):
        is_cosimple(build_interval(sys.identity(), sys.gen(0)))


def test_corpus_coelementary():
    sys = build_system("A3")
    corpus = all_intervals(sys)
    cos = [i for i in corpus if is_cosimple(i)]
    assert cos
    for i in cos[:20]:
        assert is_corpus_coelementary(i, corpus)
    # within S4 exactly seven intervals are non-cosimple, and none of them
    # is isomorphic to a cosimple interval of the corpus
    noncos = [i for i in corpus if not is_cosimple(i)]
    assert len(noncos) == 7
    assert all(not is_corpus_coelementary(i, corpus) for i in noncos)


def test_coelementary_upper_closure_within_corpus():
    # upper subintervals of cosimple intervals should again be coelementary;
    # failures relative to a small corpus are reported as warnings, not errors
    sys = build_system("A3")
    corpus = all_intervals(sys)
    unresolved = []
    for interval in corpus:
        if not is_cosimple(interval):
            continue
        for y in interval.elements:
            if y == interval.bottom:
                continue
            upper = build_interval(y, interval.top)
            if not is_corpus_coelementary(upper, corpus):
                unresolved.append((y.word_str(), interval.top.word_str()))
    if unresolved:
        warnings.warn(f"corpus too small to witness coelementarity for {unresolved}")
