"""Verification campaigns over desk-scale corpora.

A campaign enumerates Bruhat intervals in configured groups, buckets them
by fingerprint, partitions each bucket into isomorphism classes (plain,
atom-constrained, or quotient-constrained), and checks that the relevant
polynomial equalities hold across every class.  Identity checks (parabolic
decomposition monotonicity, coset-slice equality, the Deodhar-sum oracles,
definitional audits, longest-element duality) run over all applicable
tuples.  Reports are deterministic: the machine-readable document contains
no timing and is byte-identical for a fixed spec at any parallelism.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from . import bruhat, isosearch, klpoly
from .bruhat import (
    BruhatInterval,
    IntervalSizeError,
    atoms_in_quotient,
    bruhat_leq,
    build_interval,
    coset_slice,
    non_dominated_set,
    quotient_restrict,
)
from .coxeter import (
    CoxeterError,
    CoxeterSystem,
    Element,
    PermutationBackend,
    build_system,
)
from .isosearch import (
    check_nondominated_transport,
    find_isomorphisms,
    fingerprint,
    is_cosimple,
    is_lower_interval,
    is_short_edge,
)
from .klpoly import (
    Poly,
    audit_p_family,
    audit_r_family,
    deodhar_p_sum,
    deodhar_r_sum,
    p_poly,
    parabolic_p_poly,
    parabolic_r_poly,
    r_poly,
    w0_dual_r_check,
)

SCHEMA_VERSION = 1

CHECK_NAMES = (
    "projection-monotone",
    "coset-slice",
    "deodhar-sums",
    "defining-audit",
    "w0-duality",
    "invariance-ordinary",
    "invariance-atoms",
    "invariance-quotient",
    "lower-intervals",
    "short-edge-intervals",
    "coelementary-intervals",
    "remark-example",
)

# checks whose zero-violation status is conjectural, not proven
CONJECTURE_CHECKS = frozenset(
    {"invariance-ordinary", "invariance-atoms", "invariance-quotient"}
)

_BUCKETED_CHECKS = frozenset(
    {
        "invariance-ordinary",
        "invariance-atoms",
        "invariance-quotient",
        "lower-intervals",
        "short-edge-intervals",
        "coelementary-intervals",
    }
)


class HarnessError(CoxeterError):
    """Campaign configuration or consistency failure."""


# ---------------------------------------------------------------------------
# Campaign specification


@dataclass(frozen=True)
class CampaignSpec:
    """What to verify: systems, interval bounds, checks, worker count."""

    systems: tuple[dict, ...]
    checks: tuple[str, ...]
    max_interval_height: Optional[int] = None
    max_interval_size: int = 512
    iso_limit: int = 1
    parallelism: int = 1
    output_path: Optional[str] = None

    def __post_init__(self):
        if not self.checks:
            raise HarnessError("campaign needs at least one check")
        for c in self.checks:
            if c not in CHECK_NAMES:
                raise HarnessError(f"unknown check {c!r}")
        if not self.systems:
            raise HarnessError("campaign needs at least one system")
        if self.max_interval_size < 1 or self.iso_limit < 1 or self.parallelism < 1:
            raise HarnessError("campaign bounds must be positive")
        if self.max_interval_height is not None and self.max_interval_height < 1:
            raise HarnessError("campaign bounds must be positive")

    @staticmethod
    def from_dict(data: dict) -> "CampaignSpec":
        systems = tuple(
            {"type": s} if isinstance(s, str) else dict(s)
            for s in data.get("systems", [])
        )
        return CampaignSpec(
            systems=systems,
            checks=tuple(data.get("checks", [])),
            max_interval_height=data.get("max_interval_height"),
            max_interval_size=data.get("max_interval_size", 512),
            iso_limit=data.get("iso_limit", 1),
            parallelism=data.get("parallelism", 1),
            output_path=data.get("output_path"),
        )

    def to_dict(self) -> dict:
        """Verification-relevant fields only: parallelism and output path
        are execution details and stay out of reports."""
        out = {
            "systems": [dict(s) for s in self.systems],
            "checks": list(self.checks),
            "max_interval_size": self.max_interval_size,
            "iso_limit": self.iso_limit,
        }
        if self.max_interval_height is not None:
            out["max_interval_height"] = self.max_interval_height
        return out


def default_campaign_spec(parallelism: int = 1) -> CampaignSpec:
    """The stock desk-scale campaign: A3, A4, B3 exhaustive plus a capped
    rank-3 affine group, all checks."""
    return CampaignSpec(
        systems=(
            {"type": "A3"},
            {"type": "A4"},
            {"type": "B3"},
            {
                "type": "matrix",
                "matrix": [[1, 3, 3], [3, 1, 3], [3, 3, 1]],
                "length_cap": 8,
            },
        ),
        checks=CHECK_NAMES,
        parallelism=parallelism,
    )


# ---------------------------------------------------------------------------
# Per-system context


class SystemContext:
    """A system plus its enumerated corpus and cached intervals."""

    def __init__(self, desc: dict):
        self.system = build_system(dict(desc))
        self.desc = self.system.description()
        if self.system.type_name == "matrix":
            self.label = f"matrix-{self.system.checksum()[:8]}"
        else:
            self.label = self.system.type_name
        self._intervals: dict = {}
        self._graph_intervals: dict = {}
        self._corpus: Optional[list[Element]] = None
        self._pairs: Optional[list] = None
        self._fingerprints: dict = {}
        self._buckets: dict = {}

    def corpus(self) -> list[Element]:
        if self._corpus is None:
            sys = self.system
            if sys.is_finite:
                self._corpus = sys.elements()
            else:
                self._corpus = sys.enumerate_up_to_length(sys.length_cap)
        return self._corpus

    def corpus_checksum(self) -> str:
        words = sorted(w.word_str() for w in self.corpus())
        return hashlib.sha256("|".join(words).encode()).hexdigest()

    def comparable_pairs(self) -> list[tuple[Element, Element]]:
        if self._pairs is None:
            corpus_data = {w.data for w in self.corpus()}
            pairs = []
            for v in self.corpus():
                for u in bruhat.lower_interval_elements(v):
                    if u.data in corpus_data:
                        pairs.append((u, v))
            pairs.sort(key=lambda p: (p[0].length, p[0].data, p[1].length, p[1].data))
            self._pairs = pairs
        return self._pairs

    def fingerprint_of(self, interval: BruhatInterval):
        key = (interval.bottom.data, interval.top.data)
        hit = self._fingerprints.get(key)
        if hit is None:
            hit = fingerprint(interval)
            self._fingerprints[key] = hit
        return hit

    def subsets(self) -> list[frozenset[int]]:
        out = []
        for r in range(self.system.rank + 1):
            for J in combinations(range(self.system.rank), r):
                out.append(frozenset(J))
        return out

    def interval(self, u: Element, v: Element, graph: bool = False) -> BruhatInterval:
        cache = self._graph_intervals if graph else self._intervals
        key = (u.data, v.data)
        hit = cache.get(key)
        if hit is None:
            hit = build_interval(u, v, with_bruhat_graph=graph)
            cache[key] = hit
        return hit


def _subset_key(J: frozenset[int]) -> str:
    return ",".join(str(s + 1) for s in sorted(J)) or "-"


def _poly_record(p: Poly) -> list[int]:
    return list(p.coeffs)


# ---------------------------------------------------------------------------
# Interval corpus and buckets


def _interval_corpus(ctx: SystemContext, spec: CampaignSpec):
    """All buildable intervals from the corpus, plus the cap-skip count."""
    cached = ctx._buckets.get("__corpus__")
    if cached is not None:
        return cached
    intervals = []
    skipped = 0
    for u, v in ctx.comparable_pairs():
        h = v.length - u.length
        if spec.max_interval_height is not None and h > spec.max_interval_height:
            skipped += 1
            continue
        try:
            intervals.append(ctx.interval(u, v, graph=False))
        except IntervalSizeError:
            skipped += 1
            continue
        if intervals[-1].size > spec.max_interval_size:
            intervals.pop()
            skipped += 1
    ctx._buckets["__corpus__"] = (intervals, skipped)
    return intervals, skipped


def _objects_for_check(check: str, ctx: SystemContext, spec: CampaignSpec):
    """The bucketed object list for an invariance check.

    Objects are intervals (unconstrained invariance) or (interval, J) pairs
    with both endpoints in W^J.  The bucket key is an isomorphism invariant
    of the object, so only same-bucket objects can be equivalent.
    """
    cached = ctx._buckets.get(check)
    if cached is not None:
        return cached

    intervals, skipped = _interval_corpus(ctx, spec)
    sys = ctx.system
    buckets: dict[str, list] = {}

    if check in ("invariance-ordinary", "coelementary-intervals"):
        for interval in intervals:
            key = ctx.fingerprint_of(interval).key()
            buckets.setdefault(key, []).append(interval)
        ctx._buckets[check] = (buckets, skipped)
        return buckets, skipped

    if check == "lower-intervals":
        pool = [i for i in intervals if is_lower_interval(i)]
    else:
        pool = intervals

    for interval in pool:
        fp_key = ctx.fingerprint_of(interval).key()
        for J in ctx.subsets():
            if not (
                sys.is_min_coset_rep(interval.bottom, J)
                and sys.is_min_coset_rep(interval.top, J)
            ):
                continue
            if check == "invariance-quotient":
                members = quotient_restrict(interval, J).members
                profile = tuple(sorted(interval.rank_of(y) for y in members))
                key = f"{fp_key}|Q{profile}"
            else:
                atoms = atoms_in_quotient(interval.bottom, interval.top, J)
                key = f"{fp_key}|A{len(atoms)}"
            buckets.setdefault(key, []).append((interval, J))
    ctx._buckets[check] = (buckets, skipped)
    return buckets, skipped


def _sorted_objects(check: str, objs: list) -> list:
    if check in ("invariance-ordinary", "coelementary-intervals"):
        return sorted(objs, key=lambda i: (i.bottom.data, i.top.data))
    return sorted(objs, key=lambda o: (o[0].bottom.data, o[0].top.data, sorted(o[1])))


def _classify(objs: list, iso_of) -> list[tuple]:
    """Partition objects into isomorphism classes against class representatives.

    Returns a list of (representative, members) where members are
    (object, witness-from-representative) and the representative's own
    witness is None.
    """
    classes: list[tuple] = []
    for obj in objs:
        placed = False
        for rep, members in classes:
            w = iso_of(rep, obj)
            if w is not None:
                members.append((obj, w))
                placed = True
                break
        if not placed:
            classes.append((obj, [(obj, None)]))
    return classes


# ---------------------------------------------------------------------------
# Polynomial profiles compared across a class


def _profile_ordinary(interval: BruhatInterval) -> dict:
    return {
        "R": _poly_record(r_poly(interval.bottom, interval.top)),
        "P": _poly_record(p_poly(interval.bottom, interval.top)),
    }


def _profile_atoms(obj) -> dict:
    interval, J = obj
    u, v = interval.bottom, interval.top
    return {
        "R@-1": _poly_record(parabolic_r_poly(u, v, J, "-1")),
        "R@q": _poly_record(parabolic_r_poly(u, v, J, "q")),
        "P@q": _poly_record(parabolic_p_poly(u, v, J, "q")),
    }


def _profile_quotient(obj) -> dict:
    interval, J = obj
    u, v = interval.bottom, interval.top
    return {
        "R@-1": _poly_record(parabolic_r_poly(u, v, J, "-1")),
        "R@q": _poly_record(parabolic_r_poly(u, v, J, "q")),
        "P@-1": _poly_record(parabolic_p_poly(u, v, J, "-1")),
        "P@q": _poly_record(parabolic_p_poly(u, v, J, "q")),
    }


def _object_id(check: str, obj) -> dict:
    if check in ("invariance-ordinary", "coelementary-intervals"):
        return {"u": obj.bottom.word_str(), "v": obj.top.word_str()}
    interval, J = obj
    return {
        "u": interval.bottom.word_str(),
        "v": interval.top.word_str(),
        "J": _subset_key(J),
    }


# ---------------------------------------------------------------------------
# Check implementations (each returns a result dict for one unit)


def _result(check, system, key, examined=0, skipped=0, violations=None, note=None):
    out = {
        "check": check,
        "system": system,
        "unit": key,
        "examined": examined,
        "skipped": skipped,
        "violations": violations or [],
    }
    if note:
        out["note"] = note
    return out


def _run_projection_monotone(ctx: SystemContext, spec: CampaignSpec, J: frozenset[int]):
    sys = ctx.system
    examined = 0
    violations = []
    for u, v in ctx.comparable_pairs():
        uj, _ = sys.parabolic_decompose(u, J)
        vj, _ = sys.parabolic_decompose(v, J)
        examined += 1
        if not bruhat_leq(uj, vj):
            violations.append(
                {
                    "kind": "projection-not-monotone",
                    "u": u.word_str(),
                    "v": v.word_str(),
                    "J": _subset_key(J),
                }
            )
    return _result(
        "projection-monotone", ctx.label, f"J={_subset_key(J)}", examined, 0, violations
    )


def _run_coset_slice(ctx: SystemContext, spec: CampaignSpec, J: frozenset[int]):
    sys = ctx.system
    examined = 0
    violations = []
    for u, v in ctx.comparable_pairs():
        if not (sys.is_min_coset_rep(u, J) and sys.is_min_coset_rep(v, J)):
            continue
        interval = ctx.interval(u, v)
        combinatorial = non_dominated_set(interval, atoms_in_quotient(u, v, J))
        group_side = coset_slice(u, v, J)
        examined += 1
        if combinatorial != group_side:
            violations.append(
                {
                    "kind": "coset-slice-mismatch",
                    "u": u.word_str(),
                    "v": v.word_str(),
                    "J": _subset_key(J),
                    "combinatorial": sorted(y.word_str() for y in combinatorial),
                    "group": sorted(y.word_str() for y in group_side),
                }
            )
    return _result("coset-slice", ctx.label, f"J={_subset_key(J)}", examined, 0, violations)


def _run_deodhar_sums(ctx: SystemContext, spec: CampaignSpec, J: frozenset[int], x: str):
    sys = ctx.system
    examined = 0
    violations = []
    quotient = [w for w in ctx.corpus() if sys.is_min_coset_rep(w, J)]
    for u in quotient:
        for v in quotient:
            if not bruhat_leq(u, v):
                continue
            examined += 1
            rec = parabolic_r_poly(u, v, J, x)
            orc = deodhar_r_sum(u, v, J, x)
            if rec != orc:
                violations.append(
                    {
                        "kind": "r-route-mismatch",
                        "u": u.word_str(),
                        "v": v.word_str(),
                        "J": _subset_key(J),
                        "x": x,
                        "recursion": _poly_record(rec),
                        "sum": _poly_record(orc),
                    }
                )
            if x == "q":
                prec = parabolic_p_poly(u, v, J, "q")
                porc = deodhar_p_sum(u, v, J)
                if prec != porc:
                    violations.append(
                        {
                            "kind": "p-route-mismatch",
                            "u": u.word_str(),
                            "v": v.word_str(),
                            "J": _subset_key(J),
                            "recursion": _poly_record(prec),
                            "sum": _poly_record(porc),
                        }
                    )
    return _result(
        "deodhar-sums", ctx.label, f"J={_subset_key(J)};x={x}", examined, 0, violations
    )


def _run_defining_audit(ctx: SystemContext, spec: CampaignSpec, J: frozenset[int], x: str):
    corpus = ctx.corpus()
    quotient_size = sum(1 for w in corpus if ctx.system.is_min_coset_rep(w, J))
    violations = []
    for fam, bad in (
        ("R", audit_r_family(ctx.system, J, x, corpus)),
        ("P", audit_p_family(ctx.system, J, x, corpus)),
    ):
        for item in bad:
            violations.append(
                {
                    "kind": f"{fam}-definition-violated",
                    "J": _subset_key(J),
                    "x": x,
                    **item,
                }
            )
    return _result(
        "defining-audit",
        ctx.label,
        f"J={_subset_key(J)};x={x}",
        examined=quotient_size * quotient_size * 2,
        violations=violations,
    )


def _run_w0_duality(ctx: SystemContext, spec: CampaignSpec):
    if not ctx.system.is_finite:
        return _result(
            "w0-duality", ctx.label, "all", note="not applicable: infinite group"
        )
    examined = 0
    violations = []
    for u, v in ctx.comparable_pairs():
        examined += 1
        if not w0_dual_r_check(u, v):
            violations.append(
                {"kind": "w0-duality-broken", "u": u.word_str(), "v": v.word_str()}
            )
    return _result("w0-duality", ctx.label, "all", examined, 0, violations)


def _iso_for_check(check: str, spec: CampaignSpec):
    """The pairwise isomorphism test used to classify a bucket."""

    def iso_plain(a: BruhatInterval, b: BruhatInterval):
        found = find_isomorphisms(a, b, None, limit=1)
        return found[0] if found else None

    def iso_atoms(oa, ob):
        (ia, ja), (ib, jb) = oa, ob
        found = find_isomorphisms(ia, ib, ("atoms", ja, jb), limit=1)
        return found[0] if found else None

    def iso_quotient(oa, ob):
        (ia, ja), (ib, jb) = oa, ob
        found = find_isomorphisms(ia, ib, ("quotient", ja, jb), limit=1)
        return found[0] if found else None

    if check in ("invariance-ordinary", "coelementary-intervals"):
        return iso_plain
    if check == "invariance-quotient":
        return iso_quotient
    return iso_atoms


def _run_bucket(ctx: SystemContext, spec: CampaignSpec, check: str, key: str):
    buckets, _ = _objects_for_check(check, ctx, spec)
    objs = _sorted_objects(check, buckets.get(key, []))
    violations = []
    examined = len(objs)

    def report(kind, anchor, obj, field_name, expected, got):
        violations.append(
            {
                "kind": kind,
                "anchor": _object_id(check, anchor),
                "object": _object_id(check, obj),
                "quantity": field_name,
                "anchor_value": expected,
                "object_value": got,
            }
        )

    if check == "invariance-ordinary":
        for rep, members in _classify(objs, _iso_for_check(check, spec)):
            anchor_profile = _profile_ordinary(rep)
            for obj, _w in members[1:]:
                profile = _profile_ordinary(obj)
                for name, expected in anchor_profile.items():
                    if profile[name] != expected:
                        report("ordinary-invariance-broken", rep, obj, name, expected, profile[name])
        return _result(check, ctx.label, key, examined, 0, violations)

    if check == "coelementary-intervals":
        if not isinstance(ctx.system.backend, PermutationBackend):
            return _result(check, ctx.label, key, note="not applicable: not a symmetric group")
        for rep, members in _classify(objs, _iso_for_check(check, spec)):
            anchors = [obj for obj, _ in members if is_cosimple(obj)]
            if not anchors:
                continue
            anchor = anchors[0]
            expected = _poly_record(r_poly(anchor.bottom, anchor.top))
            for obj, _w in members:
                got = _poly_record(r_poly(obj.bottom, obj.top))
                if got != expected:
                    report("coelementary-invariance-broken", anchor, obj, "R", expected, got)
        return _result(check, ctx.label, key, examined, 0, violations)

    if check == "invariance-atoms":
        for rep, members in _classify(objs, _iso_for_check(check, spec)):
            anchor_profile = _profile_atoms(rep)
            rep_interval, rep_J = rep
            for obj, w in members[1:]:
                profile = _profile_atoms(obj)
                for name, expected in anchor_profile.items():
                    if profile[name] != expected:
                        report("atom-invariance-broken", rep, obj, name, expected, profile[name])
                if w is not None and not check_nondominated_transport(w, rep_J, obj[1]):
                    report("transport-broken", rep, obj, "non-dominated-set", None, None)
        return _result(check, ctx.label, key, examined, 0, violations)

    if check == "invariance-quotient":
        for rep, members in _classify(objs, _iso_for_check(check, spec)):
            anchor_profile = _profile_quotient(rep)
            for obj, _w in members[1:]:
                profile = _profile_quotient(obj)
                for name, expected in anchor_profile.items():
                    if profile[name] != expected:
                        report("quotient-invariance-broken", rep, obj, name, expected, profile[name])
        return _result(check, ctx.label, key, examined, 0, violations)

    if check in ("lower-intervals", "short-edge-intervals"):
        # atom-respecting equivalence: R at both x and P at x=q must match
        for rep, members in _classify(objs, _iso_for_check("invariance-atoms", spec)):
            anchor = _pick_anchor(check, ctx, members)
            if anchor is None:
                continue
            anchor_profile = _profile_atoms(anchor)
            for obj, _w in members:
                if obj is anchor:
                    continue
                profile = _profile_atoms(obj)
                for name, expected in anchor_profile.items():
                    if profile[name] != expected:
                        report(f"{check}-broken", anchor, obj, name, expected, profile[name])
        # quotient-respecting equivalence additionally pins P at both x
        for rep, members in _classify(objs, _iso_for_check("invariance-quotient", spec)):
            anchor = _pick_anchor(check, ctx, members)
            if anchor is None:
                continue
            anchor_profile = _profile_quotient(anchor)
            for obj, _w in members:
                if obj is anchor:
                    continue
                profile = _profile_quotient(obj)
                for name, expected in anchor_profile.items():
                    if profile[name] != expected:
                        report(f"{check}-quotient-broken", anchor, obj, name, expected, profile[name])
        return _result(check, ctx.label, key, examined, 0, violations)

    raise HarnessError(f"no bucket runner for check {check!r}")


def _pick_anchor(check: str, ctx: SystemContext, members):
    """The class member whose interval class makes the theorem applicable."""
    for obj, _w in members:
        interval = obj[0]
        if check == "lower-intervals":
            if is_lower_interval(interval):
                return obj
        elif check == "short-edge-intervals":
            if interval.height <= 2:
                return obj
            graphed = ctx.interval(interval.bottom, interval.top, graph=True)
            if is_short_edge(graphed):
                return obj
    return None


def _run_remark_example():
    try:
        record = reproduce_remark()
    except HarnessError as exc:
        return _result(
            "remark-example",
            "A3",
            "all",
            examined=1,
            violations=[{"kind": "remark-mismatch", "detail": str(exc)}],
        )
    return _result("remark-example", "A3", "all", examined=1)


# ---------------------------------------------------------------------------
# The symmetric-group example behind the x = -1 restriction


def reproduce_remark() -> dict:
    """Recompute the S4 example showing that atom-respecting isomorphisms do
    not control the parabolic P-polynomials at x = -1.

    Both intervals [e, s1 s2 s3] and [e, s2 s1 s3] are Boolean of size 8;
    with J1 = {s1} and J2 = {s2} both atom sets have two elements and an
    atom-respecting isomorphism exists, yet P at x = -1 is 1 on one side
    and 1 + q on the other.  P at x = q agrees on both sides.  Any
    deviation from these values raises HarnessError.
    """
    sys = build_system("A3")
    e = sys.identity()
    v1 = sys.from_word([0, 1, 2])
    v2 = sys.from_word([1, 0, 2])
    J1, J2 = frozenset([0]), frozenset([1])

    i1 = build_interval(e, v1)
    i2 = build_interval(e, v2)
    fp1, fp2 = fingerprint(i1), fingerprint(i2)
    a1 = atoms_in_quotient(e, v1, J1)
    a2 = atoms_in_quotient(e, v2, J2)
    witnesses = find_isomorphisms(i1, i2, ("atoms", J1, J2), limit=1)
    p1_minus = parabolic_p_poly(e, v1, J1, "-1")
    p2_minus = parabolic_p_poly(e, v2, J2, "-1")
    p1_q = parabolic_p_poly(e, v1, J1, "q")
    p2_q = parabolic_p_poly(e, v2, J2, "q")

    record = {
        "group": "A3",
        "u": "e",
        "v1": v1.word_str(),
        "v2": v2.word_str(),
        "J1": _subset_key(J1),
        "J2": _subset_key(J2),
        "interval_sizes": [i1.size, i2.size],
        "rank_vectors": [list(fp1.rank_vector), list(fp2.rank_vector)],
        "atom_counts": [len(a1), len(a2)],
        "atom_respecting_iso_found": bool(witnesses),
        "iso_mapping": witnesses[0].as_pairs() if witnesses else None,
        "p_J1_xminus1": _poly_record(p1_minus),
        "p_J2_xminus1": _poly_record(p2_minus),
        "p_J1_xq": _poly_record(p1_q),
        "p_J2_xq": _poly_record(p2_q),
    }

    boolean_rank_vector = [1, 3, 3, 1]
    problems = []
    if record["interval_sizes"] != [8, 8]:
        problems.append(f"interval sizes {record['interval_sizes']} != [8, 8]")
    if record["rank_vectors"] != [boolean_rank_vector] * 2 or fp1 != fp2:
        problems.append("intervals are not both Boolean of rank 3")
    if record["atom_counts"] != [2, 2]:
        problems.append(f"atom counts {record['atom_counts']} != [2, 2]")
    if not witnesses:
        problems.append("no atom-respecting isomorphism found")
    if record["p_J1_xminus1"] != [1]:
        problems.append(f"P at x=-1 on side 1 is {record['p_J1_xminus1']}, expected [1]")
    if record["p_J2_xminus1"] != [1, 1]:
        problems.append(f"P at x=-1 on side 2 is {record['p_J2_xminus1']}, expected [1, 1]")
    if record["p_J1_xq"] != record["p_J2_xq"]:
        problems.append("P at x=q disagrees between the two sides")
    if problems:
        raise HarnessError("; ".join(problems))
    return record


# ---------------------------------------------------------------------------
# Campaign execution


_RUNTIME: dict = {}


def _unit_descriptors(spec: CampaignSpec, contexts: list[SystemContext]):
    units = []
    for check in CHECK_NAMES:
        if check not in spec.checks:
            continue
        if check == "remark-example":
            units.append((check, None, "all"))
            continue
        for idx, ctx in enumerate(contexts):
            if check == "w0-duality":
                units.append((check, idx, "all"))
            elif check == "projection-monotone" or check == "coset-slice":
                for J in ctx.subsets():
                    units.append((check, idx, f"J={_subset_key(J)}"))
            elif check in ("deodhar-sums", "defining-audit"):
                for J in ctx.subsets():
                    for x in klpoly.X_VALUES:
                        units.append((check, idx, f"J={_subset_key(J)};x={x}"))
            elif check == "coelementary-intervals" and not isinstance(
                ctx.system.backend, PermutationBackend
            ):
                units.append((check, idx, "all"))
            elif check in _BUCKETED_CHECKS:
                buckets, _skipped = _objects_for_check(check, ctx, spec)
                for key in sorted(buckets):
                    units.append((check, idx, key))
    return units


def _parse_subset(ctx: SystemContext, text: str) -> frozenset[int]:
    if text == "-":
        return frozenset()
    return frozenset(int(p) - 1 for p in text.split(","))


def _run_unit(task):
    check, idx, key = task
    spec: CampaignSpec = _RUNTIME["spec"]
    if check == "remark-example":
        return _run_remark_example()
    ctx: SystemContext = _RUNTIME["contexts"][idx]
    if check == "projection-monotone":
        return _run_projection_monotone(ctx, spec, _parse_subset(ctx, key[2:]))
    if check == "coset-slice":
        return _run_coset_slice(ctx, spec, _parse_subset(ctx, key[2:]))
    if check in ("deodhar-sums", "defining-audit"):
        j_part, x_part = key.split(";")
        J = _parse_subset(ctx, j_part[2:])
        x = x_part[2:]
        if check == "deodhar-sums":
            return _run_deodhar_sums(ctx, spec, J, x)
        return _run_defining_audit(ctx, spec, J, x)
    if check == "w0-duality":
        return _run_w0_duality(ctx, spec)
    if check in _BUCKETED_CHECKS:
        return _run_bucket(ctx, spec, check, key)
    raise HarnessError(f"no runner for check {check!r}")


def run_campaign(spec: CampaignSpec) -> dict:
    """Run every configured check and return the (deterministic) report."""
    contexts = [SystemContext(desc) for desc in spec.systems]
    labels = [ctx.label for ctx in contexts]
    if len(set(labels)) != len(labels):
        raise HarnessError("campaign systems must be distinct")

    _RUNTIME["spec"] = spec
    _RUNTIME["contexts"] = contexts
    units = _unit_descriptors(spec, contexts)

    if spec.parallelism == 1:
        results = [_run_unit(u) for u in units]
    else:
        # fork so workers inherit the prepared contexts
        mp = multiprocessing.get_context("fork")
        with mp.Pool(spec.parallelism) as pool:
            results = pool.map(_run_unit, units, chunksize=1)

    # cap-skip accounting is global per (check, system), attributed once
    skip_rows = []
    for check in spec.checks:
        if check not in _BUCKETED_CHECKS:
            continue
        for ctx in contexts:
            _, skipped = _interval_corpus(ctx, spec)
            if skipped:
                skip_rows.append(
                    _result(check, ctx.label, "capped-intervals", 0, skipped)
                )
    results.extend(skip_rows)
    order = {name: i for i, name in enumerate(CHECK_NAMES)}
    label_order = {label: i for i, label in enumerate(labels)}
    label_order[None] = -1
    results.sort(
        key=lambda r: (order[r["check"]], label_order.get(r["system"], 99), r["unit"])
    )

    aggregates: dict[tuple, dict] = {}
    for r in results:
        agg = aggregates.setdefault(
            (r["check"], r["system"]),
            {
                "check": r["check"],
                "system": r["system"],
                "examined": 0,
                "skipped": 0,
                "violations": [],
                "notes": [],
            },
        )
        agg["examined"] += r["examined"]
        agg["skipped"] += r["skipped"]
        agg["violations"].extend(r["violations"])
        if r.get("note"):
            agg["notes"].append(r["note"])

    summary = [aggregates[k] for k in sorted(
        aggregates, key=lambda k: (order[k[0]], label_order.get(k[1], 99))
    )]
    total_violations = sum(len(s["violations"]) for s in summary)
    report = {
        "schema_version": SCHEMA_VERSION,
        "spec": spec.to_dict(),
        "corpus_checksums": {ctx.label: ctx.corpus_checksum() for ctx in contexts},
        "results": summary,
        "total_violations": total_violations,
        "conjecture_violations": sum(
            len(s["violations"]) for s in summary if s["check"] in CONJECTURE_CHECKS
        ),
    }
    if spec.output_path:
        with open(spec.output_path, "w") as fh:
            fh.write(report_to_json(report))
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_to_text(report: dict) -> str:
    lines = ["verification report", "==================="]
    for row in report["results"]:
        status = "ok" if not row["violations"] else f"{len(row['violations'])} VIOLATIONS"
        sysname = row["system"] or "-"
        lines.append(
            f"{row['check']:<24} {sysname:<16} examined={row['examined']:<8}"
            f" skipped={row['skipped']:<6} {status}"
        )
        for note in row["notes"]:
            lines.append(f"    note: {note}")
    if report["conjecture_violations"]:
        lines.append("")
        lines.append("*** POSSIBLE DISPROOF OR BUG: conjectural invariance violated ***")
        lines.append("*** full witness data is in the machine-readable report ***")
    lines.append("")
    lines.append(f"total violations: {report['total_violations']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Table dumps and polynomial caches


@dataclass(frozen=True)
class PolyTable:
    """All nonzero polynomials of one kind over a quotient, serialized."""

    system_checksum: str
    J: tuple[int, ...]
    x: str
    kind: str
    entries: tuple[tuple[str, str, tuple[int, ...]], ...]


def compute_table(system: CoxeterSystem, J: Iterable[int], x: str, kind: str) -> PolyTable:
    if kind not in ("R", "P"):
        raise HarnessError("kind must be 'R' or 'P'")
    J = system.check_subset(J)
    ctx = SystemContext(system.description())
    quotient = [w for w in ctx.corpus() if system.is_min_coset_rep(w, J)]
    fn = parabolic_r_poly if kind == "R" else parabolic_p_poly
    entries = []
    for u in quotient:
        for v in quotient:
            if not bruhat_leq(u, v):
                continue
            p = fn(u, v, J, x)
            if not p.is_zero():
                entries.append((u.word_str() or "e", v.word_str() or "e", p.coeffs))
    entries.sort()
    return PolyTable(
        system_checksum=system.checksum(),
        J=tuple(sorted(J)),
        x=x,
        kind=kind,
        entries=tuple(entries),
    )


def table_dump(system: CoxeterSystem, J: Iterable[int], x: str, kind: str, path: str) -> PolyTable:
    """Write all nonzero polynomials for u <= v in W^J to ``path``."""
    table = compute_table(system, J, x, kind)
    cache_store(path, table, system_description=system.description())
    return table


class CacheError(HarnessError):
    """Corrupt, mismatched, or incompatible cache file."""


def cache_store(path: str, table: PolyTable, system_description: Optional[dict] = None) -> None:
    payload = {
        "system_checksum": table.system_checksum,
        "J": [s + 1 for s in table.J],
        "x": table.x,
        "kind": table.kind,
        "entries": [[u, v, list(c)] for u, v, c in table.entries],
    }
    if system_description is not None:
        payload["system"] = system_description
    blob = json.dumps(payload, sort_keys=True)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "payload": payload,
        "payload_sha256": hashlib.sha256(blob.encode()).hexdigest(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def cache_load(path: str, expected_system_checksum: Optional[str] = None) -> PolyTable:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheError(f"unreadable cache file {path}: {exc}") from exc
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise CacheError(
            f"cache schema version {doc.get('schema_version')} != {SCHEMA_VERSION}"
        )
    payload = doc.get("payload", {})
    blob = json.dumps(payload, sort_keys=True)
    if hashlib.sha256(blob.encode()).hexdigest() != doc.get("payload_sha256"):
        raise CacheError(f"cache file {path} failed its checksum")
    table = PolyTable(
        system_checksum=payload["system_checksum"],
        J=tuple(s - 1 for s in payload["J"]),
        x=payload["x"],
        kind=payload["kind"],
        entries=tuple((u, v, tuple(c)) for u, v, c in payload["entries"]),
    )
    if (
        expected_system_checksum is not None
        and table.system_checksum != expected_system_checksum
    ):
        raise CacheError("cache was computed for a different system")
    return table
