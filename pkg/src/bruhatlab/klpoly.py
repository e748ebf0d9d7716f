"""Ordinary and parabolic Kazhdan-Lusztig R- and P-polynomials.

Every parabolic polynomial has two independent computation routes:

* the defining three-branch recursion (default, memoized), and
* Deodhar's alternating sums over the parabolic subgroup (the oracle).

The harness cross-checks the routes on whole corpora; here each is
implemented without reference to the other.  Coefficients are Python
integers, so there is no overflow to worry about.

The parameter ``x`` of the parabolic families takes the values -1 and q,
passed as the strings ``"-1"`` and ``"q"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .bruhat import bruhat_leq, interval_elements
from .coxeter import CoxeterError, CoxeterSystem, Element

X_VALUES = ("-1", "q")


class KLError(CoxeterError):
    """Inconsistent polynomial data; indicates an upstream bug."""


# ---------------------------------------------------------------------------
# Dense integer polynomials in q


@dataclass(frozen=True)
class Poly:
    """A polynomial in q with integer coefficients, lowest degree first.

    The coefficient tuple never has trailing zeros; the zero polynomial is
    the empty tuple.
    """

    coeffs: tuple[int, ...] = ()

    @staticmethod
    def of(coeffs: Sequence[int]) -> "Poly":
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        return Poly(tuple(c))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly.of(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return ZERO
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly.of(out)

    def shifted(self, k: int) -> "Poly":
        """Multiplication by q^k."""
        if self.is_zero():
            return ZERO
        return Poly((0,) * k + self.coeffs)

    def reversed_to(self, h: int) -> "Poly":
        """q^h * self(1/q); requires degree <= h."""
        if self.degree > h:
            raise KLError(f"cannot reverse degree {self.degree} into degree {h}")
        out = [0] * (h + 1)
        for i, c in enumerate(self.coeffs):
            out[h - i] = c
        return Poly.of(out)

    def coeff(self, d: int) -> int:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else 0

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for d, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if d == 0:
                terms.append(str(c))
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            var = "q" if d == 1 else f"q^{d}"
            sign = "-" if c < 0 else ("+" if terms else "")
            terms.append(f"{sign}{mag}{var}")
        return "".join(terms)


ZERO = Poly()
ONE = Poly((1,))
Q = Poly((0, 1))
Q_MINUS_1 = Poly((-1, 1))


# ---------------------------------------------------------------------------
# Shared helpers


def _check_x(x: str) -> str:
    if x not in X_VALUES:
        raise KLError(f"x must be one of {X_VALUES}, not {x!r}")
    return x


def _check_quotient_pair(u: Element, v: Element, J: frozenset[int]) -> CoxeterSystem:
    sys = u.system
    if v.system is not sys:
        raise CoxeterError("elements belong to different systems")
    if not (sys.is_min_coset_rep(u, J) and sys.is_min_coset_rep(v, J)):
        raise KLError("endpoints must lie in the parabolic quotient W^J")
    return sys


def _quotient_interval(sys: CoxeterSystem, u: Element, v: Element, J: frozenset[int]) -> list[Element]:
    return [y for y in interval_elements(u, v) if sys.is_min_coset_rep(y, J)]


# ---------------------------------------------------------------------------
# R-polynomials: defining recursion


def parabolic_r_poly(u: Element, v: Element, J: Iterable[int] = (), x: str = "q") -> Poly:
    """The parabolic R-polynomial of u, v in W^J, by the defining recursion.

    The recursion peels the smallest-index left descent s of v and branches
    on whether su drops in length and whether su stays in W^J; the third
    branch multiplies by q - 1 - x, i.e. by q when x = -1 and by -1 when
    x = q.
    """
    x = _check_x(x)
    sys = u.system
    J = sys.check_subset(J)
    _check_quotient_pair(u, v, J)
    return _r_rec(sys, u, v, J, x)


def r_poly(u: Element, v: Element) -> Poly:
    """The ordinary R-polynomial (the parabolic one at J = empty)."""
    sys = u.system
    if v.system is not sys:
        raise CoxeterError("elements belong to different systems")
    return _r_rec(sys, u, v, frozenset(), "q")


def _r_rec(sys: CoxeterSystem, u: Element, v: Element, J: frozenset[int], x: str) -> Poly:
    if u == v:
        return ONE
    if not bruhat_leq(u, v):
        return ZERO
    cache = sys._caches.setdefault("r_poly", {})
    key = (u.data, v.data, J, x)
    hit = cache.get(key)
    if hit is not None:
        return hit
    s = min(v.left_descents())
    sv = sys.mul_gen(v, s, "left")
    su = sys.mul_gen(u, s, "left")
    if su.length < u.length:
        out = _r_rec(sys, su, sv, J, x)
    elif sys.is_min_coset_rep(su, J):
        out = Q_MINUS_1 * _r_rec(sys, u, sv, J, x) + Q * _r_rec(sys, su, sv, J, x)
    else:
        mult = Q if x == "-1" else Poly((-1,))  # q - 1 - x
        out = mult * _r_rec(sys, u, sv, J, x)
    cache[key] = out
    return out


# ---------------------------------------------------------------------------
# R-polynomials: Deodhar's sum


def deodhar_r_sum(u: Element, v: Element, J: Iterable[int], x: str) -> Poly:
    """The sum of (-x)^l(w) R_{uw,v} over w in W_J.

    Since u is a minimal coset representative, l(uw) = l(u) + l(w), so only
    w of length at most l(v) - l(u) can satisfy uw <= v; the tail vanishes
    without needing W_J to be finite.
    """
    x = _check_x(x)
    sys = u.system
    J = sys.check_subset(J)
    _check_quotient_pair(u, v, J)
    budget = v.length - u.length
    if budget < 0:
        return ZERO
    total = ZERO
    for w in sys.parabolic_subgroup_elements(J, budget):
        uw = sys.mul(u, w)
        r = _r_rec(sys, uw, v, frozenset(), "q")
        if r.is_zero():
            continue
        lw = w.length
        if x == "-1":
            total = total + r
        else:
            term = r.shifted(lw)
            total = total + (term if lw % 2 == 0 else -term)
    return total


# ---------------------------------------------------------------------------
# P-polynomials


def parabolic_p_poly(u: Element, v: Element, J: Iterable[int] = (), x: str = "q") -> Poly:
    """The parabolic Kazhdan-Lusztig polynomial of u, v in W^J.

    Computed top-down: the combination D(q) of R- and higher P-polynomials
    over the quotient interval determines the strictly-upper-half
    coefficients of q^h P(1/q) - P(q); the degree bound makes the solution
    unique, and the mirrored lower half of D is asserted as a consistency
    check.
    """
    x = _check_x(x)
    sys = u.system
    J = sys.check_subset(J)
    _check_quotient_pair(u, v, J)
    return _p_rec(sys, u, v, J, x)


def p_poly(u: Element, v: Element) -> Poly:
    """The ordinary Kazhdan-Lusztig polynomial (J = empty)."""
    sys = u.system
    if v.system is not sys:
        raise CoxeterError("elements belong to different systems")
    return _p_rec(sys, u, v, frozenset(), "q")


def _p_rec(sys: CoxeterSystem, u: Element, v: Element, J: frozenset[int], x: str) -> Poly:
    if u == v:
        return ONE
    if not bruhat_leq(u, v):
        return ZERO
    cache = sys._caches.setdefault("p_poly", {})
    key = (u.data, v.data, J, x)
    hit = cache.get(key)
    if hit is not None:
        return hit

    h = v.length - u.length
    d_poly = ZERO
    for sigma in _quotient_interval(sys, u, v, J):
        if sigma == u:
            continue
        d_poly = d_poly + _r_rec(sys, u, sigma, J, x) * _p_rec(sys, sigma, v, J, x)

    if d_poly.degree > h:
        raise KLError(f"defining sum has degree {d_poly.degree} > height {h}")
    # q^h P(1/q) - P(q) = D(q); P is read off the upper half of D
    coeffs = [d_poly.coeff(h - j) for j in range((h - 1) // 2 + 1)]
    out = Poly.of(coeffs)
    for d in range((h + 1) // 2):
        if d_poly.coeff(d) != -out.coeff(d):
            raise KLError(
                f"lower-half coefficient mismatch at degree {d} for heights {h}"
            )
    if h % 2 == 0 and d_poly.coeff(h // 2) != 0:
        raise KLError("middle coefficient of the defining sum must vanish")
    cache[key] = out
    return out


def deodhar_p_sum(u: Element, v: Element, J: Iterable[int]) -> Poly:
    """The alternating sum of ordinary P_{uw,v} over w in W_J (the x = q oracle)."""
    sys = u.system
    J = sys.check_subset(J)
    _check_quotient_pair(u, v, J)
    budget = v.length - u.length
    if budget < 0:
        return ZERO
    total = ZERO
    for w in sys.parabolic_subgroup_elements(J, budget):
        p = _p_rec(sys, sys.mul(u, w), v, frozenset(), "q")
        if p.is_zero():
            continue
        total = total + (p if w.length % 2 == 0 else -p)
    return total


# ---------------------------------------------------------------------------
# Identities


def w0_dual_r_check(u: Element, v: Element) -> bool:
    """Whether R_{u,v} equals R_{w0 v, w0 u} (duality under the longest element)."""
    sys = u.system
    if v.system is not sys:
        raise CoxeterError("elements belong to different systems")
    w0 = sys.longest_element()
    return r_poly(u, v) == r_poly(sys.mul(w0, v), sys.mul(w0, u))


# ---------------------------------------------------------------------------
# Definitional audits (re-check computed families against their defining
# conditions, using every admissible descent rather than the fixed one)


def audit_r_family(sys: CoxeterSystem, J: Iterable[int], x: str, corpus: Sequence[Element]) -> list[dict]:
    """Violations of the R-family's defining conditions over a corpus."""
    x = _check_x(x)
    J = sys.check_subset(J)
    quotient = [w for w in corpus if sys.is_min_coset_rep(w, J)]
    bad: list[dict] = []

    def record(u, v, reason):
        bad.append({"u": u.word_str(), "v": v.word_str(), "reason": reason})

    for v in quotient:
        for u in quotient:
            r = _r_rec(sys, u, v, J, x)
            if not bruhat_leq(u, v):
                if not r.is_zero():
                    record(u, v, "nonzero below an incomparable pair")
                continue
            if u == v:
                if r != ONE:
                    record(u, v, "diagonal value is not 1")
                continue
            for s in v.left_descents():
                sv = sys.mul_gen(v, s, "left")
                su = sys.mul_gen(u, s, "left")
                if su.length < u.length:
                    expect = _r_rec(sys, su, sv, J, x)
                elif sys.is_min_coset_rep(su, J):
                    expect = (
                        Q_MINUS_1 * _r_rec(sys, u, sv, J, x)
                        + Q * _r_rec(sys, su, sv, J, x)
                    )
                else:
                    mult = Q if x == "-1" else Poly((-1,))
                    expect = mult * _r_rec(sys, u, sv, J, x)
                if r != expect:
                    record(u, v, f"recursion fails at left descent s{s + 1}")
    return bad


def audit_p_family(sys: CoxeterSystem, J: Iterable[int], x: str, corpus: Sequence[Element]) -> list[dict]:
    """Violations of the P-family's defining conditions over a corpus."""
    x = _check_x(x)
    J = sys.check_subset(J)
    quotient = [w for w in corpus if sys.is_min_coset_rep(w, J)]
    bad: list[dict] = []

    def record(u, v, reason):
        bad.append({"u": u.word_str(), "v": v.word_str(), "reason": reason})

    for v in quotient:
        for u in quotient:
            p = _p_rec(sys, u, v, J, x)
            if not bruhat_leq(u, v):
                if not p.is_zero():
                    record(u, v, "nonzero below an incomparable pair")
                continue
            if u == v:
                if p != ONE:
                    record(u, v, "diagonal value is not 1")
                continue
            h = v.length - u.length
            if 2 * p.degree > h - 1:
                record(u, v, "degree bound violated")
            total = ZERO
            for sigma in _quotient_interval(sys, u, v, J):
                total = total + _r_rec(sys, u, sigma, J, x) * _p_rec(sys, sigma, v, J, x)
            if total != p.reversed_to(h):
                record(u, v, "inversion identity fails")
    return bad
