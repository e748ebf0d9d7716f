"""Coxeter systems (W, S) with exact element arithmetic.

Elements are immutable values carrying backend-native data:

* type A_n  -- one-line permutations of {1, ..., n+1},
* type B_n  -- signed permutations (window notation),
* type D_n  -- even-signed permutations,
* generic   -- shortlex-minimal reduced words for an arbitrary Coxeter
               matrix, normalized by exhaustive braid/nil rewriting.

Generator indices are 0-based internally; user-facing text is 1-based
(s1, s2, ...).  For B_n the bond of order 4 sits between the last two
generators; for D_n the fork is at the last generator.  Infinite groups
must be constructed with an explicit length cap, and every enumeration
refuses to run past it.

All values are immutable after construction.  The word backend keeps an
internal normalization cache; it only ever stores canonical results, so
concurrent use can at worst recompute an entry.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import sympy

INFINITE_BOND = 0  # matrix encoding of m(s, t) = infinity


class CoxeterError(ValueError):
    """Malformed system description or operation outside its domain."""


class LengthCapError(CoxeterError):
    """An enumeration would have to run past the configured length cap."""


# ---------------------------------------------------------------------------
# Coxeter matrices


def type_a_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    """Coxeter matrix of A_n: m(s_i, s_{i+1}) = 3, all other bonds 2."""
    return tuple(
        tuple(1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(n))
        for i in range(n)
    )


def type_b_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    """Coxeter matrix of B_n, with the order-4 bond between the last two generators."""
    if n < 2:
        raise CoxeterError("type B needs rank >= 2")
    rows = [list(row) for row in type_a_matrix(n)]
    rows[n - 2][n - 1] = rows[n - 1][n - 2] = 4
    return tuple(tuple(row) for row in rows)


def type_d_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    """Coxeter matrix of D_n: path s_1..s_{n-1} with s_n forking off s_{n-2}."""
    if n < 3:
        raise CoxeterError("type D needs rank >= 3")
    m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i in range(n - 2):
        m[i][i + 1] = m[i + 1][i] = 3
    m[n - 3][n - 1] = m[n - 1][n - 3] = 3
    return tuple(tuple(row) for row in m)


def type_h_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    """Coxeter matrix of H_3 or H_4 (order-5 bond at the front of the path)."""
    if n not in (3, 4):
        raise CoxeterError("type H exists only in ranks 3 and 4")
    rows = [list(row) for row in type_a_matrix(n)]
    rows[0][1] = rows[1][0] = 5
    return tuple(tuple(row) for row in rows)


def affine_a2_matrix() -> tuple[tuple[int, ...], ...]:
    """The rank-3 matrix with all off-diagonal bonds 3 (an infinite group)."""
    return tuple(
        tuple(1 if i == j else 3 for j in range(3)) for i in range(3)
    )


def validate_matrix(matrix: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    m = tuple(tuple(int(x) for x in row) for row in matrix)
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise CoxeterError("Coxeter matrix must be square and nonempty")
    for i in range(n):
        if m[i][i] != 1:
            raise CoxeterError("Coxeter matrix diagonal must be 1")
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise CoxeterError("Coxeter matrix must be symmetric")
            if i != j and m[i][j] != INFINITE_BOND and m[i][j] < 2:
                raise CoxeterError("off-diagonal bond orders must be >= 2 (0 encodes infinity)")
    return m


def is_finite_matrix(matrix: Sequence[Sequence[int]]) -> bool:
    """Whether the Coxeter group of this matrix is finite.

    Uses the classical criterion: W is finite iff the cosine bilinear form
    with entries -cos(pi/m(s,t)) is positive definite.  The check is done
    exactly with sympy, so affine matrices (determinant 0) are classified
    correctly.
    """
    n = len(matrix)

    def entry(i: int, j: int):
        m = matrix[i][j]
        if m == INFINITE_BOND:
            return sympy.Integer(-1)
        return -sympy.cos(sympy.pi / m)

    gram = sympy.Matrix(n, n, lambda i, j: entry(i, j))
    return bool(gram.is_positive_definite)


# ---------------------------------------------------------------------------
# Backends


class PermutationBackend:
    """Type A_n as the symmetric group S_{n+1}, one-line windows over 1..n+1."""

    name = "permutation"

    def __init__(self, rank: int):
        self.rank = rank
        self.n = rank + 1

    def identity(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def apply_gen(self, data: tuple[int, ...], s: int) -> tuple[int, ...]:
        w = list(data)
        w[s], w[s + 1] = w[s + 1], w[s]
        return tuple(w)

    def length(self, data: tuple[int, ...]) -> int:
        n = self.n
        return sum(
            1 for i in range(n) for j in range(i + 1, n) if data[i] > data[j]
        )

    def inverse(self, data: tuple[int, ...]) -> tuple[int, ...]:
        inv = [0] * self.n
        for i, v in enumerate(data):
            inv[v - 1] = i + 1
        return tuple(inv)


class SignedPermutationBackend:
    """Types B_n / D_n as (even-)signed permutations in window notation.

    Generators 0..n-2 are the adjacent transpositions; the last generator
    is the sign flip of the last entry (type B) or the signed swap of the
    last two entries (type D).
    """

    name_b = "signed-permutation"
    name_d = "even-signed-permutation"

    def __init__(self, rank: int, even: bool):
        self.rank = rank
        self.n = rank
        self.even = even
        self.name = self.name_d if even else self.name_b

    def identity(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def apply_gen(self, data: tuple[int, ...], s: int) -> tuple[int, ...]:
        w = list(data)
        if s < self.n - 1:
            w[s], w[s + 1] = w[s + 1], w[s]
        elif self.even:
            w[-2], w[-1] = -w[-1], -w[-2]
        else:
            w[-1] = -w[-1]
        return tuple(w)

    def length(self, data: tuple[int, ...]) -> int:
        # Mirror to the textbook convention (special generator acting on the
        # first position) and apply the standard length formulas there.
        n = self.n
        w = tuple(
            (1 if v > 0 else -1) * (n + 1 - abs(v))
            for v in reversed(data)
        )
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])
        if self.even:
            neg = sum(abs(v) - 1 for v in w if v < 0)
        else:
            neg = sum(abs(v) for v in w if v < 0)
        return inv + neg

    def inverse(self, data: tuple[int, ...]) -> tuple[int, ...]:
        inv = [0] * self.n
        for i, v in enumerate(data):
            if v > 0:
                inv[v - 1] = i + 1
            else:
                inv[-v - 1] = -(i + 1)
        return tuple(inv)


class WordBackend:
    """Arbitrary Coxeter matrices via shortlex-minimal reduced words.

    Normalization explores the braid class of a word (Tits' solution of the
    word problem): if any braid-equivalent word has two equal adjacent
    letters the pair is deleted and normalization recurses, otherwise the
    shortlex minimum of the class is the canonical form.  Exhaustive, hence
    only suitable at desk scale; results are memoized.
    """

    name = "generic-word"

    def __init__(self, matrix: tuple[tuple[int, ...], ...]):
        self.rank = len(matrix)
        self.matrix = matrix
        self._append_cache: dict[tuple[tuple[int, ...], int], tuple[int, ...]] = {}

    def identity(self) -> tuple[int, ...]:
        return ()

    def apply_gen(self, data: tuple[int, ...], s: int) -> tuple[int, ...]:
        return self._append(data, s)

    def length(self, data: tuple[int, ...]) -> int:
        return len(data)

    def inverse(self, data: tuple[int, ...]) -> tuple[int, ...]:
        return self.normalize(tuple(reversed(data)))

    def normalize(self, word: Sequence[int]) -> tuple[int, ...]:
        canon: tuple[int, ...] = ()
        for s in word:
            canon = self._append(canon, s)
        return canon

    def _append(self, canon: tuple[int, ...], s: int) -> tuple[int, ...]:
        key = (canon, s)
        cached = self._append_cache.get(key)
        if cached is not None:
            return cached
        result = self._reduce(canon + (s,))
        self._append_cache[key] = result
        return result

    def _reduce(self, word: tuple[int, ...]) -> tuple[int, ...]:
        seen = {word}
        queue = deque([word])
        best = word
        while queue:
            cur = queue.popleft()
            for i in range(len(cur) - 1):
                if cur[i] == cur[i + 1]:
                    return self.normalize(cur[:i] + cur[i + 2:])
            if cur < best:
                best = cur
            for i in range(len(cur) - 1):
                a, b = cur[i], cur[i + 1]
                m = self.matrix[a][b]
                if m == INFINITE_BOND or i + m > len(cur):
                    continue
                segment = cur[i:i + m]
                if all(segment[k] == (a if k % 2 == 0 else b) for k in range(m)):
                    flipped = tuple(b if k % 2 == 0 else a for k in range(m))
                    nxt = cur[:i] + flipped + cur[i + m:]
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        return best


# ---------------------------------------------------------------------------
# Systems and elements


@dataclass(frozen=True)
class Element:
    """A group element in canonical form.

    Equality and hashing use only the canonical backend data; all
    operations check that both operands belong to the same system.
    """

    system: "CoxeterSystem" = field(compare=False, repr=False, hash=False)
    data: tuple[int, ...] = ()

    def __repr__(self) -> str:
        return f"Element({self.word_str() or 'e'})"

    @property
    def length(self) -> int:
        return self.system.backend.length(self.data)

    def times_gen(self, s: int, side: str = "right") -> "Element":
        return self.system.mul_gen(self, s, side)

    def inverse(self) -> "Element":
        return Element(self.system, self.system.backend.inverse(self.data))

    def word(self) -> tuple[int, ...]:
        return self.system.word_of(self)

    def word_str(self) -> str:
        return ",".join(str(s + 1) for s in self.word())

    def right_descents(self) -> frozenset[int]:
        return self.system.descents(self, "right")

    def left_descents(self) -> frozenset[int]:
        return self.system.descents(self, "left")


class CoxeterSystem:
    """A Coxeter system (W, S): rank, Coxeter matrix, arithmetic backend."""

    def __init__(
        self,
        matrix: Sequence[Sequence[int]],
        backend,
        type_name: str,
        length_cap: Optional[int] = None,
    ):
        self.coxeter_matrix = validate_matrix(matrix)
        self.rank = len(self.coxeter_matrix)
        self.backend = backend
        self.type_name = type_name
        self.length_cap = length_cap
        self.is_finite = is_finite_matrix(self.coxeter_matrix)
        if not self.is_finite and length_cap is None:
            raise CoxeterError(
                "infinite Coxeter group requires an explicit length_cap"
            )
        self._caches: dict[str, dict] = {}

    # -- identity / construction ------------------------------------------

    def identity(self) -> Element:
        return Element(self, self.backend.identity())

    def gen(self, s: int) -> Element:
        self._check_gen(s)
        return Element(self, self.backend.apply_gen(self.backend.identity(), s))

    def from_word(self, word: Iterable[int]) -> Element:
        w = self.identity()
        for s in word:
            w = self.mul_gen(w, s, "right")
        return w

    # -- arithmetic --------------------------------------------------------

    def mul_gen(self, w: Element, s: int, side: str = "right") -> Element:
        self._check_gen(s)
        if side == "right":
            return Element(self, self.backend.apply_gen(w.data, s))
        if side == "left":
            inv = self.backend.inverse(w.data)
            return Element(self, self.backend.inverse(self.backend.apply_gen(inv, s)))
        raise CoxeterError(f"side must be 'left' or 'right', not {side!r}")

    def mul(self, a: Element, b: Element) -> Element:
        data = a.data
        for s in self.word_of(b):
            data = self.backend.apply_gen(data, s)
        return Element(self, data)

    def length(self, w: Element) -> int:
        return self.backend.length(w.data)

    def descents(self, w: Element, side: str = "right") -> frozenset[int]:
        lw = self.length(w)
        return frozenset(
            s for s in range(self.rank)
            if self.mul_gen(w, s, side).length < lw
        )

    def word_of(self, w: Element) -> tuple[int, ...]:
        """A canonical reduced word, peeled off by smallest right descents."""
        cache = self._caches.setdefault("word", {})
        cached = cache.get(w.data)
        if cached is not None:
            return cached
        letters: list[int] = []
        cur = w
        while True:
            d = self.descents(cur, "right")
            if not d:
                break
            s = min(d)
            letters.append(s)
            cur = self.mul_gen(cur, s, "right")
        word = tuple(reversed(letters))
        cache[w.data] = word
        return word

    # -- parabolic structure ----------------------------------------------

    def check_subset(self, J: Iterable[int]) -> frozenset[int]:
        J = frozenset(J)
        if not all(0 <= s < self.rank for s in J):
            raise CoxeterError(f"generator subset {sorted(J)} out of range")
        return J

    def is_min_coset_rep(self, w: Element, J: Iterable[int]) -> bool:
        """Whether w lies in W^J, i.e. has no right descent inside J."""
        J = self.check_subset(J)
        return not (self.descents(w, "right") & J)

    def parabolic_decompose(self, w: Element, J: Iterable[int]) -> tuple[Element, Element]:
        """The unique (w^J, w_J) with w = w^J w_J and lengths adding."""
        J = self.check_subset(J)
        tail: list[int] = []
        cur = w
        while True:
            d = self.descents(cur, "right") & J
            if not d:
                break
            s = min(d)
            tail.append(s)
            cur = self.mul_gen(cur, s, "right")
        return cur, self.from_word(reversed(tail))

    def parabolic_subgroup_elements(self, J: Iterable[int], max_length: int) -> list[Element]:
        """All elements of W_J of length <= max_length, BFS over J-generators."""
        J = sorted(self.check_subset(J))
        if not self.is_finite and self.length_cap is not None and max_length > self.length_cap:
            raise LengthCapError(
                f"requested length {max_length} exceeds cap {self.length_cap}"
            )
        frontier = [self.identity()]
        out = {self.identity().data: self.identity()}
        for _ in range(max_length):
            nxt = []
            for w in frontier:
                lw = w.length
                for s in J:
                    ws = self.mul_gen(w, s, "right")
                    if ws.length > lw and ws.data not in out:
                        out[ws.data] = ws
                        nxt.append(ws)
            frontier = nxt
        return sorted(out.values(), key=lambda w: (w.length, w.data))

    # -- enumeration -------------------------------------------------------

    def enumerate_up_to_length(self, max_length: int) -> list[Element]:
        """All w with l(w) <= max_length, each once, sorted by (length, data)."""
        if max_length < 0:
            raise CoxeterError("length bound must be nonnegative")
        if not self.is_finite and (self.length_cap is None or max_length > self.length_cap):
            raise LengthCapError(
                f"requested length {max_length} exceeds cap {self.length_cap}"
            )
        return self._bfs(max_length)

    def elements(self) -> list[Element]:
        """All elements of a finite group."""
        if not self.is_finite:
            raise LengthCapError("cannot enumerate an infinite group exhaustively")
        cache = self._caches.get("all_elements")
        if cache is None:
            cache = self._bfs(None)
            self._caches["all_elements"] = cache
        return cache

    def _bfs(self, max_length: Optional[int]) -> list[Element]:
        e = self.identity()
        out = {e.data: e}
        frontier = [e]
        depth = 0
        while frontier and (max_length is None or depth < max_length):
            depth += 1
            nxt = []
            for w in frontier:
                lw = w.length
                for s in range(self.rank):
                    ws = self.mul_gen(w, s, "right")
                    if ws.length > lw and ws.data not in out:
                        out[ws.data] = ws
                        nxt.append(ws)
            frontier = nxt
        return sorted(out.values(), key=lambda w: (w.length, w.data))

    def longest_element(self) -> Element:
        """w_0 of a finite group, by greedy length ascent."""
        if not self.is_finite:
            raise LengthCapError("infinite group has no longest element")
        cached = self._caches.get("w0")
        if cached is None:
            w = self.identity()
            while True:
                up = [s for s in range(self.rank)
                      if self.mul_gen(w, s, "right").length > w.length]
                if not up:
                    break
                w = self.mul_gen(w, up[0], "right")
            cached = w
            self._caches["w0"] = cached
        return cached

    # -- reflections -------------------------------------------------------

    def reflections(self) -> list[Element]:
        """All reflections of a finite group."""
        if not self.is_finite:
            raise LengthCapError("use reflections_up_to for infinite groups")
        cached = self._caches.get("reflections")
        if cached is None:
            cached = self._conjugate_gens(self.elements())
            self._caches["reflections"] = cached
        return cached

    def reflections_up_to(self, max_length: int) -> list[Element]:
        """All reflections t with l(t) <= max_length.

        Every reflection of length 2k+1 equals w s w^{-1} with l(w) = k, so
        conjugating generators by all elements of length <= (max_length-1)//2
        is exhaustive.
        """
        if self.is_finite:
            return [t for t in self.reflections() if t.length <= max_length]
        key = ("reflections_up_to", max_length)
        cached = self._caches.get(key)
        if cached is None:
            conj = self._conjugate_gens(
                self.enumerate_up_to_length(max(0, (max_length - 1) // 2))
            )
            cached = [t for t in conj if t.length <= max_length]
            self._caches[key] = cached
        return cached

    def _conjugate_gens(self, elements: Iterable[Element]) -> list[Element]:
        out: dict[tuple[int, ...], Element] = {}
        for w in elements:
            word = self.word_of(w)
            for s in range(self.rank):
                t = self.from_word(word + (s,) + tuple(reversed(word)))
                out.setdefault(t.data, t)
        return sorted(out.values(), key=lambda t: (t.length, t.data))

    # -- descriptions ------------------------------------------------------

    def description(self) -> dict:
        """Canonical machine description (consumed by build_system)."""
        desc: dict = {"type": self.type_name}
        if self.type_name == "matrix":
            desc["matrix"] = [list(row) for row in self.coxeter_matrix]
        if self.length_cap is not None:
            desc["length_cap"] = self.length_cap
        return desc

    def checksum(self) -> str:
        payload = dict(self.description())
        payload["matrix"] = [list(row) for row in self.coxeter_matrix]
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def __repr__(self) -> str:
        return f"CoxeterSystem({self.type_name}, rank={self.rank}, backend={self.backend.name})"

    def _check_gen(self, s: int) -> None:
        if not 0 <= s < self.rank:
            raise CoxeterError(f"generator index {s} out of range 0..{self.rank - 1}")


# ---------------------------------------------------------------------------
# Construction from descriptions


_NAMED_MATRICES = {
    "A": type_a_matrix,
    "B": type_b_matrix,
    "D": type_d_matrix,
    "H": type_h_matrix,
}


def build_system(spec, length_cap: Optional[int] = None, backend: Optional[str] = None) -> CoxeterSystem:
    """Build a system from a name ("A3", "B3", "D4", "H3") or a description dict.

    Description dicts have fields ``type`` (a name or "matrix"), optional
    ``matrix`` (row-major, 0 encoding an infinite bond), optional
    ``length_cap``.  An explicit ``backend`` of "generic-word" forces the
    word backend even for named types (used for cross-backend checks).
    """
    if isinstance(spec, str):
        spec = {"type": spec}
    elif not isinstance(spec, dict):
        raise CoxeterError(f"cannot interpret system description {spec!r}")
    spec = dict(spec)
    if length_cap is not None:
        spec.setdefault("length_cap", length_cap)
    cap = spec.get("length_cap")
    if cap is not None:
        cap = int(cap)
        if cap < 0:
            raise CoxeterError("length_cap must be nonnegative")
    backend = backend or spec.get("backend")

    type_name = spec.get("type")
    if type_name == "matrix" or (type_name is None and "matrix" in spec):
        matrix = validate_matrix(spec["matrix"])
        return CoxeterSystem(matrix, WordBackend(matrix), "matrix", cap)

    if not isinstance(type_name, str) or len(type_name) < 2:
        raise CoxeterError(f"unrecognized system type {type_name!r}")
    family, rank_text = type_name[0].upper(), type_name[1:]
    if family not in _NAMED_MATRICES or not rank_text.isdigit():
        raise CoxeterError(f"unrecognized system type {type_name!r}")
    n = int(rank_text)
    if n < 1:
        raise CoxeterError("rank must be positive")
    matrix = _NAMED_MATRICES[family](n) if family != "A" else type_a_matrix(n)

    if backend == WordBackend.name:
        return CoxeterSystem(matrix, WordBackend(matrix), type_name.upper(), cap)
    if backend not in (None, "native"):
        raise CoxeterError(f"unknown backend override {backend!r}")
    if family == "A":
        return CoxeterSystem(matrix, PermutationBackend(n), type_name.upper(), cap)
    if family == "B":
        return CoxeterSystem(matrix, SignedPermutationBackend(n, even=False), type_name.upper(), cap)
    if family == "D":
        return CoxeterSystem(matrix, SignedPermutationBackend(n, even=True), type_name.upper(), cap)
    # H types have no native backend
    return CoxeterSystem(matrix, WordBackend(matrix), type_name.upper(), cap)


def parse_word(text: str) -> tuple[int, ...]:
    """Parse a comma-separated 1-based word like "1,2,3" into 0-based indices."""
    text = text.strip()
    if not text or text in ("e", "-"):
        return ()
    try:
        letters = tuple(int(part) - 1 for part in text.split(","))
    except ValueError as exc:
        raise CoxeterError(f"malformed word {text!r}") from exc
    if any(s < 0 for s in letters):
        raise CoxeterError("generator indices are 1-based and positive")
    return letters
