"""Exact Coxeter group arithmetic over canonical reduced words.

A system is specified by its Coxeter matrix.  A group element is stored as
its canonical word: the lexicographically least reduced word over 0-based
generator indices, so element equality is word equality.  Words are
canonicalized by exhaustive closure under braid moves together with
deletion of adjacent equal letters, which solves the word problem exactly
for every Coxeter matrix.  Off-diagonal matrix entries of 0 encode
m = infinity and admit no braid move.

The closure is exponential in word length, so every system carries a hard
length cap (default 16) and raises :class:`CapacityError` beyond it.  All
values are immutable after construction, operations are pure, and memo
tables behave as write-once caches.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

import numpy as np

INFINITY = 0
DEFAULT_LENGTH_CAP = 16
DEFAULT_ELEMENT_BUDGET = 20000


class CoxeterError(Exception):
    pass


class CapacityError(CoxeterError):
    """A configured length cap or enumeration budget was exceeded."""


class MixedSystemsError(CoxeterError):
    """Operands belong to different Coxeter systems."""


def element_budget(default: int = DEFAULT_ELEMENT_BUDGET) -> int:
    """Enumeration budget, overridable through the WG_MAX_ELEMENTS env var."""
    raw = os.environ.get("WG_MAX_ELEMENTS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise CoxeterError(f"WG_MAX_ELEMENTS is not an integer: {raw!r}") from exc
    if value <= 0:
        raise CoxeterError(f"WG_MAX_ELEMENTS must be positive, got {value}")
    return value


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric matrix of braid orders; entry 0 stands for infinity."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0:
            raise CoxeterError("Coxeter matrix must have positive rank")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise CoxeterError(f"row {i} has length {len(row)}, expected {n}")
        for i in range(n):
            if rows[i][i] != 1:
                raise CoxeterError(f"diagonal entry ({i},{i}) is {rows[i][i]}, must be 1")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise CoxeterError(
                        f"entry ({i},{j})={rows[i][j]} differs from ({j},{i})={rows[j][i]}"
                    )
                if i != j and rows[i][j] != INFINITY and rows[i][j] < 2:
                    raise CoxeterError(
                        f"off-diagonal entry ({i},{j}) is {rows[i][j]}, must be >= 2 or 0"
                    )

    @property
    def rank(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    @classmethod
    def from_lists(cls, rows) -> "CoxeterMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def i2(cls, m: int) -> "CoxeterMatrix":
        """Dihedral matrix; m = 0 gives the infinite dihedral system."""
        return cls(((1, m), (m, 1)))

    @classmethod
    def a(cls, n: int) -> "CoxeterMatrix":
        """Type A_n: a chain of n generators with consecutive braid order 3."""
        rows = [
            [1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(n)]
            for i in range(n)
        ]
        return cls.from_lists(rows)


class Element:
    """Group element as (system, canonical word).  Immutable and hashable."""

    __slots__ = ("system", "word")

    def __init__(self, system: "CoxeterSystem", word: tuple[int, ...]):
        self.system = system
        self.word = word

    @property
    def length(self) -> int:
        return len(self.word)

    def __mul__(self, other: "Element") -> "Element":
        return self.system.mult(self, other)

    def __invert__(self) -> "Element":
        return self.system.inverse(self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and self.system is other.system
            and self.word == other.word
        )

    def __hash__(self) -> int:
        return hash((id(self.system), self.word))

    def __repr__(self) -> str:
        return "e" if not self.word else "*".join(f"s{i}" for i in self.word)

    def is_identity(self) -> bool:
        return not self.word

    def is_generator(self) -> bool:
        return len(self.word) == 1


class _WTable:
    """Dense operation tables over a finite, fully enumerated group.

    Used as the fast path by exhaustive checkers: elements are interned as
    integers and mult/inverse/length/Bruhat/descents become array lookups.
    """

    def __init__(self, system: "CoxeterSystem", elements: list[Element]):
        self.system = system
        self.elements = elements
        self.index = {e.word: i for i, e in enumerate(elements)}
        n = len(elements)
        rank = system.rank
        self.size = n
        self.length = np.array([e.length for e in elements], dtype=np.int16)
        self.mul = np.empty((n, n), dtype=np.int16)
        self.inv = np.empty(n, dtype=np.int16)
        for i, u in enumerate(elements):
            self.inv[i] = self.index[system.inverse(u).word]
            for j, v in enumerate(elements):
                self.mul[i, j] = self.index[system.mult(u, v).word]
        self.leq = np.empty((n, n), dtype=bool)
        for i, u in enumerate(elements):
            for j, w in enumerate(elements):
                self.leq[i, j] = system.bruhat_leq(u, w)
        self.gen_of = np.full(n, -1, dtype=np.int16)
        for s in range(rank):
            self.gen_of[self.index[(s,)]] = s
        self.identity = self.index[()]
        self.rdesc = np.zeros((n, rank), dtype=bool)
        for i, u in enumerate(elements):
            for s in system.right_descents(u):
                self.rdesc[i, s] = True

    def idx(self, e: Element) -> int:
        return self.index[e.word]


class CoxeterSystem:
    """A Coxeter matrix together with canonical-word arithmetic."""

    def __init__(self, matrix: CoxeterMatrix, length_cap: int = DEFAULT_LENGTH_CAP):
        self.matrix = matrix
        self.rank = matrix.rank
        self.length_cap = length_cap
        self.identity = Element(self, ())
        self.generators = tuple(Element(self, (s,)) for s in range(self.rank))
        self._ext_cache: dict[tuple[tuple[int, ...], int], tuple[int, ...]] = {}
        self._leq_cache: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}
        self._table: _WTable | None = None
        self._table_attempted = False

    # -- word machinery ------------------------------------------------

    def _check_letters(self, letters) -> tuple[int, ...]:
        word = tuple(int(s) for s in letters)
        for s in word:
            if not 0 <= s < self.rank:
                raise CoxeterError(f"generator index {s} out of range for rank {self.rank}")
        return word

    def _braid_neighbors(self, word: tuple[int, ...]):
        n = len(word)
        for i in range(n - 1):
            a, b = word[i], word[i + 1]
            if a == b:
                continue
            m = self.matrix.entry(a, b)
            if m == INFINITY or i + m > n:
                continue
            seg = word[i : i + m]
            if all(seg[k] == (a if k % 2 == 0 else b) for k in range(m)):
                repl = tuple((b if k % 2 == 0 else a) for k in range(m))
                yield word[:i] + repl + word[i + m :]

    def _braid_closure(self, word: tuple[int, ...]) -> set[tuple[int, ...]]:
        seen = {word}
        stack = [word]
        while stack:
            u = stack.pop()
            for v in self._braid_neighbors(u):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    @staticmethod
    def _nil_spot(word: tuple[int, ...]) -> int:
        for i in range(len(word) - 1):
            if word[i] == word[i + 1]:
                return i
        return -1

    def _extend(self, word: tuple[int, ...], s: int) -> tuple[int, ...]:
        """Canonical word of w*s, for w given by a canonical (reduced) word."""
        key = (word, s)
        hit = self._ext_cache.get(key)
        if hit is not None:
            return hit
        cand = word + (s,)
        closure = self._braid_closure(cand)
        result = None
        for u in closure:
            i = self._nil_spot(u)
            if i >= 0:
                # deleting the pair leaves a word of length l(w)-1, which
                # is necessarily reduced
                shorter = u[:i] + u[i + 2 :]
                result = min(self._braid_closure(shorter))
                break
        if result is None:
            if len(cand) > self.length_cap:
                raise CapacityError(
                    f"canonical word length {len(cand)} exceeds cap {self.length_cap}"
                )
            result = min(closure)
        self._ext_cache[key] = result
        return result

    # -- public operations ----------------------------------------------

    def element(self, letters) -> Element:
        """Canonicalize a word of generator indices."""
        word = self._check_letters(letters)
        acc: tuple[int, ...] = ()
        for s in word:
            acc = self._extend(acc, s)
        return Element(self, acc)

    canonicalize = element

    def is_reduced(self, letters) -> bool:
        word = self._check_letters(letters)
        return self.element(word).length == len(word)

    def _require_same(self, *elems: Element):
        for e in elems:
            if e.system is not self:
                raise MixedSystemsError("element belongs to a different Coxeter system")

    def mult(self, u: Element, v: Element) -> Element:
        self._require_same(u, v)
        acc = u.word
        for s in v.word:
            acc = self._extend(acc, s)
        return Element(self, acc)

    def inverse(self, u: Element) -> Element:
        self._require_same(u)
        return self.element(reversed(u.word))

    def length(self, u: Element) -> int:
        self._require_same(u)
        return u.length

    def reduced_words(self, u: Element) -> set[tuple[int, ...]]:
        """All reduced words of u: the braid closure of its canonical word."""
        self._require_same(u)
        return self._braid_closure(u.word)

    def right_descents(self, u: Element) -> set[int]:
        self._require_same(u)
        return {s for s in range(self.rank) if len(self._extend(u.word, s)) < u.length}

    def bruhat_leq(self, u: Element, w: Element) -> bool:
        """Subword test: accumulate reduced-subword products along one
        reduced word of w and ask whether u was reached."""
        self._require_same(u, w)
        if u.length > w.length:
            return False
        key = (u.word, w.word)
        hit = self._leq_cache.get(key)
        if hit is not None:
            return hit
        reachable = {(): None}
        for s in w.word:
            for vw in list(reachable):
                ext = self._extend(vw, s)
                if len(ext) > len(vw):
                    reachable.setdefault(ext, None)
        result = u.word in reachable
        self._leq_cache[key] = result
        return result

    def enumerate_elements(self, max_length: int, budget: int | None = None) -> list[Element]:
        """All elements of length <= max_length, ordered by (length, word).

        Raises CapacityError once more than `budget` elements appear
        (default: the WG_MAX_ELEMENTS budget).
        """
        cap = budget if budget is not None else element_budget()
        seen = {(): None}
        frontier = [()]
        out = [self.identity]
        level = 0
        while frontier and level < max_length:
            level += 1
            nxt = []
            for word in frontier:
                for s in range(self.rank):
                    ext = self._extend(word, s)
                    if len(ext) == level and ext not in seen:
                        seen[ext] = None
                        nxt.append(ext)
                        if len(seen) > cap:
                            raise CapacityError(
                                f"element enumeration exceeded budget {cap}"
                            )
            nxt.sort()
            out.extend(Element(self, w) for w in nxt)
            frontier = nxt
        return out

    def enumerate_all(self, budget: int | None = None) -> list[Element]:
        """Every element of a finite group; CapacityError when W is infinite
        or larger than the budget (lengths are bounded by the word cap)."""
        return self.enumerate_elements(self.length_cap, budget=budget)

    def longest_element(self) -> Element:
        """The longest element of a finite system, by repeated ascent."""
        w = self.identity
        while True:
            for s in range(self.rank):
                ext = self._extend(w.word, s)
                if len(ext) > w.length:
                    w = Element(self, ext)
                    break
            else:
                return w

    # -- dense tables ----------------------------------------------------

    def element_table(self) -> _WTable | None:
        """Dense tables when W is finite and fits the budget, else None."""
        if not self._table_attempted:
            self._table_attempted = True
            try:
                elems = self.enumerate_all()
                if elems and elems[-1].length >= self.length_cap:
                    # cap reached: cannot certify the enumeration is complete
                    self._table = None
                else:
                    self._table = _WTable(self, elems)
            except CapacityError:
                self._table = None
        return self._table


def create_system(matrix: CoxeterMatrix, length_cap: int = DEFAULT_LENGTH_CAP) -> CoxeterSystem:
    return CoxeterSystem(matrix, length_cap=length_cap)
