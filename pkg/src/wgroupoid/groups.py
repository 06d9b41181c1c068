"""Finite groups as labelled element lists with explicit multiplication.

Small groups carry a dense numpy table.  Groups too large for a dense
table (the budget guard in the matrix-group builders) can instead supply
a multiplication callable; lookups are then computed on demand.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np


class GroupError(Exception):
    pass


class Group:
    def __init__(
        self,
        labels: Sequence[str],
        table: np.ndarray | None = None,
        mult_fn: Callable[[int, int], int] | None = None,
        identity: int | None = None,
    ):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise GroupError("duplicate element labels")
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if (table is None) == (mult_fn is None):
            raise GroupError("exactly one of table / mult_fn is required")
        self._table = None if table is None else np.asarray(table, dtype=np.int32)
        self._mult_fn = mult_fn
        self._inv: np.ndarray | None = None
        if identity is not None:
            self.identity = identity
        else:
            self.identity = self._find_identity()

    @property
    def order(self) -> int:
        return len(self.labels)

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            raise GroupError("group has no dense multiplication table")
        return self._table

    def has_table(self) -> bool:
        return self._table is not None

    def mult(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        return self._mult_fn(i, j)

    def _find_identity(self) -> int:
        n = self.order
        for e in range(n):
            if all(self.mult(e, x) == x and self.mult(x, e) == x for x in range(min(n, 4))):
                if all(self.mult(e, x) == x for x in range(n)):
                    return e
        raise GroupError("no identity element found")

    def inverse(self, i: int) -> int:
        if self._inv is None:
            self._inv = np.full(self.order, -1, dtype=np.int32)
        if self._inv[i] < 0:
            for j in range(self.order):
                if self.mult(i, j) == self.identity:
                    if self.mult(j, i) != self.identity:
                        raise GroupError(f"one-sided inverse at element {self.labels[i]}")
                    self._inv[i] = j
                    break
            else:
                raise GroupError(f"element {self.labels[i]} has no inverse")
        return int(self._inv[i])

    def element_order(self, i: int) -> int:
        k, acc = 1, i
        while acc != self.identity:
            acc = self.mult(acc, i)
            k += 1
            if k > self.order:
                raise GroupError("element order exceeds group order; not a group")
        return k

    def is_cyclic(self) -> bool:
        return any(self.element_order(i) == self.order for i in range(self.order))

    def closure(self, gens: Sequence[int]) -> set[int]:
        seen = set(gens) | {self.identity}
        frontier = list(seen)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.mult(a, g)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen

    def validate(self):
        """Exhaustive group-axiom check of the dense table."""
        t = self.table
        n = self.order
        if t.shape != (n, n):
            raise GroupError(f"table shape {t.shape} does not match order {n}")
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entry out of range")
        e = self.identity
        if not (np.all(t[e] == np.arange(n)) and np.all(t[:, e] == np.arange(n))):
            raise GroupError("identity is not neutral")
        lhs = t[t, :]   # lhs[i,j,k] = t[t[i,j], k]
        rhs = t[:, t]   # rhs[i,j,k] = t[i, t[j,k]]
        if not np.array_equal(lhs, rhs):
            i, j, k = np.argwhere(lhs != rhs)[0]
            raise GroupError(
                f"associativity fails at ({self.labels[i]},{self.labels[j]},{self.labels[k]})"
            )
        for i in range(n):
            self.inverse(i)

    @classmethod
    def cyclic(cls, n: int, label=str) -> "Group":
        table = np.fromfunction(lambda i, j: (i + j) % n, (n, n), dtype=np.int64)
        return cls([label(k) for k in range(n)], table=table.astype(np.int32), identity=0)

    def __repr__(self):
        return f"Group(order={self.order})"


def tables_agree(a: Group, b: Group, label_map: dict[str, str]) -> bool:
    """Does `label_map` carry a's multiplication to b's?  (a bijection check
    plus an exhaustive table comparison; both groups need dense access.)"""
    if a.order != b.order or set(label_map) != set(a.labels):
        return False
    if set(label_map.values()) != set(b.labels):
        return False
    to_b = {a.index[la]: b.index[lb] for la, lb in label_map.items()}
    for i in range(a.order):
        for j in range(a.order):
            if to_b[a.mult(i, j)] != b.mult(to_b[i], to_b[j]):
                return False
    return True
