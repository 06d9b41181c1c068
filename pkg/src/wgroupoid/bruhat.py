"""One-chamber W-groupoids as Bruhat decompositions.

A one-chamber W-groupoid is a group G with a W-length delta constant on
(B,B) double cosets, where B = delta^-1(1).  When the induced map
delta_B on double cosets is a bijection onto its image, the cell map
C(w) = delta^-1(w) is checked against the decomposition laws

  (B)    ws < w:  C(ws) <= C(w)C(s) <= C(ws) u C(w)
         ws > w:  C(w)C(s) = C(ws)
  (B')   ws < w:  C(w)C(s) <= C(ws) u C(w);   ws > w:  C(w)C(s) <= C(ws)
  (B'')  ws < w:  C(w) <= C(ws)C(s)
  and the companion inclusion C(ws) <= C(w)C(s) for ws < w.

An independent oracle is provided for GL_n(F_q) with B the upper
triangular subgroup: the Weyl element of a matrix is read off the rank
profile of its lower-left corners.  Permutations map onto the A_{n-1}
system with the transposition of slots (i, i+1) assigned generator index
n-1-i, which is the assignment under which the flag-stabilizer panels of
the standard flag match the rank-2 convention (generator 0 fixes the
point, generator 1 fixes the line).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from wgroupoid.coxeter import CoxeterMatrix, CoxeterSystem, Element
from wgroupoid.groupoid import one_vertex_groupoid
from wgroupoid.groups import Group
from wgroupoid.reporting import Verdict, Witness
from wgroupoid.wmetric import WGroupoid


class BruhatError(Exception):
    pass


@dataclass
class BruhatData:
    """Group, Borel subset, and the partition of G into delta cells."""

    group: Group
    system: CoxeterSystem
    borel: frozenset[int]
    cells: dict[Element, frozenset[int]]

    def cell_of(self, gi: int) -> Element:
        for w, members in self.cells.items():
            if gi in members:
                return w
        raise BruhatError(f"element {self.group.labels[gi]} is in no cell")

    def assignment(self) -> list[Element]:
        out: list[Element | None] = [None] * self.group.order
        for w, members in self.cells.items():
            for gi in members:
                out[gi] = w
        return out


def _double_cosets(group: Group, borel: frozenset[int]) -> list[frozenset[int]]:
    seen: set[int] = set()
    cosets = []
    for x in range(group.order):
        if x in seen:
            continue
        coset = frozenset(
            group.mult(group.mult(b1, x), b2) for b1 in borel for b2 in borel
        )
        seen.update(coset)
        cosets.append(coset)
    return cosets


def validate_bruhat(data: BruhatData):
    """Cells partition G, C(1) = B, each cell is one (B,B) double coset,
    and distinct cells have distinct delta values (delta_B bijective)."""
    n = data.group.order
    covered: set[int] = set()
    for w, members in data.cells.items():
        if covered & members:
            raise BruhatError("cells overlap")
        covered |= members
    if covered != set(range(n)):
        raise BruhatError("cells do not cover the group")
    identity = data.system.identity
    if data.cells.get(identity) != data.borel:
        raise BruhatError("C(1) differs from the Borel subset")
    for b1 in data.borel:
        for b2 in data.borel:
            if data.group.mult(b1, b2) not in data.borel:
                raise BruhatError("Borel subset is not closed under multiplication")
    assign = data.assignment()
    value_of_coset: dict[frozenset[int], Element] = {}
    for coset in _double_cosets(data.group, data.borel):
        vals = {assign[x] for x in coset}
        if len(vals) > 1:
            a, b = sorted(coset)[:2]
            raise BruhatError(
                f"delta is not constant on the double coset of "
                f"{data.group.labels[a]} (elements {data.group.labels[a]}, "
                f"{data.group.labels[b]})"
            )
        value_of_coset[coset] = next(iter(vals))
    by_value: dict[Element, list[frozenset[int]]] = {}
    for coset, w in value_of_coset.items():
        by_value.setdefault(w, []).append(coset)
    for w, cosets in by_value.items():
        if len(cosets) > 1:
            raise BruhatError(
                f"delta_B is not injective: two double cosets share the value {w!r}"
            )


def from_one_chamber(G: WGroupoid) -> BruhatData:
    """Extract and validate Bruhat data from a one-chamber W-groupoid."""
    base = G.base
    if base.n_vertices != 1:
        raise BruhatError(f"not one-chamber: {base.n_vertices} chambers")
    group = base.local_group(base.vertices[0])
    # local_group sorts labels; translate delta through edge ids
    assign = [G.delta_of(lab) for lab in group.labels]
    borel = frozenset(i for i, w in enumerate(assign) if w.is_identity())
    cells: dict[Element, set[int]] = {}
    for i, w in enumerate(assign):
        cells.setdefault(w, set()).add(i)
    data = BruhatData(
        group, G.system, borel, {w: frozenset(m) for w, m in cells.items()}
    )
    validate_bruhat(data)
    return data


def wgroupoid_from_bruhat(data: BruhatData) -> WGroupoid:
    """The induced one-chamber candidate: delta(g) = value of g's cell."""
    base = one_vertex_groupoid(data.group)
    assign = data.assignment()
    delta = [assign[i] for i in range(data.group.order)]
    return WGroupoid(base, data.system, delta)


@dataclass
class PropertyBReport:
    b: Verdict
    b_prime: Verdict
    b_second: Verdict
    prop_extra: Verdict  # C(ws) <= C(w)C(s) for ws < w

    def named(self):
        return [
            ("(B)", self.b),
            ("(B')", self.b_prime),
            ("(B'')", self.b_second),
            ("C(ws)<=C(w)C(s)", self.prop_extra),
        ]

    @property
    def all_passed(self) -> bool:
        return all(v.passed for _, v in self.named())

    def to_dict(self) -> dict:
        return {name: v.to_dict() for name, v in self.named()}


def check_property_B(data: BruhatData, max_witnesses: int = 5) -> PropertyBReport:
    group, system = data.group, data.system
    cells = data.cells
    empty: frozenset[int] = frozenset()

    b = Verdict()
    bp = Verdict()
    bs = Verdict()
    extra = Verdict()

    def product(X, Y) -> frozenset[int]:
        return frozenset(group.mult(x, y) for x in X for y in Y)

    for w in sorted(cells, key=lambda e: (e.length, e.word)):
        Cw = cells[w]
        for s in range(system.rank):
            gen = system.generators[s]
            Cs = cells.get(gen, empty)
            ws = system.mult(w, gen)
            Cws = cells.get(ws, empty)
            prod = product(Cw, Cs)
            label = f"w={w!r}, s=s{s}"
            descent = ws.length < w.length
            b.checked += 1
            bp.checked += 1
            bs.checked += 1
            extra.checked += 1
            if descent:
                if not prod <= (Cws | Cw):
                    bp.fail(
                        Witness("(B')", (label,), "C(w)C(s) within C(ws) u C(w)", "extra elements"),
                        max_witnesses,
                    )
                if not Cw <= product(Cws, Cs):
                    bs.fail(
                        Witness("(B'')", (label,), "C(w) within C(ws)C(s)", "missing elements"),
                        max_witnesses,
                    )
                if not Cws <= prod:
                    extra.fail(
                        Witness("C(ws)<=C(w)C(s)", (label,), "C(ws) within C(w)C(s)", "missing"),
                        max_witnesses,
                    )
                if not (Cws <= prod and prod <= (Cws | Cw)):
                    b.fail(
                        Witness("(B)", (label,), "C(ws) <= C(w)C(s) <= C(ws) u C(w)", "violated"),
                        max_witnesses,
                    )
            else:
                if not prod <= Cws:
                    bp.fail(
                        Witness("(B')", (label,), "C(w)C(s) within C(ws)", "extra elements"),
                        max_witnesses,
                    )
                if prod != Cws:
                    b.fail(
                        Witness("(B)", (label,), "C(w)C(s) = C(ws)", "differs"),
                        max_witnesses,
                    )

    return PropertyBReport(b, bp, bs, extra)


# ---------------------------------------------------------------------------
# rank-profile oracle for GL_n(F_q)
# ---------------------------------------------------------------------------


def _rank_mod(rows: list[list[int]], q: int) -> int:
    m = [row[:] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, len(m)) if m[r][col] % q), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = pow(m[row][col], -1, q)
        m[row] = [(x * inv) % q for x in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] % q:
                f = m[r][col]
                m[r] = [(a - f * b) % q for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def permutation_to_element(perm: tuple[int, ...], system: CoxeterSystem) -> Element:
    """Bubble-sort decomposition into adjacent transpositions; the swap of
    slots (i, i+1), 0-based, maps to generator n-2-i."""
    n = len(perm)
    if system.rank != n - 1:
        raise BruhatError(f"system rank {system.rank} does not fit S_{n}")
    w = list(perm)
    letters = []
    while True:
        i = next((i for i in range(n - 1) if w[i] > w[i + 1]), None)
        if i is None:
            break
        w[i], w[i + 1] = w[i + 1], w[i]
        letters.append(n - 2 - i)
    # slot swaps compose so that the collected letters, read left to
    # right, are the types of an elementary-matrix factorization of perm
    return system.element(letters)


def bruhat_word_of_matrix(M, q: int, system: CoxeterSystem | None = None) -> Element:
    """The Weyl element w with M in BwB (B upper triangular), from the
    rank profile of lower-left corners: w sends row i to the column where
    rank M[i:, :j] jumps."""
    M = np.asarray(M, dtype=np.int64) % q
    n = M.shape[0]
    if M.shape != (n, n):
        raise BruhatError("matrix is not square")
    rows = [[int(x) for x in row] for row in M]
    if _rank_mod(rows, q) != n:
        raise BruhatError("matrix is singular")
    if system is None:
        system = CoxeterSystem(CoxeterMatrix.a(n - 1))

    def corner_rank(i: int, j: int) -> int:
        if i >= n or j <= 0:
            return 0
        return _rank_mod([row[:j] for row in rows[i:]], q)

    perm = [0] * n
    for i in range(n):
        for j in range(1, n + 1):
            jump = (
                corner_rank(i, j)
                - corner_rank(i + 1, j)
                - corner_rank(i, j - 1)
                + corner_rank(i + 1, j - 1)
            )
            if jump == 1:
                perm[i] = j - 1
                break
        else:
            raise BruhatError("rank profile has no jump in some row")
    return permutation_to_element(tuple(perm), system)


def gl_bruhat(n: int, q: int) -> BruhatData:
    """Bruhat data of GL_n(F_q) with B upper triangular, computed entirely
    from the rank-profile oracle."""
    from wgroupoid.building import _gl3_elements

    if n != 3:
        raise BruhatError(f"only n = 3 is supported, got {n}")
    labels, mats = _gl3_elements(q)
    idx = {lab: i for i, lab in enumerate(labels)}
    order = len(labels)
    table = np.empty((order, order), dtype=np.int32)
    for i, A in enumerate(mats):
        for j, B in enumerate(mats):
            prod = (A @ B) % q
            table[i, j] = idx["".join(str(int(x)) for x in prod.ravel())]
    group = Group(labels, table=table)

    system = CoxeterSystem(CoxeterMatrix.a(n - 1))
    cells: dict[Element, set[int]] = {}
    for i, M in enumerate(mats):
        w = bruhat_word_of_matrix(M, q, system)
        cells.setdefault(w, set()).add(i)
    borel = frozenset(
        i
        for i, M in enumerate(mats)
        if all(M[r][c] % q == 0 for r in range(n) for c in range(r))
    )
    data = BruhatData(group, system, borel, {w: frozenset(m) for w, m in cells.items()})
    validate_bruhat(data)
    return data
