"""Type-preserving group actions on buildings and their quotients.

The quotient of an action is realized directly as a skeleton groupoid:
one vertex per orbit (the lexicographically least chamber of each orbit
is its representative), and one edge (i, j, g) from rep C_i to rep C_j
per group element g, carrying

    delta((i, j, g)) = dist(C_i, g . C_j),
    (i, j, g) (j, k, h) = (i, k, gh),
    (i, j, g)^-1 = (j, i, g^-1).

This covers the free case (edges biject with chamber-pair orbits) and the
non-free case in one construction; the local group at any representative
is {(i, i, g)} and multiplies like the acting group, and the edge
(i, i, g) has delta = 1 exactly for g in the stabilizer of C_i, so the
quotient is strict precisely when the action is free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from wgroupoid.building import Building, BuildingError
from wgroupoid.coxeter import Element
from wgroupoid.groupoid import FiniteGroupoid
from wgroupoid.groups import Group
from wgroupoid.wmetric import WGroupoid


class ActionError(Exception):
    pass


class ActionLawError(ActionError):
    """The permutation data is not a group action."""


class TypePreservationError(ActionError):
    """Some group element fails dist(g.C, g.D) = dist(C, D)."""


class ChamberAction:
    """A finite group acting on a building's chambers, as a permutation
    per group element (perms[g][i] = index of g . chamber_i)."""

    def __init__(self, group: Group, building: Building, perms: np.ndarray):
        self.group = group
        self.building = building
        self.perms = np.asarray(perms, dtype=np.int32)
        if self.perms.shape != (group.order, building.size):
            raise ActionError(
                f"permutation table shape {self.perms.shape} does not match "
                f"group order {group.order} and chamber count {building.size}"
            )

    def act(self, glabel: str, chamber: str) -> str:
        gi = self.group.index[glabel]
        ci = self.building.chamber_index(chamber)
        return self.building.chambers[self.perms[gi, ci]]

    def act_i(self, gi: int, ci: int) -> int:
        return int(self.perms[gi, ci])

    def validate(self, pairs: str = "full", gens=None):
        """Identity, bijectivity, type preservation (always exhaustive per
        element), and the compatibility law.  pairs="full" checks every
        (g, h); pairs="gens" checks (g, h) for g in a generating set,
        which determines the law on all products of generators, and
        verifies that the generators do reach the whole group."""
        g, b = self.group, self.building
        n, nch = g.order, b.size
        if not np.array_equal(self.perms[g.identity], np.arange(nch)):
            raise ActionLawError("identity element does not act as the identity")
        for gi in range(n):
            if len(set(self.perms[gi].tolist())) != nch:
                raise ActionLawError(f"element {g.labels[gi]} does not act bijectively")

        didx, _ = self._dist_index()
        for gi in range(n):
            p = self.perms[gi]
            moved = didx[np.ix_(p, p)]
            if not np.array_equal(moved, didx):
                ci, cj = np.argwhere(moved != didx)[0]
                raise TypePreservationError(
                    f"element {g.labels[gi]} is not type-preserving: "
                    f"dist({b.chambers[ci]},{b.chambers[cj]}) changes under the action"
                )

        if pairs == "full":
            check_gs = range(n)
        elif pairs == "gens":
            if not gens:
                raise ActionError("pairs='gens' requires a generating set")
            if g.closure(list(gens)) != set(range(n)):
                raise ActionLawError("given generators do not generate the group")
            check_gs = list(gens)
        else:
            raise ActionError(f"unknown pairs mode {pairs!r}")
        for gi in check_gs:
            for hi in range(n):
                gh = g.mult(gi, hi)
                # left action: (g h) . C = g . (h . C)
                if not np.array_equal(self.perms[gh], self.perms[gi][self.perms[hi]]):
                    raise ActionLawError(
                        f"action law fails on pair ({g.labels[gi]},{g.labels[hi]})"
                    )

    def _dist_index(self):
        b = self.building
        words: dict[tuple[int, ...], int] = {}
        didx = np.empty((b.size, b.size), dtype=np.int32)
        for i in range(b.size):
            for j in range(b.size):
                w = b.dist_i(i, j).word
                didx[i, j] = words.setdefault(w, len(words))
        return didx, words


def make_action(building: Building, group: Group, perm_mapping) -> ChamberAction:
    """Assemble and fully validate an action given as
    {group label: {chamber: chamber}}."""
    nch = building.size
    perms = np.empty((group.order, nch), dtype=np.int32)
    for lab in group.labels:
        if lab not in perm_mapping:
            raise ActionError(f"no permutation given for group element {lab!r}")
        m = perm_mapping[lab]
        gi = group.index[lab]
        for c in building.chambers:
            if c not in m:
                raise ActionError(f"element {lab!r} does not map chamber {c!r}")
            perms[gi, building.chamber_index(c)] = building.chamber_index(m[c])
    action = ChamberAction(group, building, perms)
    action.validate()
    return action


def orbits(a: ChamberAction) -> list[tuple[str, ...]]:
    b = a.building
    seen = set()
    out = []
    for ci in range(b.size):
        if ci in seen:
            continue
        orbit = sorted(set(int(a.perms[gi, ci]) for gi in range(a.group.order)))
        seen.update(orbit)
        out.append(tuple(b.chambers[i] for i in orbit))
    return sorted(out)


def stabilizer(a: ChamberAction, chamber: str) -> list[str]:
    ci = a.building.chamber_index(chamber)
    return [a.group.labels[gi] for gi in range(a.group.order) if a.perms[gi, ci] == ci]


def is_free(a: ChamberAction) -> bool:
    return all(len(stabilizer(a, c)) == 1 for c in a.building.chambers)


@dataclass
class QuotientWGroupoid:
    """The skeleton quotient: a W-groupoid plus the orbit bookkeeping."""

    wgroupoid: WGroupoid
    orbit_reps: tuple[str, ...]
    edge_labels: dict[str, tuple[int, int, str]]  # edge id -> (i, j, group label)
    group: Group
    action: ChamberAction


def _edge_id(i: int, j: int, glabel: str) -> str:
    return f"q{i}.{j}.{glabel}"


def quotient(a: ChamberAction) -> QuotientWGroupoid:
    b, g = a.building, a.group
    orbit_list = orbits(a)
    reps = tuple(o[0] for o in orbit_list)  # lexicographically least per orbit
    rep_idx = [b.chamber_index(r) for r in reps]
    k, n = len(reps), g.order

    edge_ids, srcs, tgts, invs = [], [], [], []
    labels: dict[str, tuple[int, int, str]] = {}
    pos: dict[tuple[int, int, int], int] = {}
    for i in range(k):
        for j in range(k):
            for gi in range(n):
                eid = _edge_id(i, j, g.labels[gi])
                pos[(i, j, gi)] = len(edge_ids)
                labels[eid] = (i, j, g.labels[gi])
                edge_ids.append(eid)
                srcs.append(i)
                tgts.append(j)
    for i in range(k):
        for j in range(k):
            for gi in range(n):
                invs.append(pos[(j, i, g.inverse(gi))])
    ident = [pos[(i, i, g.identity)] for i in range(k)]
    table = {
        (pos[(i, j, gi)], pos[(j, kk, hi)]): pos[(i, kk, g.mult(gi, hi))]
        for i in range(k)
        for j in range(k)
        for kk in range(k)
        for gi in range(n)
        for hi in range(n)
    }
    base = FiniteGroupoid.from_parts(reps, edge_ids, srcs, tgts, invs, ident, table)
    assert base.n_edges == k * k * n

    delta: list[Element] = []
    for e in range(base.n_edges):
        i, j, glabel = labels[edge_ids[e]]
        gi = g.index[glabel]
        delta.append(b.dist_i(rep_idx[i], a.act_i(gi, rep_idx[j])))
    wg = WGroupoid(base, b.system, delta)
    return QuotientWGroupoid(wg, reps, labels, g, a)


# ---------------------------------------------------------------------------
# stock actions
# ---------------------------------------------------------------------------


def trivial_action(building: Building) -> ChamberAction:
    group = Group(["e"], table=np.zeros((1, 1), dtype=np.int32), identity=0)
    perms = np.arange(building.size, dtype=np.int32)[None, :]
    action = ChamberAction(group, building, perms)
    action.validate()
    return action


def singer_shift_action(building: Building, modulus: int) -> ChamberAction:
    """The cyclic shift x -> x+1 on a difference-set plane, acting on
    flags by translating points and lines simultaneously."""
    if building.flags is None:
        raise ActionError("building does not carry flag annotations")
    n = int(modulus)
    width = len(str(n - 1))

    def shift_label(label: str, k: int) -> str:
        kind, num = label[0], int(label[1:])
        return f"{kind}{(num + k) % n:0{width}d}"

    group = Group.cyclic(n, label=lambda k: f"t{k:0{width}d}")
    perms = np.empty((n, building.size), dtype=np.int32)
    for k in range(n):
        for ci, c in enumerate(building.chambers):
            p, l = building.flags[c]
            image = f"{shift_label(p, k)}:{shift_label(l, k)}"
            perms[k, ci] = building.chamber_index(image)
    action = ChamberAction(group, building, perms)
    action.validate()
    return action


def regular_action(building: Building) -> ChamberAction:
    """W acting on its thin building by left multiplication."""
    if building.element_of is None:
        raise ActionError("building does not carry element annotations")
    system = building.system
    elems = [building.element_of[c] for c in building.chambers]
    idx = {e.word: i for i, e in enumerate(elems)}
    n = len(elems)
    table = np.empty((n, n), dtype=np.int32)
    for i, u in enumerate(elems):
        for j, v in enumerate(elems):
            table[i, j] = idx[system.mult(u, v).word]
    group = Group([building.chambers[i] for i in range(n)], table=table, identity=idx[()])
    perms = np.empty((n, n), dtype=np.int32)
    for gi, u in enumerate(elems):
        for ci, v in enumerate(elems):
            perms[gi, ci] = idx[system.mult(u, v).word]
    action = ChamberAction(group, building, perms)
    action.validate()
    return action
