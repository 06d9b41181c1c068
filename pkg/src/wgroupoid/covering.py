"""Coverings of W-groupoids: universal covers, fundamental groups,
collapse of unit-length edges, and building isomorphism search.

The universal cover at a base chamber C is the pair groupoid on the
out-edges of C, with delta(g > h) = delta(g^-1 h); the projection sends a
vertex g to its target and the edge g > h to g^-1 h.  For finite
groupoids this out-edge star is exact.  The local group at C acts on it
freely by pre-composition and commutes with the projection.

`collapse_units` merges chambers of a simply connected candidate at
delta-distance 1.  It validates, rather than assumes, that the relation
is an equivalence, that the induced distance is well defined, and that
the result satisfies WD1..WD3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from wgroupoid.building import Building, BuildingReport, check_building
from wgroupoid.groupoid import FiniteGroupoid
from wgroupoid.groups import Group
from wgroupoid.reporting import Verdict, Witness
from wgroupoid.wmetric import WGroupoid

class CoveringError(Exception):
    pass


class MorphismError(CoveringError):
    pass


class CollapseError(CoveringError):
    def __init__(self, message: str, report: BuildingReport | None = None, witnesses=()):
        super().__init__(message)
        self.report = report
        self.witnesses = tuple(witnesses)


@dataclass
class WGroupoidMorphism:
    source: WGroupoid
    target: WGroupoid
    vertex_map: dict[str, str]
    edge_map: dict[str, str]


def validate_morphism(p: WGroupoidMorphism):
    """Totality plus preservation of endpoints, identities, inverses,
    composition, and delta; raises MorphismError naming the violation."""
    S, T = p.source.base, p.target.base
    for v in S.vertices:
        if v not in p.vertex_map:
            raise MorphismError(f"vertex map misses {v!r}")
        if p.vertex_map[v] not in T._vidx:
            raise MorphismError(f"vertex map sends {v!r} outside the target")
    for e in S.edge_ids:
        if e not in p.edge_map:
            raise MorphismError(f"edge map misses {e!r}")
        fe = p.edge_map[e]
        if fe not in T._eidx:
            raise MorphismError(f"edge map sends {e!r} outside the target")
        if p.vertex_map[S.source(e)] != T.source(fe) or p.vertex_map[S.target(e)] != T.target(fe):
            raise MorphismError(f"edge map does not preserve endpoints at {e!r}")
        if p.edge_map[S.inverse(e)] != T.inverse(fe):
            raise MorphismError(f"edge map does not preserve inverses at {e!r}")
        if p.source.delta_of(e) != p.target.delta_of(fe):
            raise MorphismError(f"W-length not preserved at {e!r}")
    for v in S.vertices:
        if p.edge_map[S.identity_at(v)] != T.identity_at(p.vertex_map[v]):
            raise MorphismError(f"identity edge not preserved at {v!r}")
    for g, h in S.composable_pairs_i():
        gh = S.compose_i(g, h)
        fg = p.edge_map[S.edge_ids[g]]
        fh = p.edge_map[S.edge_ids[h]]
        if T.compose(fg, fh) != p.edge_map[S.edge_ids[gh]]:
            raise MorphismError(
                f"composition not preserved at ({S.edge_ids[g]},{S.edge_ids[h]})"
            )


@dataclass
class CoveringReport:
    surjective: Verdict
    preserves_delta: Verdict
    out_bijection: Verdict

    def named(self):
        return [
            ("surjective", self.surjective),
            ("preserves-delta", self.preserves_delta),
            ("out-edge-bijection", self.out_bijection),
        ]

    @property
    def all_passed(self) -> bool:
        return all(v.passed for _, v in self.named())

    def to_dict(self) -> dict:
        return {name: v.to_dict() for name, v in self.named()}


def is_covering(p: WGroupoidMorphism, max_witnesses: int = 5) -> CoveringReport:
    S, T = p.source.base, p.target.base

    surj = Verdict(checked=T.n_vertices + T.n_edges)
    hit_v = {p.vertex_map[v] for v in S.vertices}
    hit_e = {p.edge_map[e] for e in S.edge_ids}
    for v in T.vertices:
        if v not in hit_v:
            surj.fail(Witness("surjective", (v,), "a preimage vertex", "none"), max_witnesses)
    for e in T.edge_ids:
        if e not in hit_e:
            surj.fail(Witness("surjective", (e,), "a preimage edge", "none"), max_witnesses)

    pres = Verdict(checked=S.n_edges)
    for e in S.edge_ids:
        d_src = p.source.delta_of(e)
        d_tgt = p.target.delta_of(p.edge_map[e])
        if d_src != d_tgt:
            pres.fail(
                Witness("preserves-delta", (e, p.edge_map[e]), repr(d_tgt), repr(d_src)),
                max_witnesses,
            )

    outb = Verdict(checked=S.n_vertices)
    for v in S.vertices:
        images = [p.edge_map[e] for e in S.edges_from(v)]
        below = sorted(T.edges_from(p.vertex_map[v]))
        if sorted(images) != below or len(set(images)) != len(images):
            outb.fail(
                Witness(
                    "out-edge-bijection",
                    (v,),
                    f"bijection onto {len(below)} out-edges of {p.vertex_map[v]}",
                    f"{len(set(images))} distinct images of {len(images)} out-edges",
                ),
                max_witnesses,
            )

    return CoveringReport(surj, pres, outb)


@dataclass
class DeckAction:
    """The local group at the base acting on cover vertices by
    pre-composition."""

    group: Group
    cover: WGroupoid
    perms: np.ndarray  # perms[a][v] = index of a . v

    def validate(self):
        base = self.cover.base
        n, nv = self.group.order, base.n_vertices
        if not np.array_equal(self.perms[self.group.identity], np.arange(nv)):
            raise CoveringError("deck identity does not act as the identity")
        for ai in range(n):
            seen = set(self.perms[ai].tolist())
            if len(seen) != nv:
                raise CoveringError("deck element does not act bijectively")
        # freeness
        for ai in range(n):
            if ai != self.group.identity and any(
                self.perms[ai, v] == v for v in range(nv)
            ):
                raise CoveringError(f"deck action not free at {self.group.labels[ai]}")
        # delta preservation on the thin cover
        lut = base.pair_lookup()
        for ai in range(n):
            p = self.perms[ai]
            for x in range(nv):
                for y in range(nv):
                    e = lut[(x, y)]
                    fe = lut[(int(p[x]), int(p[y]))]
                    if self.cover.delta[e] != self.cover.delta[fe]:
                        raise CoveringError(
                            f"deck element {self.group.labels[ai]} does not preserve delta"
                        )


def universal_cover(G: WGroupoid, base_chamber: str):
    """(cover, projection, deck action) of a connected W-groupoid.

    Cover vertices are the edges issuing from the base chamber; there is
    exactly one cover edge g > h per ordered pair, with
    delta(g > h) = delta(g^-1 h); the projection maps the vertex g to
    tau(g) and the edge g > h to g^-1 h."""
    base = G.base
    if not base.is_connected():
        raise CoveringError("groupoid is not connected")
    ci = base.vertex_index(base_chamber)
    star = sorted(base.edges_from(base_chamber))
    star_i = [base.edge_index(e) for e in star]
    n = len(star)

    cover_base = FiniteGroupoid.pair(star)
    pos = {e: i for i, e in enumerate(star)}

    # delta and projection of cover edges through g^-1 h in the base
    quot = np.empty((n, n), dtype=np.int32)
    for i, g in enumerate(star_i):
        gi = int(base.inv[g])
        for j, h in enumerate(star_i):
            quot[i, j] = base.compose_i(gi, h)
    delta = [
        G.delta[quot[pos[cover_base.vertices[int(cover_base.src[e])]],
                      pos[cover_base.vertices[int(cover_base.tgt[e])]]]]
        for e in range(cover_base.n_edges)
    ]
    cover = WGroupoid(cover_base, G.system, delta)

    vertex_map = {e: base.vertices[int(base.tgt[base.edge_index(e)])] for e in star}
    edge_map = {}
    for e in range(cover_base.n_edges):
        i = pos[cover_base.vertices[int(cover_base.src[e])]]
        j = pos[cover_base.vertices[int(cover_base.tgt[e])]]
        edge_map[cover_base.edge_ids[e]] = base.edge_ids[quot[i, j]]
    projection = WGroupoidMorphism(cover, G, vertex_map, edge_map)

    deck_group = base.local_group(base_chamber)
    perms = np.empty((deck_group.order, n), dtype=np.int32)
    for ai, alab in enumerate(deck_group.labels):
        a = base.edge_index(alab)
        for vi, glab in enumerate(star):
            perms[ai, vi] = pos[base.edge_ids[base.compose_i(a, base.edge_index(glab))]]
    deck = DeckAction(deck_group, cover, perms)
    return cover, projection, deck


def collapse_units(G: WGroupoid) -> Building:
    """Identify chambers at delta-distance 1 and check the result is a
    building; any failure is reported structurally, never silently."""
    base = G.base
    if not base.is_connected():
        raise CoveringError("input is not connected")
    if not base.is_simply_connected():
        raise CoveringError("input is not simply connected")
    n = base.n_vertices
    lut = base.pair_lookup()

    unit = np.zeros((n, n), dtype=bool)
    for x in range(n):
        for y in range(n):
            unit[x, y] = G.delta[lut[(x, y)]].is_identity()

    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(n):
        for y in range(n):
            if unit[x, y]:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(find(v), []).append(v)
    members = sorted(classes.values(), key=lambda m: min(base.vertices[v] for v in m))

    # the relation must already be transitive on each class
    for m in members:
        for x in m:
            for y in m:
                if not unit[x, y]:
                    raise CollapseError(
                        "collapse relation is not transitive",
                        witnesses=(base.vertices[x], base.vertices[y]),
                    )

    # induced distance must not depend on representatives
    k = len(members)
    dist = []
    for mi in members:
        row = []
        for mj in members:
            vals = {G.delta[lut[(x, y)]] for x in mi for y in mj}
            if len(vals) != 1:
                raise CollapseError(
                    "collapsed distance is not well defined",
                    witnesses=(base.vertices[mi[0]], base.vertices[mj[0]]),
                )
            row.append(next(iter(vals)))
        dist.append(row)

    chambers = [min(base.vertices[v] for v in m) for m in members]
    B = Building(G.system, chambers, dist)
    report = check_building(B)
    if not report.all_passed:
        failed = [name for name, v in report.named() if not v.passed]
        raise CollapseError(
            f"collapsed structure violates {', '.join(failed)}", report=report
        )
    return B


def fundamental_group(G: WGroupoid, chamber: str) -> Group:
    """The local group at a chamber, with its induced multiplication."""
    return G.base.local_group(chamber)


def _diagram_automorphisms(matrix) -> list[tuple[int, ...]]:
    import itertools

    rank = matrix.rank
    out = []
    for perm in itertools.permutations(range(rank)):
        if all(
            matrix.entry(perm[i], perm[j]) == matrix.entry(i, j)
            for i in range(rank)
            for j in range(rank)
        ):
            out.append(perm)
    return out


def is_isomorphic(
    A: Building, B: Building, *, diagram_automorphisms: bool = False
) -> dict[str, str] | None:
    """Backtracking search for a chamber bijection with
    dist(f(C), f(D)) = dist(C, D), matching generator labels exactly.
    With diagram_automorphisms=True, each label permutation preserving
    the Coxeter matrix is tried as a relabelling of A."""
    if A.system.matrix != B.system.matrix:
        raise CoveringError("buildings are over different Coxeter systems")
    if A.size != B.size:
        return None

    twists = _diagram_automorphisms(A.system.matrix) if diagram_automorphisms else [
        tuple(range(A.system.matrix.rank))
    ]
    n = A.size

    bw = [[B.dist_i(i, j).word for j in range(n)] for i in range(n)]

    for twist in twists:
        # relabel and re-canonicalize: the letterwise image of a canonical
        # word is reduced but not necessarily lexicographically least
        aw = [
            [
                A.system.element(twist[s] for s in A.dist_i(i, j).word).word
                for j in range(n)
            ]
            for i in range(n)
        ]
        # candidate filter: multiset of outgoing distances must match
        sig_a = [tuple(sorted(map(tuple, aw[i]))) for i in range(n)]
        sig_b = [tuple(sorted(map(tuple, bw[i]))) for i in range(n)]

        assignment: list[int] = []
        used = [False] * n

        def extend() -> bool:
            i = len(assignment)
            if i == n:
                return True
            for j in range(n):
                if used[j] or sig_a[i] != sig_b[j]:
                    continue
                ok = True
                for i2, j2 in enumerate(assignment):
                    if aw[i2][i] != bw[j2][j] or aw[i][i2] != bw[j][j2]:
                        ok = False
                        break
                if ok:
                    assignment.append(j)
                    used[j] = True
                    if extend():
                        return True
                    assignment.pop()
                    used[j] = False
            return False

        if extend():
            return {A.chambers[i]: B.chambers[j] for i, j in enumerate(assignment)}
    return None
