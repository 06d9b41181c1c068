"""W-length functions on finite groupoids and their defining properties.

A candidate is a finite groupoid together with a Coxeter system and a
total assignment delta: edges -> W.  `check_axioms` decides, exhaustively
and with witnesses, the properties

  WG1     delta(identity edge) = 1
  WG2     delta(gh) >= delta(g) delta(h) in the Bruhat order
  WG2'    delta(g^-1 h) = s in S forces delta(h) in {w, ws} (descent case)
          or delta(h) = ws (ascent case), where w = delta(g)
  WG3     every right descent s of delta(g) is realized by an edge h with
          iota(h) = iota(g), delta(h) = delta(g)s and delta(h^-1 g) = s
  weak    every (chamber, generator) pair has an outgoing edge of that length
  strict  delta(g) = 1 only on identity edges

The verdicts are computed independently of one another so implications
between them can themselves be tested.  On thin groupoids over a finite
enumerable W the checks run vectorized on a chamber-pair distance matrix;
otherwise they run as plain loops over composable pairs.  Both paths
produce identical verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from wgroupoid.coxeter import CoxeterMatrix, CoxeterSystem, Element
from wgroupoid.groupoid import FiniteGroupoid, GroupoidError
from wgroupoid.reporting import Verdict, Witness

_FAST_PATH_MAX_VERTICES = 400


class WMetricError(Exception):
    pass


class ResidueError(WMetricError):
    """The requested restriction is not closed under composition or
    inverses, so it does not form a groupoid."""


class GeodesicPropertyError(WMetricError):
    """Geodesic existence or uniqueness failed for some reduced type."""

    def __init__(self, edge: str, counts: dict[tuple[int, ...], int]):
        self.edge = edge
        self.counts = counts
        bad = ", ".join(f"type {list(t)}: {n} geodesics" for t, n in sorted(counts.items()))
        super().__init__(f"geodesic property fails at edge {edge}: {bad}")


@dataclass(frozen=True)
class Gallery:
    """A factorization of an edge into generator-length steps."""

    steps: tuple[str, ...]
    type_word: tuple[int, ...]


@dataclass
class AxiomReport:
    wg1: Verdict
    wg2: Verdict
    wg2prime: Verdict
    wg3: Verdict
    weak: Verdict
    strict: Verdict

    def named(self) -> list[tuple[str, Verdict]]:
        return [
            ("WG1", self.wg1),
            ("WG2", self.wg2),
            ("WG2'", self.wg2prime),
            ("WG3", self.wg3),
            ("weak", self.weak),
            ("strict", self.strict),
        ]

    @property
    def battery_passed(self) -> bool:
        """The defining properties of a W-groupoid (strictness excluded)."""
        return all(v.passed for v in (self.wg1, self.wg2, self.wg2prime, self.wg3, self.weak))

    @property
    def all_passed(self) -> bool:
        return self.battery_passed and self.strict.passed

    def to_dict(self) -> dict:
        return {name: v.to_dict() for name, v in self.named()}


class WGroupoid:
    """A finite groupoid with a total W-length assignment on edges."""

    def __init__(self, base: FiniteGroupoid, system: CoxeterSystem, delta: Sequence[Element]):
        if len(delta) != base.n_edges:
            raise WMetricError("delta must assign a value to every edge")
        for e in delta:
            if e.system is not system:
                raise WMetricError("delta value from a foreign Coxeter system")
        self.base = base
        self.system = system
        self.delta = tuple(delta)
        self._out_by_gen: dict[tuple[int, int], list[int]] | None = None

    def delta_of(self, edge_id: str) -> Element:
        return self.delta[self.base.edge_index(edge_id)]

    @property
    def chambers(self) -> tuple[str, ...]:
        return self.base.vertices

    def out_by_gen(self, v: int, s: int) -> list[int]:
        if self._out_by_gen is None:
            lut: dict[tuple[int, int], list[int]] = {}
            for e in range(self.base.n_edges):
                d = self.delta[e]
                if d.is_generator():
                    lut.setdefault((int(self.base.src[e]), d.word[0]), []).append(e)
            self._out_by_gen = lut
        return self._out_by_gen.get((v, s), [])


def make_wgroupoid(
    base: FiniteGroupoid,
    system: CoxeterSystem,
    assignment: Mapping[str, object],
) -> WGroupoid:
    """Attach a delta assignment (edge id -> Element or word of generator
    indices).  Values are canonicalized; no axiom checking happens here."""
    delta: list[Element] = []
    for eid in base.edge_ids:
        if eid not in assignment:
            raise WMetricError(f"assignment missing edge {eid!r}")
        val = assignment[eid]
        if isinstance(val, Element):
            if val.system is not system:
                raise WMetricError(f"delta of edge {eid!r} is from a different system")
            delta.append(val)
        else:
            delta.append(system.element(val))
    return WGroupoid(base, system, delta)


# ---------------------------------------------------------------------------
# axiom battery
# ---------------------------------------------------------------------------


def check_axioms(G: WGroupoid, max_witnesses: int = 5) -> AxiomReport:
    base = G.base
    tab = G.system.element_table()
    if tab is not None and base.is_thin and base.n_vertices <= _FAST_PATH_MAX_VERTICES:
        return _check_thin(G, tab, max_witnesses)
    return _check_generic(G, max_witnesses)


def _check_generic(G: WGroupoid, cap: int) -> AxiomReport:
    base, system = G.base, G.system
    delta = G.delta
    ids = base.edge_ids
    identity = system.identity

    wg1 = Verdict()
    for v in range(base.n_vertices):
        e = int(base.identity_edge[v])
        wg1.checked += 1
        if not delta[e].is_identity():
            wg1.fail(Witness("WG1", (ids[e],), "e", repr(delta[e])), cap)

    strict = Verdict()
    identity_edges = set(int(x) for x in base.identity_edge)
    for e in range(base.n_edges):
        if delta[e].is_identity():
            strict.checked += 1
            if e not in identity_edges:
                strict.fail(Witness("strict", (ids[e],), "identity edge", "non-identity edge"), cap)

    weak = Verdict()
    for v in range(base.n_vertices):
        present = {delta[e].word[0] for e in base.out_edges_i(v) if delta[e].is_generator()}
        for s in range(system.rank):
            weak.checked += 1
            if s not in present:
                weak.fail(
                    Witness("weak", (base.vertices[v],), f"an outgoing edge with delta s{s}", "none"),
                    cap,
                )

    wg2 = Verdict()
    wg2p = Verdict()
    for g, h in base.composable_pairs_i():
        wg2.checked += 1
        gh = base.compose_i(g, h)
        prod = system.mult(delta[g], delta[h])
        if not system.bruhat_leq(prod, delta[gh]):
            wg2.fail(
                Witness(
                    "WG2",
                    (ids[g], ids[h], ids[gh]),
                    f"delta(gh) >= {prod!r}",
                    repr(delta[gh]),
                ),
                cap,
            )
        # same pair enumeration serves WG2': k = g^-1 h over common-source pairs
        # (the map g -> g^-1 carries source-sharing pairs onto composable ones)
        gi = int(base.inv[g])
        k = gh
        if delta[k].is_generator():
            wg2p.checked += 1
            w = delta[gi]
            s = delta[k]
            ws = system.mult(w, s)
            dh = delta[h]
            if ws.length < w.length:
                ok = dh == w or dh == ws
                expected = f"{{{w!r}, {ws!r}}}"
            else:
                ok = dh == ws
                expected = repr(ws)
            if not ok:
                wg2p.fail(Witness("WG2'", (ids[gi], ids[h]), expected, repr(dh)), cap)

    wg3 = Verdict()
    for g in range(base.n_edges):
        w = delta[g]
        v = int(base.src[g])
        for s in system.right_descents(w):
            wg3.checked += 1
            ws = system.mult(w, system.generators[s])
            found = False
            for h in base.out_edges_i(v):
                if delta[h] == ws:
                    k = base.compose_i(int(base.inv[h]), g)
                    if delta[k] == system.generators[s]:
                        found = True
                        break
            if not found:
                wg3.fail(
                    Witness(
                        "WG3",
                        (ids[g],),
                        f"edge h from {base.vertices[v]} with delta(h)={ws!r}, delta(h^-1 g)=s{s}",
                        "none",
                    ),
                    cap,
                )

    return AxiomReport(wg1, wg2, wg2p, wg3, weak, strict)


def _thin_matrix(G: WGroupoid, tab) -> np.ndarray:
    """Vertex-pair matrix of interned delta values; -1 where no edge."""
    n = G.base.n_vertices
    D = np.full((n, n), -1, dtype=np.int16)
    didx = np.array([tab.idx(d) for d in G.delta], dtype=np.int16)
    D[G.base.src, G.base.tgt] = didx
    return D


def _check_thin(G: WGroupoid, tab, cap: int) -> AxiomReport:
    base, system = G.base, G.system
    ids = base.edge_ids
    n = base.n_vertices
    D = _thin_matrix(G, tab)
    mask = D >= 0
    Dc = np.where(mask, D, tab.identity).astype(np.int16)
    lut = base.pair_lookup()

    def edge_id(x, y):
        return ids[lut[(int(x), int(y))]]

    wg1 = Verdict(checked=n)
    for v in range(n):
        e = int(base.identity_edge[v])
        if not G.delta[e].is_identity():
            wg1.fail(Witness("WG1", (ids[e],), "e", repr(G.delta[e])), cap)

    strict = Verdict()
    is_unit = mask & (D == tab.identity)
    strict.checked = int(is_unit.sum())
    bad = is_unit & ~np.eye(n, dtype=bool)
    for x, y in np.argwhere(bad)[:cap]:
        strict.fail(Witness("strict", (edge_id(x, y),), "identity edge", "non-identity edge"), cap)
    strict.passed = not bad.any()

    weak = Verdict(checked=n * system.rank)
    gen_idx = [tab.index[(s,)] for s in range(system.rank)]
    for s, gidx in enumerate(gen_idx):
        has = (mask & (D == gidx)).any(axis=1)
        for v in np.argwhere(~has)[:cap].ravel():
            weak.fail(
                Witness("weak", (base.vertices[int(v)],), f"an outgoing edge with delta s{s}", "none"),
                cap,
            )
        if not has.all():
            weak.passed = False

    # WG2 over triples (x, y, z): delta(x>z) >= delta(x>y) delta(y>z)
    valid = mask[:, :, None] & mask[None, :, :]
    prod = tab.mul[Dc[:, :, None], Dc[None, :, :]]
    direct = Dc[:, None, :]
    ok = tab.leq[prod, direct]
    bad2 = valid & ~ok
    wg2 = Verdict(checked=int(valid.sum()))
    if bad2.any():
        wg2.passed = False
        for x, y, z in np.argwhere(bad2)[:cap]:
            p = tab.elements[prod[x, y, z]]
            wg2.fail(
                Witness(
                    "WG2",
                    (edge_id(x, y), edge_id(y, z), edge_id(x, z)),
                    f"delta(gh) >= {p!r}",
                    repr(tab.elements[Dc[x, z]]),
                ),
                cap,
            )

    # WG2' over triples (x, y, z): g = x>y, h = x>z, g^-1 h = y>z
    gen_of = tab.gen_of
    s_val = gen_of[Dc[None, :, :]]
    cond = valid & (s_val >= 0)
    w_v = Dc[:, :, None]
    ws = tab.mul[w_v, Dc[None, :, :]]
    desc = tab.length[ws] < tab.length[w_v]
    dh = Dc[:, None, :]
    ok_desc = (dh == w_v) | (dh == ws)
    ok_asc = dh == ws
    badp = cond & np.where(desc, ~ok_desc, ~ok_asc)
    wg2p = Verdict(checked=int(cond.sum()))
    if badp.any():
        wg2p.passed = False
        for x, y, z in np.argwhere(badp)[:cap]:
            w = tab.elements[Dc[x, y]]
            wse = tab.elements[ws[x, y, z]]
            expected = f"{{{w!r}, {wse!r}}}" if desc[x, y, z] else repr(wse)
            wg2p.fail(
                Witness("WG2'", (edge_id(x, y), edge_id(x, z)), expected, repr(tab.elements[Dc[x, z]])),
                cap,
            )

    # WG3 per delta value and descent: an intermediate z with
    # delta(x>z) = ws and delta(z>y) = s must exist for every edge x>y
    wg3 = Verdict()
    values = sorted({int(v) for v in np.unique(D) if v >= 0})
    for widx in values:
        welem = tab.elements[widx]
        pairs = mask & (D == widx)
        for s in system.right_descents(welem):
            wg3.checked += int(pairs.sum())
            wsidx = tab.mul[widx, gen_idx[s]]
            A = (mask & (D == wsidx)).astype(np.int32)
            B = (mask & (D == gen_idx[s])).astype(np.int32)
            reach = (A @ B) > 0
            bad3 = pairs & ~reach
            if bad3.any():
                wg3.passed = False
                for x, y in np.argwhere(bad3)[:cap]:
                    wg3.fail(
                        Witness(
                            "WG3",
                            (edge_id(x, y),),
                            f"edge h from {base.vertices[int(x)]} with delta(h)="
                            f"{tab.elements[wsidx]!r}, delta(h^-1 g)=s{s}",
                            "none",
                        ),
                        cap,
                    )

    return AxiomReport(wg1, wg2, wg2p, wg3, weak, strict)


# ---------------------------------------------------------------------------
# residues, panels, Borel
# ---------------------------------------------------------------------------


def _component_of(base: FiniteGroupoid, kept: set[int], start: int) -> tuple[set[int], set[int]]:
    verts = {start}
    stack = [start]
    adj: dict[int, list[int]] = {}
    for e in kept:
        adj.setdefault(int(base.src[e]), []).append(e)
    edges: set[int] = set()
    while stack:
        v = stack.pop()
        for e in adj.get(v, ()):
            w = int(base.tgt[e])
            if w not in verts:
                verts.add(w)
                stack.append(w)
    for e in kept:
        if int(base.src[e]) in verts and int(base.tgt[e]) in verts:
            edges.add(e)
    return verts, edges


def residue(G: WGroupoid, J: Sequence[int], chamber: str) -> WGroupoid:
    """The connected component of `chamber` in the restriction of G to
    edges with delta in the standard parabolic W_J, as a W_J-groupoid."""
    base, system = G.base, G.system
    J = sorted(set(J))
    for s in J:
        if not 0 <= s < system.rank:
            raise WMetricError(f"generator index {s} out of range")
    ci = base.vertex_index(chamber)
    jset = set(J)
    # membership in W_J == every letter of the canonical word lies in J
    kept = {e for e in range(base.n_edges) if set(G.delta[e].word) <= jset}
    verts, edges = _component_of(base, kept, ci)

    for e in edges:
        if int(base.inv[e]) not in edges:
            raise ResidueError(f"restriction not closed under inverses at {base.edge_ids[e]}")

    if len(J) == len(range(system.rank)) and len(verts) == base.n_vertices and len(edges) == base.n_edges:
        return G

    sub_matrix = CoxeterMatrix.from_lists(
        [[system.matrix.entry(a, b) for b in J] for a in J]
    )
    sub_system = CoxeterSystem(sub_matrix, length_cap=system.length_cap)
    pos = {s: k for k, s in enumerate(J)}

    vlist = sorted(verts)
    elist = sorted(edges)
    vmap = {v: i for i, v in enumerate(vlist)}
    emap = {e: i for i, e in enumerate(elist)}
    table: dict[tuple[int, int], int] = {}
    for g in elist:
        for h in elist:
            if base.tgt[g] == base.src[h]:
                k = base.compose_i(g, h)
                if k not in emap:
                    raise ResidueError(
                        f"restriction not closed under composition at "
                        f"({base.edge_ids[g]},{base.edge_ids[h]})"
                    )
                table[(emap[g], emap[h])] = emap[k]
    sub = FiniteGroupoid.from_parts(
        [base.vertices[v] for v in vlist],
        [base.edge_ids[e] for e in elist],
        [vmap[int(base.src[e])] for e in elist],
        [vmap[int(base.tgt[e])] for e in elist],
        [emap[int(base.inv[e])] for e in elist],
        [emap[int(base.identity_edge[v])] for v in vlist],
        table,
    )
    delta = [sub_system.element([pos[s] for s in G.delta[e].word]) for e in elist]
    return WGroupoid(sub, sub_system, delta)


def panel(G: WGroupoid, s: int, chamber: str) -> WGroupoid:
    return residue(G, [s], chamber)


def borel(G: WGroupoid) -> FiniteGroupoid:
    """The subgroupoid of all delta = 1 edges."""
    base = G.base
    kept = sorted(e for e in range(base.n_edges) if G.delta[e].is_identity())
    keptset = set(kept)
    for e in kept:
        if int(base.inv[e]) not in keptset:
            raise ResidueError(f"Borel edges not closed under inverses at {base.edge_ids[e]}")
    emap = {e: i for i, e in enumerate(kept)}
    table: dict[tuple[int, int], int] = {}
    for g in kept:
        for h in kept:
            if base.tgt[g] == base.src[h]:
                k = base.compose_i(g, h)
                if k not in emap:
                    raise ResidueError(
                        f"Borel edges not closed under composition at "
                        f"({base.edge_ids[g]},{base.edge_ids[h]})"
                    )
                table[(emap[g], emap[h])] = emap[k]
    return FiniteGroupoid.from_parts(
        base.vertices,
        [base.edge_ids[e] for e in kept],
        [int(base.src[e]) for e in kept],
        [int(base.tgt[e]) for e in kept],
        [emap[int(base.inv[e])] for e in kept],
        [emap[int(base.identity_edge[v])] for v in range(base.n_vertices)],
        table,
    )


# ---------------------------------------------------------------------------
# galleries and geodesics
# ---------------------------------------------------------------------------


def galleries(G: WGroupoid, edge_id: str, type_word: Sequence[int]) -> list[Gallery]:
    """All factorizations of the edge into steps matching `type_word`."""
    base = G.base
    target = base.edge_index(edge_id)
    word = tuple(int(s) for s in type_word)
    for s in word:
        if not 0 <= s < G.system.rank:
            raise WMetricError(f"generator index {s} out of range")
    if not word:
        return []

    memo: dict[tuple[int, int], list[tuple[int, ...]]] = {}

    def rec(e: int, k: int) -> list[tuple[int, ...]]:
        if k == len(word):
            src = int(base.src[e])
            return [()] if e == int(base.identity_edge[src]) else []
        key = (e, k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        out: list[tuple[int, ...]] = []
        v = int(base.src[e])
        for e1 in G.out_by_gen(v, word[k]):
            rest = base.compose_i(int(base.inv[e1]), e)
            for tail in rec(rest, k + 1):
                out.append((e1,) + tail)
        memo[key] = out
        return out

    return [
        Gallery(tuple(base.edge_ids[e] for e in steps), word)
        for steps in rec(target, 0)
    ]


def geodesics(G: WGroupoid, edge_id: str) -> dict[tuple[int, ...], Gallery]:
    """The unique geodesic per reduced word of delta(g); raises
    GeodesicPropertyError if any reduced type has zero or several.
    Edges with delta = 1 have no generator-length factorization and map
    to an empty dict."""
    d = G.delta_of(edge_id)
    if d.is_identity():
        return {}
    result: dict[tuple[int, ...], Gallery] = {}
    counts: dict[tuple[int, ...], int] = {}
    for f in sorted(G.system.reduced_words(d)):
        found = galleries(G, edge_id, f)
        if len(found) != 1:
            counts[f] = len(found)
        else:
            result[f] = found[0]
    if counts:
        raise GeodesicPropertyError(edge_id, counts)
    return result


def gallery_composes(G: WGroupoid, edge_id: str, gallery: Gallery) -> bool:
    """Do the steps compose back to the edge, with matching types?"""
    base = G.base
    steps = [base.edge_index(s) for s in gallery.steps]
    if not steps:
        return False
    acc = steps[0]
    for e in steps[1:]:
        acc = base.compose_i(acc, e)
    if acc != base.edge_index(edge_id):
        return False
    return all(
        G.delta[e] == G.system.generators[t] for e, t in zip(steps, gallery.type_word)
    )
