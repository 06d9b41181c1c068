"""Finite groupoids with explicit composition.

Vertices and edges are opaque strings externally and dense integers
internally.  Composition is stored as an explicit table keyed by edge
pairs; groupoids with at most one edge per ordered vertex pair ("thin"
groupoids, e.g. pair groupoids and covers) may instead compose through an
endpoint lookup, which keeps large covers affordable without changing any
observable behaviour.  Structures are immutable once built and all
queries are pure.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from wgroupoid.groups import Group


class GroupoidError(Exception):
    pass


class GroupoidValidationError(GroupoidError):
    """First violated groupoid axiom, with witnesses."""

    def __init__(self, kind: str, message: str, witnesses: Sequence[str] = ()):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.witnesses = tuple(witnesses)


class NotComposable(GroupoidError):
    pass


class FiniteGroupoid:
    def __init__(
        self,
        vertices: Sequence[str],
        edge_ids: Sequence[str],
        src: np.ndarray,
        tgt: np.ndarray,
        inv: np.ndarray,
        identity_edge: np.ndarray,
        compose_table: dict[tuple[int, int], int] | None,
        thin: bool,
    ):
        self.vertices = tuple(vertices)
        self.edge_ids = tuple(edge_ids)
        self._vidx = {v: i for i, v in enumerate(self.vertices)}
        self._eidx = {e: i for i, e in enumerate(self.edge_ids)}
        self.src = src
        self.tgt = tgt
        self.inv = inv
        self.identity_edge = identity_edge
        self._compose_table = compose_table
        self._thin = thin
        self._pair_lookup: dict[tuple[int, int], int] | None = None
        self._out: list[list[int]] | None = None
        self._in: list[list[int]] | None = None

    # -- construction ----------------------------------------------------

    @classmethod
    def build(
        cls,
        vertices: Sequence[str],
        edges: Sequence[tuple[str, str, str]],
        identities: Mapping[str, str],
        inverses: Mapping[str, str],
        compose: Iterable[tuple[str, str, str]] | Mapping[tuple[str, str], str],
    ) -> "FiniteGroupoid":
        """Validate raw tables and assemble a groupoid; raises
        GroupoidValidationError naming the first violated axiom."""
        vertices = list(dict.fromkeys(vertices))
        vidx = {v: i for i, v in enumerate(vertices)}
        edge_ids = []
        for eid, a, b in edges:
            if a not in vidx:
                raise GroupoidValidationError(
                    "dangling vertex reference", f"edge {eid} has unknown source {a}", [eid]
                )
            if b not in vidx:
                raise GroupoidValidationError(
                    "dangling vertex reference", f"edge {eid} has unknown target {b}", [eid]
                )
            edge_ids.append(eid)
        if len(set(edge_ids)) != len(edge_ids):
            dup = next(e for e in edge_ids if edge_ids.count(e) > 1)
            raise GroupoidValidationError("duplicate edge id", f"edge id {dup} repeats", [dup])
        eidx = {e: i for i, e in enumerate(edge_ids)}
        src = np.array([vidx[a] for _, a, _ in edges], dtype=np.int32)
        tgt = np.array([vidx[b] for _, _, b in edges], dtype=np.int32)

        ident = np.full(len(vertices), -1, dtype=np.int32)
        for v, eid in identities.items():
            if v not in vidx:
                raise GroupoidValidationError(
                    "dangling vertex reference", f"identity listed for unknown vertex {v}", [v]
                )
            if eid not in eidx:
                raise GroupoidValidationError(
                    "missing identities", f"identity edge {eid} of vertex {v} is unknown", [eid]
                )
            ident[vidx[v]] = eidx[eid]
        for v in vertices:
            if ident[vidx[v]] < 0:
                raise GroupoidValidationError(
                    "missing identities", f"vertex {v} has no identity edge", [v]
                )

        inv = np.full(len(edge_ids), -1, dtype=np.int32)
        for g, h in inverses.items():
            if g not in eidx or h not in eidx:
                raise GroupoidValidationError(
                    "missing inverses", f"inverse pair ({g},{h}) names an unknown edge", [g, h]
                )
            inv[eidx[g]] = eidx[h]
        for eid in edge_ids:
            if inv[eidx[eid]] < 0:
                raise GroupoidValidationError(
                    "missing inverses", f"edge {eid} has no inverse", [eid]
                )

        table: dict[tuple[int, int], int] = {}
        items = compose.items() if isinstance(compose, Mapping) else ((g, h, k) for g, h, k in compose)
        for entry in items:
            if isinstance(compose, Mapping):
                (g, h), k = entry
            else:
                g, h, k = entry
            for e in (g, h, k):
                if e not in eidx:
                    raise GroupoidValidationError(
                        "unknown edge in composition", f"composition names unknown edge {e}", [e]
                    )
            table[(eidx[g], eidx[h])] = eidx[k]

        G = cls(
            vertices, edge_ids, src, tgt, inv, ident, compose_table=table, thin=False
        )
        G.validate()
        return G

    @classmethod
    def pair(cls, vertex_ids: Sequence[str]) -> "FiniteGroupoid":
        """The pair groupoid: one edge x>y per ordered vertex pair."""
        vertices = sorted(dict.fromkeys(vertex_ids))
        if not vertices:
            raise GroupoidError("pair groupoid needs a nonempty vertex set")
        n = len(vertices)
        edge_ids = []
        src = np.empty(n * n, dtype=np.int32)
        tgt = np.empty(n * n, dtype=np.int32)
        inv = np.empty(n * n, dtype=np.int32)
        ident = np.empty(n, dtype=np.int32)
        k = 0
        for i, x in enumerate(vertices):
            for j, y in enumerate(vertices):
                edge_ids.append(f"{x}>{y}")
                src[k], tgt[k] = i, j
                inv[k] = j * n + i
                if i == j:
                    ident[i] = k
                k += 1
        return cls(vertices, edge_ids, src, tgt, inv, ident, compose_table=None, thin=True)

    @classmethod
    def from_parts(
        cls,
        vertices: Sequence[str],
        edge_ids: Sequence[str],
        src: Sequence[int],
        tgt: Sequence[int],
        inv: Sequence[int],
        identity_edge: Sequence[int],
        compose_table: dict[tuple[int, int], int] | None,
        thin: bool = False,
    ) -> "FiniteGroupoid":
        """Assemble without validation (for constructions that are correct
        by construction; `validate()` remains available)."""
        return cls(
            vertices,
            edge_ids,
            np.asarray(src, dtype=np.int32),
            np.asarray(tgt, dtype=np.int32),
            np.asarray(inv, dtype=np.int32),
            np.asarray(identity_edge, dtype=np.int32),
            compose_table,
            thin,
        )

    # -- integer-level access ---------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edge_ids)

    @property
    def is_thin(self) -> bool:
        return self._thin

    def vertex_index(self, v: str) -> int:
        try:
            return self._vidx[v]
        except KeyError:
            raise GroupoidError(f"unknown vertex {v!r}") from None

    def edge_index(self, e: str) -> int:
        try:
            return self._eidx[e]
        except KeyError:
            raise GroupoidError(f"unknown edge {e!r}") from None

    def pair_lookup(self) -> dict[tuple[int, int], int]:
        """(src, tgt) -> edge index; only meaningful on thin groupoids."""
        if self._pair_lookup is None:
            lut: dict[tuple[int, int], int] = {}
            for e in range(self.n_edges):
                lut[(int(self.src[e]), int(self.tgt[e]))] = e
            self._pair_lookup = lut
        return self._pair_lookup

    def compose_i(self, g: int, h: int) -> int:
        if self.tgt[g] != self.src[h]:
            raise NotComposable(
                f"edges {self.edge_ids[g]} and {self.edge_ids[h]} are not composable"
            )
        if self._thin:
            return self.pair_lookup()[(int(self.src[g]), int(self.tgt[h]))]
        try:
            return self._compose_table[(g, h)]
        except KeyError:
            raise NotComposable(
                f"composition of {self.edge_ids[g]} and {self.edge_ids[h]} is undefined"
            ) from None

    def out_edges_i(self, v: int) -> list[int]:
        if self._out is None:
            out = [[] for _ in range(self.n_vertices)]
            inn = [[] for _ in range(self.n_vertices)]
            for e in range(self.n_edges):
                out[int(self.src[e])].append(e)
                inn[int(self.tgt[e])].append(e)
            self._out, self._in = out, inn
        return self._out[v]

    def in_edges_i(self, v: int) -> list[int]:
        self.out_edges_i(v)
        return self._in[v]

    def composable_pairs_i(self):
        for v in range(self.n_vertices):
            for g in self.in_edges_i(v):
                for h in self.out_edges_i(v):
                    yield g, h

    # -- public queries ----------------------------------------------------

    def source(self, e: str) -> str:
        return self.vertices[self.src[self.edge_index(e)]]

    def target(self, e: str) -> str:
        return self.vertices[self.tgt[self.edge_index(e)]]

    def inverse(self, e: str) -> str:
        return self.edge_ids[self.inv[self.edge_index(e)]]

    def identity_at(self, v: str) -> str:
        return self.edge_ids[self.identity_edge[self.vertex_index(v)]]

    def compose(self, g: str, h: str) -> str:
        return self.edge_ids[self.compose_i(self.edge_index(g), self.edge_index(h))]

    def edges_from(self, v: str) -> list[str]:
        return [self.edge_ids[e] for e in self.out_edges_i(self.vertex_index(v))]

    def hom(self, c: str, d: str) -> list[str]:
        ci, di = self.vertex_index(c), self.vertex_index(d)
        return [
            self.edge_ids[e]
            for e in self.out_edges_i(ci)
            if self.tgt[e] == di
        ]

    def components(self) -> list[tuple[str, ...]]:
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in range(self.n_edges):
            a, b = find(int(self.src[e])), find(int(self.tgt[e]))
            if a != b:
                parent[a] = b
        groups: dict[int, list[str]] = {}
        for i, v in enumerate(self.vertices):
            groups.setdefault(find(i), []).append(v)
        return [tuple(sorted(g)) for g in sorted(groups.values())]

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def is_simply_connected(self) -> bool:
        """All local groups trivial: at most one edge per ordered pair."""
        seen = set()
        for e in range(self.n_edges):
            key = (int(self.src[e]), int(self.tgt[e]))
            if key in seen:
                return False
            seen.add(key)
        return True

    def local_group(self, c: str) -> Group:
        ci = self.vertex_index(c)
        loop_ids = sorted(self.hom(c, c))
        loops = [self.edge_index(e) for e in loop_ids]
        pos = {e: i for i, e in enumerate(loops)}
        n = len(loops)
        table = np.empty((n, n), dtype=np.int32)
        for i, g in enumerate(loops):
            for j, h in enumerate(loops):
                table[i, j] = pos[self.compose_i(g, h)]
        group = Group(loop_ids, table=table, identity=pos[int(self.identity_edge[ci])])
        group.validate()
        return group

    # -- validation ----------------------------------------------------------

    def validate(self):
        """Exhaustive groupoid-axiom check; raises GroupoidValidationError."""
        ids = self.edge_ids
        # identity endpoints and neutrality
        for v in range(self.n_vertices):
            e = int(self.identity_edge[v])
            if self.src[e] != v or self.tgt[e] != v:
                raise GroupoidValidationError(
                    "bad identity", f"identity of {self.vertices[v]} is not a loop there", [ids[e]]
                )
        # inverse involution and endpoints
        for g in range(self.n_edges):
            gi = int(self.inv[g])
            if int(self.inv[gi]) != g:
                raise GroupoidValidationError(
                    "inverse not involutive", f"inv(inv({ids[g]})) != {ids[g]}", [ids[g]]
                )
            if self.src[gi] != self.tgt[g] or self.tgt[gi] != self.src[g]:
                raise GroupoidValidationError(
                    "inverse endpoints", f"inverse of {ids[g]} has wrong endpoints", [ids[g]]
                )
        # composition domain: defined exactly on composable pairs
        if self._compose_table is not None:
            defined = set(self._compose_table)
            for (g, h), k in self._compose_table.items():
                if self.tgt[g] != self.src[h]:
                    raise GroupoidValidationError(
                        "non-composable pair",
                        f"composition defined on non-composable pair ({ids[g]},{ids[h]})",
                        [ids[g], ids[h]],
                    )
                if self.src[k] != self.src[g] or self.tgt[k] != self.tgt[h]:
                    raise GroupoidValidationError(
                        "composite endpoints",
                        f"({ids[g]})({ids[h]}) = {ids[k]} has wrong endpoints",
                        [ids[g], ids[h], ids[k]],
                    )
            for g, h in self.composable_pairs_i():
                if (g, h) not in defined:
                    raise GroupoidValidationError(
                        "missing composition",
                        f"composable pair ({ids[g]},{ids[h]}) has no composition",
                        [ids[g], ids[h]],
                    )
        # neutrality, inverse law
        for g in range(self.n_edges):
            sv, tv = int(self.src[g]), int(self.tgt[g])
            if self.compose_i(int(self.identity_edge[sv]), g) != g:
                raise GroupoidValidationError(
                    "identity not neutral", f"1*{ids[g]} != {ids[g]}", [ids[g]]
                )
            if self.compose_i(g, int(self.identity_edge[tv])) != g:
                raise GroupoidValidationError(
                    "identity not neutral", f"{ids[g]}*1 != {ids[g]}", [ids[g]]
                )
            if self.compose_i(g, int(self.inv[g])) != int(self.identity_edge[sv]):
                raise GroupoidValidationError(
                    "inverse law", f"{ids[g]} * inv != identity at source", [ids[g]]
                )
            if self.compose_i(int(self.inv[g]), g) != int(self.identity_edge[tv]):
                raise GroupoidValidationError(
                    "inverse law", f"inv * {ids[g]} != identity at target", [ids[g]]
                )
        # associativity on every composable triple
        for g, h in self.composable_pairs_i():
            gh = self.compose_i(g, h)
            for k in self.out_edges_i(int(self.tgt[h])):
                if self.compose_i(gh, k) != self.compose_i(g, self.compose_i(h, k)):
                    raise GroupoidValidationError(
                        "associativity failure",
                        f"(({ids[g]}{ids[h]}){ids[k]}) != ({ids[g]}({ids[h]}{ids[k]}))",
                        [ids[g], ids[h], ids[k]],
                    )


def build_groupoid(vertices, edges, identities, inverses, compose) -> FiniteGroupoid:
    return FiniteGroupoid.build(vertices, edges, identities, inverses, compose)


def pair_groupoid(vertex_ids) -> FiniteGroupoid:
    return FiniteGroupoid.pair(vertex_ids)


def one_vertex_groupoid(group: Group, vertex: str = "C") -> FiniteGroupoid:
    """A group regarded as a groupoid on a single vertex."""
    n = group.order
    ids = list(group.labels)
    src = np.zeros(n, dtype=np.int32)
    tgt = np.zeros(n, dtype=np.int32)
    inv = np.array([group.inverse(i) for i in range(n)], dtype=np.int32)
    ident = np.array([group.identity], dtype=np.int32)
    table = {(i, j): group.mult(i, j) for i in range(n) for j in range(n)}
    return FiniteGroupoid.from_parts([vertex], ids, src, tgt, inv, ident, table)


def disjoint_union(a: FiniteGroupoid, b: FiniteGroupoid, tags=("a", "b")) -> FiniteGroupoid:
    """Disjoint union with tagged identifiers."""
    ta, tb = tags
    verts = [f"{ta}.{v}" for v in a.vertices] + [f"{tb}.{v}" for v in b.vertices]
    ids = [f"{ta}.{e}" for e in a.edge_ids] + [f"{tb}.{e}" for e in b.edge_ids]
    na, nv = a.n_edges, a.n_vertices
    src = np.concatenate([a.src, b.src + nv])
    tgt = np.concatenate([a.tgt, b.tgt + nv])
    inv = np.concatenate([a.inv, b.inv + na])
    ident = np.concatenate([a.identity_edge, b.identity_edge + na])
    table: dict[tuple[int, int], int] = {}
    for g, h in a.composable_pairs_i():
        table[(g, h)] = a.compose_i(g, h)
    for g, h in b.composable_pairs_i():
        table[(g + na, h + na)] = b.compose_i(g, h) + na
    return FiniteGroupoid.from_parts(verts, ids, src, tgt, inv, ident, table)
