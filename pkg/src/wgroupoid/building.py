"""Buildings as W-metric chamber sets, and ways to construct them.

A building is a chamber set with a total W-valued distance.  The defining
conditions are checked exhaustively:

  WD1   delta(C,D) = 1 exactly when C = D
  WD2   delta(C,D) = w and delta(D,D') = s in S force delta(C,D') in
        {ws, w} when ws < w, and delta(C,D') = ws when ws > w
  WD3   for delta(C,D) = w and every s there is a chamber D' with
        delta(D,D') = s and delta(C,D') = ws

Constructions: the thin building on the group itself, rank-2 buildings
from incidence geometries validated as generalized m-gons (incidence
graph of diameter m and girth 2m), projective planes from planar
difference sets, and the flag building of GL_3(F_q) together with its
chamber action.

Rank-2 generator convention: index 0 connects flags with the same point
(the line moves), index 1 connects flags with the same line (the point
moves).  The convention is recorded in serialized output.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

from wgroupoid.coxeter import (
    CapacityError,
    CoxeterMatrix,
    CoxeterSystem,
    Element,
    element_budget,
)
from wgroupoid.groupoid import FiniteGroupoid, pair_groupoid
from wgroupoid.reporting import Verdict, Witness
from wgroupoid.wmetric import WGroupoid, check_axioms, make_wgroupoid

RANK2_LABELS = ("point", "line")  # generator i fixes this object of the flag
DEFAULT_GROUP_BUDGET = 12000


class BuildingError(Exception):
    pass


class NotAGeneralizedPolygon(BuildingError):
    def __init__(self, girth: int, diameter: int):
        super().__init__(
            f"not a generalized polygon: girth {girth} != 2 * diameter {diameter}"
        )
        self.girth = girth
        self.diameter = diameter


class Building:
    """Chambers plus a total W-distance.  Construction validates only
    shape; the conditions WD1..WD3 are the business of check_building."""

    def __init__(
        self,
        system: CoxeterSystem,
        chambers,
        dist,
        truncated: bool = False,
        flags: dict[str, tuple[str, str]] | None = None,
        element_of: dict[str, Element] | None = None,
    ):
        self.system = system
        self.chambers = tuple(chambers)
        self._index = {c: i for i, c in enumerate(self.chambers)}
        if len(self._index) != len(self.chambers):
            raise BuildingError("duplicate chamber identifiers")
        for c in self.chambers:
            if "|" in c:
                raise BuildingError(f"chamber id {c!r} contains '|'")
        n = len(self.chambers)
        self._dist = dist
        if len(dist) != n or any(len(row) != n for row in dist):
            raise BuildingError("distance table shape does not match chamber count")
        for row in dist:
            for e in row:
                if e.system is not system:
                    raise BuildingError("distance value from a foreign Coxeter system")
        self.truncated = truncated
        self.flags = flags
        self.element_of = element_of

    @property
    def size(self) -> int:
        return len(self.chambers)

    def chamber_index(self, c: str) -> int:
        try:
            return self._index[c]
        except KeyError:
            raise BuildingError(f"unknown chamber {c!r}") from None

    def dist(self, c: str, d: str) -> Element:
        return self._dist[self.chamber_index(c)][self.chamber_index(d)]

    def dist_i(self, i: int, j: int) -> Element:
        return self._dist[i][j]

    def census(self, c: str) -> Counter:
        """Sphere sizes around a chamber, keyed by W-distance."""
        i = self.chamber_index(c)
        return Counter(self._dist[i])


@dataclass
class BuildingReport:
    wd1: Verdict
    wd2: Verdict
    wd3: Verdict

    def named(self):
        return [("WD1", self.wd1), ("WD2", self.wd2), ("WD3", self.wd3)]

    @property
    def all_passed(self) -> bool:
        return self.wd1.passed and self.wd2.passed and self.wd3.passed

    def to_dict(self) -> dict:
        return {name: v.to_dict() for name, v in self.named()}


def check_building(B: Building, max_witnesses: int = 5) -> BuildingReport:
    if B.truncated:
        raise BuildingError("truncated building data cannot be checked")
    n = B.size
    system = B.system
    ids = B.chambers

    wd1 = Verdict(checked=n * n)
    for i in range(n):
        for j in range(n):
            d = B.dist_i(i, j)
            if (i == j) != d.is_identity():
                expected = "e" if i == j else "non-identity"
                wd1.fail(Witness("WD1", (ids[i], ids[j]), expected, repr(d)), max_witnesses)

    # adjacency lists: for each chamber D the pairs (D', s) at generator distance
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            d = B.dist_i(i, j)
            if d.is_generator():
                adj[i].append((j, d.word[0]))

    wd2 = Verdict()
    for c in range(n):
        for d in range(n):
            w = B.dist_i(c, d)
            for dd, s in adj[d]:
                wd2.checked += 1
                ws = system.mult(w, system.generators[s])
                got = B.dist_i(c, dd)
                if ws.length < w.length:
                    ok = got == ws or got == w
                    expected = f"{{{ws!r}, {w!r}}}"
                else:
                    ok = got == ws
                    expected = repr(ws)
                if not ok:
                    wd2.fail(
                        Witness("WD2", (ids[c], ids[d], ids[dd]), expected, repr(got)),
                        max_witnesses,
                    )

    wd3 = Verdict()
    for c in range(n):
        for d in range(n):
            w = B.dist_i(c, d)
            for s in range(system.rank):
                wd3.checked += 1
                ws = system.mult(w, system.generators[s])
                if not any(
                    t == s and B.dist_i(c, dd) == ws for dd, t in adj[d]
                ):
                    wd3.fail(
                        Witness(
                            "WD3",
                            (ids[c], ids[d]),
                            f"chamber D' with delta(D,D')=s{s}, delta(C,D')={ws!r}",
                            "none",
                        ),
                        max_witnesses,
                    )

    return BuildingReport(wd1, wd2, wd3)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def thin_building(system: CoxeterSystem, max_length: int | None = None) -> Building:
    """The building with one chamber per group element and dist(u,v) =
    u^-1 v.  For infinite W a max_length cap is required and the result is
    flagged truncated (not checkable)."""
    if max_length is None:
        elems = system.enumerate_all()
        truncated = False
    else:
        elems = system.enumerate_elements(max_length)
        boundary = [e for e in elems if e.length == max_length]
        truncated = any(
            system.mult(e, s).length > max_length
            for e in boundary
            for s in system.generators
        )
    ids = [f"w{idx:02d}" for idx in range(len(elems))]
    element_of = dict(zip(ids, elems))
    dist = [[system.mult(system.inverse(u), v) for v in elems] for u in elems]
    return Building(system, ids, dist, truncated=truncated, element_of=element_of)


@dataclass(frozen=True)
class IncidenceGeometry:
    """Points, lines, and incident point-line pairs (the flags)."""

    points: tuple[str, ...]
    lines: tuple[str, ...]
    flags: tuple[tuple[str, str], ...]

    def __post_init__(self):
        pset, lset = set(self.points), set(self.lines)
        for p, l in self.flags:
            if p not in pset or l not in lset:
                raise BuildingError(f"flag ({p},{l}) references unknown point or line")

    def lines_through(self, p: str) -> list[str]:
        return [l for q, l in self.flags if q == p]

    def points_on(self, l: str) -> list[str]:
        return [p for p, m in self.flags if m == l]


def difference_set_plane(residues, modulus: int) -> IncidenceGeometry:
    """Projective plane from a planar difference set D in Z/n: points are
    residues, line i is {i + d : d in D}.  Every nonzero residue must have
    exactly one representation as a difference of members of D."""
    n = int(modulus)
    if n < 3:
        raise BuildingError(f"modulus {n} too small")
    D = sorted({int(r) % n for r in residues})
    if len(D) < 2:
        raise BuildingError("difference set needs at least two residues")
    counts = Counter((a - b) % n for a in D for b in D if a != b)
    for r in range(1, n):
        if counts.get(r, 0) != 1:
            raise BuildingError(
                f"not a planar difference set: residue {r} has "
                f"{counts.get(r, 0)} representations as a difference"
            )
    width = len(str(n - 1))
    points = tuple(f"p{k:0{width}d}" for k in range(n))
    lines = tuple(f"l{k:0{width}d}" for k in range(n))
    flags = tuple(
        (f"p{(i + d) % n:0{width}d}", f"l{i:0{width}d}") for i in range(n) for d in D
    )
    return IncidenceGeometry(points, lines, tuple(sorted(flags)))


def _graph_diameter(adj: dict[str, list[str]]) -> int:
    best = 0
    nodes = list(adj)
    for start in nodes:
        dist = {start: 0}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        if len(dist) != len(nodes):
            raise BuildingError("incidence graph is not connected")
        best = max(best, max(dist.values()))
    return best


def _graph_girth(adj: dict[str, list[str]]) -> int:
    """Exact girth: shortest cycle through each edge via edge-deleted BFS."""
    best = 0
    seen_edges = set()
    for u in adj:
        for v in adj[u]:
            if (v, u) in seen_edges or (u, v) in seen_edges:
                continue
            seen_edges.add((u, v))
            dist = {u: 0}
            queue = deque([u])
            found = None
            while queue and found is None:
                x = queue.popleft()
                for y in adj[x]:
                    if x == u and y == v:
                        continue
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        if y == v:
                            found = dist[y]
                            break
                        queue.append(y)
            if found is not None:
                cycle = found + 1
                if best == 0 or cycle < best:
                    best = cycle
    return best


def rank2_building(geom: IncidenceGeometry) -> Building:
    """Flags of a generalized m-gon as a building over I2(m).

    Validates thickness (every point on >= 2 lines, every line with >= 2
    points) and the polygon condition girth = 2 * diameter on the
    incidence graph; the W-distance is computed by breadth-first labelling
    with an agreement check across all minimal galleries."""
    for p in geom.points:
        if len(geom.lines_through(p)) < 2:
            raise BuildingError(f"point {p} lies on fewer than 2 lines")
    for l in geom.lines:
        if len(geom.points_on(l)) < 2:
            raise BuildingError(f"line {l} carries fewer than 2 points")

    adj: dict[str, list[str]] = {f"P.{p}": [] for p in geom.points}
    adj.update({f"L.{l}": [] for l in geom.lines})
    for p, l in geom.flags:
        adj[f"P.{p}"].append(f"L.{l}")
        adj[f"L.{l}"].append(f"P.{p}")
    diameter = _graph_diameter(adj)
    girth = _graph_girth(adj)
    if girth != 2 * diameter or diameter < 2:
        raise NotAGeneralizedPolygon(girth, diameter)
    m = diameter

    system = CoxeterSystem(CoxeterMatrix.i2(m))
    flag_ids = sorted(f"{p}:{l}" for p, l in geom.flags)
    flag_of = {f"{p}:{l}": (p, l) for p, l in geom.flags}
    index = {c: i for i, c in enumerate(flag_ids)}
    n = len(flag_ids)

    by_point: dict[str, list[int]] = {}
    by_line: dict[str, list[int]] = {}
    for c, i in index.items():
        p, l = flag_of[c]
        by_point.setdefault(p, []).append(i)
        by_line.setdefault(l, []).append(i)
    neighbors: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for group, s in ((by_point, 0), (by_line, 1)):
        for members in group.values():
            for i in members:
                for j in members:
                    if i != j:
                        neighbors[i].append((j, s))

    gens = system.generators
    dist: list[list[Element | None]] = [[None] * n for _ in range(n)]
    for c in range(n):
        row = dist[c]
        row[c] = system.identity
        level = {c: 0}
        queue = deque([c])
        while queue:
            u = queue.popleft()
            for v, s in neighbors[u]:
                cand = system.mult(row[u], gens[s])
                if row[v] is None:
                    row[v] = cand
                    level[v] = level[u] + 1
                    queue.append(v)
                elif level[v] == level[u] + 1 and row[v] != cand:
                    raise BuildingError(
                        f"minimal galleries from {flag_ids[c]} to {flag_ids[v]} disagree: "
                        f"{row[v]!r} vs {cand!r}"
                    )
        if any(x is None for x in row):
            raise BuildingError("flag graph is not connected")

    return Building(system, flag_ids, dist, flags=flag_of)


# ---------------------------------------------------------------------------
# the equivalence with strict simply connected W-groupoids
# ---------------------------------------------------------------------------


def building_to_wgroupoid(B: Building) -> WGroupoid:
    """The pair groupoid on chambers with delta(C>D) = dist(C,D)."""
    base = pair_groupoid(B.chambers)
    delta = [
        B.dist_i(int(base.src[e]), int(base.tgt[e])) for e in range(base.n_edges)
    ]
    return WGroupoid(base, B.system, delta)


def wgroupoid_to_building(G: WGroupoid) -> Building:
    """Chambers are the vertices, dist(C,D) the delta of the unique edge.
    Requires a connected, simply connected candidate passing the full
    battery including strictness; the failed hypothesis is named."""
    base = G.base
    if not base.is_connected():
        raise BuildingError("not connected")
    if not base.is_simply_connected():
        raise BuildingError("not simply connected")
    report = check_axioms(G)
    if not report.battery_passed:
        failed = [name for name, v in report.named() if not v.passed and name != "strict"]
        raise BuildingError(f"axiom battery failed: {', '.join(failed)}")
    if not report.strict.passed:
        raise BuildingError("not strict")
    n = base.n_vertices
    lut = base.pair_lookup()
    dist = [
        [G.delta[lut[(i, j)]] for j in range(n)]
        for i in range(n)
    ]
    return Building(G.system, base.vertices, dist)


# ---------------------------------------------------------------------------
# GL_3(F_q) flag buildings
# ---------------------------------------------------------------------------


def _det3(M: np.ndarray, q: int) -> int:
    a, b, c = M[0]
    d, e, f = M[1]
    g, h, i = M[2]
    return int(a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % q


def _inv3(M: np.ndarray, q: int) -> np.ndarray:
    det = _det3(M, q)
    det_inv = pow(det, -1, q)
    cof = np.empty((3, 3), dtype=np.int64)
    for r in range(3):
        for c in range(3):
            sub = np.delete(np.delete(M, r, axis=0), c, axis=1)
            minor = int(sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]) % q
            cof[r, c] = ((-1) ** (r + c)) * minor
    return (det_inv * cof.T) % q


def _canon_vector(v: tuple[int, ...], q: int) -> tuple[int, ...]:
    """Scale so the first nonzero coordinate is 1."""
    for x in v:
        if x % q:
            inv = pow(x, -1, q)
            return tuple((inv * y) % q for y in v)
    raise BuildingError("zero vector has no projective class")


def _gl3_elements(q: int):
    """All invertible 3x3 matrices over F_q, labelled by their digits."""
    mats = []
    for digits in itertools.product(range(q), repeat=9):
        M = np.array(digits, dtype=np.int64).reshape(3, 3)
        if _det3(M, q) != 0:
            mats.append(M)
    labels = ["".join(str(int(x)) for x in M.ravel()) for M in mats]
    order = np.argsort(labels)
    return [labels[i] for i in order], [mats[i] for i in order]


def gl_building(n: int, q: int):
    """The flag building of GL_n(F_q) (points: 1-spaces, lines: 2-spaces)
    together with the chamber action of the full matrix group.

    Only n = 3 is supported; the group order must stay within the
    enumeration budget.  Points and lines are numbered with the standard
    flag (span(e1) inside span(e1,e2)) first, so the lexicographically
    least chamber is the standard flag and its stabilizer is exactly the
    upper-triangular subgroup."""
    from wgroupoid.quotient import ChamberAction

    if n != 3:
        raise BuildingError(f"only n = 3 is supported, got {n}")
    if q < 2 or any(q % k == 0 for k in range(2, q)):
        raise BuildingError(f"q must be prime, got {q}")
    order = (q**3 - 1) * (q**3 - q) * (q**3 - q**2)
    budget = element_budget(DEFAULT_GROUP_BUDGET)
    if order > budget:
        raise CapacityError(f"group order {order} exceeds budget {budget}")

    vectors = [
        _canon_vector(v, q)
        for v in itertools.product(range(q), repeat=3)
        if any(v)
    ]
    vectors = sorted(set(vectors))
    e1 = (1, 0, 0)
    point_vecs = [e1] + [v for v in vectors if v != e1]
    # lines are kernels of functionals; the standard line span(e1,e2) is ker(0,0,1)
    std_fn = (0, 0, 1)
    line_fns = [std_fn] + [v for v in vectors if v != std_fn]

    width = len(str(len(point_vecs) - 1))
    point_id = {v: f"p{i:0{width}d}" for i, v in enumerate(point_vecs)}
    line_id = {f: f"l{i:0{width}d}" for i, f in enumerate(line_fns)}

    def incident(v, f) -> bool:
        return sum(a * b for a, b in zip(v, f)) % q == 0

    flags = tuple(
        sorted(
            (point_id[v], line_id[f])
            for v in point_vecs
            for f in line_fns
            if incident(v, f)
        )
    )
    geom = IncidenceGeometry(tuple(point_id[v] for v in point_vecs),
                             tuple(line_id[f] for f in line_fns), flags)
    building = rank2_building(geom)

    labels, mats = _gl3_elements(q)
    vec_of_point = {pid: v for v, pid in point_id.items()}
    fn_of_line = {lid: f for f, lid in line_id.items()}

    nch = building.size
    perms = np.empty((len(labels), nch), dtype=np.int32)
    for gi, M in enumerate(mats):
        Minv = _inv3(M, q)
        pmap = {
            pid: point_id[_canon_vector(tuple(int(x) for x in (M @ np.array(v)) % q), q)]
            for pid, v in vec_of_point.items()
        }
        lmap = {
            lid: line_id[_canon_vector(tuple(int(x) for x in (np.array(f) @ Minv) % q), q)]
            for lid, f in fn_of_line.items()
        }
        for ci, c in enumerate(building.chambers):
            p, l = building.flags[c]
            perms[gi, ci] = building.chamber_index(f"{pmap[p]}:{lmap[l]}")

    from wgroupoid.groups import Group

    if order <= 2000:
        mat_by_label = dict(zip(labels, mats))
        idx = {lab: i for i, lab in enumerate(labels)}
        table = np.empty((order, order), dtype=np.int32)
        for i, A in enumerate(mats):
            for j, Bm in enumerate(mats):
                prod = (A @ Bm) % q
                table[i, j] = idx["".join(str(int(x)) for x in prod.ravel())]
        group = Group(labels, table=table)
        action = ChamberAction(group, building, perms)
        action.validate()
    else:
        idx = {lab: i for i, lab in enumerate(labels)}
        mats_by_i = mats

        def mult_fn(i: int, j: int) -> int:
            prod = (mats_by_i[i] @ mats_by_i[j]) % q
            return idx["".join(str(int(x)) for x in prod.ravel())]

        ident = idx["".join(str(int(x)) for x in np.eye(3, dtype=np.int64).ravel())]
        group = Group(labels, mult_fn=mult_fn, identity=ident)
        # transvections generate SL; one diagonal with primitive determinant
        # extends to GL, so pair validation against these gens suffices
        gen_mats = []
        for r in range(3):
            for c in range(3):
                if r != c:
                    T = np.eye(3, dtype=np.int64)
                    T[r, c] = 1
                    gen_mats.append(T)
        prim = next(
            a for a in range(2, q) if len({pow(a, k, q) for k in range(1, q)}) == q - 1
        )
        Dm = np.eye(3, dtype=np.int64)
        Dm[0, 0] = prim
        gen_mats.append(Dm)
        gens = [idx["".join(str(int(x)) for x in M.ravel())] for M in gen_mats]
        action = ChamberAction(group, building, perms)
        action.validate(pairs="gens", gens=gens)
    return building, action
