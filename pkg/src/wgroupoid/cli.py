"""Command-line front end and the JSON interchange format.

Documents are UTF-8 JSON objects {"kind": ..., "format_version": 1,
"payload": {...}} with kind one of coxeter, groupoid, wgroupoid,
building, incidence, action, bruhat, morphism.  Saving normalizes key
order and indentation, so save(load(x)) is byte-stable.

Exit codes: 0 success / all checks pass, 1 axiom or property failure
(report still emitted), 2 usage or I/O errors.  `--json` switches
reports to machine-readable form.  All subcommands are deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from wgroupoid import bruhat as bruhat_mod
from wgroupoid import building as building_mod
from wgroupoid import covering as covering_mod
from wgroupoid import quotient as quotient_mod
from wgroupoid import wmetric as wmetric_mod
from wgroupoid.coxeter import CoxeterError, CoxeterMatrix, CoxeterSystem
from wgroupoid.groupoid import FiniteGroupoid, GroupoidError
from wgroupoid.groups import Group
from wgroupoid.reporting import render_verdicts

FORMAT_VERSION = 1
KINDS = (
    "coxeter",
    "groupoid",
    "wgroupoid",
    "building",
    "incidence",
    "action",
    "bruhat",
    "morphism",
)


class DocumentError(Exception):
    pass


@dataclass
class Document:
    kind: str
    payload: dict
    format_version: int = FORMAT_VERSION


def load(path) -> Document:
    try:
        text = open(path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"parse error in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise DocumentError(f"{path}: document must be a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"{path}: unknown kind {kind!r}")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise DocumentError(
            f"{path}: format_version {version!r} not supported (expected {FORMAT_VERSION})"
        )
    payload = obj.get("payload")
    if not isinstance(payload, dict):
        raise DocumentError(f"{path}: payload must be a JSON object")
    doc = Document(kind, payload)
    _shape_check(doc, path)
    return doc


def save(doc: Document, path):
    obj = {"kind": doc.kind, "format_version": doc.format_version, "payload": doc.payload}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


_REQUIRED_FIELDS = {
    "coxeter": ("rank", "matrix"),
    "groupoid": ("vertices", "edges", "compose", "identities"),
    "wgroupoid": ("coxeter", "vertices", "edges", "compose", "identities"),
    "building": ("coxeter", "chambers", "dist"),
    "incidence": ("points", "lines", "flags"),
    "action": ("group", "perms"),
    "bruhat": ("group", "borel", "assignment"),
    "morphism": ("vertex_map", "edge_map"),
}


def _shape_check(doc: Document, path):
    missing = [f for f in _REQUIRED_FIELDS[doc.kind] if f not in doc.payload]
    if missing:
        raise DocumentError(
            f"{path}: payload of kind {doc.kind!r} is missing fields {missing}"
        )


# ---------------------------------------------------------------------------
# encoders / decoders
# ---------------------------------------------------------------------------


def matrix_to_payload(matrix: CoxeterMatrix) -> dict:
    return {"rank": matrix.rank, "matrix": matrix.to_lists()}


def payload_to_system(payload: dict) -> CoxeterSystem:
    matrix = CoxeterMatrix.from_lists(payload["matrix"])
    if matrix.rank != payload["rank"]:
        raise DocumentError("coxeter rank does not match matrix size")
    return CoxeterSystem(matrix)


def groupoid_to_payload(base: FiniteGroupoid) -> dict:
    edges = [
        {
            "id": base.edge_ids[e],
            "from": base.vertices[int(base.src[e])],
            "to": base.vertices[int(base.tgt[e])],
            "inv": base.edge_ids[int(base.inv[e])],
        }
        for e in range(base.n_edges)
    ]
    compose = sorted(
        [base.edge_ids[g], base.edge_ids[h], base.edge_ids[base.compose_i(g, h)]]
        for g, h in base.composable_pairs_i()
    )
    identities = {
        base.vertices[v]: base.edge_ids[int(base.identity_edge[v])]
        for v in range(base.n_vertices)
    }
    return {
        "vertices": list(base.vertices),
        "edges": edges,
        "compose": compose,
        "identities": identities,
    }


def payload_to_groupoid(payload: dict) -> FiniteGroupoid:
    edges = [(e["id"], e["from"], e["to"]) for e in payload["edges"]]
    inverses = {e["id"]: e["inv"] for e in payload["edges"]}
    compose = [tuple(t) for t in payload["compose"]]
    return FiniteGroupoid.build(
        payload["vertices"], edges, payload["identities"], inverses, compose
    )


def wgroupoid_to_payload(G: wmetric_mod.WGroupoid, annotations: dict | None = None) -> dict:
    payload = groupoid_to_payload(G.base)
    payload["coxeter"] = matrix_to_payload(G.system.matrix)
    for entry in payload["edges"]:
        entry["delta"] = list(G.delta_of(entry["id"]).word)
    if annotations:
        payload["annotations"] = annotations
    return payload


def payload_to_wgroupoid(payload: dict) -> wmetric_mod.WGroupoid:
    system = payload_to_system(payload["coxeter"])
    base = payload_to_groupoid(payload)
    assignment = {}
    for entry in payload["edges"]:
        if "delta" not in entry:
            raise DocumentError(f"edge {entry['id']!r} has no delta")
        assignment[entry["id"]] = entry["delta"]
    return wmetric_mod.make_wgroupoid(base, system, assignment)


def building_to_payload(B: building_mod.Building) -> dict:
    payload = {
        "coxeter": matrix_to_payload(B.system.matrix),
        "chambers": list(B.chambers),
        "dist": {
            f"{c}|{d}": list(B.dist(c, d).word)
            for c in B.chambers
            for d in B.chambers
        },
    }
    if B.flags is not None:
        payload["flags"] = {c: list(B.flags[c]) for c in B.chambers}
        payload["generator_fixes"] = list(building_mod.RANK2_LABELS)
    return payload


def payload_to_building(payload: dict) -> building_mod.Building:
    system = payload_to_system(payload["coxeter"])
    chambers = list(payload["chambers"])
    dist_map = payload["dist"]
    dist = []
    for c in chambers:
        row = []
        for d in chambers:
            key = f"{c}|{d}"
            if key not in dist_map:
                raise DocumentError(f"dist table is missing the pair {key!r}")
            row.append(system.element(dist_map[key]))
        dist.append(row)
    flags = None
    if "flags" in payload:
        flags = {c: tuple(v) for c, v in payload["flags"].items()}
    return building_mod.Building(system, chambers, dist, flags=flags)


def incidence_to_payload(geom: building_mod.IncidenceGeometry) -> dict:
    return {
        "points": list(geom.points),
        "lines": list(geom.lines),
        "flags": [list(f) for f in geom.flags],
    }


def payload_to_incidence(payload: dict) -> building_mod.IncidenceGeometry:
    return building_mod.IncidenceGeometry(
        tuple(payload["points"]),
        tuple(payload["lines"]),
        tuple(tuple(f) for f in payload["flags"]),
    )


def action_to_payload(action: quotient_mod.ChamberAction) -> dict:
    group = action.group
    perms = {
        lab: {
            c: action.building.chambers[action.perms[group.index[lab], ci]]
            for ci, c in enumerate(action.building.chambers)
        }
        for lab in group.labels
    }
    return {
        "group": {"elements": list(group.labels), "mult": group.table.tolist()},
        "perms": perms,
    }


def payload_to_action(
    payload: dict, building: building_mod.Building
) -> quotient_mod.ChamberAction:
    gdata = payload["group"]
    group = Group(gdata["elements"], table=np.asarray(gdata["mult"], dtype=np.int32))
    group.validate()
    return quotient_mod.make_action(building, group, payload["perms"])


def bruhat_to_payload(data: bruhat_mod.BruhatData) -> dict:
    assign = data.assignment()
    return {
        "group": {"elements": list(data.group.labels), "mult": data.group.table.tolist()},
        "borel": [1 if i in data.borel else 0 for i in range(data.group.order)],
        "assignment": [list(assign[i].word) for i in range(data.group.order)],
        "coxeter": matrix_to_payload(data.system.matrix),
    }


def payload_to_bruhat(payload: dict) -> bruhat_mod.BruhatData:
    gdata = payload["group"]
    group = Group(gdata["elements"], table=np.asarray(gdata["mult"], dtype=np.int32))
    group.validate()
    if "coxeter" not in payload:
        raise DocumentError("bruhat payload needs a coxeter block")
    system = payload_to_system(payload["coxeter"])
    cells: dict = {}
    for i, word in enumerate(payload["assignment"]):
        cells.setdefault(system.element(word), set()).add(i)
    borel = frozenset(i for i, flag in enumerate(payload["borel"]) if flag)
    data = bruhat_mod.BruhatData(
        group, system, borel, {w: frozenset(m) for w, m in cells.items()}
    )
    bruhat_mod.validate_bruhat(data)
    return data


def morphism_to_payload(p: covering_mod.WGroupoidMorphism) -> dict:
    return {"vertex_map": dict(p.vertex_map), "edge_map": dict(p.edge_map)}


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------


def _emit_report(named, as_json: bool, header: str | None = None) -> int:
    ok = all(v.passed for _, v in named)
    if as_json:
        print(json.dumps(
            {name: v.to_dict() for name, v in named}, indent=2, sort_keys=True
        ))
    else:
        if header:
            print(header)
        print(render_verdicts(named))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_check(args) -> int:
    doc = load(args.file)
    as_json = args.json
    if doc.kind == "building":
        B = payload_to_building(doc.payload)
        return _emit_report(building_mod.check_building(B).named(), as_json,
                            f"building with {B.size} chambers")
    if doc.kind == "wgroupoid":
        G = payload_to_wgroupoid(doc.payload)
        return _emit_report(wmetric_mod.check_axioms(G).named(), as_json,
                            f"wgroupoid with {G.base.n_vertices} chambers, {G.base.n_edges} edges")
    if doc.kind == "groupoid":
        payload_to_groupoid(doc.payload)  # build() validates exhaustively
        print("groupoid: pass (all axioms validated)")
        return 0
    if doc.kind == "coxeter":
        payload_to_system(doc.payload)
        print("coxeter: pass (matrix invariants hold)")
        return 0
    if doc.kind == "incidence":
        geom = payload_to_incidence(doc.payload)
        B = building_mod.rank2_building(geom)
        m = B.system.matrix.entry(0, 1)
        print(f"incidence: pass (generalized {m}-gon, {B.size} flags)")
        return 0
    if doc.kind == "bruhat":
        data = payload_to_bruhat(doc.payload)
        return _emit_report(bruhat_mod.check_property_B(data).named(), as_json,
                            f"bruhat data over a group of order {data.group.order}")
    if doc.kind == "action":
        if not args.building:
            raise DocumentError("checking an action document requires --building")
        B = payload_to_building(load(args.building).payload)
        payload_to_action(doc.payload, B)
        print("action: pass (group action, type-preserving)")
        return 0
    raise DocumentError(f"no check defined for kind {doc.kind!r}")


def _system_from_args(args) -> CoxeterSystem:
    if args.coxeter:
        return payload_to_system(load(args.coxeter).payload)
    if args.type:
        name = args.type.upper()
        if name.startswith("A") and name[1:].isdigit():
            return CoxeterSystem(CoxeterMatrix.a(int(name[1:])))
        if name.startswith("I2(") and name.endswith(")"):
            return CoxeterSystem(CoxeterMatrix.i2(int(name[3:-1])))
        raise DocumentError(f"unknown system type {args.type!r} (try A2, A3, I2(m))")
    raise DocumentError("either --coxeter or --type is required")


def _cmd_build(args) -> int:
    if args.what == "thin":
        system = _system_from_args(args)
        B = building_mod.thin_building(system, max_length=args.max_length)
        save(Document("building", building_to_payload(B)), args.out)
        print(f"wrote thin building with {B.size} chambers to {args.out}")
        return 0
    if args.what == "plane":
        residues = [int(x) for x in args.difference_set.split(",")]
        geom = building_mod.difference_set_plane(residues, args.modulus)
        if args.out:
            save(Document("incidence", incidence_to_payload(geom)), args.out)
            print(f"wrote incidence geometry with {len(geom.flags)} flags to {args.out}")
        if args.out_building or args.singer_action:
            B = building_mod.rank2_building(geom)
            if args.out_building:
                save(Document("building", building_to_payload(B)), args.out_building)
                print(f"wrote building with {B.size} chambers to {args.out_building}")
            if args.singer_action:
                action = quotient_mod.singer_shift_action(B, args.modulus)
                save(Document("action", action_to_payload(action)), args.singer_action)
                print(f"wrote Singer shift action to {args.singer_action}")
        return 0
    if args.what == "rank2":
        geom = payload_to_incidence(load(args.incidence).payload)
        B = building_mod.rank2_building(geom)
        save(Document("building", building_to_payload(B)), args.out)
        m = B.system.matrix.entry(0, 1)
        print(f"wrote generalized {m}-gon building with {B.size} chambers to {args.out}")
        return 0
    if args.what == "gl":
        B, action = building_mod.gl_building(args.n, args.q)
        if args.out_building:
            save(Document("building", building_to_payload(B)), args.out_building)
            print(f"wrote building with {B.size} chambers to {args.out_building}")
        if args.out_action:
            save(Document("action", action_to_payload(action)), args.out_action)
            print(f"wrote GL({args.n},{args.q}) action (order {action.group.order}) to {args.out_action}")
        return 0
    raise DocumentError(f"unknown build target {args.what!r}")


def _cmd_quotient(args) -> int:
    B = payload_to_building(load(args.building).payload)
    action = payload_to_action(load(args.action).payload, B)
    q = quotient_mod.quotient(action)
    annotations = {
        "orbit_reps": list(q.orbit_reps),
        "edge_labels": {eid: list(map(str, triple)) for eid, triple in q.edge_labels.items()},
    }
    save(Document("wgroupoid", wgroupoid_to_payload(q.wgroupoid, annotations)), args.out)
    report = wmetric_mod.check_axioms(q.wgroupoid)
    k, n = q.wgroupoid.base.n_vertices, q.wgroupoid.base.n_edges
    print(f"wrote quotient wgroupoid ({k} chambers, {n} edges) to {args.out}")
    return _emit_report(report.named(), args.json)


def _cmd_cover(args) -> int:
    G = payload_to_wgroupoid(load(args.wgroupoid).payload)
    base_chamber = args.base or G.base.vertices[0]
    cover, projection, deck = covering_mod.universal_cover(G, base_chamber)
    save(Document("wgroupoid", wgroupoid_to_payload(cover)), args.out)
    print(f"wrote universal cover ({cover.base.n_vertices} chambers) to {args.out}")
    if args.out_morphism:
        save(Document("morphism", morphism_to_payload(projection)), args.out_morphism)
        print(f"wrote covering morphism to {args.out_morphism}")
    report = covering_mod.is_covering(projection)
    return _emit_report(report.named(), args.json)


def _cmd_collapse(args) -> int:
    G = payload_to_wgroupoid(load(args.wgroupoid).payload)
    try:
        B = covering_mod.collapse_units(G)
    except covering_mod.CollapseError as exc:
        print(f"collapse failed: {exc}")
        if exc.report is not None:
            print(render_verdicts(exc.report.named()))
        return 1
    save(Document("building", building_to_payload(B)), args.out)
    print(f"wrote collapsed building ({B.size} chambers) to {args.out}")
    report = building_mod.check_building(B)
    return _emit_report(report.named(), args.json)


def _cmd_bruhat(args) -> int:
    if args.gl:
        n, q = args.gl
        data = bruhat_mod.gl_bruhat(n, q)
    elif args.wgroupoid:
        G = payload_to_wgroupoid(load(args.wgroupoid).payload)
        data = bruhat_mod.from_one_chamber(G)
    else:
        raise DocumentError("bruhat requires --gl N Q or --wgroupoid FILE")
    if args.out:
        save(Document("bruhat", bruhat_to_payload(data)), args.out)
        print(f"wrote bruhat data to {args.out}")
    sizes = [
        len(data.cells[w])
        for w in sorted(data.cells, key=lambda e: (e.length, e.word))
    ]
    print("cell sizes:", ",".join(str(s) for s in sizes))
    if args.verify:
        report = bruhat_mod.check_property_B(data)
        return _emit_report(report.named(), args.json)
    return 0


def _cmd_geodesic(args) -> int:
    G = payload_to_wgroupoid(load(args.wgroupoid).payload)
    try:
        geo = wmetric_mod.geodesics(G, args.edge)
    except wmetric_mod.GeodesicPropertyError as exc:
        print(f"geodesic property violated: {exc}")
        return 1
    if args.json:
        print(json.dumps(
            {"-".join(map(str, t)): list(g.steps) for t, g in sorted(geo.items())},
            indent=2, sort_keys=True,
        ))
    else:
        d = G.delta_of(args.edge)
        print(f"edge {args.edge}: delta {d!r}, {len(geo)} geodesic type(s)")
        for t, g in sorted(geo.items()):
            print(f"  type {list(t)}: {' . '.join(g.steps)}")
    return 0


def _cmd_info(args) -> int:
    doc = load(args.file)
    print(f"kind: {doc.kind}")
    p = doc.payload
    if doc.kind == "building":
        print(f"chambers: {len(p['chambers'])}")
        print(f"rank: {p['coxeter']['rank']}")
    elif doc.kind == "wgroupoid":
        print(f"chambers: {len(p['vertices'])}")
        print(f"edges: {len(p['edges'])}")
        print(f"rank: {p['coxeter']['rank']}")
    elif doc.kind == "incidence":
        print(f"points: {len(p['points'])}, lines: {len(p['lines'])}, flags: {len(p['flags'])}")
    elif doc.kind == "action":
        print(f"group order: {len(p['group']['elements'])}")
    elif doc.kind == "bruhat":
        print(f"group order: {len(p['group']['elements'])}")
        print(f"borel size: {sum(p['borel'])}")
    elif doc.kind == "coxeter":
        print(f"rank: {p['rank']}")
    elif doc.kind == "groupoid":
        print(f"vertices: {len(p['vertices'])}, edges: {len(p['edges'])}")
    elif doc.kind == "morphism":
        print(f"vertex map size: {len(p['vertex_map'])}, edge map size: {len(p['edge_map'])}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgroupoid",
        description="Build, check, quotient, cover, and collapse W-metric structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check the axioms of a document")
    p.add_argument("file")
    p.add_argument("--building", help="building context for action documents")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("build", help="construct a structure")
    psub = p.add_subparsers(dest="what", required=True)

    b = psub.add_parser("thin", help="thin building of a Coxeter system")
    b.add_argument("--coxeter")
    b.add_argument("--type", help="A2, A3, I2(m), ...")
    b.add_argument("--max-length", type=int, default=None)
    b.add_argument("--out", required=True)
    b.set_defaults(fn=_cmd_build)

    b = psub.add_parser("plane", help="projective plane from a difference set")
    b.add_argument("--difference-set", required=True, help="comma-separated residues")
    b.add_argument("--modulus", type=int, required=True)
    b.add_argument("--out")
    b.add_argument("--out-building")
    b.add_argument("--singer-action")
    b.set_defaults(fn=_cmd_build)

    b = psub.add_parser("rank2", help="building from an incidence geometry")
    b.add_argument("--incidence", required=True)
    b.add_argument("--out", required=True)
    b.set_defaults(fn=_cmd_build)

    b = psub.add_parser("gl", help="flag building and action of GL_n(F_q)")
    b.add_argument("--n", type=int, default=3)
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--out-building")
    b.add_argument("--out-action")
    b.set_defaults(fn=_cmd_build)

    p = sub.add_parser("quotient", help="skeleton quotient of a chamber action")
    p.add_argument("--building", required=True)
    p.add_argument("--action", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_quotient)

    p = sub.add_parser("cover", help="universal cover of a wgroupoid")
    p.add_argument("--wgroupoid", required=True)
    p.add_argument("--base")
    p.add_argument("--out", required=True)
    p.add_argument("--out-morphism")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_cover)

    p = sub.add_parser("collapse", help="identify chambers at distance 1")
    p.add_argument("--wgroupoid", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_collapse)

    p = sub.add_parser("bruhat", help="Bruhat data of a one-chamber wgroupoid or GL(n,q)")
    p.add_argument("--wgroupoid")
    p.add_argument("--gl", nargs=2, type=int, metavar=("N", "Q"))
    p.add_argument("--verify", action="store_true")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_bruhat)

    p = sub.add_parser("geodesic", help="geodesics of an edge, one per reduced type")
    p.add_argument("--wgroupoid", required=True)
    p.add_argument("--edge", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_geodesic)

    p = sub.add_parser("info", help="summarize a document")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_info)

    return parser


def run(argv) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except (
        DocumentError,
        CoxeterError,
        GroupoidError,
        building_mod.BuildingError,
        wmetric_mod.WMetricError,
        quotient_mod.ActionError,
        covering_mod.CoveringError,
        bruhat_mod.BruhatError,
    ) as exc:
        kind = type(exc).__name__
        print(f"error ({kind}): {exc}", file=sys.stderr)
        if isinstance(exc, (wmetric_mod.GeodesicPropertyError, covering_mod.CollapseError)):
            return 1
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
