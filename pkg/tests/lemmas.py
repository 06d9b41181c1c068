"""Exhaustive consequence checks run against battery-passing W-groupoids.

Each check returns a list of witness strings (empty = the consequence
holds everywhere).  They are deliberately written as plain loops over the
structure, independent of the vectorized battery implementation.
"""

from wgroupoid.wmetric import WGroupoid, galleries


def inverse_lemma(G: WGroupoid) -> list[str]:
    """delta(g^-1) = delta(g)^-1 for every edge."""
    base, system = G.base, G.system
    out = []
    for e in range(base.n_edges):
        if G.delta[int(base.inv[e])] != system.inverse(G.delta[e]):
            out.append(base.edge_ids[e])
    return out


def unit_difference_lemma(G: WGroupoid) -> list[str]:
    """delta(g^-1 h) = 1 implies delta(g) = delta(h), over all pairs with
    a common source."""
    base = G.base
    out = []
    for v in range(base.n_vertices):
        for g in base.out_edges_i(v):
            gi = int(base.inv[g])
            for h in base.out_edges_i(v):
                k = base.compose_i(gi, h)
                if G.delta[k].is_identity() and G.delta[g] != G.delta[h]:
                    out.append(f"({base.edge_ids[g]},{base.edge_ids[h]})")
    return out


def panel_closure_lemma(G: WGroupoid) -> list[str]:
    """For composable generator-length edges: delta(gh) in {1, s} when the
    types agree, and delta(gh) = st when they differ."""
    base, system = G.base, G.system
    out = []
    for g, h in base.composable_pairs_i():
        dg, dh = G.delta[g], G.delta[h]
        if not (dg.is_generator() and dh.is_generator()):
            continue
        dgh = G.delta[base.compose_i(g, h)]
        if dg == dh:
            ok = dgh.is_identity() or dgh == dg
        else:
            ok = dgh == system.mult(dg, dh)
        if not ok:
            out.append(f"({base.edge_ids[g]},{base.edge_ids[h]})")
    return out


def geodesic_report(G: WGroupoid) -> tuple[list[str], list[str], dict[str, dict[tuple, int]]]:
    """(existence witnesses, product-law witnesses, per-edge type counts)
    over every edge with delta != 1 and every reduced word of its delta."""
    base, system = G.base, G.system
    missing: list[str] = []
    product_bad: list[str] = []
    counts: dict[str, dict[tuple, int]] = {}
    for e in range(base.n_edges):
        d = G.delta[e]
        if d.is_identity():
            continue
        eid = base.edge_ids[e]
        percounts = {}
        for f in sorted(system.reduced_words(d)):
            found = galleries(G, eid, f)
            percounts[f] = len(found)
            if not found:
                missing.append(f"{eid}:{list(f)}")
            for gal in found:
                steps = [base.edge_index(s) for s in gal.steps]
                acc = steps[0]
                for s in steps[1:]:
                    acc = base.compose_i(acc, s)
                prod = system.identity
                for s in steps:
                    prod = system.mult(prod, G.delta[s])
                if acc != e or prod != d:
                    product_bad.append(f"{eid}:{list(f)}")
        counts[eid] = percounts
    return missing, product_bad, counts
