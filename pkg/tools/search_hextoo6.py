"""Derive the shipped hextoo6 rule set.

The 6-state tile is single-sided: one variant, R chirality only, a male
joint on one edge, and a bump polarity (P outer / M inner) on each edge.
Neither the polarity vector nor the male edge position is pinned down by
anything else in the repo, so both are searched: 64 polarity vectors times
6 male offsets, filtered by search_rulesets (radius-2 satisfiable, every
torus quotient with |det| <= 4 unsatisfiable; the latter is automatic for
male-total sets by the functional-graph pigeonhole).

Survivors are then vetted harder: 20 seeded radius-8 patches must solve,
verify clean, and admit a placement order whose first cell is a dendrite
endpoint.  The first survivor passing gets a dendrite motif stroke from
the cell center to its male edge midpoint and is written to the package.
Run with --pin to write; without, the search only reports.
"""

import argparse
import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from dendrotile.dendrite import find_cycle, motif_graph, placement_order, \
    verify_order
from dendrotile.hexgrid import Region
from dendrotile.ruleset import canonical_json, load_ruleset, search_rulesets
from dendrotile.solver import Patch, SolverConfig, solve_region, verify_patch

TEMPLATE = {
    "name": "hextoo6",
    "variants": ["hex"],
    "chiralities": ["R"],
    "base_edge_labels": {"hex": {"R": [{"$free": ["P", "M"]} for _ in range(6)]}},
    "k1_compat": [["M", "P"], ["P", "M"]],
    "male_edge_offset": {"hex": {"R": {"$free": [0, 1, 2, 3, 4, 5]}}},
}

SEEDS = range(20)
RADIUS = 8


def vet(rs) -> bool:
    region = Region.hex(RADIUS)
    for seed in SEEDS:
        res = solve_region(region, rs, SolverConfig(seed=seed))
        if res.outcome != "SAT":
            return False
        p = Patch(rs, region, res.assignment)
        if verify_patch(p):
            return False
        g = motif_graph(p)
        if find_cycle(g) is not None:
            return False
        order = placement_order(p)
        if verify_order(p, order) is not None:
            return False
        if g.in_degree(order[0]) != 0:
            return False
    return True


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--pin", action="store_true",
                    help="write the winner into src/dendrotile/rulesets/")
    args = ap.parse_args()

    t0 = time.time()
    found = search_rulesets(TEMPLATE, budget=500)
    print(f"filter survivors: {len(found)} of {found.examined} examined "
          f"(complete={found.complete}, {time.time() - t0:.1f}s)")

    winner = None
    for rs in found:
        doc = rs.to_doc()
        vec = "".join(doc["base_edge_labels"]["hex"]["R"])
        off = doc["male_edge_offset"]["hex"]["R"]
        ok = vet(rs)
        print(f"  {vec} male=e{off}: vet={'pass' if ok else 'FAIL'}")
        if ok and winner is None:
            winner = doc
            if not args.pin:
                break

    if winner is None:
        print("no candidate survived vetting")
        sys.exit(1)

    off = winner["male_edge_offset"]["hex"]["R"]
    winner["motif_strokes"] = {
        "hex": {"R": [{"layer": "dendrite", "a": "c", "b": f"e{off}"}]}}
    rs = load_ruleset(json.dumps(winner))
    print(f"winner: edges={''.join(winner['base_edge_labels']['hex']['R'])} "
          f"male=e{off} states={len(rs.enumerate_states())}")
    if args.pin:
        out = ROOT / "src" / "dendrotile" / "rulesets" / "hextoo6.json"
        out.write_bytes(canonical_json(rs.to_doc()))
        print("wrote", out)


if __name__ == "__main__":
    main()
