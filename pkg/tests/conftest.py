import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from dendrotile.hexgrid import Region
from dendrotile.ruleset import builtin_ruleset, load_ruleset
from dendrotile.solver import Patch, SolverConfig, solve_region


@pytest.fixture(scope="session")
def unmarked():
    return builtin_ruleset("unmarked")


@pytest.fixture(scope="session")
def st12():
    return builtin_ruleset("st12")


@pytest.fixture(scope="session")
def hextoo6():
    return builtin_ruleset("hextoo6")


@pytest.fixture(scope="session")
def plainmale():
    """All edges compatible, male joint on edge 0: acyclicity is the only
    binding constraint."""
    return load_ruleset(json.dumps({
        "name": "plainmale",
        "variants": ["hex"],
        "chiralities": ["R"],
        "base_edge_labels": {"hex": {"R": ["x"] * 6}},
        "k1_compat": [["x", "x"]],
        "male_edge_offset": {"hex": {"R": 0}},
    }))


def solved_patch(rs, radius, seed=0):
    region = Region.hex(radius)
    res = solve_region(region, rs, SolverConfig(seed=seed))
    assert res.outcome == "SAT", f"{rs.name} radius {radius} seed {seed}"
    return Patch(rs, region, res.assignment)


@pytest.fixture(scope="session")
def st12_r8():
    return solved_patch(builtin_ruleset("st12"), 8, seed=0)


@pytest.fixture(scope="session")
def hextoo6_r8():
    return solved_patch(builtin_ruleset("hextoo6"), 8, seed=0)
