"""Decorated hexagonal monotiles: patch solving, verification, rendering."""

from .aperiodicity import loop_census, scan_translations, torus_scan
from .dendrite import (
    CycleError,
    MotifGraph,
    find_cycle,
    motif_graph,
    placement_order,
    verify_order,
)
from .hexgrid import (
    DIRS,
    Region,
    TorusBasis,
    canonical_bases,
    distance,
    hex_ball,
    neighbor,
)
from .render import RenderStyle, render_svg, render_tile
from .ruleset import (
    RuleSet,
    RuleSetError,
    TileState,
    builtin_names,
    builtin_ruleset,
    load_ruleset,
    search_rulesets,
)
from .solver import (
    Patch,
    SolveResult,
    SolverConfig,
    count_solutions,
    legal_states,
    propagate,
    solve_region,
    solve_torus,
    verify_patch,
)

__version__ = "0.1.0"

__all__ = [
    "DIRS",
    "Region",
    "TorusBasis",
    "canonical_bases",
    "distance",
    "hex_ball",
    "neighbor",
    "RuleSet",
    "RuleSetError",
    "TileState",
    "load_ruleset",
    "builtin_names",
    "builtin_ruleset",
    "search_rulesets",
    "Patch",
    "SolveResult",
    "SolverConfig",
    "count_solutions",
    "legal_states",
    "propagate",
    "solve_region",
    "solve_torus",
    "verify_patch",
    "CycleError",
    "MotifGraph",
    "motif_graph",
    "find_cycle",
    "placement_order",
    "verify_order",
    "scan_translations",
    "torus_scan",
    "loop_census",
    "RenderStyle",
    "render_svg",
    "render_tile",
    "__version__",
]
