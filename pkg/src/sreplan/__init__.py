"""Coverage planning toolkit for smart radio environments.

Link budgets for wall metasurfaces (RIS), roof transmit/reflect surfaces
(STAR), and amplify-and-forward repeaters (NCR / tri-sector NCR) over
deterministic urban geometry, plus exact and greedy solvers for the two
planning problems: minimum-cost full coverage and budget-constrained
maximum coverage.
"""

from .activation import ActivationTables, compute_activation, coverage_stats, export_tables, load_tables
from .catalog import (
    Catalog,
    CostModel,
    DEFAULT_COST_MODEL,
    DeviceSpec,
    FLAVOR_FULL,
    FLAVOR_REDUCED,
    build_catalog,
    device_cost,
    ncr_cost,
    reprice,
    ris_cost,
)
from .channel import (
    ArrayGeometry,
    DEFAULT_PARAMS,
    LinkBudgetParams,
    LinkSnr,
    NcrConfig,
    RisConfig,
    StarConfig,
    TriNcrConfig,
    array_response,
    blockage_prob,
    element_gain,
    fspl,
    longterm_snr,
    snr_direct,
    snr_metasurface,
    snr_ncr,
    tri_ncr_facing,
    wave_vector,
)
from .optimizer import (
    Infeasible,
    PlanInstance,
    PlanSolution,
    brute_force,
    check_solution,
    make_instance,
    solution_document,
    solve_fcmc_exact,
    solve_greedy,
    solve_mbcc_exact,
)
from .scenario import (
    Building,
    BaseStation,
    CandidateSite,
    Point3,
    Scenario,
    ScenarioError,
    TestPoint,
    generate_manhattan,
    load_scenario,
    los_blocked,
    scenario_from_file,
)
from .sweeps import SweepConfig, SweepResult, export_results, run_sweep, sweep_config_from_dict

__version__ = "0.1.0"
