"""Experiment driver: budget, surface-size, repeater-gain, and price-ratio sweeps.

Runs the planner over a family of scenarios and produces tidy long-format
records plus mean / min / max aggregates across scenarios.  Activation
tensors are cached per physics fingerprint, so cost-only axes (price ratio,
budget) never re-run the channel evaluation.
"""
from __future__ import annotations

import io
import json
import math
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from .activation import ActivationTables, compute_activation
from .catalog import (
    Catalog,
    CostModel,
    DEFAULT_COST_MODEL,
    FLAVOR_FULL,
    FLAVOR_REDUCED,
    REF_NCR_GAIN_DB,
    TECH_NCR,
    TECH_RIS,
    TECH_STAR,
    TECH_TRI_NCR,
    build_catalog,
    reprice,
)
from .channel import DEFAULT_PARAMS, LinkBudgetParams
from .optimizer import Infeasible, KIND_FCMC, KIND_MBCC, make_instance, solve_fcmc_exact, solve_mbcc_exact
from .scenario import Scenario, generate_manhattan, scenario_from_file

AXIS_BUDGET = "budget"
AXIS_RIS_SIZE = "ris_size"
AXIS_NCR_GAIN = "ncr_gain"
AXIS_PRICE_RATIO = "price_ratio"

TECHNOLOGIES = (TECH_RIS, TECH_STAR, TECH_NCR, TECH_TRI_NCR)

DEFAULT_SEEDS = (1, 2, 3, 4, 5, 6, 7, 8)
DEFAULT_GENERATOR = {
    "blocks": 3,
    "block_size": 80.0,
    "street_width": 24.0,
    "height": 6.0,
    "tp_spacing": 20.0,
    "site_spacing": 60.0,
}
DEFAULT_BUDGET_GRID = tuple(np.arange(0.0, 16.0 + 1e-9, 0.5))

CSV_COLUMNS = (
    "scenario",
    "gamma_db",
    "flavor",
    "axis",
    "axis_value",
    "model",
    "status",
    "objective",
    "coverage",
    "total_cost",
    "installed",
    "ratio_ris",
    "ratio_star",
    "ratio_ncr",
    "ratio_3sncr",
)


@dataclass(frozen=True)
class SweepConfig:
    axis: str
    values: tuple[float, ...]
    model: str = KIND_MBCC
    k: int = 1
    budget: float = 8.0  # fixed MBCC budget when the axis is not the budget
    flavors: tuple[str, ...] = (FLAVOR_REDUCED, FLAVOR_FULL)
    gammas_db: tuple[float, ...] = (0.0, 10.0)
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    scenario_files: tuple[str, ...] = ()
    generator: dict = field(default_factory=lambda: dict(DEFAULT_GENERATOR))
    ris_sizes: tuple[int, ...] = (100,)
    ncr_gains: tuple[float, ...] = (REF_NCR_GAIN_DB,)
    orientations: int = 8
    cost_model: CostModel = DEFAULT_COST_MODEL
    params: LinkBudgetParams = DEFAULT_PARAMS
    one_device_per_site: bool = True
    time_limit: float | None = None

    def __post_init__(self):
        if self.axis not in (AXIS_BUDGET, AXIS_RIS_SIZE, AXIS_NCR_GAIN, AXIS_PRICE_RATIO):
            raise ValueError(f"unknown sweep axis '{self.axis}'")
        if not self.values:
            raise ValueError("sweep needs at least one axis value")
        if self.axis == AXIS_BUDGET and self.model != KIND_MBCC:
            raise ValueError("a budget axis requires the MBCC model")
        if self.model not in (KIND_FCMC, KIND_MBCC):
            raise ValueError("model must be 'fcmc' or 'mbcc'")


def sweep_config_from_dict(raw: dict) -> SweepConfig:
    kwargs = dict(raw)
    if "cost_model" in kwargs:
        kwargs["cost_model"] = CostModel(**kwargs["cost_model"])
    if "params" in kwargs:
        kwargs["params"] = LinkBudgetParams.from_dict(kwargs["params"])
    for key in ("values", "flavors", "gammas_db", "seeds", "scenario_files", "ris_sizes", "ncr_gains"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    return SweepConfig(**kwargs)


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    records: tuple[dict, ...]
    mean: tuple[dict, ...]
    envelope: tuple[dict, ...]  # min/max rows per (gamma, flavor, axis value)


def _scenarios(config: SweepConfig):
    if config.scenario_files:
        for path in config.scenario_files:
            yield str(path), scenario_from_file(path)
    else:
        for seed in config.seeds:
            yield f"seed{seed}", generate_manhattan(seed=seed, **config.generator)


def _catalog_for(config: SweepConfig, axis_value: float) -> Catalog:
    ris_sizes = config.ris_sizes
    ncr_gains = config.ncr_gains
    model = config.cost_model
    if config.axis == AXIS_RIS_SIZE:
        ris_sizes = (int(axis_value),)
    elif config.axis == AXIS_NCR_GAIN:
        ncr_gains = (float(axis_value),)
    elif config.axis == AXIS_PRICE_RATIO:
        model = model.with_price_ratio(float(axis_value))
    return build_catalog(
        flavor=FLAVOR_FULL,
        ris_sizes=ris_sizes,
        ncr_gains=ncr_gains,
        orientations=config.orientations,
        model=model,
    )


def _physics_key(catalog: Catalog) -> tuple:
    return tuple((s.id, repr(s.config)) for s in catalog.specs)


def run_sweep(config: SweepConfig, progress=None) -> SweepResult:
    """Execute the sweep; infeasible FCMC points are recorded, not fatal."""
    if progress is None:
        progress = lambda msg: print(msg, file=sys.stderr)
    records: list[dict] = []
    for name, scenario in _scenarios(config):
        progress(f"sweep: scenario {name} ({len(scenario.tps)} tps, {len(scenario.sites)} sites)")
        cache: dict[tuple, ActivationTables] = {}
        for value in config.values:
            catalog = _catalog_for(config, value)
            key = _physics_key(catalog)
            if key not in cache:
                cache[key] = compute_activation(scenario, catalog, config.params, gamma_db=0.0)
            base_tables = cache[key]
            for gamma in config.gammas_db:
                tables_full = base_tables.rethreshold(gamma)
                for flavor in config.flavors:
                    if flavor == FLAVOR_REDUCED:
                        reduced_ids = [s.id for s in catalog.specs if s.technology in (TECH_RIS, TECH_NCR)]
                        tables = tables_full.restrict(reduced_ids)
                        cat = Catalog(tuple(s for s in catalog.specs if s.id in set(reduced_ids)), FLAVOR_REDUCED)
                    else:
                        tables, cat = tables_full, catalog
                    records.append(_solve_point(config, name, gamma, flavor, value, tables, cat))
    records.sort(key=lambda r: (r["scenario"], r["gamma_db"], r["flavor"], r["axis_value"]))
    mean, envelope = _aggregate(records)
    return SweepResult(config, tuple(records), tuple(mean), tuple(envelope))


def _solve_point(config, name, gamma, flavor, value, tables, catalog) -> dict:
    budget = float(value) if config.axis == AXIS_BUDGET else config.budget
    rec = {
        "scenario": name,
        "gamma_db": float(gamma),
        "flavor": flavor,
        "axis": config.axis,
        "axis_value": float(value),
        "model": config.model,
    }
    try:
        if config.model == KIND_MBCC:
            instance = make_instance(
                tables, catalog, KIND_MBCC, budget=budget, one_device_per_site=config.one_device_per_site
            )
            sol = solve_mbcc_exact(instance, time_limit=config.time_limit)
            objective = sol.objective
            coverage = sol.objective / max(len(tables.tp_ids), 1)
        else:
            instance = make_instance(
                tables, catalog, KIND_FCMC, k=config.k, one_device_per_site=config.one_device_per_site
            )
            sol = solve_fcmc_exact(instance, time_limit=config.time_limit)
            objective = sol.objective
            coverage = len(sol.covered) / max(len(tables.tp_ids), 1)
    except Infeasible as exc:
        rec.update(
            status="infeasible",
            objective=math.nan,
            coverage=math.nan,
            total_cost=math.nan,
            installed=0,
            **{f"ratio_{t}": 0.0 for t in TECHNOLOGIES},
        )
        rec["uncoverable"] = len(exc.uncoverable_tp_ids)
        return rec
    tech_of = {s.id: s.technology for s in catalog.specs}
    installed = [tech_of[did] for _, did in sol.installs]
    total = len(installed)
    rec.update(
        status="optimal" if sol.optimal else "feasible",
        objective=float(objective),
        coverage=float(coverage),
        total_cost=float(sol.total_cost),
        installed=total,
        **{f"ratio_{t}": (installed.count(t) / total if total else 0.0) for t in TECHNOLOGIES},
    )
    return rec


def _aggregate(records: list[dict]):
    groups: dict[tuple, list[dict]] = {}
    for r in records:
        groups.setdefault((r["gamma_db"], r["flavor"], r["axis_value"]), []).append(r)
    mean_rows, env_rows = [], []
    for (gamma, flavor, value), rows in sorted(groups.items()):
        fin = [r for r in rows if not math.isnan(r["objective"])]
        base = {
            "gamma_db": gamma,
            "flavor": flavor,
            "axis": rows[0]["axis"],
            "axis_value": value,
            "model": rows[0]["model"],
            "scenarios": len(rows),
            "feasible": len(fin),
        }
        if fin:
            objs = [r["objective"] for r in fin]
            covs = [r["coverage"] for r in fin]
            installing = [r for r in fin if r["installed"] > 0]
            ratios = {
                f"ratio_{t}": (sum(r[f"ratio_{t}"] for r in installing) / len(installing) if installing else 0.0)
                for t in TECHNOLOGIES
            }
            mean_rows.append(
                {**base, "objective": sum(objs) / len(objs), "coverage": sum(covs) / len(covs), **ratios}
            )
            env_rows.append(
                {
                    **base,
                    "objective_min": min(objs),
                    "objective_max": max(objs),
                    "coverage_min": min(covs),
                    "coverage_max": max(covs),
                }
            )
        else:
            mean_rows.append({**base, "objective": math.nan, "coverage": math.nan})
            env_rows.append(
                {**base, "objective_min": math.nan, "objective_max": math.nan, "coverage_min": math.nan, "coverage_max": math.nan}
            )
    return mean_rows, env_rows


# ---------------------------------------------------------------------------
# export


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.12g}"
    return str(value)


def export_results(result, fmt: str = "csv") -> str:
    """Tidy long-format export of per-scenario sweep records."""
    if isinstance(result, SweepResult):
        records = result.records
    elif isinstance(result, dict) and "records" in result:
        records = result["records"]
    else:
        records = result
    if fmt == "json":
        doc = {"records": [dict(r) for r in records]}
        return json.dumps(doc, indent=2, default=float) + "\n"
    if fmt != "csv":
        raise ValueError("format must be 'csv' or 'json'")
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for r in records:
        out.write(",".join(_fmt(r.get(c, "")) for c in CSV_COLUMNS) + "\n")
    return out.getvalue()
