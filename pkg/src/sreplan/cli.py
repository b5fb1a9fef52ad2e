"""Command-line entry point: generate, plan, sweep, inspect.

Data goes to files or stdout; human-readable summaries and progress go to
stderr.  Exit codes: 0 success, 1 usage error, 2 infeasible full-coverage
plan (certificate printed), 3 I/O or input-format error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .activation import compute_activation, coverage_stats, load_tables
from .catalog import Catalog, FLAVOR_FULL, FLAVOR_REDUCED, build_catalog, catalog_from_dict, cost_table
from .channel import DEFAULT_PARAMS, LinkBudgetParams
from .optimizer import (
    Infeasible,
    KIND_FCMC,
    KIND_MBCC,
    make_instance,
    solution_document,
    solve_fcmc_exact,
    solve_mbcc_exact,
)
from .scenario import Scenario, ScenarioError, generate_manhattan, load_scenario, scenario_from_file
from .sweeps import export_results, run_sweep, sweep_config_from_dict

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="sreplan", description="Coverage planning for smart radio environments")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic urban scenario")
    gen.add_argument("--blocks", type=int, default=3)
    gen.add_argument("--block-size", type=float, default=80.0)
    gen.add_argument("--street-width", type=float, default=20.0)
    gen.add_argument("--height", type=float, default=6.0)
    gen.add_argument("--tp-spacing", type=float, default=20.0)
    gen.add_argument("--site-spacing", type=float, default=60.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None, help="output path (default: stdout)")

    plan = sub.add_parser("plan", help="solve a planning instance")
    plan.add_argument("--scenario", required=True)
    plan.add_argument("--catalog", default="full", help="catalog config file, or 'full' / 'reduced'")
    plan.add_argument("--model", choices=[KIND_FCMC, KIND_MBCC], required=True)
    plan.add_argument("--k", type=int, default=1, help="coverage redundancy (fcmc)")
    plan.add_argument("--budget", type=float, default=0.0, help="budget in cost units (mbcc)")
    plan.add_argument("--gamma", type=float, required=True, help="SNR threshold, dB")
    plan.add_argument("--params", default=None, help="link-budget parameter file (JSON)")
    plan.add_argument("--out", default=None, help="topology document path (default: stdout)")
    plan.add_argument("--geo", default=None, help="also write a geometry-feature document here")
    plan.add_argument("--time-limit", type=float, default=None)
    plan.add_argument(
        "--multi-device-per-site",
        action="store_true",
        help="allow several devices on one candidate site (off by default)",
    )

    swp = sub.add_parser("sweep", help="run an experiment sweep from a config file")
    swp.add_argument("--config", required=True)
    swp.add_argument("--out", default=None, help="output path (default: stdout)")
    swp.add_argument("--format", choices=["csv", "json"], default="csv")

    ins = sub.add_parser("inspect", help="summarize scenarios, tables, or solutions")
    ins.add_argument("--scenario", default=None)
    ins.add_argument("--tables", default=None, help="activation export (.npz)")
    ins.add_argument("--solution", default=None, help="topology document")
    ins.add_argument("--defaults", action="store_true", help="print default link-budget parameters")
    return parser


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_catalog(arg: str) -> Catalog:
    if arg in (FLAVOR_FULL, FLAVOR_REDUCED):
        return build_catalog(flavor=arg)
    with open(arg, "r", encoding="utf-8") as fh:
        return catalog_from_dict(json.load(fh))


def _load_params(path: str | None) -> LinkBudgetParams:
    if path is None:
        return DEFAULT_PARAMS
    with open(path, "r", encoding="utf-8") as fh:
        return LinkBudgetParams.from_dict(json.load(fh))


def export_topology(solution_doc: dict, scenario: Scenario) -> dict:
    """Geometry-feature document: buildings, BS, installs, TPs, coverage links."""
    features = []
    for b in scenario.buildings:
        ring = [[float(x), float(y)] for x, y in b.footprint]
        ring.append(ring[0])
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [ring]},
                "properties": {"kind": "building", "height": b.height},
            }
        )
    bs = scenario.bs.position
    features.append(
        {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [bs.x, bs.y, bs.z]},
            "properties": {"kind": "bs"},
        }
    )
    sites = scenario.site_index()
    device_pos = {}
    for inst in solution_doc.get("installs", []):
        sid = inst["site"]
        if sid not in sites:
            raise ValueError(f"install references unknown site '{sid}'")
        pos = sites[sid].position
        device_pos[(sid, inst["spec"])] = pos
        props = {
            "kind": "device",
            "site": sid,
            "spec": inst["spec"],
            "technology": inst["technology"],
            "cost": inst["cost"],
        }
        if "orientation_rad" in inst:
            props["orientation_rad"] = inst["orientation_rad"]
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [pos.x, pos.y, pos.z]},
                "properties": props,
            }
        )
    covered = set(solution_doc.get("covered", []))
    tps = scenario.tp_index()
    for tp in scenario.tps:
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [tp.position.x, tp.position.y, tp.position.z]},
                "properties": {"kind": "tp", "id": tp.id, "covered": tp.id in covered},
            }
        )
    for tid, witnesses in sorted(solution_doc.get("witnesses", {}).items()):
        if tid not in tps:
            raise ValueError(f"witness references unknown test point '{tid}'")
        tp = tps[tid].position
        for w in witnesses:
            if w == "bs":
                continue
            sid, did = w
            pos = device_pos.get((sid, did))
            if pos is None:
                raise ValueError(f"witness references uninstalled device ({sid}, {did})")
            features.append(
                {
                    "type": "Feature",
                    "geometry": {
                        "type": "LineString",
                        "coordinates": [[tp.x, tp.y, tp.z], [pos.x, pos.y, pos.z]],
                    },
                    "properties": {"kind": "coverage-link", "tp": tid, "site": sid, "spec": did},
                }
            )
    return {"type": "FeatureCollection", "crs": "local-meters", "features": features}


def _cmd_generate(args) -> int:
    scenario = generate_manhattan(
        blocks=args.blocks,
        block_size=args.block_size,
        street_width=args.street_width,
        height=args.height,
        tp_spacing=args.tp_spacing,
        site_spacing=args.site_spacing,
        seed=args.seed,
    )
    _write(scenario.to_json(), args.out)
    print(
        f"generated {len(scenario.buildings)} buildings, {len(scenario.sites)} sites, {len(scenario.tps)} tps",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_plan(args) -> int:
    scenario = scenario_from_file(args.scenario)
    catalog = _load_catalog(args.catalog)
    params = _load_params(args.params)
    tables = compute_activation(scenario, catalog, params, gamma_db=args.gamma)
    one_per_site = not args.multi_device_per_site
    if args.model == KIND_FCMC:
        instance = make_instance(tables, catalog, KIND_FCMC, k=args.k, one_device_per_site=one_per_site)
        solution = solve_fcmc_exact(instance, time_limit=args.time_limit)
    else:
        instance = make_instance(tables, catalog, KIND_MBCC, budget=args.budget, one_device_per_site=one_per_site)
        solution = solve_mbcc_exact(instance, time_limit=args.time_limit)
    doc = solution_document(solution, instance, catalog, scenario)
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    if args.geo:
        _write(json.dumps(export_topology(doc, scenario), indent=2) + "\n", args.geo)
    pct = 100.0 * len(solution.covered) / max(len(tables.tp_ids), 1)
    print(f"cost={solution.total_cost:.6g} covered={pct:.6g}% installs={len(solution.installs)}", file=sys.stderr)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = sweep_config_from_dict(json.load(fh))
    result = run_sweep(config)
    _write(export_results(result, fmt=args.format), args.out)
    print(f"sweep complete: {len(result.records)} records", file=sys.stderr)
    return EXIT_OK


def _cmd_inspect(args) -> int:
    if args.defaults:
        print(json.dumps(DEFAULT_PARAMS.to_dict(), indent=2))
        print(cost_table(build_catalog()), file=sys.stderr)
        return EXIT_OK
    did_something = False
    if args.scenario:
        s = scenario_from_file(args.scenario)
        w, h = s.area
        print(
            f"scenario: {w:g} x {h:g} m, {len(s.buildings)} buildings, "
            f"{sum(1 for x in s.sites if x.mount == 'wall')} wall sites, "
            f"{sum(1 for x in s.sites if x.mount == 'roof')} roof sites, {len(s.tps)} tps"
        )
        did_something = True
    if args.tables:
        t = load_tables(args.tables)
        stats = coverage_stats(t)
        print(
            f"tables: gamma={t.gamma_threshold:g} dB, shape={t.shape}, "
            f"bs_covered={stats['bs_covered']}, coverable={stats['coverable']}, "
            f"uncoverable={len(stats['uncoverable_tps'])}, fill_ratio={stats['fill_ratio']:.4f}"
        )
        did_something = True
    if args.solution:
        with open(args.solution, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        print(
            f"solution: model={doc.get('model')}, objective={doc.get('objective')}, "
            f"cost={doc.get('total_cost')}, installs={len(doc.get('installs', []))}, "
            f"covered={len(doc.get('covered', []))}/{doc.get('tp_total')}, optimal={doc.get('optimal')}"
        )
        did_something = True
    if not did_something:
        raise _UsageError("inspect needs --scenario, --tables, --solution, or --defaults")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "plan":
            return _cmd_plan(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_inspect(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        for tid in exc.uncoverable_tp_ids:
            print(f"uncoverable: {tid}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, json.JSONDecodeError, ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
