"""Exact and heuristic solvers for the two planning problems.

FCMC: minimum-cost installation such that every test point is covered by at
least K distinct devices (the BS counts once toward K where it already covers
the point).  MBCC: maximize the number of covered test points subject to an
installation budget.  Both are solved exactly by depth-first branch and bound
over bitmask columns, approximately by greedy, and — for small instances —
by exhaustive enumeration, which serves as the test oracle.
"""
from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .activation import ActivationTables
from .catalog import Catalog

KIND_FCMC = "fcmc"
KIND_MBCC = "mbcc"


class Infeasible(Exception):
    """Full coverage is impossible; carries the uncoverable test point ids."""

    def __init__(self, uncoverable_tp_ids):
        self.uncoverable_tp_ids = tuple(uncoverable_tp_ids)
        super().__init__(
            f"{len(self.uncoverable_tp_ids)} test point(s) cannot reach the required coverage: "
            + ", ".join(self.uncoverable_tp_ids[:8])
            + ("..." if len(self.uncoverable_tp_ids) > 8 else "")
        )


@dataclass(frozen=True)
class PlanInstance:
    kind: str  # "fcmc" | "mbcc"
    tables: ActivationTables
    costs: np.ndarray  # (C, D) strictly positive units
    k: int = 1  # fcmc redundancy
    budget: float = 0.0  # mbcc budget
    one_device_per_site: bool = True

    def __post_init__(self):
        if self.kind not in (KIND_FCMC, KIND_MBCC):
            raise ValueError("kind must be 'fcmc' or 'mbcc'")
        if self.k < 1:
            raise ValueError("K must be >= 1")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if (np.asarray(self.costs) <= 0).any():
            raise ValueError("device costs must be strictly positive")


def make_instance(
    tables: ActivationTables,
    catalog: Catalog,
    kind: str,
    k: int = 1,
    budget: float = 0.0,
    one_device_per_site: bool = True,
) -> PlanInstance:
    if tuple(catalog.spec_ids) != tables.spec_ids:
        raise ValueError("catalog and activation tables disagree on device specs")
    costs = np.tile([s.cost for s in catalog.specs], (len(tables.site_ids), 1))
    return PlanInstance(kind, tables, costs, k=k, budget=budget, one_device_per_site=one_device_per_site)


@dataclass(frozen=True)
class PlanSolution:
    installs: tuple[tuple[str, str], ...]  # (site_id, spec_id)
    total_cost: float
    covered: tuple[str, ...]
    objective: float
    optimal: bool
    bound_gap: float


# ---------------------------------------------------------------------------
# column form


@dataclass
class _Columns:
    masks: list[int]  # TP coverage bitmasks
    costs: list[float]
    sites: list[int]
    labels: list[tuple[str, str]]  # (site_id, spec_id)
    bs_mask: int
    n_tp: int
    tp_ids: tuple[str, ...]
    k: int = 1
    one_per_site: bool = True


def _build_columns(instance: PlanInstance) -> _Columns:
    tables = instance.tables
    n_t = len(tables.tp_ids)
    bs_mask = 0
    for t in range(n_t):
        if tables.delta_bs[t]:
            bs_mask |= 1 << t
    masks, costs, sites, labels = [], [], [], []
    delta = tables.delta
    for ci, cid in enumerate(tables.site_ids):
        for di, did in enumerate(tables.spec_ids):
            col = delta[:, ci, di]
            if not col.any():
                continue  # never helps: positive cost, empty coverage
            m = 0
            for t in np.nonzero(col)[0]:
                m |= 1 << int(t)
            masks.append(m)
            costs.append(float(instance.costs[ci, di]))
            sites.append(ci)
            labels.append((cid, did))
    return _Columns(
        masks, costs, sites, labels, bs_mask, n_t, tables.tp_ids, k=instance.k, one_per_site=instance.one_device_per_site
    )


def _prune_dominated(cols: _Columns, multicover: bool = False) -> list[int]:
    """Indices of columns that survive dominance pruning.

    Under the one-device-per-site rule only same-site dominance is safe (a
    cross-site swap may collide with another install); without it any
    dominated column can be dropped — except under K-redundant demand, where
    a dominated duplicate can still supply an extra coverage unit, so no
    cross-column pruning is possible at all.
    """
    if multicover and not cols.one_per_site:
        return list(range(len(cols.masks)))
    keep = []
    by_site: dict[int, list[int]] = {}
    for j in range(len(cols.masks)):
        by_site.setdefault(cols.sites[j] if cols.one_per_site else 0, []).append(j)
    for js in by_site.values():
        for j in js:
            dominated = False
            for o in js:
                if o == j:
                    continue
                if (
                    cols.masks[j] | cols.masks[o]
                ) == cols.masks[o] and (
                    cols.costs[o] < cols.costs[j] or (cols.costs[o] == cols.costs[j] and o < j)
                ):
                    dominated = True
                    break
            if not dominated:
                keep.append(j)
    keep.sort()
    return keep


def check_solution(instance: PlanInstance, installs) -> dict:
    """Re-derive feasibility, cost, coverage, and witnesses from the tables alone."""
    tables = instance.tables
    site_idx = {s: i for i, s in enumerate(tables.site_ids)}
    spec_idx = {s: i for i, s in enumerate(tables.spec_ids)}
    cost = 0.0
    used_sites: dict[int, int] = {}
    counts = np.zeros(len(tables.tp_ids), dtype=int)
    witnesses: dict[str, list] = {tid: [] for tid in tables.tp_ids}
    for sid, did in installs:
        ci, di = site_idx[sid], spec_idx[did]
        used_sites[ci] = used_sites.get(ci, 0) + 1
        cost += float(instance.costs[ci, di])
        hits = tables.delta[:, ci, di]
        counts += hits
        for t in np.nonzero(hits)[0]:
            witnesses[tables.tp_ids[t]].append((sid, did))
    for tid, has_bs in zip(tables.tp_ids, tables.delta_bs):
        if has_bs:
            witnesses[tid].insert(0, "bs")
    totals = counts + tables.delta_bs.astype(int)
    covered = tuple(tid for tid, n in zip(tables.tp_ids, totals) if n >= 1)
    site_ok = all(v <= 1 for v in used_sites.values()) or not instance.one_device_per_site
    feasible = bool((totals >= instance.k).all()) if instance.kind == KIND_FCMC else cost <= instance.budget + 1e-9
    return {
        "cost": cost,
        "covered": covered,
        "coverage_counts": totals,
        "witnesses": {t: w for t, w in witnesses.items() if w},
        "feasible": feasible and site_ok,
        "site_ok": site_ok,
    }


# ---------------------------------------------------------------------------
# FCMC exact


def _fcmc_certificate(cols: _Columns) -> list[str]:
    """TPs whose demand cannot be met even installing everything."""
    k = cols.k
    bad = []
    for t in range(cols.n_tp):
        bit = 1 << t
        have = 1 if (cols.bs_mask & bit) else 0
        if cols.one_per_site:
            sites = {s for m, s in zip(cols.masks, cols.sites) if m & bit}
            have += len(sites)
        else:
            have += sum(1 for m in cols.masks if m & bit)
        if have < k:
            bad.append(cols.tp_ids[t])
    return bad


def _need_masks(cols: _Columns) -> list[int]:
    """need[i] = bitmask of TPs with residual demand > i."""
    k = cols.k
    need = []
    for i in range(k):
        m = 0
        for t in range(cols.n_tp):
            demand = k - (1 if cols.bs_mask & (1 << t) else 0)
            if demand > i:
                m |= 1 << t
        need.append(m)
    return need


def _apply_install(need: list[int], m: int) -> list[int]:
    out = []
    for i in range(len(need)):
        higher = need[i + 1] if i + 1 < len(need) else 0
        out.append((need[i] & ~m) | (higher & m))
    return out


def _total_demand(need: list[int]) -> int:
    return sum(m.bit_count() for m in need)


def solve_fcmc_exact(instance: PlanInstance, time_limit: float | None = None) -> PlanSolution:
    if instance.kind != KIND_FCMC:
        raise ValueError("instance is not an FCMC problem")
    cols = _build_columns(instance)
    cert = _fcmc_certificate(cols)
    if cert:
        raise Infeasible(cert)

    keep = _prune_dominated(cols, multicover=instance.k > 1)
    root_need = _need_masks(cols)[0]
    order = sorted(
        keep,
        key=lambda j: (-(cols.masks[j] & root_need).bit_count() / cols.costs[j], cols.labels[j]),
    )
    masks = [cols.masks[j] for j in order]
    costs = [cols.costs[j] for j in order]
    sites = [cols.sites[j] for j in order]
    labels = [cols.labels[j] for j in order]
    n = len(order)

    need0 = _need_masks(cols)
    state = _SearchState(time_limit)

    greedy = _greedy_fcmc(masks, costs, sites, labels, need0, cols.one_per_site)
    if greedy is not None:
        sel, cost = greedy
        state.best_cost = cost
        state.best_set = sel

    n_words = (cols.n_tp + 63) // 64
    mask_words = _pack_matrix(masks, n_words)
    cost_arr = np.array(costs)
    site_arr = np.array(sites)

    def frac_fill(avail: np.ndarray, u: np.ndarray, rem: int) -> float:
        """Cheapest fractional fill of `rem` demand units: the LP-style bound."""
        rate = cost_arr[avail] / u
        idx = np.argsort(rate, kind="stable")
        uu = u[idx]
        usum = np.cumsum(uu)
        split = int(np.searchsorted(usum, rem, side="left"))
        if split >= len(uu):
            return math.inf
        sorted_rate = rate[idx]
        total = float((sorted_rate[:split] * uu[:split]).sum())
        covered_units = usum[split - 1] if split else 0.0
        return total + float(sorted_rate[split]) * (rem - covered_units)

    def dfs(avail: np.ndarray, need: list[int], cost: float, chosen: list[int]):
        if state.expired():
            return
        rem = _total_demand(need)
        if rem == 0:
            if cost < state.best_cost:
                state.best_cost = cost
                state.best_set = list(chosen)
            return
        if not avail.size:
            return
        need_words = _pack_words(need[0], n_words)
        u = np.bitwise_count(mask_words[avail] & need_words).sum(axis=1).astype(np.float64)
        useful = u > 0.0
        avail, u = avail[useful], u[useful]
        if not avail.size:
            return
        # residual demand must stay reachable (checked per redundancy level)
        cover_levels = [0] * len(need)
        for m in (masks[j] for j in avail.tolist()):
            for lvl in range(len(need) - 1, 0, -1):
                cover_levels[lvl] |= cover_levels[lvl - 1] & m
            cover_levels[0] |= m
        for lvl, mask in enumerate(need):
            if mask & ~cover_levels[lvl]:
                return
        lb = frac_fill(avail, u, rem)
        if cost + lb >= state.best_cost:
            return
        pick = int(np.argmin(cost_arr[avail] / u))  # first minimum: deterministic
        jstar = int(avail[pick])
        if cols.one_per_site:
            sub = avail[site_arr[avail] != sites[jstar]]
        else:
            sub = avail[avail != jstar]
        chosen.append(jstar)
        dfs(sub, _apply_install(need, masks[jstar]), cost + costs[jstar], chosen)
        chosen.pop()
        dfs(avail[avail != jstar], need, cost, chosen)

    root_avail = np.arange(n)
    root_u = np.bitwise_count(mask_words & _pack_words(need0[0], n_words)).sum(axis=1).astype(np.float64)
    useful = root_u > 0.0
    state.root_bound = frac_fill(root_avail[useful], root_u[useful], _total_demand(need0)) if useful.any() else math.inf
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 1000))
    dfs(root_avail, need0, 0.0, [])
    if state.best_set is None:
        raise Infeasible(_fcmc_certificate(cols))
    installs = tuple(sorted(labels[j] for j in state.best_set))
    info = check_solution(instance, installs)
    optimal = not state.hit_limit
    gap = 0.0 if optimal else _relative_gap(state.best_cost, state.root_bound)
    return PlanSolution(installs, info["cost"], info["covered"], state.best_cost, optimal, gap)


def _greedy_fcmc(masks, costs, sites, labels, need0, one_per_site, node_cap: int = 20000):
    """Weighted greedy with backtracking.

    The first descent is the plain cost-effectiveness greedy; backtracking
    only kicks in when site exclusivity paints the descent into a corner,
    so a feasible completion is still found.
    """
    nodes = 0
    seen: set[frozenset] = set()

    def descend(need, used: set[int], chosen: list[int], spent: float):
        nonlocal nodes
        if _total_demand(need) == 0:
            return list(chosen), spent
        key = frozenset(chosen)
        if key in seen:
            return None
        seen.add(key)
        nodes += 1
        if nodes > node_cap:
            return None
        n0 = need[0]
        cands = []
        for j in range(len(masks)):
            if j in chosen or (one_per_site and sites[j] in used):
                continue
            u = (masks[j] & n0).bit_count()
            if u:
                cands.append((costs[j] / u, labels[j], j))
        cands.sort()
        for _, _, j in cands:
            if one_per_site:
                used.add(sites[j])
            chosen.append(j)
            got = descend(_apply_install(need, masks[j]), used, chosen, spent + costs[j])
            if got is not None:
                return got
            chosen.pop()
            if one_per_site:
                used.discard(sites[j])
        return None

    return descend(list(need0), set(), [], 0.0)


class _SearchState:
    def __init__(self, time_limit):
        self.best_cost = math.inf
        self.best_set: list[int] | None = None
        self.best_cov = -1
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.hit_limit = False
        self.root_bound = 0.0

    def expired(self) -> bool:
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.hit_limit = True
            return True
        return False


_WORD = 0xFFFFFFFFFFFFFFFF


def _pack_words(mask: int, n_words: int) -> np.ndarray:
    return np.array([(mask >> (64 * k)) & _WORD for k in range(n_words)], dtype=np.uint64)


def _pack_matrix(masks, n_words: int) -> np.ndarray:
    out = np.zeros((len(masks), n_words), dtype=np.uint64)
    for j, m in enumerate(masks):
        out[j] = _pack_words(m, n_words)
    return out


def _relative_gap(incumbent: float, bound: float) -> float:
    if incumbent == 0:
        return 0.0
    return abs(incumbent - bound) / max(abs(incumbent), 1e-12)


# ---------------------------------------------------------------------------
# MBCC exact


def solve_mbcc_exact(instance: PlanInstance, time_limit: float | None = None) -> PlanSolution:
    if instance.kind != KIND_MBCC:
        raise ValueError("instance is not an MBCC problem")
    cols = _build_columns(instance)
    keep = [j for j in _prune_dominated(cols) if cols.costs[j] <= instance.budget]
    coverable = cols.bs_mask
    for j in keep:
        coverable |= cols.masks[j]
    order = sorted(
        keep,
        key=lambda j: (-(cols.masks[j] & ~cols.bs_mask).bit_count() / cols.costs[j], cols.labels[j]),
    )
    masks = [cols.masks[j] for j in order]
    costs = [cols.costs[j] for j in order]
    sites = [cols.sites[j] for j in order]
    labels = [cols.labels[j] for j in order]
    n = len(order)
    n_words = (cols.n_tp + 63) // 64
    mask_words = _pack_matrix(masks, n_words)
    cost_arr = np.array(costs)
    site_arr = np.array(sites)

    state = _SearchState(time_limit)
    state.best_cov, state.best_cost, state.best_set = cols.bs_mask.bit_count(), 0.0, []

    seeds: list[int | None] = [None] + list(range(min(n, 40)))
    for seed in seeds:
        g_sel, g_cov, g_cost = _greedy_mbcc_core(
            masks, costs, sites, labels, cols.bs_mask, instance.budget, cols.one_per_site, seed_first=seed
        )
        if (g_cov, -g_cost) > (state.best_cov, -state.best_cost):
            state.best_cov, state.best_cost, state.best_set = g_cov, g_cost, g_sel

    def dfs(avail: np.ndarray, covered: int, cost: float, chosen: list[int]):
        if state.expired():
            return
        cov = covered.bit_count()
        if (cov, -cost) > (state.best_cov, -state.best_cost):
            state.best_cov, state.best_cost, state.best_set = cov, cost, list(chosen)
        if not avail.size:
            return
        left = instance.budget - cost
        u = np.bitwise_count(mask_words[avail] & ~_pack_words(covered, n_words)).sum(axis=1).astype(np.float64)
        ok = (u > 0.0) & (cost_arr[avail] <= left + 1e-9)
        avail, u = avail[ok], u[ok]
        if not avail.size:
            return
        c = cost_arr[avail]
        dens = u / c
        idx = np.argsort(-dens, kind="stable")
        cc = c[idx]
        csum = np.cumsum(cc)
        split = int(np.searchsorted(csum, left, side="right"))
        uu = u[idx]
        gain = float(uu[:split].sum())
        if split < len(uu):
            gain += float(uu[split]) * ((left - (csum[split - 1] if split else 0.0)) / float(cc[split]))
        ub = cov + int(math.floor(gain + 1e-9))
        if (ub, -cost) <= (state.best_cov, -state.best_cost):
            return
        jstar = int(avail[idx[0]])
        if cols.one_per_site:
            sub = avail[site_arr[avail] != sites[jstar]]
        else:
            sub = avail[avail != jstar]
        chosen.append(jstar)
        dfs(sub, covered | masks[jstar], cost + costs[jstar], chosen)
        chosen.pop()
        dfs(avail[avail != jstar], covered, cost, chosen)

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 1000))
    dfs(np.arange(n), cols.bs_mask, 0.0, [])
    installs = tuple(sorted(labels[j] for j in state.best_set))
    info = check_solution(instance, installs)
    optimal = not state.hit_limit
    gap = 0.0 if optimal else _relative_gap(float(state.best_cov), float(coverable.bit_count()))
    return PlanSolution(installs, info["cost"], info["covered"], float(state.best_cov), optimal, gap)


def _greedy_mbcc_core(masks, costs, sites, labels, bs_mask, budget, one_per_site, seed_first: int | None = None):
    covered = bs_mask
    used: set[int] = set()
    chosen: list[int] = []
    spent = 0.0
    if seed_first is not None:
        j = seed_first
        if costs[j] <= budget:
            chosen.append(j)
            used.add(sites[j])
            spent += costs[j]
            covered |= masks[j]
    while True:
        best, best_rate = None, None
        for j in range(len(masks)):
            if j in chosen or (one_per_site and sites[j] in used):
                continue
            if spent + costs[j] > budget + 1e-9:
                continue
            u = (masks[j] & ~covered).bit_count()
            if not u:
                continue
            rate = u / costs[j]
            if best_rate is None or rate > best_rate or (rate == best_rate and labels[j] < labels[best]):
                best, best_rate = j, rate
        if best is None:
            break
        chosen.append(best)
        used.add(sites[best])
        spent += costs[best]
        covered |= masks[best]
    return chosen, covered.bit_count(), spent


# ---------------------------------------------------------------------------
# greedy front-end


def solve_greedy(instance: PlanInstance) -> PlanSolution:
    cols = _build_columns(instance)
    if instance.kind == KIND_FCMC:
        cert = _fcmc_certificate(cols)
        if cert:
            raise Infeasible(cert)
        got = _greedy_fcmc(cols.masks, cols.costs, cols.sites, cols.labels, _need_masks(cols), cols.one_per_site)
        if got is None:
            raise Infeasible(_fcmc_certificate(cols))
        chosen, cost = got
        installs = tuple(sorted(cols.labels[j] for j in chosen))
        info = check_solution(instance, installs)
        return PlanSolution(installs, info["cost"], info["covered"], cost, False, math.inf)

    # MBCC: cost-effectiveness greedy, plus best-single and single-seed restarts,
    # which keeps the worst case well above the plain-greedy pathologies.
    budget = instance.budget
    runs = [_greedy_mbcc_core(cols.masks, cols.costs, cols.sites, cols.labels, cols.bs_mask, budget, cols.one_per_site)]
    if len(cols.masks) <= 64:
        for j in range(len(cols.masks)):
            if cols.costs[j] <= budget:
                runs.append(
                    _greedy_mbcc_core(
                        cols.masks, cols.costs, cols.sites, cols.labels, cols.bs_mask, budget, cols.one_per_site, seed_first=j
                    )
                )
    best = max(runs, key=lambda r: (r[1], -r[2]))
    installs = tuple(sorted(cols.labels[j] for j in best[0]))
    info = check_solution(instance, installs)
    return PlanSolution(installs, info["cost"], info["covered"], float(best[1]), False, math.inf)


# ---------------------------------------------------------------------------
# exhaustive oracle


def brute_force(instance: PlanInstance, var_limit: int = 22) -> PlanSolution:
    cols = _build_columns(instance)
    n = len(cols.masks)
    if n > var_limit:
        raise ValueError(f"instance too large for brute force ({n} > {var_limit} variables)")
    if cols.n_tp > 63:
        raise ValueError("brute force supports at most 63 test points")

    idx = np.arange(1 << n, dtype=np.uint64)
    costs = np.zeros(1)
    sat = [np.zeros(1, dtype=np.uint64) for _ in range(max(instance.k, 1))]
    for j in range(n):
        m = np.uint64(cols.masks[j])
        new_sat = []
        for lvl in range(len(sat)):
            prev = sat[lvl - 1] if lvl else None
            grown = sat[lvl] | (m if lvl == 0 else (prev & m))
            new_sat.append(np.concatenate([sat[lvl], grown]))
        sat = new_sat
        costs = np.concatenate([costs, costs + cols.costs[j]])

    ok = np.ones(1 << n, dtype=bool)
    if cols.one_per_site:
        by_site: dict[int, int] = {}
        for j, s in enumerate(cols.sites):
            by_site[s] = by_site.get(s, 0) | (1 << j)
        for bits in by_site.values():
            if bits.bit_count() >= 2:
                ok &= np.bitwise_count(idx & np.uint64(bits)) <= 1

    if instance.kind == KIND_FCMC:
        feasible = ok.copy()
        need = _need_masks(cols)
        for lvl, mask in enumerate(need):
            feasible &= (sat[lvl] & np.uint64(mask)) == np.uint64(mask)
        if not feasible.any():
            raise Infeasible(_fcmc_certificate(cols))
        cand = np.nonzero(feasible)[0]
        best = cand[np.argmin(costs[cand])]
        objective = float(costs[best])
    else:
        feasible = ok & (costs <= instance.budget + 1e-9)
        bs = np.uint64(cols.bs_mask)
        cover = np.bitwise_count(sat[0] | bs).astype(np.int64)
        cover = np.where(feasible, cover, -1)
        best_cov = cover.max()
        cand = np.nonzero(cover == best_cov)[0]
        best = cand[np.argmin(costs[cand])]
        objective = float(best_cov)

    sel = [j for j in range(n) if int(best) >> j & 1]
    installs = tuple(sorted(cols.labels[j] for j in sel))
    info = check_solution(instance, installs)
    return PlanSolution(installs, info["cost"], info["covered"], objective, True, 0.0)


# ---------------------------------------------------------------------------
# solution document


def solution_document(solution: PlanSolution, instance: PlanInstance, catalog: Catalog, scenario=None) -> dict:
    """Topology document: installs with configs/costs, witnesses, objective."""
    info = check_solution(instance, solution.installs)
    site_pos = {}
    if scenario is not None:
        site_pos = {s.id: s for s in scenario.sites}
    installs = []
    for sid, did in solution.installs:
        spec = catalog.spec_by_id(did)
        entry = {
            "site": sid,
            "spec": did,
            "technology": spec.technology,
            "cost": spec.cost,
            "config": _config_dict(spec.config),
        }
        if spec.orientation is not None:
            entry["orientation_rad"] = spec.orientation
        if sid in site_pos:
            s = site_pos[sid]
            entry["pos"] = [s.position.x, s.position.y, s.position.z]
            if s.normal is not None:
                entry["normal"] = list(s.normal)
        installs.append(entry)
    doc = {
        "model": instance.kind,
        "gamma_db": instance.tables.gamma_threshold,
        "objective": solution.objective,
        "total_cost": solution.total_cost,
        "optimal": solution.optimal,
        "bound_gap": solution.bound_gap,
        "installs": installs,
        "covered": list(solution.covered),
        "tp_total": len(instance.tables.tp_ids),
        "witnesses": {
            t: [w if w == "bs" else list(w) for w in ws] for t, ws in sorted(info["witnesses"].items())
        },
    }
    if instance.kind == KIND_FCMC:
        doc["k"] = instance.k
    else:
        doc["budget"] = instance.budget
    return doc


def _config_dict(cfg) -> dict:
    from .channel import NcrConfig, RisConfig, StarConfig, TriNcrConfig

    if isinstance(cfg, RisConfig):
        return {"m_cells": cfg.m_cells, "beta_r": cfg.beta_r}
    if isinstance(cfg, StarConfig):
        return {"m_cells": cfg.m_cells, "beta_r": cfg.beta_r, "beta_t": cfg.beta_t}
    if isinstance(cfg, NcrConfig):
        return {"n_elements": cfg.n_elements, "gain_db": cfg.gain_db, "serve_azimuth": cfg.serve_azimuth}
    if isinstance(cfg, TriNcrConfig):
        return {"n_elements": cfg.n_elements, "gain_db": cfg.gain_db, "serve_azimuths": list(cfg.serve_azimuths)}
    raise ValueError("unknown device config")
