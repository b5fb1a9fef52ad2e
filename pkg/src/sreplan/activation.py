"""Boolean link-activation tables: the optimizer's only view of the physics.

SNR values are computed once and kept next to the booleans so a threshold
sweep is a re-comparison, not a re-simulation.  The builder is embarrassingly
parallel over (tp, site, spec) but runs vectorized over test points, which is
plenty fast at planning scale.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, replace

import numpy as np

from . import channel as ch
from .catalog import Catalog, TECH_NCR, TECH_RIS, TECH_STAR, TECH_TRI_NCR
from .channel import LinkBudgetParams, DEFAULT_PARAMS
from .scenario import MOUNT_ROOF, MOUNT_WALL, Scenario, los_blocked, los_blocked_batch

EXPORT_MAGIC = "sre-activation-v1"


@dataclass(frozen=True)
class ActivationTables:
    gamma_threshold: float  # dB
    tp_ids: tuple[str, ...]
    site_ids: tuple[str, ...]
    spec_ids: tuple[str, ...]
    snr_bs: np.ndarray  # (T,) dB, -inf where unavailable
    snr: np.ndarray  # (T, C, D) dB
    delta_bs: np.ndarray  # (T,) bool
    delta: np.ndarray  # (T, C, D) bool

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.snr.shape

    def rethreshold(self, gamma_db: float) -> "ActivationTables":
        """Same physics, new threshold; ties (snr == gamma) count as covered."""
        return replace(
            self,
            gamma_threshold=gamma_db,
            delta_bs=_threshold(self.snr_bs, gamma_db),
            delta=_threshold(self.snr, gamma_db),
        )

    def restrict(self, spec_ids) -> "ActivationTables":
        """Restriction to a sub-catalog (e.g. reduced set from full set)."""
        wanted = list(spec_ids)
        index = {s: i for i, s in enumerate(self.spec_ids)}
        missing = [s for s in wanted if s not in index]
        if missing:
            raise KeyError(f"specs not in tables: {missing}")
        cols = [index[s] for s in wanted]
        return replace(
            self,
            spec_ids=tuple(wanted),
            snr=self.snr[:, :, cols],
            delta=self.delta[:, :, cols],
        )


def _threshold(snr: np.ndarray, gamma_db: float) -> np.ndarray:
    return (snr >= gamma_db) & np.isfinite(snr)


def compute_activation(
    scenario: Scenario,
    catalog: Catalog,
    params: LinkBudgetParams = DEFAULT_PARAMS,
    gamma_db: float = 10.0,
) -> ActivationTables:
    """Evaluate long-term SNR for the BS link and every compatible (site, spec, tp) triple."""
    bs = scenario.bs
    p_bs = bs.position.as_array()
    tp_pos = np.array([t.position.as_array() for t in scenario.tps])
    n_t, n_c, n_d = len(scenario.tps), len(scenario.sites), len(catalog.specs)

    snr_bs = _direct_snr_vector(scenario, params, tp_pos)
    snr = np.full((n_t, n_c, n_d), -np.inf)

    for ci, site in enumerate(scenario.sites):
        p_site = site.position.as_array()
        v1 = p_bs - p_site
        d1 = float(np.linalg.norm(v1))
        hop1_blocked = los_blocked(bs.position, site.position, scenario.buildings)
        hop2_blocked = los_blocked_batch(site.position, tp_pos, scenario.buildings)
        v2 = tp_pos - p_site
        d2 = np.linalg.norm(v2, axis=1)
        ok_geom = ~hop2_blocked & (d2 > 0.0)
        if hop1_blocked or d1 == 0.0 or not ok_geom.any():
            continue
        az_bs = math.atan2(v1[1], v1[0])
        az_tp = np.arctan2(v2[:, 1], v2[:, 0])
        p1 = ch.blockage_prob(d1, params, max(bs.position.z, site.position.z), min(bs.position.z, site.position.z))
        h_hi = np.maximum(site.position.z, tp_pos[:, 2])
        h_lo = np.minimum(site.position.z, tp_pos[:, 2])
        # heights are uniform across TPs in practice; handle mixed heights row-wise
        p2 = np.array(
            [ch.blockage_prob(float(d), params, float(hh), float(hl)) for d, hh, hl in zip(d2, h_hi, h_lo)]
        ) if len(set(zip(h_hi, h_lo))) > 1 else ch.blockage_prob(d2, params, float(h_hi[0]), float(h_lo[0]))
        p_link = 1.0 - (1.0 - p1) * (1.0 - np.asarray(p2))

        for di, spec in enumerate(catalog.specs):
            if spec.mount_requirement != site.mount:
                continue
            gamma0 = _spec_gamma0_vector(spec, site, bs, v1, d1, az_bs, v2, d2, az_tp, params)
            gamma0 = np.where(ok_geom, gamma0, -np.inf)
            snr[:, ci, di] = _longterm_vector(gamma0, p_link, params.blockage_attenuation)

    return ActivationTables(
        gamma_threshold=gamma_db,
        tp_ids=tuple(t.id for t in scenario.tps),
        site_ids=tuple(s.id for s in scenario.sites),
        spec_ids=tuple(catalog.spec_ids),
        snr_bs=snr_bs,
        snr=snr,
        delta_bs=_threshold(snr_bs, gamma_db),
        delta=_threshold(snr, gamma_db),
    )


def _direct_snr_vector(scenario: Scenario, params: LinkBudgetParams, tp_pos: np.ndarray) -> np.ndarray:
    bs = scenario.bs
    p_bs = bs.position.as_array()
    blocked = los_blocked_batch(bs.position, tp_pos, scenario.buildings)
    d = np.linalg.norm(tp_pos - p_bs, axis=1)
    gamma0 = np.where(~blocked & (d > 0.0), ch.direct_gamma0_db(np.maximum(d, 1e-9), bs.n_elements, params), -np.inf)
    h_hi = np.maximum(bs.position.z, tp_pos[:, 2])
    h_lo = np.minimum(bs.position.z, tp_pos[:, 2])
    p = ch.blockage_prob(d, params, float(h_hi[0]), float(h_lo[0])) if len(set(zip(h_hi, h_lo))) <= 1 else np.array(
        [ch.blockage_prob(float(dd), params, float(hh), float(hl)) for dd, hh, hl in zip(d, h_hi, h_lo)]
    )
    return _longterm_vector(gamma0, p, params.blockage_attenuation)


def _longterm_vector(gamma0_db: np.ndarray, p_block, attenuation_db: float) -> np.ndarray:
    lin = (1.0 - p_block) * ch.db_to_lin(gamma0_db) + p_block * ch.db_to_lin(gamma0_db - attenuation_db)
    return ch.lin_to_db(lin)


def _spec_gamma0_vector(spec, site, bs, v1, d1, az_bs, v2, d2, az_tp, params) -> np.ndarray:
    """Unblocked SNR of one (site, spec) column against all TPs; -inf outside the FoV."""
    cfg = spec.config
    safe_d2 = np.maximum(d2, 1e-9)
    if spec.technology == TECH_RIS:
        n = np.array([site.normal[0], site.normal[1], 0.0])
        cos_in = float(v1 @ n) / d1
        cos_out = (v2 @ n) / safe_d2
        in_fov = (float(v1[:2] @ n[:2]) > 0.0) & ((v2[:, :2] @ n[:2]) > 0.0)
        gamma0 = ch.metasurface_gamma0_db(d1, safe_d2, cos_in, cos_out, cfg.m_cells, cfg.beta_r, bs.n_elements, params)
        return np.where(in_fov, gamma0, -np.inf)
    if spec.technology == TECH_STAR:
        n = np.array([math.cos(az_bs), math.sin(az_bs), 0.0])
        cos_in = float(v1 @ n) / d1
        side = v2[:, :2] @ n[:2]
        beta = np.where(side > 0.0, cfg.beta_r, cfg.beta_t)
        cos_out = np.abs(v2 @ n) / safe_d2
        gamma0 = ch.metasurface_gamma0_db(d1, safe_d2, cos_in, cos_out, cfg.m_cells, beta, bs.n_elements, params)
        return np.where(side != 0.0, gamma0, -np.inf)
    if spec.technology == TECH_NCR:
        sep = abs(float(ch.wrap_angle(az_bs - cfg.serve_azimuth)))
        if sep < ch.PANEL_SEPARATION - ch.SERVE_HALF_CONE - 1e-9:
            return np.full(len(d2), -np.inf)
        taper1 = ch._panel_taper_db(max(0.0, ch.PANEL_SEPARATION - sep))
        theta_off = np.abs(ch.wrap_angle(az_tp - cfg.serve_azimuth))
        gamma0 = ch.ncr_gamma0_db(
            d1, safe_d2, cfg.gain_db, cfg.n_elements, cfg.n_elements, taper1, ch._panel_taper_db(theta_off), bs.n_elements, params
        )
        return np.where(theta_off <= ch.SERVE_HALF_CONE + 1e-9, gamma0, -np.inf)
    if spec.technology == TECH_TRI_NCR:
        off_bs = abs(float(ch.wrap_angle(az_bs - cfg.donor_azimuth)))
        if off_bs > ch.SERVE_HALF_CONE + 1e-9:
            return np.full(len(d2), -np.inf)
        taper1 = ch._panel_taper_db(off_bs)
        offs = np.abs(np.stack([ch.wrap_angle(az_tp - a) for a in cfg.serve_azimuths]))
        theta_off = offs.min(axis=0)
        gamma0 = ch.ncr_gamma0_db(
            d1,
            safe_d2,
            cfg.gain_db,
            cfg.n_elements,
            cfg.n_elements // 2,
            taper1,
            ch._panel_taper_db(theta_off),
            bs.n_elements,
            params,
        )
        return np.where(theta_off <= ch.SERVE_HALF_CONE + 1e-9, gamma0, -np.inf)
    raise ValueError(f"unknown technology '{spec.technology}'")


def coverage_stats(tables: ActivationTables) -> dict:
    """Summary counts plus the FCMC infeasibility certificate (uncoverable TPs)."""
    any_device = tables.delta.any(axis=(1, 2))
    coverable = tables.delta_bs | any_device
    uncoverable = [tid for tid, ok in zip(tables.tp_ids, coverable) if not ok]
    return {
        "bs_covered": int(tables.delta_bs.sum()),
        "coverable": int(coverable.sum()),
        "uncoverable_tps": uncoverable,
        "fill_ratio": float(tables.delta.mean()) if tables.delta.size else 0.0,
    }


# ---------------------------------------------------------------------------
# export for external solvers


def export_tables(tables: ActivationTables, path: str, fmt: str = "npz") -> None:
    if fmt == "npz":
        np.savez_compressed(
            path,
            magic=EXPORT_MAGIC,
            dim_order="t,c,d",
            gamma_threshold=tables.gamma_threshold,
            tp_ids=np.array(tables.tp_ids),
            site_ids=np.array(tables.site_ids),
            spec_ids=np.array(tables.spec_ids),
            snr_bs=tables.snr_bs,
            snr=tables.snr,
            delta_bs=tables.delta_bs,
            delta=tables.delta,
        )
    elif fmt == "csv":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(tables_to_csv(tables))
    else:
        raise ValueError("format must be 'npz' or 'csv'")


def tables_to_csv(tables: ActivationTables) -> str:
    out = io.StringIO()
    out.write(f"# {EXPORT_MAGIC} dims=t,c,d gamma_db={tables.gamma_threshold:.12g}\n")
    out.write("tp,site,spec,snr_db,active\n")
    for ti, tid in enumerate(tables.tp_ids):
        out.write(f"{tid},-,-,{tables.snr_bs[ti]:.12g},{int(tables.delta_bs[ti])}\n")
    for ti, tid in enumerate(tables.tp_ids):
        for ci, cid in enumerate(tables.site_ids):
            for di, did in enumerate(tables.spec_ids):
                out.write(f"{tid},{cid},{did},{tables.snr[ti, ci, di]:.12g},{int(tables.delta[ti, ci, di])}\n")
    return out.getvalue()


def load_tables(path: str) -> ActivationTables:
    with np.load(path, allow_pickle=False) as data:
        if str(data["magic"]) != EXPORT_MAGIC:
            raise ValueError("not an activation-table export")
        return ActivationTables(
            gamma_threshold=float(data["gamma_threshold"]),
            tp_ids=tuple(data["tp_ids"]),
            site_ids=tuple(data["site_ids"]),
            spec_ids=tuple(data["spec_ids"]),
            snr_bs=data["snr_bs"],
            snr=data["snr"],
            delta_bs=data["delta_bs"],
            delta=data["delta"],
        )
