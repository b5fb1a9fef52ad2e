"""Link-budget physics for the supported relay technologies.

All SNR composition happens in linear power; dB is presentation only.  The
closed forms assume optimal beamforming everywhere, so arrays contribute
their element count as gain and metasurfaces contribute the coherent M^2
term plus the meta-atom radiation pattern per hop.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import BaseStation, CandidateSite, Point3, Scenario, TestPoint, los_blocked

SPEED_OF_LIGHT = 299_792_458.0

PATTERN_3GPP = "3gpp"
PATTERN_META_ATOM = "meta-atom"

# 3GPP TR 38.901 element pattern constants
_GAIN_MAX_DBI = 8.0
_THETA_3DB = math.radians(65.0)
_ATT_MAX_DB = 30.0

SERVE_HALF_CONE = math.pi / 3.0  # hard +/-60 deg serving cone (azimuth)
PANEL_SEPARATION = 2.0 * math.pi / 3.0  # minimum serve-to-donor panel angle


def db_to_lin(db):
    return np.power(10.0, np.asarray(db, dtype=float) / 10.0)


def lin_to_db(lin):
    lin = np.asarray(lin, dtype=float)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(lin)


def wrap_angle(a):
    """Wrap to (-pi, pi]."""
    return np.mod(np.asarray(a, dtype=float) + np.pi, 2.0 * np.pi) - np.pi


@dataclass(frozen=True)
class LinkBudgetParams:
    """Scalar link-budget inputs (defaults: 28 GHz urban deployment)."""

    f0: float = 28e9  # carrier, Hz
    tx_power: float = 35.0  # dBm
    noise_power: float = -82.0  # dBm
    ncr_noise_figure: float = 8.0  # dB
    blocker_density: float = 4e-3  # blockers per m^2
    blocker_velocity: float = 15.0  # m/s
    blocker_height: float = 1.7  # m
    blockage_rate_inv: float = 5.0  # mean blockage duration, s
    blockage_attenuation: float = 20.0  # dB

    def __post_init__(self):
        if self.f0 <= 0:
            raise ValueError("carrier frequency must be positive")
        if self.blocker_density < 0:
            raise ValueError("blocker density must be non-negative")
        if self.blockage_rate_inv <= 0:
            raise ValueError("mean blockage duration must be positive")
        if self.blockage_attenuation < 0:
            raise ValueError("blockage attenuation must be non-negative")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.f0

    def to_dict(self) -> dict:
        return {
            "f0": self.f0,
            "tx_power": self.tx_power,
            "noise_power": self.noise_power,
            "ncr_noise_figure": self.ncr_noise_figure,
            "blocker_density": self.blocker_density,
            "blocker_velocity": self.blocker_velocity,
            "blocker_height": self.blocker_height,
            "blockage_rate_inv": self.blockage_rate_inv,
            "blockage_attenuation": self.blockage_attenuation,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "LinkBudgetParams":
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown link-budget parameters: {sorted(unknown)}")
        return cls(**raw)


DEFAULT_PARAMS = LinkBudgetParams()


@dataclass(frozen=True)
class ArrayGeometry:
    rows: int
    cols: int
    spacing: float = 0.5  # element pitch, fraction of wavelength
    element_pattern: str = PATTERN_3GPP

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("array needs at least one element per axis")
        if self.spacing <= 0:
            raise ValueError("element spacing must be positive")

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols


# --- device configurations -------------------------------------------------


@dataclass(frozen=True)
class RisConfig:
    m_cells: int
    beta_r: float = 1.0

    def __post_init__(self):
        if self.m_cells < 1:
            raise ValueError("RIS needs at least one cell")
        if not 0.0 <= self.beta_r <= 1.0:
            raise ValueError("reflection coefficient must be in [0, 1]")


@dataclass(frozen=True)
class StarConfig:
    m_cells: int
    beta_r: float = 0.5
    beta_t: float = 0.5

    def __post_init__(self):
        if self.m_cells < 1:
            raise ValueError("STAR needs at least one cell")
        if min(self.beta_r, self.beta_t) < 0 or self.beta_r + self.beta_t > 1.0 + 1e-12:
            raise ValueError("reflection + transmission coefficients must not exceed 1")


@dataclass(frozen=True)
class NcrConfig:
    n_elements: int
    gain_db: float
    serve_azimuth: float  # rad, absolute

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("NCR panel needs at least one element")


@dataclass(frozen=True)
class TriNcrConfig:
    n_elements: int  # donor panel size; each serving panel has n_elements // 2
    gain_db: float
    serve_azimuths: tuple[float, float]

    def __post_init__(self):
        if self.n_elements < 2:
            raise ValueError("tri-sector NCR needs at least two elements")
        sep = abs(float(wrap_angle(self.serve_azimuths[0] - self.serve_azimuths[1])))
        if abs(sep - PANEL_SEPARATION) > 1e-6:
            raise ValueError("serving panels must be 120 degrees apart")

    @property
    def donor_azimuth(self) -> float:
        u = np.array([np.cos(self.serve_azimuths), np.sin(self.serve_azimuths)]).sum(axis=1)
        return float(np.arctan2(-u[1], -u[0]))


def tri_ncr_facing(donor_azimuth: float, n_elements: int, gain_db: float) -> TriNcrConfig:
    """Tri-sector config whose donor panel points at `donor_azimuth`."""
    a = float(wrap_angle(donor_azimuth + PANEL_SEPARATION))
    b = float(wrap_angle(donor_azimuth - PANEL_SEPARATION))
    return TriNcrConfig(n_elements, gain_db, (a, b))


@dataclass(frozen=True)
class LinkSnr:
    gamma0_db: float
    gamma_blocked_db: float
    p_block: float
    gamma_bar_db: float

    @property
    def available(self) -> bool:
        return math.isfinite(self.gamma_bar_db)

    @classmethod
    def unavailable(cls) -> "LinkSnr":
        return cls(-math.inf, -math.inf, 1.0, -math.inf)


# --- elementary operations ---------------------------------------------------


def wave_vector(theta: float, phi: float, lam: float) -> np.ndarray:
    """Propagation vector (rad/m) for azimuth theta, elevation phi."""
    if lam <= 0:
        raise ValueError("wavelength must be positive")
    return (2.0 * np.pi / lam) * np.array(
        [np.cos(phi) * np.cos(theta), np.cos(phi) * np.sin(theta), np.sin(phi)]
    )


def array_response(geom: ArrayGeometry, theta: float, phi: float, lam: float) -> np.ndarray:
    """Uniform planar array response; elements live in the local y-z plane."""
    k = wave_vector(theta, phi, lam)
    d = geom.spacing * lam
    ys = np.arange(geom.cols) * d
    zs = np.arange(geom.rows) * d
    yy, zz = np.meshgrid(ys, zs)
    positions = np.column_stack([np.zeros(geom.n_elements), yy.ravel(), zz.ravel()])
    return np.exp(1j * positions @ k)


def element_gain(pattern: str, theta_off) -> float:
    """Element radiation pattern gain (dB) at `theta_off` rad off boresight."""
    theta_off = np.asarray(theta_off, dtype=float)
    if pattern == PATTERN_3GPP:
        att = np.minimum(12.0 * (theta_off / _THETA_3DB) ** 2, _ATT_MAX_DB)
        out = _GAIN_MAX_DBI - att
    elif pattern == PATTERN_META_ATOM:
        c = np.cos(theta_off)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(
                (np.abs(theta_off) < np.pi / 2) & (c > 0.0),
                10.0 * np.log10(np.pi / 4.0 * np.maximum(c, 0.0)),
                -np.inf,
            )
    else:
        raise ValueError(f"unknown element pattern '{pattern}'")
    return float(out) if out.ndim == 0 else out


def fspl(d, lam: float):
    """Free-space path loss, dB."""
    d = np.asarray(d, dtype=float)
    out = 20.0 * np.log10(4.0 * np.pi * d / lam)
    return float(out) if out.ndim == 0 else out


def blockage_prob(link_len, params: LinkBudgetParams, h_tx: float, h_rx: float):
    """Probability that a moving blocker currently interrupts the link."""
    if h_tx <= h_rx:
        ratio = 1.0 if params.blocker_height > h_rx else 0.0
    else:
        ratio = min(max((params.blocker_height - h_rx) / (h_tx - h_rx), 0.0), 1.0)
    alpha = (2.0 / np.pi) * params.blocker_density * params.blocker_velocity * np.asarray(link_len, dtype=float) * ratio
    mu = 1.0 / params.blockage_rate_inv
    out = alpha / (alpha + mu)
    return float(out) if out.ndim == 0 else out


def longterm_snr(gamma0_db, p_block, attenuation_db: float) -> LinkSnr:
    """Blockage-weighted average of blocked/unblocked SNR, done in linear power."""
    gamma_blocked_db = gamma0_db - attenuation_db
    bar_lin = p_block * db_to_lin(gamma_blocked_db) + (1.0 - p_block) * db_to_lin(gamma0_db)
    return LinkSnr(float(gamma0_db), float(gamma_blocked_db), float(p_block), float(lin_to_db(bar_lin)))


# --- budget helpers (scalar or ndarray) --------------------------------------


def _meta_gain_db(cos_angle):
    """Meta-atom pattern vs the surface normal; gain -inf outside the hemisphere."""
    cos_angle = np.asarray(cos_angle, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(cos_angle > 0.0, 10.0 * np.log10(np.pi / 4.0 * np.maximum(cos_angle, 1e-300)), -np.inf)


def _panel_taper_db(theta_off):
    """3GPP element attenuation normalized to 0 dB at boresight."""
    theta_off = np.asarray(theta_off, dtype=float)
    return -np.minimum(12.0 * (theta_off / _THETA_3DB) ** 2, _ATT_MAX_DB)


def direct_gamma0_db(d, n_bs: int, params: LinkBudgetParams):
    return params.tx_power + 10.0 * np.log10(n_bs) - fspl(d, params.wavelength) - params.noise_power


def metasurface_gamma0_db(d1, d2, cos_in, cos_out, m_cells: int, beta, n_bs: int, params: LinkBudgetParams):
    lam = params.wavelength
    with np.errstate(divide="ignore"):
        beta_db = 10.0 * np.log10(np.asarray(beta, dtype=float))
    return (
        params.tx_power
        + 10.0 * np.log10(n_bs)
        + 20.0 * np.log10(m_cells)
        + _meta_gain_db(cos_in)
        + _meta_gain_db(cos_out)
        + beta_db
        - fspl(d1, lam)
        - fspl(d2, lam)
        - params.noise_power
    )


def ncr_gamma0_db(d1, d2, gain_db, n_rx: int, n_tx: int, taper1_db, taper2_db, n_bs: int, params: LinkBudgetParams):
    """Amplify-and-forward budget; the forwarded repeater noise is kept."""
    lam = params.wavelength
    rho1_dbm = params.tx_power + 10.0 * np.log10(n_bs) + 10.0 * np.log10(n_rx) + taper1_db - fspl(d1, lam)
    h2_db = 10.0 * np.log10(n_tx) + taper2_db - fspl(d2, lam)
    sig_dbm = rho1_dbm + gain_db + h2_db
    fwd_noise_dbm = (params.noise_power + params.ncr_noise_figure) + gain_db + h2_db
    total_noise_dbm = lin_to_db(db_to_lin(fwd_noise_dbm) + db_to_lin(params.noise_power))
    return sig_dbm - total_noise_dbm


def compose_hops(gamma0_db: float, hops, params: LinkBudgetParams) -> LinkSnr:
    """Long-term SNR with independent dynamic blockage on each (length, h_a, h_b) hop."""
    p_clear = 1.0
    for length, h_a, h_b in hops:
        p_clear *= 1.0 - blockage_prob(length, params, max(h_a, h_b), min(h_a, h_b))
    return longterm_snr(gamma0_db, 1.0 - p_clear, params.blockage_attenuation)


# --- per-technology links -----------------------------------------------------


def _pos(obj) -> Point3:
    return obj.position if hasattr(obj, "position") else obj


def snr_direct(bs: BaseStation, tp, scenario: Scenario, params: LinkBudgetParams = DEFAULT_PARAMS) -> LinkSnr:
    p_bs, p_tp = bs.position, _pos(tp)
    if los_blocked(p_bs, p_tp, scenario.buildings):
        return LinkSnr.unavailable()
    d = float(np.linalg.norm(p_bs.as_array() - p_tp.as_array()))
    gamma0 = direct_gamma0_db(d, bs.n_elements, params)
    return compose_hops(gamma0, [(d, p_bs.z, p_tp.z)], params)


def snr_metasurface(
    bs: BaseStation,
    site: CandidateSite,
    cfg,
    tp,
    scenario: Scenario,
    params: LinkBudgetParams = DEFAULT_PARAMS,
) -> LinkSnr:
    p_bs, p_site, p_tp = bs.position, site.position, _pos(tp)
    v1 = p_bs.as_array() - p_site.as_array()
    v2 = p_tp.as_array() - p_site.as_array()
    d1, d2 = float(np.linalg.norm(v1)), float(np.linalg.norm(v2))
    if d1 == 0.0 or d2 == 0.0:
        return LinkSnr.unavailable()

    if isinstance(cfg, RisConfig):
        if site.mount != "wall":
            raise ValueError("RIS installs on wall sites only")
        n = np.array([site.normal[0], site.normal[1], 0.0])
        if v1[:2] @ n[:2] <= 0.0 or v2[:2] @ n[:2] <= 0.0:
            return LinkSnr.unavailable()  # half-space field of view
        beta = cfg.beta_r
        cos_in = float(v1 @ n) / d1
        cos_out = float(v2 @ n) / d2
    elif isinstance(cfg, StarConfig):
        if site.mount != "roof":
            raise ValueError("STAR installs on roof sites only")
        az_bs = math.atan2(v1[1], v1[0])
        n = np.array([math.cos(az_bs), math.sin(az_bs), 0.0])  # surface faces the BS
        side = float(v2[:2] @ n[:2])
        if side == 0.0:
            return LinkSnr.unavailable()
        beta = cfg.beta_r if side > 0.0 else cfg.beta_t
        cos_in = float(v1 @ n) / d1
        cos_out = abs(float(v2 @ n)) / d2
    else:
        raise ValueError("metasurface config must be RisConfig or StarConfig")

    if los_blocked(p_bs, p_site, scenario.buildings) or los_blocked(p_site, p_tp, scenario.buildings):
        return LinkSnr.unavailable()
    gamma0 = metasurface_gamma0_db(d1, d2, cos_in, cos_out, cfg.m_cells, beta, bs.n_elements, params)
    if not math.isfinite(gamma0):
        return LinkSnr.unavailable()
    return compose_hops(gamma0, [(d1, p_bs.z, p_site.z), (d2, p_site.z, p_tp.z)], params)


def snr_ncr(
    bs: BaseStation,
    site: CandidateSite,
    cfg,
    tp,
    scenario: Scenario,
    params: LinkBudgetParams = DEFAULT_PARAMS,
) -> LinkSnr:
    if site.mount != "roof":
        raise ValueError("repeaters install on roof sites only")
    p_bs, p_site, p_tp = bs.position, site.position, _pos(tp)
    v1 = p_bs.as_array() - p_site.as_array()
    v2 = p_tp.as_array() - p_site.as_array()
    d1, d2 = float(np.linalg.norm(v1)), float(np.linalg.norm(v2))
    if d1 == 0.0 or d2 == 0.0:
        return LinkSnr.unavailable()
    az_bs = math.atan2(v1[1], v1[0])
    az_tp = math.atan2(v2[1], v2[0])

    if isinstance(cfg, NcrConfig):
        sep = abs(float(wrap_angle(az_bs - cfg.serve_azimuth)))
        # donor panel mounts at >= 120 deg from the serving one; the BS must fall
        # inside its +/-60 deg cone, with 3GPP taper on any residual offset
        if sep < PANEL_SEPARATION - SERVE_HALF_CONE - 1e-9:
            return LinkSnr.unavailable()
        taper1 = _panel_taper_db(max(0.0, PANEL_SEPARATION - sep))
        serve_az = cfg.serve_azimuth
        n_rx, n_tx = cfg.n_elements, cfg.n_elements
    elif isinstance(cfg, TriNcrConfig):
        off_bs = abs(float(wrap_angle(az_bs - cfg.donor_azimuth)))
        if off_bs > SERVE_HALF_CONE + 1e-9:
            return LinkSnr.unavailable()
        taper1 = _panel_taper_db(off_bs)
        offs = [abs(float(wrap_angle(az_tp - a))) for a in cfg.serve_azimuths]
        serve_az = cfg.serve_azimuths[int(np.argmin(offs))]
        n_rx, n_tx = cfg.n_elements, cfg.n_elements // 2
    else:
        raise ValueError("repeater config must be NcrConfig or TriNcrConfig")

    theta_off = abs(float(wrap_angle(az_tp - serve_az)))
    if theta_off > SERVE_HALF_CONE + 1e-9:
        return LinkSnr.unavailable()
    if los_blocked(p_bs, p_site, scenario.buildings) or los_blocked(p_site, p_tp, scenario.buildings):
        return LinkSnr.unavailable()
    taper2 = _panel_taper_db(theta_off)
    gamma0 = ncr_gamma0_db(d1, d2, cfg.gain_db, n_rx, n_tx, taper1, taper2, bs.n_elements, params)
    return compose_hops(gamma0, [(d1, p_bs.z, p_site.z), (d2, p_site.z, p_tp.z)], params)
