"""Device catalog construction and the cost models that scale with configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .channel import NcrConfig, RisConfig, StarConfig, TriNcrConfig, tri_ncr_facing, wrap_angle

TECH_RIS = "ris"
TECH_STAR = "star"
TECH_NCR = "ncr"
TECH_TRI_NCR = "3sncr"

FLAVOR_REDUCED = "reduced"
FLAVOR_FULL = "full"

# Reference configurations: a 100x100 metasurface and a 55 dB repeater.
REF_RIS_CELLS = 100 * 100
REF_NCR_GAIN_DB = 55.0
DEFAULT_NCR_ELEMENTS = 72  # 12 x 6 panel


@dataclass(frozen=True)
class CostModel:
    ris_deploy: float = 0.4
    ris_per_cell: float = 6e-5
    ncr_deploy: float = 0.8
    ncr_per_db: float = 4e-2
    star_multiplier: float = 2.0

    def __post_init__(self):
        if min(self.ris_deploy, self.ris_per_cell, self.ncr_deploy, self.ncr_per_db, self.star_multiplier) < 0:
            raise ValueError("cost coefficients must be non-negative")

    def with_price_ratio(self, ratio: float) -> "CostModel":
        """Scale repeater pricing so the reference NCR costs `ratio` x the reference RIS."""
        if ratio <= 0:
            raise ValueError("price ratio must be positive")
        ris_ref = ris_cost(REF_RIS_CELLS, self)
        ncr_ref = ncr_cost(REF_NCR_GAIN_DB, self)
        k = ratio * ris_ref / ncr_ref
        return replace(self, ncr_deploy=self.ncr_deploy * k, ncr_per_db=self.ncr_per_db * k)


DEFAULT_COST_MODEL = CostModel()


def ris_cost(m_cells: int, model: CostModel = DEFAULT_COST_MODEL) -> float:
    if m_cells <= 0:
        raise ValueError("cell count must be positive")
    return model.ris_deploy + model.ris_per_cell * m_cells


def ncr_cost(gain_db: float, model: CostModel = DEFAULT_COST_MODEL) -> float:
    if gain_db < 0:
        raise ValueError("amplification gain must be non-negative")
    return model.ncr_deploy + model.ncr_per_db * gain_db


@dataclass(frozen=True)
class DeviceSpec:
    id: str
    technology: str
    config: object
    orientation: float | None  # rad; None when fixed by the site or auto-steered
    cost: float
    mount_requirement: str  # "wall" | "roof"


def device_cost(spec: DeviceSpec, model: CostModel = DEFAULT_COST_MODEL) -> float:
    if spec.technology == TECH_RIS:
        return ris_cost(spec.config.m_cells, model)
    if spec.technology == TECH_STAR:
        return model.star_multiplier * ris_cost(spec.config.m_cells, model)
    if spec.technology in (TECH_NCR, TECH_TRI_NCR):
        return ncr_cost(spec.config.gain_db, model)
    raise ValueError(f"unknown technology '{spec.technology}'")


@dataclass(frozen=True)
class Catalog:
    specs: tuple[DeviceSpec, ...]
    flavor: str

    def spec_by_id(self, spec_id: str) -> DeviceSpec:
        for s in self.specs:
            if s.id == spec_id:
                return s
        raise KeyError(spec_id)

    @property
    def spec_ids(self) -> list[str]:
        return [s.id for s in self.specs]


def build_catalog(
    flavor: str = FLAVOR_FULL,
    ris_sizes=(100,),
    ncr_gains=(REF_NCR_GAIN_DB,),
    orientations: int = 8,
    model: CostModel = DEFAULT_COST_MODEL,
    ncr_elements: int = DEFAULT_NCR_ELEMENTS,
) -> Catalog:
    """Cartesian expansion of technologies x configurations x orientations.

    `ris_sizes` are square side counts (size 100 means a 100x100 surface).
    Wall metasurfaces take their orientation from the hosting site and STAR
    surfaces auto-face the BS, so only repeaters expand over orientations.
    """
    if flavor not in (FLAVOR_REDUCED, FLAVOR_FULL):
        raise ValueError("flavor must be 'reduced' or 'full'")
    if not ris_sizes or not ncr_gains or orientations < 1:
        raise ValueError("catalog expansion must be non-empty")

    azimuths = [float(wrap_angle(2.0 * math.pi * k / orientations)) for k in range(orientations)]
    specs: list[DeviceSpec] = []

    for size in ris_sizes:
        cfg = RisConfig(m_cells=int(size) * int(size), beta_r=1.0)
        specs.append(DeviceSpec(f"ris{int(size)}", TECH_RIS, cfg, None, ris_cost(cfg.m_cells, model), "wall"))
    for gain in ncr_gains:
        for k, az in enumerate(azimuths):
            cfg = NcrConfig(ncr_elements, float(gain), az)
            specs.append(DeviceSpec(f"ncr{gain:g}a{k}", TECH_NCR, cfg, az, ncr_cost(float(gain), model), "roof"))
    if flavor == FLAVOR_FULL:
        for size in ris_sizes:
            cfg = StarConfig(m_cells=int(size) * int(size))
            cost = model.star_multiplier * ris_cost(cfg.m_cells, model)
            specs.append(DeviceSpec(f"star{int(size)}", TECH_STAR, cfg, None, cost, "roof"))
        for gain in ncr_gains:
            for k, az in enumerate(azimuths):
                cfg = tri_ncr_facing(az, ncr_elements, float(gain))
                specs.append(DeviceSpec(f"3sncr{gain:g}a{k}", TECH_TRI_NCR, cfg, az, ncr_cost(float(gain), model), "roof"))
    return Catalog(tuple(specs), flavor)


def catalog_from_dict(raw: dict) -> Catalog:
    """Catalog config document: flavor, sizes, gains, orientation count, cost overrides."""
    model = CostModel(**raw.get("cost_model", {}))
    cat = build_catalog(
        flavor=raw.get("flavor", FLAVOR_FULL),
        ris_sizes=raw.get("ris_sizes", [100]),
        ncr_gains=raw.get("ncr_gains", [REF_NCR_GAIN_DB]),
        orientations=raw.get("orientations", 8),
        model=model,
        ncr_elements=raw.get("ncr_elements", DEFAULT_NCR_ELEMENTS),
    )
    if "price_ratio" in raw:
        cat = reprice(cat, model.with_price_ratio(raw["price_ratio"]))
    return cat


def reprice(catalog: Catalog, model: CostModel) -> Catalog:
    """Same physics, new prices."""
    specs = tuple(replace(s, cost=device_cost(s, model)) for s in catalog.specs)
    return Catalog(specs, catalog.flavor)


def cost_table(catalog: Catalog) -> str:
    lines = [f"{'id':<14}{'technology':<12}{'mount':<7}{'cost':>8}"]
    for s in catalog.specs:
        lines.append(f"{s.id:<14}{s.technology:<12}{s.mount_requirement:<7}{s.cost:>8.3f}")
    return "\n".join(lines)
