"""Geometric world model: buildings, base station, candidate sites, test points.

Everything here is plain Euclidean geometry in a local meters frame.  A
scenario is immutable after construction; `los_blocked` is a pure function,
so scenarios can be shared freely across threads.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from shapely.geometry import LineString, Point as _ShapelyPoint, Polygon as _ShapelyPolygon


class ScenarioError(ValueError):
    """Raised when a scenario document violates the schema or geometry."""


MOUNT_WALL = "wall"
MOUNT_ROOF = "roof"

# Mount heights used by the synthetic generator (meters).
DEFAULT_WALL_HEIGHT = 5.0
DEFAULT_ROOF_HEIGHT = 6.5
DEFAULT_BS_HEIGHT = 10.0
DEFAULT_UE_HEIGHT = 1.5
DEFAULT_BUILDING_HEIGHT = 6.0


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def xy(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass
class Building:
    """Right prism: `footprint` (n,2) CCW vertices extruded from z=0 to `height`."""

    footprint: np.ndarray
    height: float
    _polygon: _ShapelyPolygon = field(init=False, repr=False)
    _rect: tuple[float, float, float, float] | None = field(init=False, repr=False)

    def __post_init__(self):
        self.footprint = np.asarray(self.footprint, dtype=float)
        self._polygon = _ShapelyPolygon(self.footprint)
        self._rect = _axis_aligned_rect(self.footprint)

    @property
    def polygon(self) -> _ShapelyPolygon:
        return self._polygon

    def contains_xy(self, x: float, y: float) -> bool:
        """Strict interior test (boundary counts as outside)."""
        if self._rect is not None:
            x0, x1, y0, y1 = self._rect
            return x0 < x < x1 and y0 < y < y1
        return self._polygon.contains(_ShapelyPoint(x, y))


def _axis_aligned_rect(fp: np.ndarray) -> tuple[float, float, float, float] | None:
    if fp.shape != (4, 2):
        return None
    xs, ys = sorted(set(fp[:, 0])), sorted(set(fp[:, 1]))
    if len(xs) != 2 or len(ys) != 2:
        return None
    corners = {(x, y) for x in xs for y in ys}
    if {(px, py) for px, py in fp} != corners:
        return None
    return xs[0], xs[1], ys[0], ys[1]


@dataclass(frozen=True)
class CandidateSite:
    id: str
    position: Point3
    mount: str  # "wall" | "roof"
    normal: tuple[float, float] | None = None  # outward unit normal, wall sites only


@dataclass(frozen=True)
class TestPoint:
    id: str
    position: Point3


@dataclass(frozen=True)
class BaseStation:
    position: Point3
    rows: int = 12
    cols: int = 16

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols


@dataclass
class Scenario:
    area: tuple[float, float]  # (w, h) meters
    buildings: list[Building]
    bs: BaseStation
    sites: list[CandidateSite]
    tps: list[TestPoint]

    def site_index(self) -> dict[str, CandidateSite]:
        return {s.id: s for s in self.sites}

    def tp_index(self) -> dict[str, TestPoint]:
        return {t.id: t for t in self.tps}

    def to_doc(self) -> dict:
        return {
            "area": {"w": self.area[0], "h": self.area[1]},
            "buildings": [
                {"footprint": [[float(x), float(y)] for x, y in b.footprint], "height": b.height}
                for b in self.buildings
            ],
            "bs": {
                "pos": [self.bs.position.x, self.bs.position.y, self.bs.position.z],
                "array": [self.bs.rows, self.bs.cols],
            },
            "sites": [
                {
                    "id": s.id,
                    "pos": [s.position.x, s.position.y, s.position.z],
                    "mount": s.mount,
                    **({"normal": [s.normal[0], s.normal[1]]} if s.mount == MOUNT_WALL else {}),
                }
                for s in self.sites
            ],
            "tps": [{"id": t.id, "pos": [t.position.x, t.position.y, t.position.z]} for t in self.tps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), indent=2) + "\n"


# ---------------------------------------------------------------------------
# line of sight


def _as_xyz(p) -> np.ndarray:
    if isinstance(p, Point3):
        return p.as_array()
    a = np.asarray(p, dtype=float)
    if a.shape != (3,):
        raise ValueError("expected a 3D point")
    return a


def _open_interval(p0: float, p1: float, lo: float, hi: float) -> tuple[float, float]:
    """Parameter range where lo < p(t) < hi for linear p; empty when t0 >= t1."""
    d = p1 - p0
    if d == 0.0:
        return (-math.inf, math.inf) if lo < p0 < hi else (math.inf, -math.inf)
    t0, t1 = (lo - p0) / d, (hi - p0) / d
    return (t0, t1) if t0 <= t1 else (t1, t0)


def _hits_rect_prism(a: np.ndarray, b: np.ndarray, rect, height: float) -> bool:
    x0, x1, y0, y1 = rect
    lo, hi = 0.0, 1.0
    for axis, (alo, ahi) in ((0, (x0, x1)), (1, (y0, y1)), (2, (0.0, height))):
        t0, t1 = _open_interval(a[axis], b[axis], alo, ahi)
        lo, hi = max(lo, t0), min(hi, t1)
        if lo >= hi:
            return False
    return lo < hi


def _hits_polygon_prism(a: np.ndarray, b: np.ndarray, building: Building) -> bool:
    poly = building.polygon
    line = LineString([a[:2], b[:2]])
    if line.length == 0.0:  # vertical segment
        if not building.contains_xy(a[0], a[1]):
            return False
        zlo, zhi = sorted((a[2], b[2]))
        return max(zlo, 0.0) < min(zhi, building.height)
    clipped = poly.intersection(line)
    parts = getattr(clipped, "geoms", [clipped])
    for part in parts:
        if not isinstance(part, LineString) or part.length == 0.0:
            continue
        mid = part.interpolate(0.5, normalized=True)
        if not poly.contains(mid):
            continue  # running along the boundary: grazing, not blocking
        coords = list(part.coords)
        t0 = line.project(_ShapelyPoint(coords[0])) / line.length
        t1 = line.project(_ShapelyPoint(coords[-1])) / line.length
        t0, t1 = min(t0, t1), max(t1, t0)
        t0, t1 = max(t0, 0.0), min(t1, 1.0)
        if t0 >= t1:
            continue
        z0 = a[2] + (b[2] - a[2]) * t0
        z1 = a[2] + (b[2] - a[2]) * t1
        zlo, zhi = min(z0, z1), max(z0, z1)
        if zlo == zhi:
            if 0.0 < zlo < building.height:
                return True
        elif max(zlo, 0.0) < min(zhi, building.height):
            return True
    return False


def los_blocked(a, b, buildings: Iterable[Building]) -> bool:
    """True iff the open segment (a, b) crosses the interior of any building prism.

    Grazing contact (endpoint on a wall, segment tangent to a face) does not
    count as blocked.
    """
    pa, pb = _as_xyz(a), _as_xyz(b)
    zmin = min(pa[2], pb[2])
    for bld in buildings:
        if zmin >= bld.height:
            continue  # segment entirely at or above the roof plane
        if bld._rect is not None:
            if _hits_rect_prism(pa, pb, bld._rect, bld.height):
                return True
        elif _hits_polygon_prism(pa, pb, bld):
            return True
    return False


def los_blocked_batch(origin, targets: np.ndarray, buildings: Sequence[Building]) -> np.ndarray:
    """Vectorized `los_blocked` from one origin to (n,3) targets."""
    a = _as_xyz(origin)
    pts = np.asarray(targets, dtype=float)
    blocked = np.zeros(len(pts), dtype=bool)
    for bld in buildings:
        todo = ~blocked
        if not todo.any():
            break
        if bld._rect is None:
            idx = np.nonzero(todo)[0]
            for i in idx:
                if _hits_polygon_prism(a, pts[i], bld):
                    blocked[i] = True
            continue
        x0, x1, y0, y1 = bld._rect
        sub = pts[todo]
        lo = np.zeros(len(sub))
        hi = np.ones(len(sub))
        for axis, (alo, ahi) in ((0, (x0, x1)), (1, (y0, y1)), (2, (0.0, bld.height))):
            p0 = a[axis]
            d = sub[:, axis] - p0
            with np.errstate(divide="ignore", invalid="ignore"):
                t0 = (alo - p0) / d
                t1 = (ahi - p0) / d
            tlo = np.minimum(t0, t1)
            thi = np.maximum(t0, t1)
            still = d == 0.0
            inside = (p0 > alo) & (p0 < ahi)
            tlo = np.where(still, np.where(inside, -np.inf, np.inf), tlo)
            thi = np.where(still, np.where(inside, np.inf, -np.inf), thi)
            lo = np.maximum(lo, tlo)
            hi = np.minimum(hi, thi)
        blocked[todo] |= lo < hi
    return blocked


# ---------------------------------------------------------------------------
# synthetic urban generator


def generate_manhattan(
    blocks: int = 3,
    block_size: float = 80.0,
    street_width: float = 20.0,
    height: float = DEFAULT_BUILDING_HEIGHT,
    tp_spacing: float = 20.0,
    site_spacing: float = 60.0,
    seed: int = 0,
    wall_height: float = DEFAULT_WALL_HEIGHT,
    roof_height: float = DEFAULT_ROOF_HEIGHT,
    bs_height: float = DEFAULT_BS_HEIGHT,
    ue_height: float = DEFAULT_UE_HEIGHT,
    size_jitter: float = 0.35,
    bs_array: tuple[int, int] = (12, 16),
) -> Scenario:
    """Axis-aligned grid of square buildings with streets in between.

    The seed drives per-building side lengths (square, shrunk by up to
    `size_jitter` inside their grid cell), so distinct seeds give distinct
    street canyons.  Deterministic: the same arguments always produce the
    same scenario, byte for byte.
    """
    if min(blocks, block_size, street_width, height, tp_spacing, site_spacing) <= 0:
        raise ScenarioError("all generator dimensions must be positive")
    rng = np.random.default_rng(seed)
    span = blocks * block_size + (blocks + 1) * street_width
    n = blocks * blocks
    sides = np.round(block_size * rng.uniform(1.0 - size_jitter, 1.0, size=n) * 2.0) / 2.0

    buildings: list[Building] = []
    for i in range(blocks):  # row (y)
        for j in range(blocks):  # col (x)
            k = i * blocks + j
            side = float(sides[k])
            cx = street_width + j * (block_size + street_width) + block_size / 2.0
            cy = street_width + i * (block_size + street_width) + block_size / 2.0
            x0, y0 = cx - side / 2.0, cy - side / 2.0
            fp = np.array([[x0, y0], [x0 + side, y0], [x0 + side, y0 + side], [x0, y0 + side]])
            buildings.append(Building(fp, height))

    center = np.array([span / 2.0, span / 2.0])
    centroids = np.array([b.footprint.mean(axis=0) for b in buildings])
    bs_idx = int(np.argmin(np.hypot(*(centroids - center).T)))
    bs_xy = centroids[bs_idx]
    bs = BaseStation(Point3(float(bs_xy[0]), float(bs_xy[1]), bs_height), *bs_array)

    sites: list[CandidateSite] = []
    w = 0
    for b in buildings:
        fp = b.footprint
        edges = [(fp[k], fp[(k + 1) % 4]) for k in range(4)]
        perimeter = sum(float(np.hypot(*(q - p))) for p, q in edges)
        count = max(1, int(perimeter // site_spacing))
        for m in range(count):
            s = (m + 0.5) * perimeter / count
            acc = 0.0
            for p, q in edges:
                elen = float(np.hypot(*(q - p)))
                if s <= acc + elen:
                    frac = (s - acc) / elen
                    pos = p + frac * (q - p)
                    d = (q - p) / elen
                    normal = (float(d[1]), float(-d[0]))  # outward for CCW
                    sites.append(
                        CandidateSite(f"w{w:03d}", Point3(float(pos[0]), float(pos[1]), wall_height), MOUNT_WALL, normal)
                    )
                    w += 1
                    break
                acc += elen
    for r, b in enumerate(buildings):
        # roof site at the corner farthest from the BS: it overlooks the
        # building's own blind quadrant without roof-edge self-occlusion
        dist = np.hypot(*(b.footprint - bs_xy).T)
        vertex = b.footprint[int(np.argmax(dist))]
        sites.append(CandidateSite(f"r{r:03d}", Point3(float(vertex[0]), float(vertex[1]), roof_height), MOUNT_ROOF))

    tps: list[TestPoint] = []
    ticks = np.arange(tp_spacing / 2.0, span, tp_spacing)
    t = 0
    for y in ticks:
        for x in ticks:
            if any(b.contains_xy(float(x), float(y)) for b in buildings):
                continue
            tps.append(TestPoint(f"t{t:04d}", Point3(float(x), float(y), ue_height)))
            t += 1
    if not tps:
        raise ScenarioError("generator parameters produce zero outdoor area")

    return Scenario(area=(span, span), buildings=buildings, bs=bs, sites=sites, tps=tps)


# ---------------------------------------------------------------------------
# document ingestion


def _need(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise ScenarioError(f"missing field '{where}.{key}'" if where else f"missing field '{key}'")
    val = doc[key]
    if kind is float:
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ScenarioError(f"field '{where}.{key}' must be a number")
        return float(val)
    if not isinstance(val, kind):
        raise ScenarioError(f"field '{where}.{key}' must be {kind.__name__}")
    return val


def _point3(raw, where: str) -> Point3:
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise ScenarioError(f"'{where}' must be [x, y, z]")
    vals = []
    for v in raw:
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise ScenarioError(f"'{where}' must contain finite numbers")
        vals.append(float(v))
    return Point3(*vals)


def load_scenario(document) -> Scenario:
    """Parse and validate a scenario document (JSON text or parsed dict)."""
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON: {exc}") from None
    elif isinstance(document, dict):
        doc = document
    else:
        raise ScenarioError("scenario document must be JSON text or a dict")

    area_doc = _need(doc, "area", dict, "")
    w = _need(area_doc, "w", float, "area")
    h = _need(area_doc, "h", float, "area")
    if w <= 0 or h <= 0:
        raise ScenarioError("area dimensions must be positive")

    buildings = []
    for i, braw in enumerate(_need(doc, "buildings", list, "")):
        where = f"buildings[{i}]"
        fp_raw = _need(braw, "footprint", list, where)
        if len(fp_raw) < 3:
            raise ScenarioError(f"{where}: footprint needs at least 3 vertices")
        fp = []
        for v in fp_raw:
            if not isinstance(v, (list, tuple)) or len(v) != 2:
                raise ScenarioError(f"{where}: footprint vertices must be [x, y] pairs")
            fp.append([float(v[0]), float(v[1])])
        fp = np.array(fp)
        bh = _need(braw, "height", float, where)
        if bh <= 0:
            raise ScenarioError(f"{where}: height must be positive")
        poly = _ShapelyPolygon(fp)
        if not poly.is_valid or poly.area <= 0:
            raise ScenarioError(f"{where}: footprint must be a simple polygon")
        signed = 0.0
        for k in range(len(fp)):
            x0, y0 = fp[k]
            x1, y1 = fp[(k + 1) % len(fp)]
            signed += x0 * y1 - x1 * y0
        if signed <= 0:
            raise ScenarioError(f"{where}: footprint vertices must be counterclockwise")
        buildings.append(Building(fp, bh))

    bs_doc = _need(doc, "bs", dict, "")
    bs_pos = _point3(_need(bs_doc, "pos", list, "bs"), "bs.pos")
    arr = _need(bs_doc, "array", list, "bs")
    if len(arr) != 2 or not all(isinstance(v, int) and v >= 1 for v in arr):
        raise ScenarioError("'bs.array' must be [rows, cols] with positive integers")
    bs = BaseStation(bs_pos, int(arr[0]), int(arr[1]))
    if not (0 <= bs_pos.x <= w and 0 <= bs_pos.y <= h):
        raise ScenarioError("bs position lies outside the area")

    sites = []
    seen_site = set()
    for i, sraw in enumerate(_need(doc, "sites", list, "")):
        where = f"sites[{i}]"
        sid = _need(sraw, "id", str, where)
        if sid in seen_site:
            raise ScenarioError(f"duplicate site id '{sid}'")
        seen_site.add(sid)
        pos = _point3(_need(sraw, "pos", list, where), f"{where}.pos")
        mount = _need(sraw, "mount", str, where)
        if mount not in (MOUNT_WALL, MOUNT_ROOF):
            raise ScenarioError(f"site '{sid}': mount must be 'wall' or 'roof'")
        if not (0 <= pos.x <= w and 0 <= pos.y <= h):
            raise ScenarioError(f"site '{sid}' lies outside the area")
        normal = None
        if mount == MOUNT_WALL:
            nraw = sraw.get("normal")
            if nraw is None or len(nraw) != 2:
                raise ScenarioError(f"site '{sid}': wall sites require a 2D outward normal")
            nx, ny = float(nraw[0]), float(nraw[1])
            nn = math.hypot(nx, ny)
            if nn == 0:
                raise ScenarioError(f"site '{sid}': normal must be nonzero")
            normal = (nx / nn, ny / nn)
            on_edge = any(b.polygon.exterior.distance(_ShapelyPoint(pos.x, pos.y)) < 1e-6 for b in buildings)
            if buildings and not on_edge:
                raise ScenarioError(f"site '{sid}' is not on any building edge")
        else:
            on_roof = any(b.polygon.covers(_ShapelyPoint(pos.x, pos.y)) for b in buildings)
            if buildings and not on_roof:
                raise ScenarioError(f"site '{sid}' is not on any building footprint")
        sites.append(CandidateSite(sid, pos, mount, normal))

    tps = []
    seen_tp = set()
    for i, traw in enumerate(_need(doc, "tps", list, "")):
        where = f"tps[{i}]"
        tid = _need(traw, "id", str, where)
        if tid in seen_tp:
            raise ScenarioError(f"duplicate test point id '{tid}'")
        seen_tp.add(tid)
        pos = _point3(_need(traw, "pos", list, where), f"{where}.pos")
        if not (0 <= pos.x <= w and 0 <= pos.y <= h):
            raise ScenarioError(f"test point '{tid}' lies outside the area")
        for bi, b in enumerate(buildings):
            if b.contains_xy(pos.x, pos.y):
                raise ScenarioError(f"test point '{tid}' lies inside building {bi}")
        tps.append(TestPoint(tid, pos))

    return Scenario(area=(w, h), buildings=buildings, bs=bs, sites=sites, tps=tps)


def scenario_from_file(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return load_scenario(fh.read())
