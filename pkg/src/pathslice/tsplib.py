"""TSPLIB instance parsing and the TSPLIB distance functions.

Only coordinate-based symmetric instances are handled. Distances follow the
TSPLIB reference definitions so that published optimal tour lengths are
reproduced exactly (they are integers, stored here as floats).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "Metric",
    "Instance",
    "TsplibError",
    "MalformedHeaderError",
    "UnsupportedMetricError",
    "CoordinateCountError",
    "parse_instance",
    "format_instance",
    "load_instance",
    "builtin_instance",
    "BUILTIN_INSTANCES",
    "distance",
    "build_distance_matrix",
]

EARTH_RADIUS = 6378.388
GEO_PI = 3.141592

BUILTIN_INSTANCES = ("ulysses16", "djibouti38", "att48")


class Metric(str, enum.Enum):
    EUC_2D = "EUC_2D"
    CEIL_2D = "CEIL_2D"
    GEO = "GEO"
    ATT = "ATT"


class TsplibError(ValueError):
    """Base class for TSPLIB parse failures. ``line`` is 1-based, or None."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedHeaderError(TsplibError):
    pass


class UnsupportedMetricError(TsplibError):
    pass


class CoordinateCountError(TsplibError):
    pass


@dataclass(frozen=True, eq=False)
class Instance:
    name: str
    dimension: int
    coords: np.ndarray
    metric: Metric

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise ValueError("coords must have shape (n, 2)")
        if coords.shape[0] != self.dimension:
            raise ValueError(
                f"{coords.shape[0]} coordinates for dimension {self.dimension}"
            )
        if self.dimension < 3:
            raise ValueError("an instance needs at least 3 cities")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "metric", Metric(self.metric))

    @property
    def n(self) -> int:
        return self.dimension

    def __repr__(self):
        return f"Instance(name={self.name!r}, dimension={self.dimension}, metric={self.metric.value})"


_REQUIRED = ("NAME", "DIMENSION", "EDGE_WEIGHT_TYPE")


def parse_instance(content: str) -> Instance:
    """Parse the text of a TSPLIB ``.tsp`` file.

    Node ids in the file may start anywhere; cities are renumbered 0..n-1 in
    the order of their ids.
    """
    header: dict[str, str] = {}
    header_line: dict[str, int] = {}
    nodes: dict[int, tuple[float, float]] = {}
    section_line = None
    in_coords = False
    skipping = False

    for lineno, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.upper() == "EOF":
            break
        if in_coords and not (":" in line or line.upper().endswith("_SECTION")):
            parts = line.split()
            try:
                if len(parts) != 3:
                    raise ValueError
                node = int(parts[0])
                x, y = float(parts[1]), float(parts[2])
            except ValueError:
                raise CoordinateCountError(f"expected 'id x y', got {line!r}", lineno) from None
            if node in nodes:
                raise CoordinateCountError(f"duplicate node id {node}", lineno)
            nodes[node] = (x, y)
            continue
        if line.upper().startswith("NODE_COORD_SECTION"):
            in_coords = True
            section_line = lineno
            continue
        in_coords = False
        if line.upper().endswith("_SECTION"):
            # e.g. DISPLAY_DATA_SECTION; its rows are skipped
            skipping = True
            continue
        if ":" not in line:
            if skipping:
                continue
            raise MalformedHeaderError(f"expected 'KEY: value', got {line!r}", lineno)
        skipping = False
        key, _, value = line.partition(":")
        key = key.strip().upper()
        header[key] = value.strip()
        header_line[key] = lineno

    for key in _REQUIRED:
        if key not in header:
            raise MalformedHeaderError(f"missing {key} keyword")
    if section_line is None:
        raise MalformedHeaderError("missing NODE_COORD_SECTION keyword")

    try:
        dimension = int(header["DIMENSION"])
    except ValueError:
        raise MalformedHeaderError(
            f"DIMENSION is not an integer: {header['DIMENSION']!r}", header_line["DIMENSION"]
        ) from None
    if dimension < 3:
        raise MalformedHeaderError(f"DIMENSION must be >= 3, got {dimension}", header_line["DIMENSION"])

    weight_type = header["EDGE_WEIGHT_TYPE"].upper()
    try:
        metric = Metric(weight_type)
    except ValueError:
        raise UnsupportedMetricError(
            f"unsupported EDGE_WEIGHT_TYPE {weight_type}", header_line["EDGE_WEIGHT_TYPE"]
        ) from None

    if len(nodes) != dimension:
        raise CoordinateCountError(
            f"DIMENSION is {dimension} but {len(nodes)} coordinates were given", section_line
        )
    coords = np.array([nodes[k] for k in sorted(nodes)], dtype=float)
    return Instance(header["NAME"].removesuffix(".tsp"), dimension, coords, metric)


def format_instance(instance: Instance) -> str:
    """Serialize to TSPLIB text; ``parse_instance`` inverts this exactly."""
    lines = [
        f"NAME : {instance.name}",
        "TYPE : TSP",
        f"DIMENSION : {instance.dimension}",
        f"EDGE_WEIGHT_TYPE : {instance.metric.value}",
        "NODE_COORD_SECTION",
    ]
    for i, (x, y) in enumerate(instance.coords, start=1):
        lines.append(f"{i} {float(x)!r} {float(y)!r}")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def load_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text())


def builtin_instance(name: str) -> Instance:
    """One of the bundled benchmark instances: ulysses16, djibouti38, att48."""
    if name not in BUILTIN_INSTANCES:
        raise KeyError(f"unknown builtin instance {name!r}; choose from {BUILTIN_INSTANCES}")
    text = resources.files("pathslice").joinpath("data", f"{name}.tsp").read_text()
    return parse_instance(text)


def _geo_radians(value: float) -> float:
    # degrees.minutes encoding; whole degrees by truncation, as in the reference code
    degrees = math.trunc(value)
    minutes = value - degrees
    return GEO_PI * (degrees + 5.0 * minutes / 3.0) / 180.0


def _nint(value: float) -> int:
    return int(value + 0.5)


def distance(instance: Instance, a: int, b: int) -> float:
    n = instance.dimension
    if not (0 <= a < n and 0 <= b < n):
        raise IndexError(f"city index out of range for n={n}: ({a}, {b})")
    if a == b:
        return 0.0
    (xa, ya), (xb, yb) = instance.coords[a], instance.coords[b]
    metric = instance.metric
    if metric is Metric.EUC_2D:
        return float(_nint(math.hypot(xa - xb, ya - yb)))
    if metric is Metric.CEIL_2D:
        return float(math.ceil(math.hypot(xa - xb, ya - yb)))
    if metric is Metric.ATT:
        r = math.sqrt(((xa - xb) ** 2 + (ya - yb) ** 2) / 10.0)
        t = _nint(r)
        return float(t + 1 if t < r else t)
    lat_a, lon_a = _geo_radians(xa), _geo_radians(ya)
    lat_b, lon_b = _geo_radians(xb), _geo_radians(yb)
    q1 = math.cos(lon_a - lon_b)
    q2 = math.cos(lat_a - lat_b)
    q3 = math.cos(lat_a + lat_b)
    return float(int(EARTH_RADIUS * math.acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0))


def build_distance_matrix(instance: Instance) -> np.ndarray:
    """Dense symmetric n x n matrix with a zero diagonal (read-only)."""
    x = instance.coords[:, 0]
    y = instance.coords[:, 1]
    metric = instance.metric
    if metric is Metric.GEO:
        trunc = np.trunc(instance.coords)
        rad = GEO_PI * (trunc + 5.0 * (instance.coords - trunc) / 3.0) / 180.0
        lat, lon = rad[:, 0], rad[:, 1]
        q1 = np.cos(lon[:, None] - lon[None, :])
        q2 = np.cos(lat[:, None] - lat[None, :])
        q3 = np.cos(lat[:, None] + lat[None, :])
        arg = np.clip(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3), -1.0, 1.0)
        mat = np.floor(EARTH_RADIUS * np.arccos(arg) + 1.0)
    else:
        dx = x[:, None] - x[None, :]
        dy = y[:, None] - y[None, :]
        if metric is Metric.ATT:
            r = np.sqrt((dx * dx + dy * dy) / 10.0)
            t = np.floor(r + 0.5)
            mat = np.where(t < r, t + 1.0, t)
        else:
            # sqrt of the same sum as math.hypot can differ in the last ulp;
            # use hypot so the matrix agrees with distance() exactly
            e = np.hypot(dx, dy)
            mat = np.floor(e + 0.5) if metric is Metric.EUC_2D else np.ceil(e)
    np.fill_diagonal(mat, 0.0)
    # GEO acos is not bitwise symmetric in general; mirror the upper triangle
    mat = np.triu(mat) + np.triu(mat, 1).T
    mat.setflags(write=False)
    return mat
