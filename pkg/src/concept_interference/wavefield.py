"""Two-Gaussian interference landscapes rendered onto raster grids.

Each concept becomes an isotropic 2D Gaussian intensity field; exemplars
are placed where the two fields simultaneously equal their two measured
probabilities (level-curve intersections); the per-exemplar phases are
spread over the plane by inverse-distance-squared interpolation; and four
rasters are rendered per request: the two single-concept fields, their
classical average, and the interference pattern

    I(x, y) = (G_A + G_B)/2 + sqrt(G_A * G_B) * cos(phi(x, y))

which is nonnegative everywhere because it equals half the squared modulus
of the summed real-amplitude waves.  Rendering is pixel-parallel pure
evaluation; rasters are row-major with the top row at y_max.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .dataset import TypicalityTable
from .errors import FitError, ValidationError

DEFAULT_CENTER_A = (0.0, 0.0)
DEFAULT_CENTER_B = (10.0, 4.0)
DEFAULT_RESOLUTION = 400
DEFAULT_WINDOW_PADDING = 2.0  # multiples of the larger sigma


@dataclass(frozen=True)
class GaussianField:
    """Isotropic 2D Gaussian intensity field peak*exp(-r^2 / (2 sigma^2))."""

    center: tuple[float, float]
    sigma: float
    peak: float

    def __post_init__(self):
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise FitError(f"sigma must be positive, got {self.sigma!r}")
        if not (self.peak > 0.0 and math.isfinite(self.peak)):
            raise FitError(f"peak must be positive, got {self.peak!r}")

    def intensity(self, x, y):
        dx = np.asarray(x, dtype=float) - self.center[0]
        dy = np.asarray(y, dtype=float) - self.center[1]
        return self.peak * np.exp(-(dx * dx + dy * dy) / (2.0 * self.sigma**2))

    def level_radius(self, fraction: float) -> float:
        """Radius where intensity falls to ``fraction`` of the peak."""
        if not 0.0 < fraction <= 1.0:
            raise ValidationError(f"fraction must be in (0, 1], got {fraction!r}")
        return self.sigma * math.sqrt(2.0 * math.log(1.0 / fraction))


@dataclass(frozen=True)
class Placement:
    index: int
    name: str
    x: float
    y: float
    residual: float


@dataclass(frozen=True)
class PlacementMap:
    placements: tuple[Placement, ...]

    def locations(self) -> np.ndarray:
        return np.array([[p.x, p.y] for p in self.placements])

    def residuals(self) -> np.ndarray:
        return np.array([p.residual for p in self.placements])


@dataclass(frozen=True, eq=False)
class PhaseField:
    """Inverse-distance-squared interpolant over exemplar phase nodes.

    Exact at every node and clamped to the node extremes, so values never
    leave [min phi_k, max phi_k].
    """

    nodes_xy: np.ndarray
    values_deg: np.ndarray
    rule: str = "inverse_distance_squared"

    def __post_init__(self):
        nodes = np.asarray(self.nodes_xy, dtype=float)
        values = np.asarray(self.values_deg, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 2 or nodes.shape[0] < 1:
            raise ValidationError(f"nodes must be (n, 2), got {nodes.shape}")
        if values.shape != (nodes.shape[0],):
            raise ValidationError("need exactly one phase value per node")
        if len(np.unique(nodes, axis=0)) != nodes.shape[0]:
            raise ValidationError("duplicate node locations")
        object.__setattr__(self, "nodes_xy", nodes)
        object.__setattr__(self, "values_deg", values)

    def evaluate(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        dx = x[None, ...] - self.nodes_xy[:, 0].reshape((-1,) + (1,) * x.ndim)
        dy = y[None, ...] - self.nodes_xy[:, 1].reshape((-1,) + (1,) * y.ndim)
        d2 = dx * dx + dy * dy
        hit = d2 == 0.0
        weights = np.where(hit, 0.0, 1.0 / np.where(hit, 1.0, d2))
        shape = (-1,) + (1,) * x.ndim
        # exact hits zero every weight at a single-node field; the blended
        # value is discarded there, so silence the 0/0
        with np.errstate(invalid="ignore", divide="ignore"):
            blended = (weights * self.values_deg.reshape(shape)).sum(axis=0)
            blended /= weights.sum(axis=0)
        exact = self.values_deg[hit.argmax(axis=0)]
        out = np.where(hit.any(axis=0), exact, blended)
        return np.clip(out, self.values_deg.min(), self.values_deg.max())


@dataclass(frozen=True)
class ConstantPhaseField:
    """Uniform phase everywhere (e.g. 90 degrees for the classical limit)."""

    value_deg: float
    rule: str = "constant"

    def evaluate(self, x, y) -> np.ndarray:
        return np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, self.value_deg)


@dataclass(frozen=True, eq=False)
class RasterGrid:
    """Row-major real intensities over an axis-aligned world window.

    Row 0 holds the pixel centers nearest y_max (image convention); pixel
    (row i, column j) is centered at
    (x_min + (j+0.5)*dx, y_max - (i+0.5)*dy).
    """

    width: int
    height: int
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.height, self.width):
            raise ValidationError(
                f"values shape {self.values.shape} does not match "
                f"{self.height}x{self.width}"
            )


def cos_deg(degrees):
    """Cosine of angles in degrees, exactly zero on the 90-degree boundary.

    The exact zero makes the no-interference identity (phase 90 everywhere
    implies interference == classical) hold bit-for-bit.
    """
    degrees = np.asarray(degrees, dtype=float)
    out = np.cos(np.radians(degrees))
    return np.where(np.mod(degrees, 180.0) == 90.0, 0.0, out)


def _argmax_first(values: np.ndarray) -> int:
    return int(np.argmax(values))  # np.argmax already takes the first maximum


def fit_gaussian_fields(
    table: TypicalityTable,
    center_a: tuple[float, float] = DEFAULT_CENTER_A,
    center_b: tuple[float, float] = DEFAULT_CENTER_B,
    scale: float = 1.0,
) -> tuple[GaussianField, GaussianField]:
    """Fit one isotropic Gaussian per concept to the table's marginals.

    Field A peaks at center_a with height scale*max(mu_a) so its top
    exemplar sits exactly at the center, and its width is fixed by the
    closed-form requirement that the field at center_b equals scale times
    mu_a of B's top exemplar; field B symmetrically.  Requires distinct
    centers and distinct top exemplars.
    """
    if not scale > 0.0:
        raise FitError(f"scale must be positive, got {scale!r}")
    ax, ay = float(center_a[0]), float(center_a[1])
    bx, by = float(center_b[0]), float(center_b[1])
    distance = math.hypot(bx - ax, by - ay)
    if distance == 0.0:
        raise FitError("centers must be distinct")
    mu_a, mu_b = table.mu_a, table.mu_b
    top_a = _argmax_first(mu_a)
    top_b = _argmax_first(mu_b)
    if top_a == top_b:
        raise FitError(
            f"exemplar {top_a + 1} ({table.names[top_a]}) tops both columns; "
            "the two fields need distinct top exemplars"
        )

    def width(column: np.ndarray, far_index: int, label: str) -> float:
        ratio = column.max() / column[far_index]
        if not ratio > 1.0:
            raise FitError(
                f"cannot fit {label}: intensity at the far center would not "
                f"fall below the peak (ratio {ratio!r})"
            )
        return distance / math.sqrt(2.0 * math.log(ratio))

    field_a = GaussianField((ax, ay), width(mu_a, top_b, "field A"), scale * float(mu_a.max()))
    field_b = GaussianField((bx, by), width(mu_b, top_a, "field B"), scale * float(mu_b.max()))
    return field_a, field_b


def circle_intersections(
    center_a: tuple[float, float],
    radius_a: float,
    center_b: tuple[float, float],
    radius_b: float,
) -> tuple[tuple[float, float], tuple[float, float]] | None:
    """Both intersection points of two circles, or None when they miss.

    The first returned point lies to the left of the directed line from
    center_a to center_b, the second to the right (they coincide at
    tangency).
    """
    ax, ay = center_a
    bx, by = center_b
    d = math.hypot(bx - ax, by - ay)
    if d == 0.0:
        return None
    if d > radius_a + radius_b or d < abs(radius_a - radius_b):
        return None
    along = (radius_a**2 - radius_b**2 + d * d) / (2.0 * d)
    offset = math.sqrt(max(radius_a**2 - along * along, 0.0))
    ux, uy = (bx - ax) / d, (by - ay) / d
    base_x, base_y = ax + along * ux, ay + along * uy
    left = (base_x - offset * uy, base_y + offset * ux)
    right = (base_x + offset * uy, base_y - offset * ux)
    return left, right


def _nearest_on_center_line(
    center_a: tuple[float, float],
    radius_a: float,
    center_b: tuple[float, float],
    radius_b: float,
) -> tuple[tuple[float, float], float]:
    """Fallback placement for circles that do not intersect.

    Minimizes the sum of squared level-curve violations over the line
    through the two centers; returns (point, minimized sum).
    """
    ax, ay = center_a
    bx, by = center_b
    d = math.hypot(bx - ax, by - ay)
    ux, uy = (bx - ax) / d, (by - ay) / d

    def violation(t: float) -> float:
        return (abs(t) - radius_a) ** 2 + (abs(d - t) - radius_b) ** 2

    candidates = [
        min(max((radius_a + d - radius_b) / 2.0, 0.0), d),  # between the centers
        (radius_a + d + radius_b) / 2.0,                    # beyond center_b
        min((d - radius_a - radius_b) / 2.0, 0.0),          # behind center_a
        0.0,
        d,
    ]
    best_t = min(candidates, key=lambda t: (violation(t), t))
    return (ax + best_t * ux, ay + best_t * uy), violation(best_t)


def place_exemplars(
    table: TypicalityTable,
    field_a: GaussianField,
    field_b: GaussianField,
) -> PlacementMap:
    """Locate every exemplar on consistent level curves of both fields.

    The top exemplar of each column sits exactly at its field's center
    (residual 0, both constraints hold there by the fit construction).
    Every other exemplar lies on an intersection of its two level-curve
    circles: even indices take the intersection left of the directed
    center-A-to-center-B line, odd indices the right one.  When the circles
    do not intersect, the point on the center line minimizing the sum of
    squared radial violations is used and the residual records that sum.
    """
    mu_a, mu_b = table.mu_a, table.mu_b
    top_a = _argmax_first(mu_a)
    top_b = _argmax_first(mu_b)
    max_a, max_b = float(mu_a.max()), float(mu_b.max())
    placements = []
    for k, name in enumerate(table.names):
        if k == top_a:
            location, residual = field_a.center, 0.0
        elif k == top_b:
            location, residual = field_b.center, 0.0
        else:
            radius_a = field_a.level_radius(float(mu_a[k]) / max_a)
            radius_b = field_b.level_radius(float(mu_b[k]) / max_b)
            pair = circle_intersections(
                field_a.center, radius_a, field_b.center, radius_b
            )
            if pair is not None:
                location = pair[0] if (k + 1) % 2 == 0 else pair[1]
                residual = 0.0
            else:
                location, residual = _nearest_on_center_line(
                    field_a.center, radius_a, field_b.center, radius_b
                )
        placements.append(
            Placement(k + 1, name, float(location[0]), float(location[1]), residual)
        )
    return PlacementMap(tuple(placements))


def interpolate_phase(placements: PlacementMap, phi_deg) -> PhaseField:
    """Phase field through the exemplar locations with their phi values."""
    phi = np.asarray(phi_deg, dtype=float)
    locations = placements.locations()
    if phi.shape != (locations.shape[0],):
        raise ValidationError(
            f"need one phase per placement: {phi.shape} vs {locations.shape[0]}"
        )
    return PhaseField(locations, phi)


def default_window(
    placements: PlacementMap,
    field_a: GaussianField,
    field_b: GaussianField,
    padding: float = DEFAULT_WINDOW_PADDING,
) -> tuple[float, float, float, float]:
    """Bounding box of the placements padded by ``padding`` * max(sigma)."""
    locations = placements.locations()
    pad = padding * max(field_a.sigma, field_b.sigma)
    return (
        float(locations[:, 0].min() - pad),
        float(locations[:, 0].max() + pad),
        float(locations[:, 1].min() - pad),
        float(locations[:, 1].max() + pad),
    )


def render_grids(
    field_a: GaussianField,
    field_b: GaussianField,
    phase: PhaseField | ConstantPhaseField,
    window: tuple[float, float, float, float],
    resolution: tuple[int, int] = (DEFAULT_RESOLUTION, DEFAULT_RESOLUTION),
) -> dict[str, RasterGrid]:
    """Render the four landscape grids over the window at pixel centers.

    Returns a_only (field A), b_only (field B), classical ((A+B)/2) and
    interference (classical + sqrt(A*B) cos phase).  a_only + b_only equals
    2*classical exactly, pixelwise; with a constant 90-degree phase the
    interference grid equals the classical grid bit-for-bit.
    """
    x_min, x_max, y_min, y_max = (float(v) for v in window)
    if not (x_min < x_max and y_min < y_max):
        raise ValidationError(f"degenerate window {window!r}")
    width, height = int(resolution[0]), int(resolution[1])
    if width < 2 or height < 2:
        raise ValidationError(f"resolution must be at least 2x2, got {resolution!r}")

    xs = x_min + (np.arange(width) + 0.5) * ((x_max - x_min) / width)
    ys = y_max - (np.arange(height) + 0.5) * ((y_max - y_min) / height)
    grid_x, grid_y = np.meshgrid(xs, ys)

    intensity_a = field_a.intensity(grid_x, grid_y)
    intensity_b = field_b.intensity(grid_x, grid_y)
    classical = 0.5 * (intensity_a + intensity_b)
    modulation = np.sqrt(intensity_a * intensity_b)
    interference = classical + modulation * cos_deg(phase.evaluate(grid_x, grid_y))

    def grid(values: np.ndarray) -> RasterGrid:
        return RasterGrid(width, height, x_min, x_max, y_min, y_max, values)

    return {
        "a_only": grid(intensity_a),
        "b_only": grid(intensity_b),
        "classical": grid(classical),
        "interference": grid(interference),
    }


def grid_to_csv(grid: RasterGrid) -> str:
    """CSV form: a window/size header line, then one row of reals per pixel row."""
    lines = [
        f"{grid.x_min!r},{grid.x_max!r},{grid.y_min!r},{grid.y_max!r},"
        f"{grid.width},{grid.height}"
    ]
    for row in grid.values:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def grid_to_pgm(grid: RasterGrid) -> bytes:
    """Binary PGM (P5, maxval 255) with per-grid linear min-max normalization."""
    values = grid.values
    low = float(values.min())
    high = float(values.max())
    if high > low:
        scaled = np.rint((values - low) * (255.0 / (high - low)))
    else:
        scaled = np.zeros_like(values)
    body = np.clip(scaled, 0.0, 255.0).astype(np.uint8).tobytes()
    return f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii") + body


def placements_to_csv(placements: PlacementMap) -> str:
    """CSV export of the placement map: exemplar,x,y,residual."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["exemplar", "x", "y", "residual"])
    for p in placements.placements:
        writer.writerow([p.name, repr(p.x), repr(p.y), repr(p.residual)])
    return buffer.getvalue()
