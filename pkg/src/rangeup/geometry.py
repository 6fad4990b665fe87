"""Spherical sensor geometry: point clouds <-> range images, row-skip downsampling.

Conventions used throughout the package:

* Column ``u`` comes from azimuth via ``u = W/2 - (W / 2*pi) * atan2(y, x)``
  and row ``v`` from elevation via ``v = H / (th_max - th_min) *
  (th_max - atan2(z, sqrt(x^2 + y^2)))``.  ``atan2`` keeps all quadrants
  unambiguous and makes the projection invertible.
* Both indices are rounded half-up; ``u`` wraps modulo ``W`` (the scan is
  circular in azimuth), ``v`` must fall inside ``[0, H)`` and is clamped to
  ``H - 1`` after rounding.  The inverse projection therefore places a pixel
  ``(v, u)`` at exactly azimuth(u) and elevation(v), so grid-aligned points
  round-trip bit-stably.
* A pixel value of 0 means "no return"; collisions keep the smaller range
  (the nearer surface wins).
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import (
    IndivisibleHeightError,
    OutOfFovError,
    ShapeMismatchError,
    ZeroPointError,
)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SensorIntrinsics:
    """Grid size, vertical field of view and range ceiling of a scanner."""

    width: int
    height: int
    theta_max: float
    theta_min: float
    max_range: float

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be >= 1")
        if not self.theta_max > self.theta_min:
            raise ValueError("theta_max must exceed theta_min")
        if not self.max_range > 0:
            raise ValueError("max_range must be positive")

    @property
    def fov(self) -> float:
        return self.theta_max - self.theta_min

    def azimuth(self, u):
        """Azimuth angle of column index ``u``."""
        return (self.width / 2.0 - np.asarray(u, dtype=np.float64)) * (
            TWO_PI / self.width
        )

    def elevation(self, v):
        """Elevation angle of row index ``v``."""
        return self.theta_max - np.asarray(v, dtype=np.float64) * (
            self.fov / self.height
        )

    def scaled(self, height_factor: int) -> "SensorIntrinsics":
        """Same sensor with ``height_factor`` times the vertical resolution."""
        return SensorIntrinsics(
            width=self.width,
            height=self.height * height_factor,
            theta_max=self.theta_max,
            theta_min=self.theta_min,
            max_range=self.max_range,
        )


@dataclass(frozen=True)
class RangeImage:
    """2D grid of ranges in meters; 0 encodes "no return"."""

    intrinsics: SensorIntrinsics
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.shape != (self.intrinsics.height, self.intrinsics.width):
            raise ShapeMismatchError(
                f"pixels {px.shape} do not match intrinsics "
                f"({self.intrinsics.height}, {self.intrinsics.width})"
            )
        if px.size and (px.min() < 0 or px.max() > self.intrinsics.max_range):
            raise ValueError("pixel ranges must lie in [0, max_range]")
        object.__setattr__(self, "pixels", px)


@dataclass(frozen=True)
class PointCloud:
    """Unordered (N, 3) array of points in the sensor frame, meters."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 3)
        if not np.isfinite(pts).all():
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class UpsampleSpec:
    """Vertical upsampling task: low-resolution grid to ``beta`` times the rows."""

    beta: int
    low: SensorIntrinsics
    high: SensorIntrinsics

    def __post_init__(self):
        if self.beta < 1:
            raise ValueError("beta must be >= 1")
        if self.high.height != self.beta * self.low.height:
            raise ValueError("high.height must equal beta * low.height")
        if self.high.width != self.low.width:
            raise ValueError("horizontal resolution must not change")
        if (
            self.high.theta_max != self.low.theta_max
            or self.high.theta_min != self.low.theta_min
        ):
            raise ValueError("field of view must not change")

    @classmethod
    def from_low(cls, low: SensorIntrinsics, beta: int) -> "UpsampleSpec":
        return cls(beta=beta, low=low, high=low.scaled(beta))

    @classmethod
    def from_high(cls, high: SensorIntrinsics, beta: int) -> "UpsampleSpec":
        if high.height % beta:
            raise IndivisibleHeightError(
                f"height {high.height} not divisible by beta {beta}"
            )
        low = SensorIntrinsics(
            width=high.width,
            height=high.height // beta,
            theta_max=high.theta_max,
            theta_min=high.theta_min,
            max_range=high.max_range,
        )
        return cls(beta=beta, low=low, high=high)


class ProjectionResult(NamedTuple):
    image: RangeImage
    dropped: int


def project_point(p, intr: SensorIntrinsics) -> tuple[float, float, float]:
    """Project a single 3D point to real-valued image coordinates ``(u, v, r)``.

    Raises ZeroPointError for the origin and OutOfFovError when the elevation
    falls outside the sensor's vertical field of view (v outside [0, H)).
    """
    x, y, z = (float(c) for c in p)
    r = float(np.sqrt(x * x + y * y + z * z))
    if r == 0.0:
        raise ZeroPointError("cannot project the sensor origin")
    u = intr.width / 2.0 - (intr.width / TWO_PI) * np.arctan2(y, x)
    v = (intr.height / intr.fov) * (
        intr.theta_max - np.arctan2(z, np.sqrt(x * x + y * y))
    )
    if not 0.0 <= v < intr.height:
        raise OutOfFovError(f"row coordinate {v:.3f} outside [0, {intr.height})")
    return float(u), float(v), r


def project_points(points: np.ndarray, intr: SensorIntrinsics):
    """Vectorized projection of an (N, 3) array; no field-of-view filtering.

    Returns ``(u, v, r)`` arrays of real-valued coordinates.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    r = np.sqrt(x * x + y * y + z * z)
    u = intr.width / 2.0 - (intr.width / TWO_PI) * np.arctan2(y, x)
    v = (intr.height / intr.fov) * (
        intr.theta_max - np.arctan2(z, np.sqrt(x * x + y * y))
    )
    return u, v, r


def bin_indices(u: np.ndarray, v: np.ndarray, intr: SensorIntrinsics):
    """Integer bin of real-valued image coordinates (u wraps, v is clamped)."""
    ui = np.floor(u + 0.5).astype(np.int64) % intr.width
    vi = np.minimum(np.floor(v + 0.5).astype(np.int64), intr.height - 1)
    return ui, vi


def pointcloud_to_range_image(
    pc: PointCloud, intr: SensorIntrinsics
) -> ProjectionResult:
    """Bin a point cloud into a range image; nearest surface wins per pixel.

    Points outside the vertical field of view, at the origin, or beyond
    ``max_range`` are dropped; the count of dropped points is returned
    alongside the image.
    """
    pts = pc.points
    u, v, r = project_points(pts, intr)
    keep = (r > 0.0) & (r <= intr.max_range) & (v >= 0.0) & (v < intr.height)
    dropped = int(pts.shape[0] - keep.sum())
    ui, vi = bin_indices(u[keep], v[keep], intr)
    flat = vi * intr.width + ui
    binned = kernels.min_scatter(flat, r[keep], intr.height * intr.width)
    binned[~np.isfinite(binned)] = 0.0
    image = RangeImage(intr, binned.reshape(intr.height, intr.width))
    return ProjectionResult(image, dropped)


def unit_directions(intr: SensorIntrinsics) -> np.ndarray:
    """(H, W, 3) unit ray directions at every pixel's azimuth/elevation."""
    az = intr.azimuth(np.arange(intr.width))
    el = intr.elevation(np.arange(intr.height))
    cos_el = np.cos(el)[:, None]
    return np.stack(
        [
            cos_el * np.cos(az)[None, :],
            cos_el * np.sin(az)[None, :],
            np.broadcast_to(np.sin(el)[:, None], (intr.height, intr.width)).copy(),
        ],
        axis=-1,
    )


def range_image_to_pointcloud(img: RangeImage) -> PointCloud:
    """Back-project every non-empty pixel to the 3D point at its pixel angles."""
    intr = img.intrinsics
    px = np.asarray(img.pixels, dtype=np.float64)
    vi, ui = np.nonzero(px > 0.0)
    dirs = unit_directions(intr)[vi, ui]
    return PointCloud(dirs * px[vi, ui][:, None])


def downsample_rows(img: RangeImage, beta: int, phase: int = 0) -> RangeImage:
    """Keep every ``beta``-th row starting at ``phase``; width and FoV unchanged."""
    intr = img.intrinsics
    if intr.height % beta:
        raise IndivisibleHeightError(
            f"height {intr.height} not divisible by {beta}"
        )
    if not 0 <= phase < beta:
        raise ValueError(f"phase must lie in [0, {beta})")
    low = SensorIntrinsics(
        width=intr.width,
        height=intr.height // beta,
        theta_max=intr.theta_max,
        theta_min=intr.theta_min,
        max_range=intr.max_range,
    )
    return RangeImage(low, np.ascontiguousarray(img.pixels[phase::beta]))
