"""File formats for range images and point clouds.

``.rimg`` is the package's binary range-image format::

    magic "RIMG" | u16 version=1 | u32 H | u32 W
    | f32 theta_min | f32 theta_max | f32 max_range
    | H*W little-endian f32 pixels, row-major

Point clouds are exported as ASCII PLY with float x/y/z properties, and range
images can be dumped to 8-bit grayscale PNG (range / max_range quantized) for
eyeballing.
"""

import struct

import numpy as np

from .errors import IoFailureError
from .geometry import PointCloud, RangeImage, SensorIntrinsics

RIMG_MAGIC = b"RIMG"
RIMG_VERSION = 1
_HEADER = struct.Struct("<4sHIIfff")


def write_rimg(path, img: RangeImage) -> None:
    intr = img.intrinsics
    header = _HEADER.pack(
        RIMG_MAGIC,
        RIMG_VERSION,
        intr.height,
        intr.width,
        np.float32(intr.theta_min),
        np.float32(intr.theta_max),
        np.float32(intr.max_range),
    )
    data = np.ascontiguousarray(img.pixels, dtype="<f4").tobytes()
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(data)
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def read_rimg(path) -> RangeImage:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    if len(raw) < _HEADER.size or raw[:4] != RIMG_MAGIC:
        raise IoFailureError(f"{path}: not a range-image file")
    magic, version, height, width, theta_min, theta_max, max_range = _HEADER.unpack(
        raw[: _HEADER.size]
    )
    if version != RIMG_VERSION:
        raise IoFailureError(f"{path}: unsupported version {version}")
    expected = _HEADER.size + 4 * height * width
    if len(raw) != expected:
        raise IoFailureError(f"{path}: expected {expected} bytes, got {len(raw)}")
    pixels = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(
        height, width
    )
    intr = SensorIntrinsics(
        width=width,
        height=height,
        theta_max=float(theta_max),
        theta_min=float(theta_min),
        max_range=float(max_range),
    )
    return RangeImage(intr, pixels.copy())


def write_ply(path, pc: PointCloud) -> None:
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(pc)}",
        "property float x",
        "property float y",
        "property float z",
        "end_header",
    ]
    for x, y, z in pc.points:
        lines.append(f"{float(x)!r} {float(y)!r} {float(z)!r}")
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def read_ply(path) -> PointCloud:
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0] != "ply":
        raise IoFailureError(f"{path}: not a PLY file")
    try:
        end = lines.index("end_header")
        count = next(
            int(line.split()[2])
            for line in lines[:end]
            if line.startswith("element vertex")
        )
    except (ValueError, StopIteration) as exc:
        raise IoFailureError(f"{path}: malformed PLY header") from exc
    rows = lines[end + 1 : end + 1 + count]
    if len(rows) != count:
        raise IoFailureError(f"{path}: expected {count} vertices, got {len(rows)}")
    pts = np.array(
        [[float(tok) for tok in row.split()[:3]] for row in rows], dtype=np.float64
    ).reshape(-1, 3)
    return PointCloud(pts)


def write_png(path, img: RangeImage) -> None:
    """8-bit grayscale preview, range scaled by max_range."""
    from PIL import Image

    scaled = np.asarray(img.pixels, dtype=np.float64) / img.intrinsics.max_range
    gray = np.floor(np.clip(scaled, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    try:
        Image.fromarray(gray, mode="L").save(path, format="PNG")
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc
