"""Pure-numpy implementations of the hot kernels.

These mirror the compiled versions in ``_ckernels.pyx`` expression for
expression, so both backends return bitwise-identical results; the test suite
relies on that when the compiled module is available.
"""

import numpy as np

NAME = "python"

_EPS = 1e-9


def min_scatter(idx: np.ndarray, values: np.ndarray, size: int) -> np.ndarray:
    """Scatter ``values`` into a length-``size`` array keeping the minimum per slot.

    Unoccupied slots hold ``+inf``.
    """
    out = np.full(size, np.inf, dtype=np.float64)
    if idx.size:
        np.minimum.at(out, idx, values)
    return out


def raycast(
    dirs: np.ndarray,
    plane_z: np.ndarray,
    boxes: np.ndarray,
    cylinders: np.ndarray,
) -> np.ndarray:
    """Nearest positive hit distance per unit ray from the origin.

    dirs: (N, 3) unit direction vectors.
    plane_z: (P,) horizontal plane offsets (plane equation z = z0).
    boxes: (B, 6) axis-aligned boxes as (xmin, ymin, zmin, xmax, ymax, zmax).
    cylinders: (C, 5) vertical cylinders as (cx, cy, radius, zmin, zmax),
        lateral surface only.

    Returns (N,) distances, ``+inf`` where nothing is hit.
    """
    n = dirs.shape[0]
    best = np.full(n, np.inf, dtype=np.float64)
    dx, dy, dz = dirs[:, 0], dirs[:, 1], dirs[:, 2]

    for z0 in plane_z:
        with np.errstate(divide="ignore", invalid="ignore"):
            t = z0 / dz
        hit = (dz != 0.0) & (t > _EPS)
        best = np.where(hit & (t < best), t, best)

    for bx in boxes:
        tmin = np.full(n, -np.inf)
        tmax = np.full(n, np.inf)
        miss = np.zeros(n, dtype=bool)
        for axis in range(3):
            d = dirs[:, axis]
            mn, mx = bx[axis], bx[axis + 3]
            nz = d != 0.0
            with np.errstate(divide="ignore", invalid="ignore"):
                t1 = mn / d
                t2 = mx / d
            lo = np.minimum(t1, t2)
            hi = np.maximum(t1, t2)
            tmin = np.where(nz, np.maximum(tmin, lo), tmin)
            tmax = np.where(nz, np.minimum(tmax, hi), tmax)
            # ray parallel to this slab: origin must lie inside it
            miss |= ~nz & ((0.0 < mn) | (0.0 > mx))
        ok = ~miss & (tmax >= tmin)
        t = np.where(tmin > _EPS, tmin, tmax)  # inside the box: exit face
        hit = ok & (t > _EPS)
        best = np.where(hit & (t < best), t, best)

    for cx, cy, radius, zmin, zmax in cylinders:
        a = dx * dx + dy * dy
        b = 2.0 * (-dx * cx - dy * cy)
        c = cx * cx + cy * cy - radius * radius
        disc = b * b - 4.0 * a * c
        valid = (a != 0.0) & (disc >= 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.sqrt(np.where(valid, disc, 0.0))
            t1 = (-b - s) / (2.0 * a)
            t2 = (-b + s) / (2.0 * a)
        for t in (t1, t2):
            z = t * dz
            hit = valid & (t > _EPS) & (z >= zmin) & (z <= zmax)
            best = np.where(hit & (t < best), t, best)

    return best


def _grid_shape(mins, span, cell):
    return tuple(max(1, int(s / cell) + 1) for s in span)


def nearest_sqdist(queries: np.ndarray, refs: np.ndarray) -> np.ndarray:
    """Exact squared distance to the nearest reference point, per query.

    Uses a uniform grid hash: candidates are scanned in expanding Chebyshev
    rings around the query cell and the search stops once the ring's distance
    lower bound exceeds the best hit, so the result equals brute force.
    """
    m = refs.shape[0]
    if m == 0:
        raise ValueError("reference cloud is empty")
    mins = refs.min(axis=0)
    span = refs.max(axis=0) - mins
    cell = float(span.max()) / max(1.0, float(m) ** (1.0 / 3.0))
    if cell <= 0.0:
        cell = 1.0
    nx, ny, nz = _grid_shape(mins, span, cell)

    cells = np.floor((refs - mins) / cell).astype(np.int64)
    cells[:, 0] = np.clip(cells[:, 0], 0, nx - 1)
    cells[:, 1] = np.clip(cells[:, 1], 0, ny - 1)
    cells[:, 2] = np.clip(cells[:, 2], 0, nz - 1)
    buckets: dict[tuple[int, int, int], list[int]] = {}
    for i, key in enumerate(map(tuple, cells)):
        buckets.setdefault(key, []).append(i)

    qcells = np.floor((queries - mins) / cell).astype(np.int64)
    out = np.empty(queries.shape[0], dtype=np.float64)
    cell2 = cell * cell
    for qi in range(queries.shape[0]):
        qx, qy, qz = queries[qi]
        ci, cj, ck = qcells[qi]
        kmax = max(
            max(abs(int(ci)), abs(int(ci) - (nx - 1))),
            max(abs(int(cj)), abs(int(cj) - (ny - 1))),
            max(abs(int(ck)), abs(int(ck) - (nz - 1))),
        )
        best = np.inf
        for ring in range(kmax + 1):
            if best <= (ring - 1) * (ring - 1) * cell2 and ring >= 1:
                break
            for ii in range(max(ci - ring, 0), min(ci + ring, nx - 1) + 1):
                for jj in range(max(cj - ring, 0), min(cj + ring, ny - 1) + 1):
                    for kk in range(max(ck - ring, 0), min(ck + ring, nz - 1) + 1):
                        if max(abs(ii - ci), abs(jj - cj), abs(kk - ck)) != ring:
                            continue
                        idxs = buckets.get((ii, jj, kk))
                        if not idxs:
                            continue
                        for ri in idxs:
                            ddx = qx - refs[ri, 0]
                            ddy = qy - refs[ri, 1]
                            ddz = qz - refs[ri, 2]
                            d2 = (ddx * ddx + ddy * ddy) + ddz * ddz
                            if d2 < best:
                                best = d2
        out[qi] = best
    return out
