"""Shared test utilities: synthetic disk-grid rendering and small oracles."""

import math

import numpy as np

_erf = np.vectorize(math.erf, otypes=[np.float64])


def render_disks(size, centers, radius, fg=40, bg=200, blur_sigma=2.0):
    """Dark disks on a light background with a Gaussian-blurred edge.

    The edge profile is the closed-form blur of a step: fg + (bg-fg) * Phi(
    (dist - radius) / sigma), evaluated only on the band where it differs
    from fg/bg.
    """
    img = np.full((size, size), float(bg))
    band = 6.0 * blur_sigma
    for cx, cy in centers:
        x0 = max(int(math.floor(cx - radius - band)), 0)
        x1 = min(int(math.ceil(cx + radius + band)) + 1, size)
        y0 = max(int(math.floor(cy - radius - band)), 0)
        y1 = min(int(math.ceil(cy + radius + band)) + 1, size)
        yy, xx = np.mgrid[y0:y1, x0:x1]
        dist = np.sqrt((xx - cx) ** 2 + (yy - cy) ** 2)
        patch = np.full(dist.shape, float(bg))
        patch[dist <= radius - band] = float(fg)
        edge = np.abs(dist - radius) < band
        z = (dist[edge] - radius) / (blur_sigma * math.sqrt(2.0))
        patch[edge] = fg + (bg - fg) * 0.5 * (1.0 + _erf(z))
        img[y0:y1, x0:x1] = np.minimum(img[y0:y1, x0:x1], patch)
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def prim_mst_weights(xy):
    """O(n^3)-ish Prim: independent of the engine's Kruskal/union-find path.

    Distances use the same sqrt(dx^2 + dy^2) formula as the engine so weight
    multisets compare bitwise (math.hypot rounds differently).
    """
    n = len(xy)
    in_tree = [False] * n
    in_tree[0] = True
    weights = []
    for _ in range(n - 1):
        best = None
        for i in range(n):
            if not in_tree[i]:
                continue
            for j in range(n):
                if in_tree[j]:
                    continue
                dx = xy[i][0] - xy[j][0]
                dy = xy[i][1] - xy[j][1]
                d = math.sqrt(dx * dx + dy * dy)
                if best is None or d < best[0]:
                    best = (d, j)
        weights.append(best[0])
        in_tree[best[1]] = True
    return sorted(weights)


def grid_centers(start, pitch, count):
    """count x count grid of (x, y) centers starting at `start`."""
    return [
        (start + c * pitch, start + r * pitch) for r in range(count) for c in range(count)
    ]
