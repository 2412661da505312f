"""Planar geometry in the grid's projected meters: polygon clipping and areas."""
import math

import numpy as np

from fairst.utils import InvalidInputError


def project_ring(grid, ring):
    """Lat/lon ring -> list of (x, y) meters, without the closing vertex."""
    points = []
    for vertex in ring:
        lat, lon = float(vertex[0]), float(vertex[1])
        x, y = grid.to_xy(lat, lon)
        if points and math.isclose(points[-1][0], x, abs_tol=1e-12) and math.isclose(points[-1][1], y, abs_tol=1e-12):
            continue
        points.append((x, y))
    if len(points) > 1 and points[0] == points[-1]:
        points.pop()
    return points


def signed_area(points):
    total = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:] + points[:1]):
        total += x0 * y1 - x1 * y0
    return total / 2.0


def area(points):
    return abs(signed_area(points))


def _orient(a, b, c):
    value = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if abs(value) < 1e-12:
        return 0
    return 1 if value > 0 else -1


def _on_segment(a, b, p):
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _segments_intersect(a, b, c, d):
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    return o4 == 0 and _on_segment(c, d, b)


def is_simple(points):
    n = len(points)
    edges = [(points[i], points[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            # aristas contiguas comparten un vértice
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_intersect(*edges[i], *edges[j]):
                return False
    return True


def validate_polygon(points):
    if len(points) < 3:
        raise InvalidInputError("El polígono necesita al menos 3 vértices")
    if area(points) <= 0:
        raise InvalidInputError("Polígono de área cero")
    if not is_simple(points):
        raise InvalidInputError("Polígono autointersectado")


def clip_to_rect(points, rect):
    """Sutherland-Hodgman clipping of a polygon against an axis-aligned rectangle."""
    x_min, y_min, x_max, y_max = rect
    edges = (
        (lambda p: p[0] >= x_min, lambda s, e: _cross_x(s, e, x_min)),
        (lambda p: p[0] <= x_max, lambda s, e: _cross_x(s, e, x_max)),
        (lambda p: p[1] >= y_min, lambda s, e: _cross_y(s, e, y_min)),
        (lambda p: p[1] <= y_max, lambda s, e: _cross_y(s, e, y_max)),
    )
    output = list(points)
    for inside, intersect in edges:
        if not output:
            return []
        source, output = output, []
        start = source[-1]
        for end in source:
            if inside(end):
                if not inside(start):
                    output.append(intersect(start, end))
                output.append(end)
            elif inside(start):
                output.append(intersect(start, end))
            start = end
    return output


def _cross_x(s, e, x):
    t = (x - s[0]) / (e[0] - s[0])
    return (x, s[1] + t * (e[1] - s[1]))


def _cross_y(s, e, y):
    t = (y - s[1]) / (e[1] - s[1])
    return (s[0] + t * (e[0] - s[0]), y)


def bounds(points):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return min(xs), min(ys), max(xs), max(ys)


def candidate_cells(grid, box):
    """Cells whose rectangle overlaps the (x_min, y_min, x_max, y_max) box."""
    x_min, y_min, x_max, y_max = box
    size = grid.cell_size_m
    c0 = max(0, int(math.floor(x_min / size)))
    c1 = min(grid.cols - 1, int(math.floor(x_max / size)))
    r0 = max(0, int(math.floor(y_min / size)))
    r1 = min(grid.rows - 1, int(math.floor(y_max / size)))
    for row in range(r0, r1 + 1):
        for col in range(c0, c1 + 1):
            yield row, col


def polygon_cell_fractions(grid, points):
    """Fraction of a validated projected polygon falling in each cell, as a (rows, cols) array."""
    fractions = np.zeros(grid.shape)
    total = area(points)
    for row, col in candidate_cells(grid, bounds(points)):
        piece = clip_to_rect(points, grid.cell_rect(row, col))
        if len(piece) >= 3:
            fractions[row, col] = area(piece) / total
    return fractions


def clip_polygon_area(polygon, grid, cell):
    """area(polygon ∩ cell) / area(polygon) for a lat/lon ring."""
    points = project_ring(grid, polygon)
    validate_polygon(points)
    row, col = cell
    piece = clip_to_rect(points, grid.cell_rect(row, col))
    if len(piece) < 3:
        return 0.0
    return min(1.0, area(piece) / area(points))


def clip_segment(a, b, rect):
    """Liang-Barsky: the part of segment a-b inside rect, or None."""
    x_min, y_min, x_max, y_max = rect
    dx, dy = b[0] - a[0], b[1] - a[1]
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, a[0] - x_min), (dx, x_max - a[0]), (-dy, a[1] - y_min), (dy, y_max - a[1])):
        if p == 0:
            if q < 0:
                return None
            continue
        t = q / p
        if p < 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 > t1:
            return None
    return (a[0] + t0 * dx, a[1] + t0 * dy), (a[0] + t1 * dx, a[1] + t1 * dy)


def segment_length(a, b):
    return math.hypot(b[0] - a[0], b[1] - a[1])
