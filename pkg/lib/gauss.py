"""The degree of the Gauss map along closed polygonal paths on a translation surface."""
from __future__ import annotations
import cmath
import logging
import math
import numpy as np
from dataclasses import dataclass
from lib.errors import PreconditionError
from lib.surface import DEFAULT_TOLERANCE, HalfTranslationSurface, is_translation, require_valid

logger = logging.getLogger(__name__)

MAX_CROSSINGS = 100_000


@dataclass(frozen=True)
class ClosedPath:
    """
    A closed polygonal path: a start point in the chart of one polygon, then straight displacements.

    Each displacement is followed straight on, across as many gluings as it takes. The chart of a polygon puts its
    vertex 0 at the origin.
    """

    polygon: int
    start: complex
    steps: tuple[complex, ...]

    @classmethod
    def of(cls, polygon: int, start: complex, steps: list[complex]) -> ClosedPath:
        """Build a path from a list of displacements."""
        return cls(polygon, complex(start), tuple(complex(step) for step in steps))


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def _inside(points: np.ndarray, z: complex) -> bool:
    """Even-odd rule for a point against a polygon given by its vertices."""
    inside = False
    n = len(points)
    for i in range(n):
        p, q = complex(points[i]), complex(points[(i + 1) % n])
        if (p.imag > z.imag) != (q.imag > z.imag):
            x = p.real + (z.imag - p.imag) * (q.real - p.real) / (q.imag - p.imag)
            if z.real < x:
                inside = not inside
    return inside


def _on_edge(surface: HalfTranslationSurface, polygon: int, point: complex, eps: float) -> tuple[int, float] | None:
    """The edge a point lies on, with the position along it, or None for a point off the boundary."""
    vertices = surface.vertices(polygon)
    for e, w in enumerate(surface.polygons[polygon]):
        position = (point - complex(vertices[e])) / w
        if abs(position.imag) * abs(w) <= eps and -eps <= position.real * abs(w) <= abs(w) + eps:
            return e, position.real
    return None


def _glue(surface: HalfTranslationSurface, polygon: int, e: int, s: float) -> tuple[int, int, complex]:
    """Cross edge `e` at fraction `s` along it into the chart of the partner polygon."""
    (polygon, entered), _ = surface.partner[(polygon, e)]
    point = complex(surface.vertices(polygon)[entered]) + (1 - s) * surface.polygons[polygon][entered]
    return polygon, entered, point


def _trace(surface: HalfTranslationSurface, polygon: int, point: complex, step: complex,
           eps: float) -> tuple[int, complex, int]:
    """
    Follow one straight segment through the polygons it crosses.

    A segment may start on an edge, where the previous one stopped. It crosses that gluing first when it points out
    of the polygon.

    :return: The polygon where the segment ends, the end point in its chart, and the number of gluings crossed.
    """
    length = abs(step)
    direction = step / length
    remaining = length
    crossings = 0
    entered = -1
    boundary = _on_edge(surface, polygon, point, eps)
    if boundary is not None:
        e, s = boundary
        w = surface.polygons[polygon][e]
        if _cross(w, direction) < -eps * abs(w):
            # Positively oriented polygons have their interior to the left of each edge.
            polygon, entered, point = _glue(surface, polygon, e, s)
            crossings += 1
        else:
            entered = e
    while True:
        edges = surface.polygons[polygon]
        vertices = surface.vertices(polygon)
        hit = None
        for e, w in enumerate(edges):
            if e == entered:
                continue
            denominator = _cross(direction, w)
            if abs(denominator) <= eps * abs(w):
                continue
            offset = complex(vertices[e]) - point
            t = _cross(offset, w) / denominator
            s = _cross(offset, direction) / denominator
            if t > eps and -eps <= s <= 1 + eps and (hit is None or t < hit[0]):
                hit = (t, e, s)
        if hit is None or hit[0] >= remaining - eps:
            end = point + direction * remaining
            if min(abs(end - complex(v)) for v in vertices) <= eps:
                raise PreconditionError("gauss.vertex", "The path ends on a vertex of the surface.",
                                        {"polygon": polygon})
            return polygon, end, crossings
        t, e, s = hit
        if min(s, 1 - s) * abs(edges[e]) <= eps:
            raise PreconditionError("gauss.vertex", f"The path runs through a vertex of polygon {polygon}.",
                                    {"polygon": polygon, "edge": e})
        polygon, entered, point = _glue(surface, polygon, e, s)
        remaining -= t
        crossings += 1
        if crossings > MAX_CROSSINGS:
            raise PreconditionError("gauss.too_long", f"A segment crosses more than {MAX_CROSSINGS} gluings.")


def turning_degree(surface: HalfTranslationSurface, path: ClosedPath, tolerance: float = DEFAULT_TOLERANCE) -> int:
    """
    The degree of the Gauss map along a closed path: its total turning divided by 2 pi.

    Translations do not change directions, so the turning is the sum of the principal angles between consecutive
    displacements, the last one included.
    """
    if not is_translation(surface):
        raise PreconditionError("gauss.not_translation", "Directions are only defined up to sign on a surface with "
                                "flip gluings.")
    require_valid(surface, tolerance)
    if not path.steps or any(step == 0 for step in path.steps):
        raise PreconditionError("gauss.degenerate", "A path needs non-zero steps.", {"steps": len(path.steps)})
    if not 0 <= path.polygon < len(surface.polygons):
        raise PreconditionError("gauss.polygon", f"There is no polygon {path.polygon}.", {"polygon": path.polygon})
    eps = tolerance * surface.scale
    vertices = surface.vertices(path.polygon)
    if not _inside(vertices, path.start) or min(abs(path.start - complex(v)) for v in vertices) <= eps:
        raise PreconditionError("gauss.start", f"The start point {path.start} is not inside polygon {path.polygon}.",
                                {"polygon": path.polygon})

    polygon, point, crossings = path.polygon, path.start, 0
    for step in path.steps:
        polygon, point, crossed = _trace(surface, polygon, point, step, eps)
        crossings += crossed
    if polygon != path.polygon or abs(point - path.start) > eps * len(path.steps):
        raise PreconditionError("gauss.not_closed", "The path does not come back to its start point.",
                                {"polygon": polygon, "end": [point.real, point.imag]})

    total = 0.0
    for previous, following in zip(path.steps, path.steps[1:] + path.steps[:1]):
        turn = cmath.phase(following / previous)
        if math.pi - abs(turn) <= tolerance:
            raise PreconditionError("gauss.antiparallel", "The path doubles back on itself.",
                                    {"steps": [[previous.real, previous.imag], [following.real, following.imag]]})
        total += turn
    degree = total / (2 * math.pi)
    logger.debug(f"Path of {len(path.steps)} steps crosses {crossings} gluings and turns {degree} times")
    return round(degree)
