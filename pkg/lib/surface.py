"""Half-translation surfaces as polygons glued along their edges."""
from __future__ import annotations
import cmath
import json
import logging
import math
import numpy as np
import networkx as nx
from shapely.geometry import LineString
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Optional
from lib.errors import InvalidSurfaceError, PreconditionError, SurfaceFormatError
from lib.schemas import schema_errors
from lib.types import (SLOT_TYPE, DifferentialKind, GluingSign, PairingDocType, StratumDocType, SurfaceDocType,
                       ViolationDocType)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Pairing:
    """Two edge slots `(polygon, edge)` glued by a translation or by a flip."""

    a: SLOT_TYPE
    b: SLOT_TYPE
    sign: GluingSign

    def other(self, slot: SLOT_TYPE) -> SLOT_TYPE:
        """The slot glued to `slot`."""
        return self.b if slot == self.a else self.a


@dataclass(frozen=True)
class HalfTranslationSurface:
    """
    Polygons with signed edge pairings.

    Edge `i` of a polygon is the vector from its vertex `i` to its vertex `i + 1`. A pairing with sign +1 identifies
    two edges by a translation (their vectors are opposite), a pairing with sign -1 by a half-turn `z -> -z + c`
    (their vectors are equal). Either way the start of one edge is glued to the end of the other.
    """

    polygons: tuple[tuple[complex, ...], ...]
    pairings: tuple[Pairing, ...]

    @cached_property
    def partner(self) -> dict[SLOT_TYPE, tuple[SLOT_TYPE, int]]:
        """Map every edge slot to the slot it is glued to and the index of the pairing."""
        table: dict[SLOT_TYPE, tuple[SLOT_TYPE, int]] = {}
        for index, pairing in enumerate(self.pairings):
            table[pairing.a] = (pairing.b, index)
            table[pairing.b] = (pairing.a, index)
        return table

    @property
    def slots(self) -> list[SLOT_TYPE]:
        """All edge slots in polygon order."""
        return [(p, e) for p, polygon in enumerate(self.polygons) for e in range(len(polygon))]

    def edge(self, slot: SLOT_TYPE) -> complex:
        """The edge vector at `slot`."""
        polygon, edge = slot
        return self.polygons[polygon][edge]

    def vertices(self, polygon: int) -> np.ndarray:
        """Chart coordinates of the vertices of a polygon, starting at the origin."""
        edges = np.asarray(self.polygons[polygon], dtype=complex)
        return np.concatenate(([0j], np.cumsum(edges)[:-1]))

    @cached_property
    def scale(self) -> float:
        """The mean edge length."""
        lengths = [abs(w) for polygon in self.polygons for w in polygon]
        return float(np.mean(lengths)) if lengths else 1.0


@dataclass(frozen=True)
class Violation:
    """One broken invariant found by `validate`."""

    kind: str
    message: str
    where: tuple[int, ...] = ()

    def to_document(self) -> ViolationDocType:
        """Convert to JSON."""
        return {"kind": self.kind, "message": self.message, "where": list(self.where)}


@dataclass(frozen=True)
class VertexCycle:
    """The polygon corners glued together at one point of the surface."""

    corners: tuple[SLOT_TYPE, ...]
    total_angle: float
    crossings: tuple[int, ...] = field(default=())
    """The pairings crossed, in order, while walking around the point."""

    @property
    def angle_in_half_turns(self) -> int:
        """The total angle as a multiple of pi."""
        return round(self.total_angle / math.pi)

    @property
    def order(self) -> int:
        """The order of the quadratic differential at this point."""
        return self.angle_in_half_turns - 2


@dataclass(frozen=True)
class Stratum:
    """A multiset of zero orders together with the genus."""

    orders: tuple[int, ...]
    genus: int
    kind: DifferentialKind = DifferentialKind.QUADRATIC

    def __post_init__(self) -> None:
        """Sort the orders and check the degree of the canonical divisor."""
        object.__setattr__(self, "orders", tuple(sorted(self.orders, reverse=True)))
        expected = (4 if self.kind == DifferentialKind.QUADRATIC else 2) * (self.genus - 1)
        if sum(self.orders) != expected:
            raise InvalidSurfaceError("surface.gauss_bonnet",
                                      f"Orders {list(self.orders)} do not sum to {expected} in genus {self.genus}.",
                                      {"orders": list(self.orders), "genus": self.genus, "kind": self.kind.value})

    def to_document(self) -> StratumDocType:
        """Convert to JSON."""
        return {"kind": self.kind.value, "genus": self.genus, "orders": list(self.orders)}


def parse_surface(doc: Any) -> HalfTranslationSurface:
    """
    Build a surface from a JSON document.

    :param doc: `{"polygons": [[[re, im], ...], ...], "pairings": [{"a": [p, e], "b": [p, e], "sign": 1}, ...]}`.
    :return: The surface. The pairing is checked to be a perfect matching of the edge slots.
    """
    if not isinstance(doc, dict) or not isinstance(doc.get("polygons"), list) or not isinstance(doc.get("pairings"), list):
        raise SurfaceFormatError("surface.malformed", "A surface needs a `polygons` list and a `pairings` list.")

    polygons: list[tuple[complex, ...]] = []
    for p, polygon in enumerate(doc["polygons"]):
        if not isinstance(polygon, list) or not polygon:
            raise SurfaceFormatError("surface.malformed", f"Polygon {p} must be a non-empty list of edge vectors.",
                                     {"polygon": p})
        edges = []
        for e, vector in enumerate(polygon):
            if (not isinstance(vector, list) or len(vector) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in vector)):
                raise SurfaceFormatError("surface.malformed", f"Edge {e} of polygon {p} must be a pair [re, im].",
                                         {"slot": [p, e]})
            edges.append(complex(vector[0], vector[1]))
        polygons.append(tuple(edges))

    def read_slot(value: Any, index: int, end: str) -> SLOT_TYPE:
        if (not isinstance(value, list) or len(value) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in value)):
            raise SurfaceFormatError("surface.malformed", f"Pairing {index} needs `{end}` as [polygon, edge].",
                                     {"pairing": index})
        polygon, edge = value
        if not (0 <= polygon < len(polygons) and 0 <= edge < len(polygons[polygon])):
            raise SurfaceFormatError("surface.dangling_reference",
                                     f"Pairing {index} refers to edge {edge} of polygon {polygon}, which does not exist.",
                                     {"pairing": index, "slot": [polygon, edge]})
        return polygon, edge

    pairings: list[Pairing] = []
    seen: dict[SLOT_TYPE, int] = {}
    for index, entry in enumerate(doc["pairings"]):
        if not isinstance(entry, dict):
            raise SurfaceFormatError("surface.malformed", f"Pairing {index} must be an object.", {"pairing": index})
        a = read_slot(entry.get("a"), index, "a")
        b = read_slot(entry.get("b"), index, "b")
        if entry.get("sign") not in (1, -1) or isinstance(entry.get("sign"), bool):
            raise SurfaceFormatError("surface.malformed", f"Pairing {index} needs a sign of 1 or -1.",
                                     {"pairing": index})
        if a == b:
            raise SurfaceFormatError("surface.self_paired", f"Pairing {index} glues edge {list(a)} to itself.",
                                     {"pairing": index, "slot": list(a)})
        for slot in (a, b):
            if slot in seen:
                raise SurfaceFormatError("surface.duplicate_slot",
                                         f"Edge {list(slot)} appears in pairings {seen[slot]} and {index}.",
                                         {"pairing": index, "slot": list(slot)})
            seen[slot] = index
        pairings.append(Pairing(a, b, GluingSign(entry["sign"])))

    surface = HalfTranslationSurface(tuple(polygons), tuple(pairings))
    unpaired = [list(slot) for slot in surface.slots if slot not in seen]
    if unpaired:
        raise SurfaceFormatError("surface.unpaired_slot", f"Edges {unpaired} are not glued to anything.",
                                 {"slots": unpaired})
    return surface


def serialize_surface(surface: HalfTranslationSurface) -> SurfaceDocType:
    """Convert a surface to its JSON document."""
    pairings: list[PairingDocType] = [{"a": list(pairing.a), "b": list(pairing.b), "sign": int(pairing.sign)}
                                      for pairing in surface.pairings]
    return {"polygons": [[[float(w.real), float(w.imag)] for w in polygon] for polygon in surface.polygons],
            "pairings": pairings}


def load_surface(path: str) -> HalfTranslationSurface:
    """Read a surface document from a file."""
    try:
        with open(path) as file:
            doc = json.load(file)
    except FileNotFoundError:
        raise SurfaceFormatError("surface.file_not_found", f"No surface file at {path}.", {"path": path})
    except json.JSONDecodeError as error:
        raise SurfaceFormatError("surface.malformed", f"{path} is not valid JSON: {error}", {"path": path})
    errors = schema_errors(doc, "surface")
    if errors:
        raise SurfaceFormatError("surface.malformed", f"{path} is not a surface document: {errors[0]}",
                                 {"path": path, "errors": errors})
    return parse_surface(doc)


def _edge_segments(points: np.ndarray) -> list[LineString]:
    """The edges of a polygon as shapely segments, edge `e` running from vertex `e` to vertex `e + 1`."""
    n = len(points)
    return [LineString([(points[e].real, points[e].imag), (points[(e + 1) % n].real, points[(e + 1) % n].imag)])
            for e in range(n)]


def _polygon_violations(surface: HalfTranslationSurface, p: int, eps: float) -> list[Violation]:
    polygon = surface.polygons[p]
    violations = []
    for e, w in enumerate(polygon):
        if abs(w) <= eps:
            violations.append(Violation("zero_edge", f"Edge {e} of polygon {p} has zero length.", (p, e)))
    closure = sum(polygon, 0j)
    if abs(closure) > eps:
        violations.append(Violation("closure", f"The edges of polygon {p} sum to {closure}, not zero.", (p,)))
    if violations:
        return violations

    n = len(polygon)
    points = surface.vertices(p)
    area = 0.5 * float(np.sum(points.real * np.roll(points.imag, -1) - np.roll(points.real, -1) * points.imag))
    if n < 3 or area <= eps * surface.scale:
        violations.append(Violation("orientation", f"Polygon {p} is not positively oriented (signed area {area}).",
                                    (p,)))
        return violations

    for e in range(n):
        turn = cmath.phase(polygon[e] / polygon[e - 1])
        if abs(abs(turn) - math.pi) <= eps / surface.scale:
            violations.append(Violation("simplicity", f"Polygon {p} doubles back at vertex {e}.", (p, e)))
    segments = _edge_segments(points)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if segments[i].distance(segments[j]) <= eps:
                violations.append(Violation("simplicity", f"Edges {i} and {j} of polygon {p} intersect.", (p, i, j)))
    return violations


def validate(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> list[Violation]:
    """
    Check every invariant of a surface.

    :param surface: The surface.
    :param tolerance: Relative tolerance; lengths are compared against `tolerance` times the mean edge length.
    :return: The violations found. The list is empty if and only if the surface is valid.
    """
    eps = tolerance * surface.scale
    violations: list[Violation] = []

    counts: dict[SLOT_TYPE, int] = {slot: 0 for slot in surface.slots}
    for index, pairing in enumerate(surface.pairings):
        if pairing.a == pairing.b:
            violations.append(Violation("matching", f"Pairing {index} glues an edge to itself.", (index,)))
        for slot in (pairing.a, pairing.b):
            if slot not in counts:
                violations.append(Violation("matching", f"Pairing {index} refers to a missing edge {list(slot)}.",
                                            (index,)))
            else:
                counts[slot] += 1
    for slot, count in counts.items():
        if count != 1:
            violations.append(Violation("matching", f"Edge {list(slot)} appears in {count} pairings.", slot))
    if violations:
        return violations

    for p in range(len(surface.polygons)):
        violations.extend(_polygon_violations(surface, p, eps))

    for index, pairing in enumerate(surface.pairings):
        w, w_other = surface.edge(pairing.a), surface.edge(pairing.b)
        if abs(w_other + int(pairing.sign) * w) > eps:
            gluing = "translation" if pairing.sign == GluingSign.TRANSLATION else "flip"
            violations.append(Violation("compatibility",
                                        f"Pairing {index} is a {gluing} but its edges are {w} and {w_other}.",
                                        (index,)))
    return violations


def require_valid(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> None:
    """Raise `InvalidSurfaceError` if the surface breaks an invariant."""
    violations = validate(surface, tolerance)
    if violations:
        raise InvalidSurfaceError("surface.invalid", violations[0].message,
                                  {"violations": [violation.to_document() for violation in violations]})


def corner_angle(surface: HalfTranslationSurface, corner: SLOT_TYPE) -> float:
    """The interior angle of a polygon at its vertex `corner[1]`, between the incoming and the outgoing edge."""
    polygon, vertex = corner
    edges = surface.polygons[polygon]
    return math.pi - cmath.phase(edges[vertex] / edges[vertex - 1])


def vertex_cycles(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> list[VertexCycle]:
    """
    Group the polygon corners into the points of the surface.

    From the corner at vertex `i` of a polygon, cross the outgoing edge `i`. The start of that edge is glued to the end
    of its partner edge `j`, so the walk continues at the corner at vertex `j + 1` of the partner polygon.

    :return: The vertex cycles, ordered by their first corner.
    """
    visited: set[SLOT_TYPE] = set()
    cycles = []
    for start in surface.slots:
        if start in visited:
            continue
        corners = []
        crossings = []
        corner = start
        while corner not in visited:
            visited.add(corner)
            corners.append(corner)
            (polygon, edge), index = surface.partner[corner]
            crossings.append(index)
            corner = (polygon, (edge + 1) % len(surface.polygons[polygon]))
        if corner != start:
            raise InvalidSurfaceError("surface.vertex_walk", f"The walk around corner {list(start)} does not close.",
                                      {"corner": list(start)})
        total = math.fsum(corner_angle(surface, c) for c in corners)
        half_turns = total / math.pi
        if round(half_turns) < 1 or abs(half_turns - round(half_turns)) > max(tolerance, 1e-12) * 2 * len(corners):
            raise InvalidSurfaceError("surface.vertex_angle",
                                      f"The angle {total} around corner {list(start)} is not a multiple of pi.",
                                      {"corner": list(start), "angle": total})
        cycles.append(VertexCycle(tuple(corners), total, tuple(crossings)))
    logger.debug(f"Found {len(cycles)} vertices with angles {[c.angle_in_half_turns for c in cycles]} (x pi)")
    return cycles


def vertex_holonomy(surface: HalfTranslationSurface, cycle: VertexCycle) -> int:
    """The product of the gluing signs met while walking around a vertex; it equals (-1) ** order."""
    return math.prod(int(surface.pairings[index].sign) for index in cycle.crossings)


def polygon_graph(surface: HalfTranslationSurface) -> nx.MultiGraph:
    """Polygons joined by one edge per pairing."""
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(surface.polygons)))
    for index, pairing in enumerate(surface.pairings):
        graph.add_edge(pairing.a[0], pairing.b[0], key=index, sign=int(pairing.sign))
    return graph


def is_connected(surface: HalfTranslationSurface) -> bool:
    """Whether the gluing produces a single connected surface."""
    return bool(surface.polygons) and nx.is_connected(polygon_graph(surface))


def euler_characteristic(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> int:
    """V - E + F of the polygonal complex."""
    return len(vertex_cycles(surface, tolerance)) - len(surface.pairings) + len(surface.polygons)


def genus(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> int:
    """The genus of a connected surface, from its Euler characteristic."""
    if not is_connected(surface):
        raise PreconditionError("surface.disconnected", "The gluing does not produce a connected surface.",
                                {"components": nx.number_connected_components(polygon_graph(surface))})
    chi = euler_characteristic(surface, tolerance)
    if chi > 2 or chi % 2:
        raise InvalidSurfaceError("surface.euler_characteristic", f"Euler characteristic {chi} is not that of a "
                                  "closed orientable surface.", {"euler_characteristic": chi})
    return (2 - chi) // 2


def stratum(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> Stratum:
    """
    Find the stratum of the quadratic differential defined by a valid surface.

    A point with total angle `(k + 2) * pi` is a zero of order `k`; regular points (order 0) are dropped.
    """
    g = genus(surface, tolerance)
    orders = [cycle.order for cycle in vertex_cycles(surface, tolerance)]
    poles = [order for order in orders if order < 0]
    if poles:
        raise PreconditionError("surface.meromorphic",
                                f"The surface has points of order {poles}; only holomorphic differentials are "
                                "supported by the polygon model.", {"orders": orders})
    regular = orders.count(0)
    if regular:
        logger.debug(f"Dropping {regular} regular marked point(s) from the stratum.")
    return Stratum(tuple(order for order in orders if order > 0), g)


def is_translation(surface: HalfTranslationSurface) -> bool:
    """Whether every gluing is a translation, i.e. the surface carries an abelian differential."""
    return all(pairing.sign == GluingSign.TRANSLATION for pairing in surface.pairings)


def abelian_stratum(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> Stratum:
    """The stratum of the abelian differential of a translation surface: a point of angle `2 * pi * (l + 1)` has order `l`."""
    if not is_translation(surface):
        raise PreconditionError("surface.not_translation", "The surface has flip gluings, so it carries no abelian "
                                "differential.")
    g = genus(surface, tolerance)
    orders = []
    for cycle in vertex_cycles(surface, tolerance):
        if cycle.angle_in_half_turns % 2:
            raise InvalidSurfaceError("surface.vertex_angle", f"A translation surface has a point of angle "
                                      f"{cycle.total_angle}, not a multiple of 2 pi.", {"corners": len(cycle.corners)})
        orders.append(cycle.angle_in_half_turns // 2 - 1)
    return Stratum(tuple(order for order in orders if order > 0), g, DifferentialKind.ABELIAN)


def surface_summary(surface: HalfTranslationSurface, tolerance: Optional[float] = None) -> dict[str, Any]:
    """Collect the stratum data of a valid surface for reports."""
    tolerance = tolerance or DEFAULT_TOLERANCE
    summary: dict[str, Any] = {"polygons": len(surface.polygons),
                               "vertices": len(vertex_cycles(surface, tolerance)),
                               "edges": len(surface.pairings),
                               "euler_characteristic": euler_characteristic(surface, tolerance),
                               "translation": is_translation(surface),
                               "stratum": stratum(surface, tolerance).to_document()}
    if summary["translation"]:
        summary["abelian_stratum"] = abelian_stratum(surface, tolerance).to_document()
    return summary
