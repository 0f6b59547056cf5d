"""The orientation double cover of a half-translation surface, and how cycles lift to it."""
from __future__ import annotations
import logging
import networkx as nx
from dataclasses import dataclass
from functools import cached_property
from lib.errors import PreconditionError
from lib.homology import Cycle, check_cycle
from lib.surface import (DEFAULT_TOLERANCE, HalfTranslationSurface, Pairing, VertexCycle, is_connected, require_valid,
                         serialize_surface, vertex_cycles)
from lib.types import DoubleCoverDocType, GluingSign

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DoubleCover:
    """
    A translation surface with a two-to-one map onto a half-translation surface.

    Cover polygon `p + s * P` is sheet `s` of base polygon `p`, with its edge vectors multiplied by `(-1) ** s`.
    """

    surface: HalfTranslationSurface
    projection: tuple[tuple[int, int, int], ...]
    """Rows `(cover polygon, base polygon, sheet)`."""
    connected: bool

    @cached_property
    def sheets(self) -> dict[tuple[int, int], int]:
        """Map `(base polygon, sheet)` to the cover polygon above it."""
        return {(base, sheet): cover for cover, base, sheet in self.projection}

    def lifts(self, base: HalfTranslationSurface,
              tolerance: float = DEFAULT_TOLERANCE) -> list[tuple[VertexCycle, list[VertexCycle]]]:
        """Pair every vertex of the base with the cover vertices above it."""
        owner = {corner: cycle for cycle in vertex_cycles(self.surface, tolerance) for corner in cycle.corners}
        result = []
        for cycle in vertex_cycles(base, tolerance):
            above: list[VertexCycle] = []
            for polygon, vertex in cycle.corners:
                for sheet in (0, 1):
                    lifted = owner[(self.sheets[(polygon, sheet)], vertex)]
                    if lifted not in above:
                        above.append(lifted)
            result.append((cycle, above))
        return result


def double_cover(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> DoubleCover:
    """
    Build the canonical double cover on which the quadratic differential becomes the square of an abelian one.

    Translations are copied within each sheet and flips join the two sheets; every gluing of the cover is a
    translation. The cover is connected exactly when the differential is not a square.
    """
    require_valid(surface, tolerance)
    if not is_connected(surface):
        raise PreconditionError("cover.disconnected", "Only connected surfaces have a double cover here.")
    count = len(surface.polygons)
    polygons = tuple(polygon if sheet == 0 else tuple(-w for w in polygon)
                     for sheet in (0, 1) for polygon in surface.polygons)
    pairings = []
    for pairing in surface.pairings:
        swap = int(pairing.sign == GluingSign.FLIP)
        for sheet in (0, 1):
            a = (pairing.a[0] + sheet * count, pairing.a[1])
            b = (pairing.b[0] + (sheet ^ swap) * count, pairing.b[1])
            pairings.append(Pairing(a, b, GluingSign.TRANSLATION))
    cover = HalfTranslationSurface(polygons, tuple(pairings))
    projection = tuple((p + sheet * count, p, sheet) for sheet in (0, 1) for p in range(count))
    connected = is_connected(cover)
    logger.debug(f"Double cover with {len(polygons)} polygons, {'connected' if connected else 'two copies'}")
    return DoubleCover(cover, projection, connected)


def cover_to_document(cover: DoubleCover) -> DoubleCoverDocType:
    """Convert to JSON."""
    return {"surface": serialize_surface(cover.surface),
            "projection": [list(row) for row in cover.projection],
            "connected": cover.connected}


def _support_graph(surface: HalfTranslationSurface, cycle: Cycle) -> nx.MultiGraph:
    """Polygons joined by the pairings of a cycle, keyed by pairing index."""
    support = nx.MultiGraph()
    for edge in sorted(cycle.support):
        pairing = surface.pairings[edge]
        support.add_edge(pairing.a[0], pairing.b[0], key=edge)
    return support


def support_components(surface: HalfTranslationSurface, cycle: Cycle) -> list[Cycle]:
    """
    Split a cycle into the cycles carried by the connected pieces of its support, ordered by smallest pairing.

    Every polygon meets each piece evenly, so each piece is a cycle again.
    """
    check_cycle(surface, cycle)
    support = _support_graph(surface, cycle)
    pieces = [Cycle(frozenset(key for _, _, key in support.subgraph(nodes).edges(keys=True)))
              for nodes in nx.connected_components(support)]
    return sorted(pieces, key=lambda piece: min(piece.support))


def lift_components(surface: HalfTranslationSurface, cover: DoubleCover, cycle: Cycle) -> int:
    """
    Count the closed curves above a cycle in the double cover: 2 if Ga of the cycle is 0, 1 otherwise.

    The support of the cycle is walked along an Eulerian circuit, and the circuit is lifted through the gluings of the
    cover from sheet 0 of its first polygon. A lift that comes back to sheet 0 closes up, and so does its mirror on
    sheet 1; otherwise one curve runs around the circuit twice.

    :param cycle: A non-empty cycle with connected support.
    """
    check_cycle(surface, cycle)
    if not cycle.support:
        raise PreconditionError("cover.empty_cycle", "The empty cycle has no lift.")
    support = _support_graph(surface, cycle)
    if not nx.is_connected(support):
        raise PreconditionError("cover.disconnected_support", "The cycle is not a single closed curve.",
                                {"support": cycle.to_document()})
    start = min(support.nodes)
    circuit = list(nx.eulerian_circuit(support, source=start, keys=True))

    def follow(cover_polygon: int) -> int:
        for node, _, edge in circuit:
            pairing = surface.pairings[edge]
            end = pairing.a if pairing.a[0] == node else pairing.b
            (cover_polygon, _), _ = cover.surface.partner[(cover_polygon, end[1])]
        return cover_polygon

    components = 2 if follow(cover.sheets[(start, 0)]) == cover.sheets[(start, 0)] else 1
    logger.debug(f"Cycle {cycle.to_document()} lifts to {components} curve(s)")
    return components
