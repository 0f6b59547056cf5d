"""
Mod 2 homology of a half-translation surface and the monodromy functional Ga.

Cycles live on the dual graph: one node per polygon, one edge per pairing. The surface minus its vertices retracts
onto this graph, so its cycle space is the first homology of the punctured surface; dividing out the loops around the
vertices gives the homology of the closed surface. Ga of a cycle is the parity of the flip gluings it crosses, which
is the holonomy of the flat metric along it.
"""
from __future__ import annotations
import logging
import numpy as np
import networkx as nx
from dataclasses import dataclass
from collections import defaultdict
from typing import Iterable
from lib import gf2
from lib.errors import InvalidSurfaceError, PreconditionError
from lib.surface import (DEFAULT_TOLERANCE, HalfTranslationSurface, genus, is_connected, polygon_graph,
                         vertex_cycles)
from lib.twist import ParityVector
from lib.types import GluingSign

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DualGraph:
    """Polygons joined by their pairings, with the cyclic order of pairings around each polygon."""

    graph: nx.MultiGraph
    rotation: tuple[tuple[int, ...], ...]
    """`rotation[p][e]` is the pairing through edge `e` of polygon `p`, in boundary order."""
    signs: tuple[int, ...]

    @property
    def node_count(self) -> int:
        """The number of polygons."""
        return int(self.graph.number_of_nodes())

    @property
    def edge_count(self) -> int:
        """The number of pairings."""
        return len(self.signs)


@dataclass(frozen=True)
class Cycle:
    """A mod 2 chain of pairings whose boundary vanishes."""

    support: frozenset[int]

    @classmethod
    def of(cls, edges: Iterable[int]) -> Cycle:
        """Build a chain from edges listed with multiplicity; edges listed twice cancel."""
        support: set[int] = set()
        for edge in edges:
            support ^= {edge}
        return cls(frozenset(support))

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> Cycle:
        """Build a chain from its 0/1 coefficient vector."""
        return cls(frozenset(int(i) for i in np.nonzero(vector)[0]))

    def to_vector(self, edge_count: int) -> np.ndarray:
        """The 0/1 coefficient vector of the chain."""
        vector = np.zeros(edge_count, dtype=np.uint8)
        vector[list(self.support)] = 1
        return vector

    def __add__(self, other: Cycle) -> Cycle:
        """Add two chains mod 2."""
        return Cycle(self.support ^ other.support)

    def to_document(self) -> list[int]:
        """The pairing indices in increasing order."""
        return sorted(self.support)


@dataclass(frozen=True)
class SymplecticBasis:
    """Cycles `(a_1, ..., a_g, b_1, ..., b_g)` with `a_i . b_j = delta_ij` and all other products zero."""

    alphas: tuple[Cycle, ...]
    betas: tuple[Cycle, ...]

    @property
    def genus(self) -> int:
        """The genus of the surface."""
        return len(self.alphas)

    @property
    def cycles(self) -> tuple[Cycle, ...]:
        """All basis cycles, alphas first."""
        return self.alphas + self.betas


def dual_graph(surface: HalfTranslationSurface) -> DualGraph:
    """Build the dual graph of a connected surface."""
    if not is_connected(surface):
        raise PreconditionError("homology.disconnected", "The dual graph of a disconnected surface is not used.")
    rotation = tuple(tuple(surface.partner[(p, e)][1] for e in range(len(polygon)))
                     for p, polygon in enumerate(surface.polygons))
    return DualGraph(polygon_graph(surface), rotation, tuple(int(pairing.sign) for pairing in surface.pairings))


def check_cycle(surface: HalfTranslationSurface, cycle: Cycle) -> None:
    """Raise `PreconditionError` unless the chain uses existing pairings and every polygon meets it evenly."""
    unknown = sorted(edge for edge in cycle.support if not 0 <= edge < len(surface.pairings))
    if unknown:
        raise PreconditionError("homology.unknown_edge", f"Pairings {unknown} do not belong to the surface.",
                                {"edges": unknown})
    degree: defaultdict[int, int] = defaultdict(int)
    for edge in cycle.support:
        pairing = surface.pairings[edge]
        degree[pairing.a[0]] += 1
        degree[pairing.b[0]] += 1
    odd = sorted(node for node, count in degree.items() if count % 2)
    if odd:
        raise PreconditionError("homology.not_a_cycle", f"The chain has a boundary at polygons {odd}.",
                                {"polygons": odd, "support": cycle.to_document()})


def incidence_matrix(surface: HalfTranslationSurface) -> np.ndarray:
    """The mod 2 polygon-by-pairing incidence matrix; loops give zero columns."""
    matrix = np.zeros((len(surface.polygons), len(surface.pairings)), dtype=np.uint8)
    for index, pairing in enumerate(surface.pairings):
        matrix[pairing.a[0], index] ^= 1
        matrix[pairing.b[0], index] ^= 1
    return matrix


def cycle_space_basis(surface: HalfTranslationSurface) -> list[Cycle]:
    """A basis of the cycle space of the dual graph, of dimension E - F + 1."""
    return [Cycle.from_vector(row) for row in gf2.kernel_basis(incidence_matrix(surface))]


def vertex_boundaries(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> list[Cycle]:
    """The small loop around each vertex, as the chain of pairings crossed while walking around it."""
    return [Cycle.of(cycle.crossings) for cycle in vertex_cycles(surface, tolerance)]


def cycle_basis(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> list[Cycle]:
    """
    Cycles whose classes form a basis of the mod 2 homology of the closed surface.

    The vertex boundaries are put into an echelon basis first; every cycle-space vector that stays independent of
    them and of the cycles already kept joins the result.

    :return: Exactly `2 * genus` cycles (none on a sphere).
    """
    g = genus(surface, tolerance)
    edge_count = len(surface.pairings)
    echelon = gf2.IncrementalBasis(edge_count)
    for boundary in vertex_boundaries(surface, tolerance):
        echelon.add(boundary.to_vector(edge_count))
    boundary_rank = echelon.dimension
    basis = [cycle for cycle in cycle_space_basis(surface) if echelon.add(cycle.to_vector(edge_count))]
    logger.debug(f"Cycle space rank {edge_count - len(surface.polygons) + 1}, boundary rank {boundary_rank}, "
                 f"homology rank {len(basis)}")
    if len(basis) != 2 * g:
        raise InvalidSurfaceError("homology.rank", f"Found {len(basis)} homology classes on a genus {g} surface.",
                                  {"rank": len(basis), "genus": g})
    return basis


def ga(surface: HalfTranslationSurface, cycle: Cycle) -> int:
    """The parity of the flip gluings crossed by a cycle: its holonomy in the punctured surface."""
    check_cycle(surface, cycle)
    return sum(surface.pairings[edge].sign == GluingSign.FLIP for edge in cycle.support) % 2


def odd_orders(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> list[int]:
    """The orders of the points where the quadratic differential has odd order."""
    return [cycle.order for cycle in vertex_cycles(surface, tolerance) if cycle.order % 2]


def require_even_orders(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> None:
    """Raise `PreconditionError` if some zero (or pole) has odd order."""
    odd = odd_orders(surface, tolerance)
    if odd:
        raise PreconditionError("homology.odd_order", f"The differential has points of odd order {odd}; Ga is not "
                                "defined on the homology of the closed surface.", {"odd_orders": odd})


def ga_on_homology(surface: HalfTranslationSurface, cycle: Cycle, tolerance: float = DEFAULT_TOLERANCE) -> int:
    """Ga of a cycle on a surface whose orders are all even, where it only depends on the homology class."""
    require_even_orders(surface, tolerance)
    return ga(surface, cycle)


def is_square(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    """Whether the quadratic differential is the square of an abelian differential."""
    if odd_orders(surface, tolerance):
        return False
    return all(ga(surface, cycle) == 0 for cycle in cycle_basis(surface, tolerance))


def _edge_ends(surface: HalfTranslationSurface, cycle: Cycle) -> defaultdict[int, list[tuple[int, bool]]]:
    """Group the edge ends of a cycle by polygon: `(boundary position, is the `a` end)`."""
    ends: defaultdict[int, list[tuple[int, bool]]] = defaultdict(list)
    for edge in cycle.support:
        pairing = surface.pairings[edge]
        ends[pairing.a[0]].append((pairing.a[1], True))
        ends[pairing.b[0]].append((pairing.b[1], False))
    return ends


def intersection_mod2(surface: HalfTranslationSurface, first: Cycle, second: Cycle) -> int:
    """
    The algebraic intersection number of two cycles, mod 2.

    The second cycle is pushed off to one side of every pairing band: just after its `a` end and just before its `b`
    end in the cyclic order around the polygon. Inside a polygon the two cycles are sets of chords, and a chord of the
    second cycle crosses the first cycle an odd number of times exactly when an odd number of the first cycle's ends
    precede it. The sum of these counts over all polygons is the intersection number.
    """
    check_cycle(surface, first)
    check_cycle(surface, second)
    first_ends = _edge_ends(surface, first)
    total = 0
    for node, ends in _edge_ends(surface, second).items():
        positions = np.sort(np.array([position for position, _ in first_ends.get(node, [])], dtype=int))
        for position, after in ends:
            side = "right" if after else "left"
            total += int(np.searchsorted(positions, position, side=side))
    return total % 2


def intersection_matrix(surface: HalfTranslationSurface, cycles: list[Cycle]) -> np.ndarray:
    """The mod 2 Gram matrix of the intersection form on a list of cycles."""
    n = len(cycles)
    matrix = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i, j] = matrix[j, i] = intersection_mod2(surface, cycles[i], cycles[j])
    return matrix


def symplectic_basis(surface: HalfTranslationSurface, tolerance: float = DEFAULT_TOLERANCE) -> SymplecticBasis:
    """
    Turn `cycle_basis` into a symplectic basis by Gram-Schmidt over GF(2).

    Take the first remaining cycle `a`, pair it with the first remaining `b` meeting it once, and replace every other
    remaining `c` by `c + (c . b) a + (c . a) b`, which meets neither.
    """
    remaining = cycle_basis(surface, tolerance)
    form_rank = gf2.rank(intersection_matrix(surface, remaining))
    if form_rank < len(remaining):
        raise InvalidSurfaceError("homology.degenerate_form", "The intersection form is degenerate on the "
                                  "homology basis.", {"rank": form_rank, "basis_size": len(remaining)})
    alphas: list[Cycle] = []
    betas: list[Cycle] = []
    while remaining:
        a = remaining.pop(0)
        # A nondegenerate form keeps a partner for every cycle.
        partner = next(i for i, c in enumerate(remaining) if intersection_mod2(surface, a, c))
        b = remaining.pop(partner)
        updated = []
        for c in remaining:
            if intersection_mod2(surface, c, b):
                c = c + a
            if intersection_mod2(surface, c, a):
                c = c + b
            updated.append(c)
        remaining = updated
        alphas.append(a)
        betas.append(b)
    return SymplecticBasis(tuple(alphas), tuple(betas))


def parity_vector(surface: HalfTranslationSurface, basis: SymplecticBasis,
                  tolerance: float = DEFAULT_TOLERANCE) -> ParityVector:
    """Ga of every cycle of a symplectic basis, as `(a_1, ..., a_g, b_1, ..., b_g)`."""
    require_even_orders(surface, tolerance)
    return ParityVector.from_bits([ga(surface, cycle) for cycle in basis.cycles])
