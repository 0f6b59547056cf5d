"""Surfaces shared by the tests."""
import os
import numpy as np
from lib.homology import Cycle, cycle_space_basis
from lib.surface import HalfTranslationSurface, load_surface

SURFACE_DIRECTORY = os.path.join(os.path.dirname(os.path.abspath(__file__)), "surfaces")

SQUARE_TORUS = "square_torus"
OCTAGON = "octagon"
TWO_SQUARE_TORUS = "two_square_torus"
TRIANGLE_TORUS = "triangle_torus"
PILLOW = "pillow"
TORUS_WITH_FLIPS = "torus_with_flips"
COVER_Q2_2_2 = "cover_q2_2_2"
PILLOW_Q2_1_1_1_1 = "pillow_q2_1_1_1_1"
TWO_SQUARES = "two_squares"
CYLINDER_Q2_2 = "cylinder_q2_2"

CONNECTED = [SQUARE_TORUS, OCTAGON, TWO_SQUARE_TORUS, TRIANGLE_TORUS, PILLOW, TORUS_WITH_FLIPS, COVER_Q2_2_2,
             PILLOW_Q2_1_1_1_1, CYLINDER_Q2_2]
ALL_EVEN = [SQUARE_TORUS, OCTAGON, TWO_SQUARE_TORUS, TRIANGLE_TORUS, TORUS_WITH_FLIPS, COVER_Q2_2_2,
            CYLINDER_Q2_2]
# Even orders, not the square of an abelian differential.
NON_SQUARE_EVEN = [COVER_Q2_2_2, CYLINDER_Q2_2]


def surface_path(name: str) -> str:
    """The path of a fixture file."""
    return os.path.join(SURFACE_DIRECTORY, f"{name}.json")


def load(name: str) -> HalfTranslationSurface:
    """Load a fixture by name."""
    return load_surface(surface_path(name))


def random_cycles(surface: HalfTranslationSurface, count: int, seed: int) -> list[Cycle]:
    """Random non-empty sums of cycle-space basis vectors."""
    rng = np.random.default_rng(seed)
    basis = cycle_space_basis(surface)
    cycles: list[Cycle] = []
    while len(cycles) < count:
        cycle = Cycle(frozenset())
        for element, pick in zip(basis, rng.integers(0, 2, len(basis))):
            if pick:
                cycle = cycle + element
        if cycle.support:
            cycles.append(cycle)
    return cycles
