"""Test mod 2 homology, the intersection form and Ga."""
import pytest
import itertools
import os
import sys
import numpy as np
from lib import gf2, homology, surface
from lib.cover import double_cover
from lib.errors import InvalidSurfaceError, PreconditionError
from lib.homology import Cycle
from lib.twist import orbit, standard_generators
from test_lab import fixtures
if "pytest" not in sys.modules:
    sys.exit(f"The script {os.path.basename(__file__)} should only be run by pytest.")


def test_gf2_rank_and_kernel() -> None:
    """Test elimination over GF(2) on a small matrix."""
    m = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 0]], dtype=np.uint8)
    assert gf2.rank(m) == 2
    kernel = gf2.kernel_basis(m)
    assert kernel.shape == (2, 4)
    assert not (m.astype(int) @ kernel.T.astype(int) % 2).any()


def test_incremental_basis() -> None:
    """Test that dependent vectors are refused."""
    basis = gf2.IncrementalBasis(3)
    assert basis.add(np.array([1, 1, 0]))
    assert basis.add(np.array([0, 1, 1]))
    assert not basis.add(np.array([1, 0, 1]))
    assert not basis.reduce(np.array([1, 0, 1])).any()
    assert basis.dimension == 2


def test_dual_graph() -> None:
    """Test node and edge counts of dual graphs."""
    square = homology.dual_graph(fixtures.load(fixtures.SQUARE_TORUS))
    assert (square.node_count, square.edge_count) == (1, 2)
    octagon = homology.dual_graph(fixtures.load(fixtures.OCTAGON))
    assert (octagon.node_count, octagon.edge_count) == (1, 4)
    assert octagon.rotation == ((0, 1, 2, 3, 0, 1, 2, 3),)
    triangles = homology.dual_graph(fixtures.load(fixtures.TRIANGLE_TORUS))
    assert (triangles.node_count, triangles.edge_count) == (2, 3)
    with pytest.raises(PreconditionError) as error:
        homology.dual_graph(fixtures.load(fixtures.TWO_SQUARES))
    assert error.value.code == "homology.disconnected"


@pytest.mark.parametrize("name, rank", [(fixtures.SQUARE_TORUS, 2), (fixtures.OCTAGON, 4), (fixtures.PILLOW, 0),
                                        (fixtures.TWO_SQUARE_TORUS, 2), (fixtures.TRIANGLE_TORUS, 2),
                                        (fixtures.TORUS_WITH_FLIPS, 2), (fixtures.COVER_Q2_2_2, 4),
                                        (fixtures.PILLOW_Q2_1_1_1_1, 4), (fixtures.CYLINDER_Q2_2, 4)])
def test_cycle_basis_size(name: str, rank: int) -> None:
    """Test that the homology basis has 2g cycles."""
    s = fixtures.load(name)
    basis = homology.cycle_basis(s)
    assert len(basis) == rank == 2 * surface.genus(s)
    for cycle in basis:
        homology.check_cycle(s, cycle)


def test_square_torus_basis_is_the_two_loops() -> None:
    """Test that the two loop edges span the homology of the square torus."""
    basis = homology.cycle_basis(fixtures.load(fixtures.SQUARE_TORUS))
    assert sorted(cycle.to_document() for cycle in basis) == [[0], [1]]


def test_check_cycle() -> None:
    """Test that chains with a boundary or foreign edges are refused."""
    s = fixtures.load(fixtures.COVER_Q2_2_2)
    with pytest.raises(PreconditionError) as error:
        homology.ga(s, Cycle.of([0]))
    assert error.value.code == "homology.not_a_cycle"
    with pytest.raises(PreconditionError) as error:
        homology.ga(s, Cycle.of([40]))
    assert error.value.code == "homology.unknown_edge"
    assert Cycle.of([0, 8, 8]) == Cycle.of([0])


def test_ga_examples() -> None:
    """Test Ga on translation surfaces and on single flip loops."""
    octagon = fixtures.load(fixtures.OCTAGON)
    assert all(homology.ga(octagon, cycle) == 0 for cycle in homology.cycle_basis(octagon))
    pillow = fixtures.load(fixtures.PILLOW)
    assert homology.ga(pillow, Cycle.of([0])) == 1
    assert homology.ga(pillow, Cycle.of([2])) == 0
    cover = fixtures.load(fixtures.COVER_Q2_2_2)
    assert homology.ga(cover, Cycle.of([0, 8])) == 1
    assert homology.ga(cover, Cycle.of([8, 9, 10, 11])) == 0


@pytest.mark.parametrize("name", fixtures.CONNECTED)
def test_ga_is_linear(name: str) -> None:
    """Test that Ga adds up over sums of cycles."""
    s = fixtures.load(name)
    cycles = fixtures.random_cycles(s, 200, seed=7)
    for first, second in zip(cycles[::2], cycles[1::2]):
        total = first + second
        if total.support:
            assert homology.ga(s, total) == (homology.ga(s, first) + homology.ga(s, second)) % 2
        else:
            assert homology.ga(s, first) == homology.ga(s, second)


@pytest.mark.parametrize("name", fixtures.ALL_EVEN)
def test_ga_on_homology_is_well_defined(name: str) -> None:
    """Test that the loop around every vertex has Ga 0, so Ga only depends on the class."""
    s = fixtures.load(name)
    boundaries = homology.vertex_boundaries(s)
    for boundary in boundaries:
        if boundary.support:
            assert homology.ga(s, boundary) == 0
    rng = np.random.default_rng(11)
    for cycle in fixtures.random_cycles(s, 100, seed=13):
        boundary = boundaries[int(rng.integers(len(boundaries)))]
        shifted = cycle + boundary
        if shifted.support:
            assert homology.ga_on_homology(s, shifted) == homology.ga_on_homology(s, cycle)


def test_ga_on_homology_refuses_odd_orders() -> None:
    """Test that Ga is not a homology invariant when some order is odd."""
    s = fixtures.load(fixtures.PILLOW_Q2_1_1_1_1)
    assert homology.odd_orders(s) == [1, 1, 1, 1]
    with pytest.raises(PreconditionError) as error:
        homology.ga_on_homology(s, homology.cycle_basis(s)[0])
    assert error.value.code == "homology.odd_order"


@pytest.mark.parametrize("name, square", [(fixtures.SQUARE_TORUS, True), (fixtures.OCTAGON, True),
                                          (fixtures.TORUS_WITH_FLIPS, True), (fixtures.COVER_Q2_2_2, False),
                                          (fixtures.PILLOW_Q2_1_1_1_1, False), (fixtures.PILLOW, False),
                                          (fixtures.CYLINDER_Q2_2, False)])
def test_is_square_matches_cover(name: str, square: bool) -> None:
    """Test that a differential is a square exactly when its double cover falls apart."""
    s = fixtures.load(name)
    assert homology.is_square(s) is square
    assert double_cover(s).connected is not square


def test_intersection_examples() -> None:
    """Test the intersection numbers of simple loops."""
    torus = fixtures.load(fixtures.SQUARE_TORUS)
    meridian, longitude = Cycle.of([0]), Cycle.of([1])
    assert homology.intersection_mod2(torus, meridian, longitude) == 1
    assert homology.intersection_mod2(torus, longitude, meridian) == 1
    assert homology.intersection_mod2(torus, meridian, meridian) == 0
    two_squares = fixtures.load(fixtures.TWO_SQUARE_TORUS)
    assert homology.intersection_mod2(two_squares, Cycle.of([2]), Cycle.of([3])) == 0
    assert homology.intersection_mod2(two_squares, Cycle.of([2]), Cycle.of([0, 1])) == 1


@pytest.mark.parametrize("name", [fixtures.SQUARE_TORUS, fixtures.OCTAGON, fixtures.TWO_SQUARE_TORUS,
                                  fixtures.TRIANGLE_TORUS, fixtures.TORUS_WITH_FLIPS, fixtures.COVER_Q2_2_2,
                                  fixtures.PILLOW_Q2_1_1_1_1, fixtures.CYLINDER_Q2_2])
def test_intersection_form_is_nondegenerate(name: str) -> None:
    """Test that the Gram matrix on the homology basis is symmetric of full rank."""
    s = fixtures.load(name)
    basis = homology.cycle_basis(s)
    gram = homology.intersection_matrix(s, basis)
    assert (gram == gram.T).all()
    assert gf2.rank(gram) == len(basis)


def test_octagon_gram_matrix() -> None:
    """Test that any two different sides of the octagon meet once."""
    s = fixtures.load(fixtures.OCTAGON)
    loops = [Cycle.of([k]) for k in range(4)]
    expected = np.ones((4, 4), dtype=np.uint8) - np.eye(4, dtype=np.uint8)
    assert (homology.intersection_matrix(s, loops) == expected).all()


def test_symplectic_basis_of_a_degenerate_basis(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that a basis on which the intersection form is degenerate is refused before pairing."""
    s = fixtures.load(fixtures.OCTAGON)
    repeated = [Cycle.of([0]), Cycle.of([0]), Cycle.of([1]), Cycle.of([2])]
    monkeypatch.setattr(homology, "cycle_basis", lambda surface, tolerance: repeated)
    with pytest.raises(InvalidSurfaceError) as error:
        homology.symplectic_basis(s)
    assert error.value.code == "homology.degenerate_form"
    assert error.value.context == {"rank": 2, "basis_size": 4}


@pytest.mark.parametrize("name", fixtures.CONNECTED)
def test_intersection_is_bilinear(name: str) -> None:
    """Test additivity in both arguments on random cycles."""
    s = fixtures.load(name)
    cycles = fixtures.random_cycles(s, 60, seed=3)
    for a, b, c in zip(cycles[0::3], cycles[1::3], cycles[2::3]):
        if (b + c).support:
            expected = (homology.intersection_mod2(s, a, b) + homology.intersection_mod2(s, a, c)) % 2
            assert homology.intersection_mod2(s, a, b + c) == expected
            assert homology.intersection_mod2(s, b + c, a) == expected


@pytest.mark.parametrize("name", [fixtures.SQUARE_TORUS, fixtures.OCTAGON, fixtures.TORUS_WITH_FLIPS,
                                  fixtures.COVER_Q2_2_2, fixtures.PILLOW_Q2_1_1_1_1, fixtures.CYLINDER_Q2_2])
def test_symplectic_basis(name: str) -> None:
    """Test that the basis is symplectic."""
    s = fixtures.load(name)
    basis = homology.symplectic_basis(s)
    assert basis.genus == surface.genus(s)
    for (i, a), (j, b) in itertools.product(enumerate(basis.alphas), enumerate(basis.betas)):
        assert homology.intersection_mod2(s, a, b) == (i == j)
    for group in (basis.alphas, basis.betas):
        for x, y in itertools.combinations(group, 2):
            assert homology.intersection_mod2(s, x, y) == 0


def test_symplectic_basis_of_a_sphere() -> None:
    """Test that the pillowcase has an empty basis."""
    basis = homology.symplectic_basis(fixtures.load(fixtures.PILLOW))
    assert basis.genus == 0
    assert basis.cycles == ()


def test_parity_vector() -> None:
    """Test parity vectors of a square and of a non-square differential."""
    octagon = fixtures.load(fixtures.OCTAGON)
    assert homology.parity_vector(octagon, homology.symplectic_basis(octagon)).bitstring == "0000"

    s = fixtures.load(fixtures.COVER_Q2_2_2)
    basis = homology.symplectic_basis(s)
    vector = homology.parity_vector(s, basis)
    assert not vector.is_zero()
    assert all(not v.is_zero() for v in orbit(vector, standard_generators(2)))

    swapped = homology.SymplecticBasis(basis.alphas[::-1], basis.betas[::-1])
    a1, a2, b1, b2 = vector.coordinates
    assert homology.parity_vector(s, swapped).coordinates == (a2, a1, b2, b1)

    with pytest.raises(PreconditionError):
        homology.parity_vector(fixtures.load(fixtures.PILLOW_Q2_1_1_1_1), basis)


@pytest.mark.parametrize("name", fixtures.NON_SQUARE_EVEN)
def test_parity_vector_is_nonzero_for_every_ordering(name: str) -> None:
    """Test that a non-square differential never has a zero parity vector, whatever the edge order."""
    s = fixtures.load(name)
    rng = np.random.default_rng(5)
    for _ in range(10):
        order = rng.permutation(len(s.pairings))
        shuffled = surface.HalfTranslationSurface(s.polygons, tuple(s.pairings[int(i)] for i in order))
        assert not homology.parity_vector(shuffled, homology.symplectic_basis(shuffled)).is_zero()
