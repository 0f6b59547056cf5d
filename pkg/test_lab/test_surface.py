"""Test the polygon model of half-translation surfaces."""
import pytest
import copy
import json
import math
import os
import sys
from lib import surface
from lib.errors import InvalidSurfaceError, PreconditionError, SurfaceFormatError
from lib.types import DifferentialKind
from test_lab import fixtures
if "pytest" not in sys.modules:
    sys.exit(f"The script {os.path.basename(__file__)} should only be run by pytest.")


def document(name: str) -> dict:
    """The raw JSON of a fixture."""
    with open(fixtures.surface_path(name)) as file:
        return json.load(file)


def test_parse_square_torus() -> None:
    """Test that the square torus parses into one polygon with two pairings."""
    s = surface.parse_surface(document(fixtures.SQUARE_TORUS))
    assert len(s.polygons) == 1
    assert len(s.pairings) == 2
    assert s.polygons[0] == (1, 1j, -1, -1j)


@pytest.mark.parametrize("change, code", [
    (lambda doc: doc["pairings"][0].update(b=[0, 0]), "surface.self_paired"),
    (lambda doc: doc["pairings"][0].update(b=[0, 7]), "surface.dangling_reference"),
    (lambda doc: doc["pairings"][0].update(b=[3, 0]), "surface.dangling_reference"),
    (lambda doc: doc["pairings"][1].update(b=[0, 2]), "surface.duplicate_slot"),
    (lambda doc: doc["pairings"].pop(), "surface.unpaired_slot"),
    (lambda doc: doc["pairings"][0].update(sign=2), "surface.malformed"),
    (lambda doc: doc["polygons"][0].append([1.0]), "surface.malformed"),
    (lambda doc: doc.pop("polygons"), "surface.malformed"),
])
def test_parse_errors(change, code: str) -> None:
    """Test that broken documents are rejected with the matching code."""
    doc = document(fixtures.SQUARE_TORUS)
    change(doc)
    with pytest.raises(SurfaceFormatError) as error:
        surface.parse_surface(doc)
    assert error.value.code == code


def test_load_surface_missing_file() -> None:
    """Test that a missing file is an input error."""
    with pytest.raises(SurfaceFormatError) as error:
        surface.load_surface(os.path.join("TEMP", "no_such_surface.json"))
    assert error.value.code == "surface.file_not_found"


@pytest.mark.parametrize("name", fixtures.CONNECTED + [fixtures.TWO_SQUARES])
def test_fixtures_are_valid(name: str) -> None:
    """Test that every fixture passes validation."""
    assert surface.validate(fixtures.load(name)) == []


def test_validate_flipped_sign() -> None:
    """Test that a flip between opposite edge vectors breaks compatibility."""
    doc = document(fixtures.SQUARE_TORUS)
    doc["pairings"][0]["sign"] = -1
    violations = surface.validate(surface.parse_surface(doc))
    assert [violation.kind for violation in violations] == ["compatibility"]
    assert violations[0].where == (0,)
    with pytest.raises(InvalidSurfaceError):
        surface.require_valid(surface.parse_surface(doc))


def test_validate_perturbed_octagon() -> None:
    """Test that a perturbed edge leaves the octagon open."""
    doc = document(fixtures.OCTAGON)
    doc["polygons"][0][0][0] += 1e-3
    kinds = {violation.kind for violation in surface.validate(surface.parse_surface(doc))}
    assert "closure" in kinds


def test_validate_orientation_and_zero_edge() -> None:
    """Test that clockwise polygons and zero edges are reported."""
    clockwise = surface.parse_surface({"polygons": [[[0.0, 1.0], [1.0, 0.0], [0.0, -1.0], [-1.0, 0.0]]],
                                       "pairings": [{"a": [0, 0], "b": [0, 2], "sign": 1},
                                                    {"a": [0, 1], "b": [0, 3], "sign": 1}]})
    assert "orientation" in {violation.kind for violation in surface.validate(clockwise)}
    degenerate = surface.parse_surface({"polygons": [[[1.0, 0.0], [0.0, 0.0], [-1.0, 0.0], [0.0, 0.0]]],
                                        "pairings": [{"a": [0, 0], "b": [0, 2], "sign": 1},
                                                     {"a": [0, 1], "b": [0, 3], "sign": 1}]})
    assert "zero_edge" in {violation.kind for violation in surface.validate(degenerate)}


def test_validate_self_intersecting_polygon() -> None:
    """Test that edges crossing edges they do not share a vertex with are reported in pairs."""
    crossed = surface.parse_surface({"polygons": [[[2.0, 0.0], [2.0, 0.0], [0.0, 2.0], [-2.0, -3.0], [-2.0, 3.0],
                                                   [0.0, -2.0]]],
                                     "pairings": [{"a": [0, 0], "b": [0, 1], "sign": -1},
                                                  {"a": [0, 2], "b": [0, 5], "sign": 1},
                                                  {"a": [0, 3], "b": [0, 4], "sign": -1}]})
    simplicity = [violation.where for violation in surface.validate(crossed) if violation.kind == "simplicity"]
    assert simplicity == [(0, 0, 4), (0, 1, 3)]


def test_vertex_cycles() -> None:
    """Test the vertices of the tori and of the octagon."""
    cycles = surface.vertex_cycles(fixtures.load(fixtures.SQUARE_TORUS))
    assert len(cycles) == 1
    assert cycles[0].total_angle == pytest.approx(2 * math.pi)

    cycles = surface.vertex_cycles(fixtures.load(fixtures.OCTAGON))
    assert len(cycles) == 1
    assert len(cycles[0].corners) == 8
    assert cycles[0].total_angle == pytest.approx(6 * math.pi)

    cycles = surface.vertex_cycles(fixtures.load(fixtures.TWO_SQUARE_TORUS))
    assert [cycle.angle_in_half_turns for cycle in cycles] == [2, 2]


@pytest.mark.parametrize("name", fixtures.CONNECTED + [fixtures.TWO_SQUARES])
def test_vertex_cycles_partition_corners(name: str) -> None:
    """Test that every corner belongs to exactly one vertex."""
    s = fixtures.load(name)
    corners = [corner for cycle in surface.vertex_cycles(s) for corner in cycle.corners]
    assert len(corners) == len(set(corners)) == sum(len(polygon) for polygon in s.polygons)


def test_stratum() -> None:
    """Test the strata of the square torus, the octagon and the pillowcase covers."""
    torus = surface.stratum(fixtures.load(fixtures.SQUARE_TORUS))
    assert torus.genus == 1
    assert torus.orders == ()
    octagon = surface.stratum(fixtures.load(fixtures.OCTAGON))
    assert octagon.to_document() == {"kind": "quadratic", "genus": 2, "orders": [4]}
    assert surface.stratum(fixtures.load(fixtures.COVER_Q2_2_2)).to_document()["orders"] == [2, 2]
    assert surface.stratum(fixtures.load(fixtures.CYLINDER_Q2_2)).to_document()["orders"] == [2, 2]
    assert surface.stratum(fixtures.load(fixtures.PILLOW_Q2_1_1_1_1)).orders == (1, 1, 1, 1)
    assert surface.stratum(fixtures.load(fixtures.TORUS_WITH_FLIPS)).to_document() == {"kind": "quadratic",
                                                                                       "genus": 1, "orders": []}


def test_stratum_errors() -> None:
    """Test that poles and disconnected gluings are refused."""
    with pytest.raises(PreconditionError) as error:
        surface.stratum(fixtures.load(fixtures.PILLOW))
    assert error.value.code == "surface.meromorphic"
    with pytest.raises(PreconditionError) as error:
        surface.stratum(fixtures.load(fixtures.TWO_SQUARES))
    assert error.value.code == "surface.disconnected"


def test_stratum_order_sum() -> None:
    """Test that a stratum with the wrong degree cannot be built."""
    with pytest.raises(InvalidSurfaceError):
        surface.Stratum((4,), 3)


@pytest.mark.parametrize("name", fixtures.CONNECTED)
def test_gauss_bonnet(name: str) -> None:
    """Test that the orders of all vertices, poles and regular points included, add up to 4g - 4."""
    s = fixtures.load(name)
    g = surface.genus(s)
    assert sum(cycle.order for cycle in surface.vertex_cycles(s)) == 4 * g - 4
    chi = surface.euler_characteristic(s)
    assert chi % 2 == 0 and chi <= 2


def test_genus_of_fixtures() -> None:
    """Test the genus found from the Euler characteristic."""
    expected = {fixtures.SQUARE_TORUS: 1, fixtures.OCTAGON: 2, fixtures.TWO_SQUARE_TORUS: 1,
                fixtures.TRIANGLE_TORUS: 1, fixtures.PILLOW: 0, fixtures.TORUS_WITH_FLIPS: 1,
                fixtures.COVER_Q2_2_2: 2, fixtures.PILLOW_Q2_1_1_1_1: 2, fixtures.CYLINDER_Q2_2: 2}
    for name, g in expected.items():
        assert surface.genus(fixtures.load(name)) == g, name


def test_is_translation() -> None:
    """Test the abelian stratum of translation surfaces."""
    assert surface.is_translation(fixtures.load(fixtures.SQUARE_TORUS))
    octagon = fixtures.load(fixtures.OCTAGON)
    assert surface.is_translation(octagon)
    abelian = surface.abelian_stratum(octagon)
    assert abelian.kind == DifferentialKind.ABELIAN
    assert abelian.orders == (2,)
    assert not surface.is_translation(fixtures.load(fixtures.PILLOW))
    with pytest.raises(PreconditionError):
        surface.abelian_stratum(fixtures.load(fixtures.TORUS_WITH_FLIPS))


@pytest.mark.parametrize("name", fixtures.CONNECTED)
def test_vertex_holonomy(name: str) -> None:
    """Test that the signs around a vertex multiply to (-1) ** order."""
    s = fixtures.load(name)
    for cycle in surface.vertex_cycles(s):
        assert surface.vertex_holonomy(s, cycle) == (-1) ** cycle.order


@pytest.mark.parametrize("name", fixtures.CONNECTED + [fixtures.TWO_SQUARES])
def test_serialize_round_trip(name: str) -> None:
    """Test that serializing and parsing again gives a valid, equal surface."""
    s = fixtures.load(name)
    text = json.dumps(surface.serialize_surface(s))
    again = surface.parse_surface(json.loads(text))
    assert surface.validate(again) == []
    assert again == s
    assert list(surface.serialize_surface(s)) == ["polygons", "pairings"]


def test_surface_summary() -> None:
    """Test the report of the octagon."""
    summary = surface.surface_summary(fixtures.load(fixtures.OCTAGON))
    assert summary["vertices"] == 1
    assert summary["edges"] == 4
    assert summary["euler_characteristic"] == -2
    assert summary["abelian_stratum"]["orders"] == [2]


def test_documents_are_not_modified() -> None:
    """Test that parsing leaves the document as it was."""
    doc = document(fixtures.OCTAGON)
    before = copy.deepcopy(doc)
    surface.parse_surface(doc)
    assert doc == before
