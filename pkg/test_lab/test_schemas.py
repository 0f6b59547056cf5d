"""Test the shipped JSON schemas."""
import pytest
import json
import os
import sys
from lib import cover, schemas, surface
from lib.errors import StrataLabError, SurfaceFormatError
from test_lab import fixtures
if "pytest" not in sys.modules:
    sys.exit(f"The script {os.path.basename(__file__)} should only be run by pytest.")


@pytest.mark.parametrize("name", fixtures.CONNECTED + [fixtures.TWO_SQUARES])
def test_fixtures_follow_the_surface_schema(name: str) -> None:
    """Test every surface file, and its serialized form, against the surface schema."""
    with open(fixtures.surface_path(name)) as file:
        assert schemas.schema_errors(json.load(file), "surface") == []
    assert schemas.schema_errors(surface.serialize_surface(fixtures.load(name)), "surface") == []


def test_cover_surface_follows_the_schema() -> None:
    """Test that the surface inside a cover document is a surface document."""
    d = cover.double_cover(fixtures.load(fixtures.COVER_Q2_2_2))
    document = json.loads(json.dumps(cover.cover_to_document(d)))
    assert schemas.schema_errors(document["surface"], "surface") == []


@pytest.mark.parametrize("change", [
    lambda doc: doc.update(name="torus"),
    lambda doc: doc["pairings"][0].update(sign=0),
    lambda doc: doc["pairings"][1].pop("b"),
    lambda doc: doc["polygons"][0].append([1.0, 2.0, 3.0]),
    lambda doc: doc["pairings"][0].update(a=[0, -1]),
])
def test_surface_file_breaking_the_schema(change) -> None:
    """Test that a surface file that breaks the schema is refused with the violations."""
    with open(fixtures.surface_path(fixtures.SQUARE_TORUS)) as file:
        document = json.load(file)
    change(document)
    os.makedirs("TEMP", exist_ok=True)
    path = os.path.join("TEMP", "off_schema.json")
    with open(path, "w") as file:
        json.dump(document, file)
    with pytest.raises(SurfaceFormatError) as error:
        surface.load_surface(path)
    assert error.value.code == "surface.malformed"
    assert error.value.context["errors"]


def test_check_output() -> None:
    """Test that an output missing a key or with a wrong value is an internal error."""
    schemas.check_output({"valid": True, "polygons": 1, "pairings": 2, "connected": True}, "validate")
    with pytest.raises(StrataLabError) as error:
        schemas.check_output({"valid": True, "polygons": 1, "pairings": 2}, "validate")
    assert error.value.code == "cli.schema"
    with pytest.raises(StrataLabError) as error:
        schemas.check_output({"cycle": [0], "ga": 2}, "ga")
    assert error.value.context["schema"] == "ga"


def test_bitstrings_and_counts() -> None:
    """Test the shared pieces of the command schemas."""
    orbit = {"genus": 1, "seed": "10", "generators": [{"name": "alpha1", "class": "10"}], "orbit_size": 3,
             "vectors": ["01", "10", "11"]}
    assert schemas.schema_errors(orbit, "orbit") == []
    assert schemas.schema_errors(orbit | {"seed": "101"}, "orbit")
    assert schemas.schema_errors(orbit | {"word": None}, "orbit") == []
    components = {"genus": 3, "orders": [8], "space": "teich", "theorem": "even-orders-lower-bound"}
    assert schemas.schema_errors(components | {"count": {"at_least": 63}}, "components") == []
    assert schemas.schema_errors(components | {"count": {"unknown": None}}, "components") == []
    assert schemas.schema_errors(components | {"count": {"exactly": 0}}, "components")
    assert schemas.schema_errors(components | {"count": {"exactly": 2, "at_least": 2}}, "components")


def test_unknown_schema() -> None:
    """Test that asking for a document without a schema fails."""
    with pytest.raises(KeyError):
        schemas.schema("foliation")
