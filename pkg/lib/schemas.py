"""The JSON schemas of the documents strata-lab reads and writes."""
import json
import logging
import os
from functools import cache
from typing import Any
import jsonschema
from lib.errors import StrataLabError
from lib.types import JSON_TYPE

logger = logging.getLogger(__name__)

SCHEMA_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "schemas.json")


@cache
def _schema_file() -> dict[str, Any]:
    with open(SCHEMA_FILE, encoding="utf-8") as file:
        return json.load(file)


def schema_names() -> list[str]:
    """Every document with a schema: `surface`, `error`, `report` and one per command."""
    return sorted(_schema_file()["$defs"])


def schema(name: str) -> dict[str, Any]:
    """
    The schema of one kind of document.

    :param name: `surface`, `error`, `report` or a command name.
    """
    document = _schema_file()
    if name not in document["$defs"]:
        raise KeyError(f"There is no schema for `{name}` documents.")
    return {**document, "$ref": f"#/$defs/{name}"}


def schema_errors(document: JSON_TYPE, name: str) -> list[str]:
    """Where a document breaks its schema, one message per violation, in document order."""
    validator = jsonschema.Draft202012Validator(schema(name))
    errors = sorted(validator.iter_errors(document), key=lambda error: error.json_path)
    return [f"{error.json_path}: {error.message}" for error in errors]


def check_output(document: JSON_TYPE, name: str) -> None:
    """Raise `StrataLabError` if a document strata-lab produced does not follow its schema."""
    errors = schema_errors(document, name)
    if errors:
        logger.debug(f"{len(errors)} schema violation(s) in a `{name}` document")
        raise StrataLabError("cli.schema", f"The `{name}` output does not follow its schema: {errors[0]}",
                             {"schema": name, "errors": errors})
