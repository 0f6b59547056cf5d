"""Some type hints that can be accessed by all other python files."""
from typing import Any, Union, TypedDict
from enum import Enum, IntEnum

POINT_DOC_TYPE = list[float]
POLYGON_DOC_TYPE = list[POINT_DOC_TYPE]
SLOT_TYPE = tuple[int, int]
PROJECTION_ROW_TYPE = list[int]
BITSTRING_TYPE = str

# Types that still use `Any`.
CONFIG_DICT_TYPE = dict[str, Any]
CONTEXT_TYPE = dict[str, Any]
JSON_TYPE = Union[dict[str, Any], list[Any], str, int, float, bool, None]


class GluingSign(IntEnum):
    """How two polygon edges are identified."""

    TRANSLATION = 1
    FLIP = -1


class DifferentialKind(str, Enum):
    """Whether orders count zeros of a quadratic or of an abelian differential."""

    QUADRATIC = "quadratic"
    ABELIAN = "abelian"


class CountKind(str, Enum):
    """The shape of a component count."""

    EXACTLY = "exactly"
    AT_LEAST = "at_least"
    AT_MOST = "at_most"
    UNKNOWN = "unknown"


class Citation(str, Enum):
    """The result a component count rests on."""

    MODULI_CLASSIFICATION = "quadratic-moduli-classification"
    SIMPLE_ZEROS_CONNECTED = "simple-zeros-connected"
    DOUBLE_ZEROS_EXACT = "double-zeros-exact"
    EVEN_ORDERS_LOWER_BOUND = "even-orders-lower-bound"
    TRIPLE_ZEROS_UPPER_BOUND = "triple-zeros-upper-bound"
    UNDETERMINED = "undetermined"


class Space(str, Enum):
    """Which space of differentials a component count is about."""

    TEICH = "teich"
    MODULI = "moduli"


class Shift(str, Enum):
    """Which constant is subtracted from the Weierstrass function."""

    NONE = "none"
    H1 = "h1"
    H2 = "h2"
    H3 = "h3"


class CycleName(str, Enum):
    """The two straight loops on a torus."""

    ALPHA = "alpha"
    BETA = "beta"


class PairingDocType(TypedDict):
    """Type hint for one entry of `pairings` in a surface document."""

    a: list[int]
    b: list[int]
    sign: int


class SurfaceDocType(TypedDict):
    """Type hint for a surface document."""

    polygons: list[POLYGON_DOC_TYPE]
    pairings: list[PairingDocType]


class DoubleCoverDocType(TypedDict):
    """Type hint for a serialized double cover."""

    surface: SurfaceDocType
    projection: list[PROJECTION_ROW_TYPE]
    connected: bool


class ViolationDocType(TypedDict):
    """Type hint for a validation violation."""

    kind: str
    message: str
    where: list[int]


class StratumDocType(TypedDict):
    """Type hint for a stratum."""

    kind: str
    genus: int
    orders: list[int]


class CountDocType(TypedDict, total=False):
    """Type hint for a component count."""

    exactly: int
    at_least: int
    at_most: int
    unknown: None


class ErrorDocType(TypedDict):
    """Type hint for the error document printed by the command line."""

    code: str
    message: str
    context: CONTEXT_TYPE


class ReportType(TypedDict):
    """Type hint for a reproducibility report."""

    command: str
    inputs: CONTEXT_TYPE
    tolerances: dict[str, float]
    versions: dict[str, str]
    outputs: JSON_TYPE
