"""How many connected components a stratum of quadratic differentials has."""
from __future__ import annotations
import logging
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Optional
from lib.errors import PreconditionError
from lib.types import Citation, CountDocType, CountKind

logger = logging.getLogger(__name__)

LOW_GENUS_TWO_COMPONENT_STRATA = {(3, 3, -1, -1), (6, -1, -1)}


@dataclass(frozen=True)
class ComponentCount:
    """Exactly(n), AtLeast(n), AtMost(n) or Unknown, with the result it rests on."""

    kind: CountKind
    value: Optional[int]
    citation: Citation

    def __post_init__(self) -> None:
        """Known counts are positive; unknown counts carry no value."""
        if (self.kind == CountKind.UNKNOWN) != (self.value is None):
            raise ValueError(f"A count of kind {self.kind.value} cannot have value {self.value}.")
        if self.value is not None and self.value < 1:
            raise ValueError(f"A stratum has at least one component, not {self.value}.")

    def to_document(self) -> CountDocType:
        """`{"exactly": 15}`, `{"at_least": 63}`, `{"at_most": 81}` or `{"unknown": null}`."""
        return {self.kind.value: self.value}  # type: ignore[misc]


def _check_orders(orders: Sequence[int]) -> None:
    poles = [order for order in orders if order < -1]
    if poles:
        raise PreconditionError("components.orders", f"Orders {list(orders)} include {poles}; poles are simple, of "
                                "order -1.", {"orders": list(orders)})


def _normalize(genus: int, orders: Sequence[int]) -> tuple[int, ...]:
    if genus < 0:
        raise PreconditionError("components.genus", f"Genus must be non-negative, not {genus}.", {"genus": genus})
    _check_orders(orders)
    if sum(orders) != 4 * genus - 4:
        raise PreconditionError("components.order_sum",
                                f"Orders {list(orders)} sum to {sum(orders)}, not 4g - 4 = {4 * genus - 4}.",
                                {"genus": genus, "orders": list(orders)})
    return tuple(sorted(orders, reverse=True))


def _same(orders: tuple[int, ...], *expected: int) -> bool:
    return Counter(orders) == Counter(expected)


def two_component_family(genus: int, orders: tuple[int, ...]) -> Optional[int]:
    """
    Which of the three families of genus >= 3 strata with two components contains `orders`.

    :return: 1, 2 or 3, or `None` for the strata that are connected.
    """
    _check_orders(orders)
    for k in range(genus + 1):
        if genus - k >= 2 and _same(orders, 4 * (genus - k) - 6, 4 * k + 2):
            return 1
        if genus - k >= 1 and _same(orders, 2 * (genus - k) - 3, 2 * (genus - k) - 3, 4 * k + 2):
            return 2
        if genus - k >= 2 and _same(orders, 2 * (genus - k) - 3, 2 * (genus - k) - 3, 2 * k + 1, 2 * k + 1):
            return 3
    return None


def qd_components(genus: int, orders: Sequence[int]) -> ComponentCount:
    """
    Components of the stratum over the moduli space of curves.

    Every stratum in genus 0 and 1 is connected; in genus 2 only `(3, 3, -1, -1)` and `(6, -1, -1)` have two
    components; from genus 3 on, the strata of three families have two and the rest one. Emptiness is not checked.

    :param orders: Signed orders, -1 for simple poles.
    """
    normalized = _normalize(genus, orders)
    two = (normalized in LOW_GENUS_TWO_COMPONENT_STRATA if genus == 2
           else genus >= 3 and two_component_family(genus, normalized) is not None)
    logger.debug(f"Moduli stratum {list(normalized)} in genus {genus}: {'two components' if two else 'connected'}")
    return ComponentCount(CountKind.EXACTLY, 2 if two else 1, Citation.MODULI_CLASSIFICATION)


def q_components_over_teich(genus: int, orders: Sequence[int]) -> ComponentCount:
    """
    Components of the stratum over Teichmuller space.

    Exact results come first: at least `g` simple zeros make the stratum connected, and at least `g` double zeros
    with all other orders even give exactly `2^{2g} - 1` components. Otherwise all-even strata have at least that many,
    strata with at least `g` triple zeros and all orders divisible by 3 have at most `3^{2g}`, and the rest are unknown.
    """
    if genus <= 1:
        raise PreconditionError("components.genus", f"Strata over Teichmuller space are counted from genus 2, not "
                                f"{genus}.", {"genus": genus})
    normalized = _normalize(genus, orders)
    if any(order < 1 for order in normalized):
        raise PreconditionError("components.meromorphic", f"Orders {list(normalized)} must all be at least 1.",
                                {"orders": list(normalized)})
    counts = Counter(normalized)
    bound = 2 ** (2 * genus) - 1
    all_even = all(order % 2 == 0 for order in normalized)
    if counts[1] >= genus:
        return ComponentCount(CountKind.EXACTLY, 1, Citation.SIMPLE_ZEROS_CONNECTED)
    if all_even and counts[2] >= genus:
        return ComponentCount(CountKind.EXACTLY, bound, Citation.DOUBLE_ZEROS_EXACT)
    if all_even:
        return ComponentCount(CountKind.AT_LEAST, bound, Citation.EVEN_ORDERS_LOWER_BOUND)
    if counts[3] >= genus and all(order % 3 == 0 for order in normalized):
        return ComponentCount(CountKind.AT_MOST, 3 ** (2 * genus), Citation.TRIPLE_ZEROS_UPPER_BOUND)
    return ComponentCount(CountKind.UNKNOWN, None, Citation.UNDETERMINED)
