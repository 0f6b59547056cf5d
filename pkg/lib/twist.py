"""
Dehn twists acting on parity vectors.

A parity vector records Ga on a symplectic basis `(a_1, ..., a_g, b_1, ..., b_g)`. It is packed into an int whose most
significant of `2g` bits is `a_1`, so the bitstring `"a1..ag b1..bg"` reads the int in binary. Twisting along a curve
of class `c` sends every class `d` to `d + (c . d) c`, so the new parity of `d` gains `(c . d) Ga(c)`.
"""
from __future__ import annotations
import logging
import numpy as np
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Optional, Union
from lib.errors import PreconditionError
from lib.types import BITSTRING_TYPE

logger = logging.getLogger(__name__)

MAX_PACKED_GENUS = 30
MAX_ORBIT_GENUS = 12  # The visited bitset has 2 ** (2g) entries.


def _check_genus(genus: int, minimum: int = 1) -> None:
    if not minimum <= genus <= MAX_PACKED_GENUS:
        raise PreconditionError("twist.genus", f"Genus must be between {minimum} and {MAX_PACKED_GENUS}, not {genus}.",
                                {"genus": genus})


@dataclass(frozen=True, order=True)
class ParityVector:
    """An element of Z_2^{2g}, ordered `(a_1, ..., a_g, b_1, ..., b_g)`."""

    genus: int
    bits: int

    def __post_init__(self) -> None:
        """Check that the bits fit in `2g` coordinates."""
        _check_genus(self.genus)
        if not 0 <= self.bits < 1 << (2 * self.genus):
            raise PreconditionError("twist.length_mismatch",
                                    f"{self.bits} does not fit in {2 * self.genus} coordinates.",
                                    {"genus": self.genus, "bits": self.bits})

    @classmethod
    def from_bits(cls, coordinates: Sequence[int]) -> ParityVector:
        """Build a vector from its coordinates `a_1, ..., a_g, b_1, ..., b_g`."""
        if not coordinates or len(coordinates) % 2:
            raise PreconditionError("twist.length_mismatch", f"A parity vector needs an even, positive number of "
                                    f"coordinates, not {len(coordinates)}.", {"length": len(coordinates)})
        bits = 0
        for coordinate in coordinates:
            bits = (bits << 1) | (int(coordinate) & 1)
        return cls(len(coordinates) // 2, bits)

    @classmethod
    def from_bitstring(cls, text: BITSTRING_TYPE) -> ParityVector:
        """Parse a bitstring such as `"1000"`; spaces are ignored."""
        digits = text.replace(" ", "")
        if not digits or any(digit not in "01" for digit in digits):
            raise PreconditionError("twist.bitstring", f"`{text}` is not a string of zeros and ones.", {"text": text})
        return cls.from_bits([int(digit) for digit in digits])

    @property
    def coordinates(self) -> tuple[int, ...]:
        """The coordinates `a_1, ..., a_g, b_1, ..., b_g`."""
        n = 2 * self.genus
        return tuple((self.bits >> (n - 1 - j)) & 1 for j in range(n))

    @property
    def bitstring(self) -> BITSTRING_TYPE:
        """The coordinates as a string of zeros and ones."""
        return format(self.bits, f"0{2 * self.genus}b")

    def is_zero(self) -> bool:
        """Whether every coordinate vanishes."""
        return self.bits == 0

    def __str__(self) -> str:
        """The bitstring."""
        return self.bitstring


@dataclass(frozen=True)
class TwistGenerator:
    """The homology class, in the standard basis, of a curve to twist along."""

    genus: int
    bits: int
    name: str = ""

    def __post_init__(self) -> None:
        """A twist along a null-homologous curve does nothing to parities."""
        _check_genus(self.genus)
        if not 0 < self.bits < 1 << (2 * self.genus):
            raise PreconditionError("twist.generator", f"{self.bits} is not a non-zero class in genus {self.genus}.",
                                    {"genus": self.genus, "bits": self.bits})

    @classmethod
    def from_bitstring(cls, text: BITSTRING_TYPE, name: str = "") -> TwistGenerator:
        """Parse the class of the twisting curve from a bitstring."""
        vector = ParityVector.from_bitstring(text)
        return cls(vector.genus, vector.bits, name or vector.bitstring)

    @property
    def bitstring(self) -> BITSTRING_TYPE:
        """The class as a string of zeros and ones."""
        return format(self.bits, f"0{2 * self.genus}b")


ClassLike = Union[ParityVector, TwistGenerator, int]


def _bits(value: ClassLike, genus: int) -> int:
    if isinstance(value, int):
        if not 0 <= value < 1 << (2 * genus):
            raise PreconditionError("twist.length_mismatch", f"{value} does not fit in {2 * genus} coordinates.",
                                    {"genus": genus, "bits": value})
        return value
    if value.genus != genus:
        raise PreconditionError("twist.length_mismatch",
                                f"Expected {2 * genus} coordinates, got {2 * value.genus}.",
                                {"expected": 2 * genus, "got": 2 * value.genus})
    return value.bits


def _swap_halves(bits: int, genus: int) -> int:
    """The vector `(b, a)` for `(a, b)`: pairing with it is the symplectic form."""
    mask = (1 << genus) - 1
    return ((bits & mask) << genus) | (bits >> genus)


def sympl(genus: int, x: ClassLike, y: ClassLike) -> int:
    """The standard symplectic form `sum_i x_{a_i} y_{b_i} + x_{b_i} y_{a_i}` mod 2."""
    _check_genus(genus)
    return (_bits(x, genus) & _swap_halves(_bits(y, genus), genus)).bit_count() & 1


def ga_of_class(vector: ParityVector, c: ClassLike) -> int:
    """Ga of the class `c`, extended linearly from the basis values in `vector`."""
    return (vector.bits & _bits(c, vector.genus)).bit_count() & 1


def twist_action(vector: ParityVector, generator: TwistGenerator) -> ParityVector:
    """
    The parity vector of the basis after a Dehn twist along `generator`.

    Coordinate `j` gains `sympl(c, e_j) * Ga(c)`; this is an involution.
    """
    bits = _bits(generator, vector.genus)
    if ga_of_class(vector, bits):
        return ParityVector(vector.genus, vector.bits ^ _swap_halves(bits, vector.genus))
    return vector


def standard_generators(genus: int) -> list[TwistGenerator]:
    """
    The basis curves `a_i`, `b_i` and the chain curves `c_i` homologous to `a_i + a_{i+1}`.

    :return: `3g - 1` generators: all alphas, then all betas, then the chain curves.
    """
    _check_genus(genus)
    n = 2 * genus
    alphas = [TwistGenerator(genus, 1 << (n - 1 - i), f"alpha{i + 1}") for i in range(genus)]
    betas = [TwistGenerator(genus, 1 << (genus - 1 - i), f"beta{i + 1}") for i in range(genus)]
    chains = [TwistGenerator(genus, alphas[i].bits | alphas[i + 1].bits, f"gamma{i + 1}") for i in range(genus - 1)]
    return alphas + betas + chains


def _check_orbit_input(seed: ParityVector, generators: Sequence[TwistGenerator]) -> None:
    if seed.is_zero():
        raise PreconditionError("twist.zero_seed", "The zero parity vector is fixed by every twist.",
                                {"seed": seed.bitstring})
    if seed.genus > MAX_ORBIT_GENUS:
        raise PreconditionError("twist.genus", f"Orbits are enumerated up to genus {MAX_ORBIT_GENUS}.",
                                {"genus": seed.genus})
    for generator in generators:
        _bits(generator, seed.genus)


def orbit(seed: ParityVector, generators: Sequence[TwistGenerator]) -> list[ParityVector]:
    """
    All parity vectors reachable from `seed` by twists.

    The search goes level by level, each frontier sorted, so the discovery order only depends on the input.

    :return: The orbit in discovery order, starting with `seed`.
    """
    _check_orbit_input(seed, generators)
    genus = seed.genus
    visited = np.zeros(1 << (2 * genus), dtype=bool)
    swapped = [(generator.bits, _swap_halves(generator.bits, genus)) for generator in generators]
    visited[seed.bits] = True
    found = [seed.bits]
    frontier = [seed.bits]
    while frontier:
        next_frontier = []
        for bits in frontier:
            for c, image in swapped:
                if (bits & c).bit_count() & 1:
                    twisted = bits ^ image
                    if not visited[twisted]:
                        visited[twisted] = True
                        next_frontier.append(twisted)
        next_frontier.sort()
        found.extend(next_frontier)
        frontier = next_frontier
    logger.debug(f"Orbit of {seed.bitstring} under {len(generators)} twists has {len(found)} elements")
    return [ParityVector(genus, bits) for bits in found]


def twist_word(seed: ParityVector, target: ParityVector,
               generators: Sequence[TwistGenerator]) -> Optional[list[int]]:
    """
    A shortest sequence of twists carrying `seed` to `target`.

    :return: Indices into `generators`, applied left to right, or `None` if `target` is not in the orbit.
    """
    _check_orbit_input(seed, generators)
    _bits(target, seed.genus)
    parent: dict[int, tuple[int, int]] = {}
    queue = deque([seed.bits])
    seen = {seed.bits}
    while queue:
        bits = queue.popleft()
        if bits == target.bits:
            word: list[int] = []
            while bits != seed.bits:
                bits, index = parent[bits]
                word.append(index)
            return word[::-1]
        vector = ParityVector(seed.genus, bits)
        for index, generator in enumerate(generators):
            twisted = twist_action(vector, generator).bits
            if twisted not in seen:
                seen.add(twisted)
                parent[twisted] = (bits, index)
                queue.append(twisted)
    return None
