"""
Quadratic differentials `(P - e) dz^2` on the torus C / (Z + tau Z), and Ga computed from winding numbers.

Along a loop `c`, the square root of `f dz^2` comes back to itself exactly when `f` winds an even number of times
around 0, so Ga(c) is the winding number of `f` along `c`, mod 2.
"""
from __future__ import annotations
import cmath
import logging
import math
import numpy as np
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional
from lib.errors import NumericalError, PreconditionError
from lib.surface import Stratum
from lib.twist import ParityVector, TwistGenerator, twist_action
from lib.types import CycleName, Shift
from lib.weierstrass import (DEFAULT_MAX_ROWS, DEFAULT_TOLERANCE, Tau, ZeroPair, double_zero_half_period, find_zeros,
                             halfperiod_values, weierstrass_p)

logger = logging.getLogger(__name__)

SHIFTS = (Shift.H1, Shift.H2, Shift.H3)
OFFSET_CANDIDATES = tuple(k / 8 for k in range(1, 8))


@dataclass(frozen=True)
class TorusSettings:
    """Numerical parameters shared by the torus computations; the defaults match `config.yml.default`."""

    tolerance: float = DEFAULT_TOLERANCE
    samples: int = 512
    clearance: float = 0.05
    grid_size: int = 48
    max_newton_iterations: int = 100
    max_lattice_rows: int = DEFAULT_MAX_ROWS
    max_bisections: int = 40


@dataclass(frozen=True)
class TorusDifferential:
    """`(P - e) dz^2`, where `e` is 0 or the value of P at one of the half-periods."""

    tau: Tau
    shift: Shift = Shift.NONE
    settings: TorusSettings = field(default_factory=TorusSettings)

    @cached_property
    def constant(self) -> complex:
        """The constant `e` subtracted from P, computed once per differential."""
        if self.shift == Shift.NONE:
            return 0j
        values = halfperiod_values(self.tau, self.settings.tolerance, self.settings.max_lattice_rows)
        return values[SHIFTS.index(self.shift)]

    def __call__(self, z: np.ndarray) -> np.ndarray:
        """The coefficient `P(z) - e`."""
        values = weierstrass_p(np.asarray(z, dtype=complex), self.tau, self.settings.tolerance,
                               self.settings.max_lattice_rows)
        return values - self.constant

    def double_zero(self) -> Optional[complex]:
        """The half-period carrying the double zero, or `None` when the two zeros are simple."""
        if self.shift != Shift.NONE:
            return self.tau.half_periods[SHIFTS.index(self.shift)]
        index = double_zero_half_period(self.tau, 0j, self.settings.tolerance, self.settings.max_lattice_rows)
        return None if index is None else self.tau.half_periods[index]

    def zeros(self) -> ZeroPair:
        """The two zeros, counted with multiplicity."""
        settings = self.settings
        return find_zeros(self.tau, self.constant, settings.tolerance, settings.grid_size,
                          settings.max_newton_iterations, settings.max_lattice_rows)


@dataclass(frozen=True)
class TorusCycle:
    """A straight loop: `offset + t tau` for alpha, `offset + t` for beta, with `t` in [0, 1]."""

    which: CycleName
    offset: complex = 0j

    def points(self, tau: Tau, t: np.ndarray) -> np.ndarray:
        """Points of the loop at the parameters `t`."""
        step = tau.value if self.which == CycleName.ALPHA else 1
        return self.offset + np.asarray(t, dtype=float) * step


@dataclass(frozen=True)
class WindingResult:
    """How many times `f` winds around 0 along a loop, with what it took to find out."""

    winding: int
    total_angle: float
    evaluations: int
    min_modulus: float

    @property
    def ga(self) -> int:
        """The winding number mod 2."""
        return self.winding % 2


def torus_stratum(d: TorusDifferential) -> Stratum:
    """`Q_1(-2, 2)` when the zero is double, `Q_1(-2, 1, 1)` otherwise."""
    orders = (2, -2) if d.zeros().double else (1, 1, -2)
    return Stratum(orders, 1)


def _singularities(d: TorusDifferential) -> list[complex]:
    zero = d.double_zero()
    if zero is not None:
        return [0j, zero]
    pair = d.zeros()
    return [0j, pair.first, pair.second]


def _circular(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x) % 1.0
    return np.minimum(x, 1.0 - x)


def loop_clearance(d: TorusDifferential, c: TorusCycle, singularities: Optional[list[complex]] = None) -> float:
    """The distance from a loop to the nearest zero or pole."""
    tau = d.tau
    points = np.array(_singularities(d) if singularities is None else singularities, dtype=complex)
    s, t = tau.coordinates(points)
    s0, t0 = tau.coordinates(c.offset)
    if c.which == CycleName.ALPHA:
        return float(np.min(_circular(s - s0))) * tau.value.imag / abs(tau.value)
    return float(np.min(_circular(t - t0))) * tau.value.imag


def choose_cycle(d: TorusDifferential, which: CycleName) -> TorusCycle:
    """
    The loop of the given class farthest from the zeros and poles.

    An alpha loop is `s + t tau` for a fixed `s` among the eighths of the unit interval, a beta loop is `s tau + t`;
    ties go to the smallest `s`.
    """
    tau = d.tau
    singularities = _singularities(d)
    s, t = tau.coordinates(np.array(singularities, dtype=complex))
    across = s if which == CycleName.ALPHA else t
    gaps = [float(np.min(_circular(across - candidate))) for candidate in OFFSET_CANDIDATES]
    best = OFFSET_CANDIDATES[int(np.argmax(gaps))]
    offset = complex(best) if which == CycleName.ALPHA else best * tau.value
    return TorusCycle(which, offset)


def winding_number(d: TorusDifferential, c: TorusCycle, n_samples: Optional[int] = None) -> WindingResult:
    """
    Count how many times `P - e` winds around 0 along a loop.

    The loop is sampled at `n_samples + 1` evenly spaced parameters, and the principal arguments of the ratios of
    consecutive values are added up. A step whose argument exceeds pi/2 is bisected until it does not.
    """
    settings = d.settings
    n_samples = n_samples or settings.samples
    if n_samples < 16:
        raise PreconditionError("torus.samples", f"At least 16 samples are needed, not {n_samples}.",
                                {"samples": n_samples})
    if d.double_zero() is None:
        raise PreconditionError("torus.odd_zeros", "The differential has two simple zeros; Ga is not defined on "
                                "the homology of the torus.", {"tau": [d.tau.value.real, d.tau.value.imag],
                                                               "shift": d.shift.value})
    delta = settings.clearance * min(1.0, d.tau.value.imag)
    clearance = loop_clearance(d, c)
    if clearance < delta:
        raise PreconditionError("torus.clearance", f"The loop passes within {clearance} of a zero or pole.",
                                {"clearance": clearance, "required": delta})

    def evaluate(t: np.ndarray) -> np.ndarray:
        return d(c.points(d.tau, t))

    parameters = np.linspace(0.0, 1.0, n_samples + 1)
    values = evaluate(parameters)
    evaluations = len(values)
    floor = max(settings.tolerance * 100, 1e-12)
    min_modulus = float(np.min(np.abs(values)))

    def increment(t0: float, t1: float, f0: complex, f1: complex, depth: int) -> float:
        nonlocal evaluations, min_modulus
        step = cmath.phase(f1 / f0)
        if abs(step) <= math.pi / 2:
            return step
        if depth >= settings.max_bisections:
            raise NumericalError("torus.bisection", f"The argument of f still jumps by {step} after {depth} "
                                 "bisections.", {"t": [t0, t1]})
        middle = (t0 + t1) / 2
        f_middle = complex(evaluate(np.array([middle]))[0])
        evaluations += 1
        min_modulus = min(min_modulus, abs(f_middle))
        return (increment(t0, middle, f0, f_middle, depth + 1)
                + increment(middle, t1, f_middle, f1, depth + 1))

    if min_modulus < floor:
        raise PreconditionError("torus.too_close", "A sample of the loop lies on a zero of the differential.",
                                {"min_modulus": min_modulus})
    total = math.fsum(increment(float(parameters[k]), float(parameters[k + 1]), complex(values[k]),
                                complex(values[k + 1]), 0) for k in range(n_samples))
    if min_modulus < floor:
        raise PreconditionError("torus.too_close", "The loop runs into a zero of the differential.",
                                {"min_modulus": min_modulus})
    turns = total / (2 * math.pi)
    if abs(turns - round(turns)) > 1e-6:
        raise NumericalError("torus.winding", f"The total change of argument {total} is not a multiple of 2 pi.",
                             {"total_angle": total})
    logger.debug(f"{c.which.value} loop at {c.offset}: winding {round(turns)} after {evaluations} evaluations")
    return WindingResult(round(turns), total, evaluations, min_modulus)


def winding_ga(d: TorusDifferential, c: TorusCycle, n_samples: Optional[int] = None) -> int:
    """Ga of a straight loop: the winding number of `P - e` along it, mod 2."""
    return winding_number(d, c, n_samples).ga


def ga_vector(d: TorusDifferential) -> ParityVector:
    """`(Ga(alpha), Ga(beta))` on loops chosen by `choose_cycle`."""
    return ParityVector.from_bits([winding_ga(d, choose_cycle(d, which)) for which in CycleName])


def halfperiod_assignment(tau: Tau, settings: Optional[TorusSettings] = None) -> dict[Shift, ParityVector]:
    """The Ga vector of `(P - e_k) dz^2` for each half-period, as observed at this modulus."""
    settings = settings or TorusSettings()
    assignment = {shift: ga_vector(TorusDifferential(tau, shift, settings)) for shift in SHIFTS}
    logger.debug(f"Half-period assignment at tau = {tau.value}: "
                 f"{ {shift.value: vector.bitstring for shift, vector in assignment.items()} }")
    return assignment


def component_ga_vectors(tau: Tau, settings: Optional[TorusSettings] = None) -> list[ParityVector]:
    """The Ga vectors of the three families of `Q_1(-2, 2)`, sorted."""
    return sorted(halfperiod_assignment(tau, settings).values())


def differential_with_double_zero(tau: Tau, settings: Optional[TorusSettings] = None) -> TorusDifferential:
    """The differential in `Q_1(-2, 2)` whose double zero is where P is smallest at the half-periods."""
    settings = settings or TorusSettings()
    values = halfperiod_values(tau, settings.tolerance, settings.max_lattice_rows)
    return TorusDifferential(tau, SHIFTS[int(np.argmin(np.abs(values)))], settings)


def twist_consistency_check(settings: Optional[TorusSettings] = None, perturbation: complex = 0j,
                            swap_cycles: bool = False) -> bool:
    """
    Compare the Ga vectors at tau = i and tau = 1 + i with a twist along beta.

    P itself has a double zero at both moduli: `(1 + i)/2` for `i`, `tau/2` for `1 + i`. Expected: (1, 1) at `i`,
    (0, 1) at `1 + i`, and the twist along beta sends (1, 1) to (0, 1).

    :param perturbation: Added to both moduli; the differential follows the double zero.
    :param swap_cycles: Measure `(Ga(beta), Ga(alpha))` instead.
    """
    order = (CycleName.BETA, CycleName.ALPHA) if swap_cycles else (CycleName.ALPHA, CycleName.BETA)
    vectors = []
    for tau in (Tau(1j + perturbation), Tau(1 + 1j + perturbation)):
        d = differential_with_double_zero(tau, settings)
        vectors.append(ParityVector.from_bits([winding_ga(d, choose_cycle(d, which)) for which in order]))
    square, twisted = vectors
    beta = TwistGenerator(1, 0b01, "beta")
    consistent = (square == ParityVector.from_bitstring("11") and twisted == ParityVector.from_bitstring("01")
                  and twist_action(square, beta) == twisted)
    logger.debug(f"Twist consistency: {square.bitstring} -> {twisted.bitstring}: {consistent}")
    return consistent


def foliation_samples(d: TorusDifferential, n: int = 64) -> np.ndarray:
    """
    Sample the horizontal direction field on an `n` by `n` grid of the fundamental domain.

    A direction `v` is horizontal where `f(z) v^2 > 0`, that is at angle `-arg f(z) / 2` mod pi.

    :return: Rows `(x, y, angle)`.
    """
    if n < 1:
        raise PreconditionError("torus.foliation_grid", f"The grid needs at least one cell, not {n}.", {"grid": n})
    cells = (np.arange(n) + 0.5) / n
    s, t = np.meshgrid(cells, cells, indexing="ij")
    z = d.tau.point(s.ravel(), t.ravel())
    angle = np.mod(-np.angle(d(z)) / 2, math.pi)
    return np.column_stack([z.real, z.imag, angle])


def write_foliation(path: str, samples: np.ndarray) -> None:
    """Write foliation samples as CSV with a header row."""
    np.savetxt(path, samples, delimiter=",", header="x,y,angle", comments="", fmt="%.12g")
