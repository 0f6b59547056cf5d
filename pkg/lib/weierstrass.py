"""
The Weierstrass function of the lattice generated by 1 and tau.

Each row `{m + n tau : m in Z}` of the lattice is summed in closed form, `sum_m (w + m)^-2 = pi^2 csc^2(pi w)`, so

    P(z) = pi^2 csc^2(pi z) - pi^2 / 3 + sum_{n != 0} [pi^2 csc^2(pi (z + n tau)) - pi^2 csc^2(pi n tau)]

and the rows are truncated symmetrically at |n| <= N. Row terms decay like exp(-2 pi |n| Im tau), and N is doubled
until two successive estimates agree to half the tolerance.
"""
from __future__ import annotations
import logging
import math
import numpy as np
from dataclasses import dataclass
from typing import Optional, Union
from lib.errors import NumericalError, PreconditionError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ROWS = 4096
DOUBLE_ZERO_FACTOR = 10.0
POLE_RADIUS = 1e-12

ComplexArray = Union[complex, np.ndarray]


@dataclass(frozen=True)
class Tau:
    """A point of the upper half-plane: the torus C / (Z + tau Z)."""

    value: complex

    def __post_init__(self) -> None:
        """Check that `tau` lies in the upper half-plane."""
        object.__setattr__(self, "value", complex(self.value))
        if not self.value.imag > 0:
            raise PreconditionError("torus.tau", f"tau = {self.value} must have a positive imaginary part.",
                                    {"tau": [self.value.real, self.value.imag]})

    def coordinates(self, z: ComplexArray) -> tuple[np.ndarray, np.ndarray]:
        """Real coordinates `(s, t)` with `z = s + t tau`."""
        z = np.asarray(z, dtype=complex)
        t = z.imag / self.value.imag
        return z.real - t * self.value.real, t

    def point(self, s: ComplexArray, t: ComplexArray) -> np.ndarray:
        """The point `s + t tau`."""
        return np.asarray(s, dtype=float) + np.asarray(t, dtype=float) * self.value

    def reduce(self, z: ComplexArray) -> np.ndarray:
        """Representatives with both coordinates in [0, 1)."""
        s, t = self.coordinates(z)
        return self.point(s - np.floor(s), t - np.floor(t))

    def reduce_centered(self, z: ComplexArray) -> np.ndarray:
        """Representatives with both coordinates in [-1/2, 1/2)."""
        s, t = self.coordinates(z)
        return self.point(s - np.floor(s + 0.5), t - np.floor(t + 0.5))

    @property
    def half_periods(self) -> tuple[complex, complex, complex]:
        """`1/2`, `tau/2` and `(1 + tau)/2`."""
        return 0.5 + 0j, self.value / 2, (1 + self.value) / 2


def _upper(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """`q = exp(2 pi i w')` with `w' = +-w` chosen so that |q| <= 1, and the sign used."""
    sign = np.where(w.imag >= 0, 1.0, -1.0)
    return np.exp(2j * math.pi * sign * w), sign


def _csc2(w: np.ndarray) -> np.ndarray:
    """`pi^2 csc^2(pi w)` without overflow for large |Im w|."""
    q, _ = _upper(w)
    return -4 * math.pi ** 2 * q / (1 - q) ** 2


def _csc2_derivative(w: np.ndarray) -> np.ndarray:
    """The derivative of `pi^2 csc^2(pi w)`: `-2 pi^3 cot(pi w) csc^2(pi w)`."""
    q, sign = _upper(w)
    cot = sign * (-1j) * (1 + q) / (1 - q)
    csc2 = -4 * q / (1 - q) ** 2
    return -2 * math.pi ** 3 * cot * csc2


def _csc2_second_derivative(w: np.ndarray) -> np.ndarray:
    """The second derivative of `pi^2 csc^2(pi w)`: `2 pi^4 csc^2 (csc^2 + 2 cot^2)`."""
    q, sign = _upper(w)
    cot = sign * (-1j) * (1 + q) / (1 - q)
    csc2 = -4 * q / (1 - q) ** 2
    return 2 * math.pi ** 4 * csc2 * (csc2 + 2 * cot ** 2)


def _row_sum(z: np.ndarray, tau: complex, rows: int, derivative: int) -> np.ndarray:
    n = np.arange(-rows, rows + 1)
    w = z[:, None] + n[None, :] * tau
    if derivative == 0:
        terms = _csc2(w)
        nonzero = n[n != 0]
        constant = math.pi ** 2 / 3 + np.sum(_csc2(nonzero * tau + 0j))
        return np.sum(terms, axis=1) - constant
    if derivative == 1:
        return np.sum(_csc2_derivative(w), axis=1)
    return np.sum(_csc2_second_derivative(w), axis=1)


def _evaluate(z: ComplexArray, tau: Tau, tol: float, derivative: int, max_rows: int) -> np.ndarray:
    if tol <= 0:
        raise PreconditionError("torus.tolerance", f"The tolerance must be positive, not {tol}.", {"tol": tol})
    points = np.atleast_1d(tau.reduce_centered(z))
    if np.any(np.abs(points) < POLE_RADIUS):
        raise PreconditionError("torus.pole", "The Weierstrass function has a pole on the lattice.",
                                {"z": [[float(p.real), float(p.imag)] for p in np.atleast_1d(z)][:4]})
    rows = 1
    estimate = _row_sum(points, tau.value, rows, derivative)
    while True:
        rows *= 2
        refined = _row_sum(points, tau.value, rows, derivative)
        change = float(np.max(np.abs(refined - estimate)))
        estimate = refined
        if change < tol / 2:
            break
        if rows > max_rows:
            raise NumericalError("torus.lattice_sum", f"The lattice sum did not settle below {tol} within {rows} rows.",
                                 {"rows": rows, "change": change})
    logger.debug(f"Lattice sum (derivative {derivative}) settled at {rows} rows for {points.size} point(s)")
    return estimate


def weierstrass_p(z: ComplexArray, tau: Tau, tol: float = DEFAULT_TOLERANCE,
                  max_rows: int = DEFAULT_MAX_ROWS) -> ComplexArray:
    """
    The Weierstrass function at `z`, within `tol`.

    :param z: A point or an array of points off the lattice.
    :return: A complex number for a scalar `z`, an array otherwise.
    """
    values = _evaluate(z, tau, tol, 0, max_rows)
    return complex(values[0]) if np.ndim(z) == 0 else values


def weierstrass_p_derivative(z: ComplexArray, tau: Tau, tol: float = DEFAULT_TOLERANCE,
                             max_rows: int = DEFAULT_MAX_ROWS) -> ComplexArray:
    """The first derivative of the Weierstrass function."""
    values = _evaluate(z, tau, tol, 1, max_rows)
    return complex(values[0]) if np.ndim(z) == 0 else values


def weierstrass_p_second_derivative(z: ComplexArray, tau: Tau, tol: float = DEFAULT_TOLERANCE,
                                    max_rows: int = DEFAULT_MAX_ROWS) -> ComplexArray:
    """The second derivative of the Weierstrass function."""
    values = _evaluate(z, tau, tol, 2, max_rows)
    return complex(values[0]) if np.ndim(z) == 0 else values


def halfperiod_values(tau: Tau, tol: float = DEFAULT_TOLERANCE,
                      max_rows: int = DEFAULT_MAX_ROWS) -> tuple[complex, complex, complex]:
    """
    The values `e_1, e_2, e_3` at `1/2`, `tau/2` and `(1 + tau)/2`.

    Their sum vanishes; a sum above `3 tol` means the evaluation is off.
    """
    values = weierstrass_p(np.array(tau.half_periods), tau, tol, max_rows)
    e1, e2, e3 = (complex(v) for v in values)
    if abs(e1 + e2 + e3) > 3 * tol:
        raise NumericalError("torus.halfperiod_sum", f"e1 + e2 + e3 = {e1 + e2 + e3}, not zero within {3 * tol}.",
                             {"sum": abs(e1 + e2 + e3)})
    if min(abs(e1 - e2), abs(e2 - e3), abs(e1 - e3)) <= tol:
        raise NumericalError("torus.halfperiod_distinct", "Two half-period values coincide.",
                             {"values": [[v.real, v.imag] for v in (e1, e2, e3)]})
    return e1, e2, e3


@dataclass(frozen=True)
class ZeroPair:
    """The two zeros `x, -x` of `P - c` in the fundamental domain, with the residuals found there."""

    first: complex
    second: complex
    residuals: tuple[float, float]
    double: bool


def _refine(seed: complex, tau: Tau, constant: complex, tol: float, max_iterations: int,
            max_rows: int) -> tuple[complex, float]:
    """
    Refine a zero of `f = P - c` with the iteration `z - f f' / (f'^2 - f f'')`.

    The iteration converges quadratically to simple and to multiple zeros alike.
    """
    z = seed
    best = (z, math.inf)
    for _ in range(max_iterations):
        f = weierstrass_p(z, tau, tol, max_rows) - constant
        if abs(f) < best[1]:
            best = (z, abs(f))
        df = weierstrass_p_derivative(z, tau, tol, max_rows)
        d2f = weierstrass_p_second_derivative(z, tau, tol, max_rows)
        denominator = df * df - f * d2f
        if denominator == 0:
            break
        step = f * df / denominator
        z -= step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    residual = abs(weierstrass_p(z, tau, tol, max_rows) - constant)
    if residual > 100 * tol:
        raise NumericalError("torus.newton", f"Zero refinement from {seed} stopped with residual {residual}.",
                             {"seed": [seed.real, seed.imag], "best_residual": min(best[1], residual)})
    return complex(tau.reduce(z)), residual


def find_zeros(tau: Tau, constant: complex = 0j, tol: float = DEFAULT_TOLERANCE, grid_size: int = 48,
               max_iterations: int = 100, max_rows: int = DEFAULT_MAX_ROWS) -> ZeroPair:
    """
    Locate the two zeros of `P - c` in the fundamental domain.

    A zero at a half-period is double and is returned exactly. Otherwise the best point of a coarse grid seeds the
    refinement of one zero, and its mirror image `-seed` seeds the other; the two must add up to a lattice point.
    """
    for half_period in tau.half_periods:
        residual = abs(weierstrass_p(half_period, tau, tol, max_rows) - constant)
        if residual <= DOUBLE_ZERO_FACTOR * tol:
            h = complex(tau.reduce(half_period))
            return ZeroPair(h, h, (residual, residual), True)

    cells = (np.arange(grid_size) + 0.5) / grid_size
    s, t = np.meshgrid(cells, cells, indexing="ij")
    grid = tau.point(s.ravel(), t.ravel())
    values = np.abs(weierstrass_p(grid, tau, tol, max_rows) - constant)
    seed = complex(grid[int(np.argmin(values))])
    first, first_residual = _refine(seed, tau, constant, tol, max_iterations, max_rows)
    second, second_residual = _refine(complex(tau.reduce(-seed)), tau, constant, tol, max_iterations, max_rows)

    total = complex(tau.reduce_centered(first + second))
    if abs(total) > max(tol, 1e-12) * 100:
        raise NumericalError("torus.zero_sum", f"The zeros {first} and {second} do not add up to a lattice point.",
                             {"sum": abs(total)})
    logger.debug(f"Zeros of P - {constant} at {first} and {second}")
    return ZeroPair(first, second, (first_residual, second_residual), False)


def p_zeros(tau: Tau, tol: float = DEFAULT_TOLERANCE, grid_size: int = 48, max_iterations: int = 100,
            max_rows: int = DEFAULT_MAX_ROWS) -> ZeroPair:
    """The zeros `x, -x` of the Weierstrass function itself."""
    return find_zeros(tau, 0j, tol, grid_size, max_iterations, max_rows)


def double_zero_half_period(tau: Tau, constant: complex, tol: float = DEFAULT_TOLERANCE,
                            max_rows: int = DEFAULT_MAX_ROWS) -> Optional[int]:
    """The index (0, 1 or 2) of the half-period where `P - c` has a double zero, if any."""
    values = halfperiod_values(tau, tol, max_rows)
    distances = [abs(value - constant) for value in values]
    index = int(np.argmin(distances))
    return index if distances[index] <= DOUBLE_ZERO_FACTOR * tol else None
