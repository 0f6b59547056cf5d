"""The command line front end of strata-lab."""
import argparse
import json
import logging
import os
import platform
import sys
import yaml
import networkx as nx
import numpy as np
from collections.abc import Callable, Sequence
from typing import Any, NoReturn, Optional
from rich.console import Console
from rich.logging import RichHandler
from lib import components, cover, homology, schemas, surface, torus, twist
from lib.config import ConfigError, Configuration, load_config
from lib.errors import InputError, PreconditionError, StrataLabError
from lib.types import JSON_TYPE, CycleName, ReportType, Shift, Space
from lib.weierstrass import Tau

logger = logging.getLogger(__name__)

with open(os.path.join(os.path.dirname(os.path.abspath(__file__)), "lib", "versioning.yml")) as version_file:
    versioning_info = yaml.safe_load(version_file)

__version__ = versioning_info["strata_lab_version"]

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2


def logging_configurer(level: int, filename: Optional[str]) -> None:
    """
    Configure the logger. Standard output is kept for JSON, so the console handler writes to standard error.

    :param level: The logging level. Either `logging.INFO` or `logging.DEBUG`.
    :param filename: The filename to write the logs to. If it is `None` then the logs aren't written to a file.
    """
    console_handler = RichHandler(console=Console(stderr=True))
    console_formatter = logging.Formatter("%(message)s")
    console_handler.setFormatter(console_formatter)
    console_handler.setLevel(level)
    all_handlers: list[logging.Handler] = [console_handler]

    if filename:
        file_handler = logging.FileHandler(filename, delay=True, encoding="utf-8")
        FORMAT = "%(asctime)s %(name)s (%(filename)s:%(lineno)d) %(levelname)s %(message)s"
        file_formatter = logging.Formatter(FORMAT)
        file_handler.setFormatter(file_formatter)
        file_handler.setLevel(level)
        all_handlers.append(file_handler)

    logging.basicConfig(level=logging.DEBUG,
                        handlers=all_handlers,
                        force=True)


def intro() -> str:
    """Return the intro string."""
    return fr"""
    .    ____
    .   /\   \    strata-lab {__version__} on {platform.system()} {platform.release()}
    .  /  \___\
    .  \  /   /   Flat surfaces, parities and twists
    .   \/___/
    """


def check_python_version() -> None:
    """Raise an exception if the version isn't supported, or log a warning if it is deprecated."""
    def version_numeric(version_str: str) -> list[int]:
        return [int(n) for n in version_str.split(".")]

    python_deprecated_version = version_numeric(versioning_info["deprecated_python_version"])
    python_good_version = version_numeric(versioning_info["minimum_python_version"])
    this_python_version = list(sys.version_info[0:2])
    upgrade_request = (f"You are currently running Python {'.'.join(map(str, this_python_version))}. "
                       f"Please upgrade to Python {'.'.join(map(str, python_good_version))} or newer")
    if this_python_version < python_deprecated_version:
        raise RuntimeError(f"A newer version of Python is required to run strata-lab. {upgrade_request}.")
    if this_python_version < python_good_version:
        logger.warning(f"A newer version of Python will be required on {versioning_info['deprecation_date']} to run "
                       f"strata-lab. {upgrade_request} before then.")


def complex_document(z: complex) -> list[float]:
    """A complex number as `[re, im]`."""
    return [float(z.real), float(z.imag)]


def parse_int_list(text: str, what: str) -> list[int]:
    """Read a comma separated list of integers."""
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise PreconditionError("cli.arguments", f"`{text}` is not a comma separated list of integers for {what}.",
                                {what: text})


def parse_tau(text: str) -> Tau:
    """Read `re,im` into a modulus."""
    parts = text.split(",")
    try:
        re_part, im_part = (float(part) for part in parts)
    except ValueError:
        raise PreconditionError("cli.arguments", f"`{text}` is not a pair `re,im` for --tau.", {"tau": text})
    return Tau(complex(re_part, im_part))


def torus_settings(config: Configuration) -> torus.TorusSettings:
    """Collect the torus parameters from the config."""
    section = config.torus
    return torus.TorusSettings(tolerance=section.tolerance, samples=section.samples, clearance=section.clearance,
                               grid_size=section.grid_size, max_newton_iterations=section.max_newton_iterations,
                               max_lattice_rows=section.max_lattice_rows, max_bisections=section.max_bisections)


def do_validate(args: argparse.Namespace, config: Configuration) -> JSON_TYPE:
    """Check a surface file; violations make the command fail."""
    tolerance = config.geometry.tolerance
    s = surface.load_surface(args.surface)
    surface.require_valid(s, tolerance)
    return {"valid": True, "polygons": len(s.polygons), "pairings": len(s.pairings),
            "connected": surface.is_connected(s)}


def do_stratum(args: argparse.Namespace, config: Configuration) -> JSON_TYPE:
    """Genus, vertices and stratum of a surface."""
    tolerance = config.geometry.tolerance
    s = surface.load_surface(args.surface)
    surface.require_valid(s, tolerance)
    summary = surface.surface_summary(s, tolerance)
    summary["genus"] = surface.genus(s, tolerance)
    return summary


def do_ga(args: argparse.Namespace, config: Configuration) -> JSON_TYPE:
    """Ga of one cycle, or the parity vector of a symplectic basis."""
    tolerance = config.geometry.tolerance
    s = surface.load_surface(args.surface)
    surface.require_valid(s, tolerance)
    if args.cycle is not None:
        cycle = homology.Cycle.of(parse_int_list(args.cycle, "cycle"))
        value = homology.ga(s, cycle)
        result: dict[str, Any] = {"cycle": cycle.to_document(), "ga": value}
        if cycle.support:
            # One count per closed curve of the support.
            d = cover.double_cover(s, tolerance)
            result["lift_components"] = [cover.lift_components(s, d, piece)
                                         for piece in cover.support_components(s, cycle)]
        return result

    odd = homology.odd_orders(s, tolerance)
    result = {"genus": surface.genus(s, tolerance), "is_square": homology.is_square(s, tolerance), "odd_orders": odd}
    if not odd:
        basis = homology.symplectic_basis(s, tolerance)
        result["basis"] = {"alphas": [c.to_document() for c in basis.alphas],
                           "betas": [c.to_document() for c in basis.betas]}
        if basis.genus:
            result["parity_vector"] = homology.parity_vector(s, basis, tolerance).bitstring
    return result


def do_double_cover(args: argparse.Namespace, config: Configuration) -> JSON_TYPE:
    """The canonical double cover of a surface."""
    tolerance = config.geometry.tolerance
    s = surface.load_surface(args.surface)
    d = cover.double_cover(s, tolerance)
    result: dict[str, Any] = dict(cover.cover_to_document(d))
    result["lifts"] = [{"order": base.order, "lifted_orders": [lifted.order for lifted in above]}
                       for base, above in d.lifts(s, tolerance)]
    if d.connected:
        result["abelian_stratum"] = surface.abelian_stratum(d.surface, tolerance).to_document()
    return result


def do_orbit(args: argparse.Namespace, config: Configuration) -> JSON_TYPE:
    """The orbit of a parity vector under the standard twists."""
    seed = twist.ParityVector.from_bitstring(args.seed)
    if args.genus is not None and args.genus != seed.genus:
        raise PreconditionError("twist.length_mismatch", f"A seed in genus {args.genus} has {2 * args.genus} bits, "
                                f"not {2 * seed.genus}.", {"genus": args.genus, "seed": args.seed})
    if seed.genus > config.orbit.max_genus:
        raise PreconditionError("twist.genus", f"Genus {seed.genus} is above `orbit:max_genus`.",
                                {"genus": seed.genus, "max_genus": config.orbit.max_genus})
    generators = twist.standard_generators(seed.genus)
    vectors = twist.orbit(seed, generators)
    result: dict[str, Any] = {"genus": seed.genus, "seed": seed.bitstring,
                              "generators": [{"name": g.name, "class": g.bitstring} for g in generators],
                              "orbit_size": len(vectors), "vectors": sorted(v.bitstring for v in vectors)}
    if args.target is not None:
        target = twist.ParityVector.from_bitstring(args.target)
        word = twist.twist_word(seed, target, generators)
        result["word"] = None if word is None else [generators[index].name for index in word]
    return result


def do_components(args: argparse.Namespace, config: Configuration) -> JSON_TYPE:
    """Look up the number of components of a stratum."""
    orders = parse_int_list(args.orders, "orders")
    if args.space == Space.TEICH.value:
        count = components.q_components_over_teich(args.genus, orders)
    else:
        count = components.qd_components(args.genus, orders)
    return {"genus": args.genus, "orders": sorted(orders, reverse=True), "space": args.space,
            "count": dict(count.to_document()), "theorem": count.citation.value}


def do_torus(args: argparse.Namespace, config: Configuration) -> JSON_TYPE:
    """Zeros and Ga of a differential on a torus."""
    settings = torus_settings(config)
    tau = parse_tau(args.tau)
    d = torus.TorusDifferential(tau, Shift(args.shift), settings)
    zeros = d.zeros()
    result: dict[str, Any] = {"tau": complex_document(tau.value), "shift": args.shift,
                              "stratum": torus.torus_stratum(d).to_document(),
                              "zeros": [complex_document(zeros.first), complex_document(zeros.second)],
                              "residuals": {"zeros": list(zeros.residuals)}}
    if zeros.double:
        names = [CycleName(args.cycle)] if args.cycle else list(CycleName)
        windings = {}
        for name in names:
            loop = torus.choose_cycle(d, name)
            winding = torus.winding_number(d, loop, args.samples)
            windings[name.value] = winding
            result.setdefault("offsets", {})[name.value] = complex_document(loop.offset)
        result["residuals"]["min_modulus"] = min(w.min_modulus for w in windings.values())
        if args.cycle:
            result["ga"] = windings[args.cycle].ga
            result["winding"] = windings[args.cycle].winding
        else:
            result["ga"] = {name: w.ga for name, w in windings.items()}
            result["winding"] = {name: w.winding for name, w in windings.items()}
    elif args.cycle:
        torus.winding_ga(d, torus.TorusCycle(CycleName(args.cycle)), args.samples)

    result["half_periods"] = {shift.value: vector.bitstring
                              for shift, vector in torus.halfperiod_assignment(tau, settings).items()}
    if args.emit_foliation:
        samples = torus.foliation_samples(d, config.torus.foliation_grid)
        try:
            torus.write_foliation(args.emit_foliation, samples)
        except OSError as error:
            raise InputError("cli.foliation", f"Cannot write the foliation to {args.emit_foliation}: {error}",
                             {"path": args.emit_foliation})
        result["foliation"] = args.emit_foliation
    return result


def emit_report(path: str, command: str, inputs: dict[str, Any], config: Configuration, outputs: JSON_TYPE) -> None:
    """
    Write a reproducibility report. Keys are sorted so the file only depends on the inputs and the versions.

    :param path: Where to write the report.
    """
    report: ReportType = {"command": command,
                          "inputs": inputs,
                          "tolerances": {"geometry": config.geometry.tolerance, "torus": config.torus.tolerance},
                          "versions": {"strata_lab": __version__, "python": platform.python_version(),
                                       "numpy": np.__version__, "networkx": nx.__version__},
                          "outputs": outputs}
    try:
        with open(path, "w", encoding="utf-8") as file:
            json.dump(report, file, indent=config.report.indent, sort_keys=True)
            file.write("\n")
    except OSError as error:
        raise InputError("cli.report", f"Cannot write the report to {path}: {error}", {"path": path})
    logger.debug(f"Report written to {path}")


COMMANDS: dict[str, Callable[[argparse.Namespace, Configuration], JSON_TYPE]] = {
    "validate": do_validate,
    "stratum": do_stratum,
    "ga": do_ga,
    "double-cover": do_double_cover,
    "orbit": do_orbit,
    "components": do_components,
    "torus": do_torus,
}


class ArgumentParser(argparse.ArgumentParser):
    """An argument parser that reports bad arguments as input errors instead of exiting."""

    def error(self, message: str) -> NoReturn:
        """Raise `PreconditionError` with the parser's message."""
        raise PreconditionError("cli.arguments", message, {"usage": self.format_usage().strip()})


def build_parser() -> ArgumentParser:
    """The argument grammar of every command."""
    parser = ArgumentParser(prog="strata-lab", description="Compute with half-translation surfaces.")
    parser.add_argument("-v", action="store_true", help="Make output more verbose.")
    parser.add_argument("--config", help="Specify a configuration file (defaults to ./config.yml).")
    parser.add_argument("-l", "--logfile", help="Record all console output to a log file.", default=None)
    parser.add_argument("--report", help="Write a reproducibility report to this file.", default=None)
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    for name, description in [("validate", "Check a surface file."),
                              ("stratum", "Genus and stratum of a surface."),
                              ("double-cover", "Build the canonical double cover.")]:
        sub = subparsers.add_parser(name, help=description)
        sub.add_argument("surface", help="A surface JSON file.")

    ga_parser = subparsers.add_parser("ga", help="Ga of a cycle, or the parity vector of a symplectic basis.")
    ga_parser.add_argument("surface", help="A surface JSON file.")
    ga_parser.add_argument("--cycle", help="Comma separated pairing indices of a cycle.")

    orbit_parser = subparsers.add_parser("orbit", help="Orbit of a parity vector under Dehn twists.")
    orbit_parser.add_argument("--genus", type=int, help="The genus; must match the seed length.")
    orbit_parser.add_argument("--seed", required=True, help="Bitstring a1..ag b1..bg.")
    orbit_parser.add_argument("--target", help="Also find a shortest twist word reaching this bitstring.")

    components_parser = subparsers.add_parser("components", help="Number of components of a stratum.")
    components_parser.add_argument("--genus", type=int, required=True)
    components_parser.add_argument("--orders", required=True, help="Comma separated orders; -1 for simple poles.")
    components_parser.add_argument("--space", required=True, choices=[space.value for space in Space])

    torus_parser = subparsers.add_parser("torus", help="The differential (P - e) dz^2 on a torus.")
    torus_parser.add_argument("--tau", required=True, help="The modulus as re,im.")
    torus_parser.add_argument("--shift", default=Shift.NONE.value, choices=[shift.value for shift in Shift])
    torus_parser.add_argument("--cycle", choices=[name.value for name in CycleName])
    torus_parser.add_argument("--samples", type=int, default=None, help="Initial samples along a loop.")
    torus_parser.add_argument("--emit-foliation", dest="emit_foliation", default=None,
                              help="Write the horizontal direction field as CSV to this file.")
    return parser


def run(argv: Sequence[str]) -> int:
    """
    Run one command and print its JSON document.

    :return: 0 on success, 2 when the input is at fault, 1 otherwise.
    """
    verbose = "-v" in argv
    try:
        args = build_parser().parse_args(list(argv))
        logging_configurer(logging.DEBUG if args.v else logging.INFO, args.logfile)
        verbose = args.v
        logger.info(intro(), extra={"highlighter": None})
        check_python_version()
        config = load_config(args.config, required=True) if args.config else load_config("./config.yml")
        outputs = COMMANDS[args.command](args, config)
        schemas.check_output(outputs, args.command)
        if args.report:
            inputs = {key: value for key, value in sorted(vars(args).items())
                      if key not in ("v", "logfile", "report", "config", "command")}
            emit_report(args.report, args.command, inputs, config, outputs)
    except InputError as error:
        logger.debug(f"Input error {error.code}: {error.message}")
        print(json.dumps(error.to_document(), indent=2, sort_keys=True, default=str))
        return EXIT_INPUT
    except ConfigError as error:
        print(json.dumps({"code": error.code, "message": str(error), "context": {}}, indent=2, sort_keys=True))
        return EXIT_INPUT
    except StrataLabError as error:
        logger.error(f"{error.code}: {error.message}")
        print(json.dumps(error.to_document(), indent=2, sort_keys=True, default=str))
        return EXIT_INTERNAL
    except Exception:
        if verbose:
            logger.exception("Quitting strata-lab due to an error:")
        else:
            logger.error("Quitting strata-lab due to an internal error; rerun with -v for the traceback.")
        return EXIT_INTERNAL

    print(json.dumps(outputs, indent=config.report.indent, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
