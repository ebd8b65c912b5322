"""
Command-line interface for ribbon-invariants using Click.
Reads JSON documents and prints deterministic plain-text reports.
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path
from typing import Optional, Union

import click
from rich.console import Console
from rich.table import Table

from ribbon.config import config
from ribbon.eta import (
    BoundingData,
    Character,
    EquivariantHermitianForm,
    bounding_through_circle,
    eta_table,
    obstruction_vanishes,
)
from ribbon.cocycle import CellComplexData, extend_to_circle, verify_cochain
from ribbon.exceptions import (
    DocumentError,
    NotEquivalentError,
    NotIsomorphicError,
    RibbonError,
    TooLargeError,
)
from ribbon.groups import direct_sum, torsion_square_check
from ribbon.laurent import FiniteLaurentModule, module_isomorphic
from ribbon.logging_config import get_logger, set_level
from ribbon.models import dump_document, load_document, to_domain, triple_document
from ribbon.moves import MoveTriple, TripleVerification, random_move_corpus, verify_corpus, verify_triple
from ribbon.pairing import FarberLevineStructure, fl_equivalent
from ribbon.seifert import SeifertBundle, farber_levine
from ribbon.utils import (
    format_invariants,
    format_module,
    format_structure,
    parse_character_spec,
    parse_int_list,
    sanitize_filename,
)

logger = get_logger(__name__)
console = Console(highlight=False, soft_wrap=True)
err_console = Console(stderr=True, highlight=False, soft_wrap=True)

EXIT_NOT_EQUIVALENT = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_TOO_LARGE = 4


def emit(text: str = "") -> None:
    console.print(text, markup=False)


def exit_code_for(error: RibbonError) -> int:
    if isinstance(error, DocumentError):
        return EXIT_PARSE
    if isinstance(error, TooLargeError):
        return EXIT_TOO_LARGE
    return EXIT_PRECONDITION


def reports_errors(command):
    """Translate library errors into the documented exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except RibbonError as e:
            logger.debug(f"{type(e).__name__}: {e}")
            err_console.print(f"Error ({type(e).__name__}): {e}", markup=False)
            sys.exit(exit_code_for(e))

    return wrapper


def _load(path: str, expected: type, kind: str):
    obj = to_domain(load_document(path))
    if not isinstance(obj, expected):
        raise DocumentError(f"{path} is not a {kind} document")
    return obj


def _as_structure(
    path: str,
) -> Union[FarberLevineStructure, FiniteLaurentModule]:
    obj = to_domain(load_document(path))
    if isinstance(obj, SeifertBundle):
        return farber_levine(obj)
    if isinstance(obj, (FarberLevineStructure, FiniteLaurentModule)):
        return obj
    raise DocumentError(
        f"{path} must be a seifert_bundle, laurent_module or fl_structure document"
    )


@click.group()
@click.option("--max-aut", type=int, help="Override the automorphism enumeration bound")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging")
@click.pass_context
def cli(ctx: click.Context, max_aut: Optional[int], verbose: bool):
    """ribbon: Alexander torsion, Farber-Levine pairings and eta invariants of 2-knots.

    Every command reads JSON documents (format_version 1) and prints a
    plain-text report.
    """
    ctx.ensure_object(dict)
    if max_aut is not None and max_aut < 1:
        raise click.BadParameter("must be positive", param_hint="--max-aut")
    ctx.obj["max_aut"] = max_aut if max_aut is not None else config.max_automorphisms

    if verbose:
        set_level("DEBUG")


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@reports_errors
def invariants(file: str):
    """Alexander torsion, τ data and the Farber-Levine pairing of a Seifert bundle.

    FILE: a seifert_bundle document.
    """
    bundle = _load(file, SeifertBundle, "seifert_bundle")
    structure = farber_levine(bundle)
    emit(f"knot: {bundle.name}")
    emit(format_structure(structure))
    if not structure.group.is_trivial:
        for line in format_invariants(structure.module):
            emit(line)
        emit(f"τ-invariant pairing: {'yes' if structure.is_tau_invariant() else 'no'}")
        emit(f"pairing nondegenerate: {'yes' if structure.pairing.is_nondegenerate() else 'no'}")


@cli.command()
@click.argument("file_a", type=click.Path(dir_okay=False))
@click.argument("file_b", type=click.Path(dir_okay=False))
@click.pass_context
@reports_errors
def compare(ctx: click.Context, file_a: str, file_b: str):
    """Decide whether two structures are equivalent and print a witness.

    Seifert bundles are compared through their Farber-Levine structures;
    when either side is a bare module only the modules are compared.
    """
    bound = ctx.obj["max_aut"]
    a, b = _as_structure(file_a), _as_structure(file_b)
    emit(f"A: {_summary(a)}")
    emit(f"B: {_summary(b)}")

    if isinstance(a, FarberLevineStructure) and isinstance(b, FarberLevineStructure):
        try:
            witness = fl_equivalent(a, b, bound)
        except NotEquivalentError:
            emit("NOT EQUIVALENT")
            sys.exit(EXIT_NOT_EQUIVALENT)
        emit("EQUIVALENT")
    else:
        ma = a.module if isinstance(a, FarberLevineStructure) else a
        mb = b.module if isinstance(b, FarberLevineStructure) else b
        try:
            witness = module_isomorphic(ma, mb, bound)
        except NotIsomorphicError:
            emit("NOT ISOMORPHIC")
            sys.exit(EXIT_NOT_EQUIVALENT)
        emit("ISOMORPHIC")
    emit(f"witness: {witness.matrix}")


@cli.command("torsion-square")
@click.argument("file_a", type=click.Path(dir_okay=False))
@click.argument("file_b", type=click.Path(dir_okay=False))
@reports_errors
def torsion_square(file_a: str, file_b: str):
    """Check that Tor H1(V_a) ⊕ Tor H1(V_b) has the form G ⊕ G.

    Exit code 1 when it does not; the two knots are then not ribbon-move
    equivalent.
    """
    a = _load(file_a, SeifertBundle, "seifert_bundle")
    b = _load(file_b, SeifertBundle, "seifert_bundle")
    emit(f"A: {a.name}: Tor H1(V) = {a.h1_v.torsion_subgroup()}")
    emit(f"B: {b.name}: Tor H1(V) = {b.h1_v.torsion_subgroup()}")
    emit(f"sum: {direct_sum(a.h1_v.torsion_subgroup(), b.h1_v.torsion_subgroup())}")
    half = torsion_square_check(a.h1_v, b.h1_v)
    if half is None:
        emit("NOT OF THE FORM G ⊕ G")
        emit(f"{a.name} is not ribbon-move equivalent to {b.name}")
        sys.exit(EXIT_NOT_EQUIVALENT)
    emit(f"G ⊕ G with G = {half}")


def _summary(x: Union[FarberLevineStructure, FiniteLaurentModule]) -> str:
    if isinstance(x, FarberLevineStructure):
        return format_structure(x)
    return format_module(x)


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--character", "character", required=True, help="Character on H1(V) as d:v1,v2,...")
@click.option("--bounding", type=click.Path(dir_okay=False), help="bounding_data document")
@click.option("--obstruction", is_flag=True, help="Report whether every value vanishes")
@reports_errors
def eta(file: str, character: str, bounding: Optional[str], obstruction: bool):
    """η̃ mod 1 for every nontrivial eigenvalue index k.

    Without --bounding the character must factor through Z; the bounding
    data is then the empty form over the circle.
    """
    bundle = _load(file, SeifertBundle, "seifert_bundle")
    try:
        modulus, values = parse_character_spec(character)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--character")
    nu = Character(bundle.h1_v, modulus, values)
    if bounding:
        data = _load(bounding, BoundingData, "bounding_data")
    else:
        data = bounding_through_circle(nu, EquivariantHermitianForm(0, modulus, ()))

    table = eta_table(bundle, nu, data)
    report = Table(title=f"η̃ of {bundle.name}, d = {modulus}", show_lines=False)
    report.add_column("k", justify="right")
    report.add_column("η̃ mod 1", justify="right")
    for k, value in table:
        report.add_row(str(k), str(value))
    console.print(report)

    if obstruction:
        if obstruction_vanishes(table):
            emit("obstruction: PASS (all values vanish)")
        else:
            emit("obstruction: FAIL")
            emit(f"{bundle.name} is not ribbon-move equivalent to trivial")


def _verification_lines(result: TripleVerification):
    theorem = result.theorem
    if result.error:
        yield f"error: {result.error}"
        return
    yield f"module witness: {theorem.module_witness.matrix if theorem.modules_ok else 'none'}"
    yield f"pairing witness: {theorem.pairing_witness.matrix if theorem.pairings_ok else 'none'}"
    for claim in result.claims:
        yield (
            f"exactness {claim.name} (N = {claim.window}): "
            f"surjective={claim.surjective} image_in_kernel={claim.image_in_kernel} "
            f"kernel_in_image={claim.kernel_in_image} "
            f"rationally_injective={claim.rationally_injective} "
            f"agrees={claim.agrees_with_torsion}"
        )


@cli.command("move-check")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--window", default=4, show_default=True, help="Window size N for the exactness checks")
@click.pass_context
@reports_errors
def move_check(ctx: click.Context, file: str, window: int):
    """Compare the two children of a move triple and check exactness.

    Exit code 1 when a witness is missing or an exactness check fails.
    """
    triple = _load(file, MoveTriple, "move_triple")
    result = verify_triple(triple, window, ctx.obj["max_aut"])
    emit(f"triple: {triple.name}")
    for line in _verification_lines(result):
        emit(line)
    emit("PASS" if result.passed else "FAIL")
    if not result.passed:
        sys.exit(EXIT_NOT_EQUIVALENT)


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--degrees", default="", help="Period on each distinguished cycle, as n1,n2,...")
@reports_errors
def cocycle(file: str, degrees: str):
    """Extend a circle-valued map over a cell complex."""
    complex_data = _load(file, CellComplexData, "cell_complex")
    try:
        wanted = parse_int_list(degrees) or (0,) * len(complex_data.cycles)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--degrees")
    phi = extend_to_circle(complex_data, wanted)
    report = verify_cochain(complex_data, phi)
    emit(f"φ = {list(phi)}")
    emit(f"periods: {report.periods}")
    emit("2-cell boundaries: all degree 0" if report.ok else f"bad 2-cells: {report.bad_cells}")


@cli.command()
@click.option("--seed", default=0, show_default=True, help="Corpus seed")
@click.option("--count", default=50, show_default=True, help="Number of move triples")
@click.option("--workers", type=int, help="Verification threads")
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False),
    help="Directory for counterexample files (default from config)",
)
@click.pass_context
def selftest(ctx: click.Context, seed: int, count: int, workers: Optional[int], out_dir: Optional[str]):
    """Generate a seeded corpus of move triples and verify every one.

    Failures are written as move_triple documents; exit 0 iff none fail.
    """
    if count < 0:
        raise click.BadParameter("must be nonnegative", param_hint="--count")
    triples = random_move_corpus(seed, count)
    results = verify_corpus(triples, workers, bound=ctx.obj["max_aut"])

    table = Table(title=f"selftest seed {seed}")
    for column in ("triple", "torsion", "module", "pairing", "exactness"):
        table.add_column(column)
    failures = []
    for result in results:
        theorem = result.theorem
        table.add_row(
            result.triple.name,
            str(result.triple.middle.h1_y.torsion_subgroup()),
            "error" if result.error else ("ok" if theorem.modules_ok else "FAIL"),
            "error" if result.error else ("ok" if theorem.pairings_ok else "FAIL"),
            "ok" if result.claims and all(c.passed for c in result.claims) else "FAIL",
        )
        if not result.passed:
            failures.append(result)
    console.print(table)

    directory = Path(out_dir) if out_dir else config.counterexample_dir
    for result in failures:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{sanitize_filename(result.triple.name)}.json"
        details = "; ".join(_verification_lines(result))
        path.write_text(dump_document(triple_document(result.triple, details)), encoding="utf-8")
        logger.warning(f"Counterexample written to {path}")
        emit(f"counterexample: {path}")

    emit(f"passed: {len(results) - len(failures)}/{len(results)}")
    sys.exit(1 if failures else 0)


def main():
    """Main entry point."""
    cli()


if __name__ == "__main__":
    main()
