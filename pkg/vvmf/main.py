import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

import click

from . import __version__, config, metrics
from .basis import (
    canonical_basis,
    differential_relations_check,
    generating_function_check,
    invert_principal_part,
    module_closure_check,
    principal_part,
)
from .checks import Check, CheckList, equality
from .errors import DivisionByZeroError, InputError, InternalError, VVMFError
from .exactnum import matrix_to_json, scalar_to_json, units
from .forms import form_basis, form_space, trace_integer_part_checks
from .fundamental import (
    boundary_check,
    compat1_check,
    compat_check,
    det_check,
    detdif_check,
    dual_fundamental,
    expand_fundamental,
    hypergeometric_check,
    lambda_shift,
)
from .models import JobSpec, ReportModel, parse_input, parse_job
from .repdata import derive_AB, dual, monodromy_equation_check, trace_audit, validate
from .reptools import (
    congruence_heuristic,
    g_ell_conjugation_check,
    nonnegativity_test,
    rationality_test,
    reduce_representation,
    sl2_relations_check,
)

logger = logging.getLogger(__name__)


# Command handlers: each returns (results, checks)


def _terms(job: JobSpec) -> int:
    """Psi[n] carries q**(n - 1), so order M needs M + 2 coefficient matrices."""
    return job.order + 2


def _validate(job: JobSpec):
    data = job.input.repdata()
    rep = job.input.modular_rep()
    A, B = derive_AB(data)
    checks = CheckList()
    spectral = validate(data)
    checks.extend(spectral.checks)
    checks.add(monodromy_equation_check(data, A))
    if rep is not None:
        checks.add(sl2_relations_check(rep))
        checks.extend(trace_audit(data, rep.S, rep.T_matrix, blocks=job.blocks))
    else:
        checks.extend(trace_audit(data, blocks=job.blocks))
    results = {
        "A": matrix_to_json(A),
        "B": matrix_to_json(B),
        "signature": spectral.signature.to_json() if spectral.signature else None,
    }
    return results, checks.checks


def _expand(job: JobSpec):
    fm = expand_fundamental(job.input.repdata(), _terms(job))
    results = fm.to_json()
    results["resonances"] = [list(r) for r in fm.resonances]
    return results, list(fm.checks)


def _det_check(job: JobSpec):
    data = job.input.repdata()
    spectral = validate(data)
    if spectral.signature is None:
        return None, list(spectral.checks)
    fm = expand_fundamental(data, _terms(job))
    checks = [*det_check(fm, spectral.signature), detdif_check(fm)]
    return {"signature": spectral.signature.to_json(), "det": fm.det().to_json()}, checks


def _hyper_check(job: JobSpec):
    fm = expand_fundamental(job.input.repdata(), _terms(job))
    return None, [hypergeometric_check(fm), compat_check(fm)]


def _dual(job: JobSpec):
    data = job.input.repdata()
    fm = expand_fundamental(data, _terms(job))
    dual_fm = dual_fundamental(fm)
    checks = [
        boundary_check(dual_fm),
        *compat1_check(dual_fm),
        equality("double_dual", dual(dual(data)), data),
    ]
    return {"dual": dual_fm.rep.to_json(), "fundamental": dual_fm.to_json()}, checks


def _shift(job: JobSpec):
    i, j = job.pair
    fm = expand_fundamental(job.input.repdata(), _terms(job) + 2)
    result = lambda_shift(fm, i, j)
    checks = [*result.checks, boundary_check(result.fundamental), *compat1_check(result.fundamental)]
    results = {
        "shifted": result.rep.to_json(),
        "constant": scalar_to_json(result.constant),
        "fundamental": result.fundamental.to_json(),
    }
    return results, checks


def _basis_for(job: JobSpec, max_pole: int):
    fm = expand_fundamental(job.input.repdata(), _terms(job) + max_pole)
    return fm, canonical_basis(fm, max_pole)


def _basis(job: JobSpec):
    _, basis = _basis_for(job, job.max_pole)
    checks = [*basis.checks, *differential_relations_check(basis)]
    vectors = [basis.vectors[key].to_json() for key in sorted(basis.vectors)]
    return {"max_pole": basis.max_pole, "vectors": vectors}, checks


def _invert(job: JobSpec):
    part = job.input.part()
    top = max((n for _, n in part), default=0)
    _, basis = _basis_for(job, top + 1)
    components = invert_principal_part(basis, part)
    found = principal_part(components)
    checks = [
        Check("principal_part_round_trip", found == part, found, part),
        module_closure_check(basis, components),
    ]
    series = [c.shift(lam).to_json() for c, lam in zip(components, basis.lam)]
    return {"components": series}, checks


def _gf_check(job: JobSpec):
    q_order, z_order = job.bi_order
    data = job.input.repdata()
    fm = expand_fundamental(data, q_order + z_order + z_order + 2)
    basis = canonical_basis(fm, z_order)
    return None, generating_function_check(fm, basis, q_order, z_order)


def _weight(job: JobSpec) -> Fraction:
    try:
        return Fraction(job.weight)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("weight must be a rational p/2", weight=job.weight) from exc


def _dims(job: JobSpec):
    rep = job.input.modular_rep()
    space = form_space(rep, _weight(job), job.blocks)
    return space.to_json(), [sl2_relations_check(rep)]


def _form_basis(job: JobSpec):
    result = form_basis(job.input.repdata(), _weight(job), job.order, job.input.modular_rep())
    return result.to_json(), list(result.checks)


def _rep_audit(job: JobSpec):
    rep = job.input.modular_rep()
    checks = CheckList()
    checks.add(sl2_relations_check(rep))
    rationality = rationality_test(rep)
    checks.extend(rationality.checks)
    for l in units(rep.level):
        checks.add(g_ell_conjugation_check(rep, l))
    checks.add(congruence_heuristic(rep))
    checks.extend(nonnegativity_test(rep, job.component))
    checks.add(equality("S_U_equals_T_inverse", rep.S * rep.U, rep.T_matrix.inverse()))
    try:
        checks.extend(trace_integer_part_checks(rep, job.blocks))
    except InputError as exc:
        checks.add(Check("trace_integer_parts", False, detail=exc.detail))
    if job.input.has_data:
        checks.extend(trace_audit(job.input.repdata(), rep.S, rep.T_matrix, blocks=job.blocks))
    results = {
        "level": rep.level,
        "order_of_T": rep.order_of_T(),
        "witness": rationality.witness,
        "difference": matrix_to_json(rationality.difference) if rationality.difference is not None else None,
    }
    return results, checks.checks


def _reduce(job: JobSpec):
    reduction = reduce_representation(job.input.modular_rep())
    results = {"reduced": reduction.rep.to_json(), "orbits": [list(o) for o in reduction.orbits]}
    return results, list(reduction.checks)


HANDLERS: dict[str, Callable] = {
    "validate": _validate,
    "expand": _expand,
    "det-check": _det_check,
    "hyper-check": _hyper_check,
    "dual": _dual,
    "shift": _shift,
    "basis": _basis,
    "invert": _invert,
    "gf-check": _gf_check,
    "dims": _dims,
    "form-basis": _form_basis,
    "rep-audit": _rep_audit,
    "reduce": _reduce,
}


def _unexpected(exc: Exception) -> VVMFError:
    if isinstance(exc, ZeroDivisionError):
        return DivisionByZeroError(str(exc) or "division by zero")
    return InternalError(f"{type(exc).__name__}: {exc}")


def run(job: JobSpec) -> tuple[int, dict]:
    """Execute one job; returns the exit status and the JSON report."""
    start = time.perf_counter()
    digest = job.digest()
    try:
        results, checks = HANDLERS[job.command](job)
        status = 0 if all(c.passed for c in checks) else 1
        report = ReportModel(
            command=job.command,
            inputs_digest=digest,
            status=status,
            results=results,
            checks=[c.to_json() for c in checks],
        )
        metrics.record_checks(checks)
    except Exception as exc:
        if isinstance(exc, VVMFError):
            error = exc
            logger.error("%s failed: %s", job.command, exc.detail)
        else:
            error = _unexpected(exc)
            logger.exception("%s failed unexpectedly", job.command)
        status = error.exit_code
        report = ReportModel(command=job.command, inputs_digest=digest, status=status, error=error.to_dict())
    metrics.record_command(job.command, status, time.perf_counter() - start)
    for failure in (c for c in report.checks if not c.passed):
        logger.info("check %s failed: %s", failure.name, failure.detail)
    return status, report.to_json()


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# Command line


def _read_input(value: str) -> dict:
    text = value if value.lstrip().startswith("{") else Path(value).read_text()
    return parse_input(text)


def _pair(value: Optional[str]) -> Optional[tuple[int, int]]:
    if value is None:
        return None
    try:
        first, second = (int(x) for x in value.split(","))
    except ValueError:
        raise InputError("expected two comma-separated integers", value=value)
    return first, second


def _blocks(value: Optional[str]) -> Optional[list[int]]:
    if value is None:
        return None
    try:
        return [int(x) for x in value.split(",")]
    except ValueError:
        raise InputError("block sizes must be comma-separated integers", value=value)


def _execute(command: str, input_path: str, output: Optional[str], **params) -> None:
    try:
        doc = {
            "command": command,
            "input": _read_input(input_path),
            "output": output,
            "bi_order": _pair(params.pop("bi_order", None)),
            "pair": _pair(params.pop("pair", None)),
            "blocks": _blocks(params.pop("block", None)),
            **{key: value for key, value in params.items() if value is not None},
        }
        job = parse_job({key: value for key, value in doc.items() if value is not None})
        status, report = run(job)
    except (VVMFError, OSError) as exc:
        error = exc if isinstance(exc, VVMFError) else InputError(f"cannot read input: {exc}")
        logger.error("%s rejected: %s", command, error.detail)
        status = error.exit_code
        report = ReportModel(command=command, inputs_digest="", status=status, error=error.to_dict()).to_json()
        metrics.record_command(command, status, 0.0)
    text = render(report)
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)
    metrics.export()
    sys.exit(status)


input_option = click.option("--input", "input_path", required=True, help="Path to a JSON input file, or inline JSON.")
output_option = click.option("--output", default=None, help="Write the report here instead of stdout.")
order_option = click.option("--order", type=int, default=None, help="Truncation order M.")
block_option = click.option("--block", default=None, help="Comma-separated sizes of indecomposable blocks.")


@click.group()
@click.version_option(__version__)
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr.")
def cli(verbose: bool):
    """Exact computations with vector-valued modular functions."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else config.LOG_LEVEL,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


@cli.command("validate")
@input_option
@output_option
@block_option
def validate_command(input_path, output, block):
    """Spectral condition, monodromy equation and trace audit."""
    _execute("validate", input_path, output, block=block)


@cli.command("expand")
@input_option
@output_option
@order_option
def expand_command(input_path, output, order):
    """Fundamental matrix to order M."""
    _execute("expand", input_path, output, order=order)


@cli.command("det-check")
@input_option
@output_option
@order_option
def det_check_command(input_path, output, order):
    """Determinant formula and Liouville identity."""
    _execute("det-check", input_path, output, order=order)


@cli.command("hyper-check")
@input_option
@output_option
@order_option
def hyper_check_command(input_path, output, order):
    """Hypergeometric form of the compatibility equation."""
    _execute("hyper-check", input_path, output, order=order)


@cli.command("dual")
@input_option
@output_option
@order_option
def dual_command(input_path, output, order):
    """Dual data and dual fundamental matrix."""
    _execute("dual", input_path, output, order=order)


@cli.command("shift")
@input_option
@output_option
@order_option
@click.option("--pair", required=True, help="Indices i,j: Lambda gains e_i - e_j.")
def shift_command(input_path, output, order, pair):
    """Lambda shift moving one unit of exponent from j to i."""
    _execute("shift", input_path, output, order=order, pair=pair)


@cli.command("basis")
@input_option
@output_option
@order_option
@click.option("--max-pole", type=int, default=None, help="Largest pole order Mmax.")
def basis_command(input_path, output, order, max_pole):
    """Canonical basis vectors up to pole order Mmax."""
    _execute("basis", input_path, output, order=order, max_pole=max_pole)


@cli.command("invert")
@input_option
@output_option
@order_option
def invert_command(input_path, output, order):
    """Module element with a prescribed principal part."""
    _execute("invert", input_path, output, order=order)


@cli.command("gf-check")
@input_option
@output_option
@click.option("--bi-order", required=True, help="Orders Mq,Mz.")
def gf_check_command(input_path, output, bi_order):
    """Generating function identities to bi-order (Mq, Mz)."""
    _execute("gf-check", input_path, output, bi_order=bi_order)


@cli.command("dims")
@input_option
@output_option
@block_option
@click.option("--weight", required=True, help="Weight k, possibly p/2.")
def dims_command(input_path, output, block, weight):
    """Dimensions of holomorphic and cusp forms of weight k."""
    _execute("dims", input_path, output, block=block, weight=weight)


@cli.command("form-basis")
@input_option
@output_option
@order_option
@click.option("--weight", required=True, help="Weight k, possibly p/2.")
def form_basis_command(input_path, output, order, weight):
    """Explicit basis of holomorphic forms of weight k."""
    _execute("form-basis", input_path, output, order=order, weight=weight)


@cli.command("rep-audit")
@input_option
@output_option
@block_option
@click.option("--component", type=int, default=None, help="Distinguished index for the nonnegativity test.")
def rep_audit_command(input_path, output, block, component):
    """Rationality, congruence and nonnegativity diagnostics of S and T."""
    _execute("rep-audit", input_path, output, block=block, component=component)


@cli.command("reduce")
@input_option
@output_option
def reduce_command(input_path, output):
    """Fold an SL2(Z) representation with permutation S^2 to PSL2(Z)."""
    _execute("reduce", input_path, output)


if __name__ == "__main__":
    cli()
