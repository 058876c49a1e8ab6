"""
liesplit command line.

    liesplit split   --matrix A.mtx --scheme j-split --j pq:2,2 --out run/
    liesplit factor  --matrix A.mtx --scheme qdr
    liesplit solve   --matrix A.mtx --method j-hss --j symplectic:2 --alpha auto
    liesplit analyze --matrix A.mtx --j identity
    liesplit verify  --schemes all --seed 7 --size 6

Exit codes: 0 success, 1 input or configuration error, 2 non-convergence
or failed verification.
"""

import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from ..config import get_config
from ..errors import FactorizationFailed, LiesplitError, NoConvergence
from ..factorizations import generalized_polar, linearization_check, lu_ldu, polar, qr_qdr
from ..matkit import fro
from ..mmio import read_matrix_market
from ..monitoring import get_metrics
from ..solvers import (
    SolverConfig,
    adi_solve,
    alpha_grid,
    alpha_sweep,
    classical_solve,
    definite_factor,
    gmres_preconditioned,
    hss_solve,
    iteration_analysis,
    j_hss_solve,
    optimal_alpha,
    sts_solve,
)
from ..splittings import KroneckerSum, PartTag, j_split, kronecker_split, triangular_split
from ..structures import AlgebraSide, BilinearStructure, StructureKind, membership_residual
from .manifest import SOLVE_METHODS, VERIFY_SCHEMES, Command, RunManifest
from .reports import render_report, residual_table, stamp, sweep_table, write_outputs

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


@dataclass
class CommandOutput:
    """What a command produces before rendering."""
    report: Dict[str, Any]
    tables: Dict[str, str] = field(default_factory=dict)
    matrices: Dict[str, np.ndarray] = field(default_factory=dict)
    status: int = EXIT_OK


def load_structure(manifest: RunManifest, n: int) -> BilinearStructure:
    return BilinearStructure.from_descriptor(manifest.j, n, load_matrix=read_matrix_market)


def cmd_split(manifest: RunManifest) -> CommandOutput:
    A = read_matrix_market(manifest.matrix)
    report: Dict[str, Any] = {"scheme": manifest.scheme, "n": A.shape[0]}
    if manifest.scheme == "j-split":
        J = load_structure(manifest, A.shape[0])
        split = j_split(A, J)
        S, H = split.part(PartTag.LIE), split.part(PartTag.JORDAN)
        report["structure"] = J.descriptor()
        report["membership"] = {
            "lie": membership_residual(S, J, AlgebraSide.LIE),
            "jordan": membership_residual(H, J, AlgebraSide.JORDAN),
        }
        report["orthogonality"] = abs(float(np.sum(H * S)))
    elif manifest.scheme == "kronecker":
        split = kronecker_split(A)
    else:
        split = triangular_split(A, manifest.scheme.replace("-", "_"))

    report["parts"] = [tag.value for tag in split.tags]
    report["reconstruction_residual"] = split.reconstruction_residual(A)
    return CommandOutput(report, matrices={tag.value: part for tag, part in split})


def _factorize(manifest: RunManifest, A: np.ndarray):
    scheme = manifest.scheme
    if scheme.startswith("lu-"):
        return lu_ldu(A, scheme[3:])
    if scheme == "ldu":
        return lu_ldu(A, "ldu")
    if scheme in ("qr", "lq", "qdr"):
        return qr_qdr(A, scheme)
    if scheme == "polar":
        return polar(A)
    return generalized_polar(A, load_structure(manifest, A.shape[0]))


def cmd_factor(manifest: RunManifest) -> CommandOutput:
    A = read_matrix_market(manifest.matrix)
    result = _factorize(manifest, A)
    report = {
        "scheme": manifest.scheme,
        "n": A.shape[0],
        "factors": list(result.names),
        "residual": result.residual,
        "relative_residual": result.residual / max(fro(A), np.finfo(float).tiny),
        "structural_residuals": result.structural_residuals,
    }
    if manifest.scheme == "jpolar":
        report["structure"] = manifest.j
    return CommandOutput(report, matrices=dict(zip(result.names, result.factors)))


def _solver_config(manifest: RunManifest) -> SolverConfig:
    return SolverConfig(
        alpha=None if manifest.auto_alpha else float(manifest.alpha),
        tol=manifest.tol,
        max_iter=manifest.max_iter,
        estimate_rho=True,
    )


def cmd_solve(manifest: RunManifest) -> CommandOutput:
    A = read_matrix_market(manifest.matrix)
    n = A.shape[0]
    cfg = _solver_config(manifest)
    method = manifest.method
    structure: Optional[str] = None

    if method == "adi":
        op = KroneckerSum(A, read_matrix_market(manifest.matrix_b))
        image_of_ones = op.apply(np.ones(n * n))
    else:
        image_of_ones = A @ np.ones(n)
    # without --rhs the exact solution is the all-ones vector
    b = read_matrix_market(manifest.rhs).ravel() if manifest.rhs else image_of_ones

    if method == "j-hss":
        J = load_structure(manifest, n)
        structure = J.descriptor()
        result = j_hss_solve(A, b, J, cfg)
    elif method == "hss":
        result = hss_solve(A, b, cfg)
    elif method in ("sts-upper", "sts-lower"):
        result = sts_solve(A, b, cfg, direction=method[4:])
    elif method == "adi":
        result = adi_solve(op.A, op.B, b, cfg)
    elif method == "gmres":
        result = gmres_preconditioned(A, b, cfg=cfg)
    elif method == "gmres-jhss":
        J = load_structure(manifest, n)
        structure = J.descriptor()
        result = gmres_preconditioned(A, b, precond=(J, cfg.alpha), cfg=cfg)
    else:
        result = classical_solve(A, b, method.replace("-", "_"), cfg)

    report = {
        "method": method,
        "structure": structure,
        "alpha": result.alpha,
        "iterations": result.iterations,
        "converged": result.converged,
        "final_residual": result.final_residual,
        "rho_estimate": result.rho_estimate,
        "bound": result.bound,
        "details": result.details,
    }
    return CommandOutput(
        report,
        tables={"residuals.tsv": residual_table(result.residual_history)},
        matrices={"solution": result.solution[:, None]},
        status=EXIT_OK if result.converged else EXIT_NUMERICAL,
    )


def cmd_analyze(manifest: RunManifest) -> CommandOutput:
    A = read_matrix_market(manifest.matrix)
    J = load_structure(manifest, A.shape[0])
    name, _ = definite_factor(A, J)
    alpha_star = optimal_alpha(A, J)
    at_star = iteration_analysis(A, J, alpha_star)
    rows = alpha_sweep(A, J, alpha_grid(alpha_star))

    report: Dict[str, Any] = {
        "structure": J.descriptor(),
        "definite_factor": name,
        "alpha_star": alpha_star,
        "rho_at_alpha_star": at_star.rho,
        "bound_at_alpha_star": at_star.bound,
        "sweep": [{"alpha": r.alpha, "rho": r.rho, "bound": r.bound} for r in rows],
    }
    if not manifest.auto_alpha:
        chosen = iteration_analysis(A, J, float(manifest.alpha))
        report["requested"] = {"alpha": float(manifest.alpha), "rho": chosen.rho, "bound": chosen.bound}
    return CommandOutput(report, tables={"alpha_sweep.tsv": sweep_table(rows)})


def _verify_structures(manifest: RunManifest, n: int) -> List[BilinearStructure]:
    """Structures exercised by jpolar and the membership checks."""
    if manifest.j != "identity":
        return [load_structure(manifest, n)]
    structures = [BilinearStructure.identity(n)]
    if n >= 2:
        structures.append(BilinearStructure.pseudo_euclidean((n + 1) // 2, n // 2))
    if n % 2 == 0:
        structures.append(BilinearStructure.symplectic(n // 2))
    return structures


def _linearization_entry(scheme: str, A: np.ndarray, J: Optional[BilinearStructure],
                         min_order: float) -> Dict[str, Any]:
    try:
        result = linearization_check(scheme, A, J=J)
    except FactorizationFailed as e:
        logger.warning(f"verify {scheme}: {e}")
        return {"factorization": scheme, "structure": J.descriptor() if J else None,
                "passed": False, "error": str(e)}
    return {
        "factorization": scheme,
        "splitting": result.splitting.value,
        "structure": result.structure,
        "orders": {tag.value: order for tag, order in zip(result.part_tags, result.orders)},
        "exact": [tag.value for tag in result.exact_parts],
        "fitted_order": result.fitted_order,
        "passed": result.passed(min_order),
    }


def cmd_verify(manifest: RunManifest) -> CommandOutput:
    cfg = get_config()
    if manifest.matrix is not None:
        A = read_matrix_market(manifest.matrix)
        source = str(manifest.matrix)
    else:
        rng = np.random.default_rng(manifest.seed)
        A = rng.standard_normal((manifest.size, manifest.size))
        A /= np.linalg.norm(A)
        source = "random"
    n = A.shape[0]
    structures = _verify_structures(manifest, n)
    min_order = cfg.factorizations.min_order

    linearization = []
    for scheme in manifest.schemes or list(VERIFY_SCHEMES):
        if scheme == "jpolar":
            jpolar_structures = [J for J in structures if J.kind is not StructureKind.IDENTITY] or structures
            linearization.extend(_linearization_entry(scheme, A, J, min_order) for J in jpolar_structures)
        else:
            linearization.append(_linearization_entry(scheme, A, None, min_order))

    rel = cfg.cli.verify_residual_rel
    norm = fro(A)
    membership = []
    for J in structures:
        split = j_split(A, J)
        S, H = split.part(PartTag.LIE), split.part(PartTag.JORDAN)
        lie = membership_residual(S, J, AlgebraSide.LIE)
        jordan = membership_residual(H, J, AlgebraSide.JORDAN)
        orthogonality = abs(float(np.sum(H * S)))
        membership.append({
            "structure": J.descriptor(),
            "lie": lie,
            "jordan": jordan,
            "orthogonality": orthogonality,
            "passed": max(lie, jordan) <= rel * (1.0 + norm) and orthogonality <= rel * (1.0 + norm ** 2),
        })

    passed = all(e["passed"] for e in linearization) and all(m["passed"] for m in membership)
    report = {
        "source": source,
        "seed": manifest.seed if source == "random" else None,
        "n": n,
        "min_order": min_order,
        "linearization": linearization,
        "membership": membership,
        "passed": passed,
    }
    if not passed:
        logger.warning("verify: at least one check failed")
    return CommandOutput(report, status=EXIT_OK if passed else EXIT_NUMERICAL)


COMMANDS: Dict[Command, Callable[[RunManifest], CommandOutput]] = {
    Command.SPLIT: cmd_split,
    Command.FACTOR: cmd_factor,
    Command.SOLVE: cmd_solve,
    Command.ANALYZE: cmd_analyze,
    Command.VERIFY: cmd_verify,
}


def execute(manifest: RunManifest) -> int:
    """Run one manifest, write its artifacts and return the exit status."""
    manifest.check_inputs()
    logger.info(f"liesplit {manifest.command.value}")
    started = time.perf_counter()
    output = COMMANDS[manifest.command](manifest)
    report = {"command": manifest.command.value, **output.report}
    stamp(report, started, time.perf_counter(), include=not manifest.no_timestamp)

    tables = dict(output.tables)
    tables["manifest.yaml"] = manifest.render()
    write_outputs(manifest.out, render_report(report), tables, output.matrices)

    if manifest.metrics_out is not None:
        get_metrics().write(manifest.metrics_out)
    return output.status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--matrix", type=str, help="Input matrix (Matrix Market)")
    common.add_argument("--matrix-b", type=str, help="Second Kronecker factor for adi")
    common.add_argument("--rhs", type=str, help="Right-hand side (Matrix Market); default A times ones")
    common.add_argument("--j", type=str, default="identity",
                        help="Structure: identity | pq:p,q | symplectic:m | custom:path")
    common.add_argument("--scheme", type=str, help="Splitting or factorization scheme")
    common.add_argument("--method", type=str, choices=SOLVE_METHODS, help="Solver")
    common.add_argument("--alpha", type=str, default="auto", help="Shift parameter or 'auto'")
    common.add_argument("--tol", type=float, help="Relative residual tolerance")
    common.add_argument("--max-iter", type=int, help="Iteration cap")
    common.add_argument("--seed", type=int, help="RNG seed for randomized paths")
    common.add_argument("--size", type=int, help="Dimension of the random verify matrix")
    common.add_argument("--out", type=str, help="Output directory (report on stdout if omitted)")
    common.add_argument("--no-timestamp", action="store_true", help="Omit timestamp and wall time")
    common.add_argument("--metrics-out", type=str, help="Write Prometheus metrics to this file")
    common.add_argument("--log-level", type=str, default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level")

    parser = argparse.ArgumentParser(prog="liesplit", description="Matrix splittings, factorizations and solvers")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in Command:
        p = sub.add_parser(command.value, parents=[common])
        if command is Command.VERIFY:
            p.add_argument("--schemes", nargs="+", default=["all"],
                           help=f"Subset of {', '.join(VERIFY_SCHEMES)} or 'all'")
    return parser


def manifest_from_args(args: argparse.Namespace) -> RunManifest:
    fields = ("command", "matrix", "matrix_b", "rhs", "j", "scheme", "method", "alpha",
              "tol", "max_iter", "seed", "size", "out", "metrics_out")
    values = {name: getattr(args, name) for name in fields if getattr(args, name) is not None}
    values["no_timestamp"] = args.no_timestamp
    if args.alpha != "auto":
        try:
            values["alpha"] = float(args.alpha)
        except ValueError:
            pass
    if getattr(args, "schemes", None) is not None:
        values["schemes"] = args.schemes
    return RunManifest(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)
    try:
        manifest = manifest_from_args(args)
        return execute(manifest)
    except NoConvergence as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValidationError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (LiesplitError, FileNotFoundError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
