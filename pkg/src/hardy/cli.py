"""Command-line front door.

One binary, a subcommand tree, JSON in and JSON out.  Every command is
deterministic given its input files, flags and seed; reports rerun to
byte-identical output.  File writes go through a temp file and an
atomic rename, so no partial output ever lands at the target path.

Exit codes: 0 success (and, for check-style commands, the check
passed); 1 unreadable or malformed input; 2 a numeric or structural
failure (factorization failure, singular modulus, failed verification,
non-invariant space, failed audit).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import List, Optional

import numpy as np

from .blaschke import BlaschkeSpec, blaschke_eval, check_basis_orthonormality
from .circlefn import CircleFunction, grid, synthesize
from .decomp import decompose_blaschke, decompose_zn
from .errors import FactorizationError, HardyError, SingularityError
from .factor import b_inner_matrix_from, inner_outer, n_inner_outer_factorize
from .invariance import (
    ConstrainedSpec,
    build_constrained,
    invariance_defect,
    span_invariant,
    verify_constrained,
    wandering_basis,
)
from .norms import (
    builtin_specs,
    check_continuity,
    check_gauge_axioms,
    check_rotational_symmetry,
    gauge_eval,
)
from .serialize import (
    atomic_write_text,
    dump_json,
    function_from_json,
    function_to_json,
    norm_spec_from_json,
    norm_spec_to_json,
    subspace_from_json,
    subspace_to_json,
    zeros_from_json,
)
from .verify import RunConfig, VerificationReport, registry_ids, run_verification

__all__ = ["main", "RunConfig", "VerificationReport"]

EXIT_OK = 0
EXIT_IO = 1
EXIT_FAIL = 2


class _InputError(Exception):
    """Unreadable or malformed input; maps to exit code 1."""


def _default_n_samples() -> int:
    raw = os.environ.get("HARDY_NSAMPLES", "1024")
    try:
        return int(raw)
    except ValueError:
        raise _InputError(f"HARDY_NSAMPLES={raw!r} is not an integer")


def _pick_n(args) -> int:
    n = getattr(args, "n_samples", None)
    return int(n) if n is not None else _default_n_samples()


def _load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror or exc}")
    except json.JSONDecodeError as exc:
        raise _InputError(
            f"{path}: parse error at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}"
        )


def _function_arg(path: str) -> CircleFunction:
    obj = _load_json_file(path)
    try:
        return function_from_json(obj)
    except (HardyError, KeyError, TypeError, ValueError) as exc:
        raise _InputError(f"{path}: {exc}")


def _zeros_arg(path: str) -> BlaschkeSpec:
    obj = _load_json_file(path)
    try:
        return zeros_from_json(obj)
    except (HardyError, KeyError, TypeError, ValueError) as exc:
        raise _InputError(f"{path}: {exc}")


def _subspace_arg(path: str):
    obj = _load_json_file(path)
    try:
        return subspace_from_json(obj)
    except (HardyError, KeyError, TypeError, ValueError) as exc:
        raise _InputError(f"{path}: {exc}")


def _norm_spec_arg(token: str, n_samples: int):
    """A builtin spec name, or a path to a norm-spec JSON file."""
    builtins = builtin_specs(n_samples)
    if token in builtins:
        return builtins[token]
    obj = _load_json_file(token)
    try:
        return norm_spec_from_json(obj)
    except (HardyError, KeyError, TypeError, ValueError) as exc:
        raise _InputError(f"{token}: {exc}")


def _multiplier_arg(args, n_samples: int) -> CircleFunction:
    """Multiplier from --power (z^p), --zeros (Blaschke) or --fn."""
    given = [name for name in ("power", "zeros", "fn")
             if getattr(args, name, None) is not None]
    if len(given) != 1:
        raise _InputError(
            "give exactly one of --power, --zeros, --fn for the multiplier"
        )
    if args.power is not None:
        if args.power < 1:
            raise _InputError("--power must be >= 1")
        return synthesize({int(args.power): 1.0}, n_samples)
    if args.zeros is not None:
        spec = _zeros_arg(args.zeros)
        return CircleFunction.from_samples(blaschke_eval(spec, grid(n_samples)))
    return _function_arg(args.fn)


def _emit(payload, out_path: Optional[str]):
    text = dump_json(payload)
    if out_path:
        atomic_write_text(out_path, text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, header: List[str], rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
    atomic_write_text(path, buf.getvalue())


# --- subcommand handlers ----------------------------------------------------

def _cmd_norm_audit(args) -> int:
    N = _pick_n(args)
    spec = _norm_spec_arg(args.spec, N)
    axioms = check_gauge_axioms(spec, trials=args.trials, seed=args.seed,
                                n_samples=N)
    continuity = check_continuity(spec, n_samples=N)
    rng = np.random.default_rng(args.seed)
    coeffs = rng.standard_normal(17) + 1j * rng.standard_normal(17)
    probe = synthesize({j: coeffs[j] for j in range(17)}, N)
    symmetry = check_rotational_symmetry(spec, probe)
    payload = {
        "spec": norm_spec_to_json(spec),
        "axioms": axioms.as_dict(),
        "continuity": continuity.as_dict(),
        "rotational_symmetry_deviation": symmetry,
    }
    _emit(payload, args.out)
    return EXIT_OK if axioms.passed else EXIT_FAIL


def _cmd_blaschke_basis(args) -> int:
    N = _pick_n(args)
    spec = _zeros_arg(args.zeros)
    deviation = check_basis_orthonormality(spec, m_max=args.mmax, n_samples=N)
    payload = {
        "degree": spec.degree,
        "m_max": args.mmax,
        "n_samples": N,
        "gram_deviation": deviation,
        "threshold": args.tol,
        "pass": deviation <= args.tol,
    }
    _emit(payload, args.out)
    if args.check and deviation > args.tol:
        return EXIT_FAIL
    return EXIT_OK


def _cmd_decompose(args) -> int:
    f = _function_arg(args.fn)
    if args.mode == "zn":
        if args.n is None:
            raise _InputError("--mode zn needs --n")
        result = decompose_zn(f, args.n)
    else:
        if args.zeros is None:
            raise _InputError("--mode blaschke needs --zeros")
        spec = _zeros_arg(args.zeros)
        result = decompose_blaschke(f, spec, m_max=args.mmax)
    payload = {
        "mode": result.mode,
        "components": [function_to_json(c) for c in result.components],
        "carriers": [function_to_json(c) for c in result.carriers],
        "residual": result.residual,
        "component_norms": list(result.component_norms()),
    }
    if result.basis_coefficients is not None:
        payload["m_max"] = int(result.basis_coefficients.shape[1]) - 1
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_factor_classic(args) -> int:
    f = _function_arg(args.fn)
    pair = inner_outer(f, regularize=args.regularize)
    payload = {
        "inner": function_to_json(pair.inner),
        "outer": function_to_json(pair.outer),
        "residual": pair.residual,
        "unimodularity_defect": pair.unimodularity_defect,
    }
    _emit(payload, args.out)
    if args.emit_plot_data:
        N = f.n_samples
        theta = 2.0 * np.pi * np.arange(N) / N
        rows = zip(theta, np.abs(pair.inner.samples),
                   np.log(np.abs(pair.outer.samples)))
        _write_csv(args.emit_plot_data,
                   ["theta", "abs_inner", "log_abs_outer"], rows)
    return EXIT_OK if pair.meets_invariants() else EXIT_FAIL


def _cmd_factor_ninner(args) -> int:
    f = _function_arg(args.fn)
    bundle = n_inner_outer_factorize(
        f, args.n, k_max=args.kmax, method=args.method,
        sv_threshold=args.sv_threshold, regularize=args.regularize)
    payload = {
        "n": bundle.n,
        "r": bundle.r,
        "method": bundle.method,
        "n_samples": bundle.n_samples,
        "residual": bundle.residual,
        "gram_defect": bundle.gram_defect,
        "parseval_gap": bundle.parseval_gap,
        "inners": [function_to_json(g) for g in bundle.inners],
        "outers": [function_to_json(g) for g in bundle.outers],
        "outers_passed": [rep.passed for rep in bundle.outer_reports],
    }
    _emit(payload, args.out)
    return EXIT_OK if bundle.meets_invariants() else EXIT_FAIL


def _cmd_factor_checkbinner(args) -> int:
    phis = [_function_arg(p) for p in args.fn]
    spec = _zeros_arg(args.zeros)
    matrix = b_inner_matrix_from(phis, spec, m_max=args.mmax)
    payload = {
        "rows": matrix.rows,
        "cols": matrix.cols,
        "defect": matrix.defect,
        "joint_defect": matrix.joint_defect,
        "decomposition_residual": matrix.decomposition_residual,
        "tol": matrix.tol,
        "pass": matrix.passed,
        "entries": [[function_to_json(e) for e in row]
                    for row in matrix.entries],
    }
    _emit(payload, args.out)
    return EXIT_OK if matrix.passed else EXIT_FAIL


def _cmd_invariance_span(args) -> int:
    generators = [_function_arg(p) for p in args.generators]
    N = generators[0].n_samples
    multiplier = _multiplier_arg(args, N)
    space = span_invariant(generators, multiplier, k_max=args.kmax,
                           D=args.band)
    _emit(subspace_to_json(space), args.out)
    return EXIT_OK


def _cmd_invariance_defect(args) -> int:
    space = _subspace_arg(args.subspace)
    multiplier = _multiplier_arg(args, space.n_samples)
    defect = invariance_defect(space, multiplier)
    payload = {
        "defect": defect,
        "dim": space.dim,
        "ambient_bandwidth": space.ambient_bandwidth,
    }
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_invariance_wandering(args) -> int:
    space = _subspace_arg(args.subspace)
    multiplier = _multiplier_arg(args, space.n_samples)
    vectors = wandering_basis(space, multiplier)
    payload = {
        "rank": len(vectors),
        "vectors": [function_to_json(v) for v in vectors],
    }
    _emit(payload, args.out)
    return EXIT_OK


def _constrained_spec_arg(path: str) -> ConstrainedSpec:
    obj = _load_json_file(path)
    try:
        inners = tuple(function_from_json(o) for o in obj["inners"])
        beta_rows = obj["beta"]
        beta = np.array(
            [[complex(float(re), float(im)) for re, im in row]
             for row in beta_rows], dtype=complex)
        mult = obj["multiplier"]
        if "power" in mult:
            multiplier = int(mult["power"])
        else:
            multiplier = zeros_from_json(mult)
        return ConstrainedSpec(inners=inners, beta=beta,
                               multiplier=multiplier)
    except (HardyError, KeyError, TypeError, ValueError) as exc:
        raise _InputError(f"{path}: {exc}")


def _cmd_invariance_constrained(args) -> int:
    spec = _constrained_spec_arg(args.spec)
    space = build_constrained(spec, D=args.band, k_max=args.kmax)
    report = verify_constrained(space, spec)
    payload = {
        "dim": space.dim,
        "ambient_bandwidth": space.ambient_bandwidth,
        "r": spec.r,
        "k": spec.k,
        "report": {
            "b_defect": report.b_defect,
            "b2_defect": report.b2_defect,
            "b3_defect": report.b3_defect,
            "invariant_b2": report.invariant_b2,
            "invariant_b3": report.invariant_b3,
            "noninvariant_b": report.noninvariant_b,
            "degenerate": report.degenerate,
            "pass": report.passed,
        },
    }
    _emit(payload, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _tol_pair(text: str):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(
            f"expected NAME=VALUE, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not a number")


def _cmd_verify(args) -> int:
    config = RunConfig(
        n_samples=_pick_n(args),
        seed=args.seed,
        tol_overrides=dict(args.tol or ()),
        output_path=args.out,
        modulus=args.n,
    )
    report = run_verification(args.theorem_id, config)
    print(
        f"{report.theorem_id}: {len(report.checks)} checks, "
        f"{'pass' if report.passed else 'FAIL'}, "
        f"wall {report.wall_time:.2f}s",
        file=sys.stderr,
    )
    _emit(report.as_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_experiment(args) -> int:
    if args.name == "conjecture44":
        payload = _experiment_conjecture44(args)
    else:
        payload = _experiment_maximal_k(args)
    _emit(payload, args.out)
    return EXIT_OK


def _experiment_conjecture44(args) -> dict:
    """Measured splitting behavior of gauge norms without rotational
    symmetry.  For symmetric specs the averaging bound makes every
    component norm at most the whole; without symmetry the excess is an
    open question, so it is reported, never asserted."""
    N = _pick_n(args)
    n = args.n if args.n is not None else 2
    spec_names = [args.spec] if args.spec else ["p2", "arc_q1"]
    rng = np.random.default_rng(args.seed)
    tables = []
    for token in spec_names:
        spec = _norm_spec_arg(token, N)
        max_excess = -np.inf
        min_excess = np.inf
        for _ in range(args.trials):
            degree = int(rng.integers(2, 65))
            coeffs = rng.standard_normal(degree + 1) \
                + 1j * rng.standard_normal(degree + 1)
            f = synthesize({j: coeffs[j] for j in range(degree + 1)}, N)
            dec = decompose_zn(f, n)
            whole = gauge_eval(spec, f)
            for carrier, comp in zip(dec.carriers, dec.components):
                piece = CircleFunction.from_samples(
                    carrier.samples * comp.samples)
                excess = gauge_eval(spec, piece) - whole
                max_excess = max(max_excess, excess)
                min_excess = min(min_excess, excess)
        tables.append({
            "spec": token,
            "n": n,
            "trials": args.trials,
            "max_component_excess": float(max_excess),
            "min_component_excess": float(min_excess),
        })
    return {"experiment": "conjecture44", "tables": tables}


def _experiment_maximal_k(args) -> dict:
    """Try to build and verify constrained spaces for every column
    count k up to 2r-1.  Purely exploratory; failures are recorded, not
    raised."""
    from .verify import _orthonormal_beta, _power_inner_family

    N = _pick_n(args)
    r = args.r
    n = r
    rng = np.random.default_rng(args.seed)
    inners = _power_inner_family(rng, n, r, N)
    rows = []
    for k in range(1, 2 * r):
        try:
            beta = _orthonormal_beta(rng, r, k)
            spec = ConstrainedSpec(inners=inners, beta=beta, multiplier=n)
            space = build_constrained(spec, D=400, k_max=60)
            report = verify_constrained(space, spec)
            rows.append({
                "k": k,
                "built": True,
                "dim": space.dim,
                "b_defect": report.b_defect,
                "b2_defect": report.b2_defect,
                "b3_defect": report.b3_defect,
                "degenerate": report.degenerate,
                "pass": report.passed,
            })
        except HardyError as exc:
            rows.append({"k": k, "built": False, "error": str(exc)})
    return {"experiment": "maximal-k", "r": r, "n": n, "rows": rows}


# --- parser -----------------------------------------------------------------

def _add_out(p):
    p.add_argument("--out", help="write JSON here (atomic); default stdout")


def _add_n_samples(p):
    p.add_argument("--n-samples", type=int, default=None,
                   help="grid size (power of two; default HARDY_NSAMPLES "
                        "or 1024)")


def _add_multiplier_flags(p):
    p.add_argument("--power", type=int, default=None,
                   help="multiplier z^POWER")
    p.add_argument("--zeros", default=None,
                   help="multiplier from a Blaschke zeros JSON file")
    p.add_argument("--fn", default=None,
                   help="multiplier from a function JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardy",
        description="Numerical toolkit for Hardy spaces on the unit "
                    "circle: bases, decompositions, gauge norms, "
                    "factorization, invariant subspaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    norm = sub.add_parser("norm", help="gauge norm tools")
    norm_sub = norm.add_subparsers(dest="subcommand", required=True)
    audit = norm_sub.add_parser(
        "audit", help="randomized audit of the gauge-norm axioms")
    audit.add_argument("--spec", required=True,
                       help="builtin spec name or norm-spec JSON file")
    audit.add_argument("--trials", type=int, default=200)
    audit.add_argument("--seed", type=int, default=0)
    _add_n_samples(audit)
    _add_out(audit)
    audit.set_defaults(func=_cmd_norm_audit)

    bla = sub.add_parser("blaschke", help="Blaschke product tools")
    bla_sub = bla.add_subparsers(dest="subcommand", required=True)
    basis = bla_sub.add_parser(
        "basis", help="orthonormality of the product basis")
    basis.add_argument("--zeros", required=True, help="zeros JSON file")
    basis.add_argument("--mmax", type=int, default=6)
    basis.add_argument("--tol", type=float, default=1e-8)
    basis.add_argument("--check", action="store_true",
                       help="exit 2 when the deviation exceeds --tol")
    _add_n_samples(basis)
    _add_out(basis)
    basis.set_defaults(func=_cmd_blaschke_basis)

    dec = sub.add_parser("decompose", help="subspace decompositions")
    dec.add_argument("--fn", required=True, help="function JSON file")
    dec.add_argument("--mode", choices=("zn", "blaschke"), required=True)
    dec.add_argument("--n", type=int, default=None,
                     help="splitting modulus for --mode zn")
    dec.add_argument("--zeros", default=None,
                     help="zeros JSON file for --mode blaschke")
    dec.add_argument("--mmax", type=int, default=None,
                     help="series order for --mode blaschke "
                          "(default: sized from the input)")
    _add_out(dec)
    dec.set_defaults(func=_cmd_decompose)

    factor = sub.add_parser("factor", help="factorization commands")
    factor_sub = factor.add_subparsers(dest="subcommand", required=True)

    classic = factor_sub.add_parser(
        "classic", help="inner times outer factorization")
    classic.add_argument("--fn", required=True)
    classic.add_argument("--regularize", action="store_true",
                         help="lift grid zeros of the modulus")
    classic.add_argument("--emit-plot-data", metavar="CSV", default=None,
                         help="write theta, |inner|, log|outer| columns")
    _add_out(classic)
    classic.set_defaults(func=_cmd_factor_classic)

    ninner = factor_sub.add_parser(
        "ninner", help="n-inner times n-outer factorization")
    ninner.add_argument("--fn", required=True)
    ninner.add_argument("--n", type=int, required=True)
    ninner.add_argument("--kmax", type=int, default=None)
    ninner.add_argument("--method", choices=("direct", "wandering"),
                        default="direct")
    ninner.add_argument("--sv-threshold", type=float, default=1e-6)
    ninner.add_argument("--regularize", action="store_true")
    _add_out(ninner)
    ninner.set_defaults(func=_cmd_factor_ninner)

    binner = factor_sub.add_parser(
        "check-binner", help="matrix test for a jointly B-inner family")
    binner.add_argument("--fn", nargs="+", required=True,
                        help="one or more function JSON files")
    binner.add_argument("--zeros", required=True)
    binner.add_argument("--mmax", type=int, default=8)
    _add_out(binner)
    binner.set_defaults(func=_cmd_factor_checkbinner)

    inv = sub.add_parser("invariance", help="invariant subspace commands")
    inv_sub = inv.add_subparsers(dest="subcommand", required=True)

    span = inv_sub.add_parser("span", help="span of multiplier shifts")
    span.add_argument("--generators", nargs="+", required=True)
    span.add_argument("--kmax", type=int, required=True)
    span.add_argument("--band", type=int, required=True,
                      help="ambient bandwidth D")
    _add_multiplier_flags(span)
    _add_out(span)
    span.set_defaults(func=_cmd_invariance_span)

    defect = inv_sub.add_parser("defect", help="invariance defect")
    defect.add_argument("--subspace", required=True,
                        help="subspace JSON file")
    _add_multiplier_flags(defect)
    _add_out(defect)
    defect.set_defaults(func=_cmd_invariance_defect)

    wander = inv_sub.add_parser(
        "wandering", help="complement of the shifted space")
    wander.add_argument("--subspace", required=True)
    _add_multiplier_flags(wander)
    _add_out(wander)
    wander.set_defaults(func=_cmd_invariance_wandering)

    constrained = inv_sub.add_parser(
        "constrained", help="build and verify a two-layer space")
    constrained.add_argument("--spec", required=True,
                             help="constrained-spec JSON file")
    constrained.add_argument("--band", type=int, default=400)
    constrained.add_argument("--kmax", type=int, default=60)
    _add_out(constrained)
    constrained.set_defaults(func=_cmd_invariance_constrained)

    verify = sub.add_parser("verify", help="run a named verification suite")
    verify.add_argument("theorem_id", choices=registry_ids(),
                        metavar="ID",
                        help="one of: " + ", ".join(registry_ids()))
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--n", type=int, default=None,
                        help="focus modulus-sweeping suites on one n")
    verify.add_argument("--tol", action="append", type=_tol_pair,
                        metavar="NAME=VALUE",
                        help="override a named threshold (repeatable)")
    _add_n_samples(verify)
    _add_out(verify)
    verify.set_defaults(func=_cmd_verify)

    experiment = sub.add_parser(
        "experiment", help="exploratory measurements; never fail")
    experiment.add_argument("name", choices=("conjecture44", "maximal-k"))
    experiment.add_argument("--spec", default=None,
                            help="conjecture44: spec name or JSON file")
    experiment.add_argument("--n", type=int, default=None,
                            help="conjecture44: splitting modulus")
    experiment.add_argument("--trials", type=int, default=50)
    experiment.add_argument("--r", type=int, default=2,
                            help="maximal-k: number of inner functions")
    experiment.add_argument("--seed", type=int, default=0)
    _add_n_samples(experiment)
    _add_out(experiment)
    experiment.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"hardy: {exc}", file=sys.stderr)
        return EXIT_IO
    except SingularityError as exc:
        print(f"hardy: singular modulus: {exc}", file=sys.stderr)
        if exc.indices:
            print(f"hardy: grid indices near zero: {list(exc.indices)[:8]}",
                  file=sys.stderr)
        return EXIT_FAIL
    except FactorizationError as exc:
        print(f"hardy: factorization failure: {exc}", file=sys.stderr)
        if exc.diagnostics:
            print("hardy: diagnostics: "
                  + json.dumps(exc.diagnostics, sort_keys=True),
                  file=sys.stderr)
        return EXIT_FAIL
    except HardyError as exc:
        print(f"hardy: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except BrokenPipeError:
        # downstream closed the pipe (| head, | less); die quietly
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
