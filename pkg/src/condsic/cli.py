"""Command-line interface: ``csic <command> [options]``.

Exit status: 0 on success, 2 when a certification fails, 1 on usage,
input or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import csic as _csic
from . import diffset as _ds
from . import formats, optim, tomo
from .matspace import TOL, Scheme, build_basis

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {v}")
    return v


def _residues(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="csic", description="Conditional SIC-POVM toolkit.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def out_flag(sp, what):
        sp.add_argument("--out", type=Path, help=f"write {what} here instead of stdout")

    def scheme_flag(sp, required=True):
        sp.add_argument("--scheme", required=required,
                        help="known part: diagonal | full | offdiagonal | path to a scheme JSON file")

    sp = sub.add_parser("basis", help="write the Gell-Mann basis")
    sp.add_argument("--n", type=_positive_int, required=True, help="Hilbert space dimension")
    out_flag(sp, "basis JSON")

    sp = sub.add_parser("diffset-certify", help="check a cyclic difference set")
    sp.add_argument("--file", type=Path, help="difference-set JSON file")
    sp.add_argument("--residues", type=_residues, help="comma-separated residues, e.g. 0,1,3")
    sp.add_argument("--N", type=_positive_int, help="modulus")
    sp.add_argument("--lambda", dest="lam", type=_positive_int, default=1, help="multiplicity (default 1)")
    sp.add_argument("--json", action="store_true", help="print the certificate as JSON")

    sp = sub.add_parser("diffset-search", help="exhaustive search for a planar difference set")
    sp.add_argument("--N", type=_positive_int, required=True, help="modulus")
    sp.add_argument("--n", type=_positive_int, required=True, help="set size")
    out_flag(sp, "difference-set JSON")

    sp = sub.add_parser("diffset-singer", help="Singer planar difference set of prime-power order")
    sp.add_argument("--s", type=_positive_int, required=True, help="order (a prime power)")
    out_flag(sp, "difference-set JSON")

    sp = sub.add_parser("build", help="construct the known-diagonal conditional SIC-POVM")
    sp.add_argument("--n", type=_positive_int, required=True, help="Hilbert space dimension")
    sp.add_argument("--diffset", type=Path, help="difference-set JSON (default: Singer construction)")
    out_flag(sp, "POVM JSON")

    sp = sub.add_parser("certify", help="certify a POVM as a conditional SIC-POVM")
    sp.add_argument("--povm", type=Path, required=True, help="POVM JSON file")
    scheme_flag(sp)
    sp.add_argument("--tol", type=_positive_float, default=TOL, help=f"tolerance (default {TOL:g})")
    sp.add_argument("--json", action="store_true", help="print the certificate as JSON")

    sp = sub.add_parser("dual", help="canonical dual frame of a POVM")
    sp.add_argument("--povm", type=Path, required=True, help="POVM JSON file")
    scheme_flag(sp)
    out_flag(sp, "dual-frame JSON")

    sp = sub.add_parser("risk", help="Haar-averaged single-shot risk of a POVM and dual frame")
    sp.add_argument("--povm", type=Path, required=True, help="POVM JSON file")
    scheme_flag(sp)
    sp.add_argument("--dual", type=Path, help="dual-frame JSON (default: canonical dual)")
    sp.add_argument("--state", type=Path,
                    help='state JSON {"rho": matrix} (default: maximally mixed)')

    sp = sub.add_parser("simulate", help="Monte-Carlo tomography run")
    sp.add_argument("--n", type=_positive_int, required=True, help="Hilbert space dimension")
    scheme_flag(sp)
    sp.add_argument("--povm", type=Path, help="POVM JSON (default: optimal POVM for the scheme)")
    sp.add_argument("--state-model", choices=["haar-pure", "hs-mixed", "fixed"], default="haar-pure",
                    help="state ensemble (default haar-pure)")
    sp.add_argument("--state", type=Path, help='state JSON {"rho": matrix} for --state-model fixed')
    sp.add_argument("--shots", type=_positive_int, default=1000, help="shots per trial (default 1000)")
    sp.add_argument("--trials", type=_positive_int, default=1000, help="number of trials (default 1000)")
    sp.add_argument("--seed", type=int, default=None, help=f"RNG seed (default {DEFAULT_SEED})")
    sp.add_argument("--exact", action="store_true", help="use exact probabilities instead of sampling")
    sp.add_argument("--out", type=Path, help="per-trial CSV (trial, sq_error, theoretical_T)")
    sp.add_argument("--summary", type=Path, help="write the summary JSON here as well as stdout")

    sp = sub.add_parser("optimize", help="numerical search for a conditional SIC-POVM")
    sp.add_argument("--n", type=_positive_int, required=True, help="Hilbert space dimension")
    scheme_flag(sp)
    sp.add_argument("--restarts", type=_positive_int, default=8, help="random restarts (default 8)")
    sp.add_argument("--max-iters", type=_positive_int, default=20000,
                    help="iterations per restart (default 20000)")
    sp.add_argument("--step-rule", choices=["backtracking", "fixed"], default="backtracking",
                    help="step rule (default backtracking)")
    sp.add_argument("--objective-tol", type=_positive_float, default=1e-14,
                    help="convergence threshold (default 1e-14)")
    sp.add_argument("--seed", type=int, default=None, help=f"RNG seed (default {DEFAULT_SEED})")
    sp.add_argument("--out", type=Path, help="write the best POVM as JSON")
    return p


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            out.write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def _scheme(name: str, n: int | None) -> Scheme:
    named = {"diagonal": Scheme.diagonal, "full": Scheme.full, "offdiagonal": Scheme.offdiagonal}
    if name in named:
        if n is None:
            raise UsageError(f"scheme {name!r} needs a dimension")
        return named[name](n)
    scheme = formats.scheme_from_dict(formats.load_json(name))
    if n is not None and scheme.n != n:
        raise UsageError(f"dimension mismatch: scheme file has n={scheme.n}, expected {n}")
    return scheme


def _state(path: Path | None, n: int) -> np.ndarray:
    if path is None:
        return np.eye(n) / n
    data = formats.load_json(path)
    if "rho" not in data:
        raise formats.FormatError(f"{path}: missing field 'rho'")
    rho = formats.matrix_from_json(data["rho"])
    if rho.shape != (n, n):
        raise UsageError(f"dimension mismatch: state is {rho.shape[0]}-dimensional, POVM is {n}")
    return rho


def _seed(args) -> int:
    if args.seed is None:
        print(f"seed: {DEFAULT_SEED} (default)", file=sys.stderr)
        return DEFAULT_SEED
    return args.seed


def _default_povm(scheme: Scheme) -> _csic.Povm:
    n = scheme.n
    if scheme == Scheme.diagonal(n):
        return _csic.build_from_difference_set(_ds.planar_set(n))
    if scheme == Scheme.offdiagonal(n):
        return _csic.diagonal_povm(n)
    if scheme == Scheme.full(n) and n == 2:
        return _csic.tetrahedral_sic()
    raise UsageError("no built-in POVM for this scheme and dimension; pass --povm")


def cmd_basis(args):
    _emit(formats.dumps(formats.basis_to_dict(build_basis(args.n))), args.out)
    return 0


def cmd_diffset_certify(args):
    if args.file is not None:
        data = formats.load_json(args.file)
        try:
            residues, N, lam = data["residues"], int(data["N"]), int(data.get("lambda", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise formats.FormatError(f"malformed difference set: {exc}") from None
    elif args.residues is not None and args.N is not None:
        residues, N, lam = args.residues, args.N, args.lam
    else:
        raise UsageError("give --file or both --residues and --N")
    cert = _ds.certify(residues, N, lam)
    if args.json:
        print(json.dumps({"N": N, "n": len(residues), "lambda": lam, "residues": list(residues),
                          "counts": list(cert.counts), "passed": cert.passed}))
    else:
        print(f"D = {sorted(residues)}  N = {N}  lambda = {lam}")
        print(cert.table())
    return 0 if cert.passed else 2


def cmd_diffset_search(args):
    found = _ds.search(args.N, args.n)
    if found is None:
        print("none found")
        return 0
    _emit(formats.dumps(found.to_dict()), args.out)
    return 0


def cmd_diffset_singer(args):
    _emit(formats.dumps(_ds.singer(args.s).to_dict()), args.out)
    return 0


def cmd_build(args):
    if args.diffset is not None:
        D = formats.diffset_from_dict(formats.load_json(args.diffset))
    else:
        D = _ds.planar_set(args.n)
    P = _csic.build_from_difference_set(D, args.n)
    _emit(formats.dumps(formats.povm_to_dict(P)), args.out)
    return 0


def _load_povm(path, tol=TOL):
    return formats.povm_from_dict(formats.load_json(path), tol=max(tol, TOL))


def cmd_certify(args):
    P = _load_povm(args.povm, args.tol)
    scheme = _scheme(args.scheme, P.n)
    cert = _csic.certify_csic(P, scheme, tol=args.tol)
    print(json.dumps(cert.to_dict()) if args.json else cert.table())
    return 0 if cert.passed else 2


def cmd_dual(args):
    P = _load_povm(args.povm)
    dual = _csic.canonical_dual(P, _scheme(args.scheme, P.n))
    _emit(formats.dumps(formats.dual_to_dict(dual)), args.out)
    return 0


def cmd_risk(args):
    P = _load_povm(args.povm)
    scheme = _scheme(args.scheme, P.n)
    if args.dual is not None:
        dual = formats.dual_from_dict(formats.load_json(args.dual))
    else:
        dual = _csic.canonical_dual(P, scheme)
    rho = _state(args.state, P.n)
    T = _csic.theoretical_risk(P, dual, rho, scheme)
    print(json.dumps({"risk": T, "dual_cost": _csic.dual_cost(P, dual)}))
    return 0


def cmd_simulate(args):
    seed = _seed(args)
    scheme = _scheme(args.scheme, args.n)
    P = _load_povm(args.povm) if args.povm is not None else _default_povm(scheme)
    rho = _state(args.state, args.n) if args.state_model == "fixed" else None
    if args.state_model == "fixed" and args.state is None:
        raise UsageError("--state-model fixed needs --state")
    cfg = tomo.SimConfig(args.n, scheme, P, args.state_model, args.shots, args.trials, seed,
                         rho=rho, exact=args.exact)
    res = tomo.run(cfg)
    if args.out is not None:
        _emit(res.csv(), args.out)
    summary = dict(res.summary(), seed=seed, shots=args.shots, state_model=args.state_model)
    text = json.dumps(summary) + "\n"
    sys.stdout.write(text)
    if args.summary is not None:
        _emit(text, args.summary)
    return 0


def cmd_optimize(args):
    seed = _seed(args)
    scheme = _scheme(args.scheme, args.n)
    cfg = optim.OptimConfig(args.n, scheme, restarts=args.restarts, max_iters=args.max_iters,
                            step_rule=args.step_rule, objective_tol=args.objective_tol, seed=seed)
    rep = optim.search(cfg)
    summary = {
        "best_objective": rep.best_objective,
        "converged": rep.converged,
        "iterations": rep.iterations,
        "restart": rep.restart,
        "certificate": rep.certificate.to_dict() if rep.certificate else None,
    }
    print(json.dumps(summary))
    if args.out is not None:
        elems = (args.n / scheme.N) * np.einsum("ki,kj->kij", rep.vectors, rep.vectors.conj())
        data = formats.povm_to_dict(_csic.complete(elems))
        data["objective"] = rep.best_objective
        _emit(formats.dumps(data), args.out)
    return 0


COMMANDS = {
    "basis": cmd_basis,
    "diffset-certify": cmd_diffset_certify,
    "diffset-search": cmd_diffset_search,
    "diffset-singer": cmd_diffset_singer,
    "build": cmd_build,
    "certify": cmd_certify,
    "dual": cmd_dual,
    "risk": cmd_risk,
    "simulate": cmd_simulate,
    "optimize": cmd_optimize,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except formats.FormatError as exc:
        print(f"csic: parse error: {exc}", file=sys.stderr)
    except _csic.UnderdeterminedSchemeError as exc:
        print(f"csic: underdetermined scheme: {exc}", file=sys.stderr)
    except UsageError as exc:
        print(f"csic: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"csic: invalid input: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
