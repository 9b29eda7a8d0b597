"""Command-line front end.

Every command reads a JSON process spec, writes a JSON report to stdout (or
``--out``), exits 1 on invalid input with an error document on stderr, and
exits 2 when a dense table or search would exceed its budget.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .bar import ExtremalityWarning, build_bar, sign_sequence, verify_extremal
from .certificates import Certificate, general_certificate, markov_certificate
from .errors import BudgetError, CapacityError, MixconcError, ValidationError
from .functions import parse_functional
from .io import SCHEMA, dumps_report, load_spec, parse_grid
from .mixing import contraction_profile, mixing_profile
from .montecarlo import compare, empirical_tail, exact_tail, sample_paths
from .norms import kappa_prefix, phi_norm, psi, psi_levels, psi_norm
from .process import HmmSpec, JointDist, MarkovSpec, build_hmm_joint, build_markov_joint, cell_budget


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _joint(spec, budget=None) -> JointDist:
    if isinstance(spec, JointDist):
        return spec
    if isinstance(spec, MarkovSpec):
        return build_markov_joint(spec, budget)
    return build_hmm_joint(spec, budget)[1]


def _markov(spec, what: str) -> MarkovSpec:
    if isinstance(spec, MarkovSpec):
        return spec
    if isinstance(spec, HmmSpec):
        return spec.hidden
    raise ValidationError(f"{what} needs a Markov or HMM spec, not an explicit joint")


def _prefix(spec, text: str, i: int) -> tuple[int, ...]:
    labels = [p for p in text.split(",") if p != ""] if text else []
    if len(labels) != i:
        raise ValidationError(f"--prefix must list {i} comma-separated symbols")
    alphabet = spec.alphabet
    return alphabet.encode(labels)


def _certificate(spec, c: float, metric: str, constant: str, budget) -> Certificate:
    if constant == "delta":
        cert = general_certificate(mixing_profile(_joint(spec, budget)), c)
        if metric != "hamming":
            cert = Certificate(cert.n, c, metric, "delta", cert.constant, cert.note)
        return cert
    if constant == "mn":
        return markov_certificate(contraction_profile(_markov(spec, "--constant mn")), c, metric)
    raise ValidationError(f"unknown constant kind {constant!r}")


def cmd_mixing(args, spec):
    return mixing_profile(_joint(spec, args.budget)).to_dict()


def cmd_contraction(args, spec):
    out = contraction_profile(_markov(spec, "contraction")).to_dict()
    if isinstance(spec, HmmSpec):
        out["chain"] = "hidden"
    return out


def cmd_certify(args, spec):
    cert = _certificate(spec, args.c, args.metric, args.constant, args.budget)
    grid = parse_grid(args.t)
    if args.tsv:
        rows = ["t\tbound\teffective"]
        rows += [f"{t!r}\t{b!r}\t{e!r}" for t, b, e in
                 zip(grid.tolist(), np.atleast_1d(cert.bound(grid)).tolist(),
                     np.atleast_1d(cert.effective(grid)).tolist())]
        Path(args.tsv).write_text("\n".join(rows) + "\n", encoding="utf-8")
    return cert.to_dict(grid)


def cmd_psi(args, spec):
    joint = _joint(spec, args.budget)
    kappa = kappa_prefix(joint, _prefix(spec, args.prefix, args.i))
    return {"i": args.i, "prefix": args.prefix.split(","), "psi": psi(kappa), "psi_neg": psi(-kappa),
            "psi_norm": psi_norm(kappa), "levels": psi_levels(kappa)}


def cmd_phi_oracle(args, spec):
    joint = _joint(spec, args.budget)
    kappa = kappa_prefix(joint, _prefix(spec, args.prefix, args.i))
    result = phi_norm(kappa, args.method, args.oracle_budget)
    out = {"i": args.i, "prefix": args.prefix.split(","), "value": result.value, "method": args.method,
           "psi_norm": psi_norm(kappa)}
    if result.argmax is not None:
        out["argmax"] = result.argmax.dense().tolist()
        out["argmax_index"] = result.index
    return out


def cmd_bar(args, spec):
    if not isinstance(spec, MarkovSpec):
        raise ValidationError("bar needs a Markov spec")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ExtremalityWarning)
        report = verify_extremal(spec, args.i, args.method, args.oracle_budget)
        out = {"extremal": report.to_dict(), "full_support": spec.full_support()}
        if args.z is not None:
            z = spec.alphabet.index(args.z)
            out["z"] = args.z
            out["sign_functions"] = [s.tolist() for s in sign_sequence(spec, z)]
            out["bar"] = build_bar(spec, z, args.sign, args.tol).rows()
    out["warnings"] = sorted({str(w.message) for w in caught})
    return out


def cmd_simulate(args, spec):
    if isinstance(spec, JointDist):
        raise ValidationError("simulate needs a Markov or HMM spec")
    table = None
    if args.table:
        table = json.loads(Path(args.table).read_text(encoding="utf-8"))
    phi = parse_functional(args.functional, spec.alphabet, spec.n, table)
    grid = parse_grid(args.t)
    c = args.c if args.c is not None else phi.lipschitz_const
    cert = _certificate(spec, c, args.metric, args.constant, args.budget)
    paths = sample_paths(spec, args.seed, args.count, workers=args.workers)
    if args.mean_mode == "exact":
        est = empirical_tail(paths, phi, grid, "exact", process=spec, seed=args.seed, metric=args.metric)
    else:
        est = empirical_tail(paths, phi, grid, "plug-in", seed=args.seed, metric=args.metric)
    report = compare(est, cert)
    if args.tsv:
        Path(args.tsv).write_text(report.to_tsv(), encoding="utf-8")
    out = {"estimate": est.to_dict(), "comparison": report.to_dict(), "functional": phi.name}
    if args.exact:
        out["exact_tail"] = exact_tail(spec, phi, grid, args.metric, args.budget).tail.tolist()
    return out


def cmd_verify(args, spec):
    from .suites import SUITES

    results = [check() for check in SUITES[args.suite]]
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"suite": args.suite, "passed": all(r.passed for r in results),
            "checks": [r.to_dict() for r in results]}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mixconc", description="Concentration certificates for dependent sequences.")
    parser.add_argument("--version", action="version", version=f"mixconc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, fn, help_text, needs_spec=True):
        p = sub.add_parser(name, help=help_text)
        if needs_spec:
            p.add_argument("--spec", required=True, help="JSON process spec")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--budget", type=int, default=None, help="dense-table cell budget")
        p.set_defaults(fn=fn, needs_spec=needs_spec)
        return p

    command("mixing", cmd_mixing, "mixing matrix and its row-sum norm")
    command("contraction", cmd_contraction, "contraction coefficients and M_n")

    p = command("certify", cmd_certify, "tail bound over a t grid")
    p.add_argument("--c", type=float, required=True, help="Lipschitz constant")
    p.add_argument("--metric", choices=("hamming", "normalized-hamming"), default="hamming")
    p.add_argument("--constant", choices=("delta", "mn"), default="delta")
    p.add_argument("--t", required=True, help="grid as start:step:end or a comma list")
    p.add_argument("--tsv", help="also write a TSV table here")

    for name, fn, text in (("psi", cmd_psi, "Psi functional of the kernel of V_i at a prefix"),
                           ("phi-oracle", cmd_phi_oracle, "exact Phi-norm of the kernel of V_i")):
        p = command(name, fn, text)
        p.add_argument("--i", type=int, required=True)
        p.add_argument("--prefix", required=True, help="comma-separated symbols z_1..z_i")
        if name == "phi-oracle":
            p.add_argument("--method", choices=("auto", "oracle", "lp"), default="auto")
            p.add_argument("--oracle-budget", type=int, default=None)

    p = command("bar", cmd_bar, "BAR construction and extremality report")
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--z", help="symbol for an explicit i = 1 construction")
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--tol", type=float, default=0.0, help="threshold for a positive sign")
    p.add_argument("--method", choices=("auto", "oracle", "lp"), default="auto")
    p.add_argument("--oracle-budget", type=int, default=None)

    p = command("simulate", cmd_simulate, "Monte Carlo tail versus certificate")
    p.add_argument("--functional", default="hamming-weight:a")
    p.add_argument("--table", help="JSON array for --functional table")
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--t", default="0:0.5:20")
    p.add_argument("--metric", choices=("hamming", "normalized-hamming"), default="hamming")
    p.add_argument("--constant", choices=("delta", "mn"), default="mn")
    p.add_argument("--c", type=float, default=None, help="defaults to the functional's constant")
    p.add_argument("--mean-mode", choices=("plug-in", "exact"), default="plug-in")
    p.add_argument("--exact", action="store_true", help="also report the enumerated tail")
    p.add_argument("--tsv", help="write the comparison table here")

    p = command("verify", cmd_verify, "run the verification suites", needs_spec=False)
    p.add_argument("--suite", choices=("all", "acceptance", "properties"), default="all")
    return parser


def _error(exc: Exception, code: int) -> int:
    doc = {"schema": SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc)}}
    print(json.dumps(doc, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.budget is None:
            args.budget = cell_budget()
        elif args.budget <= 0:
            raise ValidationError("--budget must be positive")
        spec = load_spec(args.spec) if args.needs_spec else None
        report = args.fn(args, spec)
        report = {"command": args.command, **report}
        text = dumps_report(report)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except (CapacityError, BudgetError) as exc:
        return _error(exc, 2)
    except (MixconcError, ValueError, OSError) as exc:
        return _error(exc, 1)
    if args.command == "verify" and not report["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
