"""Command-line front end.

    symortho orthonormalize --builtin monomials:4 --method loewdin
    symortho distance --input family.json
    symortho analyze --input family.csv --output json
    symortho stability --input a.csv --perturbed b.csv --epsilon 0.01

Exit codes: 0 success, 2 bad input or usage, 3 linearly dependent or
ill-conditioned family, 4 numerical failure, 5 an observed violation of
the stability bound (hypothesis true, conclusion false).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .analysis import distance_projection_oracle, distance_to_span, orthogonality_report, stability_check
from .errors import (
    NotPositiveDefiniteError,
    NumericalError,
    PreconditionError,
    ShapeError,
    UnsupportedRepresentationError,
)
from .io import FamilyInput, InputError, builtin_family, encode_array, load_family
from .linalg import gershgorin_bounds
from .orthonorm import (
    LOEWDIN,
    METHODS,
    condition_gram,
    loss_direct,
    metric,
    optimality_sample,
    orthonormalize,
)
from .spaces import format_polynomial, gram, normalize

SCHEMA_VERSION = 1
COMMANDS = ("orthonormalize", "distance", "analyze", "stability")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEPENDENT = 3
EXIT_NUMERICAL = 4
EXIT_VIOLATION = 5


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None = None
    builtin: str | None = None
    format: str | None = None
    method: str = LOEWDIN
    tol: float = 1e-10
    seed: int = 42
    trials: int = 1000
    epsilon: float | None = None
    output: str = "text"
    normalize_first: bool = False
    gamma_last: bool = False
    gamma_monomial: int | None = None
    perturbed_path: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if not self.tol > 0:
            raise InputError("--tol must be positive")
        if self.trials < 0:
            raise InputError("--trials must be >= 0")
        if self.command == "stability" and not (self.epsilon and self.epsilon > 0):
            raise InputError("stability needs --epsilon > 0")
        if (self.input_path is None) == (self.builtin is None):
            raise InputError("give exactly one of --input and --builtin")

    def echo(self) -> dict:
        """Settings that affect results; input location and encoding are left out."""
        return {
            "command": self.command,
            "builtin": self.builtin,
            "method": self.method,
            "tol": self.tol,
            "seed": self.seed,
            "trials": self.trials,
            "epsilon": self.epsilon,
            "normalize": self.normalize_first,
            "gamma_monomial": self.gamma_monomial,
        }


def _native(obj):
    """Convert numpy scalars/arrays and tuples to JSON-native values; NaN/inf become None."""
    if isinstance(obj, dict):
        return {str(k): _native(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_native(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _native(encode_array(obj))
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [_native(obj.real), _native(obj.imag)]
    return obj


@dataclass
class RunReport:
    """Outcome of one command; all fields are JSON-native so serialization round-trips."""

    command: str
    config: dict
    field: str
    n: int
    labels: list
    gram_condition: float | None = None
    lambda_min: float | None = None
    coefficients: list | None = None
    vectors: list | None = None
    loss: dict | None = None
    warnings: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        for f in fields(self):
            setattr(self, f.name, _native(getattr(self, f.name)))

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


# Commands


def _load(cfg: RunConfig) -> FamilyInput:
    if cfg.builtin:
        return builtin_family(cfg.builtin, cfg.gamma_monomial)
    return load_family(cfg.input_path, cfg.format, cfg.gamma_last)


def _family(cfg: RunConfig, fam: FamilyInput):
    vs = fam.family
    if cfg.normalize_first:
        vs, _ = normalize(vs)
    return vs


def _labels(vs):
    return [vs.label(i) for i in range(vs.n)]


def cmd_orthonormalize(cfg: RunConfig) -> tuple[RunReport, int]:
    fam = _load(cfg)
    vs = _family(cfg, fam)
    basis = orthonormalize(vs, cfg.method, tol=cfg.tol)
    lr = loss_direct(basis, vs)
    loss = {
        "method": lr.method,
        "direct": lr.loss,
        "per_vector": lr.per_vector,
        "closed_form": lr.closed_form,
    }
    payload = {"orthonormality_defect": basis.defect}
    if fam.monomial and not cfg.normalize_first:
        payload["polynomials"] = [format_polynomial(row) for row in basis.coeffs]
    if cfg.trials > 0:
        payload["optimality"] = optimality_sample(vs, cfg.trials, cfg.seed).to_dict()
    report = RunReport(
        command=cfg.command,
        config=cfg.echo(),
        field=vs.field,
        n=vs.n,
        labels=_labels(vs),
        gram_condition=basis.condition,
        lambda_min=basis.lambda_min,
        coefficients=basis.coeffs,
        vectors=basis.vectors.coordinates if basis.vectors is not None else None,
        loss=loss,
        warnings=list(basis.warnings),
        payload=payload,
    )
    return report, EXIT_OK


def cmd_distance(cfg: RunConfig) -> tuple[RunReport, int]:
    fam = _load(cfg)
    vs = _family(cfg, fam)
    if fam.gamma is not None:
        if cfg.normalize_first:
            raise InputError("--normalize is not supported with a coordinate gamma")
        det = distance_to_span(fam.gamma, vs)
        oracle = distance_projection_oracle(fam.gamma, vs)
    elif fam.extended_gram is not None:
        if cfg.normalize_first:
            raise InputError("--normalize is not supported with an extended Gram")
        det = distance_to_span(fam.extended_gram, vs)
        oracle = None
    else:
        raise InputError("distance needs gamma (JSON 'gamma', --gamma-last, 'extended_gram' or --gamma-monomial)")
    cond = condition_gram(gram(vs))
    payload = {"gram_determinant": det.to_dict(), "projection_oracle": None, "relative_difference": None}
    if oracle is not None:
        payload["projection_oracle"] = oracle.to_dict()
        scale = max(abs(oracle.distance), np.finfo(float).tiny)
        payload["relative_difference"] = abs(det.distance - oracle.distance) / scale
    report = RunReport(
        command=cfg.command,
        config=cfg.echo(),
        field=vs.field,
        n=vs.n,
        labels=_labels(vs),
        gram_condition=cond.condition,
        lambda_min=cond.lambda_min,
        payload=payload,
    )
    return report, EXIT_OK


def cmd_analyze(cfg: RunConfig) -> tuple[RunReport, int]:
    fam = _load(cfg)
    vs = fam.family
    rep = orthogonality_report(vs)
    unit, _ = normalize(vs)
    cond = condition_gram(gram(unit))
    payload = rep.to_dict()
    payload["gershgorin_interval"] = list(gershgorin_bounds(metric(gram(unit))))
    report = RunReport(
        command=cfg.command,
        config=cfg.echo(),
        field=vs.field,
        n=vs.n,
        labels=_labels(vs),
        gram_condition=cond.condition,
        lambda_min=cond.lambda_min,
        loss={"method": LOEWDIN, "closed_form": rep.loewdin_loss},
        payload=payload,
    )
    return report, EXIT_OK


def cmd_stability(cfg: RunConfig) -> tuple[RunReport, int]:
    if not cfg.perturbed_path:
        raise InputError("stability needs --perturbed PATH")
    fam = _load(cfg)
    other = load_family(cfg.perturbed_path, cfg.format)
    vs, pert = fam.family, other.family
    if not (vs.has_coordinates and pert.has_coordinates):
        raise InputError("stability needs coordinate inputs for both families")
    if vs.coordinates.shape != pert.coordinates.shape:
        raise InputError(
            f"family shapes differ: {vs.coordinates.shape} vs {pert.coordinates.shape}"
        )
    rep = stability_check(vs, pert, cfg.epsilon)
    payload = rep.to_dict()
    notes = []
    if not rep.hypothesis_met:
        notes.append("hypothesis not met (max perturbation >= delta); the implication is vacuous")
    if rep.theorem_violation:
        notes.append("BOUND VIOLATION: perturbation below delta but the bound failed")
    payload["notes"] = notes
    report = RunReport(
        command=cfg.command,
        config=cfg.echo(),
        field=vs.field,
        n=vs.n,
        labels=_labels(vs),
        gram_condition=None,
        lambda_min=None,
        payload=payload,
    )
    return report, EXIT_VIOLATION if rep.theorem_violation else EXIT_OK


HANDLERS = {
    "orthonormalize": cmd_orthonormalize,
    "distance": cmd_distance,
    "analyze": cmd_analyze,
    "stability": cmd_stability,
}


def run(cfg: RunConfig) -> tuple[RunReport, int]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return HANDLERS[cfg.command](cfg)


# Text rendering


def _fmt(x, digits=4):
    if x is None:
        return "n/a"
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, float) for v in x):
        return f"{x[0]:.{digits}f}{x[1]:+.{digits}f}i"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        if x != 0 and (abs(x) < 1e-3 or abs(x) >= 1e6):
            return f"{x:.{digits}e}"
        return f"{x:.{digits}f}"
    return str(x)


def _matrix_lines(rows, indent="  "):
    cells = [[_fmt(v) for v in row] for row in rows]
    width = max(len(c) for row in cells for c in row)
    return [indent + " ".join(c.rjust(width) for c in row) for row in cells]


def render_text(r: RunReport) -> str:
    out = [f"{r.command}: n = {r.n}, field = {r.field}"]
    if r.gram_condition is not None:
        out.append(f"Gram condition number: {_fmt(r.gram_condition)}  (lambda_min {_fmt(r.lambda_min)})")
    p = r.payload
    if r.command == "orthonormalize":
        out.append(f"method: {r.config['method']}")
        out.append("coefficient matrix (rows = output vectors over the input):")
        out += _matrix_lines(r.coefficients)
        if "polynomials" in p:
            out.append("orthonormal polynomials:")
            out += [f"  eps_{i + 1} = {s}" for i, s in enumerate(p["polynomials"])]
        if r.vectors is not None:
            out.append("orthonormal vectors:")
            out += _matrix_lines(r.vectors)
        out.append(f"loss (direct): {_fmt(r.loss['direct'])}")
        if r.loss.get("closed_form") is not None:
            out.append(f"loss (closed form n + tr G - 2 tr G^1/2): {_fmt(r.loss['closed_form'])}")
        out.append(f"orthonormality defect: {_fmt(p['orthonormality_defect'])}")
        opt = p.get("optimality")
        if opt:
            out.append(
                f"optimality: {opt['trials']} Haar competitors (seed {opt['seed']}), "
                f"competitor loss in [{_fmt(opt['min_competitor_loss'])}, {_fmt(opt['max_competitor_loss'])}], "
                f"min margin {_fmt(opt['min_margin'])}, violations {opt['violations']}"
            )
    elif r.command == "distance":
        d = p["gram_determinant"]
        out.append(
            f"distance (Gram determinants): {_fmt(d['distance'], 8)}  "
            f"= sqrt({_fmt(d['numerator_det'], 6)} / {_fmt(d['denominator_det'], 6)})"
        )
        if p["projection_oracle"] is not None:
            out.append(f"distance (projection):        {_fmt(p['projection_oracle']['distance'], 8)}")
            out.append(f"relative difference: {_fmt(p['relative_difference'], 3)}")
    elif r.command == "analyze":
        out.append(f"epsilon (max off-diagonal of normalized Gram): {_fmt(p['epsilon'])}")
        out.append(f"bound applicable (eps < 1/(2(n-1))): {_fmt(p['bound_applicable'])}")
        out.append(f"loewdin loss: {_fmt(p['loewdin_loss'])}")
        out.append(f"bound 2(n-1)eps: {_fmt(p['loss_bound'])}   comparison 6(n-1)eps: {_fmt(p['comparison_bound'])}")
        if p["bound_satisfied"] is not None:
            out.append(f"bound satisfied: {_fmt(p['bound_satisfied'])}")
        lo, hi = p["gershgorin_interval"]
        out.append(f"Gershgorin eigenvalue interval: [{_fmt(lo)}, {_fmt(hi)}]")
        out.append(f"|tr G^1/2 - n| = {_fmt(p['sqrt_trace_gap'])} <= (n-1)eps = {_fmt(p['sqrt_trace_bound'])}")
    elif r.command == "stability":
        out.append(f"epsilon: {_fmt(p['epsilon'])}   delta: {_fmt(p['delta'])}   ||G^-1||: {_fmt(p['g_inv_norm'])}")
        out.append(f"max ||alpha_i - beta_i||: {_fmt(p['max_vector_perturbation'])}")
        out.append(f"||K alpha - K beta||^2: {_fmt(p['k_distance_sq'])}  (trace identity {_fmt(p['k_distance_sq_trace'])})")
        out.append(f"hypothesis met: {_fmt(p['hypothesis_met'])}   bound satisfied: {_fmt(p['bound_satisfied'])}")
        out += [f"note: {s}" for s in p["notes"]]
    out += [f"warning: {w}" for w in r.warnings]
    return "\n".join(out) + "\n"


# Entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", help="input file (CSV or JSON); '-' reads stdin")
    src.add_argument("--builtin", help="built-in family: monomials:N or hilbert:N")
    common.add_argument("--format", choices=["csv", "json"], help="input format (default: by file extension)")
    common.add_argument("--method", choices=METHODS, default=LOEWDIN)
    common.add_argument("--tol", type=float, default=1e-10, help="pivot tolerance for the baseline methods")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=int, default=1000, help="Haar competitors for the optimality sample (0 skips)")
    common.add_argument("--epsilon", type=float)
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("--normalize", action="store_true", help="scale input vectors to unit norm first")
    common.add_argument("--gamma-last", action="store_true", help="CSV: last row is gamma")
    common.add_argument("--gamma-monomial", type=int, help="with --builtin monomials:N, gamma = x^K")
    common.add_argument("--perturbed", help="stability: perturbed family file")

    parser = argparse.ArgumentParser(prog="symortho", description="Least-squares orthonormalization")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("orthonormalize", parents=[common], help="orthonormalize a family")
    sub.add_parser("distance", parents=[common], help="distance from gamma to the span")
    sub.add_parser("analyze", parents=[common], help="mutual-orthogonality report")
    sub.add_parser("stability", parents=[common], help="perturbation stability check")
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=args.input,
        builtin=args.builtin,
        format=args.format,
        method=args.method,
        tol=args.tol,
        seed=args.seed,
        trials=args.trials,
        epsilon=args.epsilon,
        output=args.output,
        normalize_first=args.normalize,
        gamma_last=args.gamma_last,
        gamma_monomial=args.gamma_monomial,
        perturbed_path=args.perturbed,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        report, code = run(cfg)
    except NotPositiveDefiniteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEPENDENT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InputError, ShapeError, UnsupportedRepresentationError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(report.to_json() if cfg.output == "json" else render_text(report))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
