"""Executable checks of the Poincare inequality and its supporting facts.

Inequality checks compare against certified *upper* bounds for projective
norms, so a failing check always indicates an implementation bug rather
than a tight case.
"""

from __future__ import annotations

import hashlib
import math
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__
from .canonical import MAX_CANONICAL_ENTRIES
from .coeff_algebra import MatrixModel, l2_norm, op_norm
from .derivation import fdq
from .errors import CapExceededError, RadiusError
from .models_rng import GENERATOR_FAMILY, SuiteConfig, random_model, random_poly, resolve_spec, trial_rng
from .ncpoly import NCPoly, norm_R_upper_detail
from .tensor2 import SPATIAL_DIM_CAP, mu_idE_eval, pi_upper_detail, sharp, spatial_norm, x_difference

VARIANTS = ("l2", "op")
CHECK_NAMES = ("telescoping", "poincare_l2", "poincare_op", "kernel", "lemma4")


@dataclass
class CheckReport:
    check_name: str
    inputs_digest: str
    lhs: float
    rhs: float
    margin: float
    residual: float
    passed: bool | None
    representation_used: str
    kind: str = "inequality"
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def skipped(self) -> bool:
        return self.passed is None

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_name": self.check_name,
            "inputs_digest": self.inputs_digest,
            "kind": self.kind,
            "lhs": _f(self.lhs),
            "rhs": _f(self.rhs),
            "margin": _f(self.margin),
            "residual": _f(self.residual),
            "pass": self.passed,
            "representation_used": self.representation_used,
            "details": {k: _jsonable(v) for k, v in sorted(self.details.items())},
        }


def _f(x: float) -> float:
    x = float(x)
    if math.isnan(x):
        return 0.0
    return x


def _jsonable(v: Any) -> Any:
    if isinstance(v, (bool, str, int)) or v is None:
        return v
    if isinstance(v, (float, np.floating)):
        return _f(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


def poly_digest(p: NCPoly, model: MatrixModel | None = None) -> str:
    h = hashlib.sha256()
    for w, m in p.terms:
        h.update(np.complex128(w).tobytes())
        for b in m.coeffs:
            h.update(np.ascontiguousarray(b).tobytes())
    if model is not None:
        h.update(np.ascontiguousarray(model.X).tobytes())
    return h.hexdigest()[:16]


# -- individual checks ----------------------------------------------------


def check_telescoping(p: NCPoly, model: MatrixModel, tol: float | None = None, digest: str | None = None) -> CheckReport:
    """Compare ``(mu o (id (x) E))(dp # (X(x)1 - 1(x)X))`` with ``p(X) - E[p(X)]``."""
    tol = model.tolerance if tol is None else tol
    u = sharp(fdq(p), x_difference(p.algebra))
    via_proof = mu_idE_eval(u, model)
    value = p.evaluate(model)
    direct = value - model.E(value)
    residual = op_norm(via_proof - direct)
    scale = 1.0 + op_norm(value)
    return CheckReport(
        check_name="telescoping",
        inputs_digest=digest or poly_digest(p, model),
        lhs=op_norm(via_proof),
        rhs=op_norm(direct),
        margin=tol * scale - residual,
        residual=residual,
        passed=bool(residual <= tol * scale),
        representation_used="stored",
        kind="identity",
        details={"scale": scale, "relative_residual": residual / scale, "tensor_terms": len(u.terms)},
    )


def check_poincare(
    p: NCPoly,
    model: MatrixModel,
    norm_variant: str = "l2",
    tol: float | None = None,
    canonical_cap: int = MAX_CANONICAL_ENTRIES,
    digest: str | None = None,
) -> CheckReport:
    """``|p(X) - E[p(X)]| <= 2 |X| * pi_upper(dp)`` in the L2 or operator norm.

    The operator-norm variant measures both ``p(X) - E[p(X)]`` and ``X`` in
    the operator norm.
    """
    if norm_variant not in VARIANTS:
        raise ValueError(f"norm_variant must be one of {VARIANTS}")
    tol = model.tolerance if tol is None else tol
    value = p.evaluate(model)
    deviation = value - model.E(value)
    if norm_variant == "l2":
        lhs, x_size = l2_norm(deviation), model.x_l2
    else:
        lhs, x_size = op_norm(deviation), model.x_op
    pi, rep = pi_upper_detail(fdq(p), model, "min", canonical_cap)
    rhs = 2.0 * x_size * pi
    margin = rhs - lhs
    return CheckReport(
        check_name=f"poincare_{norm_variant}",
        inputs_digest=digest or poly_digest(p, model),
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        residual=0.0,
        passed=bool(margin >= -tol),
        representation_used=rep,
        details={"x_norm": x_size, "pi_upper": pi, "ratio": lhs / rhs if rhs > 0 else 0.0},
    )


def check_kernel(p: NCPoly, canonical_cap: int = MAX_CANONICAL_ENTRIES, digest: str | None = None) -> CheckReport:
    """Formal kernel statement: canonical ``dp == 0`` iff ``p`` has only degree-0 words."""
    degrees = sorted(p.canonical(canonical_cap).arrays)
    constant_only = all(n == 0 for n in degrees)
    derivative = fdq(p).canonical(canonical_cap)
    derivative_zero = derivative.is_zero()
    return CheckReport(
        check_name="kernel",
        inputs_digest=digest or poly_digest(p),
        lhs=float(derivative.max_abs()),
        rhs=0.0,
        margin=0.0,
        residual=float(derivative.max_abs()) if constant_only else 0.0,
        passed=bool(derivative_zero == constant_only),
        representation_used="canonical",
        kind="equivalence",
        details={
            "canonical_degrees": degrees,
            "derivative_zero": derivative_zero,
            "constant_only": constant_only,
        },
    )


def sobolev_norm(p: NCPoly, model: MatrixModel, representation: str = "min") -> float:
    """Upper bound on ``||p(X)|| + ||dp||_pi`` (exact first summand)."""
    pi, _ = pi_upper_detail(fdq(p), model, representation)
    return op_norm(p.evaluate(model)) + pi


def _growth_term(n: int, ratio: float, R: float) -> float:
    return n * ratio ** (n - 1) / R


def growth_constant(norm_x: float, R: float) -> float:
    """``sup_n n ||X||^(n-1) / R^n`` for ``||X|| < R`` (with ``0^0 = 1``).

    The sequence ``n rho^(n-1)`` with ``rho = ||X||/R`` is unimodal with real
    maximizer ``-1/ln(rho)``; the integer maximum sits at its floor or ceiling.
    """
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    if norm_x < 0:
        raise ValueError(f"norm_x must be nonnegative, got {norm_x}")
    if norm_x >= R:
        raise RadiusError(f"||X|| = {norm_x} must be smaller than R = {R}")
    ratio = norm_x / R
    if ratio == 0.0:
        return 1.0 / R
    peak = -1.0 / math.log(ratio)
    candidates = {1, max(1, math.floor(peak)), max(1, math.ceil(peak))}
    return max(_growth_term(n, ratio, R) for n in sorted(candidates))


def growth_constant_bruteforce(norm_x: float, R: float, n_max: int = 10**6) -> float:
    """Maximum of the same sequence over ``n = 1..n_max`` by enumeration."""
    if norm_x >= R:
        raise RadiusError(f"||X|| = {norm_x} must be smaller than R = {R}")
    ratio = norm_x / R
    best = 0.0
    for n in range(1, n_max + 1):
        value = _growth_term(n, ratio, R)
        if value > best:
            best = value
        elif value == 0.0:
            # ratio**(n-1) has underflowed and stays zero from here on
            break
    return best


def check_lemma4_bounds(
    p: NCPoly,
    R: float,
    model: MatrixModel,
    tol: float | None = None,
    representation: str = "stored",
    digest: str | None = None,
) -> CheckReport:
    """The three radius-``R`` bounds on one shared representation of ``p``.

    (a) ``||p(X)|| <= |||p|||_R``; (b) spatial ``<=`` projective bound of
    ``dp``; (c) projective bound of ``dp <= C |||p|||_R``.
    """
    tol = model.tolerance if tol is None else tol
    x_norm = model.x_op
    C = growth_constant(x_norm, R)
    if representation == "canonical":
        rep = NCPoly.from_canonical(p.algebra, p.canonical())
    elif representation == "stored":
        rep = p
    else:
        raise ValueError("representation must be 'stored' or 'canonical'")
    r_norm, _ = norm_R_upper_detail(rep, R, "stored")
    derivative = fdq(rep)
    pi, _ = pi_upper_detail(derivative, model, "stored")
    value_norm = op_norm(rep.evaluate(model))

    subs: dict[str, dict[str, Any]] = {}

    def sub(name: str, lhs: float, rhs: float) -> None:
        margin = rhs - lhs
        subs[name] = {"lhs": lhs, "rhs": rhs, "margin": margin, "pass": bool(margin >= -tol * (1.0 + abs(rhs)))}

    sub("a_eval_vs_R", value_norm, r_norm)
    if model.dim <= SPATIAL_DIM_CAP:
        sub("b_spatial_vs_pi", spatial_norm(derivative, model), pi)
    sub("c_pi_vs_growth", pi, C * r_norm)
    worst = min(subs, key=lambda k: subs[k]["margin"])
    return CheckReport(
        check_name="lemma4",
        inputs_digest=digest or poly_digest(p, model),
        lhs=subs[worst]["lhs"],
        rhs=subs[worst]["rhs"],
        margin=subs[worst]["margin"],
        residual=0.0,
        passed=all(s["pass"] for s in subs.values()),
        representation_used=representation,
        details={"R": R, "C": C, "x_norm": x_norm, "binding": worst, "sub_checks": subs},
    )


# -- suite ---------------------------------------------------------------


def _skipped(name: str, digest: str, reason: str) -> CheckReport:
    return CheckReport(name, digest, 0.0, 0.0, 0.0, 0.0, None, "none", details={"skipped": reason})


def _guard(name: str, digest: str, fn: Callable[[], CheckReport]) -> CheckReport:
    try:
        return fn()
    except CapExceededError as exc:
        return _skipped(name, digest, str(exc))


def run_trial(config: SuiteConfig, trial: int) -> list[CheckReport]:
    rng = trial_rng(config.seed, trial)
    lo, hi = config.dim_range
    n = int(rng.integers(lo, hi + 1))
    spec = resolve_spec(rng, config.B_spec[int(rng.integers(len(config.B_spec)))], n)
    model = random_model(rng, n, spec, config.tolerance)
    p = random_poly(rng, model.coeff_algebra, config.max_degree, config.max_terms, config.coeff_scale)
    R = config.R_factor * model.x_op
    digest = f"seed={config.seed};trial={trial};config={config.digest()}"
    tol = config.tolerance
    cap = config.canonical_cap
    reports = [
        _guard("telescoping", digest, lambda: check_telescoping(p, model, tol, digest)),
        _guard("poincare_l2", digest, lambda: check_poincare(p, model, "l2", tol, cap, digest)),
        _guard("poincare_op", digest, lambda: check_poincare(p, model, "op", tol, cap, digest)),
        _guard("kernel", digest, lambda: check_kernel(p, cap, digest)),
        _guard("lemma4", digest, lambda: check_lemma4_bounds(p, R, model, tol, "stored", digest)),
    ]
    info = {
        "trial": trial,
        "dim": n,
        "B": spec,
        "B_dim": model.coeff_algebra.dim,
        "degree": p.degree,
        "terms": len(p.terms),
    }
    for r in reports:
        r.details.update(info)
    return reports


def _run_trial_star(args: tuple[SuiteConfig, int]) -> list[CheckReport]:
    return run_trial(*args)


def _quantiles(values: list[float]) -> dict[str, float]:
    if not values:
        return {}
    arr = np.asarray(values, dtype=float)
    qs = {"min": 0.0, "p05": 0.05, "p25": 0.25, "median": 0.5, "p75": 0.75, "p95": 0.95, "max": 1.0}
    return {k: float(np.quantile(arr, q)) for k, q in qs.items()}


def summarize(reports: list[CheckReport], trials: int) -> dict[str, Any]:
    per_check: dict[str, dict[str, Any]] = {}
    for name in CHECK_NAMES:
        rs = [r for r in reports if r.check_name == name]
        ran = [r for r in rs if not r.skipped]
        per_check[name] = {
            "count": len(rs),
            "passed": sum(1 for r in ran if r.passed),
            "failed": sum(1 for r in ran if not r.passed),
            "skipped": len(rs) - len(ran),
            "min_margin": min((r.margin for r in ran), default=0.0),
            "max_residual": max((r.residual for r in ran), default=0.0),
        }
    inequality = [r for r in reports if r.kind == "inequality" and not r.skipped]
    identity = [r for r in reports if r.kind == "identity" and not r.skipped]
    distribution = {}
    for variant in VARIANTS:
        rs = [r for r in reports if r.check_name == f"poincare_{variant}" and not r.skipped]
        distribution[variant] = {
            "margin": _quantiles([r.margin for r in rs]),
            "ratio_lhs_over_rhs": _quantiles([r.lhs / r.rhs for r in rs if r.rhs > 0]),
        }
    failures = sum(c["failed"] for c in per_check.values())
    return {
        "trials": trials,
        "checks": len(reports),
        "failures": failures,
        "skipped": sum(c["skipped"] for c in per_check.values()),
        "pass": failures == 0,
        "min_margin": min((r.margin for r in inequality), default=0.0),
        "max_residual": max((r.residual for r in identity), default=0.0),
        "max_relative_residual": max(
            (r.details.get("relative_residual", 0.0) for r in identity), default=0.0
        ),
        "per_check": per_check,
        "poincare_margin_distribution": distribution,
    }


def run_suite(config: SuiteConfig) -> dict[str, Any]:
    """Run every check over ``config.trials`` seeded trials.

    The returned mapping is JSON-ready and depends only on the config
    (``workers`` changes scheduling, not results).
    """
    indices = range(config.trials)
    if config.workers > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            batches = list(pool.map(_run_trial_star, [(config, t) for t in indices]))
    else:
        batches = [run_trial(config, t) for t in indices]
    reports = [r for batch in batches for r in batch]
    return {
        "header": {
            "package": "ncpoincare",
            "version": __version__,
            "generator": GENERATOR_FAMILY,
            "config": config.to_dict(),
            "config_digest": config.digest(),
        },
        "summary": summarize(reports, config.trials),
        "trials": [r.to_dict() for r in reports],
    }
