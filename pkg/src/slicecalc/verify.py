"""Verification suites: every identity of the library checked on fixtures and seeded fuzz cases.

A report is a list of checks {check, inputs-digest, residual, threshold, pass}
plus a digest of the whole report; the digest depends only on the config and
seed, so reruns on one platform reproduce it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .calculus import ContourQuadrature, PowerSeries, intrinsic, taylor_formula
from .clifford import Multivector
from .config import RunConfig
from .contour import Contour
from .errors import HypothesisError, SliceCalcError
from .fixtures import (
    CommutingPair,
    commuting_pair,
    complete_pair,
    enclosing_contour,
    random_paravector,
    random_paravector_operator,
    random_unit,
)
from .io import digest
from .operators import CliffordOperator, op_norm
from .resolvent import (
    ResolventSide,
    formal_pair_diagnostic,
    resolvent_equation_residual,
    resolvent_equation_scale,
    resolvent_series,
    s_resolvent,
    star_power_pair,
)
from .calculus import resolvent_derivative_residual
from .series import (
    ROUNDOFF,
    check_pair_hypotheses,
    coefficient_norms,
    kn_estimate,
    kt_estimate,
    lemma_rpfl_residual,
    main_series_residual,
    resolvent_taylor,
    s_m_closed_form_residual,
    sigma_series_report,
)
from .spectrum import scan_spectrum

SUITES = ("lemmas4", "resolvent-eq", "powers", "spectrum-stable", "resolvent-taylor", "derivatives", "taylor", "bounds")
SIDES = (ResolventSide.Left, ResolventSide.Right)


@dataclass
class Check:
    check: str
    inputs_digest: str
    residual: float | None
    threshold: float | None
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"check": self.check, "inputs-digest": self.inputs_digest, "residual": self.residual,
               "threshold": self.threshold, "pass": self.passed}
        out.update(self.detail)
        return out


@dataclass
class Overrides:
    """Operators supplied on the command line in place of the fuzzed pairs."""

    T: CliffordOperator | None = None
    N: CliffordOperator | None = None


def _check(name: str, inputs, fn: Callable[[], tuple], threshold: float | None = None) -> Check:
    """Run ``fn`` -> (residual, threshold[, detail]); library errors become failed checks."""
    key = digest(inputs)
    try:
        out = fn()
    except HypothesisError as exc:
        return Check(name, key, None, threshold, False, {"error": "hypothesis", "message": str(exc)})
    except SliceCalcError as exc:
        return Check(name, key, None, threshold, False, {"error": type(exc).__name__, "message": str(exc)})
    residual, thr = float(out[0]), float(out[1])
    detail = out[2] if len(out) > 2 else {}
    return Check(name, key, residual, thr, bool(residual <= thr), detail)


def _rng(cfg: RunConfig, suite: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, SUITES.index(suite) if suite in SUITES else len(SUITES)])


def _shape(rng: np.random.Generator) -> tuple[int, int]:
    return int(rng.integers(2, 4)), int(rng.integers(2, 5))


def _sides_max(fn: Callable[[ResolventSide], float]) -> tuple[float, dict]:
    vals = {side.value: fn(side) for side in SIDES}
    return max(vals.values()), vals


# suites

def suite_lemmas4(cfg: RunConfig, overrides: Overrides | None = None) -> list[Check]:
    """Power-sum lemmas, the closed form of S(m) and the main series tail estimate."""
    rng = _rng(cfg, "lemmas4")
    checks = []
    for case in range(cfg.lemma_cases):
        n, d = _shape(rng)
        T = random_paravector_operator(rng, n, d, float(rng.uniform(0.5, 2.0)))
        ratio = float(rng.uniform(0.1, 0.8))
        s = random_paravector(rng, n, op_norm(T) / ratio)
        inputs = {"T": T.entries, "s": s.to_json()}
        r = T.rho_norm() / s.norm()

        def rpfl():
            rel = [lemma_rpfl_residual(T, s, k) / max((k + 1) * r ** k, 1e-300) for k in range(9)]
            return max(rel), cfg.residual_tol, {"worst_order": int(np.argmax(rel)), "relative": True}

        def closed_form():
            rel = []
            for m in range(9):
                scale = 1.0 + (1.0 + r) ** 2 * sum((k + 1) * r ** k for k in range(m + 1))
                rel.append(s_m_closed_form_residual(T, s, m) / scale)
            return max(rel), cfg.residual_tol, {"worst_order": int(np.argmax(rel)), "relative": True}

        checks.append(_check(f"lemmas4/power-sum[{case}]", inputs, rpfl))
        checks.append(_check(f"lemmas4/partial-sum-closed-form[{case}]", inputs, closed_form))
        for K in cfg.main_K:
            def main(K=K):
                rep = main_series_residual(T, s, K)
                floor = rep.notes["roundoff_floor"]
                return rep.residual, max(rep.bound, floor), {
                    "K": K, "ratio": rep.notes["ratio"], "stated_bound": rep.bound, "roundoff_floor": floor,
                    "double_sum_residual": rep.notes["double_sum_residual"],
                }
            checks.append(_check(f"lemmas4/main-series[{case},K={K}]", inputs, main))
    return checks


def suite_resolvent_eq(cfg: RunConfig, overrides: Overrides | None = None) -> list[Check]:
    """Both forms of the S-resolvent equation on fuzzed (T, s, p)."""
    rng = _rng(cfg, "resolvent-eq")
    checks = []
    for case in range(cfg.resolvent_cases):
        n, d = _shape(rng)
        T = random_paravector_operator(rng, n, d, 1.0)
        s = random_paravector(rng, n, float(rng.uniform(1.3, 3.0)))
        p = random_paravector(rng, n, float(rng.uniform(1.3, 3.0)))
        inputs = {"T": T.entries, "s": s.to_json(), "p": p.to_json()}

        def first():
            scale = resolvent_equation_scale(T, s, p, cfg.cond_cap)
            r1, _ = resolvent_equation_residual(T, s, p, cfg.cond_cap)
            return r1 / scale, cfg.residual_tol, {"relative": True}

        def second():
            scale = resolvent_equation_scale(T, s, p, cfg.cond_cap)
            _, r2 = resolvent_equation_residual(T, s, p, cfg.cond_cap)
            _, r2c = resolvent_equation_residual(T, s, p, cfg.cond_cap, sign_corrected=True)
            return r2 / scale, cfg.residual_tol, {"relative": True, "sign_corrected_residual": r2c / scale}

        checks.append(_check(f"resolvent-eq/first-form[{case}]", inputs, first))
        checks.append(_check(f"resolvent-eq/second-form[{case}]", inputs, second))
    return checks


def suite_powers(cfg: RunConfig, overrides: Overrides | None = None) -> list[Check]:
    """Cauchy-kernel series against the closed-form resolvents and star products of resolvent powers."""
    rng = _rng(cfg, "powers")
    checks = []
    for case in range(cfg.series_cases):
        n, d = _shape(rng)
        T = random_paravector_operator(rng, n, d, float(rng.uniform(0.5, 2.0)))
        s = random_paravector(rng, n, 2.0 * op_norm(T))
        inputs = {"T": T.entries, "s": s.to_json()}

        def series():
            def gap(side):
                exact = s_resolvent(T, s, side, cfg.cond_cap)
                return (resolvent_series(T, s, cfg.series_K, side) - exact).rho_norm() / exact.rho_norm()
            worst, per_side = _sides_max(gap)
            return worst, cfg.series_tol, {"K": cfg.series_K, "per_side": per_side, "relative": True}

        def pairs():
            worst = 0.0
            for m, k in ((1, 1), (2, 1), (1, 2), (2, 2)):
                for side in SIDES:
                    ref = star_power_pair(T, s, m, k, side, check=False).rho_norm()
                    worst = max(worst, formal_pair_diagnostic(T, s, m, k, 200, side) / ref)
            return worst, cfg.series_tol, {"relative": True}

        checks.append(_check(f"powers/cauchy-series[{case}]", inputs, series))
        if case < max(1, cfg.series_cases // 4):
            checks.append(_check(f"powers/star-pairs[{case}]", inputs, pairs))
    return checks


def _pairs(cfg: RunConfig, overrides: Overrides | None, suite: str) -> list[CommutingPair]:
    rng = np.random.default_rng([cfg.seed, len(SUITES) + 1])
    if overrides is not None and overrides.T is not None:
        T = overrides.T
        N = overrides.N if overrides.N is not None else T * 0.05
        return [complete_pair(T, N, rng, 0.5, cfg.scan_config())]
    return [commuting_pair(rng, int(rng.integers(2, 4)), int(rng.integers(2, 4)), 0.5, cfg.scan_config())
            for _ in range(cfg.cases)]


def suite_spectrum_stable(cfg: RunConfig, overrides: Overrides | None = None) -> list[Check]:
    """The perturbation series inverts Q_s(T+N) from both sides; the coefficients A_n vanish."""
    checks = []
    for case, pair in enumerate(_pairs(cfg, overrides, "spectrum-stable")):
        inputs = pair.inputs()
        holder = {}

        def hyp():
            return check_pair_hypotheses(pair.T, pair.N, pair.s, pair.eps, pair.scan_T, pair.scan_N)

        def report():
            if "rep" not in holder:
                holder["rep"] = sigma_series_report(pair.T, pair.N, pair.s, cfg.sigma_K, hyp())
            return holder["rep"]

        def right():
            rep = report()
            return rep.notes["sigma_Q"], cfg.series_tol, {"K": rep.K, "theta": pair.theta,
                                                          "hypotheses": rep.notes["hypotheses"]}

        def left():
            rep = report()
            return rep.notes["Q_sigma"], cfg.series_tol, {"K": rep.K, "theta": pair.theta}

        def coefficients():
            rows = coefficient_norms(pair.T, pair.s)
            rel = [a / scale for _, a, scale in rows]
            return max(rel), cfg.residual_tol, {"orders": [r[0] for r in rows], "relative": rel}

        checks.append(_check(f"spectrum-stable/sigma-times-Q[{case}]", inputs, right))
        checks.append(_check(f"spectrum-stable/Q-times-sigma[{case}]", inputs, left))
        checks.append(_check(f"spectrum-stable/coefficients[{case}]", inputs, coefficients))
    return checks


def suite_resolvent_taylor(cfg: RunConfig, overrides: Overrides | None = None) -> list[Check]:
    """sum_n N^n S^{-(n+1)}(s, T) reproduces S^{-1}(s, T+N) on both sides, decreasing in K."""
    checks = []
    for case, pair in enumerate(_pairs(cfg, overrides, "resolvent-taylor")):
        inputs = pair.inputs()
        for side in SIDES:
            holder = {}

            def report(side=side, holder=holder):
                if "rep" not in holder:
                    hyp = check_pair_hypotheses(pair.T, pair.N, pair.s, pair.eps, pair.scan_T, pair.scan_N)
                    holder["rep"] = resolvent_taylor(pair.T, pair.N, pair.s, cfg.taylor_K, side, hyp)
                return holder["rep"]

            def residual(report=report):
                rep = report()
                return rep.residual, cfg.series_tol, {"K": rep.K}

            def monotone(report=report, side=side):
                rep = report()
                curve = rep.notes["curve"]
                rises = [curve[k + 1] - curve[k] for k in range(5, len(curve) - 1)]
                target = s_resolvent(pair.T + pair.N, pair.s, side).rho_norm()
                return max(rises, default=0.0), ROUNDOFF * target, {"from_K": 5, "curve": curve}

            checks.append(_check(f"resolvent-taylor/{side.value}[{case}]", inputs, residual))
            checks.append(_check(f"resolvent-taylor/{side.value}-monotone[{case}]", inputs, monotone))
    return checks


def suite_derivatives(cfg: RunConfig, overrides: Overrides | None = None) -> list[Check]:
    """Finite differences in s0 of the S-resolvent against (-1)^m m! S^{-(m+1)}."""
    rng = _rng(cfg, "derivatives")
    checks = []
    for case in range(cfg.cases):
        n, d = _shape(rng)
        T = random_paravector_operator(rng, n, d, 1.0)
        s = random_paravector(rng, n, float(rng.uniform(1.3, 2.5)))
        inputs = {"T": T.entries, "s": s.to_json()}
        for m in (1, 2):
            def fn(m=m):
                worst, per_side = _sides_max(lambda side: resolvent_derivative_residual(T, s, m, side))
                return worst, cfg.fd_tol, {"m": m, "per_side": per_side, "relative": True}
            checks.append(_check(f"derivatives/m={m}[{case}]", inputs, fn))
    return checks


def _taylor_contour(pair: CommutingPair, cfg: RunConfig, unit=None) -> Contour:
    unit = np.eye(pair.T.n)[0] if unit is None else unit
    return enclosing_contour(pair.scan_T, unit, cfg.radius_factor, margin=1.5 * pair.eps, nodes=cfg.nodes)


def suite_taylor(cfg: RunConfig, overrides: Overrides | None = None) -> list[Check]:
    """Taylor formula for polynomials (exact at K = degree) and exp, plus contour independence."""
    rng = _rng(cfg, "taylor")
    checks = []
    if overrides is not None and overrides.T is not None:
        pairs = _pairs(cfg, overrides, "taylor")
    else:
        pairs = []
        for _ in range(cfg.cases):
            T = random_paravector_operator(rng, 2, 3, 1.0)
            pairs.append(complete_pair(T, T * 0.05, rng, 0.5, cfg.scan_config()))
    for case, pair in enumerate(pairs):
        inputs = pair.inputs()
        contour = _taylor_contour(pair, cfg)
        degree = 1 + case % 5
        coeffs = tuple(Multivector(pair.T.n, rng.standard_normal(1 << pair.T.n)) for _ in range(degree + 1))

        def poly(coeffs=coeffs, degree=degree):
            worst, detail = 0.0, {"degree": degree}
            for side in SIDES:
                f = PowerSeries(coeffs, side.value)
                rep = taylor_formula(f, pair.T, pair.N, contour, degree, side, pair.eps, pair.scan_T, pair.scan_N)
                rel = rep.residual / max(1.0, rep.notes["lhs_norm"])
                detail[side.value] = rel
                worst = max(worst, rel)
            return worst, cfg.residual_tol, detail

        def exp_case():
            worst, detail = 0.0, {"K": cfg.exp_K}
            for side in SIDES:
                rep = taylor_formula(intrinsic("exp"), pair.T, pair.N, contour, cfg.exp_K, side,
                                     pair.eps, pair.scan_T, pair.scan_N)
                detail[side.value] = rep.residual
                worst = max(worst, rep.residual)
            return worst, cfg.taylor_exp_tol, detail

        def independence():
            funcs = [intrinsic("exp"), intrinsic("sin"), PowerSeries(coeffs, "left"), PowerSeries(coeffs, "right")]
            # units: e1 and a random direction; radii: the Taylor contour and 1.3 times it
            units = [np.eye(pair.T.n)[0], random_unit(np.random.default_rng([cfg.seed, case]), pair.T.n)]
            base = contour
            variants = [base.with_unit(J).with_radius(r) for J in units for r in (base.radius, 1.3 * base.radius)]
            quads = {side: [ContourQuadrature(pair.T, c, side) for c in variants] for side in SIDES}
            worst = 0.0
            for f in funcs:
                side = ResolventSide.parse(f.side)
                vals = [q.apply(f) for q in quads[side]]
                scale = max(1.0, vals[0].rho_norm())
                worst = max(worst, max((v - vals[0]).rho_norm() / scale for v in vals[1:]))
            return worst, cfg.residual_tol, {"radii": [base.radius, 1.3 * base.radius], "relative": True}

        checks.append(_check(f"taylor/polynomial[{case}]", inputs, poly))
        checks.append(_check(f"taylor/exp[{case}]", inputs, exp_case))
        checks.append(_check(f"taylor/contour-independence[{case}]", inputs, independence))
    return checks


def suite_bounds(cfg: RunConfig, overrides: Overrides | None = None) -> list[Check]:
    """Sampled checks of the constants K_T and K_N."""
    rng = _rng(cfg, "bounds")
    checks = []
    for case in range(cfg.cases):
        n, d = _shape(rng)
        T = random_paravector_operator(rng, n, d, 1.0)
        N = random_paravector_operator(rng, n, d, float(rng.uniform(0.1, 0.5)))
        inputs = {"T": T.entries, "N": N.entries}

        def kt():
            scan = scan_spectrum(T, cfg.scan_config())
            contour = enclosing_contour(scan, np.eye(n)[0], cfg.radius_factor, nodes=cfg.nodes)
            est = kt_estimate(T, contour)
            worst = max(c["lhs"] / c["rhs"] for c in est.checks)
            return worst, 1.0 + 1e-10, {"K_T": est.value, "samples": len(est.checks), "all_pass": est.passed}

        def kn():
            scan = scan_spectrum(N, cfg.scan_config())
            radius = 1.5 * scan.radius + 0.05
            est = kn_estimate(N, radius, cfg.nodes, scan=scan)
            worst = max(c["lhs"] / c["rhs"] for c in est.checks)
            return worst, 1.0 + 1e-10, {"K_N": est.value, "radius": radius, "all_pass": est.passed}

        checks.append(_check(f"bounds/K_T[{case}]", inputs, kt))
        checks.append(_check(f"bounds/K_N[{case}]", inputs, kn))
    return checks


SUITE_FUNCS = {
    "lemmas4": suite_lemmas4,
    "resolvent-eq": suite_resolvent_eq,
    "powers": suite_powers,
    "spectrum-stable": suite_spectrum_stable,
    "resolvent-taylor": suite_resolvent_taylor,
    "derivatives": suite_derivatives,
    "taylor": suite_taylor,
    "bounds": suite_bounds,
}


def run_suite(name: str, cfg: RunConfig | None = None, overrides: Overrides | None = None) -> dict:
    """Run one suite (or ``all``) and return the report with its digest."""
    cfg = cfg or RunConfig()
    names = SUITES if name == "all" else (name,)
    for s in names:
        if s not in SUITE_FUNCS:
            raise KeyError(f"unknown suite {s!r}")
    checks: list[Check] = []
    for s in names:
        checks.extend(SUITE_FUNCS[s](cfg, overrides))
    body = {
        "suite": name,
        "seed": cfg.seed,
        "checks": [c.to_json() for c in checks],
        "summary": {"total": len(checks), "failed": sum(not c.passed for c in checks),
                    "failed_checks": [c.check for c in checks if not c.passed]},
    }
    body["digest"] = digest(body)
    return body


def report_passed(report: dict) -> bool:
    return report["summary"]["failed"] == 0
