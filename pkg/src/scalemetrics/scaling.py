"""Production-vs-team-size scaling fits and the two-methodology comparison.

Arm A ("fine-grained") fits ln P on ln n over short fixed windows (default
5 days) and asks whether total production grows superlinearly (beta > 1).
Arm B ("Scholtes-style") resolves a long window from the 0.9 quantile of
pooled inter-commit gaps and reports the trend of mean per-member output
P/n against n. The two arms answer different questions; the report says so
explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from . import tails
from .errors import (
    DegenerateDataError,
    InsufficientDataError,
    ScaleMetricsError,
)
from .metrics import window_observations_with_coverage
from .windows import FixedWindow, QuantileWindow, resolve_window_length, single_commit_share

Z_95 = 1.959963984540054

__all__ = [
    "ScalingFit",
    "MethodologyReport",
    "log_bin",
    "fit_scaling_exponent",
    "fit_points",
    "methodology_compare",
]


@dataclass(frozen=True)
class ScalingFit:
    beta: float
    intercept: float  # log-space constant
    ci_low: float
    ci_high: float
    r_squared: float
    n_points: int
    binned: bool

    @property
    def superlinear(self):
        """True when the 95% CI on beta lies strictly above 1."""
        return self.ci_low > 1.0

    def to_json(self):
        return {
            "beta": self.beta,
            "intercept": self.intercept,
            "ci": [self.ci_low, self.ci_high],
            "r_squared": self.r_squared,
            "n_points": self.n_points,
            "binned": self.binned,
            "superlinear": self.superlinear,
        }


def _usable(observations):
    return [(o.n, o.production) for o in observations if o.n >= 1 and o.production > 0]


def log_bin(observations, bins_per_decade=5):
    """Geometric bins over n; within-bin arithmetic means of n and P."""
    points = _usable(observations)
    bins = {}
    for n, p in points:
        idx = math.floor(math.log10(n) * bins_per_decade + 1e-9)
        bins.setdefault(idx, []).append((n, p))
    out = []
    for idx in sorted(bins):
        members = bins[idx]
        out.append(
            (
                sum(n for n, _ in members) / len(members),
                sum(p for _, p in members) / len(members),
            )
        )
    return out


def fit_points(ns, ps):
    """OLS of ln P on ln n; raises on degenerate input."""
    ns = np.asarray(ns, dtype=float)
    ps = np.asarray(ps, dtype=float)
    if len(ns) < 5:
        raise InsufficientDataError(f"need >= 5 points, got {len(ns)}")
    log_n = np.log(ns)
    log_p = np.log(ps)
    if np.ptp(log_n) == 0:
        raise DegenerateDataError("zero variance in ln n")
    res = linregress(log_n, log_p)
    se = res.stderr if np.isfinite(res.stderr) else 0.0
    return res.slope, res.intercept, se, res.rvalue**2


def fit_scaling_exponent(observations, use_binning=False, bins_per_decade=5):
    """Fit P ~ n^beta by OLS on logs, optionally after logarithmic binning.

    Windows with n = 0 or P = 0 are excluded (log undefined). The 95% CI
    uses the normal approximation on the slope standard error.
    """
    if use_binning:
        points = log_bin(observations, bins_per_decade)
    else:
        points = _usable(observations)
    if len(points) < 5:
        raise InsufficientDataError(
            f"need >= 5 usable observations, got {len(points)}"
        )
    ns, ps = zip(*points)
    beta, intercept, se, r2 = fit_points(ns, ps)
    return ScalingFit(
        beta=float(beta),
        intercept=float(intercept),
        ci_low=float(beta - Z_95 * se),
        ci_high=float(beta + Z_95 * se),
        r_squared=float(r2),
        n_points=len(points),
        binned=use_binning,
    )


@dataclass(frozen=True)
class MethodologyReport:
    """Side-by-side result of the two methodologies on one history.

    ``arm_a`` is the production-scaling fit over short fixed windows;
    ``arm_b`` is the per-member mean-output trend over the long
    quantile-resolved window. Either arm may be None with its failure
    reason recorded.
    """

    project_name: str
    measure: str
    arm_a: ScalingFit | None
    arm_a_error: str | None
    arm_a_window_length: float
    arm_b_slope: float | None  # slope of ln(P/n) on ln n
    arm_b_ci: tuple | None
    arm_b_mean_output_per_member: float | None
    arm_b_error: str | None
    arm_b_window_length: float | None
    tail_fits: dict  # method -> TailFit
    tail_errors: dict  # method -> reason
    regimes: dict  # method -> Regime value
    single_commit_share: float
    min_commit_inequality_holds: bool  # P(commits) >= n in every window
    unavailable_commits: int

    def to_json(self):
        return {
            "project": self.project_name,
            "measure": self.measure,
            "arm_a": {
                "description": "production scaling: ln P vs ln n, short fixed windows",
                "window_length_seconds": self.arm_a_window_length,
                "fit": self.arm_a.to_json() if self.arm_a else None,
                "error": self.arm_a_error,
            },
            "arm_b": {
                "description": (
                    "Scholtes-style mean productivity: trend of ln(P/n) vs ln n, "
                    "quantile-resolved long windows"
                ),
                "window_length_seconds": self.arm_b_window_length,
                "per_member_slope": self.arm_b_slope,
                "per_member_slope_ci": list(self.arm_b_ci) if self.arm_b_ci else None,
                "mean_output_per_member": self.arm_b_mean_output_per_member,
                "error": self.arm_b_error,
            },
            "tails": {
                method: fit.to_json() for method, fit in sorted(self.tail_fits.items())
            },
            "tail_errors": dict(sorted(self.tail_errors.items())),
            "regimes": dict(sorted(self.regimes.items())),
            "single_commit_share": self.single_commit_share,
            "min_commit_inequality_holds": self.min_commit_inequality_holds,
            "unavailable_commits": self.unavailable_commits,
        }

    def to_text(self):
        lines = [
            f"project: {self.project_name}   measure: {self.measure}",
            f"single-commit share: {self.single_commit_share:.3f}",
            f"P(commits) >= n in every window: {self.min_commit_inequality_holds}",
            "",
            f"arm A (production scaling, window {self.arm_a_window_length / 86400:g} d):",
        ]
        if self.arm_a:
            a = self.arm_a
            lines.append(
                f"  beta = {a.beta:.4f}  CI [{a.ci_low:.4f}, {a.ci_high:.4f}]"
                f"  r2 = {a.r_squared:.3f}  points = {a.n_points}"
                f"  superlinear = {a.superlinear}"
            )
        else:
            lines.append(f"  unavailable: {self.arm_a_error}")
        wl = self.arm_b_window_length
        lines.append(
            f"arm B (mean productivity, window "
            f"{wl / 86400:g} d):" if wl else "arm B (mean productivity):"
        )
        if self.arm_b_slope is not None:
            lines.append(
                f"  slope of ln(P/n) = {self.arm_b_slope:.4f}"
                f"  CI [{self.arm_b_ci[0]:.4f}, {self.arm_b_ci[1]:.4f}]"
                f"  mean P/n = {self.arm_b_mean_output_per_member:.3f}"
            )
        else:
            lines.append(f"  unavailable: {self.arm_b_error}")
        lines.append("tail fits:")
        for method, fit in sorted(self.tail_fits.items()):
            lines.append(
                f"  {method}: mu = {fit.mu:.4f}  CI [{fit.ci_low:.4f}, {fit.ci_high:.4f}]"
                f"  xmin = {fit.xmin:g}  k = {fit.k}"
                f"  regime = {self.regimes[method]}"
            )
        for method, reason in sorted(self.tail_errors.items()):
            lines.append(f"  {method}: unavailable: {reason}")
        return "\n".join(lines) + "\n"


def _per_member_trend(observations):
    points = [(o.n, o.production / o.n) for o in observations
              if o.n >= 1 and o.production > 0]
    if len(points) < 5:
        raise InsufficientDataError(
            f"need >= 5 usable observations, got {len(points)}"
        )
    ns, ratios = zip(*points)
    slope, _, se, _ = fit_points(ns, ratios)
    mean_ratio = sum(ratios) / len(ratios)
    return slope, (slope - Z_95 * se, slope + Z_95 * se), mean_ratio


def methodology_compare(history, measure, fixed_window=None, quantile=0.9,
                        use_binning=True, bins_per_decade=5, seed=42,
                        hill_fraction=0.1):
    """Run both methodologies plus tail fits on the same history."""
    from .metrics import ProductionMeasure

    fixed_window = fixed_window or FixedWindow()
    obs_a, unavailable = window_observations_with_coverage(history, fixed_window, measure)

    arm_a = None
    arm_a_error = None
    try:
        arm_a = fit_scaling_exponent(obs_a, use_binning=use_binning,
                                     bins_per_decade=bins_per_decade)
    except ScaleMetricsError as exc:
        arm_a_error = str(exc)

    arm_b_slope = arm_b_ci = arm_b_mean = None
    arm_b_error = None
    arm_b_length = None
    try:
        qdef = QuantileWindow(quantile)
        arm_b_length = resolve_window_length(history, qdef)
        obs_b, _ = window_observations_with_coverage(history, qdef, measure)
        arm_b_slope, arm_b_ci, arm_b_mean = _per_member_trend(obs_b)
    except ScaleMetricsError as exc:
        arm_b_error = str(exc)

    tail_fits = {}
    tail_errors = {}
    try:
        dist = tails.ContributionDistribution.from_history(history, measure)
        n_authors = len(dist.values)
        try:
            k = max(tails.MIN_TAIL_POINTS, int(hill_fraction * n_authors))
            tail_fits["hill"] = tails.hill_estimator(dist, k=k, seed=seed)
        except ScaleMetricsError as exc:
            tail_errors["hill"] = str(exc)
        try:
            tail_fits["pareto-mle"] = tails.pareto_mle_fit(dist, seed=seed)
        except ScaleMetricsError as exc:
            tail_errors["pareto-mle"] = str(exc)
    except ScaleMetricsError as exc:
        tail_errors["hill"] = tail_errors["pareto-mle"] = str(exc)

    regimes = {
        method: tails.classify_regime(fit.mu).value
        for method, fit in tail_fits.items()
    }

    obs_commits, _ = window_observations_with_coverage(
        history, fixed_window, ProductionMeasure.COMMITS
    )
    inequality = all(o.production >= o.n for o in obs_commits)

    return MethodologyReport(
        project_name=history.project_name,
        measure=measure.value,
        arm_a=arm_a,
        arm_a_error=arm_a_error,
        arm_a_window_length=fixed_window.length,
        arm_b_slope=arm_b_slope,
        arm_b_ci=arm_b_ci,
        arm_b_mean_output_per_member=arm_b_mean,
        arm_b_error=arm_b_error,
        arm_b_window_length=arm_b_length,
        tail_fits=tail_fits,
        tail_errors=tail_errors,
        regimes=regimes,
        single_commit_share=single_commit_share(history),
        min_commit_inequality_holds=inequality,
        unavailable_commits=unavailable,
    )
