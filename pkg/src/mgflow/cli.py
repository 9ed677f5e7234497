"""Experiment harness: shrinkage maps, risk curves, bound checks, the
flow/iteration discretization table, and finite-sample vs limit comparisons.

Every subcommand writes one CSV (header row, `#`-prefixed summary footer,
12-significant-digit floats) into --out, optionally renders a matching SVG
with --svg, and exits 0 on success, 1 if any declared assertion fails, and 2
on a configuration error.  Identical configuration and seed give byte-identical
output.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .asymptotics import (
    AsymptoticPrior,
    limiting_bayes_risk_mgf,
    limiting_bayes_risk_ridge,
)
from .bounds import (
    CALIBRATED_RISK_BOUND,
    GF_CALIBRATED_CEILING,
    GF_OPTIMA_CEILING,
    OPTIMA_RATIO_BOUND,
    OPTIMA_RATIO_FLOOR,
    calibrated_ratio_reports,
    gf_reference_check,
    optima_ratio_check,
    optimum_summand_check,
    transfer_envelope_check,
)
from .estimators import discretization_gap, expected_sq_norm
from .risk import (
    RiskInstance,
    bayes_risk_gf,
    bayes_risk_mgf,
    bayes_risk_ridge,
    closed_form_risk,
)
from .shrinkage import CRITICAL, MomentumRule, phi_gf, phi_mgf, phi_ridge, t_to_lambda
from .spectral import PriorSpec

MP_REL_TOL = 0.02
EXTREME_END_TOL = 0.02
GAP_RATIO_RANGE = (1.7, 2.3)


class ConfigError(ValueError):
    """Invalid experiment configuration (exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared experiment settings; gamma, when given, overrides p as round(gamma*n)."""

    n: int
    p: int
    gamma: float | None
    sigma2: float
    r2: float
    delta: float
    seed: int
    t_min: float
    t_max: float
    t_count: int
    t_scale: str
    out: Path
    svg: bool
    nodes: int

    def __post_init__(self):
        if not (self.n >= self.p >= 1):
            raise ConfigError(f"need n >= p >= 1, got n={self.n}, p={self.p}")
        if self.sigma2 <= 0 or self.r2 <= 0:
            raise ConfigError("sigma2 and r2 must be positive")
        if self.delta < 0:
            raise ConfigError("delta must be nonnegative")
        if self.t_count < 2:
            raise ConfigError(f"t-count must be at least 2, got {self.t_count}")
        if not (self.t_min < self.t_max):
            raise ConfigError(f"need t-min < t-max, got [{self.t_min}, {self.t_max}]")
        if self.t_scale not in ("log", "linear"):
            raise ConfigError(f"t-scale must be 'log' or 'linear', got {self.t_scale!r}")
        if self.t_scale == "log" and self.t_min <= 0:
            raise ConfigError("log t grid requires t-min > 0")
        if self.nodes < 1:
            raise ConfigError("nodes must be positive")

    @classmethod
    def from_args(cls, args) -> "ExperimentConfig":
        n = args.n
        if args.gamma is not None:
            p = int(round(args.gamma * n))
        elif args.p is None:  # commands that derive p themselves (mp-compare)
            p = n
        else:
            p = args.p
        return cls(n=n, p=p, gamma=args.gamma, sigma2=args.sigma2, r2=args.r2,
                   delta=args.delta, seed=args.seed, t_min=args.t_min,
                   t_max=args.t_max, t_count=args.t_count, t_scale=args.t_scale,
                   out=Path(args.out), svg=args.svg, nodes=args.nodes)

    def t_grid(self) -> np.ndarray:
        if self.t_scale == "log":
            return np.logspace(np.log10(self.t_min), np.log10(self.t_max), self.t_count)
        return np.linspace(self.t_min, self.t_max, self.t_count)

    def aspect_ratio(self) -> float:
        return self.gamma if self.gamma is not None else self.p / self.n

    def instance(self, seed_offset: int = 0) -> RiskInstance:
        return RiskInstance.gaussian(self.n, self.p, r2=self.r2, sigma2=self.sigma2,
                                     delta=self.delta, seed=self.seed + seed_offset)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return str(v)


def write_csv(path: Path, header, rows, footer) -> None:
    """Comma-separated table with a header row and '#'-prefixed footer lines."""
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    lines.extend(f"# {key}={_fmt(val)}" for key, val in footer)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class Checks:
    """Declared assertions of a subcommand; any failure flips the exit code."""

    def __init__(self):
        self.results: list[tuple[str, bool, str]] = []

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.results.append((name, bool(ok), detail))

    @property
    def failed(self) -> list[tuple[str, bool, str]]:
        return [r for r in self.results if not r[1]]

    def footer(self):
        return [(f"check_{name}", "pass" if ok else f"FAIL {detail}")
                for name, ok, detail in self.results]

    def finish(self, label: str) -> int:
        for name, ok, detail in self.failed:
            print(f"{label}: FAIL {name}: {detail}", file=sys.stderr)
        if self.failed:
            return 1
        print(f"{label}: all {len(self.results)} checks passed")
        return 0


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_shrinkage_map(cfg: ExperimentConfig, s_min: float, s_max: float,
                      s_count: int) -> int:
    if not (0 < s_min < s_max) or s_count < 2:
        raise ConfigError("need 0 < s-min < s-max and s-count >= 2")
    s = np.logspace(np.log10(s_min), np.log10(s_max), s_count)
    t = cfg.t_grid()
    rule = MomentumRule(cfg.delta)
    mu = rule.mu(s)

    pm = phi_mgf(s[None, :], mu[None, :], t[:, None])  # (T, S)
    pg = phi_gf(s[None, :], t[:, None])
    lam = 2.0 / (t * t)
    pr = phi_ridge(s[None, :], lam[:, None])

    rows = []
    for i in range(len(s)):
        for j in range(len(t)):
            rows.append((s[i], t[j], lam[j], pm[j, i], pr[j, i], pg[j, i]))

    diff_cal = float(np.abs(pm - pr).max())
    diff_alt1 = float(np.abs(pm - s[None, :] / (s[None, :] + (1.0 / t**2)[:, None])).max())
    diff_alt4 = float(np.abs(pm - s[None, :] / (s[None, :] + (4.0 / t**2)[:, None])).max())
    end_lo = float(np.abs(pm[0] - pr[0]).max())
    end_hi = float(np.abs(pm[-1] - pr[-1]).max())

    checks = Checks()
    checks.add("calibration_optimal", diff_cal < diff_alt1 and diff_cal < diff_alt4,
               f"2/t^2 gives {diff_cal:.4g}, 1/t^2 gives {diff_alt1:.4g},"
               f" 4/t^2 gives {diff_alt4:.4g}")
    if cfg.t_min <= 0.1 and cfg.t_max >= 100.0:
        checks.add("extreme_end_agreement",
                   end_lo <= EXTREME_END_TOL and end_hi <= EXTREME_END_TOL,
                   f"end diffs {end_lo:.4g} / {end_hi:.4g} vs {EXTREME_END_TOL}")

    footer = [("max_abs_diff_calibrated", diff_cal),
              ("max_abs_diff_lambda_1_over_t2", diff_alt1),
              ("max_abs_diff_lambda_4_over_t2", diff_alt4),
              ("end_diff_t_min", end_lo), ("end_diff_t_max", end_hi)]
    footer.extend(checks.footer())
    out_csv = cfg.out / "shrinkage_map.csv"
    write_csv(out_csv, ("s", "t", "lambda", "phi_mgf", "phi_ridge", "phi_gf"),
              rows, footer)
    print(f"wrote {out_csv}")

    if cfg.svg:
        from . import figures
        idx = np.unique(np.linspace(0, len(t) - 1, 4).astype(int))
        picks = [(t[j], pm[j], pr[j], pg[j]) for j in idx]
        figures.shrinkage_map_figure(cfg.out / "shrinkage_map.svg", s, picks)
        print(f"wrote {cfg.out / 'shrinkage_map.svg'}")
    return checks.finish("shrinkage-map")


def cmd_risk_curves(cfg: ExperimentConfig) -> int:
    inst = cfg.instance()
    s, mom = inst.dec.s, inst.momentum
    prior = inst.prior
    alpha, sigma2, n = prior.alpha, prior.sigma2, cfg.n
    t = cfg.t_grid()
    lam_mgf = 2.0 / (t * t)
    lam_gf = 1.0 / t

    bm = bayes_risk_mgf(s, alpha, sigma2, n, mom, t)
    br2 = bayes_risk_ridge(s, alpha, sigma2, n, lam_mgf)
    bg = bayes_risk_gf(s, alpha, sigma2, n, t)
    br1 = bayes_risk_ridge(s, alpha, sigma2, n, lam_gf)
    ratio_m = bm / br2
    ratio_g = bg / br1

    gamma = cfg.aspect_ratio()
    aprior = AsymptoticPrior.from_signal(cfg.r2, cfg.sigma2, gamma)
    rule = MomentumRule(cfg.delta)
    asym_m = np.array([limiting_bayes_risk_mgf(gamma, aprior, rule, ti, cfg.nodes)
                       for ti in t])
    asym_r = np.array([limiting_bayes_risk_ridge(gamma, aprior, li, cfg.nodes)
                       for li in lam_mgf])

    norm_m = expected_sq_norm(s, prior, "mgf", t, mom)
    norm_r = expected_sq_norm(s, prior, "ridge", lam_mgf)

    cal_m, inf_m = optima_ratio_check(s, alpha, sigma2, n, mom)
    gf_rep = gf_reference_check(s, alpha, sigma2, n, t)

    max_ratio_mgf = float(ratio_m.max())
    max_ratio_gf = float(ratio_g.max())
    rel_m = float(np.max(np.abs(bm - asym_m) / asym_m))
    rel_r = float(np.max(np.abs(br2 - asym_r) / asym_r))

    checks = Checks()
    checks.add("max_ratio_mgf_below_bound", max_ratio_mgf < CALIBRATED_RISK_BOUND,
               f"{max_ratio_mgf:.4f} vs {CALIBRATED_RISK_BOUND}")
    checks.add("optima_ratio_mgf_in_interval", cal_m.satisfied,
               f"{cal_m.sup_ratio:.4f} vs [{OPTIMA_RATIO_FLOOR}, {OPTIMA_RATIO_BOUND})")
    checks.add("optima_ratio_mgf_grid_inf_in_interval", inf_m.satisfied,
               f"{inf_m.sup_ratio:.4f}")
    checks.add("max_ratio_gf_below_ceiling", max_ratio_gf < GF_CALIBRATED_CEILING,
               f"{max_ratio_gf:.4f} vs {GF_CALIBRATED_CEILING}")
    checks.add("optima_ratio_gf_below_ceiling", gf_rep["optima"].satisfied,
               f"{gf_rep['optima'].sup_ratio:.4f} vs {GF_OPTIMA_CEILING}")
    checks.add("mgf_closer_than_gf", max_ratio_mgf < max_ratio_gf
               and cal_m.sup_ratio < gf_rep["optima"].sup_ratio,
               f"mgf {max_ratio_mgf:.4f}/{cal_m.sup_ratio:.4f},"
               f" gf {max_ratio_gf:.4f}/{gf_rep['optima'].sup_ratio:.4f}")
    checks.add("asymptotic_match_mgf", rel_m <= MP_REL_TOL, f"{rel_m:.4f} vs {MP_REL_TOL}")
    checks.add("asymptotic_match_ridge", rel_r <= MP_REL_TOL, f"{rel_r:.4f} vs {MP_REL_TOL}")

    header = ("t", "lambda_mgf", "lambda_gf", "bayes_mgf",
              "bayes_ridge_at_2_over_t2", "bayes_gf", "bayes_ridge_at_1_over_t",
              "ratio_mgf", "ratio_gf", "asymptotic_mgf", "asymptotic_ridge",
              "expected_norm_mgf", "expected_norm_ridge")
    rows = list(zip(t, lam_mgf, lam_gf, bm, br2, bg, br1, ratio_m, ratio_g,
                    asym_m, asym_r, norm_m, norm_r))
    footer = [("max_ratio_mgf", max_ratio_mgf),
              ("optima_ratio_mgf", cal_m.sup_ratio),
              ("max_ratio_gf", max_ratio_gf),
              ("optima_ratio_gf", gf_rep["optima"].sup_ratio),
              ("optima_ratio_mgf_grid_inf", inf_m.sup_ratio),
              ("optima_ratio_gf_grid_inf", gf_rep["optima_grid_inf"].sup_ratio),
              ("asymptotic_max_rel_err_mgf", rel_m),
              ("asymptotic_max_rel_err_ridge", rel_r)]
    footer.extend(checks.footer())
    out_csv = cfg.out / "risk_curves.csv"
    write_csv(out_csv, header, rows, footer)
    print(f"wrote {out_csv}")

    if cfg.svg:
        from . import figures
        cols = {"bayes_mgf": bm, "bayes_ridge_at_2_over_t2": br2, "bayes_gf": bg,
                "bayes_ridge_at_1_over_t": br1, "asymptotic_mgf": asym_m,
                "asymptotic_ridge": asym_r, "expected_norm_mgf": norm_m,
                "expected_norm_ridge": norm_r}
        figures.risk_curves_figure(cfg.out / "risk_curves.svg", t, cols)
        print(f"wrote {cfg.out / 'risk_curves.svg'}")
    return checks.finish("risk-curves")


def cmd_bounds_check(cfg: ExperimentConfig, instances: int) -> int:
    if instances < 1:
        raise ConfigError("instances must be positive")
    checks = Checks()
    reports = []

    for label, rule in (("critical", CRITICAL), ("delta_offset", MomentumRule(cfg.delta))):
        env_h, env_c = transfer_envelope_check(rule=rule)
        sum_op, sum_pr = optimum_summand_check(rule=rule)
        for rep in (env_h, env_c, sum_op):
            reports.append((f"{rep.name}[{label}]", rep))
            checks.add(f"{rep.name}[{label}]", rep.satisfied,
                       f"sup {rep.sup_ratio:.6f} vs bound {rep.bound}")
        # alternative normalization reported, not asserted (valid only at alpha=1)
        reports.append((f"{sum_pr.name}[{label}]", sum_pr))

    t_grid = cfg.t_grid()
    worst: dict[str, float] = {}
    for k in range(instances):
        inst = cfg.instance(seed_offset=k)
        for kind, rep in calibrated_ratio_reports(inst, t_grid).items():
            if rep.sup_ratio > worst.get(kind, 0.0):
                worst[kind] = rep.sup_ratio
    for kind, sup in worst.items():
        checks.add(f"calibrated_ratio_{kind}", sup < CALIBRATED_RISK_BOUND,
                   f"worst sup over {instances} instances {sup:.4f}"
                   f" vs {CALIBRATED_RISK_BOUND}")

    inst = cfg.instance()
    s, mom, prior = inst.dec.s, inst.momentum, inst.prior
    for alpha in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        cal, inf = optima_ratio_check(s, alpha, prior.sigma2, cfg.n, mom)
        reports.append((f"optima_ratio_alpha_{alpha:g}", cal))
        reports.append((f"optima_ratio_grid_inf_alpha_{alpha:g}", inf))
        checks.add(f"optima_ratio_alpha_{alpha:g}", cal.satisfied and inf.satisfied,
                   f"calibrated {cal.sup_ratio:.4f}, grid inf {inf.sup_ratio:.4f}")

    gf_rep = gf_reference_check(s, prior.alpha, prior.sigma2, cfg.n, t_grid)
    for key in ("sup", "optima", "optima_grid_inf"):
        rep = gf_rep[key]
        reports.append((rep.name, rep))
        checks.add(rep.name, rep.satisfied, f"{rep.sup_ratio:.4f} vs {rep.bound}")

    header = ("check", "sup_ratio", "arg1", "arg2", "bound", "lower", "satisfied")
    rows = []
    for label, rep in reports:
        arg1 = rep.argmax[0] if len(rep.argmax) > 0 else ""
        arg2 = rep.argmax[1] if len(rep.argmax) > 1 else ""
        rows.append((label, rep.sup_ratio, arg1, arg2, rep.bound,
                     rep.lower if rep.lower is not None else "", rep.satisfied))
    for kind, sup in worst.items():
        rows.append((f"calibrated_ratio_{kind}[worst_of_{instances}]", sup, "", "",
                     CALIBRATED_RISK_BOUND, "", sup < CALIBRATED_RISK_BOUND))

    footer = checks.footer()
    out_csv = cfg.out / "bounds_check.csv"
    write_csv(out_csv, header, rows, footer)
    print(f"wrote {out_csv}")

    if cfg.svg:
        from . import figures
        ratio_by_kind = {}
        for kind in worst:
            m = closed_form_risk(inst, "mgf", kind, t_grid)
            r = closed_form_risk(inst, "ridge", kind, t_to_lambda(t_grid))
            ratio_by_kind[kind] = m / r
        figures.bounds_figure(cfg.out / "bounds_check.svg", t_grid, ratio_by_kind,
                              CALIBRATED_RISK_BOUND)
        print(f"wrote {cfg.out / 'bounds_check.svg'}")
    return checks.finish("bounds-check")


def cmd_discretization(cfg: ExperimentConfig, t_final: float,
                       epsilons: list[float]) -> int:
    if t_final <= 0:
        raise ConfigError("t-final must be positive")
    if len(epsilons) < 1 or any(e <= 0 for e in epsilons):
        raise ConfigError("epsilons must be positive")
    epsilons = sorted(epsilons, reverse=True)

    inst = cfg.instance()
    rng = np.random.default_rng(cfg.seed + 1000)
    X = inst.dec.reconstruct()
    y = X @ inst.beta0 + np.sqrt(cfg.sigma2) * rng.standard_normal(cfg.n)

    gaps = [discretization_gap(inst.dec, y, inst.momentum, t_final, eps)
            for eps in epsilons]

    checks = Checks()
    rows = []
    for i, (eps, gap) in enumerate(zip(epsilons, gaps)):
        ratio = ""
        if i + 1 < len(epsilons) and abs(epsilons[i + 1] - eps / 2) < 1e-12 * eps:
            ratio = gap / gaps[i + 1]
            checks.add(f"halving_ratio_eps_{eps:g}",
                       GAP_RATIO_RANGE[0] <= ratio <= GAP_RATIO_RANGE[1],
                       f"gap({eps:g})/gap({eps / 2:g}) = {ratio:.3f}"
                       f" vs {GAP_RATIO_RANGE}")
        rows.append((eps, int(np.floor(t_final / eps)), gap, ratio))
    checks.add("gaps_decreasing", all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:])),
               f"gaps {['%.3e' % g for g in gaps]}")

    footer = [("t_final", t_final)] + checks.footer()
    out_csv = cfg.out / "discretization.csv"
    write_csv(out_csv, ("epsilon", "k_max", "gap", "ratio_vs_half"), rows, footer)
    print(f"wrote {out_csv}")

    if cfg.svg:
        from . import figures
        figures.discretization_figure(cfg.out / "discretization.svg",
                                      np.asarray(epsilons), np.asarray(gaps))
        print(f"wrote {cfg.out / 'discretization.svg'}")
    return checks.finish("discretization")


def cmd_mp_compare(cfg: ExperimentConfig, gammas: list[float]) -> int:
    if len(gammas) < 1 or any(g <= 0 for g in gammas):
        raise ConfigError("gammas must be positive")
    rule = MomentumRule(cfg.delta)
    t = cfg.t_grid()
    checks = Checks()
    rows = []
    blocks = []
    for gamma in gammas:
        p = int(round(gamma * cfg.n))
        inst = RiskInstance.gaussian(cfg.n, p, r2=cfg.r2, sigma2=cfg.sigma2,
                                     delta=cfg.delta, seed=cfg.seed)
        prior = PriorSpec(r2=cfg.r2, sigma2=cfg.sigma2, n=cfg.n, p=p)
        aprior = AsymptoticPrior.from_signal(cfg.r2, cfg.sigma2, gamma)
        lam = 2.0 / (t * t)
        fin_m = bayes_risk_mgf(inst.dec.s, prior.alpha, cfg.sigma2, cfg.n,
                               inst.momentum, t)
        fin_r = bayes_risk_ridge(inst.dec.s, prior.alpha, cfg.sigma2, cfg.n, lam)
        lim_m = np.array([limiting_bayes_risk_mgf(gamma, aprior, rule, ti, cfg.nodes)
                          for ti in t])
        lim_r = np.array([limiting_bayes_risk_ridge(gamma, aprior, li, cfg.nodes)
                          for li in lam])
        rel_m = np.abs(fin_m - lim_m) / lim_m
        rel_r = np.abs(fin_r - lim_r) / lim_r
        checks.add(f"rel_err_mgf_gamma_{gamma:g}", float(rel_m.max()) <= MP_REL_TOL,
                   f"max {rel_m.max():.4f} vs {MP_REL_TOL}")
        checks.add(f"rel_err_ridge_gamma_{gamma:g}", float(rel_r.max()) <= MP_REL_TOL,
                   f"max {rel_r.max():.4f} vs {MP_REL_TOL}")
        rows.extend(zip([gamma] * len(t), t, fin_m, lim_m, rel_m, fin_r, lim_r, rel_r))
        blocks.append((gamma, t, fin_m, lim_m, fin_r, lim_r))

    footer = checks.footer()
    out_csv = cfg.out / "mp_compare.csv"
    write_csv(out_csv, ("gamma", "t", "finite_mgf", "limit_mgf", "rel_err_mgf",
                        "finite_ridge", "limit_ridge", "rel_err_ridge"),
              rows, footer)
    print(f"wrote {out_csv}")

    if cfg.svg:
        from . import figures
        figures.mp_compare_figure(cfg.out / "mp_compare.svg", blocks)
        print(f"wrote {cfg.out / 'mp_compare.svg'}")
    return checks.finish("mp-compare")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(sub, t_min, t_max, t_count, n=1000, p=500):
    sub.add_argument("--n", type=int, default=n)
    sub.add_argument("--p", type=int, default=p)
    sub.add_argument("--gamma", type=float, default=None,
                     help="aspect ratio p/n; overrides --p when given")
    sub.add_argument("--sigma2", type=float, default=1.0)
    sub.add_argument("--r2", type=float, default=1.0)
    sub.add_argument("--delta", type=float, default=1e-3,
                     help="friction offset above critical damping")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--t-min", type=float, default=t_min)
    sub.add_argument("--t-max", type=float, default=t_max)
    sub.add_argument("--t-count", type=int, default=t_count)
    sub.add_argument("--t-scale", choices=("log", "linear"), default="log")
    sub.add_argument("--out", type=str, default="out")
    sub.add_argument("--svg", action="store_true", help="also render SVG figures")
    sub.add_argument("--nodes", type=int, default=400,
                     help="quadrature nodes for the limit integrals")


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad float list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mgflow",
        description="Momentum-flow vs ridge experiment harness (CSV + optional SVG).")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("shrinkage-map", help="spectral shrinkage map table")
    _add_common(sp, t_min=0.1, t_max=100.0, t_count=60)
    sp.add_argument("--s-min", type=float, default=0.01)
    sp.add_argument("--s-max", type=float, default=4.0)
    sp.add_argument("--s-count", type=int, default=50)

    rp = subs.add_parser("risk-curves", help="Bayes risk curves and ratio summary")
    _add_common(rp, t_min=0.1, t_max=100.0, t_count=200)

    bp = subs.add_parser("bounds-check", help="envelope and risk-ratio bound reports")
    _add_common(bp, t_min=1e-2, t_max=100.0, t_count=200, n=100, p=50)
    bp.add_argument("--instances", type=int, default=20,
                    help="seeded random instances for the calibrated-ratio sup")

    dp = subs.add_parser("discretization", help="flow vs discrete-iteration gap table")
    _add_common(dp, t_min=0.1, t_max=10.0, t_count=2, n=50, p=20)
    dp.add_argument("--t-final", type=float, default=1.0,
                    help="horizon T for the gap maximum")
    dp.add_argument("--epsilons", type=str, default="1e-2,5e-3,2.5e-3",
                    help="comma-separated step sizes")

    mp = subs.add_parser("mp-compare", help="finite-sample vs limiting Bayes risks")
    _add_common(mp, t_min=0.1, t_max=50.0, t_count=40, p=None)
    mp.add_argument("--gammas", type=str, default="0.5",
                    help="comma-separated aspect ratios")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = ExperimentConfig.from_args(args)
        if args.command == "shrinkage-map":
            return cmd_shrinkage_map(cfg, args.s_min, args.s_max, args.s_count)
        if args.command == "risk-curves":
            return cmd_risk_curves(cfg)
        if args.command == "bounds-check":
            return cmd_bounds_check(cfg, args.instances)
        if args.command == "discretization":
            return cmd_discretization(cfg, args.t_final, _parse_float_list(args.epsilons))
        if args.command == "mp-compare":
            return cmd_mp_compare(cfg, _parse_float_list(args.gammas))
        raise AssertionError(args.command)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
