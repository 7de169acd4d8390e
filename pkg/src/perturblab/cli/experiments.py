"""Named experiment runners behind the command line interface.

Each runner regenerates one reference figure or constant from library calls
alone, writes only the formats the config asks for, and reports the artifact
names it produced.  Independent parameter points run concurrently; results
are merged in input order so the artifacts never depend on scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..bifurcation import HOMOCLINIC_SLOPE, cusp_region, tb_region_grid
from ..odeflow import VectorField, integrate
from ..series import (action_monomial, averaging_error_scaling, cos_angle,
                      lie_triangle_transform, sin_angle)
from ..slowfast import (AsymptoticExpansion, buffer_point,
                        delayed_hopf_system, drifted_hopf_system, hopf_delay,
                        linear_decay_system, optimal_truncation,
                        relaxation_scaling, scalar_drive_expansion, sin_drive,
                        slow_manifold, tihonov_verify)
from ..twistmap import breakup_scan, phase_portrait, standard_map
from . import acceptance
from .artifacts import (PALETTE, DataWindow, SvgCanvas, write_csv, write_json,
                        write_svg)
from .config import ExperimentConfig

TWO_PI = 2.0 * math.pi
GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def worker_cap(n_jobs: int | None = None) -> int:
    """Worker count for concurrent parameter points; PERTURBLAB_THREADS caps it."""
    cap = os.cpu_count() or 1
    env = os.environ.get("PERTURBLAB_THREADS")
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            pass
    if n_jobs is not None:
        cap = min(cap, max(1, n_jobs))
    return cap


def _pmap(fn, values):
    """Concurrent map that keeps the input order of results."""
    values = list(values)
    if len(values) <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=worker_cap(len(values))) as pool:
        return list(pool.map(fn, values))


@dataclass
class RunResult:
    output_dir: Path
    artifacts: list[str]
    payload: dict | None = None
    lines: list[str] = field(default_factory=list)


def _eps_tag(eps: float) -> str:
    return f"eps-{eps:g}"


def _scatter_panel(title: str, x_label: str, y_label: str, window: DataWindow,
                   pts) -> SvgCanvas:
    canvas = SvgCanvas()
    window.frame(canvas, title, x_label, y_label)
    for x, y, seed in pts:
        canvas.point(*window.xy(x, y), color=PALETTE[int(seed) % len(PALETTE)])
    return canvas


def _loglog_panel(title: str, x_label: str, y_label: str, xs, ys,
                  fit_slope: float | None = None) -> SvgCanvas:
    lx = np.log10(np.asarray(xs, dtype=float))
    ly = np.log10(np.asarray(ys, dtype=float))
    window = DataWindow.around(lx, ly, pad=0.12)
    canvas = SvgCanvas()
    window.frame(canvas, title, x_label, y_label)
    if fit_slope is not None:
        anchor = float(np.mean(ly - fit_slope * lx))
        grid = np.linspace(lx.min(), lx.max(), 2)
        canvas.polyline([window.xy(g, fit_slope * g + anchor) for g in grid],
                        color="#999999", dashed=True)
    for x, y in zip(lx, ly):
        canvas.point(*window.xy(x, y), color=PALETTE[1], radius=2.4)
    return canvas


# ---------------------------------------------------------------------------
# twist maps


def _standard_map_portrait(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    clouds = _pmap(
        lambda eps: phase_portrait(standard_map(eps), n_seeds=p["n_seeds"],
                                   n_steps=p["n_steps"],
                                   rng_seed=cfg.rng_seed), p["eps"])
    artifacts, panels = [], []
    for eps, cloud in zip(p["eps"], clouds):
        stem = f"standard-map-portrait-{_eps_tag(eps)}"
        if cfg.wants("csv"):
            write_csv(out / f"{stem}.csv", ("phi", "action", "seed"),
                      [(float(a), float(b), int(c)) for a, b, c in cloud])
            artifacts.append(f"{stem}.csv")
        if cfg.wants("svg"):
            window = DataWindow((0.0, TWO_PI), (0.0, TWO_PI))
            write_svg(out / f"{stem}.svg",
                      _scatter_panel(f"standard map, eps = {eps:g}",
                                     "phi", "I", window, cloud))
            artifacts.append(f"{stem}.svg")
        panels.append({"eps": eps, "points": int(len(cloud))})
    if cfg.wants("json"):
        write_json(out / "standard-map-portrait.json", {"panels": panels})
        artifacts.append("standard-map-portrait.json")
    return artifacts, None


def _golden_breakup(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    br = breakup_scan(GOLD, p["eps_low"], p["eps_high"],
                      bracket_width=p["bracket_width"], tol=p["tol"],
                      n_harmonics=p["n_harmonics"])
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "golden-breakup.json", {
            "omega": GOLD,
            "eps_critical_bracket": [br.eps_survives, br.eps_fails],
            "width": br.width,
            "history": [{"eps": e, "converged": bool(c)}
                        for e, c in br.history]})
        artifacts.append("golden-breakup.json")
    if cfg.wants("csv"):
        write_csv(out / "golden-breakup.csv", ("eps", "converged"),
                  [(float(e), int(c)) for e, c in br.history])
        artifacts.append("golden-breakup.csv")
    if cfg.wants("svg"):
        window = DataWindow((p["eps_low"], p["eps_high"]), (0.0, 1.0))
        canvas = SvgCanvas()
        window.frame(canvas, "golden circle breakup scan", "eps",
                     "circle survives")
        for e, converged in br.history:
            canvas.point(*window.xy(e, 1.0 if converged else 0.0),
                         color=PALETTE[2] if converged else PALETTE[1],
                         radius=2.4)
        for edge in (br.eps_survives, br.eps_fails):
            canvas.polyline([window.xy(edge, 0.0), window.xy(edge, 1.0)],
                            color="#999999", dashed=True)
        write_svg(out / "golden-breakup.svg", canvas)
        artifacts.append("golden-breakup.svg")
    return artifacts, None


# ---------------------------------------------------------------------------
# flows


def _forced_oscillator_portrait(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    w0 = p["omega0"]
    disc = 1.0 - 2.0 * w0 * w0
    # inner saddle of f(x) = -w0^2 x + x^2 - x^3/2 bounds the well around 0
    x_saddle = 1.0 - math.sqrt(disc) if disc > 0.0 else 1.0
    seeds = np.linspace(0.1, 0.95, p["n_seeds"]) * x_saddle

    def panel(eps: float):
        def rhs(s, t, par, e=eps):
            x, v = s
            return np.array([v, -w0 * w0 * x + x * x - 0.5 * x ** 3
                             + e * math.sin(t)])
        fld = VectorField(2, rhs, period=TWO_PI, name="forced oscillator")
        pts = []
        for j, x_init in enumerate(seeds):
            traj = integrate(fld, [float(x_init), 0.0],
                             (0.0, TWO_PI * p["n_steps"]), tol=p["tol"])
            for k in range(p["n_steps"] + 1):
                x, v = traj.evaluate(TWO_PI * k)
                pts.append((float(x), float(v), j))
        return pts

    clouds = _pmap(panel, p["eps"])
    artifacts, panels = [], []
    for eps, pts in zip(p["eps"], clouds):
        stem = f"forced-oscillator-portrait-{_eps_tag(eps)}"
        if cfg.wants("csv"):
            write_csv(out / f"{stem}.csv", ("x", "v", "seed"), pts)
            artifacts.append(f"{stem}.csv")
        if cfg.wants("svg"):
            arr = np.asarray([(x, v) for x, v, _ in pts])
            window = DataWindow.around(arr[:, 0], arr[:, 1])
            write_svg(out / f"{stem}.svg",
                      _scatter_panel(f"forced oscillator, eps = {eps:g}",
                                     "x", "dx/dt", window, pts))
            artifacts.append(f"{stem}.svg")
        panels.append({"eps": eps, "points": len(pts)})
    if cfg.wants("json"):
        write_json(out / "forced-oscillator-portrait.json",
                   {"omega0": w0, "panels": panels})
        artifacts.append("forced-oscillator-portrait.json")
    return artifacts, None


def _averaging_demo(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    fld = VectorField(1, rhs=lambda x, t, par: (-x + math.sin(t) ** 2) * x,
                      period=math.pi, name="logistic-forced")
    errors, slope = averaging_error_scaling(fld, math.pi, [p["x0"]],
                                            p["eps"], tol=p["tol"])
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "averaging-demo.json", {
            "x0": p["x0"], "eps": p["eps"],
            "sup_error": [float(e) for e in errors],
            "slope": float(slope)})
        artifacts.append("averaging-demo.json")
    if cfg.wants("csv"):
        write_csv(out / "averaging-demo.csv", ("eps", "sup_error"),
                  list(zip(p["eps"], (float(e) for e in errors))))
        artifacts.append("averaging-demo.csv")
    if cfg.wants("svg"):
        write_svg(out / "averaging-demo.svg",
                  _loglog_panel("averaging error over [0, 1/eps]",
                                "log10 eps", "log10 sup error",
                                p["eps"], errors, fit_slope=float(slope)))
        artifacts.append("averaging-demo.svg")
    return artifacts, None


def _lie_triangle_demo(cfg: ExperimentConfig, out: Path):
    act = action_monomial((1,), 1, exact=True)
    zero = act.zero_like()
    tri = lie_triangle_transform(
        [act, cos_angle(action_power=(1,), exact=True), zero],
        [sin_angle(action_power=(1,), exact=True), zero])
    poly = tri.polynomial_coefficients()
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "lie-triangle-demo.json", {
            "description": "generator sin(phi) I removes the order-eps term "
                           "of H = I + eps I cos(phi)",
            "transformed_orders": [s.to_json_dict() for s in tri.output],
            "polynomial_coefficients": [s.to_json_dict() for s in poly],
            "order2_is_minus_half_action":
                poly[2] == act.scale(Fraction(-1, 2))})
        artifacts.append("lie-triangle-demo.json")
    if cfg.wants("csv"):
        rows = []
        for order, series in enumerate(poly):
            for term in series.to_json_dict()["terms"]:
                rows.append((order, term["k"][0], term["m"][0],
                             float(term["re"]), float(term["im"])))
        write_csv(out / "lie-triangle-demo.csv",
                  ("order", "harmonic", "action_power", "re", "im"), rows)
        artifacts.append("lie-triangle-demo.csv")
    return artifacts, None


# ---------------------------------------------------------------------------
# slow-fast systems


def _tihonov(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    sys_l = linear_decay_system(math.sin, math.cos)
    chart = slow_manifold(sys_l, np.linspace(0.0, TWO_PI, 257), x_guess=[0.0])
    report = tihonov_verify(sys_l, chart, x0=[0.8], y0=0.0,
                            eps_list=p["eps"], t_final=p["t_final"])
    track = acceptance.attractor_tracking(p["eps"])
    exp3 = scalar_drive_expansion(sin_drive(), r=3, y_grid=chart.y_grid)
    refs = [np.sin(chart.y_grid), -np.cos(chart.y_grid),
            -np.sin(chart.y_grid), np.cos(chart.y_grid)]
    coeff_gap = max(float(np.max(np.abs(exp3.terms[k][:, 0] - refs[k])))
                    for k in range(4))
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "tihonov.json", {
            "eps": p["eps"],
            "d_inf": [float(d) for d in report.d_inf],
            "d_slope": float(report.d_slope),
            "reduced_slope": float(report.reduced_slope),
            "decay_rate_estimates": [float(k) for k in report.k0_estimates],
            "tracking": [{"eps": e, "worst_gap": w, "bound_2eps2": b}
                         for e, w, b in track],
            "expansion_coefficient_gap": coeff_gap})
        artifacts.append("tihonov.json")
    if cfg.wants("csv"):
        write_csv(out / "tihonov.csv",
                  ("eps", "d_inf", "decay_rate", "tracking_gap", "bound"),
                  [(e, float(d), float(k), w, b)
                   for (e, w, b), d, k in zip(track, report.d_inf,
                                              report.k0_estimates)])
        artifacts.append("tihonov.csv")
    if cfg.wants("svg"):
        write_svg(out / "tihonov.svg",
                  _loglog_panel("fast-variable distance to the slow manifold",
                                "log10 eps", "log10 sup distance",
                                p["eps"], [float(d) for d in report.d_inf],
                                fit_slope=float(report.d_slope)))
        artifacts.append("tihonov.svg")
    return artifacts, None


def _gevrey_truncation(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    amps = np.array([float(math.factorial(k)) for k in range(p["n_terms"])])
    expansion = AsymptoticExpansion.from_amplitudes(amps)
    results = [optimal_truncation(expansion, eps) for eps in p["eps"]]
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "gevrey-truncation.json", {
            "amplitudes": [float(a) for a in amps],
            "results": [{"eps": e, "k_star": int(r.k_star),
                         "remainder": float(r.remainder_estimate),
                         "disordered": bool(r.disordered)}
                        for e, r in zip(p["eps"], results)]})
        artifacts.append("gevrey-truncation.json")
    if cfg.wants("csv"):
        write_csv(out / "gevrey-truncation.csv",
                  ("eps", "k_star", "remainder", "disordered"),
                  [(e, int(r.k_star), float(r.remainder_estimate),
                    int(r.disordered)) for e, r in zip(p["eps"], results)])
        artifacts.append("gevrey-truncation.csv")
    if cfg.wants("svg"):
        ks = np.arange(len(amps))
        window = DataWindow.around(
            ks, [math.log10(a * max(p["eps"]) ** k) for k, a in
                 enumerate(amps)] + [math.log10(min(
                     a * min(p["eps"]) ** k for k, a in enumerate(amps)))],
            pad=0.08)
        canvas = SvgCanvas()
        window.frame(canvas, "term size of the factorial series",
                     "k", "log10 a_k eps^k")
        for i, (eps, res) in enumerate(zip(p["eps"], results)):
            color = PALETTE[i % len(PALETTE)]
            curve = [window.xy(k, math.log10(a * eps ** k))
                     for k, a in enumerate(amps)]
            canvas.polyline(curve, color=color)
            canvas.point(*window.xy(res.k_star,
                                    math.log10(amps[res.k_star]
                                               * eps ** res.k_star)),
                         color=color, radius=3.0)
            canvas.text(curve[-1][0] - 4, curve[-1][1] - 6, f"eps={eps:g}",
                        size=11, color=color, anchor="end")
        write_svg(out / "gevrey-truncation.svg", canvas)
        artifacts.append("gevrey-truncation.svg")
    return artifacts, None


def _hopf_delay(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    res = hopf_delay(delayed_hopf_system(), y0=p["y0"], eps=p["eps"],
                     r0=p["r0"], r_threshold=p["r_threshold"])
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "hopf-delay.json", {
            "y0": p["y0"], "eps": p["eps"], "r0": p["r0"],
            "threshold": float(res.threshold),
            "predicted_exit": float(res.predicted_exit),
            "observed_exit": float(res.observed_exit),
            "threshold_sensitivity": float(res.threshold_sensitivity),
            "orbit_approach_error": float(res.orbit_approach_error)})
        artifacts.append("hopf-delay.json")
    if cfg.wants("csv"):
        write_csv(out / "hopf-delay.csv", ("t", "y", "r"),
                  [tuple(map(float, row)) for row in res.samples])
        artifacts.append("hopf-delay.csv")
    if cfg.wants("svg"):
        ys = res.samples[:, 1]
        rs = np.maximum(res.samples[:, 2], 1e-300)
        window = DataWindow.around(ys, np.log10(rs), pad=0.08)
        canvas = SvgCanvas()
        window.frame(canvas, "delayed escape across a Hopf point",
                     "y", "log10 r")
        canvas.polyline([window.xy(y, math.log10(r))
                         for y, r in zip(ys, rs)], color=PALETTE[0],
                        width=1.4)
        for mark, color in ((res.predicted_exit, "#999999"),
                            (res.observed_exit, PALETTE[1])):
            canvas.polyline([window.xy(mark, window.y0),
                             window.xy(mark, window.y1)],
                            color=color, dashed=True)
        write_svg(out / "hopf-delay.svg", canvas)
        artifacts.append("hopf-delay.svg")
    return artifacts, None


def _buffer_point(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    analyses = _pmap(lambda t0: buffer_point(drifted_hopf_system(), t0=t0,
                                             eps=p["eps"]), p["t0_values"])
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "buffer-point.json", {
            "eps": p["eps"],
            "runs": [{"t0": t0,
                      "predicted_exit": float(a.predicted_exit),
                      "observed_exit": float(a.observed_exit),
                      "buffer_point": float(a.buffer_point),
                      "sensitivity_mode": a.sensitivity_mode}
                     for t0, a in zip(p["t0_values"], analyses)]})
        artifacts.append("buffer-point.json")
    if cfg.wants("csv"):
        write_csv(out / "buffer-point.csv",
                  ("t0", "predicted_exit", "observed_exit", "buffer_point"),
                  [(t0, float(a.predicted_exit), float(a.observed_exit),
                    float(a.buffer_point))
                   for t0, a in zip(p["t0_values"], analyses)])
        artifacts.append("buffer-point.csv")
    if cfg.wants("svg"):
        all_t = np.concatenate([a.samples[:, 0] for a in analyses])
        all_r = np.concatenate([np.maximum(a.samples[:, 1], 1e-300)
                                for a in analyses])
        window = DataWindow.around(all_t, np.log10(all_r), pad=0.08)
        canvas = SvgCanvas()
        window.frame(canvas, "delay saturation at the buffer point",
                     "t", "log10 r")
        for i, (t0, a) in enumerate(zip(p["t0_values"], analyses)):
            color = PALETTE[i % len(PALETTE)]
            canvas.polyline(
                [window.xy(t, math.log10(max(r, 1e-300)))
                 for t, r in a.samples], color=color, width=1.4)
            canvas.text(window.xy(a.samples[-1, 0], 0)[0] - 4,
                        window.margin + 16 + 14 * i, f"t0={t0:g}", size=11,
                        color=color, anchor="end")
        write_svg(out / "buffer-point.svg", canvas)
        artifacts.append("buffer-point.svg")
    return artifacts, None


def _vdp_relaxation(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    scaling = relaxation_scaling(p["eps"], tol=p["tol"])
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "vdp-relaxation.json", scaling.summary())
        artifacts.append("vdp-relaxation.json")
    if cfg.wants("csv"):
        write_csv(out / "vdp-relaxation.csv",
                  ("eps", "period", "jump_delay", "excursion", "landing_x",
                   "fixed_point_gap"),
                  [(m.eps, m.period, m.jump_delay, m.excursion, m.landing_x,
                    m.fixed_point_gap) for m in scaling.metrics])
        artifacts.append("vdp-relaxation.csv")
    if cfg.wants("svg"):
        write_svg(out / "vdp-relaxation.svg",
                  _loglog_panel("fold-crossing delay of the van der Pol cycle",
                                "log10 eps", "log10 jump delay",
                                [m.eps for m in scaling.metrics],
                                [m.jump_delay for m in scaling.metrics],
                                fit_slope=float(scaling.delay_exponent)))
        artifacts.append("vdp-relaxation.svg")
    return artifacts, None


# ---------------------------------------------------------------------------
# bifurcation diagrams


_REGION_COLORS = {"1": PALETTE[4], "2": PALETTE[2], "3": PALETTE[0],
                  "4": PALETTE[3], "A": PALETTE[7], "B": PALETTE[1],
                  "C": PALETTE[6], "D": PALETTE[7], "TB": "#000000"}


def _tb_diagram(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    grid = tb_region_grid(p["lambda1"], p["lambda2"],
                          workers=worker_cap(),
                          max_locus_nodes=p["locus_nodes"])
    l1_neg = sorted(l1 for l1 in p["lambda1"] if l1 < 0.0)
    hopf_curve = [[l1, math.sqrt(-l1)] for l1 in l1_neg]
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "tb-diagram.json", {
            "lambda1": list(grid.lambda1_values),
            "lambda2": list(grid.lambda2_values),
            "regions": grid.regions,
            "homoclinic_nodes": [[l1, l2] for l1, l2 in grid.locus_nodes],
            "locus_coeffs": grid.locus_coeffs,
            "hopf_curve": hopf_curve,
            "homoclinic_slope_reference": HOMOCLINIC_SLOPE})
        artifacts.append("tb-diagram.json")
    if cfg.wants("csv"):
        rows = []
        for i, l1 in enumerate(grid.lambda1_values):
            for j, l2 in enumerate(grid.lambda2_values):
                rows.append((float(l1), float(l2), grid.regions[i][j]))
        write_csv(out / "tb-diagram.csv", ("lambda1", "lambda2", "region"),
                  rows)
        artifacts.append("tb-diagram.csv")
    if cfg.wants("svg"):
        window = DataWindow.around(p["lambda1"], p["lambda2"], pad=0.1)
        canvas = SvgCanvas()
        window.frame(canvas, "double-zero unfolding", "lambda1", "lambda2")
        dense = np.linspace(min(l1_neg) if l1_neg else -1e-3, 0.0, 60)
        canvas.polyline([window.xy(l1, math.sqrt(-l1)) for l1 in dense],
                        color=PALETTE[1], width=1.4)
        if grid.locus_coeffs is not None:
            xi = np.abs(dense) ** 0.25
            rho = np.polyval(grid.locus_coeffs, xi)
            homo = rho * np.sqrt(-dense)
        else:
            homo = HOMOCLINIC_SLOPE * np.sqrt(-dense)
        canvas.polyline([window.xy(l1, h) for l1, h in zip(dense, homo)],
                        color=PALETTE[6], width=1.4, dashed=True)
        canvas.polyline([window.xy(0.0, window.y0), window.xy(0.0, window.y1)],
                        color="#bbbbbb")
        for i, l1 in enumerate(grid.lambda1_values):
            for j, l2 in enumerate(grid.lambda2_values):
                region = grid.regions[i][j]
                x, y = window.xy(l1, l2)
                canvas.point(x, y, color=_REGION_COLORS.get(region, "#000"))
                canvas.text(x + 3, y - 3, region, size=10,
                            color=_REGION_COLORS.get(region, "#000"))
        write_svg(out / "tb-diagram.svg", canvas)
        artifacts.append("tb-diagram.svg")
    return artifacts, None


def _cusp_diagram(cfg: ExperimentConfig, out: Path):
    p = cfg.params
    l1_grid = np.linspace(p["lambda1_range"][0], p["lambda1_range"][1], p["n"])
    l2_grid = np.linspace(p["lambda2_range"][0], p["lambda2_range"][1], p["n"])
    rows = []
    counts: dict[str, int] = {}
    for l2 in l2_grid:
        for l1 in l1_grid:
            region = cusp_region(float(l1), float(l2))
            rows.append((float(l1), float(l2), len(region.equilibria),
                         region.label))
            counts[region.label] = counts.get(region.label, 0) + 1
    artifacts = []
    if cfg.wants("csv"):
        write_csv(out / "cusp-diagram.csv",
                  ("lambda1", "lambda2", "n_equilibria", "label"), rows)
        artifacts.append("cusp-diagram.csv")
    if cfg.wants("json"):
        write_json(out / "cusp-diagram.json", {
            "lambda1_range": p["lambda1_range"],
            "lambda2_range": p["lambda2_range"], "n": p["n"],
            "label_counts": counts})
        artifacts.append("cusp-diagram.json")
    if cfg.wants("svg"):
        window = DataWindow(tuple(p["lambda1_range"]),
                            tuple(p["lambda2_range"]))
        canvas = SvgCanvas()
        window.frame(canvas, "cubic family equilibria", "lambda1", "lambda2")
        shade = {1: "#bbd4ea", 2: PALETTE[1], 3: PALETTE[0]}
        for l1, l2, count, _ in rows:
            canvas.point(*window.xy(l1, l2), color=shade.get(count, "#000"))
        top = min(p["lambda1_range"][1], window.x1)
        if top > 0:
            branch = np.linspace(0.0, top, 80)
            for sign in (1.0, -1.0):
                pts = [window.xy(l1, sign * math.sqrt(4.0 * l1 ** 3 / 27.0))
                       for l1 in branch
                       if window.y0 <= sign * math.sqrt(4.0 * l1 ** 3 / 27.0)
                       <= window.y1]
                if len(pts) > 1:
                    canvas.polyline(pts, color="#333333", width=1.4)
        write_svg(out / "cusp-diagram.svg", canvas)
        artifacts.append("cusp-diagram.svg")
    return artifacts, None


def _acceptance_suite(cfg: ExperimentConfig, out: Path):
    results = [acceptance.run_criterion(i) for i in cfg.params["criteria"]]
    all_passed = all(r.passed for r in results)
    artifacts = []
    if cfg.wants("json"):
        write_json(out / "acceptance-suite.json", {
            "criteria": [r.as_dict() for r in results],
            "all_passed": all_passed,
            "n_passed": sum(r.passed for r in results),
            "n_failed": sum(not r.passed for r in results)})
        artifacts.append("acceptance-suite.json")
    if cfg.wants("csv"):
        write_csv(out / "acceptance-suite.csv",
                  ("id", "name", "passed", "elapsed_s"),
                  [(r.cid, r.name, int(r.passed), r.elapsed_s)
                   for r in results])
        artifacts.append("acceptance-suite.csv")
    payload = {"all_passed": all_passed}
    return artifacts, payload, [r.line() for r in results]


_RUNNERS = {
    "standard-map-portrait": _standard_map_portrait,
    "golden-breakup": _golden_breakup,
    "forced-oscillator-portrait": _forced_oscillator_portrait,
    "averaging-demo": _averaging_demo,
    "lie-triangle-demo": _lie_triangle_demo,
    "tihonov": _tihonov,
    "gevrey-truncation": _gevrey_truncation,
    "hopf-delay": _hopf_delay,
    "buffer-point": _buffer_point,
    "vdp-relaxation": _vdp_relaxation,
    "tb-diagram": _tb_diagram,
    "cusp-diagram": _cusp_diagram,
    "acceptance-suite": _acceptance_suite,
}


def run_experiment(cfg: ExperimentConfig) -> RunResult:
    """Run one experiment, write its artifacts plus manifest, return both."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    outcome = _RUNNERS[cfg.experiment](cfg, out)
    artifacts, payload = outcome[0], outcome[1]
    lines = outcome[2] if len(outcome) > 2 else []
    manifest = cfg.manifest_dict()
    manifest["artifacts"] = list(artifacts)
    write_json(out / "manifest.json", manifest)
    return RunResult(out, list(artifacts) + ["manifest.json"], payload, lines)
