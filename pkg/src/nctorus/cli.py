"""Command line front end: JSON config in, CSV plus JSON report out.

Outputs are data only and bitwise deterministic for a fixed config (no
timestamps, fixed float formatting).  Exit codes: 0 on success, 1 for
usage or configuration problems, 2 when a tolerance check fails (the
report JSON then carries the failures).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import dirac, dynamics, fourier, gns, summation, verify, weyl
from .dynamics import DiffeoSpec, benchmark
from .errors import NcTorusError
from .gns import TruncationBox
from .tolerances import resolve


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_report(path: Path, payload: dict) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _coeff_rows(table: fourier.FourierCoeffs) -> list[list]:
    rows = []
    for k in table.box.blocks():
        for l in table.box.modes():
            v = table.entry(int(k), int(l))
            rows.append([table.kind, int(k), int(l), v.real, v.imag, abs(v)])
    return rows


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("config root must be a JSON object")
    return data


def _setup(config: dict, args) -> dict:
    if "diffeo" in config:
        d = DiffeoSpec.from_dict(config["diffeo"])
    elif "alpha" in config:
        alpha = float(config["alpha"])
        d = dynamics.rotation(alpha,
                              classical=bool(config.get("classical_mode",
                                                        False)))
    else:
        d = benchmark()
    box_cfg = config.get("truncation", config.get("box", {}))
    box = TruncationBox(int(box_cfg.get("K", box_cfg.get("block_bound", 16))),
                        int(box_cfg.get("M", box_cfg.get("mode_bound", 16))),
                        int(box_cfg.get("G", box_cfg.get("grid_size", 0))))
    seed = int(config.get("seed", 7))
    tols = resolve(config.get("tolerances"), scale=args.tol_scale)
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("NCTORUS_THREADS", "1") or 1)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return {"d": d, "box": box, "seed": seed, "tols": tols,
            "threads": threads, "config": config}


def _element(config: dict, key: str, alpha: float, seed: int,
             offset: int = 0) -> weyl.WeylElement:
    if key in config:
        f = weyl.WeylElement.from_dict(config[key])
        if f.alpha != alpha:
            raise ValueError(f"{key} alpha does not match the dynamics")
        return f
    rng = np.random.default_rng(seed + offset)
    return weyl.random_element(rng, alpha, 2, decay=1.0)


def _finish(env: dict, out: Path, name: str, report: dict,
            failures: list[str]) -> int:
    report["config_echo"] = env["config"]
    report["tolerances"] = env["tols"]
    report["failures"] = sorted(failures)
    _write_report(out / f"{name}_report.json", report)
    if failures:
        print(json.dumps({"command": name, "failures": sorted(failures)},
                         sort_keys=True))
        return 2
    return 0


def _cmd_star(env: dict, out: Path) -> int:
    cfg, d = env["config"], env["d"]
    f = _element(cfg, "element", d.alpha, env["seed"])
    g = _element(cfg, "second_element", d.alpha, env["seed"], offset=1)
    product = weyl.star_product(f, g)
    with open(out / "star_product.json", "w") as handle:
        json.dump(product.to_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")
    span = range(-2, 3)
    pairs = [((m, n), (mm, nn)) for m in span for n in span
             for mm in span for nn in span]
    relation_dev = weyl.weyl_relation_check(d.alpha, pairs)
    tr = weyl.trace(product)
    report = {
        "alpha": d.alpha,
        "entries": len(product),
        "trace_re": tr.real,
        "trace_im": tr.imag,
        "relation_deviation": relation_dev,
        "tolerance": env["tols"]["weyl_relation"],
        "outputs": ["star_product.json"],
    }
    failures = (["weyl_relation"]
                if relation_dev > env["tols"]["weyl_relation"] else [])
    return _finish(env, out, "star", report, failures)


def _cmd_represent(env: dict, out: Path) -> int:
    cfg, d, box = env["config"], env["d"], env["box"]
    f = _element(cfg, "element", d.alpha, env["seed"])
    table = fourier.hat_functional(f, d, box)
    _write_csv(out / "vacuum_image.csv",
               ["kind", "k", "l", "re", "im", "abs"], _coeff_rows(table))
    operator = gns.represent(f, d, box)
    term_rows = []
    g = box.grid_size
    for s in sorted(operator.terms):
        hats = np.fft.fft(operator.terms[s], axis=1) / g
        for i, n in enumerate(box.blocks()):
            for l in box.modes():
                v = hats[i][l % g]
                term_rows.append([s, int(n), int(l), v.real, v.imag])
    _write_csv(out / "represent_terms.csv",
               ["shift", "n", "mode", "re", "im"], term_rows)
    norm = operator.apply(gns.vacuum(box)).norm()
    sup = table.sup()
    report = {
        "operator_norm": operator.norm_estimate(),
        "vacuum_image_norm": norm,
        "sup_coefficient": sup,
        "endpoint_slack": max(0.0, sup - norm),
        "tolerance": env["tols"]["hausdorff_young_endpoint"],
        "outputs": ["vacuum_image.csv", "represent_terms.csv"],
    }
    failures = (["hausdorff_young_endpoint"]
                if sup - norm > env["tols"]["hausdorff_young_endpoint"]
                else [])
    return _finish(env, out, "represent", report, failures)


def _cmd_fourier(env: dict, out: Path) -> int:
    cfg, d, box = env["config"], env["d"], env["box"]
    f = _element(cfg, "element", d.alpha, env["seed"])
    kinds = cfg.get("fourier", {}).get("kinds", ["hat", "paren"])
    outputs = []
    profile_rows = []
    for kind in kinds:
        table = summation.table_of(f, d, box, kind)
        name = f"fourier_{kind}.csv"
        _write_csv(out / name, ["kind", "k", "l", "re", "im", "abs"],
                   _coeff_rows(table))
        outputs.append(name)
        profile = fourier.riemann_lebesgue_profile(table)
        profile_rows += [[kind, ring, float(v)]
                         for ring, v in enumerate(profile)]
    _write_csv(out / "riemann_lebesgue.csv", ["kind", "ring", "sup"],
               profile_rows)
    outputs.append("riemann_lebesgue.csv")
    route_dev = fourier.route_agreement(f, d, box)
    report = {
        "route_deviation": route_dev,
        "tolerance": env["tols"]["paren_routes"],
        "outputs": outputs,
    }
    failures = (["paren_routes"]
                if route_dev > env["tols"]["paren_routes"] else [])
    return _finish(env, out, "fourier", report, failures)


def _smoothing(env: dict, out: Path, name: str) -> int:
    cfg, d, box = env["config"], env["d"], env["box"]
    f = _element(cfg, "element", d.alpha, env["seed"])
    section = cfg.get(name, {})
    kind = section.get("kind", "hat")
    if name == "fejer":
        params = section.get("orders", [4, 8, 16])
        kernels = [summation.SummationKernel("fejer", order=int(n))
                   for n in params]
    else:
        params = section.get("radii", [0.9, 0.99, 0.999])
        kernels = [summation.SummationKernel("abel", radius=float(r))
                   for r in params]
    rows = summation.convergence_profile(f, d, box, kind, kernels)
    csv_name = f"{name}_convergence.csv"
    _write_csv(out / csv_name, ["parameter", "l2_error", "sup_coeff_error"],
               [[row["parameter"], row["l2_error"], row["sup_coeff_error"]]
                for row in rows])
    report = {"kind": kind, "outputs": [csv_name]}
    failures = []
    errs = [row["l2_error"] for row in rows]
    if name == "fejer":
        ratios = [errs[i + 1] / errs[i] for i in range(len(errs) - 1)
                  if errs[i] > 0]
        lo, hi = env["tols"]["fejer_ratio_low"], env["tols"]["fejer_ratio_high"]
        report["ratios"] = ratios
        report["band"] = [lo, hi]
        if any(not lo <= r <= hi for r in ratios):
            failures.append("fejer_ratio_band")
        x = gns.random_vector(np.random.default_rng(env["seed"]), box,
                              block_margin=box.block_bound - 2,
                              mode_margin=box.mode_bound - 2)
        dev = summation.transference_integral_check(x, 3, 16, d)
        report["transference_deviation"] = dev
        if dev > env["tols"]["transference_integral"]:
            failures.append("transference_integral")
    else:
        drops = [errs[i] - errs[i + 1] for i in range(len(errs) - 1)]
        report["monotone"] = all(dr > 0 for dr in drops)
        if not report["monotone"]:
            failures.append("abel_monotone")
    return _finish(env, out, name, report, failures)


def _cmd_dirac(env: dict, out: Path) -> int:
    cfg, d, box = env["config"], env["d"], env["box"]
    section = cfg.get("dirac", {})
    radius = int(section.get("block_radius", 8))
    etas = [float(e) for e in section.get("etas", [0.0, 0.25, 0.5, 0.75, 1.0])]
    master_radius = min(int(section.get("master_radius", 4)),
                        box.block_bound, box.mode_bound)
    growth = dynamics.growth_sequence(d, max(radius, box.block_bound) + 1)
    rows = dirac.resolvent_profile(
        d, box, range(-radius, radius + 1), etas, growth=growth,
        slack=env["tols"]["dirac_bound_slack"], threads=env["threads"])
    _write_csv(out / "dirac_blocks.csv",
               ["n", "eta", "sigma_min", "bound", "margin"],
               [[row["n"], row["eta"], row["sigma_min"], row["bound"],
                 row["margin"]] for row in rows])
    a = dirac.a_sequence(growth, radius + 1)
    tele = dirac.telescoping_deviation(a, growth)

    a_box = dirac.a_sequence(growth, box.block_bound)
    span = range(-master_radius, master_radius + 1)
    element_rows = []
    master = 0.0
    for eta in (e for e in etas if e in (0.0, 0.5, 1.0)):
        for k in span:
            oracle = dirac.matrix_element_oracle_table(
                eta, k, d, box, a_box, master_radius)
            for si, s in enumerate(span):
                for li, l in enumerate(span):
                    closed = dirac.matrix_element_closed_form(
                        eta, k, l, k, s, d, box, a_box)
                    dev = abs(closed - oracle[si, li])
                    master = max(master, dev)
                    element_rows.append([eta, k, l, s, closed.real,
                                         closed.imag, dev])
    _write_csv(out / "dirac_elements.csv",
               ["eta", "k", "l", "s", "re", "im", "deviation"],
               element_rows)
    comm_excess = 0.0
    for n in range(-radius, radius + 1):
        for eta in (0.0, 0.5, 1.0):
            _, norm, bound = dirac.commutator_block(n, eta, d, box, growth)
            comm_excess = max(
                comm_excess,
                norm - bound * (1.0 + env["tols"]["dirac_bound_slack"]))
    margin = min(row["margin"] for row in rows)
    master_tol = (env["tols"]["dirac_master_rotation"] if d.is_rotation
                  else env["tols"]["dirac_master"])
    report = {
        "master_deviation": master,
        "master_tolerance": master_tol,
        "telescoping": tele,
        "commutator_excess": comm_excess,
        "min_margin": margin,
        "outputs": ["dirac_blocks.csv", "dirac_elements.csv"],
    }
    failures = []
    if master > master_tol:
        failures.append("dirac_master")
    if tele > env["tols"]["telescoping"]:
        failures.append("telescoping")
    if comm_excess > 0.0:
        failures.append("commutator_bound")
    if margin < 0.0:
        failures.append("resolvent_margin")
    return _finish(env, out, "dirac", report, failures)


def _cmd_growth(env: dict, out: Path) -> int:
    cfg, d = env["config"], env["d"]
    n_max = int(cfg.get("growth", {}).get("n_max", 16))
    growth = dynamics.growth_sequence(d, n_max)
    a = dirac.a_sequence(growth, n_max)
    rows = []
    for n in range(n_max + 1):
        lam = summation.SummationKernel("dirichlet", order=n).l1_norm()
        rows.append([n, growth.gamma(n), float(a[n_max + n]), lam])
    _write_csv(out / "growth.csv", ["n", "gamma", "a", "dirichlet_l1"], rows)
    lam10 = summation.SummationKernel("dirichlet", order=10).l1_norm()
    lam100 = summation.SummationKernel("dirichlet", order=100).l1_norm()
    target = 4.0 / math.pi ** 2 * math.log(10.0)
    band_dev = abs((lam100 - lam10) - target)
    report = {
        "band_deviation": band_dev,
        "band": env["tols"]["dirichlet_band"],
        "outputs": ["growth.csv"],
    }
    failures = (["dirichlet_growth"]
                if band_dev > env["tols"]["dirichlet_band"] else [])
    return _finish(env, out, "growth", report, failures)


def _cmd_verify(env: dict, out: Path) -> int:
    cfg = env["config"]
    quick = bool(cfg.get("quick", True))
    results = verify.run_all(env["d"], env["box"], env["tols"],
                             seed=env["seed"], quick=quick,
                             threads=env["threads"])
    _write_csv(out / "verify.csv", ["name", "tolerance", "observed", "passed"],
               [[r.name, r.tolerance, r.observed, r.passed] for r in results])
    failures = [r.name for r in results if not r.passed]
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        extra = f"  ({r.note})" if r.note else ""
        print(f"[{tag}] {r.name}: observed {r.observed:.3e} vs "
              f"tolerance {r.tolerance:.3e}{extra}")
    report = {
        "checks": len(results),
        "outputs": ["verify.csv"],
        "results": {r.name: {"observed": r.observed,
                             "tolerance": r.tolerance,
                             "passed": r.passed} for r in results},
    }
    return _finish(env, out, "verify", report, failures)


_COMMANDS = {
    "star": _cmd_star,
    "represent": _cmd_represent,
    "fourier": _cmd_fourier,
    "fejer": lambda env, out: _smoothing(env, out, "fejer"),
    "abel": lambda env, out: _smoothing(env, out, "abel"),
    "dirac": _cmd_dirac,
    "growth": _cmd_growth,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _Parser(prog="nctorus",
                     description="Deformed torus harmonic analysis toolkit")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default NCTORUS_THREADS or 1)")
    parser.add_argument("--tol-scale", type=float, default=1.0,
                        help="multiply every tolerance by this factor")
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        env = _setup(config, args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](env, out)
    except (NcTorusError, OSError, ValueError, KeyError,
            json.JSONDecodeError) as exc:
        print(f"nctorus: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
