"""Command-line front end.

Four subcommands over a JSON run configuration:

    lrl landmarks  --config cfg.json   regime, stationary and turning points
    lrl trajectory --config cfg.json   closed-form orbit as CSV
    lrl verify     --config cfg.json   invariant suite, exit 1 on failure
    lrl sweep      --config cfg.json   landmark grid scan as CSV

Config schema: {"spec": {"family": ..., "params": {...}},
"ctx": {"ell": f, "energy": f}, "options": {...}} with the friction system
using family "friction" and no ctx.  Exit codes are a stable contract:
0 success, 1 verification failure, 2 domain/regime error, 3 usage/parse
error.  All floats are rendered %.17g so canonical JSON and CSV round-trip
exactly; there is no plotting dependency, output is data for external
tools.
"""

import argparse
import itertools
import json
import math
import sys
from typing import List, Optional, Sequence, Tuple

from . import friction_lab, lrl_engine, oracle, potentials

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_DOMAIN = 2
EXIT_PARSE = 3

CSV_HEADER = "phi,r,x,y,lrl_x,lrl_y,lrl_mod"


class ConfigError(ValueError):
    """Malformed or out-of-contract run configuration."""


_FAMILIES = {
    "kepler": (potentials.kepler, ("k",)),
    "harmonic": (potentials.harmonic, ("k",)),
    "oblate": (potentials.oblate, ("k", "B")),
    "cosmological": (potentials.cosmological, ("k", "lambda")),
    "cornell": (potentials.cornell, ("a", "b")),
    "gr": (potentials.gr_massive, ("GM", "c")),
    "str": (potentials.str_coulomb, ("k", "m0", "E_rel", "L")),
}


def _fmt(v) -> str:
    return "%.17g" % v


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, %.17g floats, compact separators.

    Parsing canonical output and re-serializing it is byte-identical,
    which is what the round-trip contract of config files relies on.
    """
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise ConfigError("JSON object keys must be strings")
            items.append(json.dumps(key) + ":" + canonical_json(obj[key]))
        return "{" + ",".join(items) + "}"
    raise ConfigError("unserializable value of type %s" % type(obj).__name__)


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc))
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def parse_config(cfg: dict):
    """Validate and build (family, spec-or-friction, ctx-or-None, options)."""
    try:
        spec_blk = cfg["spec"]
        family = spec_blk["family"]
        params = spec_blk.get("params", {})
    except (KeyError, TypeError) as exc:
        raise ConfigError("config needs spec.family and spec.params: %s" % exc)
    options = cfg.get("options", {})
    if not isinstance(options, dict):
        raise ConfigError("options must be an object")
    for key, val in options.items():
        if key.endswith("_tol"):
            if not isinstance(val, (int, float)) or not 1e-14 <= val <= 1e-3:
                raise ConfigError(
                    "tolerance %s = %r outside [1e-14, 1e-3]" % (key, val))
    if family == "friction":
        try:
            fspec = friction_lab.FrictionSpec(
                alpha=float(params["alpha"]), mu=float(params["mu"]),
                beta=float(params["beta"]), A_mag=float(params["A_mag"]),
                phi0=float(params.get("phi0", 0.0)))
        except KeyError as exc:
            raise ConfigError("friction params need %s" % exc)
        return family, fspec, None, options
    if family not in _FAMILIES:
        raise ConfigError("unknown family %r" % family)
    ctor, names = _FAMILIES[family]
    try:
        spec = ctor(*[float(params[name]) for name in names])
    except KeyError as exc:
        raise ConfigError("family %s needs param %s" % (family, exc))
    try:
        ctx_blk = cfg["ctx"]
        ctx = potentials.RadialContext(ell=float(ctx_blk["ell"]),
                                       energy=float(ctx_blk["energy"]))
    except (KeyError, TypeError) as exc:
        raise ConfigError("config needs ctx.ell and ctx.energy: %s" % exc)
    return family, spec, ctx, options


def _rootset_doc(rs) -> dict:
    return {"real_roots": list(rs.real_roots),
            "complex_pairs": [[a, b] for a, b in rs.complex_pairs]}


def _expected_checks(cfg: dict, doc: dict) -> Optional[list]:
    """Compare dotted-path annotations in cfg["expected"] with the document.

    Informational: landmark documents carry the comparison, they do not
    turn it into an exit code (that is cmd_verify's job).
    """
    expected = cfg.get("expected")
    if not expected:
        return None
    tol = cfg.get("expected_rel_tol", 1e-3)
    checks = []
    for path in sorted(expected):
        node = doc
        ok = True
        for part in path.split("."):
            if isinstance(node, list):
                part = int(part)
                ok = 0 <= part < len(node)
            else:
                ok = isinstance(node, dict) and part in node
            if not ok:
                break
            node = node[part]
        if not ok or not isinstance(node, (int, float)):
            checks.append({"name": path, "expected": expected[path],
                           "measured": None, "pass": False})
            continue
        want = expected[path]
        err = abs(node - want) / max(1.0, abs(want))
        checks.append({"name": path, "expected": want, "measured": node,
                       "rel_err": err, "pass": err <= tol})
    return checks


def cmd_landmarks(cfg: dict) -> dict:
    family, spec, ctx, options = parse_config(cfg)
    if family == "friction":
        doc = {"family": family,
               "infall_angle": spec.beta / spec.alpha if spec.alpha > 0.0
               else None}
        checks = _expected_checks(cfg, doc)
        if checks is not None:
            doc["expected_checks"] = checks
        return doc
    report = potentials.classify_regime(
        spec, ctx, critical_tol=options.get("critical_tol"))
    doc = {"family": family, "regime": report.regime,
           "details": dict(report.details)}
    try:
        st = potentials.stationary_points(spec, ctx)
        doc["stationary_points"] = [
            {"r": r, "label": lab,
             "v_eff": potentials.v_eff(spec, ctx, r)}
            for r, lab in zip(st.real_roots, st.labels or [])]
    except potentials.PotentialDomainError:
        doc["stationary_points"] = []
    try:
        tp = potentials.turning_points(spec, ctx)
        doc["reality_roots"] = _rootset_doc(tp)
        doc["turning_points"] = list(tp.bracket)
    except potentials.UnboundedError:
        doc["reality_roots"] = _rootset_doc(potentials._reality_roots(
            potentials.reduce_spec(spec, ctx), ctx))
        doc["turning_points"] = None
    if family == "cosmological" and spec.params["lambda"] > 0.0:
        lam = spec.params["lambda"]
        k = spec.params["k"]
        doc["critical_exact"] = lrl_engine.desitter_exact_landmarks(
            k, ctx.ell, lam)
        doc["critical_perturbative"] = lrl_engine.desitter_perturbative_landmarks(
            k, ctx.ell, lam, order=int(options.get("order", 3)))
    checks = _expected_checks(cfg, doc)
    if checks is not None:
        doc["expected_checks"] = checks
    return doc


def _csv_row(phi, r, vec) -> str:
    x = r * math.cos(phi)
    y = r * math.sin(phi)
    return ",".join(_fmt(v) for v in
                    (phi, r, x, y, vec[0], vec[1], vec[2]))


def cmd_trajectory(cfg: dict) -> List[str]:
    """CSV lines (header + samples) of the closed-form trajectory."""
    family, spec, ctx, options = parse_config(cfg)
    count = int(options.get("count", 512))
    revolutions = float(options.get("revolutions", 1.0))
    lines = [CSV_HEADER]
    if count <= 0:
        return lines
    if family == "friction":
        phi_start = float(options.get("phi_start",
                                      spec.phi0 - 2.0 * math.pi * revolutions))
        phi_end = float(options.get("phi_end", spec.beta / spec.alpha
                                    if spec.alpha > 0.0
                                    else phi_start + 2.0 * math.pi))
        ax = spec.A_mag * math.cos(spec.phi0)
        ay = spec.A_mag * math.sin(spec.phi0)
        r_first = None
        for i in range(count):
            phi = phi_start + (phi_end - phi_start) * i / count
            try:
                r = friction_lab.friction_trajectory(spec, phi)
            except friction_lab.FrictionDomainError:
                break  # infall reached: the series truncates
            except friction_lab.TrajectoryUndefinedError:
                continue
            if r_first is None:
                r_first = r
            elif r <= 1e-8 * r_first:
                break  # reported down to the crash floor only
            lines.append(_csv_row(phi, r, (ax, ay, spec.A_mag)))
        return lines
    pair = lrl_engine.closed_form_pair(spec, ctx,
                                       c1=float(options.get("c1", 1.0)),
                                       c2=float(options.get("c2", 0.0)))
    branch = options.get("branch")
    phi_start = float(options.get(
        "phi_start", lrl_engine.trajectory_anchor_angle(pair, branch)))
    step = 2.0 * math.pi * revolutions / count
    for i in range(count + 1):
        phi = phi_start + step * i
        try:
            r = lrl_engine.trajectory_r_of_phi(pair, phi, branch)
        except lrl_engine.BranchDomainError:
            continue  # unbound arc of the conic: no physical point here
        vec = lrl_engine.lrl_along_trajectory(pair, phi, branch)
        lines.append(_csv_row(phi, r, (vec.x, vec.y, vec.modulus)))
    return lines


def _verify_conservative(spec, ctx, options) -> List[dict]:
    corrupt = float(options.get("corrupt_g", 1.0))
    pair = lrl_engine.closed_form_pair(spec, ctx,
                                       c1=float(options.get("c1", 1.0)),
                                       c2=float(options.get("c2", 0.0)))
    lo, hi = pair.bracket
    checks = []

    grid = [lo + (hi - lo) * i / 200.0 for i in range(1, 200)]
    m0 = pair.modulus_constant() ** 2
    dev = 0.0
    for r in grid:
        g = pair.g(r) * corrupt
        m2 = (r * g) ** 2 + 2.0 * pair.ell ** 2 * pair.h(r) ** 2 \
            * pair.energy_gap(r)
        dev = max(dev, abs(m2 - m0) / m0)
    checks.append({"name": "modulus_constancy", "value": dev,
                   "threshold": options.get("modulus_tol", 1e-10)})

    dev = 0.0
    for i in range(2, 19):
        r = lo + (hi - lo) * i / 20.0
        hp = oracle.finite_diff(pair.h, r, order=1)
        gg = lrl_engine.g_from_h(pair.spec,
                                 potentials.RadialContext(pair.ell,
                                                          pair.energy),
                                 pair.h(r), hp, r)
        ref = pair.g(r) * corrupt
        dev = max(dev, abs(gg - ref) / max(1.0, abs(ref)))
    checks.append({"name": "g_consistency", "value": dev,
                   "threshold": options.get("g_tol", 1e-8)})

    dev = 0.0
    for i in range(3, 18):
        r = lo + (hi - lo) * i / 20.0
        h2 = oracle.finite_diff(pair.h, r, order=2)
        h1 = oracle.finite_diff(pair.h, r, order=1)
        p1, p2 = lrl_engine.ansatz_coefficients(pair.spec,
                                                potentials.RadialContext(
                                                    pair.ell, pair.energy),
                                                r)
        res = h2 + p1 * h1 + p2 * pair.h(r)
        dev = max(dev, abs(res) / max(1e-300, abs(pair.h(r))))
    checks.append({"name": "ode_residual", "value": dev,
                   "threshold": options.get("ode_tol", 1e-7)})

    periods = float(options.get("periods", 3.0))
    period = oracle.radial_period(spec, ctx)
    r0 = 0.5 * (lo + hi)
    rdot0 = math.sqrt(2.0 * (ctx.energy - potentials.v_eff(spec, ctx, r0)))
    init = oracle.OrbitSample(t=0.0, r=r0, phi=0.0, rdot=rdot0,
                              energy=ctx.energy, ell=ctx.ell)
    samples = oracle.integrate_orbit(
        spec, ctx, init, periods * period,
        rel_tol=float(options.get("integrate_rel_tol", 1e-11)),
        abs_tol=1e-13)
    vecs = lrl_engine.lrl_series(pair, samples)
    stats = oracle.drift([(v.x, v.y) for v in vecs])
    checks.append({"name": "lrl_drift", "value": stats["max_rel"],
                   "threshold": options.get("drift_tol", 1e-8)})

    if options.get("table1"):
        r_grid = [0.5 + 2.0 * i / 49.0 for i in range(50)]
        worst = 0.0
        for n in (1, 2, 3):
            res = lrl_engine.verify_table1_row(n, 1.0, 0.7, 0.4, ctx, r_grid)
            worst = max(worst, res["e5_residual"], res["e6_residual"])
        row4 = lrl_engine.verify_table1_row("sqrt", 1.0, 0.7, 0.4, ctx,
                                            r_grid)
        worst = max(worst, row4["m_absorbed"]["e5_residual"],
                    row4["m_absorbed"]["e6_residual"])
        checks.append({"name": "table1_residuals", "value": worst,
                       "threshold": options.get("table1_tol", 1e-9)})
    return checks


def _verify_friction(spec, options) -> List[dict]:
    checks = []
    xi0 = friction_lab.xi_of_phi(spec, spec.phi0) if spec.alpha > 0.0 else 1.0
    phis = [spec.phi0 - xi0 * f for f in (0.3, 1.0, 2.4, 5.0, 11.0)]
    dev = 0.0
    for phi in phis:
        z = friction_lab.z_of_phi(spec, phi)
        zq = oracle.quadrature(
            lambda eta, p=phi: math.sin(p - eta)
            / (spec.beta - spec.alpha * eta) ** 2,
            spec.phi0, phi, tol=1e-13)
        dev = max(dev, abs(z - spec.mu * zq))
    checks.append({"name": "z_vs_quadrature", "value": dev,
                   "threshold": options.get("z_tol", 1e-9)})

    r0 = float(options.get("r0", 1.0))
    t_span = float(options.get("t_span", 1.0))
    samples = friction_lab.integrate_friction_orbit(
        spec, r0=r0, rdot0=float(options.get("rdot0", 0.0)),
        phi_start=spec.phi0, t_span=t_span)
    res = friction_lab.hamiltonian_vector(spec, samples)
    checks.append({"name": "lrl_drift", "value": res["A_drift"]["max_rel"],
                   "threshold": options.get("drift_tol", 1e-6)})

    ax, ay = res["A"][0]
    amag = math.hypot(ax, ay)
    aang = math.atan2(ay, ax)
    fitted = friction_lab.FrictionSpec(alpha=spec.alpha, mu=spec.mu,
                                       beta=spec.beta, A_mag=amag,
                                       phi0=aang)
    dev = max(abs(s.r * (friction_lab.z_of_phi(fitted, s.phi)
                         + amag * math.cos(s.phi - aang)) - 1.0)
              for s in samples)
    checks.append({"name": "trajectory_identity", "value": dev,
                   "threshold": options.get("identity_tol", 1e-10)})
    return checks


def cmd_verify(cfg: dict) -> Tuple[dict, List[str], int]:
    """Invariant report: (JSON document, human lines, exit code)."""
    family, spec, ctx, options = parse_config(cfg)
    if family == "friction":
        checks = _verify_friction(spec, options)
    else:
        checks = _verify_conservative(spec, ctx, options)
    lines = []
    all_pass = True
    for chk in checks:
        chk["pass"] = chk["value"] <= chk["threshold"]
        all_pass = all_pass and chk["pass"]
        lines.append("%s %-20s value %.3e threshold %.3e"
                     % ("PASS" if chk["pass"] else "FAIL",
                        chk["name"], chk["value"], chk["threshold"]))
    doc = {"checks": checks, "all_pass": all_pass}
    return doc, lines, EXIT_OK if all_pass else EXIT_VERIFY


def _apply_override(cfg: dict, path: str, value):
    node = cfg
    parts = path.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = value


def cmd_sweep(cfg: dict) -> Tuple[List[str], int]:
    """Landmark scan over a cartesian parameter grid, as CSV lines."""
    base_family, _, _, options = parse_config(cfg)
    grid = options.get("grid", {})
    if not isinstance(grid, dict):
        raise ConfigError("options.grid must map config paths to lists")
    keys = sorted(grid)
    axes = []
    for key in keys:
        vals = grid[key]
        if not isinstance(vals, list):
            raise ConfigError("grid axis %s must be a list" % key)
        axes.append(vals)
    n_points = 1
    for ax in axes:
        n_points *= max(len(ax), 1)
    if n_points > 1_000_000:
        raise ConfigError("grid larger than 1e6 points")
    pert = base_family == "cosmological"
    cols = keys + ["regime", "r_min", "E_min", "r_max", "E_max",
                   "r_peri", "r_apo"]
    if pert:
        cols += ["pert_rM_relerr", "pert_r1_relerr", "pert_ratio_relerr"]
    cols.append("error")
    lines = [",".join(cols)]
    any_ok = False
    if not keys or any(len(ax) == 0 for ax in axes):
        return lines, EXIT_OK
    for combo in itertools.product(*axes):
        point = json.loads(json.dumps(cfg))
        for key, val in zip(keys, combo):
            _apply_override(point, key, val)
        row = {k: (_fmt(v) if isinstance(v, float) else str(v))
               for k, v in zip(keys, combo)}
        try:
            family, spec, ctx, opts = parse_config(point)
            report = potentials.classify_regime(spec, ctx)
            row["regime"] = report.regime
            for field in ("r_min", "E_min", "r_max", "E_max"):
                if field in report.details:
                    row[field] = _fmt(report.details[field])
            if "r_peri" in report.details:
                row["r_peri"] = _fmt(report.details["r_peri"])
                row["r_apo"] = _fmt(report.details["r_apo"])
            if pert and spec.params["lambda"] > 0.0:
                lam = spec.params["lambda"]
                exact = lrl_engine.desitter_exact_landmarks(
                    spec.params["k"], ctx.ell, lam)
                approx = lrl_engine.desitter_perturbative_landmarks(
                    spec.params["k"], ctx.ell, lam,
                    order=int(opts.get("order", 1)))
                for col, key2 in (("pert_rM_relerr", "r_M"),
                                  ("pert_r1_relerr", "r_1"),
                                  ("pert_ratio_relerr", "ratio")):
                    row[col] = _fmt(abs(approx[key2] - exact[key2])
                                    / abs(exact[key2]))
            any_ok = True
        except (ConfigError, ValueError, ArithmeticError,
                oracle.NonConvergenceError) as exc:
            row["error"] = type(exc).__name__
        lines.append(",".join(row.get(c, "") for c in cols))
    return lines, EXIT_OK if any_ok else EXIT_DOMAIN


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="lrl",
        description="Conserved-vector toolkit: landmarks, trajectories, "
                    "invariant verification, parameter sweeps.")
    parser.add_argument("command",
                        choices=("landmarks", "trajectory", "verify",
                                 "sweep"))
    parser.add_argument("--config", required=True,
                        help="path to the JSON run configuration")
    parser.add_argument("--out", help="output file (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"),
                        help="output format (default: natural per command)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        if args.command == "landmarks":
            doc = cmd_landmarks(cfg)
            _emit(canonical_json(doc) + "\n", args.out)
            return EXIT_OK
        if args.command == "trajectory":
            lines = cmd_trajectory(cfg)
            if args.format == "json":
                header = lines[0].split(",")
                rows = [dict(zip(header, map(float, ln.split(","))))
                        for ln in lines[1:]]
                _emit(canonical_json(rows) + "\n", args.out)
            else:
                _emit("\n".join(lines) + "\n", args.out)
            return EXIT_OK
        if args.command == "verify":
            doc, human, code = cmd_verify(cfg)
            for line in human:
                print(line, file=sys.stderr)
            _emit(canonical_json(doc) + "\n", args.out)
            return code
        lines, code = cmd_sweep(cfg)
        _emit("\n".join(lines) + "\n", args.out)
        return code
    except ConfigError as exc:
        print("lrl: config error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except (potentials.PotentialDomainError, lrl_engine.EngineError,
            friction_lab.FrictionError, oracle.NonConvergenceError) as exc:
        print("lrl: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
