"""Command-line front end: ``randzono {exact,theorem1,clt,zonoid}``.

Each run reads one JSON config, fills in defaults, and writes the resolved
config into every output file. Exit codes: 0 pass, 1 tolerance or statistical
failure, 2 invalid input, 3 degenerate variance.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from randzono.core import (
    CapacityError,
    DomainError,
    ValuationSpec,
    Zonotope,
    binom,
    direction_grid,
    hausdorff_upper_bound,
    subset_identity_sides,
    support_values,
    valuation,
)
from randzono.distributions import (
    GAUSSIAN_ZONOID_RADIUS,
    PRINTED_GAUSSIAN_RADIUS,
    DistributionSpec,
    SeedSpec,
    sample,
)
from randzono.estimators import (
    KernelContext,
    clt_experiment,
    surrogate_for,
    valuation_of_Zn_via_ustat,
    verify_theorem1,
    vitale_check,
)

log = logging.getLogger("randzono")

SCHEMA_VERSION = "1"
EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3

DEFAULTS = {
    "exact": {
        "seed": 20240101,
        "stream": 0,
        "cube_max_d": 6,
        "cube_tol": 1e-12,
        "subset_cases": 50,
        "subset_max_n": 10,
        "subset_max_d": 4,
        "subset_max_j": 3,
        "subset_tol": 1e-10,
        "ustat_max_n": 12,
        "ustat_d": 3,
        "ustat_tol": 1e-10,
    },
    "theorem1": {
        "seed": 1,
        "stream": 0,
        "valuation": {"kind": "intrinsic", "j": 1},
        "p": 2,
        "reps": 100000,
        "surrogate": {"kind": "auto", "n": 100000},
        "z_threshold": 4.0,
        "vitale": None,
        "oracle_samples": 10**7,
    },
    "clt": {
        "seed": 1,
        "stream": 0,
        "valuation": {"kind": "intrinsic", "j": 1},
        "n": 2000,
        "reps": 2000,
        "subsample": None,
        "zeta1_reps": 100000,
        "surrogate": {"kind": "auto", "n": 100000},
        "variance_rel_tol": 0.10,
        "ks_coefficient": 1.63,
    },
    "zonoid": {
        "seed": 1,
        "stream": 0,
        "n_values": [100, 1000, 10000, 100000],
        "directions": 360,
        "surrogate": {"kind": "auto", "n": 100000},
        "max_final_distance": None,
    },
}


class ConfigError(Exception):
    pass


# --------------------------------------------------------------------------
# config handling


def resolve_config(command: str, raw: dict, seed: int | None = None, overrides=()) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    cfg = copy.deepcopy(DEFAULTS[command])
    for key, value in raw.items():
        if isinstance(value, dict) and isinstance(cfg.get(key), dict):
            cfg[key] = {**cfg[key], **value}
        else:
            cfg[key] = value
    for item in overrides:
        key, sep, text = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        if isinstance(value, (dict, list)):
            raise ConfigError(f"--set only overrides scalar fields, got {key}")
        cfg[key] = value
    if seed is not None:
        cfg["seed"] = seed
    if command != "exact" and "distribution" not in cfg:
        raise ConfigError(f"'{command}' needs a 'distribution' object")
    return cfg


def _seed(cfg) -> SeedSpec:
    return SeedSpec(cfg["seed"], cfg.get("stream", 0))


def _int(cfg, key, minimum):
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"'{key}' must be an integer >= {minimum}, got {value!r}")
    return value


def _surrogate(cfg, dist, seed):
    opts = cfg["surrogate"]
    return surrogate_for(dist, seed, kind=opts.get("kind", "auto"), n_empirical=opts.get("n", 10**5))


# --------------------------------------------------------------------------
# output helpers


def _config_comment(cfg) -> str:
    return "# config: " + json.dumps(cfg, sort_keys=True) + "\n"


def write_csv(path: Path, cfg: dict, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write(_config_comment(cfg))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    path.write_text(buf.getvalue())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def write_json(path: Path, command: str, cfg: dict, result: dict) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg, "result": result}
    path.write_text(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")


# --------------------------------------------------------------------------
# commands


def cmd_exact(cfg: dict, out: Path, threads: int = 1) -> int:
    """Deterministic identities: cube values, p-subset averaging, U-statistic form."""
    rng = _seed(cfg).generator()
    rows = []

    def record(suite, case, d, n, j, p, kind, value, reference, tol):
        residual = abs(value - reference)
        ok = residual <= tol * (1.0 if suite == "cube" else max(1.0, abs(reference)))
        rows.append([suite, case, d, n, j, p, kind, value, reference, residual, tol, int(ok)])

    case = 0
    for d in range(1, _int(cfg, "cube_max_d", 1) + 1):
        for j in range(1, d + 1):
            value = valuation(Zonotope(np.eye(d)), ValuationSpec.intrinsic(j), threads=threads)
            record("cube", case, d, d, j, "", "intrinsic", value, float(binom(d, j)), cfg["cube_tol"])
            case += 1

    for case in range(_int(cfg, "subset_cases", 0)):
        d = int(rng.integers(1, cfg["subset_max_d"] + 1))
        j = int(rng.integers(1, min(cfg["subset_max_j"], d) + 1))
        n = int(rng.integers(j, cfg["subset_max_n"] + 1))
        G = rng.standard_normal((n, d))
        if case % 3 == 2:
            spec = ValuationSpec.mixed(j, rng.standard_normal((d - j, d)))
        else:
            spec = ValuationSpec.intrinsic(j)
        for p in range(j, n + 1):
            lhs, rhs = subset_identity_sides(G, spec, p)
            record("subset_identity", case, d, n, j, p, spec.kind, rhs, lhs, cfg["subset_tol"])

    d = _int(cfg, "ustat_d", 1)
    case = 0
    for n in range(1, _int(cfg, "ustat_max_n", 1) + 1):
        X = rng.standard_normal((n, d))
        for j in range(1, min(3, d) + 1):
            spec = ValuationSpec.intrinsic(j)
            direct = valuation(Zonotope(X), spec) / n**j
            for p in range(j, n + 1):
                via = valuation_of_Zn_via_ustat(KernelContext(spec, p), X)
                record("ustat_form", case, d, n, j, p, "intrinsic", via, direct, cfg["ustat_tol"])
            case += 1

    header = ["suite", "case", "d", "n", "j", "p", "kind", "value", "reference", "residual", "tolerance", "pass"]
    write_csv(out / "exact_residuals.csv", cfg, header, rows)
    summary = {}
    for row in rows:
        s = summary.setdefault(row[0], {"checks": 0, "failures": 0, "max_residual": 0.0})
        s["checks"] += 1
        s["failures"] += 1 - row[-1]
        s["max_residual"] = max(s["max_residual"], row[9])
    passed = all(s["failures"] == 0 for s in summary.values())
    write_json(out / "exact_report.json", "exact", cfg, {"suites": summary, "passed": passed})
    for name, s in summary.items():
        print(f"{name}: {s['checks']} checks, {s['failures']} failures, max residual {s['max_residual']:.3e}")
    return EXIT_PASS if passed else EXIT_FAIL


def _radius_block(oracle=None) -> dict:
    block = {
        "library": GAUSSIAN_ZONOID_RADIUS,
        "printed": PRINTED_GAUSSIAN_RADIUS,
        "note": "the printed radius disagrees with E max(<X,u>,0); values implied by both are reported",
    }
    if oracle is not None:
        block["oracle"] = oracle.to_dict()
    return block


def cmd_theorem1(cfg: dict, out: Path, threads: int = 1) -> int:
    dist = DistributionSpec.from_dict(cfg["distribution"])
    spec = ValuationSpec.from_dict(cfg["valuation"])
    p = _int(cfg, "p", 1)
    reps = _int(cfg, "reps", 2)
    seed = _seed(cfg)
    KernelContext(spec, p)
    spec.check_dim(dist.d)
    surrogate = _surrogate(cfg, dist, seed.child(2))
    report = verify_theorem1(dist, spec, p, reps, seed, surrogate=surrogate, threads=threads)
    result = report.to_dict()
    z_ok = abs(report.z_score) < cfg["z_threshold"]
    print(
        f"E phi(Z_{p}) = {report.estimate.mean:.6g} +/- {report.estimate.stderr:.2g}, "
        f"prediction {report.prediction:.6g} (factor {report.factor}), z = {report.z_score:.3f}"
    )
    vitale = cfg["vitale"]
    if vitale is None:
        vitale = dist.kind == "gaussian_std" and spec.kind == "intrinsic" and p == spec.j == dist.d
    if vitale:
        if dist.kind != "gaussian_std":
            raise ConfigError("the determinant check needs a standard Gaussian law")
        vr = vitale_check(dist.d, reps, seed.child(5), oracle_samples=_int(cfg, "oracle_samples", 2), threads=threads)
        result["vitale"] = vr.to_dict()
        result["gaussian_radius"] = _radius_block(vr.radius_oracle)
        z_ok = z_ok and abs(vr.z_score) < cfg["z_threshold"]
        print(
            f"E|det| = {vr.determinant.mean:.6g} +/- {vr.determinant.stderr:.2g}; "
            f"d! V_d(Z_X) with oracle radius {vr.target_oracle:.6g}, "
            f"with printed radius {vr.target_printed:.6g}"
        )
    elif dist.kind == "gaussian_std":
        result["gaussian_radius"] = _radius_block()
    result["passed"] = z_ok
    write_json(out / "theorem1_report.json", "theorem1", cfg, result)
    return EXIT_PASS if z_ok else EXIT_FAIL


def cmd_clt(cfg: dict, out: Path, threads: int = 1) -> int:
    dist = DistributionSpec.from_dict(cfg["distribution"])
    spec = ValuationSpec.from_dict(cfg["valuation"])
    n = _int(cfg, "n", 1)
    reps = _int(cfg, "reps", 2)
    subsample = cfg["subsample"]
    if subsample is not None:
        subsample = _int(cfg, "subsample", 1)
    seed = _seed(cfg)
    spec.check_dim(dist.d)
    surrogate = _surrogate(cfg, dist, seed.child(2))
    report = clt_experiment(
        dist,
        spec,
        n,
        reps,
        seed,
        surrogate=surrogate,
        subsample=subsample,
        zeta1_reps=_int(cfg, "zeta1_reps", 2),
        threads=threads,
        variance_rel_tol=cfg["variance_rel_tol"],
        ks_coefficient=cfg["ks_coefficient"],
    )
    result = report.to_dict()
    write_json(out / "clt_report.json", "clt", cfg, result)
    write_csv(out / "clt_deviations.csv", cfg, ["rep", "deviation"], enumerate(report.deviations))
    if report.degenerate:
        print(f"degenerate: zeta_1 = {report.zeta1:.3g}; support check: {list(report.lemma41.reasons)}")
        return EXIT_DEGENERATE
    print(
        f"variance {report.empirical_variance:.6g} vs predicted {report.predicted_variance:.6g} "
        f"(ratio {report.variance_ratio:.4f}); KS {report.ks_statistic:.4f} vs {report.ks_critical:.4f}"
    )
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_zonoid(cfg: dict, out: Path, threads: int = 1) -> int:
    dist = DistributionSpec.from_dict(cfg["distribution"])
    seed = _seed(cfg)
    count = _int(cfg, "directions", 1)
    n_values = cfg["n_values"]
    if not n_values or any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in n_values):
        raise ConfigError("'n_values' must be a nonempty list of positive integers")
    U = direction_grid(dist.d, count, seed.child(3).generator())
    surrogate = _surrogate(cfg, dist, seed.child(2))
    h_zx = surrogate.support(U)
    X = sample(dist, max(n_values), seed.child(0))
    trace, support_rows = [], []
    for n in n_values:
        Zn = Zonotope(X[:n], 1.0 / n)
        dist_n = hausdorff_upper_bound(Zn, surrogate.support, U)
        trace.append([n, U.shape[0], dist_n])
        for k, (u, h_n, h_x) in enumerate(zip(U, support_values(Zn, U), h_zx)):
            support_rows.append([n, k, *u.tolist(), h_n, h_x])
    coords = [f"u{i + 1}" for i in range(dist.d)]
    write_csv(out / "zonoid_support.csv", cfg, ["n", "direction", *coords, "h_Zn", "h_ZX"], support_rows)
    write_csv(out / "zonoid_trace.csv", cfg, ["n", "directions", "estimated_distance"], trace)
    result = {
        "surrogate": surrogate.to_dict(),
        "trace": [{"n": n, "directions": m, "estimated_distance": e} for n, m, e in trace],
    }
    if dist.kind == "discrete":
        direct = np.maximum(U @ dist.atoms.T, 0.0) @ dist.probs
        result["surrogate_self_check"] = float(np.max(np.abs(h_zx - direct)))
    final = trace[-1][2]
    ok = len(trace) == 1 or final < trace[0][2]
    if cfg["max_final_distance"] is not None:
        ok = ok and final < cfg["max_final_distance"]
    result["passed"] = ok
    write_json(out / "zonoid_report.json", "zonoid", cfg, result)
    for n, m, e in trace:
        print(f"n = {n:>8d}: estimated distance {e:.4e} over {m} directions")
    return EXIT_PASS if ok else EXIT_FAIL


COMMANDS = {"exact": cmd_exact, "theorem1": cmd_theorem1, "clt": cmd_clt, "zonoid": cmd_zonoid}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randzono", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=(fn.__doc__ or name).splitlines()[0])
        p.add_argument("--config", type=Path, help="JSON config file")
        p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a scalar field")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        raw = {}
        if args.config is not None:
            raw = json.loads(args.config.read_text())
        cfg = resolve_config(args.command, raw, args.seed, args.set)
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        args.out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, args.out, threads=args.threads)
    except json.JSONDecodeError as exc:
        log.error("cannot parse config: %s", exc)
    except OSError as exc:
        log.error("%s", exc)
    except (ConfigError, DomainError, CapacityError, KeyError, TypeError) as exc:
        log.error("invalid input: %s", exc)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
