"""Command line entry point: ``simmabv <command> --config model.json``.

Every report is a JSON document that embeds the fully resolved
configuration (defaults filled in) and the root seed, so feeding the
embedded ``config`` back through ``--config`` reproduces the run.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import math
import sys
from dataclasses import dataclass

import jsonschema
import numpy as np

from . import criteria as cr
from . import noise_models as nm
from . import simulate as sim
from .kernels import KernelPair, kernel_from_dict
from .numerics import SeedSpec, integrate

EXIT_OK, EXIT_ERROR, EXIT_INDETERMINATE = 0, 1, 2

_NUMBER = {"anyOf": [{"type": "number"}, {"enum": ["inf", "-inf"]}]}
_NUMBERS = {"type": "array", "items": _NUMBER}

_LEVY = {
    "type": "object",
    "required": ["family"],
    "oneOf": [
        {"properties": {"family": {"const": "stable"}, "c1": _NUMBER, "c2": _NUMBER, "alpha": _NUMBER},
         "required": ["c1", "c2", "alpha"], "additionalProperties": False},
        {"properties": {"family": {"const": "tempered_stable"}, "d1": _NUMBER, "d2": _NUMBER,
                        "beta": _NUMBER, "l1": _NUMBER, "l2": _NUMBER},
         "required": ["d1", "d2", "beta", "l1", "l2"], "additionalProperties": False},
        {"properties": {"family": {"const": "atoms"},
                        "atoms": {"type": "array", "minItems": 1,
                                  "items": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}}},
         "required": ["atoms"], "additionalProperties": False},
        {"properties": {"family": {"const": "tabulated"}, "r": _NUMBERS, "g": _NUMBERS,
                        "tail_exponent": {"anyOf": [_NUMBER, {"type": "null"}]}},
         "required": ["r", "g"], "additionalProperties": False},
    ],
}

_KERNEL = {
    "type": "object",
    "required": ["family"],
    "oneOf": [
        {"properties": {"family": {"const": "fractional"}, "alpha": _NUMBER},
         "required": ["alpha"], "additionalProperties": False},
        {"properties": {"family": {"const": "indicator"}, "a": _NUMBER, "b": _NUMBER},
         "required": ["a", "b"], "additionalProperties": False},
        {"properties": {"family": {"const": "smooth_bump"}, "a": _NUMBER, "b": _NUMBER},
         "additionalProperties": False},
        {"properties": {"family": {"const": "weierstrass_bump"}, "a": _NUMBER,
                        "b": {"type": "integer"}, "terms": {"type": "integer", "minimum": 1}},
         "additionalProperties": False},
        {"properties": {"family": {"const": "piecewise_linear"},
                        "knots": {"type": "array", "minItems": 2,
                                  "items": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}}},
         "required": ["knots"], "additionalProperties": False},
    ],
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["components"],
    "additionalProperties": False,
    "properties": {
        "components": {
            "type": "array", "minItems": 1,
            "items": {
                "type": "object",
                "required": ["kernel"],
                "additionalProperties": False,
                "properties": {
                    "weight": _NUMBER, "theta": _NUMBER, "sigma2": _NUMBER,
                    "levy": {"anyOf": [_LEVY, {"type": "null"}]},
                    "kernel": _KERNEL,
                    "kernel0": {"enum": ["same", "zero"]},
                },
            },
        },
        "plan": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_max": {"type": "integer", "minimum": 1, "maximum": 20},
                "replicas": {"type": "integer", "minimum": 1},
                "window": {"anyOf": [{"type": "null"},
                                     {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}]},
                "series_terms": {"type": "integer", "minimum": 1},
                "gaussian_compensation": {"type": "boolean"},
                "left_extent": _NUMBER,
                "seed": {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1},
            },
        },
    },
}

COMPONENT_DEFAULTS = {"weight": 1.0, "theta": 0.0, "sigma2": 0.0, "levy": None, "kernel0": "same"}
PLAN_DEFAULTS = {"n_max": 12, "replicas": 1000, "window": None, "series_terms": 10_000,
                 "gaussian_compensation": False, "left_extent": 8.0, "seed": 0}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: cr.MixedModel
    plan: sim.SimPlan
    resolved: dict

    @property
    def seed(self) -> int:
        return self.plan.seed.root


def _numbers(obj):
    """Replace the strings "inf"/"-inf" by floats, recursively."""
    if isinstance(obj, dict):
        return {k: _numbers(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_numbers(v) for v in obj]
    if obj == "inf":
        return math.inf
    if obj == "-inf":
        return -math.inf
    return obj


def _json_safe(obj):
    """Inverse of :func:`_numbers` plus numpy scalars and arrays; NaN becomes null."""
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _json_safe(obj.tolist())
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
    return obj


def resolve(doc: dict) -> dict:
    """Validate ``doc`` and fill every default; the result is what reports embed."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"config field {where}: {err.message}")
    out = {"components": [{**COMPONENT_DEFAULTS, **copy.deepcopy(c)} for c in doc["components"]],
           "plan": {**PLAN_DEFAULTS, **copy.deepcopy(doc.get("plan", {}))}}
    return out


def build(resolved: dict) -> RunConfig:
    doc = _numbers(resolved)
    comps, pairs = [], []
    for i, c in enumerate(doc["components"]):
        try:
            comps.append(nm.NoiseComponent(c["weight"], c["theta"], c["sigma2"], nm.levy_from_dict(c["levy"])))
            pairs.append(KernelPair(kernel_from_dict(c["kernel"]), c["kernel0"]))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"component {i}: {exc}") from exc
    p = doc["plan"]
    try:
        plan = sim.SimPlan(n_max=p["n_max"], window=None if p["window"] is None else tuple(p["window"]),
                           series_terms=p["series_terms"], gaussian_compensation=p["gaussian_compensation"],
                           replicas=p["replicas"], seed=SeedSpec(p["seed"]), left_extent=p["left_extent"])
    except ValueError as exc:
        raise ConfigError(f"plan: {exc}") from exc
    return RunConfig(cr.MixedModel(nm.MixedNoise(tuple(comps)), tuple(pairs)), plan, resolved)


def parse_config(text: str) -> RunConfig:
    """Parse a JSON configuration document into a validated :class:`RunConfig`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return build(resolve(doc))


def weierstrass_config(terms: int = 20) -> dict:
    """Resolved config of the Weierstrass-bump / unit-rate Poisson model."""
    model = sim.weierstrass_model(terms)
    comp, pair = next(iter(model))
    return resolve({"components": [{"weight": comp.weight, "theta": comp.theta, "sigma2": comp.sigma2,
                                    "levy": _json_safe(comp.rho.to_dict()), "kernel": pair.f.to_dict(),
                                    "kernel0": pair.mode}]})


# --- identity battery --------------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    name: str
    computed: float
    expected: float
    tol: float

    @property
    def rel_error(self) -> float:
        if self.expected == self.computed:
            return 0.0
        return abs(self.computed - self.expected) / abs(self.expected)

    @property
    def ok(self) -> bool:
        return self.rel_error <= self.tol


def _tail_identity_checks(rho, name, tol):
    out = []
    g = lambda r: nm.tail_mass(rho, r)
    for u in np.geomspace(0.01, 100, 12):
        u = float(u)
        first = u * g(u) + integrate(g, u, math.inf).value
        second = integrate(lambda r: 2 * r * g(r), 0.0, u).value - u * u * g(u)
        out.append(IdentityCheck(f"{name} tail first moment u={u:.4g}", nm.tail_first_moment(rho, u), first, tol))
        out.append(IdentityCheck(f"{name} truncated second moment u={u:.4g}",
                                 nm.truncated_second_moment(rho, u), second, tol))
    return out


def identity_battery(tol: float | None = None) -> list[IdentityCheck]:
    """Closed forms against quadrature; ``tol`` overrides every tolerance."""
    t = (lambda x: x) if tol is None else (lambda x: tol)
    checks = []
    for alpha in (1.2, 1.5, 1.9):
        rho = nm.Stable(1, 1, alpha)
        for u in (0.1, 1.0, 10.0):
            checks.append(IdentityCheck(f"stable({alpha}) xi quadrature u={u}", nm.xi_quad(rho, u),
                                        rho.xi_constant * u ** alpha, t(1e-6)))
    rho = nm.Stable(1, 1, 1.5)
    for u in np.geomspace(1e-2, 1e2, 20):
        checks.append(IdentityCheck(f"stable(1.5) moment ratio u={u:.4g}", nm.moment_ratio(rho, float(u)),
                                    (2 - 1.5) / (1.5 - 1), t(1e-6)))
    checks += _tail_identity_checks(nm.Stable(1, 1, 1.5), "stable(1.5)", t(1e-5))
    checks += _tail_identity_checks(nm.TemperedStable(1, 1, 1.5, 1, 1), "tempered(1.5)", t(1e-5))
    for alpha in (0.1, 0.25, 0.4):
        for x in (0.5, 1.0, 2.0):
            checks.append(IdentityCheck(f"fractional({alpha}) xi factor x={x}", cr.sim_cal_quadrature(alpha, x),
                                        cr.sim_cal_closed(alpha, x), t(1e-6)))
    checks.append(IdentityCheck("stable(1.5) moment ratio u=1e4 vs Karamata limit",
                                nm.moment_ratio(rho, 1e4), nm.karamata_ratio_limit(-1.5), t(1e-2)))
    return checks


# --- commands ----------------------------------------------------------------

def _report(command: str, cfg: RunConfig | None, body: dict) -> dict:
    rep = {"command": command}
    if cfg is not None:
        rep["config"] = cfg.resolved
        rep["seed"] = cfg.seed
    rep.update(body)
    return rep


def _verdict_body(v: cr.Verdict) -> dict:
    return {"verdict": {"status": v.status, "theorem": v.theorem, "branch": v.branch,
                        "caveats": list(v.caveats), "notes": list(v.notes)},
            "evidence": v.evidence()}


def cmd_check(cfg, args):
    v = cr.verdict(cfg.model)
    code = EXIT_INDETERMINATE if v.status == cr.INDETERMINATE else EXIT_OK
    return code, _report("check", cfg, _verdict_body(v))


def cmd_bound(cfg, args):
    v = cr.verdict(cfg.model)
    if v.status == cr.INDETERMINATE:
        return EXIT_INDETERMINATE, _report("bound", cfg, _verdict_body(v))
    try:
        bound = cr.expected_bv_bound(cfg.model, v)
    except cr.PreconditionError as exc:
        return EXIT_ERROR, _report("bound", cfg, {"error": str(exc), **_verdict_body(v)})
    return EXIT_OK, _report("bound", cfg, {
        "theorem": "Sufficiency", "C_f": v.report.Cf.value, "D_f": v.report.Df.value,
        "bound": bound, "formula": "sqrt(2/pi) C_f^(1/2) + (5/4) max(D_f, D_f^(1/2))"})


def _level_rows(levels_by_replica):
    for r, lv in enumerate(levels_by_replica):
        for n, v in enumerate(lv):
            yield {"replica": r, "n": n, "V_n": repr(float(v))}


def cmd_simulate(cfg, args):
    R = args.replicas or 1
    levels, counts = [], []
    for r in range(R):
        p = sim.sample_path(cfg.model, cfg.plan, cfg.plan.seed.child(r))
        levels.append(p.levels)
        counts.append(list(p.jump_counts))
    if args.csv:
        _write_csv(args.csv, ["replica", "n", "V_n"], _level_rows(levels))
    sampler = sim.Sampler(cfg.model, cfg.plan)
    return EXIT_OK, _report("simulate", cfg, {
        "replicas": R, "levels": [lv.tolist() for lv in levels], "jump_counts": counts,
        "diagnostics": sampler.diagnostics})


def cmd_mbv(cfg, args):
    n = cfg.plan.n_max if args.level is None else args.level
    est = sim.mc_expected_variation(cfg.model, cfg.plan, n, args.replicas)
    if args.csv:
        rows = ({"n": k, "increment_mean": est.increment_mean[k], "increment_se": est.increment_se[k],
                 "variation_mean": est.variation_mean[k], "variation_se": est.variation_se[k]}
                for k in range(cfg.plan.n_max + 1))
        _write_csv(args.csv, ["n", "increment_mean", "increment_se", "variation_mean", "variation_se"], rows)
    return EXIT_OK, _report("mbv", cfg, {
        "level": n, "replicas": est.replicas, "estimate": est.mean, "se": est.se,
        "quantity": "2^n E|X(2^-n) - X(0)|",
        "increment_mean": est.increment_mean, "increment_se": est.increment_se,
        "variation_mean": est.variation_mean, "variation_se": est.variation_se})


def cmd_sandwich(cfg, args):
    top = 6 if args.level is None else args.level
    R = args.replicas or cfg.plan.replicas
    reps = sim.verify_L1_sandwich(cfg.model, list(range(top + 1)), R, cfg.plan)
    rows = [{"n": r.n, "I_n": r.I_n, "lower": r.lower, "upper": r.upper,
             "estimate": r.estimate, "se": r.se, "inside": r.inside} for r in reps]
    if args.csv:
        _write_csv(args.csv, list(rows[0]), rows)
    ok = all(r.inside for r in reps)
    return (EXIT_OK if ok else EXIT_ERROR), _report("sandwich", cfg, {
        "replicas": R, "rows": rows, "all_inside": ok,
        "bounds": "(1/4) min(I_n, I_n^(1/2)) - 3 SE <= E|2^n dX| <= (5/4) max(I_n, I_n^(1/2)) + 3 SE"})


def cmd_zeroone(cfg, args):
    z = cr.zero_one_classify(cfg.model)
    body = {"classification": {"global_law": z.global_law, "local_law": z.local_law,
                               "via": z.via, "notes": list(z.notes)}}
    finite = all(c.sigma2 == 0 and nm.total_mass(c.rho) < math.inf for c in cfg.model.noise)
    if finite:
        R = args.replicas or cfg.plan.replicas
        e = sim.zero_one_experiment(cfg.model, cfg.plan, R)
        body["experiment"] = {
            "replicas": e.replicas, "fraction_empty_window": e.fraction_empty_window,
            "se_empty_window": e.se_empty_window, "reference_empty_window": math.exp(-2),
            "fraction_bounded": e.fraction_bounded,
            "single_atom_replicas": e.single_atom_replicas,
            "single_atom_min_ratio": e.single_atom_min_ratio,
            "single_atom_failures": e.single_atom_failures,
            "zero_atom_replicas": e.zero_atom_replicas,
            "zero_atom_max_variation": e.zero_atom_max_variation,
            "growth_threshold": e.growth_threshold, "low_level": e.low_level}
    return EXIT_OK, _report("zeroone", cfg, body)


def cmd_identities(cfg, args):
    checks = identity_battery(args.tol)
    rows = [{"name": c.name, "computed": c.computed, "expected": c.expected,
             "rel_error": c.rel_error, "tol": c.tol, "ok": c.ok} for c in checks]
    ok = all(c.ok for c in checks)
    return (EXIT_OK if ok else EXIT_ERROR), _report("identities", cfg, {"all_ok": ok, "checks": rows})


def cmd_table(cfg, args):
    rows = []
    for case in cr.canonical_models():
        v = cr.verdict(case.model)
        rows.append({"model": case.name, "status": v.status, "theorem": v.theorem, "branch": v.branch,
                     "expected": case.expected, "expected_theorem": case.theorem,
                     "match": v.status == case.expected and v.theorem == case.theorem,
                     "notes": list(v.notes)})
    ok = all(r["match"] for r in rows)
    return (EXIT_OK if ok else EXIT_ERROR), _report("table", cfg, {"rows": rows, "all_match": ok})


COMMANDS = {"check": cmd_check, "bound": cmd_bound, "simulate": cmd_simulate, "mbv": cmd_mbv,
            "sandwich": cmd_sandwich, "zeroone": cmd_zeroone, "identities": cmd_identities,
            "table": cmd_table}
NEEDS_CONFIG = {"check", "bound", "simulate", "mbv", "sandwich"}


def _write_csv(path, fields, rows):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        for row in rows:
            w.writerow(row)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="simmabv", description="Finite-variation analysis of mixed moving averages.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON model configuration")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--csv", help="also write a CSV table (levels or per-n estimates)")
    ap.add_argument("--seed", type=int, help="root seed, overrides plan.seed")
    ap.add_argument("--replicas", "-R", type=int, help="Monte Carlo replicas")
    ap.add_argument("--level", type=int, help="dyadic level n")
    ap.add_argument("--tol", type=float, help="tolerance override for identities")
    ap.add_argument("--weierstrass", action="store_true",
                    help="zeroone: use the Weierstrass-bump Poisson model")
    return ap


def _load(args) -> RunConfig | None:
    if args.weierstrass:
        resolved = weierstrass_config()
    elif args.config:
        with open(args.config) as fh:
            text = fh.read()
        cfg = parse_config(text)
        resolved = cfg.resolved
    else:
        if args.command in NEEDS_CONFIG or args.command == "zeroone":
            raise ConfigError(f"{args.command} needs --config")
        return None
    resolved = copy.deepcopy(resolved)
    if args.seed is not None:
        resolved["plan"]["seed"] = args.seed
    if args.replicas is not None:
        resolved["plan"]["replicas"] = args.replicas
    if args.level is not None and args.command in ("simulate", "mbv", "sandwich"):
        resolved["plan"]["n_max"] = max(resolved["plan"]["n_max"], args.level, 1)
    return build(resolve(resolved))


def run_command(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        code, report = COMMANDS[args.command](cfg, args)
    except (ConfigError, OSError, ValueError, nm.InvariantViolation) as exc:
        print(f"simmabv: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = json.dumps(_json_safe(report), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
