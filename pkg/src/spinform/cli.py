"""Command line front end: ``spinform simulate|compare|collapse|verify``.

Runs are described by a single JSON document; unknown keys are errors. Exit
codes: 0 success, 1 a check or assertion failed (or integration blew up),
2 the configuration is invalid.
"""
import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import cqd, verification
from .dynamics import Law, PhysicalParams, initial_state, integrate
from .exceptions import (ConfigError, DomainError, FieldRangeError, IntegrationError,
                         PurityError, SpinformError)
from .fields import field_from_dict

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

_STATE_COLUMNS = {
    "vector": ["mx", "my", "mz"],
    "density": [f"rho{i}{j}_{part}" for i in range(2) for j in range(2) for part in ("re", "im")],
    "spinor": ["psi_up_re", "psi_up_im", "psi_down_re", "psi_down_im"],
}

_DEFAULT_OUT = {"simulate": "trajectory.csv", "compare": "compare.json",
                "collapse": "collapse.json", "verify": "verify.json"}


@dataclass
class RunConfig:
    law: str = None
    laws: list = None
    field: dict = None
    params: dict = dc_field(default_factory=dict)
    theta: float = None
    phi: float = 0.0
    t_end: float = None
    dt: float = None
    renorm: bool = False
    out: str = None
    format: str = "csv"
    seed: int = 0
    ensemble_size: int = None

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg._validate_common()
        return cfg

    def _validate_common(self):
        for key in ("theta", "phi", "t_end", "dt"):
            v = getattr(self, key)
            if v is not None and not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ConfigError(f"{key} must be a finite number")
        if self.dt is not None and self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.t_end is not None and self.dt is not None and self.t_end < self.dt:
            raise ConfigError("t_end must be at least dt")
        if self.ensemble_size is not None and (not isinstance(self.ensemble_size, int)
                                               or self.ensemble_size < 1):
            raise ConfigError("ensemble_size must be a positive integer")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed must be an integer")
        if self.format != "csv":
            raise ConfigError(f"unsupported output format {self.format!r}")
        if not isinstance(self.renorm, bool):
            raise ConfigError("renorm must be true or false")

    def require(self, *keys):
        missing = [k for k in keys if getattr(self, k) is None]
        if missing:
            raise ConfigError(f"missing configuration keys: {missing}")

    def physical_params(self):
        unknown = set(self.params) - {"gamma", "hbar", "k_i"}
        if unknown:
            raise ConfigError(f"unknown params keys: {sorted(unknown)}")
        try:
            return PhysicalParams(**{k: float(v) for k, v in self.params.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    def field_spec(self):
        if not isinstance(self.field, dict):
            raise ConfigError("field must be an object with a 'kind' key")
        try:
            return field_from_dict(self.field)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid field: {exc}") from None

    def law_list(self):
        if self.laws is None:
            raise ConfigError("missing configuration key 'laws'")
        try:
            laws = [Law(l) for l in self.laws]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if len(laws) < 2 or len(set(laws)) != len(laws):
            raise ConfigError("compare needs at least two distinct laws")
        return laws


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path, payload):
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")


def trajectory_csv(record):
    """CSV text for a trajectory; floats use the shortest round-trip repr."""
    kind = record.law.kind
    header = ["t"] + _STATE_COLUMNS[kind] + ["norm_dev", "purity_dev"]
    flat = record.states.reshape(len(record), -1)
    if kind != "vector":
        flat = np.stack([flat.real, flat.imag], axis=-1).reshape(len(record), -1)
    table = np.column_stack([record.times, flat, record.norm_dev, record.purity_dev])
    lines = [",".join(header)]
    lines.extend(",".join(map(repr, row)) for row in table.tolist())
    return "\n".join(lines) + "\n"


def _load_config(path):
    if path is None:
        raise ConfigError("--config is required")
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return RunConfig.from_dict(data)


def _out_path(args, cfg, command):
    return Path(args.out or (cfg.out if cfg is not None else None) or _DEFAULT_OUT[command])


def cmd_simulate(cfg, out):
    cfg.require("law", "field", "theta", "t_end", "dt")
    try:
        law = Law(cfg.law)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    p = cfg.physical_params()
    f = cfg.field_spec()
    try:
        y0 = initial_state(law, cfg.theta, cfg.phi)
    except SpinformError as exc:
        raise ConfigError(str(exc)) from None
    summary_path = out.with_suffix(".json")
    if summary_path == out:
        summary_path = out.with_name(out.name + ".summary.json")
    summary = {"law": law.value, "config": _config_echo(cfg)}
    try:
        rec = integrate(law, y0, f, p, cfg.t_end, cfg.dt, renorm=cfg.renorm)
    except IntegrationError as exc:
        summary.update(status="nan_abort", error=str(exc), snapshot=exc.snapshot)
        _write_json(summary_path, summary)
        print(f"integration aborted: {exc}", file=sys.stderr)
        print(json.dumps(exc.snapshot, sort_keys=True), file=sys.stderr)
        return EXIT_FAIL
    _atomic_write(out, trajectory_csv(rec))
    summary.update(
        status="ok", n_samples=len(rec), csv=out.name,
        final_bloch=rec.bloch()[-1].tolist(),
        max_abs_norm_dev=float(np.max(np.abs(rec.norm_dev))),
        max_abs_purity_dev=float(np.max(np.abs(rec.purity_dev))),
    )
    _write_json(summary_path, summary)
    print(f"{law.value}: {len(rec)} samples -> {out}")
    return EXIT_OK


def cmd_compare(cfg, out):
    cfg.require("field", "theta", "t_end", "dt")
    laws = cfg.law_list()
    config = verification.EquivalenceConfig(field=cfg.field_spec(), params=cfg.physical_params(),
                                            theta0=cfg.theta, phi0=cfg.phi,
                                            t_end=cfg.t_end, dt=cfg.dt)
    try:
        reports = verification.compare_laws(laws, config)
    except IntegrationError as exc:
        print(f"integration aborted: {exc}", file=sys.stderr)
        _write_json(out, {"status": "nan_abort", "error": str(exc), "snapshot": exc.snapshot})
        return EXIT_FAIL
    ok = all(r.passed for r in reports)
    _write_json(out, {"all_asserted_pass": ok, "checks": [r.to_dict() for r in reports]})
    _print_table(reports)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_collapse(cfg, out):
    cfg.require("theta", "ensemble_size")
    p = cfg.physical_params()
    if not (0.0 < cfg.theta < math.pi):
        raise ConfigError("theta (the electron polar angle) must lie strictly inside (0, pi)")
    s = cqd.ensemble_collapse(cfg.theta, cfg.ensemble_size, k_i=p.k_i, seed=cfg.seed)
    ok = abs(s.z_score) <= 3.0
    _write_json(out, dict(s.to_dict(), passed=ok))
    print(f"fraction_up={s.fraction_up:.6f} expected={s.expected:.6f} z={s.z_score:+.3f}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(pattern, out):
    try:
        verification.select_checks(pattern)
    except SpinformError as exc:
        raise ConfigError(str(exc)) from None
    reports = verification.run_suite(pattern)
    _print_table(reports)
    _write_json(out, [r.to_dict() for r in reports])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _print_table(reports):
    for r in reports:
        tol = "-" if r.tolerance is None else f"{r.tolerance:.1e}"
        print(f"{r.status.upper():6s} {r.name:56s} residual={r.residual:.3e} tol={tol}")


def _config_echo(cfg):
    return {k: getattr(cfg, k) for k in cfg.__dataclass_fields__ if k != "out"}


def build_parser():
    parser = argparse.ArgumentParser(prog="spinform", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "compare", "collapse", "verify"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON run configuration")
        sp.add_argument("--out", help="output path")
        sp.add_argument("--seed", type=int, help="override the configuration seed")
        if name == "verify":
            sp.add_argument("--filter", help="glob pattern on check names, e.g. 'pauli*'")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "verify":
            return cmd_verify(args.filter, _out_path(args, None, "verify"))
        cfg = _load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        out = _out_path(args, cfg, args.command)
        return {"simulate": cmd_simulate, "compare": cmd_compare,
                "collapse": cmd_collapse}[args.command](cfg, out)
    except (ConfigError, DomainError, FieldRangeError, PurityError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
