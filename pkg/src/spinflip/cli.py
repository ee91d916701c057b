"""Command-line front end.

Commands
--------
* ``spinflip design``            chirp table + design JSON for one pulse
* ``spinflip simulate``          one reversal experiment -> result JSON
* ``spinflip sweep amplitude``   P versus drive amplitude
* ``spinflip sweep nd``          P versus (N, d) grid
* ``spinflip sweep alpha``       P versus damping, one curve per N

Every command accepts ``--config PATH`` pointing at a flat ``key = value``
file whose keys match the command's flag names (dashes replaced by
underscores); flags given on the command line take precedence.  Unknown
keys are rejected.  ``--print-config`` emits the fully resolved
configuration and exits without computing.

There is no randomness anywhere in the toolkit; outputs are reproducible
byte for byte.  The reserved ``--seedless`` flag documents this and is
rejected if set.

Exit codes: 0 success, 1 usage or validation error, 2 infeasible design,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .design import design_pulse
from .dynamics import IntegratorConfig
from .errors import FeasibilityError, IntegrationError, ValidationError
from .model import DimensionlessParams
from .protocol import ExperimentSpec, run_experiment
from .sweeps import Axis, SweepSpec, compare_N, sweep
from . import tables

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3

_REQUIRED = object()


@dataclass(frozen=True)
class _Opt:
    kind: str  # "float" | "int" | "str" | "int_list"
    default: object
    help: str


_STEPS = _Opt("int", 20000, "RK4 steps per pulse")
_WORKERS = _Opt("int", 1, "thread workers for grid evaluation (result is identical)")
_TF = _Opt("float", 100.0, "pulse duration, units t_0")

_SCHEMAS: dict[str, dict[str, _Opt]] = {
    "design": {
        "h": _Opt("float", _REQUIRED, "drive amplitude, units h_0"),
        "tf": _TF,
        "samples": _Opt("int", 1001, "number of chirp samples (>= 2)"),
        "steps": _STEPS,
        "out": _Opt("str", _REQUIRED, "chirp CSV path (design JSON written alongside)"),
    },
    "simulate": {
        "h": _Opt("float", _REQUIRED, "drive amplitude, units h_0"),
        "tf": _TF,
        "d": _Opt("float", 0.0, "anisotropy field, units h_0"),
        "alpha": _Opt("float", 0.0, "damping parameter"),
        "N": _Opt("int", 1, "odd pulse count"),
        "feedforward": _Opt("float", None, "anisotropy-cancelling coefficient (-2d cancels)"),
        "steps": _STEPS,
        "traj": _Opt("str", None, "optional trajectory CSV path"),
        "out": _Opt("str", _REQUIRED, "result JSON path"),
    },
    "sweep amplitude": {
        "h_min": _Opt("float", _REQUIRED, "smallest amplitude"),
        "h_max": _Opt("float", _REQUIRED, "largest amplitude"),
        "points": _Opt("int", 101, "grid points on the amplitude axis"),
        "tf": _TF,
        "d": _Opt("float", 0.0, "anisotropy field, units h_0"),
        "alpha": _Opt("float", 0.0, "damping parameter"),
        "N": _Opt("int", 1, "odd pulse count"),
        "steps": _STEPS,
        "workers": _WORKERS,
        "out": _Opt("str", _REQUIRED, "sweep CSV path (JSON sidecar written alongside)"),
    },
    "sweep nd": {
        "h": _Opt("float", _REQUIRED, "drive amplitude, units h_0"),
        "tf": _TF,
        "alpha": _Opt("float", 0.0, "damping parameter"),
        "n_min": _Opt("int", 1, "smallest odd pulse count"),
        "n_max": _Opt("int", 21, "largest odd pulse count"),
        "d_min": _Opt("float", 0.0, "smallest anisotropy field"),
        "d_max": _Opt("float", _REQUIRED, "largest anisotropy field"),
        "d_points": _Opt("int", 101, "grid points on the d axis"),
        "steps": _STEPS,
        "workers": _WORKERS,
        "out": _Opt("str", _REQUIRED, "sweep CSV path (JSON sidecar written alongside)"),
    },
    "sweep alpha": {
        "h": _Opt("float", _REQUIRED, "drive amplitude, units h_0"),
        "tf": _TF,
        "d": _Opt("float", 0.0, "anisotropy field, units h_0"),
        "alpha_min": _Opt("float", 0.0, "smallest damping"),
        "alpha_max": _Opt("float", _REQUIRED, "largest damping"),
        "points": _Opt("int", 101, "grid points on the alpha axis"),
        "N": _Opt("int_list", [1], "comma-separated odd pulse counts, e.g. 1,3,5"),
        "steps": _STEPS,
        "workers": _WORKERS,
        "out": _Opt("str", _REQUIRED, "sweep CSV path (JSON sidecar written alongside)"),
    },
}


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_options(parser: argparse.ArgumentParser, schema: dict[str, _Opt]) -> None:
    parser.add_argument("--config", default=None, metavar="PATH", help="flat key = value file")
    parser.add_argument(
        "--print-config",
        action="store_true",
        help="print the resolved configuration and exit without running",
    )
    parser.add_argument(
        "--seedless",
        action="store_true",
        help="reserved; the toolkit is deterministic and rejects this flag",
    )
    for key, opt in schema.items():
        flag = "--" + key.replace("_", "-")
        parser.add_argument(flag, dest=key, default=None, metavar=key.upper(), help=opt.help)


def _convert(key: str, raw: str, kind: str):
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            return int(raw)
        if kind == "int_list":
            return [int(part) for part in str(raw).split(",") if part.strip() != ""]
        return str(raw)
    except ValueError as exc:
        raise ValidationError(f"invalid value for {key!r}: {raw!r} ({exc})") from None


def _read_config_file(path: str, schema: dict[str, _Opt]) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ValidationError(f"config file not found: {path}")
    values = {}
    for lineno, raw in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value'")
        if key not in schema:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _convert(key, value.strip(), schema[key].kind)
    return values


def _resolve(args: argparse.Namespace, schema: dict[str, _Opt], command: str) -> dict:
    if args.seedless:
        raise ValidationError(
            "--seedless is reserved: the toolkit has no randomness to seed"
        )
    file_values = _read_config_file(args.config, schema) if args.config else {}
    resolved = {}
    for key, opt in schema.items():
        cli_value = getattr(args, key)
        if cli_value is not None:
            resolved[key] = _convert(key, cli_value, opt.kind)
        elif key in file_values:
            resolved[key] = file_values[key]
        elif opt.default is _REQUIRED:
            if args.print_config:
                resolved[key] = None
                continue
            raise ValidationError(f"{command}: missing required option --{key.replace('_', '-')}")
        else:
            resolved[key] = opt.default
    return resolved


def _print_config(resolved: dict) -> None:
    for key in sorted(resolved):
        value = resolved[key]
        if value is None:
            text = ""
        elif isinstance(value, float):
            text = tables.format_float(value)
        elif isinstance(value, list):
            text = ",".join(str(v) for v in value)
        else:
            text = str(value)
        print(f"{key} = {text}")


def _out_path(raw: str) -> Path:
    path = Path(raw)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _integrator(cfg: dict) -> IntegratorConfig:
    return IntegratorConfig(step_count=int(cfg["steps"]))


def _cmd_design(cfg: dict) -> int:
    pulse = design_pulse(cfg["h"], cfg["tf"])
    out = _out_path(cfg["out"])
    tables.write_chirp_csv(out, pulse, cfg["samples"])
    meta = tables.sidecar_path(out)
    tables.write_json(meta, pulse.to_json_dict())
    print(f"wrote {out}")
    print(f"wrote {meta}")
    return EXIT_OK


def _cmd_simulate(cfg: dict) -> int:
    spec = ExperimentSpec(
        params=DimensionlessParams(h=cfg["h"], d=cfg["d"], alpha=cfg["alpha"], t_f=cfg["tf"]),
        N=cfg["N"],
        record_trajectory=cfg["traj"] is not None,
        integrator=_integrator(cfg),
        feedforward=cfg["feedforward"],
    )
    result = run_experiment(spec)
    out = _out_path(cfg["out"])
    tables.write_result_json(out, result)
    print(f"P = {result.P_final:.6f}")
    print(f"wrote {out}")
    if cfg["traj"] is not None:
        traj_path = _out_path(cfg["traj"])
        tables.write_trajectory_csv(traj_path, result.trajectory)
        print(f"wrote {traj_path}")
    return EXIT_OK


def _base_spec(cfg: dict, h: float, N: int = 1) -> ExperimentSpec:
    return ExperimentSpec(
        params=DimensionlessParams(
            h=h, d=cfg.get("d", 0.0), alpha=cfg.get("alpha", 0.0), t_f=cfg["tf"]
        ),
        N=N,
        integrator=_integrator(cfg),
    )


def _write_sweep_outputs(out: Path, spec: SweepSpec, result) -> None:
    tables.write_sweep_csv(out, result)
    meta = tables.sidecar_path(out)
    tables.write_sweep_sidecar(meta, spec)
    print(f"wrote {out}")
    print(f"wrote {meta}")


def _cmd_sweep_amplitude(cfg: dict) -> int:
    spec = SweepSpec(
        axes=(Axis("h", cfg["h_min"], cfg["h_max"], cfg["points"]),),
        base=_base_spec(cfg, h=cfg["h_min"], N=cfg["N"]),
    )
    result = sweep(spec, workers=cfg["workers"])
    _write_sweep_outputs(_out_path(cfg["out"]), spec, result)
    return EXIT_OK


def _cmd_sweep_nd(cfg: dict) -> int:
    spec = SweepSpec(
        axes=(
            Axis("N", cfg["n_min"], cfg["n_max"]),
            Axis("d", cfg["d_min"], cfg["d_max"], cfg["d_points"]),
        ),
        base=_base_spec(cfg, h=cfg["h"]),
    )
    result = sweep(spec, workers=cfg["workers"])
    _write_sweep_outputs(_out_path(cfg["out"]), spec, result)
    return EXIT_OK


def _cmd_sweep_alpha(cfg: dict) -> int:
    n_list = cfg["N"]
    axis = Axis("alpha", cfg["alpha_min"], cfg["alpha_max"], cfg["points"])
    spec = SweepSpec(axes=(axis,), base=_base_spec(cfg, h=cfg["h"], N=int(n_list[0])))
    out = _out_path(cfg["out"])
    if len(n_list) == 1:
        result = sweep(spec, workers=cfg["workers"])
        _write_sweep_outputs(out, spec, result)
        return EXIT_OK
    entries = compare_N(spec, n_list, workers=cfg["workers"])
    tables.write_compare_csv(out, entries)
    meta = tables.sidecar_path(out)
    sidecar = spec.to_json_dict()
    sidecar["n_list"] = [int(n) for n in n_list]
    tables.write_json(meta, sidecar)
    print(f"wrote {out}")
    print(f"wrote {meta}")
    return EXIT_OK


_RUNNERS = {
    "design": _cmd_design,
    "simulate": _cmd_simulate,
    "sweep amplitude": _cmd_sweep_amplitude,
    "sweep nd": _cmd_sweep_nd,
    "sweep alpha": _cmd_sweep_alpha,
}


def build_parser() -> _Parser:
    parser = _Parser(prog="spinflip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_design = sub.add_parser("design", help="synthesize one chirped pulse")
    _add_options(p_design, _SCHEMAS["design"])
    p_design.set_defaults(schema_key="design")

    p_sim = sub.add_parser("simulate", help="run one reversal experiment")
    _add_options(p_sim, _SCHEMAS["simulate"])
    p_sim.set_defaults(schema_key="simulate")

    p_sweep = sub.add_parser("sweep", help="parameter scans")
    sweep_sub = p_sweep.add_subparsers(dest="sweep_kind", required=True, parser_class=_Parser)
    for kind in ("amplitude", "nd", "alpha"):
        p = sweep_sub.add_parser(kind)
        _add_options(p, _SCHEMAS[f"sweep {kind}"])
        p.set_defaults(schema_key=f"sweep {kind}")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    schema_key = args.schema_key
    try:
        resolved = _resolve(args, _SCHEMAS[schema_key], schema_key)
        if args.print_config:
            _print_config(resolved)
            return EXIT_OK
        return _RUNNERS[schema_key](resolved)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FeasibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
