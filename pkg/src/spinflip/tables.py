"""Machine-readable output formats.

All numeric CSV fields are written with 17 significant digits so repeated
runs with identical configurations produce byte-identical files; JSON is
written with sorted keys for the same reason.

Formats:

* chirp CSV:        ``t_over_t0,omega_t0``
* trajectory CSV:   ``t_over_t0,sx,sy,sz,pulse_index``
* sweep CSV:        ``<axis>[,<axis2>],P,status`` with ``P`` left empty on
                    ``infeasible`` rows
* compare CSV:      ``<axis>,P_N<k>...,status`` (one probability column per
                    pulse count)
* sweep sidecar:    JSON echo of the full sweep specification
"""

from __future__ import annotations

import json
from pathlib import Path

from .design import PulseDesign, sample_chirp
from .dynamics import Trajectory
from .protocol import SimulationResult
from .sweeps import SweepResult, SweepSpec


def format_float(x: float) -> str:
    return "{:.17g}".format(float(x))


def sidecar_path(out_path) -> Path:
    """JSON companion path for a CSV output path."""
    p = Path(out_path)
    if p.suffix == ".csv":
        return p.with_suffix(".json")
    return Path(str(p) + ".json")


def _write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def write_json(path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_chirp_csv(path, design: PulseDesign, n_samples: int) -> None:
    rows = ["t_over_t0,omega_t0"]
    for t, omega in sample_chirp(design, n_samples):
        rows.append(f"{format_float(t)},{format_float(omega)}")
    _write_text(path, "\n".join(rows) + "\n")


def write_trajectory_csv(path, trajectory: Trajectory) -> None:
    rows = ["t_over_t0,sx,sy,sz,pulse_index"]
    for t, s, k in zip(trajectory.times, trajectory.states, trajectory.pulse_index):
        rows.append(
            ",".join(
                [format_float(t), format_float(s[0]), format_float(s[1]), format_float(s[2]), str(int(k))]
            )
        )
    _write_text(path, "\n".join(rows) + "\n")


def write_result_json(path, result: SimulationResult) -> None:
    write_json(path, result.to_json_dict())


def _coord_fields(names, point) -> list[str]:
    fields = []
    for name, value in zip(names, point):
        fields.append(str(int(value)) if name == "N" else format_float(value))
    return fields


def write_sweep_csv(path, result: SweepResult) -> None:
    names = [a.name for a in result.spec.axes]
    rows = [",".join(names + ["P", "status"])]
    for point, p, status in result.rows():
        p_field = format_float(p) if status == "ok" else ""
        rows.append(",".join(_coord_fields(names, point) + [p_field, status]))
    _write_text(path, "\n".join(rows) + "\n")


def write_sweep_sidecar(path, spec: SweepSpec) -> None:
    write_json(path, spec.to_json_dict())


def write_compare_csv(path, entries) -> None:
    """Aligned per-N curves from ``compare_N`` output."""
    if not entries:
        raise ValueError("no curves to write")
    first = entries[0][1]
    axis = first.spec.axes[0].name
    values = first.axis_values[0]
    header = [axis] + [f"P_N{n}" for n, _ in entries] + ["status"]
    rows = [",".join(header)]
    for i, value in enumerate(values):
        status = first.status[i]
        fields = [str(int(value)) if axis == "N" else format_float(value)]
        for _, res in entries:
            fields.append(format_float(res.P[i]) if res.status[i] == "ok" else "")
        fields.append(status)
        rows.append(",".join(fields))
    _write_text(path, "\n".join(rows) + "\n")
