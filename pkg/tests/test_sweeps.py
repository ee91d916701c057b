import math

import numpy as np
import pytest

from spinflip import (
    Axis,
    DimensionlessParams,
    ExperimentSpec,
    IntegratorConfig,
    SweepSpec,
    ValidationError,
    compare_N,
    sweep,
)
from spinflip.tables import write_sweep_csv

FAST = IntegratorConfig(step_count=2000)


def base_spec(h=0.05, d=0.0, alpha=0.0, t_f=100.0, N=1):
    return ExperimentSpec(
        params=DimensionlessParams(h=h, d=d, alpha=alpha, t_f=t_f), N=N, integrator=FAST
    )


class TestAxis:
    def test_continuous_values(self):
        np.testing.assert_allclose(
            Axis("h", 0.05, 0.15, 11).values(), np.linspace(0.05, 0.15, 11)
        )

    def test_odd_grid(self):
        np.testing.assert_array_equal(Axis("N", 1, 9).values(), [1, 3, 5, 7, 9])

    def test_unknown_name(self):
        with pytest.raises(ValidationError):
            Axis("tf", 1.0, 2.0, 5)

    def test_count_required_for_continuous(self):
        with pytest.raises(ValidationError):
            Axis("d", 0.0, 0.05, None)
        with pytest.raises(ValidationError):
            Axis("d", 0.0, 0.05, 1)

    def test_n_axis_bounds(self):
        with pytest.raises(ValidationError):
            Axis("N", 2, 8)
        with pytest.raises(ValidationError):
            Axis("N", 1, 9, count=5)
        with pytest.raises(ValidationError):
            Axis("N", 5, 5)

    def test_range_signs(self):
        with pytest.raises(ValidationError):
            Axis("h", 0.0, 0.1, 5)
        with pytest.raises(ValidationError):
            Axis("alpha", -0.01, 0.01, 5)
        with pytest.raises(ValidationError):
            Axis("d", 0.05, 0.01, 5)


class TestSweep:
    def test_grid_completeness_and_order(self):
        spec = SweepSpec(
            axes=(Axis("N", 1, 5), Axis("d", 0.0, 0.02, 3)),
            base=base_spec(),
        )
        result = sweep(spec)
        assert len(result.coords) == 9
        assert result.P.shape == (9,)
        # row-major: N outermost
        np.testing.assert_allclose(
            [c[0] for c in result.coords], [1, 1, 1, 3, 3, 3, 5, 5, 5]
        )
        np.testing.assert_allclose(
            [c[1] for c in result.coords], [0.0, 0.01, 0.02] * 3
        )
        assert all(st == "ok" for st in result.status)

    def test_perfect_reversal_row(self):
        spec = SweepSpec(
            axes=(Axis("h", 0.05, 0.15, 11),),
            base=base_spec(d=0.0, N=1),
        )
        result = sweep(spec)
        assert np.all(result.P >= 0.999)

    def test_infeasible_points_flagged_not_fatal(self):
        spec = SweepSpec(
            axes=(Axis("h", 0.01, 0.05, 9),),
            base=base_spec(h=0.01),
        )
        result = sweep(spec)
        bound = math.pi / 100.0
        for (h,), p, status in result.rows():
            if h * 100.0 < math.pi:
                assert status == "infeasible"
                assert math.isnan(p)
            else:
                assert status == "ok"
                assert p >= 0.999
        assert any(st == "infeasible" for st in result.status)
        assert any(st == "ok" for st in result.status)
        assert bound < 0.05

    def test_parallel_matches_serial_bitwise(self, tmp_path):
        spec = SweepSpec(
            axes=(Axis("d", 0.0, 0.03, 7),),
            base=base_spec(h=0.08),
        )
        serial = sweep(spec, workers=1)
        parallel = sweep(spec, workers=4)
        np.testing.assert_array_equal(serial.P, parallel.P)
        assert serial.status == parallel.status
        a, b = tmp_path / "serial.csv", tmp_path / "parallel.csv"
        write_sweep_csv(a, serial)
        write_sweep_csv(b, parallel)
        assert a.read_bytes() == b.read_bytes()

    def test_two_axis_row_count(self):
        spec = SweepSpec(
            axes=(Axis("N", 1, 7), Axis("d", 0.0, 0.05, 4)),
            base=base_spec(),
        )
        assert len(sweep(spec).coords) == 4 * 4

    def test_axis_count_limits(self):
        with pytest.raises(ValidationError):
            SweepSpec(axes=(), base=base_spec())
        with pytest.raises(ValidationError):
            SweepSpec(
                axes=(Axis("h", 0.05, 0.1, 3), Axis("d", 0, 0.01, 3), Axis("alpha", 0, 0.01, 3)),
                base=base_spec(),
            )

    def test_duplicate_axes_rejected(self):
        with pytest.raises(ValidationError):
            SweepSpec(axes=(Axis("d", 0, 0.01, 3), Axis("d", 0, 0.02, 3)), base=base_spec())

    def test_no_trajectories_in_sweeps(self):
        with pytest.raises(ValidationError):
            SweepSpec(
                axes=(Axis("d", 0, 0.01, 3),),
                base=ExperimentSpec(
                    params=DimensionlessParams(h=0.05),
                    record_trajectory=True,
                    integrator=FAST,
                ),
            )

    def test_workers_validated(self):
        spec = SweepSpec(axes=(Axis("d", 0, 0.01, 2),), base=base_spec())
        with pytest.raises(ValidationError):
            sweep(spec, workers=0)


class TestCompareN:
    def test_single_entry_reduces_to_sweep(self):
        spec = SweepSpec(axes=(Axis("alpha", 0.0, 0.01, 5),), base=base_spec(d=0.005))
        entries = compare_N(spec, [1])
        alone = sweep(SweepSpec(axes=spec.axes, base=base_spec(d=0.005, N=1)))
        assert entries[0][0] == 1
        np.testing.assert_array_equal(entries[0][1].P, alone.P)

    def test_longer_sequences_lose_more_at_strong_damping(self):
        spec = SweepSpec(axes=(Axis("alpha", 0.0, 0.01, 2),), base=base_spec(d=0.005))
        entries = dict(compare_N(spec, [1, 5]))
        assert entries[5].P[-1] <= entries[1].P[-1]

    def test_alignment(self):
        spec = SweepSpec(axes=(Axis("alpha", 0.0, 0.01, 3),), base=base_spec(d=0.005))
        entries = compare_N(spec, [1, 3, 5])
        assert [n for n, _ in entries] == [1, 3, 5]
        for _, res in entries:
            np.testing.assert_array_equal(res.axis_values[0], np.linspace(0.0, 0.01, 3))

    def test_shared_axis_cannot_be_n(self):
        spec = SweepSpec(axes=(Axis("N", 1, 5),), base=base_spec())
        with pytest.raises(ValidationError):
            compare_N(spec, [1, 3])

    def test_n_values_validated(self):
        spec = SweepSpec(axes=(Axis("alpha", 0.0, 0.01, 2),), base=base_spec())
        with pytest.raises(ValidationError):
            compare_N(spec, [2])
        with pytest.raises(ValidationError):
            compare_N(spec, [])
        with pytest.raises(ValidationError):
            compare_N(spec, [1, 3], workers=-1)


class TestSweepJson:
    def test_sidecar_document(self):
        spec = SweepSpec(
            axes=(Axis("N", 1, 5), Axis("d", 0.0, 0.05, 6)),
            base=base_spec(h=0.05),
        )
        doc = spec.to_json_dict()
        assert doc["axes"] == [
            {"name": "N", "start": 1, "stop": 5, "count": None},
            {"name": "d", "start": 0.0, "stop": 0.05, "count": 6},
        ]
        assert doc["fixed"]["h"] == 0.05
        assert doc["integrator"]["step_count"] == 2000
