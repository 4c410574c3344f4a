import math

import numpy as np
import pytest
from conftest import CONVERGENCE_SEEDS, CONVERGENCE_SHAPES, trace_array

from steiner_sym import (
    ConfigInvalid,
    DirectionSource,
    GridSpec,
    RunConfig,
    ShapeSpec,
    StepRecord,
    ball_field,
    nikodym_distance,
    rasterize,
    read_trace_csv,
    run,
    write_trace_csv,
)
from steiner_sym.experiment import TRACE_MAGIC, parse_directions, trace_header


def _cfg(shape="l_shape", steps=5, n=128, **kw):
    return RunConfig(GridSpec(2, n, 2.0), ShapeSpec(shape), steps, **kw)


# -- run ---------------------------------------------------------------------


def test_zero_steps_gives_initial_record():
    records, F = run(_cfg(steps=0))
    assert len(records) == 1
    rec = records[0]
    ball = ball_field(rec.volume ** 0.5 / math.sqrt(math.pi), F.grid)
    assert rec.nikodym_to_ball == nikodym_distance(F, ball)
    assert all(math.isnan(c) for c in rec.direction)


def test_ball_stays_near_itself():
    cfg = RunConfig(GridSpec(2, 256, 2.0), ShapeSpec("ball", {"radius": 1.0}, normalize=False), 10, seed=3)
    records, _ = run(cfg)
    assert max(r.nikodym_to_ball for r in records) <= 0.03 * math.pi


def test_l_shape_seed_7_converges():
    records, _ = run(_cfg(steps=300, n=256, seed=7))
    assert records[-1].moment_excess <= 0.1 * records[0].moment_excess
    assert records[-1].nikodym_to_ball <= 0.06 * math.pi


def test_directions_follow_source_order():
    src = DirectionSource.cyclic([[1, 0], [0.6, 0.8], [0, 1]])
    records, _ = run(_cfg(steps=4, source=src))
    np.testing.assert_allclose([r.direction for r in records[1:]], [[1, 0], [0.6, 0.8], [0, 1], [1, 0]])
    # the caller's source is not advanced
    assert src.state == 0


def test_order_of_directions_matters():
    _, F12 = run(_cfg(steps=2, source=DirectionSource.cyclic([[1, 0], [0.6, 0.8]])))
    _, F21 = run(_cfg(steps=2, source=DirectionSource.cyclic([[0.6, 0.8], [1, 0]])))
    assert nikodym_distance(F12, F21) > 0.01


def test_initial_field_override():
    F0 = rasterize(ShapeSpec("annulus"), GridSpec(2, 128, 2.0))
    records, _ = run(_cfg(steps=0), initial=F0)
    assert records[0].volume == pytest.approx(math.pi, rel=1e-3)
    with pytest.raises(ConfigInvalid):
        run(_cfg(steps=0), initial=rasterize(ShapeSpec("annulus"), GridSpec(2, 64, 2.0)))


def test_early_stop():
    records, _ = run(_cfg(shape="two_balls", steps=200, stop_epsilon=0.05))
    assert len(records) < 201
    assert records[-1].nikodym_to_ball <= 0.05 * records[0].volume
    assert records[-2].nikodym_to_ball > 0.05 * records[0].volume


def test_callback_sees_every_record():
    seen = []
    run(_cfg(steps=3), callback=lambda rec, F: seen.append(rec.step))
    assert seen == [0, 1, 2, 3]


@pytest.mark.parametrize(
    "kw",
    [{"steps": -1}, {"steps": 2.5}, {"snapshot_every": 0, "snapshot_dir": "x"}, {"snapshot_every": 2},
     {"stop_epsilon": -0.1}, {"source": "sideways"}],
)
def test_invalid_configs(kw):
    kw = {"steps": 3, **kw}
    with pytest.raises(ConfigInvalid):
        run(_cfg(**kw))


def test_dimension_mismatch_between_source_and_grid():
    with pytest.raises(ConfigInvalid):
        run(_cfg(source=DirectionSource.iid_uniform(3, 0)))


@pytest.mark.parametrize(
    "text,policy", [("uniform", "iid_uniform"), ("equidistributed", "equidistributed"),
                    ("cyclic:1,0;0,1", "cyclic"), ("axis-biased:2", "axis_biased")],
)
def test_parse_directions(text, policy):
    assert parse_directions(text, 2, seed=1).policy == policy


@pytest.mark.parametrize("text", ["cyclic:", "cyclic:1,0,0", "cyclic:a,b", "axis-biased:x", "axis-biased:-1", "random"])
def test_parse_directions_rejects(text):
    with pytest.raises(ConfigInvalid):
        parse_directions(text, 2)


def test_3d_run_smoke():
    cfg = RunConfig(GridSpec(3, 48, 2.0), ShapeSpec("two_balls"), 3, seed=1)
    records, F = run(cfg)
    assert len(records) == 4 and F.values.shape == (48, 48, 48)
    assert abs(records[-1].volume_drift) < 5e-3


# -- traces ------------------------------------------------------------------


def test_header_layout():
    assert trace_header(3) == [
        "step", "u1", "u2", "u3", "volume", "volume_drift", "nikodym_to_ball", "moment",
        "moment_excess", "barycenter_norm", "perimeter_tv", "wall_time_ms",
    ]


def test_empty_trace_is_header_only(tmp_path):
    path = tmp_path / "t.csv"
    write_trace_csv([], path, dim=2)
    assert path.read_text().splitlines() == [TRACE_MAGIC, ",".join(trace_header(2))]
    assert read_trace_csv(path) == []


def test_trace_round_trip(tmp_path):
    records, _ = run(_cfg(steps=4))
    path = tmp_path / "t.csv"
    write_trace_csv(records, path)
    back = read_trace_csv(path)
    assert len(back) == len(records)
    for a, b in zip(records, back):
        assert isinstance(b, StepRecord)
        np.testing.assert_array_equal(a.direction, b.direction)  # NaN-aware
        assert (a.step, a.volume, a.moment, a.perimeter_tv) == (b.step, b.volume, b.moment, b.perimeter_tv)


def test_trace_rejects_foreign_csv(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("step,u1\n0,1\n")
    with pytest.raises(ValueError):
        read_trace_csv(path)


def test_wall_time_is_opt_in():
    assert all(r.wall_time_ms == 0.0 for r in run(_cfg(steps=2))[0])
    assert all(r.wall_time_ms > 0.0 for r in run(_cfg(steps=2, record_timing=True))[0][1:])


def test_snapshots(tmp_path):
    run(_cfg(steps=4, snapshot_every=2, snapshot_dir=tmp_path / "snaps"))
    names = sorted(p.name for p in (tmp_path / "snaps").iterdir())
    assert names == ["step_000000.pgm", "step_000002.pgm", "step_000004.pgm"]


# -- diagnostics along the convergence traces -------------------------------


@pytest.mark.parametrize("shape", CONVERGENCE_SHAPES)
def test_volume_normalized_moment_non_increasing(shape, traces):
    for seed in CONVERGENCE_SEEDS:
        rec = traces.get(shape, seed)
        scaled = trace_array(rec, "moment") / trace_array(rec, "volume") ** 2
        assert np.max(scaled[1:] / scaled[:-1] - 1) <= 1e-3


@pytest.mark.parametrize("shape", ["l_shape", "two_balls"])
def test_moment_non_increasing_with_renormalization(shape):
    records, _ = run(_cfg(shape=shape, steps=150, n=256, seed=2, renormalize=True))
    mu = trace_array(records, "moment")
    assert np.max(mu[1:] / mu[:-1] - 1) <= 1e-3


@pytest.mark.xfail(strict=True, reason="raw moment follows the O(h) volume drift of the gather (see notes)")
def test_raw_moment_non_increasing_without_renormalization(traces):
    worst = max(
        np.max(np.diff(mu) / mu[:-1])
        for mu in (trace_array(traces.get(s, seed), "moment") for s in CONVERGENCE_SHAPES for seed in CONVERGENCE_SEEDS)
    )
    assert worst <= 1e-3


@pytest.mark.parametrize("shape", CONVERGENCE_SHAPES)
def test_barycenter_norm_non_increasing(shape, traces):
    h = 4.0 / 256
    for seed in CONVERGENCE_SEEDS:
        b = trace_array(traces.get(shape, seed), "barycenter_norm")
        assert np.all(b[1:] <= b[:-1] + 2 * h)


def test_box_shape_converges(traces):
    for seed in CONVERGENCE_SEEDS:
        rec = traces.get("box", seed)
        assert rec[-1].nikodym_to_ball <= 0.06 * rec[0].volume


def test_box_shape_moment_excess_with_renormalization():
    for seed in CONVERGENCE_SEEDS:
        rec, _ = run(_cfg(shape="box", steps=300, n=256, seed=seed, renormalize=True))
        assert rec[-1].moment_excess <= 0.1 * rec[0].moment_excess


@pytest.mark.xfail(strict=True, reason="a square starts close to the ball in moment; volume drift dominates (see notes)")
def test_box_shape_moment_excess_without_renormalization(traces):
    for seed in CONVERGENCE_SEEDS:
        rec = traces.get("box", seed)
        assert rec[-1].moment_excess <= 0.1 * rec[0].moment_excess


# -- dilation covariance -----------------------------------------------------


def _scaled_run(n, extent, scale, steps):
    vol = math.pi * scale**2
    cfg = RunConfig(GridSpec(2, n, extent), ShapeSpec("l_shape", normalize_volume_to=vol), steps, seed=3)
    return run(cfg)[0]


def test_dilation_covariance_at_fixed_resolution():
    base = _scaled_run(128, 2.0, 1.0, 20)
    big = _scaled_run(128, 4.0, 2.0, 20)
    for a, b in zip(base, big):
        assert b.nikodym_to_ball == pytest.approx(4 * a.nikodym_to_ball, rel=1e-9)
        assert b.moment == pytest.approx(16 * a.moment, rel=1e-9)


def test_dilation_covariance_with_doubled_resolution_before_grid_floor():
    base = _scaled_run(128, 2.0, 1.0, 3)
    big = _scaled_run(256, 4.0, 2.0, 3)
    for a, b in zip(base, big):
        assert b.nikodym_to_ball == pytest.approx(4 * a.nikodym_to_ball, rel=1e-2)
        assert b.moment == pytest.approx(16 * a.moment, rel=1e-2)


@pytest.mark.xfail(strict=True, reason="near the ball d_N sits at a discretization floor set by h/R (see notes)")
def test_dilation_covariance_with_doubled_resolution_whole_trace():
    base = _scaled_run(128, 2.0, 1.0, 30)
    big = _scaled_run(256, 4.0, 2.0, 30)
    for a, b in zip(base, big):
        assert b.nikodym_to_ball == pytest.approx(4 * a.nikodym_to_ball, rel=1e-2)
        assert b.moment == pytest.approx(16 * a.moment, rel=1e-2)


@pytest.mark.parametrize("shape", CONVERGENCE_SHAPES)
def test_perimeter_non_increasing_on_2d_traces(shape, traces):
    for seed in CONVERGENCE_SEEDS:
        p = trace_array(traces.get(shape, seed), "perimeter_tv")
        assert np.max(p[1:] / p[:-1] - 1) <= 0.02
