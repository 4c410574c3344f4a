"""Runs of successive Steiner symmetrizations with per-step diagnostics."""

from __future__ import annotations

import copy
import csv
import io
import logging
import math
import os
import time
from dataclasses import astuple, dataclass, field, fields
from pathlib import Path
from typing import Callable

import numpy as np

from .directions import DirectionSource
from .errors import ConfigInvalid
from .field import (
    GridSpec,
    OccupancyField,
    barycenter,
    equivalent_ball_radius,
    moment_of_inertia,
    moment_unit_ball,
    nikodym_distance,
    perimeter_tv,
    volume,
)
from .pgm import write_snapshot_pgm
from .shapes import ShapeSpec, ball_field, rasterize
from .symmetrize import steiner_symmetrize

log = logging.getLogger(__name__)

TRACE_MAGIC = "#steiner-trace v1"


def parse_directions(text: str, dim: int, seed: int = 0) -> DirectionSource:
    """Build a source from ``uniform``, ``equidistributed``,
    ``cyclic:<u1;u2;...>`` (components comma separated) or ``axis-biased:<k>``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower().replace("_", "-")
    if kind in ("uniform", "iid-uniform"):
        return DirectionSource.iid_uniform(dim, seed)
    if kind == "equidistributed":
        return DirectionSource.equidistributed(dim)
    if kind == "cyclic":
        try:
            dirs = [[float(c) for c in item.split(",")] for item in arg.split(";") if item.strip()]
        except ValueError as exc:
            raise ConfigInvalid(f"bad cyclic direction list {arg!r}") from exc
        if any(len(d) != dim for d in dirs):
            raise ConfigInvalid(f"cyclic directions must have {dim} components")
        if not dirs:
            raise ConfigInvalid("cyclic direction list is empty")
        return DirectionSource.cyclic(dirs)
    if kind == "axis-biased":
        try:
            k = float(arg)
        except ValueError as exc:
            raise ConfigInvalid(f"bad axis-biased exponent {arg!r}") from exc
        if k < 0:
            raise ConfigInvalid("axis-biased exponent must be >= 0")
        return DirectionSource.axis_biased(dim, seed, k)
    raise ConfigInvalid(f"unknown direction policy {text!r}")


@dataclass
class RunConfig:
    grid: GridSpec
    shape: ShapeSpec
    steps: int
    source: DirectionSource | str = "uniform"
    seed: int = 0
    renormalize: bool = False
    snapshot_every: int | None = None
    snapshot_dir: str | os.PathLike | None = None
    trace_path: str | os.PathLike | None = None
    stop_epsilon: float | None = None
    record_timing: bool = False

    def validate(self) -> None:
        if int(self.steps) != self.steps or self.steps < 0:
            raise ConfigInvalid("steps must be a non-negative integer")
        if self.snapshot_every is not None:
            if self.snapshot_every < 1:
                raise ConfigInvalid("snapshot_every must be >= 1")
            if self.snapshot_dir is None:
                raise ConfigInvalid("snapshot_every needs snapshot_dir")
        if self.stop_epsilon is not None and not self.stop_epsilon >= 0:
            raise ConfigInvalid("stop_epsilon must be >= 0")
        if isinstance(self.source, DirectionSource) and self.source.dim != self.grid.dim:
            raise ConfigInvalid("direction source and grid dimensions differ")

    def make_source(self) -> DirectionSource:
        if isinstance(self.source, DirectionSource):
            return copy.deepcopy(self.source)
        return parse_directions(self.source, self.grid.dim, self.seed)


@dataclass
class StepRecord:
    step: int
    direction: tuple[float, ...]
    volume: float
    volume_drift: float
    nikodym_to_ball: float
    moment: float
    moment_excess: float
    barycenter_norm: float
    perimeter_tv: float
    wall_time_ms: float = 0.0


class _Diagnostics:
    """Measures of ``F_n`` against the fixed target ball ``B(o, rho(F_0))``."""

    def __init__(self, F0: OccupancyField):
        g = F0.grid
        self.volume0 = volume(F0)
        self.rho = equivalent_ball_radius(F0)
        self.ball = ball_field(self.rho, g)
        self.moment_ref = moment_unit_ball(g.dim) * self.rho ** (g.dim + 2)

    def record(self, n: int, u, F: OccupancyField, wall_ms: float) -> StepRecord:
        vol = volume(F)
        return StepRecord(
            step=n,
            direction=tuple(float(c) for c in u),
            volume=vol,
            volume_drift=vol / self.volume0 - 1.0,
            nikodym_to_ball=nikodym_distance(F, self.ball),
            moment=(mu := moment_of_inertia(F)),
            moment_excess=mu - self.moment_ref,
            barycenter_norm=float(np.linalg.norm(barycenter(F))),
            perimeter_tv=perimeter_tv(F),
            wall_time_ms=wall_ms,
        )


def run(
    config: RunConfig,
    initial: OccupancyField | None = None,
    callback: Callable[[StepRecord, OccupancyField], None] | None = None,
) -> tuple[list[StepRecord], OccupancyField]:
    """Symmetrize the configured shape ``config.steps`` times.

    Record 0 describes the rasterized initial set; record ``n`` describes
    ``F_n = S_{u_n} F_{n-1}``.  ``initial`` overrides the rasterized shape.
    """
    config.validate()
    F = rasterize(config.shape, config.grid) if initial is None else initial
    if F.grid != config.grid:
        raise ConfigInvalid("initial field does not live on the configured grid")
    source = config.make_source()
    diag = _Diagnostics(F)
    nan_dir = (math.nan,) * config.grid.dim
    records = [diag.record(0, nan_dir, F, 0.0)]
    snap_dir = Path(config.snapshot_dir) if config.snapshot_dir is not None else None
    if snap_dir is not None:
        snap_dir.mkdir(parents=True, exist_ok=True)

    def snapshot(n: int, field_n: OccupancyField) -> None:
        if config.snapshot_every and n % config.snapshot_every == 0:
            write_snapshot_pgm(field_n, snap_dir / f"step_{n:06d}.pgm")

    snapshot(0, F)
    if callback is not None:
        callback(records[0], F)
    stop = config.stop_epsilon
    for n in range(1, config.steps + 1):
        if stop is not None and records[-1].nikodym_to_ball <= stop * diag.volume0:
            log.info("early stop at step %d", n - 1)
            break
        u = source.next()
        t0 = time.perf_counter()
        F = steiner_symmetrize(F, u, renormalize=config.renormalize)
        wall = (time.perf_counter() - t0) * 1e3 if config.record_timing else 0.0
        rec = diag.record(n, u, F, wall)
        records.append(rec)
        snapshot(n, F)
        if callback is not None:
            callback(rec, F)
    if config.trace_path is not None:
        write_trace_csv(records, config.trace_path)
    return records, F


def trace_header(dim: int) -> list[str]:
    names = [f.name for f in fields(StepRecord)]
    k = names.index("direction")
    return names[:k] + [f"u{i + 1}" for i in range(dim)] + names[k + 1 :]


def _row(rec: StepRecord) -> list[str]:
    out = []
    for v in astuple(rec):
        if isinstance(v, tuple):
            out.extend(repr(float(c)) for c in v)
        elif isinstance(v, int):
            out.append(str(v))
        else:
            out.append(repr(float(v)))
    return out


def write_trace_csv(records: list[StepRecord], path: str | os.PathLike, dim: int | None = None) -> None:
    """Write records as a versioned CSV (full round-trip float precision)."""
    if dim is None:
        dim = len(records[0].direction) if records else 2
    buf = io.StringIO()
    buf.write(TRACE_MAGIC + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(trace_header(dim))
    for rec in records:
        w.writerow(_row(rec))
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def read_trace_csv(path: str | os.PathLike) -> list[StepRecord]:
    with open(path, newline="") as fh:
        first = fh.readline().rstrip("\n")
        if first != TRACE_MAGIC:
            raise ValueError(f"not a steiner trace (first line {first!r})")
        reader = csv.reader(fh)
        header = next(reader)
        dim = sum(1 for h in header if h.startswith("u") and h[1:].isdigit())
        records = []
        for row in reader:
            step = int(row[0])
            vals = [float(v) for v in row[1:]]
            records.append(StepRecord(step, tuple(vals[:dim]), *vals[dim:]))
    return records
