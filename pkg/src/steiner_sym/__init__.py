"""Random Steiner symmetrization of bounded sets on occupancy grids."""

from .boxes import (
    Box,
    BoxUnion,
    exact_barycenter,
    exact_moment,
    exact_nikodym,
    exact_symmetral_axis,
    exact_volume,
    to_field,
)
from .directions import (
    DirectionSource,
    canonicalize,
    direction_distance,
    double_cap_probability,
    sample_uniform,
)
from .errors import (
    BadMaskFile,
    ConfigInvalid,
    EmptyCycle,
    EmptySet,
    GridMismatch,
    ShapeOutOfDomain,
    SteinerError,
    ZeroVector,
)
from .experiment import RunConfig, StepRecord, read_trace_csv, run, write_trace_csv
from .field import (
    GridSpec,
    OccupancyField,
    barycenter,
    equivalent_ball_radius,
    moment_of_inertia,
    moment_unit_ball,
    nikodym_distance,
    perimeter_tv,
    unit_ball_volume,
    volume,
)
from .pgm import read_pgm, write_snapshot_pgm
from .shapes import ShapeSpec, ball_field, rasterize
from .symmetrize import fiber_mass, fiber_mass_cache, orthobasis, steiner_symmetrize, symmetrize_sequence

__version__ = "0.1.0"
