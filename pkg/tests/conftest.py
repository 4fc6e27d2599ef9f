import numpy as np
import pytest

from nvhdrill import ingest
from nvhdrill.model import (
    Dataset,
    FrequencyScheme,
    LimitCurve,
    RegionPartition,
    SpectrumTable,
    SurfaceMesh,
)


def strip_mesh(n_cells: int) -> SurfaceMesh:
    """Row of n unit quads in the z=0 plane; adjacency is a simple chain."""
    cols = n_cells + 1
    vertices = [(x, y, 0.0) for y in (0.0, 1.0) for x in range(cols)]
    cells = [(i, i + 1, i + cols + 1, i + cols) for i in range(n_cells)]
    return SurfaceMesh.build(vertices, cells)


def make_dataset(levels_db, region_pairs, fundamental_hz=100.0, limits=None, **kw):
    """Dataset over a quad strip, one cell per level row."""
    levels = np.asarray(levels_db, dtype=np.float64)
    n_cells, n_harm = levels.shape
    mesh = strip_mesh(n_cells)
    partition = RegionPartition.from_pairs(region_pairs, n_cells)
    freqs = fundamental_hz * np.arange(1, n_harm + 1)
    scheme = FrequencyScheme.build(fundamental_hz, freqs)
    return Dataset(mesh, partition, scheme, SpectrumTable(levels), limits=limits, **kw)


@pytest.fixture
def tiny():
    """4 chained unit quads, regions A|B, 6 harmonics of 100 Hz.

    levels[c, h] = 60 + c + 10*h keeps every value distinct and easy to
    predict by eye. Bands hit are 100/200/315/400/500/630; limits only on
    500 and 630.
    """
    levels = [[60.0 + c + 10.0 * h for h in range(6)] for c in range(4)]
    pairs = [(0, "A"), (1, "A"), (2, "B"), (3, "B")]
    limits = LimitCurve(entries=((500.0, 70.0), (630.0, 72.0)), borderline_width_db=6.0)
    return make_dataset(levels, pairs, limits=limits)


@pytest.fixture
def small_box():
    spec = ingest.SyntheticSpec(seed=7, resolution=4, n_harmonics=48, noise_db=1.5, limit_db=80.0)
    return ingest.generate_synthetic(spec)


@pytest.fixture(scope="session")
def demo_ds():
    return ingest.generate_synthetic(ingest.demo_spec())
