"""Structure-borne noise drill-down: band aggregation, limit verdicts,
linked drill-down views, and an HTTP API over vibration surface data."""

from .acoustics import (
    AcceptanceCategory,
    Category,
    band_levels,
    campbell,
    classify,
    energy_sum,
    level_to_velocity,
    velocity_to_level,
)
from .errors import (
    DomainError,
    LayoutMismatchError,
    NvhError,
    ParseError,
    UnknownEntityError,
)
from .ingest import Hotspot, SyntheticSpec, demo_spec, generate_synthetic, load, save
from .linking import SelectionState, grow_selection, select_cells, select_frequency
from .model import (
    Band,
    Dataset,
    FrequencyScheme,
    LimitCurve,
    RegionPartition,
    SpectrumTable,
    SurfaceMesh,
    validate,
)
from .views import (
    ColorScale,
    boxplot_stats,
    details_pane,
    harmonics_pane,
    map_color,
    matrix_overview,
    ranked_strip,
    two_tone_stripes,
    weighted_quantile,
)

__version__ = "0.1.0"

__all__ = [
    "AcceptanceCategory",
    "Band",
    "Category",
    "ColorScale",
    "Dataset",
    "DomainError",
    "FrequencyScheme",
    "Hotspot",
    "LayoutMismatchError",
    "LimitCurve",
    "NvhError",
    "ParseError",
    "RegionPartition",
    "SelectionState",
    "SpectrumTable",
    "SurfaceMesh",
    "SyntheticSpec",
    "UnknownEntityError",
    "band_levels",
    "boxplot_stats",
    "campbell",
    "classify",
    "demo_spec",
    "details_pane",
    "energy_sum",
    "generate_synthetic",
    "grow_selection",
    "harmonics_pane",
    "level_to_velocity",
    "load",
    "map_color",
    "matrix_overview",
    "ranked_strip",
    "save",
    "select_cells",
    "select_frequency",
    "two_tone_stripes",
    "validate",
    "velocity_to_level",
    "weighted_quantile",
    "__version__",
]
