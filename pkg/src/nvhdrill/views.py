"""View encodings: everything the panes display, computed without any UI.

All spatial bars share one layout rule. Cells are sorted by value descending
(ties by ascending cell id), laid side by side along [0, 1] with widths
proportional to area, and resampled onto N half-open rows
``[i/N, (i+1)/N)``. A cell overlaps a row iff ``start < row_hi`` and
``end > row_lo``, where start/end come from ``cumsum(areas)/total``. These
exact float operations are part of the contract; tests hold the output to
bit-equality against a brute-force oracle.

Stripe lists (two-tone cells, detail bars) are emitted low-dB end first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import acoustics
from .acoustics import AcceptanceCategory, Category, classify
from .errors import DomainError, UnknownEntityError
from .model import Band, Dataset, OUT_OF_BAND, TOTAL

MATRIX_ROWS_DEFAULT = 256
HARMONICS_ROWS_DEFAULT = 512
SHADES_DEFAULT = 3

MATRIX_MODES = ("limits", "two-tone", "discrete-limits", "combined", "raw")
SORT_MODES = ("individual", "by-selection")
_REDUCTIONS = ("max", "min", "mean")

UNDEFINED_TOKEN = "UNDEFINED"
NONE_TOKEN = "NONE"


# ---------------------------------------------------------------------------
# color scales


@dataclass(frozen=True)
class ColorScale:
    """Mapping from dB level to an abstract color token.

    kind "linear" interpolates position t piecewise-linearly in dB between
    the anchors; "nonlinear" puts t proportional to velocity amplitude
    between the outer anchors, which stretches resolution near the top of
    the range; "limits" classifies against a bound limit instead and yields
    category tokens.
    """

    kind: str = "nonlinear"
    anchors_db: tuple[float, ...] = (60.0, 90.0, 120.0)
    limit_db: float = float("nan")
    width_db: float = 6.0
    shades: int = SHADES_DEFAULT

    def __post_init__(self):
        if self.kind not in ("linear", "nonlinear", "limits"):
            raise DomainError(f"unknown color scale kind {self.kind!r}")
        if self.kind != "limits":
            if len(self.anchors_db) < 2 or np.any(np.diff(self.anchors_db) <= 0.0):
                raise DomainError("color scale anchors must be ascending, at least two")


def map_color(level_db: float, scale: ColorScale) -> str:
    """Token for one level; NaN maps to the undefined token.

    Diverging kinds return ``DIVERGE(t)`` with t in [0, 1] (clamped outside
    the anchor range, 6 decimals); the palette file carries the ramp stops.
    """
    if np.isnan(level_db):
        return UNDEFINED_TOKEN
    if scale.kind == "limits":
        return classify(level_db, scale.limit_db, scale.width_db, scale.shades).token
    anchors = scale.anchors_db
    if scale.kind == "linear":
        positions = np.linspace(0.0, 1.0, len(anchors))
        t = float(np.interp(level_db, anchors, positions))
    else:
        lo = 10.0 ** (anchors[0] / 20.0)
        hi = 10.0 ** (anchors[-1] / 20.0)
        t = (10.0 ** (level_db / 20.0) - lo) / (hi - lo)
        t = min(max(t, 0.0), 1.0)
    return f"DIVERGE({t:.6f})"


def load_palette(path=None) -> dict:
    """Token -> RGB palette (default and colorblind variants) as a dict."""
    if path is None:
        text = resources.files("nvhdrill").joinpath("data/palette.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


# ---------------------------------------------------------------------------
# stripe primitives


@dataclass(frozen=True)
class StripeList:
    """Adjacent colored stripes covering one bar; fractions sum to 1."""

    stripes: tuple[tuple[str, float], ...]
    orientation: str = "low-first"


def two_tone_stripes(
    level_db: float, limit_db: float, width_db: float = 6.0, shades: int = 1
) -> StripeList:
    """Depict one level as the +/- half-width dB window around it.

    The window is cut wherever a category (or shade, when ``shades > 1``)
    boundary of the acceptance classification falls inside it; each piece
    becomes a stripe with the color of its midpoint. A level exactly at the
    limit therefore splits 0.5/0.5, and the offset of the internal boundary
    from the cell middle reads as the distance to the limit.
    """
    if np.isnan(level_db) or np.isnan(limit_db):
        return StripeList(((UNDEFINED_TOKEN, 1.0),))
    if width_db <= 0.0:
        raise DomainError(f"borderline width must be positive, got {width_db}")
    lo = level_db - width_db / 2.0
    hi = level_db + width_db / 2.0
    step = width_db / shades
    cuts = [limit_db + j * step for j in range(-(shades - 1), 2 * shades)]
    edges = [lo] + [c for c in cuts if lo < c < hi] + [hi]
    stripes = []
    for a, b in zip(edges, edges[1:]):
        if b <= a:
            continue
        verdict = classify((a + b) / 2.0, limit_db, width_db, shades)
        stripes.append((verdict.token, (b - a) / width_db))
    return StripeList(tuple(stripes))


@dataclass(frozen=True)
class RankedStrip:
    """Area-proportional ranked layout resampled onto N rows.

    ``order`` holds cell ids sorted by value descending (row 0 ends up at
    the loud end); ``row_cells[i]`` are the contributors of row i in laid
    order, and ``row_values[i]`` is their reduction.
    """

    order: tuple[int, ...]
    starts: np.ndarray
    ends: np.ndarray
    row_values: np.ndarray
    row_cells: tuple[tuple[int, ...], ...]
    reduction: str = "max"


def ranked_strip(cell_ids, values, areas, n_rows: int, reduction: str = "max") -> RankedStrip:
    """Resample a cell set onto ``n_rows`` equal rows by ranked area layout.

    Parameters
    ----------
    cell_ids, values, areas : 1-d array-likes, parallel
        The cell set with its per-cell value (dB) and area.
    n_rows : int
        Row count N; rows are the half-open intervals [i/N, (i+1)/N).
    reduction : {"max", "min", "mean"}
        How overlapping cell values combine into a row value.
    """
    ids = np.asarray(cell_ids, dtype=np.intp)
    vals = np.asarray(values, dtype=np.float64)
    ars = np.asarray(areas, dtype=np.float64)
    if ids.size == 0:
        raise DomainError("ranked strip of an empty cell set is undefined")
    if n_rows < 1:
        raise DomainError(f"row count must be positive, got {n_rows}")
    if reduction not in _REDUCTIONS:
        raise DomainError(f"unknown reduction {reduction!r}")
    total = ars.sum()
    if total <= 0.0:
        raise DomainError("ranked strip needs positive total area")

    order = np.lexsort((ids, -vals))
    laid_vals = vals[order]
    laid_areas = ars[order]
    cum = np.cumsum(laid_areas)
    ends = cum / total
    starts = np.concatenate(([0.0], cum[:-1])) / total

    bounds = np.arange(n_rows + 1) / n_rows
    # (rows, cells) overlap per the half-open rule pinned in the module doc.
    mask = (starts[None, :] < bounds[1:, None]) & (ends[None, :] > bounds[:-1, None])

    if reduction == "max":
        row_values = np.where(mask, laid_vals[None, :], -np.inf).max(axis=1)
    elif reduction == "min":
        row_values = np.where(mask, laid_vals[None, :], np.inf).min(axis=1)
    else:
        counts = mask.sum(axis=1)
        row_values = (mask @ laid_vals) / counts

    laid_ids = ids[order]
    row_cells = tuple(tuple(int(c) for c in laid_ids[mask[i]]) for i in range(n_rows))
    return RankedStrip(
        order=tuple(int(c) for c in laid_ids),
        starts=starts,
        ends=ends,
        row_values=row_values,
        row_cells=row_cells,
        reduction=reduction,
    )


def _rows_for_layout(starts: np.ndarray, ends: np.ndarray, values: np.ndarray, n_rows: int, reduction: str):
    """Row values for a fixed layout (shared-order harmonic columns)."""
    bounds = np.arange(n_rows + 1) / n_rows
    mask = (starts[None, :] < bounds[1:, None]) & (ends[None, :] > bounds[:-1, None])
    if reduction == "max":
        return np.where(mask, values[None, :], -np.inf).max(axis=1), mask
    if reduction == "min":
        return np.where(mask, values[None, :], np.inf).min(axis=1), mask
    return (mask @ values) / mask.sum(axis=1), mask


# ---------------------------------------------------------------------------
# matrix overview


@dataclass(frozen=True)
class CategoryCell:
    level_db: float
    excess_db: float
    verdict: AcceptanceCategory
    token: str


@dataclass(frozen=True)
class StripesCell:
    level_db: float
    stripes: StripeList


@dataclass(frozen=True)
class StripCell:
    row_values: np.ndarray
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class CombinedCell:
    """Both encodings in one matrix cell, drawn as equal halves."""

    two_tone: StripesCell
    strip: StripCell


@dataclass(frozen=True)
class MatrixRow:
    region: str
    height_fraction: float
    cells: tuple


@dataclass(frozen=True)
class MatrixOverview:
    mode: str
    kind: str
    shades: int
    n_rows: int
    bands: tuple[Band, ...]
    rows: tuple[MatrixRow, ...]


def matrix_overview(
    dataset: Dataset,
    mode: str = "limits",
    shades: int = SHADES_DEFAULT,
    n_rows: int = MATRIX_ROWS_DEFAULT,
    kind: str = "third",
    scale: ColorScale | None = None,
) -> MatrixOverview:
    """Region x band overview in one of five encodings.

    Rows are TOTAL first, then the partition's regions in row order with
    heights proportional to region area. ``limits`` classifies the region's
    integral band level, ``two-tone`` windows it, ``discrete-limits`` ranks
    the per-cell band levels against the derived per-cell limit, ``raw``
    ranks them on the diverging color scale with no limits involved, and
    ``combined`` pairs the two-tone cell with the ranked strip 50/50.
    Bands without a limit render undefined in all limit-based modes.
    """
    if mode not in MATRIX_MODES:
        raise DomainError(f"unknown matrix mode {mode!r}")
    if scale is None:
        scale = ColorScale()
    bands = dataset.scheme.bands(kind)
    width = dataset.limits.borderline_width_db
    integral = dataset.integral_levels(kind)
    cell_levels = dataset.cell_levels(kind)

    def band_limits(b: int) -> tuple[float, float]:
        if kind != "third":
            return float("nan"), float("nan")
        return dataset.integral_limit_for(b), dataset.discrete_limit_for(b)

    rows = []
    for row_i, name in enumerate(dataset.row_names):
        ids = dataset.region_cells(name)
        areas = dataset.mesh.areas[ids]
        height = 1.0 if name == TOTAL else dataset.region_areas[name] / dataset.area_total
        cells = []
        for b in range(len(bands)):
            lvl = float(integral[row_i, b])
            int_limit, disc_limit = band_limits(b)
            if mode in ("limits", "two-tone", "combined"):
                verdict = classify(lvl, int_limit, width, shades)
            if mode == "limits":
                excess = lvl - int_limit if not (np.isnan(lvl) or np.isnan(int_limit)) else float("nan")
                cells.append(CategoryCell(lvl, excess, verdict, verdict.token))
                continue
            if mode in ("two-tone", "combined"):
                tt = StripesCell(lvl, two_tone_stripes(lvl, int_limit, width, shades))
                if mode == "two-tone":
                    cells.append(tt)
                    continue
            if mode in ("discrete-limits", "raw", "combined"):
                col = cell_levels[ids, b]
                if np.any(np.isnan(col)):
                    strip = StripCell(np.full(n_rows, np.nan), (UNDEFINED_TOKEN,) * n_rows)
                else:
                    rs = ranked_strip(ids, col, areas, n_rows)
                    if mode == "raw":
                        tokens = tuple(map_color(v, scale) for v in rs.row_values)
                    elif np.isnan(disc_limit):
                        tokens = (UNDEFINED_TOKEN,) * n_rows
                    else:
                        tokens = tuple(
                            classify(v, disc_limit, width, shades).token for v in rs.row_values
                        )
                    strip = StripCell(rs.row_values, tokens)
                cells.append(CombinedCell(tt, strip) if mode == "combined" else strip)
        rows.append(MatrixRow(name, height, tuple(cells)))
    return MatrixOverview(mode, kind, shades, n_rows, bands, tuple(rows))


# ---------------------------------------------------------------------------
# harmonics pane


@dataclass(frozen=True)
class HarmonicColumn:
    harmonic: int  # 1-based
    freq_hz: float
    integral_db: float  # region integral level of this harmonic alone
    row_values: np.ndarray
    tokens: tuple[str, ...]
    row_cells: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class HarmonicsPane:
    region: str
    band: str
    n_rows: int
    sort: str
    anchor: int | None
    columns: tuple[HarmonicColumn, ...]


def harmonics_pane(
    dataset: Dataset,
    region: str,
    band,
    n_rows: int = HARMONICS_ROWS_DEFAULT,
    sort: str = "individual",
    anchor: int | None = None,
    scale: ColorScale | None = None,
) -> HarmonicsPane:
    """Ranked strips for every harmonic of one band over one region.

    ``individual`` ranks each column independently; ``by-selection`` orders
    all columns by the anchor harmonic's values, so the row -> cell mapping
    is identical across columns and rows can be traced horizontally. The
    pseudo band ``OUT_OF_BAND`` shows the harmonics outside every band.
    """
    if sort not in SORT_MODES:
        raise DomainError(f"unknown sort mode {sort!r}")
    if scale is None:
        scale = ColorScale()
    scheme = dataset.scheme
    if isinstance(band, str) and band == OUT_OF_BAND:
        h_idx = scheme.out_of_band_harmonics()
        band_name = OUT_OF_BAND
    else:
        b, band_obj = scheme.find_band(band, "third")
        h_idx = scheme.harmonics_in("third", b)
        band_name = band_obj.nominal
    ids = dataset.region_cells(region)
    if ids.size == 0:
        raise DomainError(f"region {region!r} has no usable cells")
    areas = dataset.mesh.areas[ids]
    levels = dataset.cell_levels("harmonic")
    # the column ranking clients use to pick "most critical" harmonics
    integrals = dataset.integral_levels("harmonic")[dataset.row_index(region)]

    columns = []
    if sort == "by-selection":
        if anchor is None:
            raise DomainError("by-selection sort needs an anchor harmonic")
        a_idx = scheme.harmonic_number(anchor)
        if a_idx not in h_idx:
            raise DomainError(f"anchor harmonic h{anchor} is not in band {band_name}")
        rs = ranked_strip(ids, levels[ids, a_idx], areas, n_rows)
        laid = np.asarray(rs.order, dtype=np.intp)
        for h in h_idx:
            col_vals = levels[laid, h]
            row_values, _ = _rows_for_layout(rs.starts, rs.ends, col_vals, n_rows, "max")
            columns.append(
                HarmonicColumn(
                    harmonic=int(h) + 1,
                    freq_hz=float(scheme.harmonics_hz[h]),
                    integral_db=float(integrals[h]),
                    row_values=row_values,
                    tokens=tuple(map_color(v, scale) for v in row_values),
                    row_cells=rs.row_cells,
                )
            )
    else:
        for h in h_idx:
            rs = ranked_strip(ids, levels[ids, h], areas, n_rows)
            columns.append(
                HarmonicColumn(
                    harmonic=int(h) + 1,
                    freq_hz=float(scheme.harmonics_hz[h]),
                    integral_db=float(integrals[h]),
                    row_values=rs.row_values,
                    tokens=tuple(map_color(v, scale) for v in rs.row_values),
                    row_cells=rs.row_cells,
                )
            )
    return HarmonicsPane(region, band_name, n_rows, sort, anchor, tuple(columns))


# ---------------------------------------------------------------------------
# details pane


@dataclass(frozen=True)
class DetailsSummary:
    integral_db: float
    limit_db: float
    excess_db: float
    area_m2: float
    n_cells: int
    area_fractions: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class DetailsPane:
    region: str
    band: str
    bar_all: StripeList
    bar_top: StripeList
    bar_threshold: StripeList
    bar_categories: StripeList
    summary: DetailsSummary
    top_pct: float
    abs_threshold_db: float


def details_pane(
    dataset: Dataset,
    region: str,
    band,
    abs_threshold_db: float | None = None,
    top_pct: float = 100.0,
    scale: ColorScale | None = None,
) -> DetailsPane:
    """Four stacked bars plus numbers for one region x band cell.

    Bar 1 lays out every cell by level (low end first) on the diverging
    scale; bar 2 keeps only the loudest ``top_pct`` percent of the area;
    bar 3 keeps cells at or above ``abs_threshold_db`` (default: the derived
    per-cell limit); bar 4 shows the area split of the acceptance categories
    against that per-cell limit. Uncovered remainders in bars 2 and 3 are a
    single NONE stripe, so every bar still sums to one.
    """
    if not 0.0 <= top_pct <= 100.0:
        raise DomainError(f"top_pct must be in 0..100, got {top_pct}")
    if scale is None:
        scale = ColorScale()
    b, band_obj = dataset.scheme.find_band(band, "third")
    ids = dataset.region_cells(region)
    if ids.size == 0:
        raise DomainError(f"region {region!r} has no usable cells")
    areas = dataset.mesh.areas[ids]
    total = areas.sum()
    vals = dataset.cell_levels("third")[ids, b]
    width = dataset.limits.borderline_width_db
    int_limit = dataset.integral_limit_for(b)
    disc_limit = dataset.discrete_limit_for(b)
    row_i = dataset.row_index(region)
    integral = float(dataset.integral_levels("third")[row_i, b])

    if np.any(np.isnan(vals)):
        undefined = StripeList(((UNDEFINED_TOKEN, 1.0),))
        summary = DetailsSummary(integral, int_limit, float("nan"), float(total), len(ids), {})
        return DetailsPane(
            region, band_obj.nominal, undefined, undefined, undefined, undefined,
            summary, top_pct, float("nan"),
        )

    order_desc = np.lexsort((ids, -vals))
    fr_desc = areas[order_desc] / total
    cum = np.cumsum(fr_desc)
    starts_desc = np.concatenate(([0.0], cum[:-1]))

    order_asc = order_desc[::-1]
    fr_asc = fr_desc[::-1]
    tokens_asc = [map_color(v, scale) for v in vals[order_asc]]

    bar_all = StripeList(tuple(zip(tokens_asc, (float(f) for f in fr_asc))))

    keep = starts_desc < top_pct / 100.0  # intersects the top-pct window
    sel_frac = float(fr_desc[keep].sum())
    stripes_top = []
    if sel_frac < 1.0 - 1e-12:
        stripes_top.append((NONE_TOKEN, 1.0 - sel_frac))
    keep_asc = keep[::-1]
    stripes_top.extend(
        (tok, float(f)) for tok, f, k in zip(tokens_asc, fr_asc, keep_asc) if k
    )
    bar_top = StripeList(tuple(stripes_top))

    threshold = disc_limit if abs_threshold_db is None else float(abs_threshold_db)
    above = vals[order_asc] >= threshold if not np.isnan(threshold) else np.zeros(len(ids), bool)
    above_frac = float(fr_asc[above].sum())
    stripes_thr = []
    if above_frac < 1.0 - 1e-12:
        stripes_thr.append((NONE_TOKEN, 1.0 - above_frac))
    stripes_thr.extend(
        (tok, float(f)) for tok, f, k in zip(tokens_asc, fr_asc, above) if k
    )
    bar_threshold = StripeList(tuple(stripes_thr))

    fractions: dict[str, float] = {}
    if np.isnan(disc_limit):
        bar_categories = StripeList(((UNDEFINED_TOKEN, 1.0),))
        fractions[Category.UNDEFINED.value] = 1.0
    else:
        cat_stripes = []
        for cat, lo, hi in (
            (Category.ACCEPTABLE, -np.inf, disc_limit),
            (Category.BORDERLINE, disc_limit, disc_limit + width),
            (Category.UNACCEPTABLE, disc_limit + width, np.inf),
        ):
            frac = float(areas[(vals >= lo) & (vals < hi)].sum() / total)
            fractions[cat.value] = frac
            if frac > 0.0:
                cat_stripes.append((AcceptanceCategory(cat, None).token, frac))
        bar_categories = StripeList(tuple(cat_stripes))

    excess = integral - int_limit if not np.isnan(int_limit) else float("nan")
    summary = DetailsSummary(integral, int_limit, excess, float(total), len(ids), fractions)
    return DetailsPane(
        region, band_obj.nominal, bar_all, bar_top, bar_threshold, bar_categories,
        summary, top_pct, threshold,
    )


# ---------------------------------------------------------------------------
# boxplots


@dataclass(frozen=True)
class BoxplotStats:
    band: str
    region: str | None
    n_cells: int
    area_m2: float
    q1: float
    median: float
    q3: float
    whisker_lo: float
    whisker_hi: float
    hist_edges: np.ndarray
    hist_areas: np.ndarray
    limit_stripes: tuple[tuple[str, float | None, float | None], ...]


def weighted_quantile(values: np.ndarray, areas: np.ndarray, q: float) -> float:
    """Smallest value whose cumulative area fraction reaches q.

    The sort is ascending by value; cumulative fractions are
    ``cumsum(areas)/total`` and the pick is the first index with
    fraction >= q. Exactly this sequence of float operations is mirrored by
    the test oracle.
    """
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"quantile must be in 0..1, got {q}")
    order = np.argsort(values, kind="stable")
    cum = np.cumsum(areas[order])
    frac = cum / cum[-1]
    idx = int(np.searchsorted(frac, q, side="left"))
    return float(values[order][min(idx, len(order) - 1)])


def boxplot_stats(
    dataset: Dataset,
    bands,
    regions=None,
    split: bool = False,
    bins: int = 24,
) -> tuple[BoxplotStats, ...]:
    """Area-weighted box stats + mirrored histogram per band (and region).

    Without ``split`` the selected regions pool into one plot per band;
    with it every (band, region) pair gets its own. Whiskers reach to the
    most extreme values within 1.5 IQR of the quartiles. The limit stripes
    give the dB intervals of the per-cell acceptance categories so the plot
    background can show them.
    """
    if bins < 1:
        raise DomainError(f"bin count must be positive, got {bins}")
    region_names = list(regions) if regions else [TOTAL]
    cell_sets: list[tuple[str | None, np.ndarray]]
    if split:
        cell_sets = [(name, dataset.region_cells(name)) for name in region_names]
    else:
        pooled = np.unique(np.concatenate([dataset.region_cells(n) for n in region_names]))
        label = region_names[0] if len(region_names) == 1 else None
        cell_sets = [(label, pooled)]

    width = dataset.limits.borderline_width_db
    table = dataset.cell_levels("third")
    out = []
    for band_ref in bands:
        b, band_obj = dataset.scheme.find_band(band_ref, "third")
        disc = dataset.discrete_limit_for(b)
        if np.isnan(disc):
            stripes = ((UNDEFINED_TOKEN, None, None),)
        else:
            stripes = (
                (AcceptanceCategory(Category.ACCEPTABLE, None).token, None, disc),
                (AcceptanceCategory(Category.BORDERLINE, None).token, disc, disc + width),
                (AcceptanceCategory(Category.UNACCEPTABLE, None).token, disc + width, None),
            )
        for label, ids in cell_sets:
            if ids.size == 0:
                raise DomainError(f"region {label!r} has no usable cells")
            vals = table[ids, b]
            areas = dataset.mesh.areas[ids]
            if np.any(np.isnan(vals)):
                raise DomainError(f"band {band_obj.nominal} has no harmonics")
            q1 = weighted_quantile(vals, areas, 0.25)
            med = weighted_quantile(vals, areas, 0.5)
            q3 = weighted_quantile(vals, areas, 0.75)
            iqr = q3 - q1
            lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
            inside = vals[(vals >= lo_fence) & (vals <= hi_fence)]
            w_lo = float(inside.min()) if inside.size else q1
            w_hi = float(inside.max()) if inside.size else q3
            v_lo, v_hi = float(vals.min()), float(vals.max())
            if v_hi > v_lo:
                hist_areas, hist_edges = np.histogram(
                    vals, bins=bins, range=(v_lo, v_hi), weights=areas
                )
            else:  # all levels equal: one degenerate bin holds everything
                hist_edges = np.array([v_lo, v_hi])
                hist_areas = np.array([areas.sum()])
            out.append(
                BoxplotStats(
                    band=band_obj.nominal,
                    region=label,
                    n_cells=int(ids.size),
                    area_m2=float(areas.sum()),
                    q1=q1,
                    median=med,
                    q3=q3,
                    whisker_lo=w_lo,
                    whisker_hi=w_hi,
                    hist_edges=hist_edges,
                    hist_areas=hist_areas,
                    limit_stripes=stripes,
                )
            )
    return tuple(out)
