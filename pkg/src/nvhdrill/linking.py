"""Selection state and the cross-view linking that drives highlighting.

A selection is spatial (cell ids) plus spectral (region, band, harmonics).
The update operations are pure: they take the old state and return a new
one, so a session can be replayed. ``highlight`` projects one state into
every pane's coordinate system; for panes with resampled rows that requires
the exact layout parameters the pane was drawn with, anything else raises a
mismatch instead of silently marking wrong rows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import views
from .errors import DomainError, LayoutMismatchError, UnknownEntityError
from .model import Dataset, OUT_OF_BAND


@dataclass(frozen=True)
class SelectionState:
    cells: frozenset[int] = frozenset()
    region: str | None = None
    band: str | None = None  # band nominal
    harmonics: frozenset[int] = frozenset()  # 1-based harmonic numbers
    frozen: bool = False


def select_frequency(
    state: SelectionState,
    dataset: Dataset,
    region: str,
    band,
    harmonics=None,
) -> SelectionState:
    """Pick a (region, band) cell of the overview, optionally with harmonics.

    The spatial selection becomes the region's cells, except that an earlier
    spatial selection survives where it intersects the region (drilling into
    a band must not throw away a hand-picked cell set). Harmonics must
    belong to the chosen band.
    """
    region_cells = dataset.region_cells(region)
    b, band_obj = dataset.scheme.find_band(band, "third")
    chosen: frozenset[int] = frozenset()
    if harmonics:
        members = set(int(h) + 1 for h in dataset.scheme.harmonics_in("third", b))
        for n in harmonics:
            dataset.scheme.harmonic_number(n)  # existence
            if int(n) not in members:
                raise DomainError(f"harmonic h{n} is outside band {band_obj.nominal}")
        chosen = frozenset(int(n) for n in harmonics)
    kept = state.cells.intersection(region_cells.tolist())
    cells = kept if kept else frozenset(int(c) for c in region_cells)
    return replace(state, cells=cells, region=region, band=band_obj.nominal, harmonics=chosen)


def select_cells(state: SelectionState, dataset: Dataset, cell_ids, extend: bool = False) -> SelectionState:
    """Replace or extend the spatial selection with explicit cell ids."""
    n = dataset.mesh.n_cells
    ids = set()
    for c in cell_ids:
        cid = int(c)
        if not 0 <= cid < n:
            raise UnknownEntityError(f"unknown cell {cid}")
        ids.add(cid)
    cells = state.cells | ids if extend else frozenset(ids)
    return replace(state, cells=cells)


def grow_selection(
    state: SelectionState,
    dataset: Dataset,
    steps: int = 1,
    min_level_db: float | None = None,
    band=None,
) -> SelectionState:
    """Expand the selection over edge-adjacent cells, optionally level-gated.

    Each step adds every cell adjacent to the current set whose level is at
    least ``min_level_db``. The level is the cell's value in the gating
    band (argument, else the selected band) or, when exactly one harmonic
    is selected, that harmonic's level. Growth is monotone and stops early
    at a fixed point.
    """
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    if not state.cells:
        raise DomainError("cannot grow an empty selection")

    eligible = None
    if min_level_db is not None:
        ref = band if band is not None else state.band
        if ref is None:
            raise DomainError("level-gated growth needs a band in the selection or arguments")
        if len(state.harmonics) == 1 and band is None:
            (h,) = state.harmonics
            col = dataset.cell_levels("harmonic")[:, dataset.scheme.harmonic_number(h)]
        else:
            b, _ = dataset.scheme.find_band(ref, "third")
            col = dataset.cell_levels("third")[:, b]
        with np.errstate(invalid="ignore"):
            eligible = col >= float(min_level_db)
        eligible &= dataset.active

    adjacency = dataset.mesh.adjacency
    current = set(state.cells)
    for _ in range(steps):
        frontier = set()
        for cid in current:
            for nb in adjacency[cid]:
                if nb in current:
                    continue
                if eligible is None:
                    if dataset.active[nb]:
                        frontier.add(nb)
                elif eligible[nb]:
                    frontier.add(nb)
        if not frontier:
            break
        current |= frontier
    return replace(state, cells=frozenset(current))


# ---------------------------------------------------------------------------
# highlighting


@dataclass(frozen=True)
class HighlightPayload:
    matrix_marks: tuple[tuple[str, str], ...] = ()
    harmonic_rows: dict[int, tuple[int, ...]] | None = None
    details_intervals: tuple[tuple[float, float], ...] = ()
    mask_cells: tuple[int, ...] = ()


def verify_layout(requested: dict, served: dict) -> None:
    """Reject highlight requests drawn against a different pane layout."""
    for key, value in requested.items():
        if key in served and served[key] != value:
            raise LayoutMismatchError(
                f"layout parameter {key!r} is {value!r} but the pane was served with {served[key]!r}"
            )


def highlight(
    state: SelectionState,
    dataset: Dataset,
    panes: dict[str, dict],
    served_params: dict[str, dict] | None = None,
) -> HighlightPayload:
    """Project the selection into the requested panes.

    ``panes`` maps pane name ("matrix", "harmonics", "details", "mesh") to
    the layout parameters it was drawn with; ``served_params`` is the
    layout cache of the serving session, checked via :func:`verify_layout`.
    """
    if served_params:
        for name, params in panes.items():
            verify_layout(params, served_params.get(name, {}))

    sel = state.cells
    matrix_marks: list[tuple[str, str]] = []
    harmonic_rows: dict[int, tuple[int, ...]] | None = None
    details_intervals: list[tuple[float, float]] = []

    for name, params in panes.items():
        if name == "matrix":
            if not sel:
                continue
            kind = params.get("kind", "third")
            bands = (
                [state.band]
                if state.band is not None
                else [b.nominal for b in dataset.scheme.bands(kind)]
            )
            for region in dataset.row_names:
                ids = dataset.region_cells(region)
                if sel.intersection(ids.tolist()):
                    matrix_marks.extend((region, b) for b in bands)
        elif name == "harmonics":
            pane = views.harmonics_pane(
                dataset,
                params.get("region", state.region or "TOTAL"),
                params.get("band", state.band if state.band is not None else OUT_OF_BAND),
                n_rows=int(params.get("rows", views.HARMONICS_ROWS_DEFAULT)),
                sort=params.get("sort", "individual"),
                anchor=params.get("anchor"),
            )
            harmonic_rows = {}
            for col in pane.columns:
                rows = tuple(
                    i for i, cells in enumerate(col.row_cells) if sel.intersection(cells)
                )
                harmonic_rows[col.harmonic] = rows
        elif name == "details":
            region = params.get("region", state.region or "TOTAL")
            band = params.get("band", state.band)
            if band is None:
                raise DomainError("details highlight needs a band")
            b, _ = dataset.scheme.find_band(band, "third")
            ids = dataset.region_cells(region)
            vals = dataset.cell_levels("third")[ids, b]
            if not np.any(np.isnan(vals)):
                order_desc = np.lexsort((ids, -vals))
                asc = order_desc[::-1]
                fr = dataset.mesh.areas[ids][asc] / dataset.mesh.areas[ids].sum()
                ends = np.cumsum(fr)
                starts = ends - fr
                marked = np.fromiter((int(c) in sel for c in ids[asc]), bool, len(asc))
                runs: list[tuple[float, float]] = []
                for s, e, m in zip(starts, ends, marked):
                    if not m:
                        continue
                    if runs and abs(runs[-1][1] - s) < 1e-12:
                        runs[-1] = (runs[-1][0], float(e))
                    else:
                        runs.append((float(s), float(e)))
                details_intervals = runs
        elif name == "mesh":
            pass  # the mask below serves every 3-d view
        else:
            raise DomainError(f"unknown pane {name!r}")

    return HighlightPayload(
        matrix_marks=tuple(matrix_marks),
        harmonic_rows=harmonic_rows,
        details_intervals=tuple(details_intervals),
        mask_cells=tuple(sorted(sel)),
    )
