"""HTTP facade over one loaded dataset.

Thin by design: every route body is parameter parsing, a call into views or
linking, and serialization. Responses are plain JSON with floats rounded to
9 significant digits and carry the dataset content hash so a client can
detect a swapped dataset. GETs are pure functions of (dataset, session
state), repeated calls return byte-identical payloads.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, Query, Request
from fastapi.responses import JSONResponse

from . import linking, views
from .acoustics import campbell
from .errors import DomainError, LayoutMismatchError, UnknownEntityError
from .linking import SelectionState
from .model import Dataset
from .util import round_floats

API_PREFIX = "/api/v1"
DEFAULT_PORT = 8700
SESSION_TIMEOUT_S = 30 * 60.0
RLE_THRESHOLD = 1000


@dataclass
class Session:
    id: str
    state: SelectionState = field(default_factory=SelectionState)
    view_params: dict[str, dict] = field(default_factory=dict)
    last_access: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)


def cell_mask(ids) -> dict:
    """Sorted id list, run-length encoded above the size threshold."""
    ids = sorted(int(i) for i in ids)
    if len(ids) <= RLE_THRESHOLD:
        return {"cells": ids}
    ranges = []
    start = prev = ids[0]
    for c in ids[1:]:
        if c == prev + 1:
            prev = c
            continue
        ranges.append([start, prev])
        start = prev = c
    ranges.append([start, prev])
    return {"ranges": ranges}


def _stripes(sl: views.StripeList) -> list:
    return [[token, frac] for token, frac in sl.stripes]


def _strip_cell(cell: views.StripCell) -> dict:
    return {"row_values": list(cell.row_values), "tokens": list(cell.tokens)}


def _matrix_cell(cell) -> dict:
    if isinstance(cell, views.CategoryCell):
        return {
            "level_db": cell.level_db,
            "excess_db": cell.excess_db,
            "category": cell.verdict.category.value,
            "shade": cell.verdict.shade,
            "token": cell.token,
        }
    if isinstance(cell, views.StripesCell):
        return {"level_db": cell.level_db, "stripes": _stripes(cell.stripes)}
    if isinstance(cell, views.CombinedCell):
        return {"two_tone": _matrix_cell(cell.two_tone), "strip": _strip_cell(cell.strip)}
    return _strip_cell(cell)


def _selection_payload(state: SelectionState) -> dict:
    return {
        "selection": cell_mask(state.cells),
        "region": state.region,
        "band": state.band,
        "harmonics": sorted(state.harmonics),
        "frozen": state.frozen,
    }


def create_app(
    dataset: Dataset,
    palette: dict | None = None,
    session_timeout_s: float = SESSION_TIMEOUT_S,
) -> FastAPI:
    """Build the application serving one dataset."""
    app = FastAPI(title="nvhdrill", docs_url=None, redoc_url=None)
    pal = palette if palette is not None else views.load_palette()
    sessions: dict[str, Session] = {}
    sessions_lock = threading.Lock()

    def respond(payload: dict) -> JSONResponse:
        payload["dataset_hash"] = dataset.content_hash
        return JSONResponse(round_floats(payload))

    def get_session(sid: str) -> Session:
        with sessions_lock:
            sess = sessions.get(sid)
            now = time.monotonic()
            if sess is not None and now - sess.last_access > session_timeout_s:
                del sessions[sid]
                sess = None
            if sess is None:
                raise UnknownEntityError(f"unknown session {sid!r}")
            sess.last_access = now
            return sess

    @app.exception_handler(DomainError)
    async def _domain(_req: Request, exc: DomainError):
        return JSONResponse({"detail": str(exc)}, status_code=422)

    @app.exception_handler(UnknownEntityError)
    async def _unknown(_req: Request, exc: UnknownEntityError):
        return JSONResponse({"detail": str(exc)}, status_code=404)

    @app.exception_handler(LayoutMismatchError)
    async def _mismatch(_req: Request, exc: LayoutMismatchError):
        return JSONResponse({"detail": str(exc)}, status_code=409)

    # -- dataset ---------------------------------------------------------

    @app.get(API_PREFIX + "/dataset/meta")
    def dataset_meta():
        scheme = dataset.scheme
        bands = {}
        for kind in ("third", "octave"):
            rows = []
            for i, band in enumerate(scheme.bands(kind)):
                entry = {
                    "nominal": band.nominal,
                    "center_hz": band.center_hz,
                    "lo_hz": band.lo_hz,
                    "hi_hz": band.hi_hz,
                    "harmonics": int(len(scheme.harmonics_in(kind, i))),
                }
                if kind == "third":
                    entry["integral_limit_db"] = dataset.integral_limit_for(i)
                    entry["discrete_limit_db"] = dataset.discrete_limit_for(i)
                rows.append(entry)
            bands[kind] = rows
        return respond(
            {
                "label": dataset.label,
                "speed_rpm": dataset.speed_rpm,
                "fundamental_hz": scheme.fundamental_hz,
                "reference": {
                    "velocity_m_s": dataset.spectra.reference_velocity,
                    "area_m2": dataset.spectra.reference_area,
                },
                "counts": {
                    "vertices": dataset.mesh.n_vertices,
                    "cells": dataset.mesh.n_cells,
                    "harmonics": scheme.n_harmonics,
                    "thirds": len(scheme.thirds),
                    "octaves": len(scheme.octaves),
                    "out_of_band": int(len(scheme.out_of_band_harmonics())),
                },
                "regions": [
                    {
                        "name": name,
                        "cells": int(len(dataset.region_cells(name))),
                        "area_m2": dataset.region_areas[name],
                    }
                    for name in dataset.row_names
                ],
                "bands": bands,
                "borderline_width_db": dataset.limits.borderline_width_db,
                "warnings": list(dataset.mesh.warnings),
            }
        )

    @app.get(API_PREFIX + "/dataset/mesh")
    def dataset_mesh():
        return respond(
            {
                "vertices": dataset.mesh.vertices.tolist(),
                "cells": [list(c) for c in dataset.mesh.cells],
                "region_names": list(dataset.partition.names),
                "cell_region": dataset.partition.cell_region.tolist(),
                "areas": dataset.mesh.areas.tolist(),
            }
        )

    # -- views -----------------------------------------------------------

    @app.get(API_PREFIX + "/matrix")
    def matrix(
        mode: str = "limits",
        shades: int = views.SHADES_DEFAULT,
        rows: int = views.MATRIX_ROWS_DEFAULT,
        kind: str = "third",
    ):
        mo = views.matrix_overview(dataset, mode=mode, shades=shades, n_rows=rows, kind=kind)
        return respond(
            {
                "mode": mo.mode,
                "kind": mo.kind,
                "shades": mo.shades,
                "rows_per_cell": mo.n_rows,
                "bands": [b.nominal for b in mo.bands],
                "rows": [
                    {
                        "region": r.region,
                        "height_fraction": r.height_fraction,
                        "cells": [_matrix_cell(c) for c in r.cells],
                    }
                    for r in mo.rows
                ],
            }
        )

    @app.get(API_PREFIX + "/harmonics")
    def harmonics(
        region: str,
        band: str,
        rows: int = views.HARMONICS_ROWS_DEFAULT,
        sort: str = "individual",
        anchor: int | None = None,
    ):
        pane = views.harmonics_pane(dataset, region, band, n_rows=rows, sort=sort, anchor=anchor)
        return respond(
            {
                "region": pane.region,
                "band": pane.band,
                "rows": pane.n_rows,
                "sort": pane.sort,
                "anchor": pane.anchor,
                "columns": [
                    {
                        "harmonic": c.harmonic,
                        "freq_hz": c.freq_hz,
                        "integral_db": c.integral_db,
                        "row_values": list(c.row_values),
                        "tokens": list(c.tokens),
                    }
                    for c in pane.columns
                ],
            }
        )

    @app.get(API_PREFIX + "/details")
    def details(
        region: str,
        band: str,
        abs: float | None = Query(default=None),
        pct: float = 100.0,
    ):
        pane = views.details_pane(dataset, region, band, abs_threshold_db=abs, top_pct=pct)
        return respond(
            {
                "region": pane.region,
                "band": pane.band,
                "bars": {
                    "all": _stripes(pane.bar_all),
                    "top": _stripes(pane.bar_top),
                    "threshold": _stripes(pane.bar_threshold),
                    "categories": _stripes(pane.bar_categories),
                },
                "top_pct": pane.top_pct,
                "abs_threshold_db": pane.abs_threshold_db,
                "summary": {
                    "integral_db": pane.summary.integral_db,
                    "limit_db": pane.summary.limit_db,
                    "excess_db": pane.summary.excess_db,
                    "area_m2": pane.summary.area_m2,
                    "n_cells": pane.summary.n_cells,
                    "area_fractions": pane.summary.area_fractions,
                },
            }
        )

    @app.get(API_PREFIX + "/boxplots")
    def boxplots(
        bands: str,
        regions: str | None = None,
        split: bool = False,
        bins: int = 24,
    ):
        band_list = [b for b in bands.split(",") if b]
        region_list = [r for r in regions.split(",") if r] if regions else None
        stats = views.boxplot_stats(dataset, band_list, region_list, split=split, bins=bins)
        return respond(
            {
                "plots": [
                    {
                        "band": s.band,
                        "region": s.region,
                        "n_cells": s.n_cells,
                        "area_m2": s.area_m2,
                        "q1": s.q1,
                        "median": s.median,
                        "q3": s.q3,
                        "whisker_lo": s.whisker_lo,
                        "whisker_hi": s.whisker_hi,
                        "hist_edges": list(s.hist_edges),
                        "hist_areas": list(s.hist_areas),
                        "limit_stripes": [
                            {"token": t, "lo_db": lo, "hi_db": hi} for t, lo, hi in s.limit_stripes
                        ],
                    }
                    for s in stats
                ]
            }
        )

    @app.get(API_PREFIX + "/colors")
    def colors(
        band: str | None = None,
        harmonic: int | None = None,
        scale: str = "nonlinear",
        shades: int = views.SHADES_DEFAULT,
    ):
        if (band is None) == (harmonic is None):
            raise DomainError("pass exactly one of band or harmonic")
        scheme = dataset.scheme
        if band is not None:
            b, band_obj = scheme.find_band(band, "third")
            values = dataset.cell_levels("third")[:, b]
            entity = {"band": band_obj.nominal}
        else:
            h = scheme.harmonic_number(harmonic)
            values = dataset.cell_levels("harmonic")[:, h]
            b = int(scheme.harmonic_third[h])
            entity = {"harmonic": harmonic, "freq_hz": float(scheme.harmonics_hz[h])}
        if scale in ("linear", "nonlinear"):
            sc = views.ColorScale(kind=scale)
        elif scale == "limits":
            limit = dataset.discrete_limit_for(b) if b >= 0 else float("nan")
            sc = views.ColorScale(
                kind="limits",
                limit_db=limit,
                width_db=dataset.limits.borderline_width_db,
                shades=shades,
            )
        else:
            raise DomainError(f"unknown color scale {scale!r}")
        tokens = [views.map_color(float(v), sc) for v in values]
        return respond({**entity, "scale": scale, "values": list(values), "tokens": tokens})

    @app.get(API_PREFIX + "/campbell")
    def campbell_route(kind: str = "third"):
        cm = campbell([dataset], kind)
        return respond(
            {
                "speeds_rpm": list(cm.speeds_rpm),
                "bands": [b.nominal for b in cm.bands],
                "levels_db": [list(row) for row in cm.levels_db],
            }
        )

    @app.get(API_PREFIX + "/palette")
    def palette_route():
        return JSONResponse(pal)

    # -- sessions ----------------------------------------------------------

    @app.post(API_PREFIX + "/session")
    def create_session():
        sid = secrets.token_hex(8)
        with sessions_lock:
            sessions[sid] = Session(id=sid)
        return JSONResponse({"id": sid, "dataset_hash": dataset.content_hash})

    @app.get(API_PREFIX + "/session/{sid}/selection")
    def get_selection(sid: str):
        sess = get_session(sid)
        return respond(_selection_payload(sess.state))

    @app.post(API_PREFIX + "/session/{sid}/selection")
    def post_selection(sid: str, body: dict = Body(default={})):
        sess = get_session(sid)
        with sess.lock:
            state = sess.state
            if body.get("clear"):
                state = SelectionState()
            if "cells" in body:
                state = linking.select_cells(
                    state, dataset, body["cells"], extend=bool(body.get("extend", False))
                )
            if "region" in body or "band" in body:
                if not ("region" in body and "band" in body):
                    raise DomainError("frequency selection needs both region and band")
                state = linking.select_frequency(
                    state, dataset, body["region"], body["band"], body.get("harmonics")
                )
            if "frozen" in body:
                from dataclasses import replace

                state = replace(state, frozen=bool(body["frozen"]))
            view_params = body.get("view_params")
            if view_params is not None:
                if not isinstance(view_params, dict):
                    raise DomainError("view_params must be an object of pane -> params")
                for pane, params in view_params.items():
                    if not isinstance(params, dict):
                        raise DomainError(f"view_params[{pane!r}] must be an object")
                    sess.view_params[pane] = dict(params)
            sess.state = state
            return respond(_selection_payload(state))

    @app.post(API_PREFIX + "/session/{sid}/selection/grow")
    def grow(sid: str, body: dict = Body(default={})):
        sess = get_session(sid)
        with sess.lock:
            sess.state = linking.grow_selection(
                sess.state,
                dataset,
                steps=int(body.get("steps", 1)),
                min_level_db=body.get("min_level_db"),
                band=body.get("band"),
            )
            return respond(_selection_payload(sess.state))

    @app.get(API_PREFIX + "/session/{sid}/highlight")
    def highlight_route(
        sid: str,
        panes: str = "matrix,mesh",
        harmonics_region: str | None = None,
        harmonics_band: str | None = None,
        harmonics_rows: int | None = None,
        harmonics_sort: str | None = None,
        harmonics_anchor: int | None = None,
        details_region: str | None = None,
        details_band: str | None = None,
        matrix_kind: str | None = None,
    ):
        sess = get_session(sid)
        echoed: dict[str, dict] = {
            "harmonics": {
                k: v
                for k, v in {
                    "region": harmonics_region,
                    "band": harmonics_band,
                    "rows": harmonics_rows,
                    "sort": harmonics_sort,
                    "anchor": harmonics_anchor,
                }.items()
                if v is not None
            },
            "details": {
                k: v
                for k, v in {"region": details_region, "band": details_band}.items()
                if v is not None
            },
            "matrix": {k: v for k, v in {"kind": matrix_kind}.items() if v is not None},
        }
        request_panes: dict[str, dict] = {}
        for name in [p for p in panes.split(",") if p]:
            cached = sess.view_params.get(name, {})
            linking.verify_layout(echoed.get(name, {}), cached)
            request_panes[name] = {**cached, **echoed.get(name, {})}
        payload = linking.highlight(sess.state, dataset, request_panes)
        return respond(
            {
                "matrix_marks": [[r, b] for r, b in payload.matrix_marks],
                "harmonic_rows": (
                    None
                    if payload.harmonic_rows is None
                    else {str(h): list(rows) for h, rows in payload.harmonic_rows.items()}
                ),
                "details_intervals": [[a, b] for a, b in payload.details_intervals],
                "mask": cell_mask(payload.mask_cells),
            }
        )

    return app


def app_from_env() -> FastAPI:
    """Entry point for `uvicorn nvhdrill.service:app_from_env --factory`."""
    import os

    from . import ingest

    manifest = os.environ.get("NVH_DATASET")
    if not manifest:
        raise RuntimeError("set NVH_DATASET to a manifest path")
    palette_path = os.environ.get("NVH_PALETTE")
    palette = views.load_palette(palette_path) if palette_path else None
    return create_app(ingest.load(manifest), palette=palette)
