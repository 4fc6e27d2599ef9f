import math

import numpy as np
import pytest

from nvhdrill.errors import DomainError
from nvhdrill.model import (
    Dataset,
    FrequencyScheme,
    RegionPartition,
    SpectrumTable,
)
from nvhdrill.views import (
    NONE_TOKEN,
    UNDEFINED_TOKEN,
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

from conftest import strip_mesh


# ---------------------------------------------------------------------------
# independent reference implementations


def oracle_strip(ids, vals, areas, n_rows):
    """Interval-overlap layout built cell by cell, no shared vectorization."""
    n = len(ids)
    order = sorted(range(n), key=lambda i: (-vals[i], ids[i]))
    total = float(np.sum(np.asarray(areas, dtype=np.float64)))
    run = 0.0
    intervals = []
    for i in order:
        start = run / total
        run = run + areas[i]
        intervals.append((ids[i], vals[i], start, run / total))
    rows_vals, rows_cells = [], []
    for r in range(n_rows):
        lo, hi = r / n_rows, (r + 1) / n_rows
        members = [(cid, v) for cid, v, s, e in intervals if s < hi and e > lo]
        rows_vals.append(max(v for _, v in members))
        rows_cells.append(tuple(cid for cid, _ in members))
    return rows_vals, rows_cells


def oracle_quantile(values, areas, q):
    """Walk the sorted pairs until the cumulative share reaches q."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    cums = []
    run = 0.0
    for i in order:
        run = run + areas[i]
        cums.append(run)
    total = cums[-1]
    for i, c in zip(order, cums):
        if c / total >= q:
            return values[i]
    return values[order[-1]]


# ---------------------------------------------------------------------------


class TestColorScale:
    def test_linear_interpolates_between_anchors(self):
        scale = ColorScale(kind="linear", anchors_db=(60.0, 90.0, 120.0))
        assert map_color(75.0, scale) == "DIVERGE(0.250000)"
        assert map_color(90.0, scale) == "DIVERGE(0.500000)"
        assert map_color(40.0, scale) == "DIVERGE(0.000000)"
        assert map_color(200.0, scale) == "DIVERGE(1.000000)"

    def test_nonlinear_tracks_velocity_not_db(self):
        scale = ColorScale(kind="nonlinear", anchors_db=(60.0, 90.0, 120.0))
        lo, hi = 10.0 ** (60.0 / 20.0), 10.0 ** (120.0 / 20.0)
        t = (10.0 ** (90.0 / 20.0) - lo) / (hi - lo)
        assert map_color(90.0, scale) == f"DIVERGE({t:.6f})"
        # midpoint in dB sits far below the diverging midpoint
        assert t < 0.05

    def test_limits_kind_yields_category_tokens(self):
        scale = ColorScale(kind="limits", limit_db=100.0, width_db=6.0, shades=3)
        assert map_color(90.0, scale).startswith("ACCEPT")
        assert map_color(103.0, scale) == "BORDER_1"
        assert map_color(120.0, scale) == "UNACCEPT_2"

    def test_nan_is_undefined(self):
        assert map_color(float("nan"), ColorScale()) == UNDEFINED_TOKEN

    def test_bad_anchors_rejected(self):
        with pytest.raises(DomainError):
            ColorScale(kind="linear", anchors_db=(90.0, 60.0))
        with pytest.raises(DomainError):
            ColorScale(kind="sideways")


class TestTwoTone:
    def test_at_limit_splits_evenly(self):
        stripes = two_tone_stripes(100.0, 100.0).stripes
        assert stripes == (("ACCEPT_0", 0.5), ("BORDER_0", 0.5))

    def test_excess_5_4_reads_60_40(self):
        stripes = two_tone_stripes(105.4, 100.0, width_db=6.0, shades=1).stripes
        assert [t for t, _ in stripes] == ["BORDER_0", "UNACCEPT_0"]
        assert stripes[0][1] == pytest.approx(0.60, abs=1e-9)
        assert stripes[1][1] == pytest.approx(0.40, abs=1e-9)

    def test_fractions_sum_to_one(self):
        rng = np.random.default_rng(8)
        for _ in range(300):
            level = rng.uniform(80.0, 120.0)
            shades = int(rng.integers(1, 4))
            stripes = two_tone_stripes(level, 100.0, 6.0, shades).stripes
            assert sum(f for _, f in stripes) == pytest.approx(1.0, abs=1e-9)
            assert all(f > 0.0 for _, f in stripes)

    def test_shade_cuts_appear_inside_window(self):
        stripes = two_tone_stripes(105.4, 100.0, 6.0, shades=3).stripes
        assert [t for t, _ in stripes] == ["BORDER_1", "BORDER_2", "UNACCEPT_0", "UNACCEPT_1"]

    def test_far_from_limit_is_solid(self):
        assert two_tone_stripes(50.0, 100.0).stripes == (("ACCEPT_0", 1.0),)

    def test_nan_undefined(self):
        assert two_tone_stripes(float("nan"), 100.0).stripes == ((UNDEFINED_TOKEN, 1.0),)


class TestRankedStrip:
    def test_distinct_values_simple_layout(self):
        rs = ranked_strip([0, 1, 2, 3], [100.0, 101.0, 102.0, 103.0], np.ones(4), 4)
        assert rs.order == (3, 2, 1, 0)
        assert list(rs.row_values) == [103.0, 102.0, 101.0, 100.0]
        assert rs.row_cells == ((3,), (2,), (1,), (0,))

    def test_ties_break_by_cell_id(self):
        rs = ranked_strip([5, 2, 9], [70.0, 70.0, 70.0], np.ones(3), 3)
        assert rs.order == (2, 5, 9)

    def test_more_rows_than_cells(self):
        rs = ranked_strip([0, 1], [90.0, 80.0], np.ones(2), 4)
        assert list(rs.row_values) == [90.0, 90.0, 80.0, 80.0]
        assert rs.row_cells == ((0,), (0,), (1,), (1,))

    def test_area_weighting_shifts_boundaries(self):
        # big quiet cell swallows three quarters of the bar
        rs = ranked_strip([0, 1], [90.0, 80.0], np.array([1.0, 3.0]), 4)
        assert list(rs.row_values) == [90.0, 80.0, 80.0, 80.0]

    def test_row_spanning_cells_use_reduction(self):
        rs = ranked_strip([0, 1], [90.0, 80.0], np.array([1.0, 1.0]), 3)
        # middle row sees both cells
        assert list(rs.row_values) == [90.0, 90.0, 80.0]
        assert rs.row_cells[1] == (0, 1)
        rs_min = ranked_strip([0, 1], [90.0, 80.0], np.array([1.0, 1.0]), 3, reduction="min")
        assert list(rs_min.row_values) == [90.0, 80.0, 80.0]

    def test_mean_reduction(self):
        rs = ranked_strip([0, 1], [90.0, 80.0], np.array([1.0, 1.0]), 1, reduction="mean")
        assert rs.row_values[0] == pytest.approx(85.0, abs=1e-12)

    def test_matches_oracle_exactly(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            n = int(rng.integers(1, 30))
            ids = rng.permutation(100)[:n]
            vals = np.round(rng.uniform(60.0, 110.0, n), 1)  # rounding forces ties
            areas = rng.uniform(0.1, 2.0, n)
            n_rows = int(rng.integers(1, 12))
            rs = ranked_strip(ids, vals, areas, n_rows)
            want_vals, want_cells = oracle_strip(list(ids), list(vals), list(areas), n_rows)
            assert list(rs.row_values) == want_vals
            assert rs.row_cells == tuple(want_cells)

    def test_rejects_empty_and_bad_args(self):
        with pytest.raises(DomainError):
            ranked_strip([], [], [], 4)
        with pytest.raises(DomainError):
            ranked_strip([0], [60.0], [1.0], 0)
        with pytest.raises(DomainError):
            ranked_strip([0], [60.0], [1.0], 4, reduction="median")
        with pytest.raises(DomainError):
            ranked_strip([0], [60.0], [0.0], 4)


class TestHarmonicsPane:
    def test_single_harmonic_band(self, tiny):
        pane = harmonics_pane(tiny, "TOTAL", "500", n_rows=4)
        assert pane.band == "500"
        assert len(pane.columns) == 1
        col = pane.columns[0]
        assert col.harmonic == 5
        assert col.freq_hz == 500.0
        assert list(col.row_values) == [103.0, 102.0, 101.0, 100.0]
        assert col.row_cells == ((3,), (2,), (1,), (0,))

    def test_region_restriction(self, tiny):
        pane = harmonics_pane(tiny, "B", "500", n_rows=2)
        assert list(pane.columns[0].row_values) == [103.0, 102.0]

    def test_column_integral_levels(self, small_box):
        # per-column integral must match a direct area-weighted energy sum
        band = small_box.scheme.thirds[-1]
        pane = harmonics_pane(small_box, "TOP", band.nominal, n_rows=8)
        ids = small_box.region_cells("TOP")
        areas = small_box.mesh.areas[ids]
        ref = small_box.spectra.reference_area
        for col in pane.columns:
            lv = small_box.spectra.levels_db[ids, col.harmonic - 1]
            expect = 10.0 * math.log10(float(np.sum(areas * 10.0 ** (lv / 10.0))) / ref)
            assert col.integral_db == pytest.approx(expect, abs=1e-9)

    def test_by_selection_shares_layout(self, small_box):
        band = None
        for b, _ in enumerate(small_box.scheme.thirds):
            if len(small_box.scheme.harmonics_in("third", b)) >= 3:
                band = small_box.scheme.thirds[b]
                break
        assert band is not None
        hs = small_box.scheme.harmonics_in(
            "third", small_box.scheme.find_band(band.nominal, "third")[0]
        )
        anchor = int(hs[0]) + 1
        pane = harmonics_pane(
            small_box, "TOP", band.nominal, n_rows=16, sort="by-selection", anchor=anchor
        )
        layouts = {col.row_cells for col in pane.columns}
        assert len(layouts) == 1
        # anchor column keeps its own ranked ordering
        solo = harmonics_pane(small_box, "TOP", band.nominal, n_rows=16)
        anchor_col = next(c for c in pane.columns if c.harmonic == anchor)
        solo_col = next(c for c in solo.columns if c.harmonic == anchor)
        assert np.array_equal(anchor_col.row_values, solo_col.row_values)

    def test_by_selection_needs_anchor_in_band(self, tiny):
        with pytest.raises(DomainError):
            harmonics_pane(tiny, "TOTAL", "500", sort="by-selection", anchor=None)
        with pytest.raises(DomainError):
            harmonics_pane(tiny, "TOTAL", "500", sort="by-selection", anchor=1)

    def test_out_of_band_pseudo_band(self):
        freqs = 100.0 * np.arange(1, 7)
        scheme = FrequencyScheme.build(100.0, freqs, third_k_range=(-7, -3))
        mesh = strip_mesh(2)
        part = RegionPartition.from_pairs([(0, "A"), (1, "A")], 2)
        levels = np.array([[60.0, 61, 62, 63, 64, 65], [70.0, 71, 72, 73, 74, 75]])
        ds = Dataset(mesh, part, scheme, SpectrumTable(levels))
        pane = harmonics_pane(ds, "TOTAL", "OUT_OF_BAND", n_rows=2)
        assert [c.harmonic for c in pane.columns] == [1, 6]

    def test_unknown_sort_mode(self, tiny):
        with pytest.raises(DomainError):
            harmonics_pane(tiny, "TOTAL", "500", sort="loudness")


class TestDetailsPane:
    def test_bars_on_two_cell_region(self, tiny):
        pane = details_pane(tiny, "B", "500")
        scale = ColorScale()
        tok102, tok103 = map_color(102.0, scale), map_color(103.0, scale)
        assert pane.bar_all.stripes == ((tok102, 0.5), (tok103, 0.5))
        # both cells clear the derived per-cell limit by far
        assert pane.bar_threshold.stripes == ((tok102, 0.5), (tok103, 0.5))
        assert pane.bar_categories.stripes == (("UNACCEPT_0", 1.0),)
        assert pane.summary.n_cells == 2
        assert pane.summary.area_m2 == pytest.approx(2.0)
        assert pane.summary.limit_db == 70.0
        want = 10.0 * np.log10(10.0**10.2 + 10.0**10.3)
        assert pane.summary.integral_db == pytest.approx(want, abs=1e-9)
        assert pane.summary.excess_db == pytest.approx(want - 70.0, abs=1e-9)
        assert pane.summary.area_fractions["Unacceptable"] == 1.0

    def test_top_percent_pads_with_none(self, tiny):
        pane = details_pane(tiny, "B", "500", top_pct=50.0)
        tok103 = map_color(103.0, ColorScale())
        assert pane.bar_top.stripes == ((NONE_TOKEN, 0.5), (tok103, 0.5))

    def test_top_hundred_keeps_everything(self, tiny):
        pane = details_pane(tiny, "B", "500", top_pct=100.0)
        assert pane.bar_top.stripes == pane.bar_all.stripes

    def test_explicit_threshold(self, tiny):
        pane = details_pane(tiny, "TOTAL", "500", abs_threshold_db=102.5)
        kept = [t for t, _ in pane.bar_threshold.stripes]
        assert kept[0] == NONE_TOKEN
        assert pane.bar_threshold.stripes[0][1] == pytest.approx(0.75)
        assert pane.abs_threshold_db == 102.5

    def test_band_without_limit_is_undefined_in_bar4(self, tiny):
        pane = details_pane(tiny, "A", "100")
        assert pane.bar_categories.stripes == ((UNDEFINED_TOKEN, 1.0),)
        assert pane.summary.area_fractions == {"Undefined": 1.0}
        assert np.isnan(pane.summary.excess_db)
        # bar 1 still shows the distribution
        assert len(pane.bar_all.stripes) == 2

    def test_empty_band_fully_undefined(self, tiny):
        pane = details_pane(tiny, "A", "125")
        assert pane.bar_all.stripes == ((UNDEFINED_TOKEN, 1.0),)
        assert pane.bar_categories.stripes == ((UNDEFINED_TOKEN, 1.0),)

    def test_bad_pct_rejected(self, tiny):
        with pytest.raises(DomainError):
            details_pane(tiny, "A", "500", top_pct=150.0)

    def test_category_fractions_match_demo_style_mix(self, small_box):
        b, band = small_box.scheme.find_band("500", "third")
        pane = details_pane(small_box, "TOTAL", "500")
        fr = pane.summary.area_fractions
        assert sum(fr.values()) == pytest.approx(1.0, abs=1e-9)
        disc = small_box.discrete_limit_for(b)
        vals = small_box.cell_levels("third")[:, b]
        areas = small_box.mesh.areas
        want = float(areas[vals < disc].sum() / areas.sum())
        assert fr["Acceptable"] == pytest.approx(want, abs=1e-12)


class TestWeightedQuantile:
    def test_equal_weights_quartiles(self):
        vals = np.array([1.0, 2.0, 3.0, 4.0])
        areas = np.ones(4)
        assert weighted_quantile(vals, areas, 0.25) == 1.0
        assert weighted_quantile(vals, areas, 0.5) == 2.0
        assert weighted_quantile(vals, areas, 0.75) == 3.0
        assert weighted_quantile(vals, areas, 1.0) == 4.0

    def test_weights_pull_the_median(self):
        vals = np.array([1.0, 2.0, 10.0])
        areas = np.array([1.0, 1.0, 8.0])
        assert weighted_quantile(vals, areas, 0.5) == 10.0

    def test_matches_oracle_exactly(self):
        rng = np.random.default_rng(13)
        for _ in range(60):
            n = int(rng.integers(1, 40))
            vals = np.round(rng.uniform(50.0, 100.0, n), 1)
            areas = rng.uniform(0.05, 3.0, n)
            q = float(rng.uniform(0.0, 1.0))
            got = weighted_quantile(vals, areas, q)
            assert got == oracle_quantile(list(vals), list(areas), q)

    def test_bad_q_rejected(self):
        with pytest.raises(DomainError):
            weighted_quantile(np.array([1.0]), np.array([1.0]), 1.5)


class TestBoxplots:
    def test_single_plot_stats(self, tiny):
        (bp,) = boxplot_stats(tiny, ["500"])
        assert bp.band == "500"
        assert bp.region == "TOTAL"
        assert bp.n_cells == 4
        assert bp.q1 == 100.0
        assert bp.median == 101.0
        assert bp.q3 == 102.0
        assert bp.whisker_lo == 100.0
        assert bp.whisker_hi == 103.0

    def test_split_by_region(self, tiny):
        plots = boxplot_stats(tiny, ["500"], regions=["A", "B"], split=True)
        assert [p.region for p in plots] == ["A", "B"]
        assert plots[0].median == 100.0
        assert plots[1].median == 102.0

    def test_pooled_regions(self, tiny):
        (bp,) = boxplot_stats(tiny, ["500"], regions=["A", "B"])
        assert bp.region is None
        assert bp.n_cells == 4

    def test_histogram_conserves_area(self, small_box):
        (bp,) = boxplot_stats(small_box, ["500"], bins=16)
        assert bp.hist_areas.sum() == pytest.approx(bp.area_m2, rel=1e-9)
        assert len(bp.hist_edges) == 17

    def test_degenerate_distribution(self):
        from conftest import make_dataset

        levels = [[80.0] * 6 for _ in range(3)]
        ds = make_dataset(levels, [(0, "A"), (1, "A"), (2, "A")])
        (bp,) = boxplot_stats(ds, ["500"])
        assert bp.q1 == bp.median == bp.q3 == 80.0
        assert list(bp.hist_edges) == [80.0, 80.0]
        assert bp.hist_areas[0] == pytest.approx(3.0)

    def test_limit_stripes(self, tiny):
        (bp,) = boxplot_stats(tiny, ["500"])
        tokens = [t for t, _, _ in bp.limit_stripes]
        assert tokens == ["ACCEPT_0", "BORDER_0", "UNACCEPT_0"]
        disc = tiny.discrete_limit_for(tiny.scheme.find_band("500", "third")[0])
        assert bp.limit_stripes[0][2] == disc
        assert bp.limit_stripes[1] == ("BORDER_0", disc, disc + 6.0)
        assert bp.limit_stripes[2][1] == disc + 6.0
        (bp_u,) = boxplot_stats(tiny, ["100"])
        assert bp_u.limit_stripes == ((UNDEFINED_TOKEN, None, None),)

    def test_empty_band_rejected(self, tiny):
        with pytest.raises(DomainError):
            boxplot_stats(tiny, ["125"])


class TestMatrixOverview:
    def test_grid_shape_and_heights(self, tiny):
        mo = matrix_overview(tiny)
        assert [r.region for r in mo.rows] == ["TOTAL", "A", "B"]
        assert len(mo.bands) == len(tiny.scheme.thirds)
        assert mo.rows[0].height_fraction == 1.0
        assert mo.rows[1].height_fraction == pytest.approx(0.5)
        assert all(len(r.cells) == len(mo.bands) for r in mo.rows)

    def test_limits_mode_verdicts(self, tiny):
        mo = matrix_overview(tiny, mode="limits")
        b500 = next(i for i, b in enumerate(mo.bands) if b.nominal == "500")
        cell = mo.rows[0].cells[b500]
        assert cell.token.startswith("UNACCEPT")
        assert cell.excess_db == pytest.approx(cell.level_db - 70.0, abs=1e-12)
        b100 = next(i for i, b in enumerate(mo.bands) if b.nominal == "100")
        assert mo.rows[0].cells[b100].token == UNDEFINED_TOKEN

    def test_two_tone_mode(self, tiny):
        mo = matrix_overview(tiny, mode="two-tone")
        b500 = next(i for i, b in enumerate(mo.bands) if b.nominal == "500")
        cell = mo.rows[2].cells[b500]
        assert sum(f for _, f in cell.stripes.stripes) == pytest.approx(1.0, abs=1e-9)

    def test_discrete_limits_mode_ranks_cells(self, tiny):
        mo = matrix_overview(tiny, mode="discrete-limits", n_rows=4)
        b500 = next(i for i, b in enumerate(mo.bands) if b.nominal == "500")
        cell = mo.rows[0].cells[b500]
        assert list(cell.row_values) == [103.0, 102.0, 101.0, 100.0]
        assert all(t.startswith("UNACCEPT") for t in cell.tokens)
        b100 = next(i for i, b in enumerate(mo.bands) if b.nominal == "100")
        assert mo.rows[0].cells[b100].tokens == (UNDEFINED_TOKEN,) * 4

    def test_raw_mode_needs_no_limits(self, tiny):
        mo = matrix_overview(tiny, mode="raw", n_rows=2)
        b100 = next(i for i, b in enumerate(mo.bands) if b.nominal == "100")
        cell = mo.rows[0].cells[b100]
        assert all(t.startswith("DIVERGE") for t in cell.tokens)

    def test_combined_mode_nests_both(self, tiny):
        mo = matrix_overview(tiny, mode="combined", n_rows=2)
        b500 = next(i for i, b in enumerate(mo.bands) if b.nominal == "500")
        cell = mo.rows[0].cells[b500]
        assert cell.two_tone.stripes.stripes
        assert len(cell.strip.row_values) == 2

    def test_octave_kind(self, tiny):
        mo = matrix_overview(tiny, kind="octave", mode="raw", n_rows=2)
        assert len(mo.bands) == len(tiny.scheme.octaves)

    def test_unknown_mode_rejected(self, tiny):
        with pytest.raises(DomainError):
            matrix_overview(tiny, mode="heat")
