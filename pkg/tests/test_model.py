import numpy as np
import pytest

from nvhdrill.errors import DomainError, UnknownEntityError
from nvhdrill.model import (
    Dataset,
    FrequencyScheme,
    LimitCurve,
    RegionPartition,
    SpectrumTable,
    SurfaceMesh,
    cell_geometry,
    nominal_label,
    validate,
)

from conftest import make_dataset, strip_mesh


class TestGeometry:
    def test_unit_quad(self):
        verts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=float)
        areas, centroids = cell_geometry(verts, [(0, 1, 2, 3)])
        assert areas[0] == pytest.approx(1.0, abs=1e-12)
        assert centroids[0] == pytest.approx([0.5, 0.5, 0.0], abs=1e-12)

    def test_right_triangle(self):
        verts = np.array([[0, 0, 0], [2, 0, 0], [0, 2, 0]], dtype=float)
        areas, centroids = cell_geometry(verts, [(0, 1, 2)])
        assert areas[0] == pytest.approx(2.0, abs=1e-12)
        assert centroids[0] == pytest.approx([2 / 3, 2 / 3, 0.0], abs=1e-12)

    def test_non_planar_quad_splits_into_triangles(self):
        verts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 1], [0, 1, 0]], dtype=float)
        areas, _ = cell_geometry(verts, [(0, 1, 2, 3)])
        tri_a, _ = cell_geometry(verts, [(0, 1, 2)])
        tri_b, _ = cell_geometry(verts, [(0, 2, 3)])
        assert areas[0] == pytest.approx(tri_a[0] + tri_b[0], abs=1e-12)

    def test_degenerate_cell_flagged(self):
        verts = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0]], dtype=float)
        mesh = SurfaceMesh.build(verts, [(0, 1, 2), (0, 1, 3)])
        assert mesh.degenerate_cells == {0}
        assert any("degenerate" in w for w in mesh.warnings)


class TestMesh:
    def test_strip_adjacency_is_a_chain(self):
        mesh = strip_mesh(4)
        assert mesh.adjacency[0] == (1,)
        assert mesh.adjacency[1] == (0, 2)
        assert mesh.adjacency[3] == (2,)

    def test_adjacency_symmetric(self, small_box):
        adj = small_box.mesh.adjacency
        for c, nbrs in enumerate(adj):
            assert c not in nbrs
            for n in nbrs:
                assert c in adj[n]

    def test_rejects_bad_cells(self):
        verts = np.zeros((3, 3))
        with pytest.raises(DomainError):
            SurfaceMesh.build(verts, [(0, 1)])
        with pytest.raises(DomainError):
            SurfaceMesh.build(verts, [(0, 1, 7)])

    def test_nonmanifold_edge_warns(self):
        verts = np.array(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, -1, 0]], dtype=float
        )
        mesh = SurfaceMesh.build(verts, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
        assert any("edge" in w for w in mesh.warnings)
        # all three still count as neighbors of each other
        assert set(mesh.adjacency[0]) == {1, 2}


class TestPartition:
    def test_first_assignment_wins(self):
        part = RegionPartition.from_pairs([(0, "A"), (0, "B"), (1, "B")], 2)
        assert part.region_of(0) == "A"
        assert len(part.conflicts) == 1

    def test_unassigned_tracked(self):
        part = RegionPartition.from_pairs([(0, "A")], 3)
        assert part.cell_region[1] == -1
        assert part.cell_region[2] == -1

    def test_total_name_reserved(self):
        with pytest.raises(DomainError):
            RegionPartition.from_pairs([(0, "TOTAL")], 1)

    def test_row_order_is_first_appearance(self):
        part = RegionPartition.from_pairs([(0, "Z"), (1, "A"), (2, "Z")], 3)
        assert part.names == ("Z", "A")
        assert part.row_names() == ("TOTAL", "Z", "A")


class TestFrequencyScheme:
    def test_demo_scale_band_counts(self):
        freqs = (2000.0 / 60.0) * np.arange(1, 340)
        scheme = FrequencyScheme.build(2000.0 / 60.0, freqs)
        assert len(scheme.thirds) == 26
        assert len(scheme.octaves) == 9
        assert [b.nominal for b in scheme.thirds[:4]] == ["31.5", "40", "50", "63"]
        assert scheme.thirds[-1].nominal == "10000"

    def test_nominal_labels_follow_renard_series(self):
        assert nominal_label(31.25) == "31.5"
        assert nominal_label(99.21) == "100"
        assert nominal_label(630.0) == "630"
        assert nominal_label(3174.8) == "3150"
        assert nominal_label(5039.7) == "5000"

    def test_band_edges_tile_exactly(self):
        freqs = 100.0 * np.arange(1, 13)
        scheme = FrequencyScheme.build(100.0, freqs)
        for a, b in zip(scheme.thirds, scheme.thirds[1:]):
            assert a.hi_hz == b.lo_hz
        for a, b in zip(scheme.octaves, scheme.octaves[1:]):
            assert a.hi_hz == b.lo_hz

    def test_octave_contains_its_thirds(self):
        freqs = 50.0 * np.arange(1, 40)
        scheme = FrequencyScheme.build(50.0, freqs)
        for h in range(scheme.n_harmonics):
            k = scheme.harmonic_third[h]
            m = scheme.harmonic_octave[h]
            assert (k < 0) == (m < 0)
            if k >= 0:
                third = scheme.thirds[k]
                octave = scheme.octaves[m]
                assert octave.lo_hz <= third.center_hz < octave.hi_hz

    def test_find_band_by_nominal_and_frequency(self, tiny):
        scheme = tiny.scheme
        idx_by_name, band = scheme.find_band("500", "third")
        idx_by_freq, _ = scheme.find_band(505.0, "third")
        assert idx_by_name == idx_by_freq
        assert band.nominal == "500"
        assert band.lo_hz <= 500.0 < band.hi_hz
        # numeric strings without a nominal match fall back to containment
        assert scheme.find_band("499", "third")[1].nominal == "500"
        with pytest.raises(UnknownEntityError):
            scheme.find_band("front-left", "third")
        with pytest.raises(UnknownEntityError):
            scheme.find_band(1e6, "third")

    def test_tiny_harmonic_band_mapping(self, tiny):
        got = [tiny.scheme.thirds[k].nominal for k in tiny.scheme.harmonic_third]
        assert got == ["100", "200", "315", "400", "500", "630"]

    def test_out_of_band_with_explicit_range(self):
        freqs = 100.0 * np.arange(1, 7)
        scheme = FrequencyScheme.build(100.0, freqs, third_k_range=(-7, -3))
        out = scheme.out_of_band_harmonics()
        # 100 Hz sits below band k=-7, 630 Hz above k=-3
        assert list(out) == [0, 5]
        assert scheme.harmonic_third[0] == -1

    def test_harmonic_number_bounds(self, tiny):
        assert tiny.scheme.harmonic_number(1) == 0
        assert tiny.scheme.harmonic_number(6) == 5
        with pytest.raises(UnknownEntityError):
            tiny.scheme.harmonic_number(0)
        with pytest.raises(UnknownEntityError):
            tiny.scheme.harmonic_number(7)

    def test_rejects_bad_fundamental(self):
        with pytest.raises(DomainError):
            FrequencyScheme.build(0.0, [100.0])


class TestLimitCurve:
    def test_binds_by_containment(self, tiny):
        limits, problems = tiny.limits.bind(tiny.scheme)
        assert problems == ()
        b500, _ = tiny.scheme.find_band("500", "third")
        b630, _ = tiny.scheme.find_band("630", "third")
        assert limits[b500] == 70.0
        assert limits[b630] == 72.0
        undefined = np.isnan(limits)
        assert undefined.sum() == len(tiny.scheme.thirds) - 2

    def test_duplicate_and_unmatched_entries_reported(self, tiny):
        curve = LimitCurve(entries=((500.0, 70.0), (505.0, 71.0), (9e9, 60.0)))
        _, problems = curve.bind(tiny.scheme)
        assert len(problems) == 2
        assert any("duplicate" in p for p in problems)
        assert any("matches no band" in p for p in problems)


class TestDataset:
    def test_region_cells_and_total(self, tiny):
        assert list(tiny.region_cells("A")) == [0, 1]
        assert list(tiny.region_cells("B")) == [2, 3]
        assert list(tiny.region_cells("TOTAL")) == [0, 1, 2, 3]
        with pytest.raises(UnknownEntityError):
            tiny.region_cells("C")

    def test_row_names(self, tiny):
        assert tiny.row_names == ("TOTAL", "A", "B")

    def test_region_areas(self, tiny):
        assert tiny.region_areas["A"] == pytest.approx(2.0, abs=1e-12)
        assert tiny.region_areas["TOTAL"] == pytest.approx(4.0, abs=1e-12)

    def test_shape_mismatch_rejected(self, tiny):
        with pytest.raises(DomainError):
            Dataset(
                tiny.mesh,
                tiny.partition,
                tiny.scheme,
                SpectrumTable(np.zeros((4, 99))),
            )

    def test_content_hash_tracks_levels(self, tiny):
        levels = tiny.spectra.levels_db.copy()
        levels[0, 0] += 1.0
        pairs = [(0, "A"), (1, "A"), (2, "B"), (3, "B")]
        other = make_dataset(levels, pairs, limits=tiny.limits)
        same = make_dataset(tiny.spectra.levels_db, pairs, limits=tiny.limits)
        assert other.content_hash != tiny.content_hash
        assert same.content_hash == tiny.content_hash

    def test_speed_defaults_to_fundamental(self, tiny):
        assert tiny.speed_rpm == pytest.approx(100.0 * 60.0)


class TestValidate:
    def test_clean_dataset(self, small_box):
        assert validate(small_box) == []

    def test_unassigned_cells_reported(self):
        levels = [[60.0] * 6 for _ in range(4)]
        ds = make_dataset(levels, [(0, "A"), (1, "A"), (2, "B")])
        assert any("missing from the region partition" in p for p in validate(ds))

    def test_non_finite_levels_reported(self):
        levels = np.full((4, 6), 60.0)
        levels[1, 2] = np.nan
        ds = make_dataset(levels, [(0, "A"), (1, "A"), (2, "B"), (3, "B")])
        assert any("finite" in p for p in validate(ds))

    def test_harmonic_grid_mismatch_reported(self):
        freqs = 100.0 * np.arange(1, 7)
        freqs[3] += 2.0
        scheme = FrequencyScheme.build(100.0, freqs)
        mesh = strip_mesh(2)
        part = RegionPartition.from_pairs([(0, "A"), (1, "A")], 2)
        ds = Dataset(mesh, part, scheme, SpectrumTable(np.full((2, 6), 60.0)))
        assert any("multiple" in p for p in validate(ds))

    def test_limit_problems_reported(self, tiny):
        curve = LimitCurve(entries=((500.0, 70.0), (500.1, 71.0)))
        pairs = [(0, "A"), (1, "A"), (2, "B"), (3, "B")]
        ds = make_dataset(tiny.spectra.levels_db, pairs, limits=curve)
        assert any("duplicate" in p for p in validate(ds))
