"""Core data model: surface mesh, region partition, frequency scheme, spectra.

Everything downstream (aggregation, views, the HTTP service) works on the
:class:`Dataset` aggregate defined here. Instances are treated as immutable;
all derived tables (cell areas, adjacency, per-band level tables, region
integral levels, bound limit arrays) are computed once at construction.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnknownEntityError

#: Cells with area at or below this threshold count as degenerate and are
#: excluded from aggregation.
EPS_AREA = 1e-12

#: Reserved name for the union of all regions (always the first matrix row).
TOTAL = "TOTAL"

#: Preferred-number mantissas used for nominal band names (R10 series).
_R10 = (1.0, 1.25, 1.6, 2.0, 2.5, 3.15, 4.0, 5.0, 6.3, 8.0, 10.0)

_THIRD = "third"
_OCTAVE = "octave"
_HARMONIC = "harmonic"
BAND_KINDS = (_THIRD, _OCTAVE)
LEVEL_KINDS = (_HARMONIC, _THIRD, _OCTAVE)

#: Pseudo band name for harmonics that fall outside every defined band.
OUT_OF_BAND = "OUT_OF_BAND"


# ---------------------------------------------------------------------------
# mesh geometry


def cell_geometry(vertices: np.ndarray, cells) -> tuple[np.ndarray, np.ndarray]:
    """Compute per-cell area and centroid.

    Parameters
    ----------
    vertices : ndarray, shape (V, 3)
        Vertex coordinates in metres.
    cells : sequence of index tuples
        Each of length 3 or 4. Quads are split into the triangles
        (0, 1, 2) and (0, 2, 3); the split also defines the centroid as the
        area-weighted mean of the two triangle centroids, so mildly
        non-planar quads are fine.

    Returns
    -------
    areas : ndarray, shape (C,)
    centroids : ndarray, shape (C, 3)
    """
    verts = np.asarray(vertices, dtype=np.float64)
    n = len(cells)
    areas = np.zeros(n, dtype=np.float64)
    centroids = np.zeros((n, 3), dtype=np.float64)

    tri_rows = [i for i, c in enumerate(cells) if len(c) == 3]
    quad_rows = [i for i, c in enumerate(cells) if len(c) == 4]

    if tri_rows:
        idx = np.asarray([cells[i] for i in tri_rows], dtype=np.intp)
        a, b, c = verts[idx[:, 0]], verts[idx[:, 1]], verts[idx[:, 2]]
        cross = np.cross(b - a, c - a)
        areas[tri_rows] = 0.5 * np.linalg.norm(cross, axis=1)
        centroids[tri_rows] = (a + b + c) / 3.0

    if quad_rows:
        idx = np.asarray([cells[i] for i in quad_rows], dtype=np.intp)
        a, b, c, d = (verts[idx[:, j]] for j in range(4))
        a1 = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
        a2 = 0.5 * np.linalg.norm(np.cross(c - a, d - a), axis=1)
        total = a1 + a2
        c1 = (a + b + c) / 3.0
        c2 = (a + c + d) / 3.0
        # Degenerate quads fall back to the plain vertex mean.
        safe = np.where(total > 0.0, total, 1.0)[:, None]
        weighted = (a1[:, None] * c1 + a2[:, None] * c2) / safe
        fallback = (a + b + c + d) / 4.0
        areas[quad_rows] = total
        centroids[quad_rows] = np.where(total[:, None] > 0.0, weighted, fallback)

    return areas, centroids


def build_adjacency(cells) -> tuple[tuple[tuple[int, ...], ...], tuple[str, ...]]:
    """Cell adjacency via shared (unordered) vertex-pair edges.

    Returns the neighbour tuple per cell (sorted, no self-loops) and a list
    of warnings for non-manifold edges (more than two incident cells); those
    edges still make every incident pair adjacent.
    """
    edge_cells: dict[tuple[int, int], list[int]] = {}
    for cid, cell in enumerate(cells):
        m = len(cell)
        for j in range(m):
            a, b = cell[j], cell[(j + 1) % m]
            key = (a, b) if a < b else (b, a)
            edge_cells.setdefault(key, []).append(cid)

    neighbours: list[set[int]] = [set() for _ in cells]
    warnings: list[str] = []
    for (a, b), incident in edge_cells.items():
        if len(incident) > 2:
            warnings.append(
                f"non-manifold edge ({a},{b}) shared by {len(incident)} cells"
            )
        for i in range(len(incident)):
            for j in range(i + 1, len(incident)):
                if incident[i] != incident[j]:
                    neighbours[incident[i]].add(incident[j])
                    neighbours[incident[j]].add(incident[i])

    return tuple(tuple(sorted(s)) for s in neighbours), tuple(warnings)


@dataclass(frozen=True)
class SurfaceMesh:
    """Triangle/quad surface mesh with derived geometry.

    Build instances through :meth:`build`, which computes areas, centroids
    and adjacency and records degenerate cells (area <= ``EPS_AREA``).
    """

    vertices: np.ndarray
    cells: tuple[tuple[int, ...], ...]
    areas: np.ndarray
    centroids: np.ndarray
    adjacency: tuple[tuple[int, ...], ...]
    degenerate_cells: frozenset[int]
    warnings: tuple[str, ...]

    @classmethod
    def build(cls, vertices, cells) -> "SurfaceMesh":
        verts = np.asarray(vertices, dtype=np.float64)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise DomainError(f"vertex array must be (V, 3), got {verts.shape}")
        cell_tuples = []
        for cid, cell in enumerate(cells):
            tup = tuple(int(v) for v in cell)
            if len(tup) not in (3, 4):
                raise DomainError(f"cell {cid} has {len(tup)} vertices, want 3 or 4")
            for v in tup:
                if not 0 <= v < len(verts):
                    raise DomainError(f"cell {cid} references missing vertex {v}")
            cell_tuples.append(tup)

        areas, centroids = cell_geometry(verts, cell_tuples)
        adjacency, warnings = build_adjacency(cell_tuples)
        degenerate = frozenset(int(i) for i in np.nonzero(areas <= EPS_AREA)[0])
        warn = list(warnings)
        for cid in sorted(degenerate):
            warn.append(f"cell {cid} is degenerate (area <= {EPS_AREA}); excluded from analysis")
        return cls(
            vertices=verts,
            cells=tuple(cell_tuples),
            areas=areas,
            centroids=centroids,
            adjacency=adjacency,
            degenerate_cells=degenerate,
            warnings=tuple(warn),
        )

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_cells(self) -> int:
        return len(self.cells)


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class RegionPartition:
    """Disjoint, exhaustive assignment of cells to named regions.

    ``names`` is the matrix row order (first appearance in the source data);
    the implicit union region ``TOTAL`` always precedes it. Cells that were
    never assigned carry index -1 and surface as validation violations.
    """

    names: tuple[str, ...]
    cell_region: np.ndarray  # (C,) index into names, -1 = unassigned
    conflicts: tuple[str, ...] = ()

    @classmethod
    def from_pairs(cls, pairs, n_cells: int) -> "RegionPartition":
        """Build from (cell_id, region_name) pairs; first assignment wins."""
        names: list[str] = []
        index: dict[str, int] = {}
        cell_region = np.full(n_cells, -1, dtype=np.intp)
        conflicts: list[str] = []
        for cell_id, name in pairs:
            cid = int(cell_id)
            if name == TOTAL:
                raise DomainError(f"region name {TOTAL!r} is reserved for the union row")
            if not 0 <= cid < n_cells:
                raise DomainError(f"region assignment references missing cell {cid}")
            if name not in index:
                index[name] = len(names)
                names.append(name)
            if cell_region[cid] != -1:
                if cell_region[cid] != index[name]:
                    conflicts.append(
                        f"cell {cid} assigned to both {names[cell_region[cid]]!r} and {name!r}"
                    )
                continue
            cell_region[cid] = index[name]
        return cls(tuple(names), cell_region, tuple(conflicts))

    @property
    def n_cells(self) -> int:
        return len(self.cell_region)

    def row_names(self) -> tuple[str, ...]:
        return (TOTAL, *self.names)

    def cells_of(self, name: str) -> np.ndarray:
        """Sorted cell ids of a region; ``TOTAL`` yields every cell."""
        if name == TOTAL:
            return np.arange(self.n_cells, dtype=np.intp)
        try:
            idx = self.names.index(name)
        except ValueError:
            raise UnknownEntityError(f"unknown region {name!r}") from None
        return np.nonzero(self.cell_region == idx)[0]

    def region_of(self, cell_id: int) -> str | None:
        idx = int(self.cell_region[cell_id])
        return None if idx < 0 else self.names[idx]


# ---------------------------------------------------------------------------
# frequency scheme


def nominal_label(value_hz: float) -> str:
    """Nominal (preferred-number) name for a band centre, e.g. 629.96 -> '630'."""
    if value_hz <= 0.0:
        raise DomainError(f"band centre must be positive, got {value_hz}")
    decade = math.floor(math.log10(value_hz))
    mantissa = value_hz / 10.0**decade
    nearest = min(_R10, key=lambda m: abs(m - mantissa))
    return f"{nearest * 10.0 ** decade:g}"


@dataclass(frozen=True)
class Band:
    """One fractional-octave band with exact base-2 edges."""

    kind: str  # "third" | "octave"
    k: int  # exponent index: centre = 1000 * 2**(k/3) (third) or 1000 * 2**k
    center_hz: float
    lo_hz: float
    hi_hz: float
    nominal: str

    @property
    def label(self) -> str:
        return f"{self.nominal} Hz"


def _third_band(k: int) -> Band:
    center = 1000.0 * 2.0 ** (k / 3.0)
    return Band(
        kind=_THIRD,
        k=k,
        center_hz=center,
        lo_hz=1000.0 * 2.0 ** ((2 * k - 1) / 6.0),
        hi_hz=1000.0 * 2.0 ** ((2 * k + 1) / 6.0),
        nominal=nominal_label(center),
    )


def _octave_band(m: int) -> Band:
    center = 1000.0 * 2.0**m
    return Band(
        kind=_OCTAVE,
        k=m,
        center_hz=center,
        lo_hz=1000.0 * 2.0 ** (m - 0.5),
        hi_hz=1000.0 * 2.0 ** (m + 0.5),
        nominal=nominal_label(center),
    )


def _third_index(freq_hz: float) -> int:
    return math.floor(3.0 * math.log2(freq_hz / 1000.0) + 0.5)


@dataclass(frozen=True)
class FrequencyScheme:
    """Harmonic frequencies plus the 1/3-octave and octave bands over them.

    Harmonics are integer multiples of ``fundamental_hz`` (the engine speed
    expressed in Hz). Band edges follow the exact base-2 convention, so a
    1/3-octave band with index k spans
    ``1000 * 2**((2k-1)/6) .. 1000 * 2**((2k+1)/6)`` and three consecutive
    bands tile one octave exactly. A harmonic's octave is the octave that
    contains its 1/3-octave band, which keeps the two aggregation levels
    consistent. Harmonics outside every defined band map to index -1, the
    out-of-band bucket: visible in harmonic views, excluded from band
    aggregates.
    """

    fundamental_hz: float
    harmonics_hz: np.ndarray
    thirds: tuple[Band, ...]
    octaves: tuple[Band, ...]
    harmonic_third: np.ndarray  # (H,) index into thirds, -1 = out of band
    harmonic_octave: np.ndarray  # (H,) index into octaves, -1 = out of band

    @classmethod
    def build(
        cls,
        fundamental_hz: float,
        harmonics_hz,
        third_k_range: tuple[int, int] | None = None,
    ) -> "FrequencyScheme":
        """Derive the band structure for a harmonic series.

        Parameters
        ----------
        fundamental_hz : float
            Engine speed in Hz; must be positive.
        harmonics_hz : array-like
            Ascending harmonic frequencies.
        third_k_range : (int, int), optional
            Explicit inclusive range of 1/3-octave exponent indices. By
            default the range spans every harmonic, leaving the out-of-band
            bucket empty.
        """
        if fundamental_hz <= 0.0:
            raise DomainError(f"fundamental must be positive, got {fundamental_hz}")
        freqs = np.asarray(harmonics_hz, dtype=np.float64)
        if freqs.ndim != 1 or len(freqs) == 0:
            raise DomainError("harmonic frequency list must be non-empty and 1-d")
        if np.any(freqs <= 0.0) or np.any(np.diff(freqs) <= 0.0):
            raise DomainError("harmonic frequencies must be positive and strictly ascending")

        ks = np.array([_third_index(f) for f in freqs], dtype=np.intp)
        if third_k_range is None:
            k_lo, k_hi = int(ks.min()), int(ks.max())
        else:
            k_lo, k_hi = int(third_k_range[0]), int(third_k_range[1])
            if k_lo > k_hi:
                raise DomainError(f"empty band range {third_k_range}")

        thirds = tuple(_third_band(k) for k in range(k_lo, k_hi + 1))
        m_lo, m_hi = (k_lo + 1) // 3, (k_hi + 1) // 3
        octaves = tuple(_octave_band(m) for m in range(m_lo, m_hi + 1))

        in_range = (ks >= k_lo) & (ks <= k_hi)
        harmonic_third = np.where(in_range, ks - k_lo, -1)
        ms = (ks + 1) // 3
        harmonic_octave = np.where(in_range, ms - m_lo, -1)

        return cls(
            fundamental_hz=float(fundamental_hz),
            harmonics_hz=freqs,
            thirds=thirds,
            octaves=octaves,
            harmonic_third=harmonic_third.astype(np.intp),
            harmonic_octave=harmonic_octave.astype(np.intp),
        )

    @property
    def n_harmonics(self) -> int:
        return len(self.harmonics_hz)

    def bands(self, kind: str) -> tuple[Band, ...]:
        if kind == _THIRD:
            return self.thirds
        if kind == _OCTAVE:
            return self.octaves
        raise DomainError(f"unknown band kind {kind!r}")

    def band_index(self, kind: str) -> np.ndarray:
        """Per-harmonic band index for a kind (-1 where out of band)."""
        return self.harmonic_third if kind == _THIRD else self.harmonic_octave

    def find_band(self, ref, kind: str = _THIRD) -> tuple[int, Band]:
        """Locate a band by nominal name or by any frequency inside its edges.

        Raises :class:`UnknownEntityError` when nothing matches; this is the
        lookup behind every band parameter of the external interfaces.
        """
        bands = self.bands(kind)
        if isinstance(ref, str):
            for i, band in enumerate(bands):
                if band.nominal == ref:
                    return i, band
            try:
                value = float(ref)
            except ValueError:
                raise UnknownEntityError(f"unknown {kind} band {ref!r}") from None
        else:
            value = float(ref)
        for i, band in enumerate(bands):
            if band.lo_hz <= value < band.hi_hz:
                return i, band
        raise UnknownEntityError(f"no {kind} band contains {value:g} Hz")

    def harmonics_in(self, kind: str, band_idx: int) -> np.ndarray:
        """0-based harmonic indices whose band (of `kind`) is `band_idx`."""
        return np.nonzero(self.band_index(kind) == band_idx)[0]

    def out_of_band_harmonics(self) -> np.ndarray:
        return np.nonzero(self.harmonic_third == -1)[0]

    def harmonic_number(self, n: int) -> int:
        """Validate a 1-based harmonic id and return its 0-based index."""
        if not 1 <= int(n) <= self.n_harmonics:
            raise UnknownEntityError(f"unknown harmonic h{n}")
        return int(n) - 1


# ---------------------------------------------------------------------------
# spectra and limits


@dataclass(frozen=True)
class SpectrumTable:
    """Per-cell harmonic velocity levels in dB.

    ``levels_db[c, h]`` is the discrete velocity level of cell ``c`` at the
    1-based harmonic ``h+1``. ``reference_velocity`` (m/s) anchors dB to
    physical velocity; ``reference_area`` (m^2) anchors the integral level.
    """

    levels_db: np.ndarray
    reference_velocity: float = 5e-8
    reference_area: float = 1.0


@dataclass(frozen=True)
class LimitCurve:
    """Integral acceptance limits keyed by band centre frequency.

    Entries bind to the 1/3-octave band whose edge interval contains the
    given centre, so nominal centres (630, 3150, ...) resolve to the exact
    base-2 bands. Bands without an entry stay unclassified. The borderline
    category spans ``[limit, limit + borderline_width_db)`` above each limit.
    """

    entries: tuple[tuple[float, float], ...] = ()
    borderline_width_db: float = 6.0

    def bind(self, scheme: FrequencyScheme) -> tuple[np.ndarray, tuple[str, ...]]:
        """Per-third-band integral limit array (NaN = undefined) + violations."""
        limits = np.full(len(scheme.thirds), np.nan)
        problems: list[str] = []
        for center, value in self.entries:
            try:
                idx, band = scheme.find_band(float(center), _THIRD)
            except UnknownEntityError:
                problems.append(f"limit entry at {center:g} Hz matches no band")
                continue
            if not np.isnan(limits[idx]):
                problems.append(f"duplicate limit entry for band {band.nominal}")
                continue
            limits[idx] = value
        return limits, tuple(problems)


# ---------------------------------------------------------------------------
# dataset aggregate


class Dataset:
    """Everything one analysis session works on.

    Construction wires the parts together and eagerly computes the derived
    tables every view needs: active-cell mask, per-region cell lists and
    areas, per-cell band level tables, region integral levels per harmonic
    and band, bound limit arrays, and a content hash that the service embeds
    in every response.
    """

    def __init__(
        self,
        mesh: SurfaceMesh,
        partition: RegionPartition,
        scheme: FrequencyScheme,
        spectra: SpectrumTable,
        limits: LimitCurve | None = None,
        speed_rpm: float | None = None,
        label: str = "",
    ):
        if partition.n_cells != mesh.n_cells:
            raise DomainError(
                f"partition covers {partition.n_cells} cells, mesh has {mesh.n_cells}"
            )
        if spectra.levels_db.shape != (mesh.n_cells, scheme.n_harmonics):
            raise DomainError(
                f"level table shape {spectra.levels_db.shape} does not match "
                f"{mesh.n_cells} cells x {scheme.n_harmonics} harmonics"
            )
        self.mesh = mesh
        self.partition = partition
        self.scheme = scheme
        self.spectra = spectra
        self.limits = limits if limits is not None else LimitCurve()
        self.speed_rpm = float(speed_rpm) if speed_rpm is not None else scheme.fundamental_hz * 60.0
        self.label = label

        self.active = mesh.areas > EPS_AREA
        self.row_names: tuple[str, ...] = partition.row_names()
        self._row_index = {name: i for i, name in enumerate(self.row_names)}
        self._build_caches()
        self.content_hash = self._hash()

    # -- construction ------------------------------------------------------

    def _build_caches(self) -> None:
        from . import acoustics  # deferred: acoustics imports model types

        mesh, scheme = self.mesh, self.scheme
        self._region_cells: dict[str, np.ndarray] = {}
        for name in self.row_names:
            ids = self.partition.cells_of(name)
            self._region_cells[name] = ids[self.active[ids]]

        self.region_areas = {
            name: float(mesh.areas[ids].sum()) for name, ids in self._region_cells.items()
        }
        self.area_total = self.region_areas[TOTAL]

        self._cell_levels = {_HARMONIC: self.spectra.levels_db}
        for kind in BAND_KINDS:
            self._cell_levels[kind] = acoustics.band_levels(self.spectra, scheme, kind)

        # Region rows x (harmonic | band) integral level tables.
        weights = np.zeros((len(self.row_names), mesh.n_cells))
        for row, name in enumerate(self.row_names):
            ids = self._region_cells[name]
            weights[row, ids] = mesh.areas[ids]
        self._integral = {
            kind: acoustics.integral_table(weights, self._cell_levels[kind], self.spectra.reference_area)
            for kind in LEVEL_KINDS
        }

        self.integral_limit_db, self._limit_problems = self.limits.bind(scheme)
        self.discrete_limit_db = acoustics.derive_discrete_limits(
            self.integral_limit_db, self.area_total, self.spectra.reference_area
        )

    def _hash(self) -> str:
        h = hashlib.sha256()

        def arr(a: np.ndarray) -> None:
            h.update(np.ascontiguousarray(a).tobytes())

        arr(self.mesh.vertices)
        for cell in self.mesh.cells:
            h.update(len(cell).to_bytes(1, "little"))
            h.update(np.asarray(cell, dtype=np.int64).tobytes())
        h.update("|".join(self.partition.names).encode())
        arr(self.partition.cell_region.astype(np.int64))
        arr(self.scheme.harmonics_hz)
        arr(self.spectra.levels_db)
        for center, value in self.limits.entries:
            h.update(f"{center!r}:{value!r};".encode())
        meta = (
            f"{self.scheme.fundamental_hz!r}|{self.limits.borderline_width_db!r}|"
            f"{self.spectra.reference_velocity!r}|{self.spectra.reference_area!r}|"
            f"{self.speed_rpm!r}|{self.label}"
        )
        h.update(meta.encode())
        return h.hexdigest()

    # -- lookups -----------------------------------------------------------

    def region_cells(self, name: str) -> np.ndarray:
        """Sorted active cell ids of a region (TOTAL = whole surface)."""
        try:
            return self._region_cells[name]
        except KeyError:
            raise UnknownEntityError(f"unknown region {name!r}") from None

    def row_index(self, name: str) -> int:
        try:
            return self._row_index[name]
        except KeyError:
            raise UnknownEntityError(f"unknown region {name!r}") from None

    def cell_levels(self, kind: str) -> np.ndarray:
        """(C, H) harmonic levels or (C, B) band levels; NaN = empty band."""
        try:
            return self._cell_levels[kind]
        except KeyError:
            raise DomainError(f"unknown level kind {kind!r}") from None

    def integral_levels(self, kind: str) -> np.ndarray:
        """Region rows (TOTAL first) x columns of `kind`; NaN = empty band."""
        try:
            return self._integral[kind]
        except KeyError:
            raise DomainError(f"unknown level kind {kind!r}") from None

    def integral_limit_for(self, band_idx: int) -> float:
        """Integral acceptance limit of a 1/3-octave band (NaN = undefined)."""
        return float(self.integral_limit_db[band_idx])

    def discrete_limit_for(self, band_idx: int) -> float:
        return float(self.discrete_limit_db[band_idx])


# ---------------------------------------------------------------------------
# validation


def validate(dataset: Dataset) -> list[str]:
    """Collect consistency violations; an empty list means the dataset is sound.

    Nothing raises here: loaders accept structurally parseable data and this
    reports everything else, one message per finding.
    """
    out: list[str] = []
    mesh = dataset.mesh

    for cid, cell in enumerate(mesh.cells):
        if len(set(cell)) != len(cell):
            out.append(f"cell {cid} repeats a vertex")
    for cid in sorted(mesh.degenerate_cells):
        out.append(f"cell {cid} is degenerate (area <= {EPS_AREA} m^2)")

    for cid, nbrs in enumerate(mesh.adjacency):
        for n in nbrs:
            if cid == n:
                out.append(f"cell {cid} adjacent to itself")
            elif cid not in mesh.adjacency[n]:
                out.append(f"adjacency not symmetric for pair ({cid},{n})")

    part = dataset.partition
    unassigned = np.nonzero(part.cell_region < 0)[0]
    for cid in unassigned:
        out.append(f"cell {int(cid)} missing from the region partition")
    out.extend(part.conflicts)

    scheme = dataset.scheme
    for n, f in enumerate(scheme.harmonics_hz, start=1):
        expected = scheme.fundamental_hz * n
        if abs(f - expected) > 1e-6 * expected:
            out.append(
                f"harmonic h{n} at {f:g} Hz is not multiple {n} of {scheme.fundamental_hz:g} Hz"
            )
    for kind in BAND_KINDS:
        bands = scheme.bands(kind)
        for prev, cur in zip(bands, bands[1:]):
            if prev.hi_hz > cur.lo_hz + 1e-9 * cur.lo_hz:
                out.append(f"{kind} bands {prev.nominal} and {cur.nominal} overlap")
        idx = scheme.band_index(kind)
        for h, b in enumerate(idx):
            if b >= 0:
                band = bands[b]
                f = scheme.harmonics_hz[h]
                if not (band.lo_hz <= f < band.hi_hz):
                    out.append(f"harmonic h{h + 1} ({f:g} Hz) outside its {kind} band {band.nominal}")

    spectra = dataset.spectra
    if not np.all(np.isfinite(spectra.levels_db)):
        bad = np.argwhere(~np.isfinite(spectra.levels_db))
        for c, h in bad[:20]:  # cap the flood, the count is in the summary line
            out.append(f"non-finite level at cell {int(c)}, harmonic h{int(h) + 1}")
        if len(bad) > 20:
            out.append(f"{len(bad)} non-finite levels in total")
    if spectra.reference_velocity <= 0.0:
        out.append(f"reference velocity must be positive, got {spectra.reference_velocity}")
    if spectra.reference_area <= 0.0:
        out.append(f"reference area must be positive, got {spectra.reference_area}")

    if dataset.limits.borderline_width_db <= 0.0:
        out.append(f"borderline width must be positive, got {dataset.limits.borderline_width_db}")
    out.extend(dataset._limit_problems)

    for name in dataset.row_names:
        if dataset.region_areas[name] <= 0.0:
            out.append(f"region {name} has no usable area")

    return out
