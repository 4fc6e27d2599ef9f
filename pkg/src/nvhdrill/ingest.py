"""Dataset IO and synthetic data generation.

On-disk layout is a JSON manifest pointing at four text files:

* mesh: lines ``v x y z`` (metres) and ``f i j k [l]`` (0-based indices)
* regions: CSV ``cell_id,region_name``
* levels: CSV with header ``cell_id,h1_<freq>_hz,h2_<freq>_hz,...`` carrying
  the harmonic frequencies, one row per cell
* limits: CSV ``band_center_hz,integral_limit_db`` (optional)

Everything numeric is written with 9 significant digits (``%.9g``) so that a
save -> load round trip reproduces level values bit for bit; the generator
quantizes to the same precision at creation time for the same reason.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DomainError, ParseError
from .model import (
    Dataset,
    FrequencyScheme,
    LimitCurve,
    RegionPartition,
    SurfaceMesh,
    SpectrumTable,
)
from .util import fmt9, quantize9, sig9

_MANIFEST_DEFAULTS = {
    "reference_velocity": 5e-8,
    "reference_area": 1.0,
    "borderline_width_db": 6.0,
    "label": "",
}


# ---------------------------------------------------------------------------
# loading


def _read_lines(path: Path) -> list[str]:
    try:
        return path.read_text("utf-8").splitlines()
    except OSError as exc:
        raise ParseError(path, None, f"cannot read file ({exc})") from exc


def _parse_mesh(path: Path) -> SurfaceMesh:
    vertices: list[tuple[float, float, float]] = []
    faces: list[tuple[int, ...]] = []
    face_lines: list[int] = []
    for lineno, raw in enumerate(_read_lines(path), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "v":
            if len(parts) != 4:
                raise ParseError(path, lineno, f"vertex line needs 3 coordinates, got {len(parts) - 1}")
            try:
                vertices.append((float(parts[1]), float(parts[2]), float(parts[3])))
            except ValueError as exc:
                raise ParseError(path, lineno, f"bad vertex coordinate: {exc}") from exc
        elif parts[0] == "f":
            if len(parts) not in (4, 5):
                raise ParseError(path, lineno, f"face line needs 3 or 4 indices, got {len(parts) - 1}")
            try:
                faces.append(tuple(int(p) for p in parts[1:]))
            except ValueError as exc:
                raise ParseError(path, lineno, f"bad face index: {exc}") from exc
            face_lines.append(lineno)
        else:
            raise ParseError(path, lineno, f"unknown record {parts[0]!r}")
    if not vertices or not faces:
        raise ParseError(path, None, "mesh needs at least one vertex and one face")
    for lineno, face in zip(face_lines, faces):
        for idx in face:
            if not 0 <= idx < len(vertices):
                raise ParseError(path, lineno, f"face references missing vertex {idx}")
    return SurfaceMesh.build(np.asarray(vertices, dtype=np.float64), faces)


def _parse_regions(path: Path, n_cells: int) -> RegionPartition:
    lines = _read_lines(path)
    if not lines or lines[0] != "cell_id,region_name":
        raise ParseError(path, 1, "expected header 'cell_id,region_name'")
    pairs = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cid_s, _, name = line.partition(",")
        if not name:
            raise ParseError(path, lineno, "expected 'cell_id,region_name'")
        try:
            cid = int(cid_s)
        except ValueError as exc:
            raise ParseError(path, lineno, f"bad cell id {cid_s!r}") from exc
        if not 0 <= cid < n_cells:
            raise ParseError(path, lineno, f"cell id {cid} outside 0..{n_cells - 1}")
        pairs.append((cid, name))
    try:
        return RegionPartition.from_pairs(pairs, n_cells)
    except DomainError as exc:
        raise ParseError(path, None, str(exc)) from exc


def _parse_levels_header(path: Path, header: str) -> np.ndarray:
    cols = header.split(",")
    if not cols or cols[0] != "cell_id":
        raise ParseError(path, 1, "levels header must start with 'cell_id'")
    freqs = []
    for n, col in enumerate(cols[1:], start=1):
        parts = col.split("_")
        if len(parts) != 3 or parts[0] != f"h{n}" or parts[2] != "hz":
            raise ParseError(path, 1, f"bad harmonic column {col!r}, expected 'h{n}_<freq>_hz'")
        try:
            freqs.append(float(parts[1]))
        except ValueError as exc:
            raise ParseError(path, 1, f"bad frequency in column {col!r}") from exc
    if not freqs:
        raise ParseError(path, 1, "levels table has no harmonic columns")
    return np.asarray(freqs, dtype=np.float64)


def _parse_levels(path: Path, n_cells: int) -> tuple[np.ndarray, np.ndarray]:
    try:
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
    except OSError as exc:
        raise ParseError(path, None, f"cannot read file ({exc})") from exc
    freqs = _parse_levels_header(path, header)
    try:
        frame = pd.read_csv(path, skiprows=1, header=None, dtype=np.float64)
    except Exception as exc:
        raise ParseError(path, None, f"cannot parse level rows ({exc})") from exc
    if frame.shape[1] != len(freqs) + 1:
        raise ParseError(path, None, f"rows have {frame.shape[1] - 1} level columns, header has {len(freqs)}")
    cell_ids = frame.iloc[:, 0].to_numpy()
    if len(cell_ids) != n_cells or not np.array_equal(cell_ids, np.arange(n_cells)):
        raise ParseError(path, None, f"expected one row per cell, ids 0..{n_cells - 1} in order")
    return freqs, np.ascontiguousarray(frame.iloc[:, 1:].to_numpy(dtype=np.float64))


def _parse_limits(path: Path) -> list[tuple[float, float]]:
    lines = _read_lines(path)
    if not lines or lines[0] != "band_center_hz,integral_limit_db":
        raise ParseError(path, 1, "expected header 'band_center_hz,integral_limit_db'")
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(path, lineno, "expected 'band_center_hz,integral_limit_db'")
        try:
            entries.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ParseError(path, lineno, f"bad number: {exc}") from exc
    return entries


def load(manifest_path: str | Path) -> Dataset:
    """Load a dataset from its manifest; derived tables build eagerly.

    Raises :class:`ParseError` (with file and line) for malformed inputs and
    :class:`DomainError` for structurally impossible combinations. Soft
    inconsistencies are left for :func:`nvhdrill.model.validate`.
    """
    manifest_path = Path(manifest_path)
    try:
        manifest = json.loads(manifest_path.read_text("utf-8"))
    except OSError as exc:
        raise ParseError(manifest_path, None, f"cannot read manifest ({exc})") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(manifest_path, exc.lineno, f"invalid JSON: {exc.msg}") from exc
    for key in ("mesh", "regions", "levels", "speed_rpm"):
        if key not in manifest:
            raise ParseError(manifest_path, None, f"manifest misses required key {key!r}")

    base = manifest_path.parent
    mesh = _parse_mesh(base / manifest["mesh"])
    partition = _parse_regions(base / manifest["regions"], mesh.n_cells)
    freqs, levels = _parse_levels(base / manifest["levels"], mesh.n_cells)

    speed_rpm = float(manifest["speed_rpm"])
    if speed_rpm <= 0.0:
        raise ParseError(manifest_path, None, f"speed_rpm must be positive, got {speed_rpm}")
    scheme = FrequencyScheme.build(speed_rpm / 60.0, freqs)

    entries: list[tuple[float, float]] = []
    if manifest.get("limits"):
        entries = _parse_limits(base / manifest["limits"])
    limits = LimitCurve(
        entries=tuple(entries),
        borderline_width_db=float(manifest.get("borderline_width_db", _MANIFEST_DEFAULTS["borderline_width_db"])),
    )
    spectra = SpectrumTable(
        levels_db=levels,
        reference_velocity=float(manifest.get("reference_velocity", _MANIFEST_DEFAULTS["reference_velocity"])),
        reference_area=float(manifest.get("reference_area", _MANIFEST_DEFAULTS["reference_area"])),
    )
    return Dataset(
        mesh=mesh,
        partition=partition,
        scheme=scheme,
        spectra=spectra,
        limits=limits,
        speed_rpm=speed_rpm,
        label=str(manifest.get("label", "")),
    )


# ---------------------------------------------------------------------------
# saving


def _mesh_text(mesh: SurfaceMesh) -> str:
    parts = [
        "\n".join(f"v {fmt9(x)} {fmt9(y)} {fmt9(z)}" for x, y, z in mesh.vertices),
        "\n".join("f " + " ".join(str(i) for i in cell) for cell in mesh.cells),
    ]
    return "\n".join(parts) + "\n"


def _regions_text(partition: RegionPartition) -> str:
    rows = ["cell_id,region_name"]
    for cid, idx in enumerate(partition.cell_region):
        if idx >= 0:
            rows.append(f"{cid},{partition.names[idx]}")
    return "\n".join(rows) + "\n"


def _levels_text(dataset: Dataset) -> str:
    scheme = dataset.scheme
    header = "cell_id," + ",".join(
        f"h{n}_{fmt9(f)}_hz" for n, f in enumerate(scheme.harmonics_hz, start=1)
    )
    body = np.char.mod("%.9g", dataset.spectra.levels_db)
    rows = [header]
    rows.extend(f"{cid}," + ",".join(row) for cid, row in enumerate(body))
    return "\n".join(rows) + "\n"


def _limits_text(limits: LimitCurve) -> str:
    rows = ["band_center_hz,integral_limit_db"]
    rows.extend(f"{fmt9(c)},{fmt9(v)}" for c, v in limits.entries)
    return "\n".join(rows) + "\n"


def save(dataset: Dataset, out_dir: str | Path) -> Path:
    """Write the dataset into a directory; returns the manifest path.

    File names are fixed (manifest.json, mesh.txt, regions.csv, levels.csv,
    limits.csv); the limits file is only written when entries exist.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "mesh.txt").write_text(_mesh_text(dataset.mesh), "utf-8")
    (out / "regions.csv").write_text(_regions_text(dataset.partition), "utf-8")
    (out / "levels.csv").write_text(_levels_text(dataset), "utf-8")
    manifest = {
        "label": dataset.label,
        "speed_rpm": sig9(dataset.speed_rpm),
        "reference_velocity": sig9(dataset.spectra.reference_velocity),
        "reference_area": sig9(dataset.spectra.reference_area),
        "borderline_width_db": sig9(dataset.limits.borderline_width_db),
        "mesh": "mesh.txt",
        "regions": "regions.csv",
        "levels": "levels.csv",
    }
    if dataset.limits.entries:
        (out / "limits.csv").write_text(_limits_text(dataset.limits), "utf-8")
        manifest["limits"] = "limits.csv"
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", "utf-8")
    return path


# ---------------------------------------------------------------------------
# synthetic datasets


@dataclass(frozen=True)
class Hotspot:
    """Elevated excitation planted into one region over a band range.

    Exactly one of ``peak_db`` (explicit level, optionally fading with
    ``falloff_db_per_m`` from the region centre) or
    ``target_total_excess_db`` (solve the level so the TOTAL integral of the
    band exceeds its limit by this much) must be given. ``area_fraction``
    restricts the affected cells to the given share of the region's area,
    nearest the region centre first.
    """

    region: str
    band_lo_hz: float
    band_hi_hz: float
    peak_db: float | None = None
    falloff_db_per_m: float = 0.0
    area_fraction: float | None = None
    target_total_excess_db: float | None = None


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a deterministic box dataset (see :func:`generate_synthetic`)."""

    seed: int = 0
    resolution: int = 8
    side_m: float = 1.0
    base_level_db: float = 70.0
    noise_db: float = 0.0
    speed_rpm: float = 2000.0
    n_harmonics: int = 120
    hotspots: tuple[Hotspot, ...] = ()
    limit_db: float | None = None
    limit_lo_hz: float = 215.0
    limit_hi_hz: float = 3150.0
    borderline_width_db: float = 6.0
    reference_velocity: float = 5e-8
    reference_area: float = 1.0
    label: str = "synthetic"


REGION_ORDER = ("FRONT", "REAR", "TOP", "BOTTOM", "LEFT", "RIGHT")


def box_mesh(resolution: int, side_m: float = 1.0) -> tuple[SurfaceMesh, list[tuple[int, str]]]:
    """Welded box surface of 6 faces x resolution^2 quads, plus region pairs.

    Faces sit on the coordinate planes: FRONT y=0, REAR y=side, TOP z=side,
    BOTTOM z=0, LEFT x=0, RIGHT x=side. Shared edge/corner vertices are
    welded, so region growing can cross face boundaries.
    """
    if resolution < 1:
        raise DomainError(f"resolution must be >= 1, got {resolution}")
    n = resolution
    vertex_index: dict[tuple[int, int, int], int] = {}
    vertices: list[tuple[float, float, float]] = []

    def vid(ix: int, iy: int, iz: int) -> int:
        key = (ix, iy, iz)
        if key not in vertex_index:
            vertex_index[key] = len(vertices)
            vertices.append(
                (sig9(ix / n * side_m), sig9(iy / n * side_m), sig9(iz / n * side_m))
            )
        return vertex_index[key]

    # lattice quad corners per face, counter-clockwise seen from outside
    face_grids = {
        "FRONT": lambda i, j: ((i, 0, j), (i + 1, 0, j), (i + 1, 0, j + 1), (i, 0, j + 1)),
        "REAR": lambda i, j: ((i, n, j), (i, n, j + 1), (i + 1, n, j + 1), (i + 1, n, j)),
        "TOP": lambda i, j: ((i, j, n), (i + 1, j, n), (i + 1, j + 1, n), (i, j + 1, n)),
        "BOTTOM": lambda i, j: ((i, j, 0), (i, j + 1, 0), (i + 1, j + 1, 0), (i + 1, j, 0)),
        "LEFT": lambda i, j: ((0, i, j), (0, i + 1, j), (0, i + 1, j + 1), (0, i, j + 1)),
        "RIGHT": lambda i, j: ((n, i, j), (n, i, j + 1), (n, i + 1, j + 1), (n, i + 1, j)),
    }
    cells: list[tuple[int, ...]] = []
    region_pairs: list[tuple[int, str]] = []
    for name in REGION_ORDER:
        corners = face_grids[name]
        for i in range(n):
            for j in range(n):
                quad = tuple(vid(*c) for c in corners(i, j))
                region_pairs.append((len(cells), name))
                cells.append(quad)
    mesh = SurfaceMesh.build(np.asarray(vertices, dtype=np.float64), cells)
    return mesh, region_pairs


def _hotspot_cells(mesh: SurfaceMesh, ids: np.ndarray, fraction: float | None) -> np.ndarray:
    """Cells of a region affected by a hotspot: nearest the centre first."""
    areas = mesh.areas[ids]
    center = (areas[:, None] * mesh.centroids[ids]).sum(axis=0) / areas.sum()
    dist = np.linalg.norm(mesh.centroids[ids] - center, axis=1)
    if fraction is None:
        return ids, dist
    if not 0.0 < fraction <= 1.0:
        raise DomainError(f"area_fraction must be in (0, 1], got {fraction}")
    order = np.lexsort((ids, dist))
    cum = np.cumsum(areas[order]) / areas.sum()
    count = int(np.searchsorted(cum, fraction, side="left")) + 1
    picked = order[:count]
    return ids[picked], dist[picked]


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    """Deterministic box dataset: base level + hotspots + seeded noise.

    The same spec always yields bit-identical data: the mesh is welded from
    integer lattice points, hotspot levels are computed before the noise
    pass, the RNG is seeded, and everything is quantized to 9 significant
    digits at the end.
    """
    if spec.n_harmonics < 1:
        raise DomainError(f"need at least one harmonic, got {spec.n_harmonics}")
    if spec.noise_db < 0.0:
        raise DomainError(f"noise amplitude must be >= 0, got {spec.noise_db}")
    mesh, region_pairs = box_mesh(spec.resolution, spec.side_m)
    partition = RegionPartition.from_pairs(region_pairs, mesh.n_cells)

    fundamental = spec.speed_rpm / 60.0
    freqs = quantize9(fundamental * np.arange(1, spec.n_harmonics + 1))
    scheme = FrequencyScheme.build(fundamental, freqs)

    entries: list[tuple[float, float]] = []
    if spec.limit_db is not None:
        for band in scheme.thirds:
            nominal = float(band.nominal)
            if spec.limit_lo_hz <= nominal <= spec.limit_hi_hz:
                entries.append((nominal, float(spec.limit_db)))
    limits = LimitCurve(tuple(entries), borderline_width_db=spec.borderline_width_db)
    limit_by_band = {c: v for c, v in entries}

    levels = np.full((mesh.n_cells, scheme.n_harmonics), float(spec.base_level_db))
    areas = mesh.areas

    for hs in spec.hotspots:
        if (hs.peak_db is None) == (hs.target_total_excess_db is None):
            raise DomainError("hotspot needs exactly one of peak_db or target_total_excess_db")
        ids = partition.cells_of(hs.region)
        if ids.size == 0:
            raise DomainError(f"hotspot region {hs.region!r} has no cells")
        affected, dist = _hotspot_cells(mesh, ids, hs.area_fraction)
        bands = [
            (b, band) for b, band in enumerate(scheme.thirds)
            if band.lo_hz < hs.band_hi_hz and band.hi_hz > hs.band_lo_hz
        ]
        if not bands:
            raise DomainError(f"hotspot band range {hs.band_lo_hz}..{hs.band_hi_hz} Hz hits no band")
        for b, band in bands:
            members = scheme.harmonics_in("third", b)
            if members.size == 0:
                continue
            # excite the harmonic nearest the band centre
            h = int(members[np.argmin(np.abs(scheme.harmonics_hz[members] - band.center_hz))])
            if hs.peak_db is not None:
                if hs.peak_db < spec.base_level_db:
                    raise DomainError("hotspot peak must be at or above the base level")
                bump = hs.peak_db - hs.falloff_db_per_m * dist
                levels[affected, h] = np.maximum(levels[affected, h], bump)
            else:
                if hs.falloff_db_per_m:
                    raise DomainError("target_total_excess_db requires zero falloff")
                try:
                    limit = limit_by_band[float(band.nominal)]
                except KeyError:
                    raise DomainError(
                        f"band {band.nominal} has no limit to target an excess against"
                    ) from None
                target_energy = spec.reference_area * 10.0 ** (
                    (limit + hs.target_total_excess_db) / 10.0
                )
                band_cols = 10.0 ** (levels[:, members] / 10.0)
                current = float((areas[:, None] * band_cols).sum())
                replaced = float((areas[affected] * 10.0 ** (levels[affected, h] / 10.0)).sum())
                hot_area = float(areas[affected].sum())
                energy = (target_energy - current + replaced) / hot_area
                if energy <= 0.0:
                    raise DomainError(
                        f"target excess {hs.target_total_excess_db} dB unreachable in band {band.nominal}"
                    )
                levels[affected, h] = 10.0 * math.log10(energy)

    if spec.noise_db > 0.0:
        rng = np.random.default_rng(spec.seed)
        levels = levels + rng.uniform(-spec.noise_db, spec.noise_db, levels.shape)
    levels = quantize9(levels)

    spectra = SpectrumTable(
        levels_db=levels,
        reference_velocity=spec.reference_velocity,
        reference_area=spec.reference_area,
    )
    return Dataset(
        mesh=mesh,
        partition=partition,
        scheme=scheme,
        spectra=spectra,
        limits=limits,
        speed_rpm=spec.speed_rpm,
        label=spec.label,
    )


def demo_spec() -> SyntheticSpec:
    """The bundled demo recipe: a 12k-cell box with BOTTOM 500/630 Hz hotspots.

    Sized so the TOTAL integral levels exceed the flat 100 dB limit by
    +5.4 dB (500 Hz band) and +5.7 dB (630 Hz band) and roughly 60 percent
    of the BOTTOM area sits above the per-cell limit in those bands.
    """
    return SyntheticSpec(
        seed=2000,
        resolution=45,
        base_level_db=70.0,
        noise_db=0.25,
        speed_rpm=2000.0,
        n_harmonics=339,
        limit_db=100.0,
        hotspots=(
            Hotspot("BOTTOM", 500.0, 500.0, target_total_excess_db=5.4, area_fraction=0.6),
            Hotspot("BOTTOM", 630.0, 630.0, target_total_excess_db=5.7, area_fraction=0.6),
        ),
        label="demo",
    )


def spec_to_json(spec: SyntheticSpec) -> str:
    return json.dumps(asdict(spec), indent=2) + "\n"


_SPEC_INT_KEYS = frozenset({"seed", "resolution", "n_harmonics"})
_SPEC_STR_KEYS = frozenset({"label", "region"})


def _check_types(raw: dict, path, context: str) -> None:
    for key, value in raw.items():
        if key == "hotspots":
            continue
        if key in _SPEC_INT_KEYS:
            ok = isinstance(value, int) and not isinstance(value, bool)
        elif key in _SPEC_STR_KEYS:
            ok = isinstance(value, str)
        else:  # every remaining field is a dB/Hz/m quantity, None where optional
            ok = value is None or (isinstance(value, (int, float)) and not isinstance(value, bool))
        if not ok:
            raise ParseError(path, None, f"{context} key {key!r} has invalid value {value!r}")


def spec_from_json(text: str, path: str | Path = "<spec>") -> SyntheticSpec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.lineno, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError(path, None, "spec must be a JSON object")
    known = {f for f in SyntheticSpec.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise ParseError(path, None, f"unknown spec keys: {sorted(unknown)}")
    _check_types(raw, path, "spec")
    hotspots = []
    for i, h in enumerate(raw.get("hotspots", [])):
        hs_known = {f for f in Hotspot.__dataclass_fields__}
        bad = set(h) - hs_known
        if bad:
            raise ParseError(path, None, f"unknown hotspot keys in entry {i}: {sorted(bad)}")
        _check_types(h, path, f"hotspot entry {i}")
        try:
            hotspots.append(Hotspot(**h))
        except TypeError as exc:
            raise ParseError(path, None, f"hotspot entry {i}: {exc}") from exc
    raw["hotspots"] = tuple(hotspots)
    try:
        return SyntheticSpec(**raw)
    except TypeError as exc:
        raise ParseError(path, None, str(exc)) from exc
