"""Velocity-level math: dB conversion, energy summation, integral levels, limits.

Velocity levels are ``L = 20*log10(v/v0)`` dB for a velocity amplitude ``v``
and reference ``v0``. Aggregation over frequency or over the surface always
happens in the energy (squared-velocity) domain, never by averaging dB, so a
band level is ``10*log10(sum(10**(L_i/10)))`` and an integral (area-RMS)
level over cells of areas ``A_i`` is ``10*log10(sum(A_i*10**(L_i/10))/A_ref)``.
The reference velocity cancels in every aggregate, which is why none of the
aggregation functions take it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .model import BAND_KINDS, Band, Dataset, FrequencyScheme, SpectrumTable, TOTAL


def velocity_to_level(v, reference_velocity: float) -> np.ndarray | float:
    """Velocity amplitude(s) in m/s to velocity level(s) in dB.

    Raises :class:`DomainError` for non-positive amplitudes or reference;
    the conversion is a bijection between positive velocities and finite dB
    values, see :func:`level_to_velocity` for the inverse.
    """
    if reference_velocity <= 0.0:
        raise DomainError(f"reference velocity must be positive, got {reference_velocity}")
    arr = np.asarray(v, dtype=np.float64)
    if np.any(arr <= 0.0):
        raise DomainError("velocity amplitudes must be positive")
    out = 20.0 * np.log10(arr / reference_velocity)
    return float(out) if np.isscalar(v) or arr.ndim == 0 else out


def level_to_velocity(level_db, reference_velocity: float) -> np.ndarray | float:
    """Velocity level(s) in dB back to velocity amplitude(s) in m/s."""
    if reference_velocity <= 0.0:
        raise DomainError(f"reference velocity must be positive, got {reference_velocity}")
    arr = np.asarray(level_db, dtype=np.float64)
    out = reference_velocity * 10.0 ** (arr / 20.0)
    return float(out) if np.isscalar(level_db) or arr.ndim == 0 else out


def energy_sum(levels_db) -> float:
    """Combine dB levels by power summation: ``10*log10(sum(10**(L/10)))``.

    This is the one true way levels aggregate across harmonics or bands;
    two equal levels gain ~3.01 dB, never 2x.
    """
    arr = np.asarray(levels_db, dtype=np.float64)
    if arr.size == 0:
        raise DomainError("energy_sum of an empty level list is undefined")
    return float(10.0 * np.log10(np.sum(10.0 ** (arr / 10.0))))


def band_levels(spectra: SpectrumTable, scheme: FrequencyScheme, kind: str) -> np.ndarray:
    """Per-cell band levels, shape (cells, bands of `kind`).

    Each band is the energy sum of its member harmonics; bands without any
    harmonic are NaN (the undefined marker). Out-of-band harmonics belong to
    no band and contribute nothing here.
    """
    if kind not in BAND_KINDS:
        raise DomainError(f"unknown band kind {kind!r}")
    idx = scheme.band_index(kind)
    n_bands = len(scheme.bands(kind))
    member = np.zeros((scheme.n_harmonics, n_bands))
    in_band = idx >= 0
    member[np.nonzero(in_band)[0], idx[in_band]] = 1.0

    energy = 10.0 ** (spectra.levels_db / 10.0) @ member
    counts = member.sum(axis=0)
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(energy)
    out[:, counts == 0] = np.nan
    return out


def integral_level(cell_ids, levels_db: np.ndarray, areas: np.ndarray, reference_area: float) -> float:
    """Area-RMS velocity level of a cell set, in dB.

    Parameters
    ----------
    cell_ids : array-like of int
        The cells to integrate over; must be non-empty.
    levels_db, areas : ndarray
        Full per-cell arrays, indexed by ``cell_ids``.
    reference_area : float
        Area that normalizes the sum (the level of a uniform field over
        exactly this area equals the field's discrete level).

    Equivalent to converting each level to a velocity, forming
    ``sqrt(sum(A_i*v_i^2)/A_ref)`` and converting back; the computation stays
    in the energy domain so the reference velocity never enters.
    """
    ids = np.asarray(cell_ids, dtype=np.intp)
    if ids.size == 0:
        raise DomainError("integral level over an empty cell set is undefined")
    if reference_area <= 0.0:
        raise DomainError(f"reference area must be positive, got {reference_area}")
    energy = np.sum(areas[ids] * 10.0 ** (levels_db[ids] / 10.0)) / reference_area
    if np.isnan(energy):
        return float("nan")
    return float(10.0 * np.log10(energy))


def integral_table(weights: np.ndarray, cell_levels: np.ndarray, reference_area: float) -> np.ndarray:
    """Integral levels for many cell sets at once.

    ``weights`` holds one row per set with the cell area where the cell is a
    member and 0 elsewhere; ``cell_levels`` is (cells, columns). NaN columns
    (empty bands) stay NaN, zero-weight rows become NaN.
    """
    energy = weights @ (10.0 ** (cell_levels / 10.0)) / reference_area
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 10.0 * np.log10(energy)
    out[energy == 0.0] = np.nan
    return out


def derive_discrete_limits(integral_limits_db, total_area: float, reference_area: float):
    """Per-cell (discrete) limits from integral limits over a total area.

    A uniform field at discrete level L integrates to
    ``L + 10*log10(A_total/A_ref)``, so the discrete limit sits that same
    offset below the integral limit. NaN entries pass through.
    """
    if total_area <= 0.0 or reference_area <= 0.0:
        raise DomainError("areas must be positive to derive discrete limits")
    offset = 10.0 * np.log10(total_area / reference_area)
    arr = np.asarray(integral_limits_db, dtype=np.float64) - offset
    return float(arr) if arr.ndim == 0 else arr


# ---------------------------------------------------------------------------
# acceptance classification


class Category(str, Enum):
    """Acceptance verdict of a level against a limit."""

    ACCEPTABLE = "Acceptable"
    BORDERLINE = "Borderline"
    UNACCEPTABLE = "Unacceptable"
    UNDEFINED = "Undefined"


_TOKEN_PREFIX = {
    Category.ACCEPTABLE: "ACCEPT",
    Category.BORDERLINE: "BORDER",
    Category.UNACCEPTABLE: "UNACCEPT",
}

MAX_SHADES = 6


@dataclass(frozen=True)
class AcceptanceCategory:
    """Verdict plus the optional lightness shade used near the limit."""

    category: Category
    shade: int | None = None

    @property
    def token(self) -> str:
        """Abstract palette token, e.g. ``BORDER_2``; RGB lives in the palette file."""
        if self.category is Category.UNDEFINED:
            return "UNDEFINED"
        return f"{_TOKEN_PREFIX[self.category]}_{self.shade or 0}"


def classify(level_db: float, limit_db: float, width_db: float = 6.0, shades: int = 3) -> AcceptanceCategory:
    """Classify a level against an acceptance limit.

    Categories are half-open, lower edge inclusive: Acceptable below the
    limit L0, Borderline in ``[L0, L0 + width)``, Unacceptable from
    ``L0 + width`` up. A NaN level or limit is Undefined.

    With ``shades > 1`` the verdict carries a shade index that subdivides
    each category near the borderline window in steps of ``width/shades``
    dB: Acceptable counts down from L0, Borderline up from L0, Unacceptable
    up from L0 + width. Beyond one full window the index saturates at
    ``shades - 1`` (the extreme shade), so with the defaults a level 10 dB
    under the limit and one 40 dB under it look the same.
    """
    if width_db <= 0.0:
        raise DomainError(f"borderline width must be positive, got {width_db}")
    if not 1 <= shades <= MAX_SHADES:
        raise DomainError(f"shade count must be in 1..{MAX_SHADES}, got {shades}")
    if np.isnan(level_db) or np.isnan(limit_db):
        return AcceptanceCategory(Category.UNDEFINED)

    if level_db < limit_db:
        category, distance = Category.ACCEPTABLE, limit_db - level_db
    elif level_db < limit_db + width_db:
        category, distance = Category.BORDERLINE, level_db - limit_db
    else:
        category, distance = Category.UNACCEPTABLE, level_db - (limit_db + width_db)

    if shades == 1:
        return AcceptanceCategory(category)
    idx = min(int(distance // (width_db / shades)), shades - 1)
    return AcceptanceCategory(category, idx)


# ---------------------------------------------------------------------------
# multi-speed overview


@dataclass(frozen=True)
class CampbellMatrix:
    """TOTAL integral band levels across engine speeds.

    One row per dataset, ordered by speed ascending; columns are the shared
    band scheme. A single-speed matrix row is exactly the TOTAL row of that
    dataset's overview matrix.
    """

    speeds_rpm: tuple[float, ...]
    bands: tuple[Band, ...]
    levels_db: np.ndarray  # (speeds, bands)


def campbell(datasets: list[Dataset], kind: str = "third") -> CampbellMatrix:
    """Stack the TOTAL integral band levels of several runs by speed."""
    if not datasets:
        raise DomainError("campbell needs at least one dataset")
    if kind not in BAND_KINDS:
        raise DomainError(f"unknown band kind {kind!r}")
    ref = tuple(b.nominal for b in datasets[0].scheme.bands(kind))
    for ds in datasets[1:]:
        got = tuple(b.nominal for b in ds.scheme.bands(kind))
        if got != ref:
            raise DomainError(
                f"band schemes differ between runs: {ref} vs {got}"
            )
    ordered = sorted(datasets, key=lambda ds: ds.speed_rpm)
    rows = [ds.integral_levels(kind)[ds.row_index(TOTAL)] for ds in ordered]
    return CampbellMatrix(
        speeds_rpm=tuple(ds.speed_rpm for ds in ordered),
        bands=ordered[0].scheme.bands(kind),
        levels_db=np.vstack(rows),
    )
