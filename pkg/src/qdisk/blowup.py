"""Blow-up extraction and identification against the homogeneous catalog.

Rescaling a field to the disk of radius r and normalizing to unit Dirichlet
energy produces, along shrinking radii, approximations of the blow-up limit
at the origin. For minimizers vanishing at the origin the limit is
homogeneous of degree N(0), its boundary mass equals 1/N(0), and its sheets
belong to the conformal catalog; this module measures all three statements
at grid scale and fits the concrete catalog entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePair, NoCatalogMatch, ZeroEnergy
from .field import (
    DiskField,
    PolarGrid,
    boundary_mass,
    dirichlet_energy,
    frequency_profile,
    values_at,
)
from .forms import (
    FREQ_INTEGERS,
    FREQ_ODD_HALVES,
    Continuation,
    FourTuple,
    HomogeneousPair,
    classify_form,
    match_pair,
    sheet_eval,
)
from .qpoint import pair_distance_arrays

ENERGY_EPS = 1e-14
# innermost rings skipped by sup norms; interpolation noise amplifies there
CENTER_EXCLUSION_RINGS = 3


def rescale_normalize(field: DiskField, r: float, grid: PolarGrid | None = None) -> DiskField:
    """Dilate the disk of radius r to the unit disk and normalize energy.

    Resampling is bilinear in (r, theta) with seam-aware wraparound; the
    result has unit discrete Dirichlet energy on its own grid (exactly, by
    construction). Raises ZeroEnergy when there is nothing to normalize.
    """
    if dirichlet_energy(field, r) <= ENERGY_EPS:
        raise ZeroEnergy(f"Dirichlet energy at r={r} is numerically zero")
    grid = field.grid if grid is None else grid
    rr = r * grid.radii[:, None] * np.ones(grid.n_theta)[None, :]
    tt = np.broadcast_to(grid.thetas[None, :], rr.shape)
    v1, v2 = values_at(field, rr, tt)
    rescaled = DiskField(grid, v1, v2, field.seam)
    scale = dirichlet_energy(rescaled, 1.0)
    if scale <= ENERGY_EPS:
        raise ZeroEnergy("rescaled field has numerically zero energy")
    root = np.sqrt(scale)
    return DiskField(grid, rescaled.sheet1 / root, rescaled.sheet2 / root, field.seam)


@dataclass(frozen=True)
class BlowupSequence:
    """Normalized rescalings along decreasing radii with Cauchy defects.

    cauchy_defects[k] is the sup pair distance between fields k and k+1
    over nodes outside the center exclusion zone.
    """

    radii: tuple
    fields: tuple
    cauchy_defects: tuple


def blowup_sequence(field: DiskField, radii) -> BlowupSequence:
    radii = tuple(float(r) for r in radii)
    if any(r2 >= r1 for r1, r2 in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    n_r = field.grid.n_r
    for r in radii:
        if r * n_r < CENTER_EXCLUSION_RINGS:
            raise ValueError(f"radius {r} is below {CENTER_EXCLUSION_RINGS} grid rings")
    fields = tuple(rescale_normalize(field, r) for r in radii)
    defects = []
    for f, g in zip(fields, fields[1:]):
        d = pair_distance_arrays(f.sheet1, f.sheet2, g.sheet1, g.sheet2)
        defects.append(float(d[CENTER_EXCLUSION_RINGS:].max()))
    return BlowupSequence(radii, fields, tuple(defects))


def homogeneity_defect(g: DiskField, N: float) -> float:
    """Sup distance between g and its degree-N homogeneous extension.

    Compares g at each interior node with the boundary-ring value at the
    same angle scaled by r^N; zero exactly when g is homogeneous of
    degree N.
    """
    if N <= 0:
        raise ValueError("N must be positive")
    radii = g.grid.radii[:-1]
    scale = np.power(radii, N)[:, None]
    d = pair_distance_arrays(
        g.sheet1[:-1],
        g.sheet2[:-1],
        scale[..., None] * g.sheet1[-1][None, :, :],
        scale[..., None] * g.sheet2[-1][None, :, :],
    )
    return float(d.max())


def boundary_mass_identity(g: DiskField, N0: float) -> tuple[float, float]:
    """Return (H(1), 1/N0); equal for unit-energy blow-up limits."""
    if N0 <= 0:
        raise ValueError("N0 must be positive")
    return boundary_mass(g, 1.0), 1.0 / N0


_FIT_RADII = (0.25, 0.5, 0.75, 1.0)


def _fit_sheet_tuple(values: np.ndarray, thetas: np.ndarray, N: float) -> FourTuple:
    """Least-squares coefficients of one sheet's boundary ring at degree N."""
    basis = np.stack([np.cos(N * thetas), np.sin(N * thetas)], axis=1)
    sol, *_ = np.linalg.lstsq(basis, values, rcond=None)
    return FourTuple(sol[0, 0], sol[1, 0], sol[0, 1], sol[1, 1])


def identify_catalog(g: DiskField, tol: float) -> tuple[HomogeneousPair, float]:
    """Fit a normalized blow-up limit to a concrete catalog entry.

    Fits N from the frequency profile and rounds to the nearest
    half-integer, fits each sheet's boundary trace to the degree-N mode
    family, classifies the fitted tuples, and validates the pair under the
    field's seam. Returns the entry and the sup-norm boundary residual.
    Raises NoCatalogMatch when the fitted degree is farther than 0.1 from a
    half-integer or the tuples fail classification/matching at ``tol``.
    """
    profile = frequency_profile(g, _FIT_RADII)
    fitted = float(np.median(profile.N))
    rounded = round(2.0 * fitted) / 2.0
    if abs(fitted - rounded) > 0.1 or rounded < 0.5:
        raise NoCatalogMatch(
            f"fitted degree {fitted:.4f} is not within 0.1 of a half-integer"
        )

    thetas = g.grid.thetas
    t1 = _fit_sheet_tuple(g.sheet1[-1], thetas, rounded)
    t2 = _fit_sheet_tuple(g.sheet2[-1], thetas, rounded)
    scale = max(np.abs(g.sheet1[-1]).max(), np.abs(g.sheet2[-1]).max(), 1e-30)
    if max(abs(x) for x in (*t1, *t2)) <= 0.1 * scale:
        raise NoCatalogMatch(
            "boundary trace has almost no content at the fitted degree"
        )
    f1 = classify_form(t1, tol)
    f2 = classify_form(t2, tol)
    if not (f1.is_conformal and f2.is_conformal):
        raise NoCatalogMatch(
            f"fitted tuples not conformal at tol={tol:g}: {t1}, {t2}"
        )

    try:
        outcome = match_pair(t1, t2, tol)
    except DegeneratePair as exc:
        raise NoCatalogMatch("fitted sheets are numerically zero") from exc
    k = int(round(2.0 * rounded))
    if g.seam is Continuation.SWAP:
        if outcome.swap_class != FREQ_ODD_HALVES or k % 2 == 0:
            raise NoCatalogMatch("swap seam incompatible with fitted sheets")
    else:
        if outcome.identity_class != FREQ_INTEGERS or k % 2 == 1:
            raise NoCatalogMatch("identity seam requires integer degree")

    entry = HomogeneousPair(rounded, t1, t2, g.seam)
    fit1 = sheet_eval(t1, rounded, 1.0, thetas)
    fit2 = sheet_eval(t2, rounded, 1.0, thetas)
    residual = float(
        pair_distance_arrays(g.sheet1[-1], g.sheet2[-1], fit1, fit2).max()
    )
    return entry, residual


def blowup_report(
    g: DiskField, entry: HomogeneousPair, fitted_N: float, residual: float
) -> dict:
    """JSON-ready summary of a blow-up identification."""
    H1, inv_n = boundary_mass_identity(g, entry.N)
    return {
        "fitted_N": fitted_N,
        "rounded_N": entry.N,
        "continuation": entry.continuation.value,
        "residual": residual,
        "boundary_mass": H1,
        "1/N": inv_n,
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
