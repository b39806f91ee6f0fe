"""Pure-numpy implementation of the relaxation kernels.

Shares its contract with the compiled twin ``qdisk._kernels._native``:
arrays are C-contiguous float64 of shape (R+1, M, 2) where ring 0 is the
(logically single) center node duplicated across columns, ring R is the
fixed boundary, and columns are periodic with angular spacing ``dtheta``.

The discrete energy minimized by the sweeps is

    E(u) = sum_{i=0}^{R-1} sum_j (i+1/2) dtheta |u[i+1,j]-u[i,j]|^2
         + sum_{i=1}^{R}   sum_j (i dtheta)^-1  |u[i,j+1]-u[i,j]|^2

which is the trapezoid/midpoint discretization of the Dirichlet integral in
polar coordinates (the radial mesh width cancels: in two dimensions the
Dirichlet energy is scale invariant, and so is this discretization).
Coordinate descent on E gives the classic five-point polar Laplace update;
nodes are swept in checkerboard order so each half-sweep only reads
neighbors of the opposite color.
"""

import numpy as np

BACKEND = "fallback"


def _coeffs(n_rings, dtheta):
    i = np.arange(1, n_rings)
    outer = (i + 0.5) * dtheta
    inner = (i - 0.5) * dtheta
    angular = 1.0 / (i * dtheta)
    return outer, inner, angular


def gs_sweep(u, dtheta, color, omega=1.0):
    """One checkerboard half-sweep over rings 1..R-1 of the given parity.

    ``omega`` over-relaxes the update (1.0 is plain Gauss-Seidel); every
    value in (0, 2) keeps the sweep energy-monotone on this quadratic.
    """
    n_rings = u.shape[0] - 1
    outer, inner, angular = _coeffs(n_rings, dtheta)
    denom = (outer + inner + 2.0 * angular)[:, None, None]
    outer = outer[:, None, None]
    inner = inner[:, None, None]
    angular = angular[:, None, None]

    interior = u[1:n_rings]
    proposed = (
        outer * u[2:]
        + inner * u[0 : n_rings - 1]
        + angular * (np.roll(interior, 1, axis=1) + np.roll(interior, -1, axis=1))
    ) / denom
    if omega != 1.0:
        proposed = interior + omega * (proposed - interior)

    rows = np.arange(1, n_rings)[:, None]
    cols = np.arange(u.shape[1])[None, :]
    mask = (rows + cols) % 2 == color
    interior[mask] = proposed[mask]


def gs_center(u):
    """Energy-minimizing center update: the mean of ring 1."""
    u[0, :, :] = u[1].mean(axis=0)


def gs_energy(u, dtheta):
    """Discrete Dirichlet energy of one periodic sheet stack."""
    n_rings = u.shape[0] - 1
    dr = u[1:] - u[:-1]
    w_r = (np.arange(n_rings) + 0.5) * dtheta
    radial = np.einsum("i,ijc->", w_r, dr * dr)

    da = np.roll(u[1:], -1, axis=1) - u[1:]
    w_a = 1.0 / (np.arange(1, n_rings + 1) * dtheta)
    angular = np.einsum("i,ijc->", w_a, da * da)
    return float(radial + angular)
