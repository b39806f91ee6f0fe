# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled relaxation kernels; same contract as qdisk._kernels.fallback."""

BACKEND = "native"


def gs_sweep(double[:, :, ::1] u, double dtheta, int color, double omega=1.0):
    cdef Py_ssize_t n_rings = u.shape[0] - 1
    cdef Py_ssize_t cols = u.shape[1]
    cdef Py_ssize_t i, j, jl, jr, c
    cdef double outer, inner, angular, denom, proposed
    for i in range(1, n_rings):
        outer = (i + 0.5) * dtheta
        inner = (i - 0.5) * dtheta
        angular = 1.0 / (i * dtheta)
        denom = outer + inner + 2.0 * angular
        # nodes of the requested checkerboard color only
        for j in range((i + color) % 2, cols, 2):
            jl = j - 1 if j > 0 else cols - 1
            jr = j + 1 if j + 1 < cols else 0
            for c in range(2):
                proposed = (
                    outer * u[i + 1, j, c]
                    + inner * u[i - 1, j, c]
                    + angular * (u[i, jl, c] + u[i, jr, c])
                ) / denom
                if omega != 1.0:
                    proposed = u[i, j, c] + omega * (proposed - u[i, j, c])
                u[i, j, c] = proposed


def gs_center(double[:, :, ::1] u):
    cdef Py_ssize_t cols = u.shape[1]
    cdef Py_ssize_t j, c
    cdef double acc0 = 0.0, acc1 = 0.0
    for j in range(cols):
        acc0 += u[1, j, 0]
        acc1 += u[1, j, 1]
    acc0 /= cols
    acc1 /= cols
    for j in range(cols):
        u[0, j, 0] = acc0
        u[0, j, 1] = acc1


def gs_energy(double[:, :, ::1] u, double dtheta):
    cdef Py_ssize_t n_rings = u.shape[0] - 1
    cdef Py_ssize_t cols = u.shape[1]
    cdef Py_ssize_t i, j, jr, c
    cdef double total = 0.0, w, d
    for i in range(n_rings):
        w = (i + 0.5) * dtheta
        for j in range(cols):
            for c in range(2):
                d = u[i + 1, j, c] - u[i, j, c]
                total += w * d * d
    for i in range(1, n_rings + 1):
        w = 1.0 / (i * dtheta)
        for j in range(cols):
            jr = j + 1 if j + 1 < cols else 0
            for c in range(2):
                d = u[i, jr, c] - u[i, j, c]
                total += w * d * d
    return total
