"""16-point (4x4) RBF interpolation patches.

The interpolation matrix depends only on the kernel and the grid spacing,
never on where the patch sits, so it is built and factorized once per run
and reused for every patch.  The factorization is an in-house LU with
partial pivoting carried out in extended precision: at the default shape
parameters the Gaussian matrix has condition number ~1e10, and float64
elimination would leave weight errors visible at the interpolation-property
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import Kernel


class FactorizationError(RuntimeError):
    """The patch interpolation matrix could not be factorized."""


def lu_factor_pp(a: np.ndarray):
    """LU decomposition with partial pivoting, dtype-preserving.

    Returns (lu, piv) in the packed convention: L has unit diagonal and is
    stored below it, U on and above.  Raises FactorizationError on a zero
    pivot column.
    """
    lu = np.array(a, copy=True)
    n = lu.shape[0]
    piv = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if lu[p, k] == 0:
            raise FactorizationError(f"zero pivot in column {k}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def lu_solve_pp(lu: np.ndarray, piv: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b for one or many right-hand sides (columns of b)."""
    x = np.array(b[piv], dtype=lu.dtype, copy=True)
    n = lu.shape[0]
    for k in range(1, n):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        x[k] -= lu[k, k + 1:] @ x[k + 1:]
        x[k] /= lu[k, k]
    return x


# canonical 4x4 layout: node m = 4*row + col at (col*dx, row*dy)
_OFFS = np.array([(j, i) for i in range(4) for j in range(4)], dtype=float)


def patch_offsets(dx: float, dy: float) -> np.ndarray:
    """Positions of the 16 canonical patch nodes, row-major, shape (16, 2)."""
    return _OFFS * np.array([dx, dy])


class PatchMatrix:
    """The shared 16x16 interpolation matrix and its factorization."""

    def __init__(self, kernel: Kernel, dx: float, dy: float):
        if not (dx > 0 and dy > 0):
            raise ValueError("grid spacing must be positive")
        self.kernel = kernel
        self.dx = dx
        self.dy = dy
        pts = patch_offsets(dx, dy)
        dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        self.entries = kernel.phi(dist)
        try:
            self._lu, self._piv = lu_factor_pp(self.entries.astype(np.longdouble))
        except FactorizationError as exc:
            raise FactorizationError(
                f"interpolation matrix is singular for kernel "
                f"{kernel.kind.value} with alpha={kernel.alpha}: {exc}") from exc

    def solve_weights(self, h) -> np.ndarray:
        """Weights c with A c = h; h is (16,) or (npatch, 16).

        Returned in extended precision; cast to float64 where speed matters.
        """
        h = np.asarray(h)
        if not np.all(np.isfinite(h)):
            raise ValueError("sample values must be finite")
        if h.ndim == 1:
            return lu_solve_pp(self._lu, self._piv, h.astype(np.longdouble))
        return lu_solve_pp(self._lu, self._piv, h.T.astype(np.longdouble)).T


def build_patch_matrix(kernel: Kernel, dx: float, dy: float) -> PatchMatrix:
    return PatchMatrix(kernel, dx, dy)


@dataclass(frozen=True)
class PatchInterpolant:
    """RBF interpolant over one 16-center patch."""

    centers: np.ndarray  # (16, 2)
    weights: np.ndarray  # (16,)
    kernel: Kernel

    def _radii(self, x):
        x = np.asarray(x, dtype=float)
        diff = x[..., None, :] - np.asarray(self.centers, dtype=float)
        return diff, np.linalg.norm(diff, axis=-1)

    def __call__(self, x):
        """Interpolant value; x is (2,) or (..., 2)."""
        _, r = self._radii(x)
        out = self.kernel.phi(r) @ np.asarray(self.weights)
        return float(out) if np.ndim(out) == 0 else np.asarray(out, float)

    def gradient(self, x) -> np.ndarray:
        """Gradient sum_m c_m psi(|x - x_m|) (x - x_m); shape (..., 2)."""
        diff, r = self._radii(x)
        w = np.asarray(self.weights, dtype=float)
        return np.einsum("...m,...mk->...k", w * self.kernel.psi(r), diff)

    def gradient_jacobian(self, x) -> np.ndarray:
        """Jacobian of the gradient field (the interpolant's Hessian).

        J = sum_m c_m [ eta(r_m) (x-x_m)(x-x_m)^T + psi(r_m) I ]; symmetric.
        """
        diff, r = self._radii(x)
        w = np.asarray(self.weights, dtype=float)
        outer = np.einsum("...mi,...mj->...mij", diff, diff)
        ce = w * self.kernel.eta(r)
        jac = np.einsum("...m,...mij->...ij", ce, outer)
        trace = (w * self.kernel.psi(r)).sum(axis=-1)
        jac[..., 0, 0] += trace
        jac[..., 1, 1] += trace
        return jac


def interpolate_patch(m: PatchMatrix, centers: np.ndarray, h) -> PatchInterpolant:
    """Solve for weights and wrap the result as an interpolant."""
    return PatchInterpolant(centers=np.asarray(centers, float),
                            weights=m.solve_weights(h), kernel=m.kernel)
