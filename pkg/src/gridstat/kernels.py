"""Radial basis functions, their derivatives, and the shape-parameter rule.

Three kernels are supported: Gaussian, inverse quadric and Wendland's
compactly supported C2 function.  Each kernel carries a shape parameter
``alpha`` (units 1/length).  The constant ``omega`` is, for each kernel,
``alpha`` times the radius of its non-stationary inflection point; the
default ``alpha`` for a grid with diagonal step ``d`` places that
inflection radius at ``3*d``, the farthest in-patch distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class KernelKind(Enum):
    GAUSSIAN = "gaussian"
    INVERSE_QUADRIC = "iq"
    WENDLAND31 = "wendland"


#: omega = alpha * (radius of the non-stationary inflection point of phi)
OMEGA = {
    KernelKind.GAUSSIAN: 1.0 / math.sqrt(2.0),
    KernelKind.INVERSE_QUADRIC: 1.0 / math.sqrt(3.0),
    KernelKind.WENDLAND31: 0.25,
}


def shape_parameter(kind: KernelKind, d: float) -> float:
    """Default shape parameter alpha = omega / (3 d) for diagonal step d."""
    if d <= 0:
        raise ValueError(f"diagonal step must be positive, got {d}")
    return OMEGA[kind] / (3.0 * d)


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    return r


@dataclass(frozen=True)
class Kernel:
    """One RBF with its shape parameter.

    All evaluation methods accept scalars or numpy arrays and are pure;
    instances are immutable and safe to share across threads.
    """

    kind: KernelKind
    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def omega(self) -> float:
        return OMEGA[self.kind]

    def phi(self, r):
        """Kernel value phi(r); phi(0) = 1 for every kind."""
        r = _check_r(r)
        u = self.alpha * r
        if self.kind is KernelKind.GAUSSIAN:
            out = np.exp(-(u * u))
        elif self.kind is KernelKind.INVERSE_QUADRIC:
            out = 1.0 / (1.0 + u * u)
        else:
            t = np.maximum(1.0 - u, 0.0)
            out = t ** 4 * (4.0 * u + 1.0)
        return out if out.ndim else float(out)

    def phi_prime(self, r):
        """d(phi)/dr; every kind carries a factor r, so phi'(0) = 0."""
        r = _check_r(r)
        out = self.psi(r) * r
        return out if np.ndim(out) else float(out)

    def phi_second(self, r):
        """d2(phi)/dr2, derived analytically from the phi' column."""
        r = _check_r(r)
        a2 = self.alpha * self.alpha
        u = self.alpha * r
        u2 = u * u
        if self.kind is KernelKind.GAUSSIAN:
            out = (4.0 * a2 * u2 - 2.0 * a2) * np.exp(-u2)
        elif self.kind is KernelKind.INVERSE_QUADRIC:
            out = (6.0 * a2 * u2 - 2.0 * a2) / (1.0 + u2) ** 3
        else:
            t = np.maximum(1.0 - u, 0.0)
            out = -20.0 * a2 * t * t * (1.0 - 4.0 * u)
            out = np.where(u < 1.0, out, 0.0)
        return out if out.ndim else float(out)

    def psi(self, r):
        """phi'(r)/r, continuously extended to r = 0.

        Each kind reduces to a closed form with no division by r:
          Gaussian         -2 a^2 exp(-(ar)^2)
          inverse quadric  -2 a^2 (1+(ar)^2)^-2
          Wendland 3,1     -20 a^2 (1-ar)_+^3
        """
        r = _check_r(r)
        a2 = self.alpha * self.alpha
        u = self.alpha * r
        if self.kind is KernelKind.GAUSSIAN:
            out = -2.0 * a2 * np.exp(-(u * u))
        elif self.kind is KernelKind.INVERSE_QUADRIC:
            out = -2.0 * a2 / (1.0 + u * u) ** 2
        else:
            out = -20.0 * a2 * np.maximum(1.0 - u, 0.0) ** 3
        return out if out.ndim else float(out)

    def eta(self, r):
        """(phi''(r) r - phi'(r)) / r^3 = psi'(r)/r, the radial weight of the
        rank-one part of d/dx [psi(|x|) x] = eta(|x|) x x^T + psi(|x|) I.

        Gaussian and inverse quadric have smooth closed forms.  Wendland's
        eta behaves like 60 a^3 / r near 0; since it only ever multiplies
        the outer product (x-c)(x-c)^T, which vanishes quadratically there,
        the r = 0 value is taken as 0 so the Jacobian term stays finite.
        """
        r = _check_r(r)
        a2 = self.alpha * self.alpha
        a4 = a2 * a2
        u = self.alpha * r
        u2 = u * u
        if self.kind is KernelKind.GAUSSIAN:
            out = 4.0 * a4 * np.exp(-u2)
        elif self.kind is KernelKind.INVERSE_QUADRIC:
            out = 8.0 * a4 / (1.0 + u2) ** 3
        else:
            t = np.maximum(1.0 - u, 0.0)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                out = np.where(r > 0, 60.0 * a2 * self.alpha * t * t / np.where(r > 0, r, 1.0), 0.0)
        return out if out.ndim else float(out)


def kernel_for_grid(kind: KernelKind, d: float) -> Kernel:
    """Kernel with the default shape parameter for diagonal step d."""
    return Kernel(kind, shape_parameter(kind, d))
