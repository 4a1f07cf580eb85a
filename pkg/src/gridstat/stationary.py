"""Piecewise stationary-point sweep and duplicate reduction.

Every 4x4 window of the grid is interpolated with the shared patch matrix,
Newton's method with the analytic Jacobian is multistarted inside the
window's search domain, and the accepted roots are merged across windows by
anchored centroid reduction (merge radius = the grid diagonal d).

The Newton engine is vectorized over seeds; ``sweep`` batches the seeds of
all patches through it at once, ``find_patch_stationary`` feeds it a single
patch, and both produce identical floating-point results because the engine
only uses elementwise operations and fixed-order row sums.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grid import GridField, diag_step
from .kernels import Kernel
from .patch import PatchInterpolant, PatchMatrix, patch_offsets

log = logging.getLogger(__name__)

_SINGULAR_DET = 1e-14  # |det J| threshold, relative to ||J||_F^2


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the per-patch Newton search (lengths in units of d)."""

    seeds_per_axis: int = 3
    max_iterations: int = 30
    step_tolerance: float = 1e-10
    gradient_tolerance_rel: float = 1e-8
    dedup_radius: float = 1e-3
    flat_patch_threshold: float = 1e-13

    def __post_init__(self):
        if self.seeds_per_axis < 2:
            raise ValueError("seeds_per_axis must be at least 2")
        for name in ("max_iterations", "step_tolerance", "gradient_tolerance_rel",
                     "dedup_radius", "flat_patch_threshold"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class SearchDomain:
    """Axis-aligned box in which roots of one patch are accepted."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", np.asarray(self.lo, float))
        object.__setattr__(self, "hi", np.asarray(self.hi, float))
        if not np.all(self.lo < self.hi):
            raise ValueError("search domain must have lo < hi componentwise")

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        return np.all((x >= self.lo) & (x <= self.hi), axis=-1)


@dataclass(frozen=True, eq=False)
class RawStationaryPoint:
    position: np.ndarray  # (2,)
    patch: tuple[int, int]  # (i, j), 1-based
    seed_index: int


class Classification(Enum):
    MINIMUM = "minimum"
    MAXIMUM = "maximum"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class StationaryPoint:
    position: np.ndarray  # (2,)
    value: float
    classification: Classification
    members_merged: int


def patch_domain(g: GridField, i: int, j: int) -> SearchDomain:
    """Search domain of patch (i, j): the central cell widened by half a
    spacing per side, with the widening replaced by extension to the grid
    boundary on sides where the patch touches it."""
    if not (1 <= i <= g.ny - 3 and 1 <= j <= g.nx - 3):
        raise IndexError(f"patch ({i},{j}) outside valid range")
    x0, y0 = g.origin
    lo_x = x0 if j == 1 else x0 + j * g.dx - g.dx / 2
    hi_x = x0 + (g.nx - 1) * g.dx if j == g.nx - 3 else x0 + (j + 1) * g.dx + g.dx / 2
    lo_y = y0 if i == 1 else y0 + i * g.dy - g.dy / 2
    hi_y = y0 + (g.ny - 1) * g.dy if i == g.ny - 3 else y0 + (i + 1) * g.dy + g.dy / 2
    return SearchDomain(lo=np.array([lo_x, lo_y]), hi=np.array([hi_x, hi_y]))


# ---------------------------------------------------------------------------
# Newton engine (vectorized over seeds)
# ---------------------------------------------------------------------------

def _grad_jac(x, centers, weights, kernel):
    """Gradient and symmetric Jacobian of the gradient field, per seed.

    x (S,2), centers (S,16,2), weights (S,16).  Uses only elementwise ops
    and fixed-order row sums so results do not depend on batch size.
    """
    diff = x[:, None, :] - centers
    r = np.sqrt(diff[..., 0] ** 2 + diff[..., 1] ** 2)
    cpsi = weights * kernel.psi(r)
    ceta = weights * kernel.eta(r)
    gx = (cpsi * diff[..., 0]).sum(axis=1)
    gy = (cpsi * diff[..., 1]).sum(axis=1)
    tr = cpsi.sum(axis=1)
    jxx = (ceta * diff[..., 0] ** 2).sum(axis=1) + tr
    jxy = (ceta * diff[..., 0] * diff[..., 1]).sum(axis=1)
    jyy = (ceta * diff[..., 1] ** 2).sum(axis=1) + tr
    return gx, gy, jxx, jxy, jyy


def _newton_seeds(seeds, centers, weights, kernel, bbox_lo, bbox_hi, cfg, d):
    """Run Newton from every seed; returns (positions, converged mask).

    Iterates are clamped to the patch bounding box [bbox_lo, bbox_hi];
    convergence is a pre-clamp Newton step of norm <= step_tolerance * d.
    Seeds hitting a singular Jacobian or the iteration cap are dropped.
    """
    x = np.array(seeds, dtype=float)
    n = x.shape[0]
    alive = np.ones(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    step_tol = cfg.step_tolerance * d
    for _ in range(cfg.max_iterations):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        gx, gy, jxx, jxy, jyy = _grad_jac(x[idx], centers[idx], weights[idx], kernel)
        det = jxx * jyy - jxy * jxy
        frob2 = jxx * jxx + 2.0 * jxy * jxy + jyy * jyy
        ok = np.abs(det) >= _SINGULAR_DET * frob2
        alive[idx[~ok]] = False
        idx = idx[ok]
        if idx.size == 0:
            break
        det = det[ok]
        sx = (jyy[ok] * gx[ok] - jxy[ok] * gy[ok]) / det
        sy = (jxx[ok] * gy[ok] - jxy[ok] * gx[ok]) / det
        x[idx, 0] = np.minimum(np.maximum(x[idx, 0] - sx, bbox_lo[idx, 0]), bbox_hi[idx, 0])
        x[idx, 1] = np.minimum(np.maximum(x[idx, 1] - sy, bbox_lo[idx, 1]), bbox_hi[idx, 1])
        done = np.sqrt(sx * sx + sy * sy) <= step_tol
        converged[idx[done]] = True
        alive[idx[done]] = False
    return x, converged


def _seed_lattice(dom: SearchDomain, n: int) -> np.ndarray:
    """n x n lattice strictly inside the domain, row-major (y outer)."""
    t = np.arange(1, n + 1) / (n + 1)
    fx = dom.lo[0] + (dom.hi[0] - dom.lo[0]) * t
    fy = dom.lo[1] + (dom.hi[1] - dom.lo[1]) * t
    gx, gy = np.meshgrid(fx, fy)
    return np.column_stack([gx.ravel(), gy.ravel()])


def _accept_and_dedup(pos, converged, dom, interp_kernel, centers, weights,
                      cfg, d, tol_g):
    """Filter converged roots to the domain and gradient tolerance, then
    dedup in seed order.  Returns list of (seed_index, position)."""
    keep = []
    s = np.flatnonzero(converged)
    if s.size == 0:
        return keep
    gx, gy, *_ = _grad_jac(pos[s], centers[s], weights[s], interp_kernel)
    gnorm = np.sqrt(gx * gx + gy * gy)
    inside = dom.contains(pos[s])
    min_sep = cfg.dedup_radius * d
    for k, seed_idx in enumerate(s):
        if not (inside[k] and gnorm[k] <= tol_g):
            continue
        p = pos[seed_idx]
        if all(np.hypot(p[0] - q[0], p[1] - q[1]) > min_sep for _, q in keep):
            keep.append((int(seed_idx), p))
    return keep


def find_patch_stationary(p: PatchInterpolant, dom: SearchDomain,
                          cfg: SolverConfig = SolverConfig(),
                          field_range: float | None = None,
                          d: float | None = None,
                          patch: tuple[int, int] = (1, 1)) -> list[RawStationaryPoint]:
    """Stationary points of one patch interpolant inside its search domain.

    ``field_range`` and ``d`` default to the patch's own sample range and
    center-diagonal step; ``sweep`` passes the global values instead.
    """
    centers = np.asarray(p.centers, float)
    if d is None:
        dx = (centers[:, 0].max() - centers[:, 0].min()) / 3.0
        dy = (centers[:, 1].max() - centers[:, 1].min()) / 3.0
        d = float(np.hypot(dx, dy))
    h = np.asarray(p(centers), float)
    patch_range = float(h.max() - h.min())
    if field_range is None:
        field_range = patch_range
    if field_range <= 0 or patch_range <= cfg.flat_patch_threshold * field_range:
        log.debug("flat patch skipped (sample range %.3g of field range %.3g)",
                  patch_range, field_range)
        return []
    tol_g = cfg.gradient_tolerance_rel * field_range / d

    seeds = _seed_lattice(dom, cfg.seeds_per_axis)
    n = seeds.shape[0]
    w = np.asarray(p.weights, float)
    centers_b = np.broadcast_to(centers, (n, 16, 2))
    weights_b = np.broadcast_to(w, (n, 16))
    bbox_lo = np.broadcast_to(centers.min(axis=0), (n, 2))
    bbox_hi = np.broadcast_to(centers.max(axis=0), (n, 2))
    pos, conv = _newton_seeds(seeds, centers_b, weights_b, p.kernel,
                              bbox_lo, bbox_hi, cfg, d)
    kept = _accept_and_dedup(pos, conv, dom, p.kernel, centers_b, weights_b,
                             cfg, d, tol_g)
    return [RawStationaryPoint(position=q, patch=patch, seed_index=si)
            for si, q in kept]


# ---------------------------------------------------------------------------
# Full sweep
# ---------------------------------------------------------------------------

@dataclass
class SweepResult:
    """Raw points plus the per-patch interpolation data needed downstream."""

    raw: list[RawStationaryPoint]
    matrix: PatchMatrix
    weights: np.ndarray        # (npatch, 16) float64
    patch_origins: np.ndarray  # (npatch, 2)
    grid: GridField
    flat_patches: list[tuple[int, int]]

    def interpolant(self, i: int, j: int) -> PatchInterpolant:
        pidx = (i - 1) * (self.grid.nx - 3) + (j - 1)
        centers = self.patch_origins[pidx] + patch_offsets(self.grid.dx, self.grid.dy)
        return PatchInterpolant(centers=centers, weights=self.weights[pidx],
                                kernel=self.matrix.kernel)


def sweep(g: GridField, kernel: Kernel, cfg: SolverConfig = SolverConfig(),
          threads: int = 1) -> list[RawStationaryPoint]:
    """All raw stationary points of the grid, ordered by (i, j, seed)."""
    return sweep_full(g, kernel, cfg, threads).raw


def sweep_full(g: GridField, kernel: Kernel, cfg: SolverConfig = SolverConfig(),
               threads: int = 1) -> SweepResult:
    npi, npj = g.ny - 3, g.nx - 3
    npatch = npi * npj
    d = diag_step(g)
    field_range = g.field_range
    tol_g = cfg.gradient_tolerance_rel * field_range / d

    matrix = PatchMatrix(kernel, g.dx, g.dy)
    windows = np.lib.stride_tricks.sliding_window_view(g.grid2d(), (4, 4))
    h = windows.reshape(npi, npj, 16).reshape(npatch, 16)
    weights = np.asarray(matrix.solve_weights(h), dtype=float)

    ii, jj = np.divmod(np.arange(npatch), npj)  # 0-based patch row/col
    origins = np.column_stack([g.origin[0] + jj * g.dx, g.origin[1] + ii * g.dy])

    # per-patch search domains, same arithmetic as patch_domain
    doms = [patch_domain(g, int(i) + 1, int(j) + 1) for i, j in zip(ii, jj)]
    lo = np.array([dm.lo for dm in doms])
    hi = np.array([dm.hi for dm in doms])

    patch_range = h.max(axis=1) - h.min(axis=1)
    active = patch_range > cfg.flat_patch_threshold * field_range
    if field_range <= 0:
        active[:] = False
    flat = [(int(i) + 1, int(j) + 1)
            for i, j in zip(ii[~active], jj[~active])]
    if flat:
        log.debug("%d flat patches skipped", len(flat))

    ns = cfg.seeds_per_axis
    nseed = ns * ns
    act = np.flatnonzero(active)
    # seed lattice per active patch, row-major in (y, x) like _seed_lattice
    t = np.arange(1, ns + 1) / (ns + 1)
    fx = lo[act, 0, None] + (hi[act, 0] - lo[act, 0])[:, None] * t  # (P, ns)
    fy = lo[act, 1, None] + (hi[act, 1] - lo[act, 1])[:, None] * t
    seeds = np.empty((act.size, nseed, 2))
    seeds[:, :, 0] = np.repeat(fx[:, None, :], ns, axis=1).reshape(act.size, nseed)
    seeds[:, :, 1] = np.repeat(fy[:, :, None], ns, axis=2).reshape(act.size, nseed)

    offs = patch_offsets(g.dx, g.dy)
    centers_all = origins[act][:, None, :] + offs[None, :, :]  # (P,16,2)
    bbox_lo = origins[act]
    bbox_hi = origins[act] + offs[15]

    def run(sl: slice):
        pat = act[sl]
        npat = pat.size
        s = seeds[sl].reshape(npat * nseed, 2)
        cb = np.repeat(centers_all[sl], nseed, axis=0)
        wb = np.repeat(weights[pat], nseed, axis=0)
        bl = np.repeat(bbox_lo[sl], nseed, axis=0)
        bh = np.repeat(bbox_hi[sl], nseed, axis=0)
        pos, conv = _newton_seeds(s, cb, wb, kernel, bl, bh, cfg, d)
        out = []
        for k in range(npat):
            rows = slice(k * nseed, (k + 1) * nseed)
            dom = SearchDomain(lo=lo[pat[k]], hi=hi[pat[k]])
            kept = _accept_and_dedup(pos[rows], conv[rows], dom,
                                     kernel, cb[rows], wb[rows], cfg, d, tol_g)
            i, j = int(ii[pat[k]]) + 1, int(jj[pat[k]]) + 1
            out.extend(RawStationaryPoint(position=q, patch=(i, j), seed_index=si)
                       for si, q in kept)
        return out

    nthreads = max(1, int(threads))
    if nthreads == 1 or act.size == 0:
        raw = run(slice(0, act.size))
    else:
        chunk = -(-act.size // nthreads)
        slices = [slice(s0, min(s0 + chunk, act.size))
                  for s0 in range(0, act.size, chunk)]
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            parts = list(pool.map(run, slices))
        raw = [p for part in parts for p in part]

    return SweepResult(raw=raw, matrix=matrix, weights=weights,
                       patch_origins=origins, grid=g, flat_patches=flat)


# ---------------------------------------------------------------------------
# Reduction of duplicates
# ---------------------------------------------------------------------------

def classify(jac: np.ndarray, scale: float) -> Classification:
    """Classify by Hessian eigenvalue signs; near-zero eigenvalues (below
    1e-9 * scale) make the point degenerate."""
    lam = np.linalg.eigvalsh(np.asarray(jac, float))
    if np.any(np.abs(lam) < 1e-9 * scale):
        return Classification.DEGENERATE
    if np.all(lam > 0):
        return Classification.MINIMUM
    if np.all(lam < 0):
        return Classification.MAXIMUM
    return Classification.SADDLE


def reduce_points(raw: list[RawStationaryPoint], d: float,
                  interpolant_for=None,
                  hessian_scale: float | None = None) -> list[StationaryPoint]:
    """Anchored centroid reduction: repeatedly take the first remaining
    point, merge everything within d of *it* (anchor semantics), and emit
    the centroid.  Value and classification come from the patch interpolant
    of the cluster's first member when ``interpolant_for(i, j)`` is given.
    """
    remaining = list(raw)
    out = []
    while remaining:
        anchor = remaining[0]
        ap = np.asarray(anchor.position, float)
        cluster = [r for r in remaining
                   if np.hypot(*(np.asarray(r.position, float) - ap)) <= d]
        remaining = [r for r in remaining if r not in cluster]
        centroid = np.mean([np.asarray(r.position, float) for r in cluster], axis=0)
        if interpolant_for is not None:
            interp = interpolant_for(*anchor.patch)
            value = float(interp(centroid))
            scale = hessian_scale
            if scale is None:
                jac0 = interp.gradient_jacobian(centroid)
                scale = max(float(np.abs(np.linalg.eigvalsh(jac0)).max()), 1.0)
            cls = classify(interp.gradient_jacobian(centroid), scale)
        else:
            value = float("nan")
            cls = Classification.DEGENERATE
        out.append(StationaryPoint(position=centroid, value=value,
                                   classification=cls, members_merged=len(cluster)))
    return out
