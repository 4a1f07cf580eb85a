"""Regular-grid scalar fields: representation, CSV I/O, built-in samplers.

A :class:`GridField` stores an ``ny x nx`` grid row-major (row index maps to
y, column index to x; indices are 1-based in the public accessors).  Six
built-in test functions cover the isolated-point and curve benchmarks used
by the acceptance suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


@dataclass(frozen=True)
class GridField:
    """Scalar samples on a regular nx-by-ny grid (immutable)."""

    nx: int
    ny: int
    dx: float
    dy: float
    origin: tuple[float, float]
    values: np.ndarray  # shape (ny*nx,), row-major

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ValueError(f"grid must be at least 4x4, got {self.nx}x{self.ny}")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError(f"grid spacing must be positive, got dx={self.dx}, dy={self.dy}")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.nx * self.ny,):
            raise ValueError(f"expected {self.nx * self.ny} values, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    def node_position(self, i: int, j: int) -> np.ndarray:
        """Position of node at row i, column j (both 1-based)."""
        if not (1 <= i <= self.ny and 1 <= j <= self.nx):
            raise IndexError(f"node ({i},{j}) outside {self.ny}x{self.nx} grid")
        return np.array([self.origin[0] + (j - 1) * self.dx,
                         self.origin[1] + (i - 1) * self.dy])

    def flat_index(self, i: int, j: int) -> int:
        """Row-major flat index of node (i, j), 0-based into ``values``."""
        if not (1 <= i <= self.ny and 1 <= j <= self.nx):
            raise IndexError(f"node ({i},{j}) outside {self.ny}x{self.nx} grid")
        return (i - 1) * self.nx + (j - 1)

    @property
    def field_range(self) -> float:
        return float(self.values.max() - self.values.min())

    def grid2d(self) -> np.ndarray:
        """Values reshaped to (ny, nx)."""
        return self.values.reshape(self.ny, self.nx)


def diag_step(g: GridField) -> float:
    """Diagonal step d = sqrt(dx^2 + dy^2) of the grid cell."""
    return math.hypot(g.dx, g.dy)


# ---------------------------------------------------------------------------
# Built-in test functions
# ---------------------------------------------------------------------------

def _f1(x, y):
    # Note: the second bump's y-exponent is -(9y+1)/10, linear in y.  Classic
    # Franke variants square this term; here the linear form is intentional.
    return (0.75 * np.exp(-(9 * x - 2) ** 2 / 4 - (9 * y - 2) ** 2 / 4)
            + 0.75 * np.exp(-(9 * x + 1) ** 2 / 49 - (9 * y + 1) / 10)
            + 0.5 * np.exp(-(9 * x - 7) ** 2 / 4 - (9 * y - 3) ** 2 / 4)
            - 0.2 * np.exp(-(9 * x - 4) ** 2 - (9 * y - 7) ** 2))


def _f1_grad(x, y):
    e1 = np.exp(-(9 * x - 2) ** 2 / 4 - (9 * y - 2) ** 2 / 4)
    e2 = np.exp(-(9 * x + 1) ** 2 / 49 - (9 * y + 1) / 10)
    e3 = np.exp(-(9 * x - 7) ** 2 / 4 - (9 * y - 3) ** 2 / 4)
    e4 = np.exp(-(9 * x - 4) ** 2 - (9 * y - 7) ** 2)
    gx = (0.75 * e1 * (-4.5 * (9 * x - 2)) + 0.75 * e2 * (-18 * (9 * x + 1) / 49)
          + 0.5 * e3 * (-4.5 * (9 * x - 7)) - 0.2 * e4 * (-18 * (9 * x - 4)))
    gy = (0.75 * e1 * (-4.5 * (9 * y - 2)) + 0.75 * e2 * (-0.9)
          + 0.5 * e3 * (-4.5 * (9 * y - 3)) - 0.2 * e4 * (-18 * (9 * y - 7)))
    return np.stack(np.broadcast_arrays(gx, gy), axis=-1)


def _f2(x, y):
    return np.sin(3 * x) * np.cos(3 * y)


def _f2_grad(x, y):
    return np.stack(np.broadcast_arrays(3 * np.cos(3 * x) * np.cos(3 * y),
                                        -3 * np.sin(3 * x) * np.sin(3 * y)), axis=-1)


def _f11(x, y):
    return -((x - y) ** 2)


def _f11_grad(x, y):
    return np.stack(np.broadcast_arrays(-2 * (x - y), 2 * (x - y)), axis=-1)


def _f12(x, y):
    return np.sin(x + y ** 2)


def _f12_grad(x, y):
    c = np.cos(x + y ** 2)
    return np.stack(np.broadcast_arrays(c, 2 * y * c), axis=-1)


def _f13(x, y):
    return np.sin(3 * np.pi * (np.sqrt(x ** 2 + y ** 2) + 0.25))


def _f13_grad(x, y):
    r = np.sqrt(x ** 2 + y ** 2)
    c = 3 * np.pi * np.cos(3 * np.pi * (r + 0.25))
    with np.errstate(divide="ignore", invalid="ignore"):
        gx = np.where(r > 0, c * x / np.where(r > 0, r, 1.0), 0.0)
        gy = np.where(r > 0, c * y / np.where(r > 0, r, 1.0), 0.0)
    return np.stack(np.broadcast_arrays(gx, gy), axis=-1)


def _f14(x, y):
    return -2 * (x ** 2 - y ** 2) ** 2 + 1


def _f14_grad(x, y):
    q = x ** 2 - y ** 2
    return np.stack(np.broadcast_arrays(-8 * x * q, 8 * y * q), axis=-1)


class TestFunction(Enum):
    """The six built-in sampling functions with their domains."""

    F1 = "f1"
    F2 = "f2"
    F11 = "f11"
    F12 = "f12"
    F13 = "f13"
    F14 = "f14"

    @property
    def domain(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax)."""
        return _DOMAINS[self]

    def __call__(self, x, y):
        return _FUNCS[self](np.asarray(x, float), np.asarray(y, float))

    def gradient(self, x, y):
        """Analytic gradient, shape (..., 2)."""
        return _GRADS[self](np.asarray(x, float), np.asarray(y, float))


_DOMAINS = {
    TestFunction.F1: (0.0, 1.0, 0.0, 1.0),
    TestFunction.F2: (-2.0, 2.0, -2.0, 2.0),
    TestFunction.F11: (-1.0, 1.0, -1.0, 1.0),
    TestFunction.F12: (-3.0, 3.0, -2.0, 2.0),
    TestFunction.F13: (-1.0, 1.0, -1.0, 1.0),
    TestFunction.F14: (-1.0, 1.0, -1.0, 1.0),
}
_FUNCS = {
    TestFunction.F1: _f1, TestFunction.F2: _f2, TestFunction.F11: _f11,
    TestFunction.F12: _f12, TestFunction.F13: _f13, TestFunction.F14: _f14,
}
_GRADS = {
    TestFunction.F1: _f1_grad, TestFunction.F2: _f2_grad, TestFunction.F11: _f11_grad,
    TestFunction.F12: _f12_grad, TestFunction.F13: _f13_grad, TestFunction.F14: _f14_grad,
}


def sample(tf: TestFunction, nx: int, ny: int) -> GridField:
    """Sample a test function on a uniform grid including both endpoints."""
    if nx < 4 or ny < 4:
        raise ValueError("nx and ny must be at least 4")
    xmin, xmax, ymin, ymax = tf.domain
    dx = (xmax - xmin) / (nx - 1)
    dy = (ymax - ymin) / (ny - 1)
    xs = xmin + dx * np.arange(nx)
    ys = ymin + dy * np.arange(ny)
    X, Y = np.meshgrid(xs, ys)
    return GridField(nx=nx, ny=ny, dx=dx, dy=dy, origin=(xmin, ymin),
                     values=tf(X, Y).ravel())


# ---------------------------------------------------------------------------
# CSV I/O
#
# Line 1: "nx,ny,dx,dy,x0,y0".  Then ny lines of nx comma-separated values,
# row-major.  Floats are written with repr so load(save(g)) is bit-exact.
# ---------------------------------------------------------------------------

class GridFormatError(ValueError):
    """Malformed grid CSV; message carries the offending line number."""


def save_csv(g: GridField, path) -> None:
    rows = g.grid2d()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{g.nx},{g.ny},{float(g.dx)!r},{float(g.dy)!r},"
                 f"{float(g.origin[0])!r},{float(g.origin[1])!r}\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_csv(path) -> GridField:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise GridFormatError("line 1: empty file")
    head = lines[0].split(",")
    if len(head) != 6:
        raise GridFormatError(f"line 1: expected 6 header fields, got {len(head)}")
    try:
        nx, ny = int(head[0]), int(head[1])
        dx, dy, x0, y0 = (float(s) for s in head[2:])
    except ValueError as exc:
        raise GridFormatError(f"line 1: malformed header: {exc}") from None
    if nx < 4 or ny < 4:
        raise GridFormatError(f"line 1: grid must be at least 4x4, got {nx}x{ny}")
    if len(lines) - 1 != ny:
        raise GridFormatError(f"expected {ny} value rows, got {len(lines) - 1} "
                              f"(expected {nx * ny} values)")
    values = np.empty((ny, nx))
    for r, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != nx:
            raise GridFormatError(f"line {r}: expected {nx} values, got {len(parts)} "
                                  f"(grid needs {nx * ny} values)")
        try:
            row = np.array([float(s) for s in parts])
        except ValueError as exc:
            raise GridFormatError(f"line {r}: {exc}") from None
        if not np.all(np.isfinite(row)):
            raise GridFormatError(f"line {r}: non-finite value")
        values[r - 2] = row
    return GridField(nx=nx, ny=ny, dx=dx, dy=dy, origin=(x0, y0), values=values.ravel())
