"""2D upscaling driver for cell-centered window extensions.

The unit square is partitioned into n x n macro cells of size h; the window
of cell j is the (k*h)-square sharing its center.  Each window gets two
periodic cell solves on an n_c x n_c grid, an effective tensor, and a stored
central block of the cell solutions (the part covering the macro cell) for
the corrector.  Window sample points of all cells live on one shared
lattice, so the coefficient is evaluated once per run.
"""

from __future__ import annotations

import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from homoglab import fem2d
from homoglab.errors import NoConvergence, QueryOutsideDomain
from homoglab.metrics import p1_interpolate

STORE_MAGIC = b"HGCS"
STORE_VERSION = 1


@dataclass(frozen=True)
class UpscaleConfig:
    """Geometry of one upscaling run.

    n: macro cells per side (h = 1/n); k: window size in cells; n_c: cell
    problem grid; n_cs: stored cell-solution resolution (divides n_c).
    """

    n: int
    k: int = 2
    n_c: int = 64
    n_cs: int | None = None

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be positive integers")
        if self.n_c < 16:
            raise ValueError("cell grid must have at least 16 squares per side")
        if self.n_c % (2 * self.k) != 0:
            raise ValueError("n_c must be divisible by 2k (lattice alignment)")
        if self.n_cs is None:
            object.__setattr__(self, "n_cs", min(self.n_c, 128))
        if self.n_c % self.n_cs != 0 or self.n_cs % self.k != 0:
            raise ValueError("n_cs must divide n_c and be divisible by k")
        if self.k > 1 and (self.n_cs // self.k) % 2 != 0:
            raise ValueError("stored block must align with the window center")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def eps_bar(self) -> float:
        return self.k / self.n

    @property
    def block(self) -> int:
        """Stored nodes per side of one macro-cell block, minus one."""
        return self.n_cs // self.k


def default_cell_grid(oscillation_count: int, n: int, k: int = 2) -> int:
    """Cell grid so the union lattice (spacing k*h/n_c) resolves the
    coefficient with ~8 points per oscillation, clamped to [64, 512]."""
    need = 8 * oscillation_count * k / n
    n_c = 64
    while n_c < need and n_c < 512:
        n_c *= 2
    return n_c


@dataclass
class EffectiveField2D:
    """Per-cell effective tensors plus stored cell-solution blocks."""

    config: UpscaleConfig
    a11: np.ndarray  # (n, n)
    a12: np.ndarray
    a22: np.ndarray
    w1: np.ndarray  # (n, n, block+1, block+1)
    w2: np.ndarray
    asymmetry: np.ndarray = field(default=None)

    def contrast(self) -> float:
        """sup max(A11, A22) / inf min(A11, A22) over the macro cells."""
        hi = np.maximum(self.a11, self.a22).max()
        lo = np.minimum(self.a11, self.a22).min()
        return float(hi / lo)


def _lattice(cfg: UpscaleConfig):
    """Shared sample lattice and per-cell offsets.

    Cell (i1, i2) samples the coefficient at the n_c x n_c square centers of
    its window; those centers sit on one global lattice with spacing
    eps_bar/n_c because n_c is a multiple of 2k.
    """
    spacing = cfg.eps_bar / cfg.n_c
    # first lattice index of cell i: (2i+1)*n_c/(2k) - n_c/2
    n0 = (2 * np.arange(cfg.n) + 1) * cfg.n_c // (2 * cfg.k) - cfg.n_c // 2
    n_min = n0[0]
    count = n0[-1] + cfg.n_c - n_min
    coords = spacing * (np.arange(n_min, n_min + count) + 0.5)
    return coords, n0 - n_min


def _cell_block_slice(cfg: UpscaleConfig):
    stride = cfg.n_c // cfg.n_cs
    start = (cfg.n_cs // 2 - cfg.block // 2) * stride
    stop = start + cfg.block * stride + 1
    return slice(start, stop, stride)


def _solve_window(samples, cfg: UpscaleConfig):
    w1, w2 = fem2d.solve_cell_pair(samples)
    tensor = fem2d.averaged_tensor(samples, w1, w2)
    blk = _cell_block_slice(cfg)
    return tensor, w1[blk, blk].copy(), w2[blk, blk].copy()


def _worker(args):
    samples, cfg = args
    return _solve_window(samples, cfg)


def upscale_field(coeff, cfg: UpscaleConfig, threads: int = 1) -> EffectiveField2D:
    """Run all n^2 window solves and collect the effective field.

    coeff is any callable (x1, x2) -> positive values on R^2 (windows of
    boundary cells reach outside the unit square).  Results are placed by
    cell index, so the outcome is independent of worker count.
    """
    coords, offsets = _lattice(cfg)
    lattice_vals = coeff(coords[:, None], coords[None, :])
    n, n_c, b = cfg.n, cfg.n_c, cfg.block
    a11 = np.empty((n, n))
    a12 = np.empty((n, n))
    a22 = np.empty((n, n))
    asym = np.empty((n, n))
    w1 = np.empty((n, n, b + 1, b + 1))
    w2 = np.empty((n, n, b + 1, b + 1))

    def window(i1, i2):
        o1, o2 = offsets[i1], offsets[i2]
        return lattice_vals[o1 : o1 + n_c, o2 : o2 + n_c]

    cells = [(i1, i2) for i1 in range(n) for i2 in range(n)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(
                    _worker, ((window(i1, i2), cfg) for i1, i2 in cells), chunksize=8
                )
            )
        iterator = zip(cells, results)
    else:
        def _serial():
            for i1, i2 in cells:
                try:
                    yield (i1, i2), _solve_window(window(i1, i2), cfg)
                except NoConvergence as exc:
                    raise NoConvergence(f"cell ({i1}, {i2}): {exc}") from exc

        iterator = _serial()

    for (i1, i2), (tensor, b1, b2) in iterator:
        sym = tensor.sym
        a11[i1, i2] = sym[0, 0]
        a12[i1, i2] = sym[0, 1]
        a22[i1, i2] = sym[1, 1]
        asym[i1, i2] = tensor.asymmetry
        w1[i1, i2] = b1
        w2[i1, i2] = b2
    return EffectiveField2D(cfg, a11, a12, a22, w1, w2, asym)


def solve_macro(effective: EffectiveField2D, level: str = "h", f_const: float = 10.0):
    """Dirichlet solve with the piecewise-constant tensor field.

    level "h" solves on the macro grid; "h4" on the 4x-refined grid with
    each cell tensor replicated to its 16 sub-squares.
    """
    if level == "h":
        reps = 1
    elif level == "h4":
        reps = 4
    else:
        raise ValueError("level must be 'h' or 'h4'")
    rep = lambda a: np.repeat(np.repeat(a, reps, axis=0), reps, axis=1)
    return fem2d.solve_dirichlet(
        effective.config.n * reps,
        rep(effective.a11),
        rep(effective.a12),
        rep(effective.a22),
        f_const,
    )


def _center_gradients(u_h: np.ndarray, h: float):
    """Gradient at macro-square centers: central differences of the
    square-center averages of U, one-sided at the boundary."""
    uc = 0.25 * (u_h[:-1, :-1] + u_h[1:, :-1] + u_h[:-1, 1:] + u_h[1:, 1:])
    gx = np.empty_like(uc)
    gx[1:-1, :] = (uc[2:, :] - uc[:-2, :]) / (2 * h)
    gx[0, :] = (uc[1, :] - uc[0, :]) / h
    gx[-1, :] = (uc[-1, :] - uc[-2, :]) / h
    gy = np.empty_like(uc)
    gy[:, 1:-1] = (uc[:, 2:] - uc[:, :-2]) / (2 * h)
    gy[:, 0] = (uc[:, 1] - uc[:, 0]) / h
    gy[:, -1] = (uc[:, -1] - uc[:, -2]) / h
    return gx, gy


def _bilinear_centers(values: np.ndarray, x1, x2, n: int):
    """Bilinear interpolation from the n x n square-center grid, clamped to
    constant in the outer half-cell margin."""
    t1 = np.clip(x1 * n - 0.5, 0.0, n - 1.0)
    t2 = np.clip(x2 * n - 0.5, 0.0, n - 1.0)
    i = np.minimum(t1.astype(np.int64), n - 2) if n > 1 else np.zeros_like(t1, dtype=np.int64)
    j = np.minimum(t2.astype(np.int64), n - 2) if n > 1 else np.zeros_like(t2, dtype=np.int64)
    if n == 1:
        return np.broadcast_to(values[0, 0], np.broadcast(x1, x2).shape).copy()
    f1 = t1 - i
    f2 = t2 - j
    return (
        values[i, j] * (1 - f1) * (1 - f2)
        + values[i + 1, j] * f1 * (1 - f2)
        + values[i, j + 1] * (1 - f1) * f2
        + values[i + 1, j + 1] * f1 * f2
    )


def _block_values(blocks: np.ndarray, cell1, cell2, t1, t2):
    """Bilinear lookup of stored cell-solution blocks at local coordinates
    t in [0, 1]^2 of each macro cell."""
    b = blocks.shape[-1] - 1
    s1 = np.clip(t1 * b, 0.0, b)
    s2 = np.clip(t2 * b, 0.0, b)
    i = np.minimum(s1.astype(np.int64), b - 1)
    j = np.minimum(s2.astype(np.int64), b - 1)
    f1 = s1 - i
    f2 = s2 - j
    return (
        blocks[cell1, cell2, i, j] * (1 - f1) * (1 - f2)
        + blocks[cell1, cell2, i + 1, j] * f1 * (1 - f2)
        + blocks[cell1, cell2, i, j + 1] * (1 - f1) * f2
        + blocks[cell1, cell2, i + 1, j + 1] * f1 * f2
    )


def correct_2d(base_nodal, grad_source_h, effective: EffectiveField2D, x1, x2):
    """Corrected solution at query points.

    base_nodal: nodal field (any square grid) supplying the uncorrected
    values via P1 interpolation.  grad_source_h: nodal field on the macro
    h-grid used for the central-difference gradients (the macro solution or
    the projection of the refined one).
    """
    cfg = effective.config
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    x1b, x2b = np.broadcast_arrays(x1, x2)
    if np.any(x1b < 0) or np.any(x1b > 1) or np.any(x2b < 0) or np.any(x2b > 1):
        raise QueryOutsideDomain("correction queries must lie in [0, 1]^2")
    if grad_source_h.shape != (cfg.n + 1, cfg.n + 1):
        raise QueryOutsideDomain(
            f"gradient source must live on the macro grid ({cfg.n + 1} nodes/side)"
        )
    base = p1_interpolate(base_nodal, x1b, x2b)
    gx_c, gy_c = _center_gradients(np.asarray(grad_source_h, dtype=np.float64), cfg.h)
    gx = _bilinear_centers(gx_c, x1b, x2b, cfg.n)
    gy = _bilinear_centers(gy_c, x1b, x2b, cfg.n)
    c1 = np.clip((x1b * cfg.n).astype(np.int64), 0, cfg.n - 1)
    c2 = np.clip((x2b * cfg.n).astype(np.int64), 0, cfg.n - 1)
    t1 = x1b * cfg.n - c1
    t2 = x2b * cfg.n - c2
    w1 = _block_values(effective.w1, c1, c2, t1, t2)
    w2 = _block_values(effective.w2, c1, c2, t1, t2)
    return base + cfg.eps_bar * (w1 * gx + w2 * gy)


def save_cell_store(effective: EffectiveField2D, path) -> None:
    """Persist the stored cell solutions (binary, little-endian float64).

    Layout: magic "HGCS", uint32 version, int32 n, k, n_cs, float64
    eps_bar, then per cell in row-major (i1, i2) order the w1 block followed
    by the w2 block, each (block+1)^2 values.
    """
    cfg = effective.config
    with open(path, "wb") as fh:
        fh.write(STORE_MAGIC)
        fh.write(
            struct.pack("<Iiiid", STORE_VERSION, cfg.n, cfg.k, cfg.n_cs, cfg.eps_bar)
        )
        for i1 in range(cfg.n):
            for i2 in range(cfg.n):
                fh.write(effective.w1[i1, i2].astype("<f8").tobytes())
                fh.write(effective.w2[i1, i2].astype("<f8").tobytes())


def load_cell_store(path):
    """Read back a cell store; returns (config-like tuple, w1, w2)."""
    with open(path, "rb") as fh:
        if fh.read(4) != STORE_MAGIC:
            raise ValueError("not a cell-store file")
        version, n, k, n_cs, eps_bar = struct.unpack("<Iiiid", fh.read(24))
        if version != STORE_VERSION:
            raise ValueError(f"unsupported cell-store version {version}")
        b = n_cs // k
        per_block = (b + 1) * (b + 1)
        data = np.frombuffer(fh.read(), dtype="<f8")
    expected = n * n * 2 * per_block
    if data.size != expected:
        raise ValueError(f"cell store truncated: {data.size} of {expected} values")
    data = data.reshape(n, n, 2, b + 1, b + 1)
    return (n, k, n_cs, eps_bar), data[:, :, 0].copy(), data[:, :, 1].copy()


def tensor_field_csv_rows(effective: EffectiveField2D):
    """Rows (i1, i2, A11, A12, A22) for the tensor-field export."""
    for i1 in range(effective.config.n):
        for i2 in range(effective.config.n):
            yield (
                i1,
                i2,
                effective.a11[i1, i2],
                effective.a12[i1, i2],
                effective.a22[i1, i2],
            )
