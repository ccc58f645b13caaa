"""P1 finite elements on uniform Cartesian grids split by one diagonal.

Every square is cut by the diagonal from its lower-left to its upper-right
corner; the coefficient is constant per square (value at the square center).
Two constraint flavors are assembled: homogeneous Dirichlet (interior dofs
only) and periodic with zero mean (torus node identification).

Node arrays are indexed [ix, iy]; squares likewise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pyamg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from homoglab.errors import BoundsViolation, NoConvergence, NonSpdCoefficient

# Dirichlet systems at or below this dof count go to the sparse direct
# solver; larger ones to AMG-preconditioned CG.
_DIRECT_LIMIT = 120_000


def _triangle_blocks(a11, a12, a22):
    """3x3 element stiffness entries for the two triangle types.

    Entries are h-independent: |T| * grad^T A grad with |T| = h^2/2 and
    gradients 1/h.  Local node order is (n00, n10, n11) for the lower
    triangle and (n00, n11, n01) for the upper one.
    """
    s = a11 - 2.0 * a12 + a22
    k_low = [
        [0.5 * a11, 0.5 * (a12 - a11), -0.5 * a12],
        [0.5 * (a12 - a11), 0.5 * s, 0.5 * (a12 - a22)],
        [-0.5 * a12, 0.5 * (a12 - a22), 0.5 * a22],
    ]
    k_up = [
        [0.5 * a22, -0.5 * a12, 0.5 * (a12 - a22)],
        [-0.5 * a12, 0.5 * a11, 0.5 * (a12 - a11)],
        [0.5 * (a12 - a22), 0.5 * (a12 - a11), 0.5 * s],
    ]
    return k_low, k_up


def _assemble(n, a11, a12, a22, idx):
    """COO stiffness over an n x n square grid with dof map idx(i, j)."""
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    n00 = idx(ii, jj)
    n10 = idx(ii + 1, jj)
    n01 = idx(ii, jj + 1)
    n11 = idx(ii + 1, jj + 1)
    tri_nodes = [(n00, n10, n11), (n00, n11, n01)]
    k_low, k_up = _triangle_blocks(a11, a12, a22)
    rows, cols, data = [], [], []
    for nodes, kmat in zip(tri_nodes, (k_low, k_up)):
        for a in range(3):
            for b in range(3):
                rows.append(nodes[a].ravel())
                cols.append(nodes[b].ravel())
                data.append(np.broadcast_to(kmat[a][b], (n, n)).ravel())
    ndof = int(max(arr.max() for arr in (n00, n10, n01, n11))) + 1
    mat = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(ndof, ndof),
    )
    return mat.tocsr()


@dataclass
class SparseSpdSystem:
    """Assembled symmetric system with its constraint flavor."""

    matrix: sp.csr_matrix
    rhs: np.ndarray
    constraint: str  # "dirichlet" | "periodic-zeromean"


def _check_spd_coeff(a11, a12, a22):
    if np.any(a11 <= 0) or np.any(a22 <= 0) or np.any(a11 * a22 - a12**2 <= 0):
        raise NonSpdCoefficient("per-square tensor is not SPD")


def assemble_dirichlet(n, a11, a12, a22, f):
    """Dirichlet system (g = 0) on the n x n grid, interior dofs only.

    Coefficient arrays are (n, n) per-square tensor entries (scalars
    broadcast).  f is a constant (exact hat-function integrals) or a
    callable f(x1, x2) integrated with nodal weights.  Returns the reduced
    system and the flat interior indices into the (n+1)^2 node set.
    """
    a11 = np.broadcast_to(np.asarray(a11, dtype=np.float64), (n, n))
    a12 = np.broadcast_to(np.asarray(a12, dtype=np.float64), (n, n))
    a22 = np.broadcast_to(np.asarray(a22, dtype=np.float64), (n, n))
    _check_spd_coeff(a11, a12, a22)
    matrix = _assemble(n, a11, a12, a22, lambda i, j: i * (n + 1) + j)

    h = 1.0 / n
    if callable(f):
        t = np.linspace(0.0, 1.0, n + 1)
        load = (h * h * f(t[:, None], t[None, :])).ravel()
    else:
        # Constant f: each triangle feeds f*h^2/6 to its three vertices.
        load = np.zeros((n + 1) * (n + 1))
        ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        corners = [(ii, jj), (ii + 1, jj), (ii, jj + 1), (ii + 1, jj + 1)]
        weights = [2, 1, 1, 2]  # triangles touching each corner within its square
        for (ci, cj), wt in zip(corners, weights):
            np.add.at(load, (ci * (n + 1) + cj).ravel(), wt * f * h * h / 6.0)

    grid_i, grid_j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    interior = ((grid_i > 0) & (grid_i < n) & (grid_j > 0) & (grid_j < n)).ravel()
    interior_idx = np.flatnonzero(interior)
    reduced = matrix[interior_idx][:, interior_idx]
    return SparseSpdSystem(reduced.tocsr(), load[interior_idx], "dirichlet"), interior_idx


def assemble_periodic(samples, direction):
    """Periodic cell system on the unit torus for unit-forcing direction 1|2.

    samples is the (n_c, n_c) per-square scalar coefficient.  The right side
    is -int grad(phi)^T a e_j, assembled element-wise.
    """
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.shape[0]
    if samples.shape != (n, n) or np.any(samples <= 0):
        raise NonSpdCoefficient("cell window samples must be square and positive")
    zero = np.zeros_like(samples)
    matrix = _assemble(n, samples, zero, samples, lambda i, j: (i % n) * n + (j % n))

    h = 1.0 / n
    rhs = np.zeros(n * n)
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    idx = lambda i, j: ((i % n) * n + (j % n)).ravel()
    c = (0.5 * h * samples).ravel()
    if direction == 1:
        # lower triangle: +c to n00, -c to n10; upper: -c to n11, +c to n01
        np.add.at(rhs, idx(ii, jj), c)
        np.add.at(rhs, idx(ii + 1, jj), -c)
        np.add.at(rhs, idx(ii + 1, jj + 1), -c)
        np.add.at(rhs, idx(ii, jj + 1), c)
    elif direction == 2:
        np.add.at(rhs, idx(ii + 1, jj), c)
        np.add.at(rhs, idx(ii + 1, jj + 1), -c)
        np.add.at(rhs, idx(ii, jj), c)
        np.add.at(rhs, idx(ii, jj + 1), -c)
    else:
        raise ValueError("direction must be 1 or 2")
    return SparseSpdSystem(matrix, rhs, "periodic-zeromean")


def solve_spd(system: SparseSpdSystem, method="auto", rtol=1.0e-10, maxiter=None):
    """Solve an assembled system to relative residual <= rtol.

    "auto" picks a sparse direct factorization for small systems and
    preconditioned CG for large ones.  Periodic systems have the constant
    nullspace projected out of rhs and iterates; the returned vector has
    zero mean.  Raises NoConvergence when the residual contract fails.
    """
    mat, b = system.matrix, system.rhs
    n = mat.shape[0]
    periodic = system.constraint == "periodic-zeromean"
    if method == "auto":
        method = "direct" if n <= _DIRECT_LIMIT else ("cg" if periodic else "amg")
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros(n)

    if method == "direct":
        if periodic:
            # Ground one dof; the solution differs from the zero-mean one by
            # a constant (rhs is consistent by construction).
            keep = np.arange(1, n)
            x = np.zeros(n)
            x[1:] = spla.splu(mat[keep][:, keep].tocsc()).solve(b[1:])
        else:
            x = spla.splu(mat.tocsc()).solve(b)
    else:
        if maxiter is None:
            maxiter = 50 * int(np.sqrt(n)) + 200
        if periodic:
            proj = lambda v: v - v.mean()
            op = spla.LinearOperator((n, n), matvec=lambda v: proj(mat @ proj(v)))
            diag = mat.diagonal()
            precond = spla.LinearOperator((n, n), matvec=lambda v: proj(v / diag))
        else:
            op = mat
            if method == "amg":
                ml = pyamg.smoothed_aggregation_solver(mat.tocsr(), max_coarse=200)
                precond = ml.aspreconditioner()
            else:
                diag = mat.diagonal()
                precond = spla.LinearOperator((n, n), matvec=lambda v: v / diag)
            proj = lambda v: v

        def run_cg(rhs_vec):
            sol, info = spla.cg(op, proj(rhs_vec), rtol=rtol / 10, atol=0.0,
                                maxiter=maxiter, M=precond)
            if info != 0:
                raise NoConvergence(
                    f"CG failed after {maxiter} iterations (info={info})"
                )
            return sol

        # CG's recursive residual can drift from the true one on large
        # systems; a few rounds of iterative refinement restore the contract.
        x = run_cg(b)
        for _ in range(3):
            if np.linalg.norm(mat @ x - b) <= rtol * bnorm:
                break
            x = x + run_cg(b - mat @ x)

    if periodic:
        x = x - x.mean()
    res = np.linalg.norm(mat @ x - b) / bnorm
    if res > rtol:
        raise NoConvergence(f"residual {res:.3e} exceeds contract {rtol:.1e}")
    return x


def solve_dirichlet(n, a11, a12, a22, f_const, method="auto"):
    """Assemble and solve; returns nodal values as an (n+1, n+1) array."""
    system, interior_idx = assemble_dirichlet(n, a11, a12, a22, f_const)
    full = np.zeros((n + 1) * (n + 1))
    full[interior_idx] = solve_spd(system, method=method)
    return full.reshape(n + 1, n + 1)


def _unwrap_torus(w: np.ndarray) -> np.ndarray:
    """Duplicate the first row/column so nodal arrays are (n+1, n+1)."""
    n = w.shape[0]
    full = np.empty((n + 1, n + 1))
    full[:n, :n] = w
    full[n, :n] = w[0, :]
    full[:n, n] = w[:, 0]
    full[n, n] = w[0, 0]
    return full


def solve_cell(samples, direction, method="auto"):
    """Periodic zero-mean cell solution as nodal (n_c+1, n_c+1) values.

    The redundant last row/column duplicates the first (torus unwrap), which
    keeps downstream interpolation index-free.
    """
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.shape[0]
    system = assemble_periodic(samples, direction)
    return _unwrap_torus(solve_spd(system, method=method).reshape(n, n))


def solve_cell_pair(samples, method="auto", rtol=1.0e-10):
    """Both cell solutions off one assembly/factorization.

    The two unit-forcing directions share the stiffness matrix, so the
    direct path factors once and back-substitutes twice.
    """
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.shape[0]
    sys1 = assemble_periodic(samples, 1)
    sys2 = assemble_periodic(samples, 2)
    ndof = sys1.matrix.shape[0]
    if method == "auto":
        method = "direct" if ndof <= _DIRECT_LIMIT else "cg"
    if method == "direct":
        keep = np.arange(1, ndof)
        lu = spla.splu(sys1.matrix[keep][:, keep].tocsc())
        out = []
        for system in (sys1, sys2):
            x = np.zeros(ndof)
            x[1:] = lu.solve(system.rhs[1:])
            x -= x.mean()
            res = np.linalg.norm(system.matrix @ x - system.rhs)
            if res > rtol * np.linalg.norm(system.rhs):
                raise NoConvergence(f"cell residual {res:.3e} exceeds contract")
            out.append(_unwrap_torus(x.reshape(n, n)))
        return out[0], out[1]
    return (
        _unwrap_torus(solve_spd(sys1, method=method, rtol=rtol).reshape(n, n)),
        _unwrap_torus(solve_spd(sys2, method=method, rtol=rtol).reshape(n, n)),
    )


@dataclass(frozen=True)
class EffectiveTensor:
    """Homogenized 2x2 tensor with its pre-symmetrization asymmetry."""

    a11: float
    a12: float
    a21: float
    a22: float

    @property
    def sym(self) -> np.ndarray:
        off = 0.5 * (self.a12 + self.a21)
        return np.array([[self.a11, off], [off, self.a22]])

    @property
    def asymmetry(self) -> float:
        return abs(self.a12 - self.a21)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.sym)


def averaged_tensor(samples, w1, w2, check_bounds=True, bounds_rtol=1.0e-6):
    """Tensor entries A_ij = sum_T |T| e_i . a (grad w_j + e_j).

    w1, w2 are nodal (n_c+1, n_c+1) cell solutions on the same samples.
    Eigenvalues of the symmetrized tensor are checked against the
    harmonic/arithmetic means of the window samples.
    """
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.shape[0]
    h = 1.0 / n
    area = 0.5 * h * h
    cols = np.zeros((2, 2))
    for j, w in ((0, np.asarray(w1)), (1, np.asarray(w2))):
        # gradients per triangle, constant: lower (n00,n10,n11), upper (n00,n11,n01)
        gx_low = (w[1:, :-1] - w[:-1, :-1]) / h
        gy_low = (w[1:, 1:] - w[1:, :-1]) / h
        gx_up = (w[1:, 1:] - w[:-1, 1:]) / h
        gy_up = (w[:-1, 1:] - w[:-1, :-1]) / h
        ej = np.array([1.0, 0.0]) if j == 0 else np.array([0.0, 1.0])
        for gx, gy in ((gx_low, gy_low), (gx_up, gy_up)):
            cols[0, j] += area * np.sum(samples * (gx + ej[0]))
            cols[1, j] += area * np.sum(samples * (gy + ej[1]))
    tensor = EffectiveTensor(cols[0, 0], cols[0, 1], cols[1, 0], cols[1, 1])
    if check_bounds:
        lo = samples.size / np.sum(1.0 / samples)
        hi = np.mean(samples)
        eigs = tensor.eigenvalues()
        slack = bounds_rtol * hi
        if eigs[0] < lo - slack or eigs[1] > hi + slack:
            raise BoundsViolation(
                f"eigenvalues {eigs} outside [{lo}, {hi}] beyond tolerance"
            )
    return tensor
