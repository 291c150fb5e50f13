"""Regularity analysis of matrix pencils nu1*A1 + nu2*A2.

A pencil is regular when its homogeneous determinant polynomial is not
identically zero.  A singular pencil admits a polynomial vector solution
v(t) = v0 - t v1 + ... + (-t)^eps v_eps of (A1 + t A2) v(t) = 0; equating
coefficients turns that into the chain

    A1 v0 = 0,   A2 v_{q-1} = A1 v_q  (q = 1..eps),   A2 v_eps = 0,

and the minimal degree eps for which the chain has a nontrivial solution is
the quantity reported here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import InvalidInput, ShapeMismatch
from .linalg import Matrix, hstack, nullspace, pencil_det_poly, projective_roots, rank, vstack


@dataclass(frozen=True)
class PencilAnalysis:
    regular: bool
    witness: tuple | None = None               # (nu1, nu2) with det != 0
    eigenvalues: list | None = None            # [((l1, l2), mult), ...]
    minimal_index: int | None = None           # eps
    minimal_solution: list | None = None       # [v0, ..., v_eps] as column Matrices
    chain_residuals: list = field(default_factory=list)

    def __post_init__(self):
        if self.regular:
            assert self.minimal_index is None and self.witness is not None
        else:
            assert self.minimal_index is not None and self.witness is None


def _staircase(A1: Matrix, A2: Matrix, eps: int) -> Matrix:
    """(eps+2)c x (eps+1)c block matrix of the chain equations."""
    bk = A1.backend
    c = A1.rows
    Z = Matrix.zeros(c, c, bk)
    block_rows = []
    for i in range(eps + 2):
        row = []
        for j in range(eps + 1):
            if i == 0:
                row.append(A1 if j == 0 else Z)
            elif i <= eps:
                if j == i - 1:
                    row.append(A2)
                elif j == i:
                    row.append(-A1)
                else:
                    row.append(Z)
            else:
                row.append(A2 if j == eps else Z)
        block_rows.append(hstack(*row))
    return vstack(*block_rows)


def _pick_chain(basis: Matrix):
    """Deterministic representative from a nullspace basis: normalize each
    column to max-coordinate 1 and keep the lexicographically largest."""
    bk = basis.backend
    best = None
    best_key = None
    for j in range(basis.cols):
        col = [basis.at(i, j) for i in range(basis.rows)]
        if bk.exact:
            lead = next((x for x in col if not bk.is_zero(x)), None)
            if lead is None:
                continue
            col = [bk.div(x, lead) for x in col]
            key = tuple((float(x.numerator) / float(x.denominator)
                         if hasattr(x, "numerator") else float(x), 0.0)
                        for x in col) if bk.kind == "rational" else tuple(
                            (float(x), 0.0) for x in col)
        else:
            pivot = max(col, key=abs)
            if abs(pivot) == 0:
                continue
            col = [x / pivot for x in col]
            key = tuple((x.real, x.imag) for x in col)
        if best_key is None or key > best_key:
            best, best_key = col, key
    return best


def analyze_pencil(A1: Matrix, A2: Matrix, tol=None) -> PencilAnalysis:
    """Classify the pencil and, when singular, return the minimal chain.

    Regular pencils come back with their projective spectrum (roots of the
    determinant form) and a sampled witness ratio where the determinant does
    not vanish.  Singular pencils come back with the smallest eps whose chain
    staircase has a nontrivial kernel, one chain with v_eps != 0, and the
    float residuals of every chain equation.
    """
    if A1.rows != A1.cols or A2.rows != A2.cols or A1.rows != A2.rows:
        raise ShapeMismatch("pencil matrices must be square of equal size")
    bk = A1.backend
    c = A1.rows
    if bk.exact:
        poly = pencil_det_poly(A1, A2, tol)
        regular = not poly.is_zero()
        witness = _regularity_witness(A1, A2, poly, tol) if regular else None
    else:
        # a degree-c form cannot vanish at c+1 distinct ratios, so regularity
        # is a well-conditioned rank decision at the sample nodes rather than
        # a size comparison of interpolated coefficients
        witness = _float_witness(A1, A2, tol)
        regular = witness is not None
        poly = pencil_det_poly(A1, A2, tol) if regular else None
    if regular:
        eig = None
        if bk.kind != "gf":
            eig = projective_roots(poly, tol)
        return PencilAnalysis(regular=True, witness=witness, eigenvalues=eig)

    for eps in range(0, c + 1):
        S = _staircase(A1, A2, eps)
        basis = nullspace(S, tol)
        if basis.cols == 0:
            continue
        chain_flat = _pick_chain(basis)
        vs = [Matrix.col_vector(chain_flat[q * c:(q + 1) * c], bk)
              for q in range(eps + 1)]
        res = []
        if not bk.exact:
            res.append((A1 @ vs[0]).maxnorm())
            for q in range(1, eps + 1):
                res.append((A2 @ vs[q - 1] - A1 @ vs[q]).maxnorm())
            res.append((A2 @ vs[eps]).maxnorm())
        return PencilAnalysis(regular=False, minimal_index=eps,
                              minimal_solution=vs, chain_residuals=res)
    raise InvalidInput("no polynomial solution of degree <= c found")


def _regularity_witness(A1, A2, poly, tol):
    bk = A1.backend
    if bk.kind == "rational":
        candidates = [(bk.one, bk.coerce(q)) for q in range(A1.rows + 1)]
    else:
        candidates = [(bk.one, bk.coerce(t)) for t in range(bk.p)]
        candidates.append((bk.zero, bk.one))
    for n1, n2 in candidates:
        if not bk.is_zero(poly.evaluate(n1, n2)):
            return (n1, n2)
    return None


def _float_witness(A1, A2, tol):
    """Sample node with the best-conditioned pencil matrix, or None when the
    pencil is singular at every node (hence everywhere)."""
    import numpy as np

    best, best_val = None, 0.0
    for m in range(A1.rows + 1):
        n1, n2 = linalg.angle_constants(A1.rows, m)
        P = A1.scale(n1) + A2.scale(n2)
        s = np.linalg.svd(P.to_numpy(), compute_uv=False)
        if s[-1] > linalg._tol(tol) * max(1.0, P.maxnorm()) and s[-1] > best_val:
            best, best_val = (complex(n1), complex(n2)), float(s[-1])
    return best


def check_Q3star(A1: Matrix, A2: Matrix, S0: Matrix, tol=None) -> bool:
    """dim(A1(S0) + A2(S0)) >= dim S0, for a subspace given by basis columns.

    This holds for every subspace exactly when the pencil is regular; the
    span of a singular pencil's minimal chain violates it.
    """
    if S0.cols == 0:
        return True
    imgs = hstack(A1 @ S0, A2 @ S0)
    return rank(imgs, tol) >= S0.cols
