"""ADHM data for length-c point configurations in the affine plane.

A triple (b1, b2, e) of two c x c matrices and a row covector is subject to

* (T1): [b1, b2] = 0, and
* (T2), co-stability: no joint eigenvector of (b1, b2) lies in ker e.

The transpose triple satisfies the usual stability condition instead; see
``transpose_triple``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import (
    DuplicatePoint,
    ShapeMismatch,
    SingularGauge,
    UnsupportedBackend,
)
from .linalg import (
    EIG_TOL,
    Matrix,
    eigenvalues,
    inverse,
    is_invertible,
    nullspace,
    rank,
    vstack,
)


@dataclass(frozen=True)
class PlaneADHM:
    c: int
    b1: Matrix
    b2: Matrix
    e: Matrix

    def __post_init__(self):
        c = self.c
        if (self.b1.rows, self.b1.cols) != (c, c):
            raise ShapeMismatch("b1 must be c x c")
        if (self.b2.rows, self.b2.cols) != (c, c):
            raise ShapeMismatch("b2 must be c x c")
        if (self.e.rows, self.e.cols) != (1, c):
            raise ShapeMismatch("e must be a row c-vector")
        if not (self.b1.backend == self.b2.backend == self.e.backend):
            raise ShapeMismatch("blocks on different backends")

    @property
    def backend(self):
        return self.b1.backend


def check_T1(d: PlaneADHM, tol=None) -> bool:
    """Commutator test [b1, b2] = 0 (within tol * scale on floats)."""
    comm = d.b1 @ d.b2 - d.b2 @ d.b1
    if d.backend.exact:
        return comm.is_zero()
    scale = max(1.0, d.b1.maxnorm() * d.b2.maxnorm())
    return comm.maxnorm() <= linalg._tol(tol) * scale


def common_eigenvectors(b1: Matrix, b2: Matrix, tol=None):
    """Joint eigenvalue pairs (z, w, V) of two square matrices.

    For each eigenvalue z of b1 the restriction of b2 to ker(b1 - z) is
    eigen-decomposed, and joint eigenvectors are recovered as the kernel of
    the stacked pair.  The enumeration is complete whenever b1 and b2
    commute: every joint eigenvector lives in some geometric eigenspace of
    b1, which b2 then preserves.
    """
    if b1.backend.kind == "gf" or b2.backend.kind == "gf":
        raise UnsupportedBackend("joint spectra are unavailable over a prime field")
    if b1.rows != b1.cols or b2.rows != b2.cols or b1.rows != b2.rows:
        raise ShapeMismatch("expected two square matrices of equal size")
    b1 = b1.cast(linalg.COMPLEX)
    b2 = b2.cast(linalg.COMPLEX)
    c = b1.rows
    ident = Matrix.identity(c)
    out = []
    for z, _ in eigenvalues(b1):
        Kz = nullspace(b1 - ident.scale(z), EIG_TOL)
        if Kz.cols == 0:
            continue
        R = _restriction(b2, Kz)
        for w, _ in eigenvalues(R):
            V = nullspace(vstack(b1 - ident.scale(z), b2 - ident.scale(w)),
                          EIG_TOL)
            if V.cols > 0:
                out.append((z, w, V))
    return out


def _restriction(M: Matrix, basis: Matrix) -> Matrix:
    """Least-squares compression of M onto the span of the basis columns;
    exact when the span is M-invariant."""
    import numpy as np

    B = basis.to_numpy()
    R, *_ = np.linalg.lstsq(B, M.to_numpy() @ B, rcond=None)
    return Matrix.from_numpy(R)


def check_T2(d: PlaneADHM, tol=None) -> bool:
    """Co-stability: every joint eigenspace meets ker e trivially.

    A pair (z, w) with joint eigenspace V violates co-stability exactly when
    rank(e V) < dim V, i.e. when some eigenvector is annihilated by e.
    """
    if d.backend.kind == "gf":
        raise UnsupportedBackend(
            "use the quiver module's exhaustive check over prime fields")
    for _, _, V in common_eigenvectors(d.b1, d.b2, tol):
        eV = d.e.cast(linalg.COMPLEX) @ V
        if rank(eV, tol) < V.cols:
            return False
    return True


def from_plane_points(points, backend=linalg.COMPLEX) -> PlaneADHM:
    """Diagonal data for a configuration of pairwise distinct plane points."""
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i][0] == pts[j][0] and pts[i][1] == pts[j][1]:
                raise DuplicatePoint(f"points {i} and {j} coincide")
    c = len(pts)
    b1 = Matrix.diagonal([z for z, _ in pts], backend)
    b2 = Matrix.diagonal([w for _, w in pts], backend)
    e = Matrix.row_vector([backend.one] * c, backend)
    return PlaneADHM(c, b1, b2, e)


def joint_spectrum(d: PlaneADHM, tol=None):
    """Sorted (z, w) pairs with multiplicities, read off the joint
    eigenspaces of (b1, b2)."""
    pairs = [(z, w, V.cols) for z, w, V in common_eigenvectors(d.b1, d.b2, tol)]
    pairs.sort(key=lambda t: (t[0].real, t[0].imag, t[1].real, t[1].imag))
    return pairs


def gl_action(phi: Matrix, d: PlaneADHM, tol=None) -> PlaneADHM:
    """Base change (b1, b2, e) -> (phi b1 phi^-1, phi b2 phi^-1, e phi^-1)."""
    if not is_invertible(phi, tol):
        raise SingularGauge("gauge matrix is singular")
    inv = inverse(phi)
    return PlaneADHM(d.c, phi @ d.b1 @ inv, phi @ d.b2 @ inv, d.e @ inv)


def transpose_triple(d: PlaneADHM) -> tuple[Matrix, Matrix, Matrix]:
    """Bridge to the stability convention: the transposed triple
    (b1^T, b2^T, e^T) is stable iff d is co-stable."""
    return d.b1.transpose(), d.b2.transpose(), d.e.transpose()
