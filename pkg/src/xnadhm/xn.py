"""ADHM data for point configurations on the total space of O(-n) over P^1.

A configuration of length c is encoded by (A1, A2; C1..Cn; e) subject to

* (P1): A1 C1 A2 = A2 C1 A1 for n = 1; for n > 1 the chains
  A1 Cq = A2 C(q+1) and Cq A1 = C(q+1) A2, q = 1..n-1,
* (P2): the pencil nu1 A1 + nu2 A2 is regular,
* (P3): no nonzero v in ker e is killed by l2*A1 + l1*A2 while being a joint
  eigenvector of C1 A2 and Cn A1 with eigenvalues (-m1, (-1)^n m2) satisfying
  l1^n m1 + l2^n m2 = 0.

The space carries c+1 charts indexed by m = 0..c with angle constants
(c_m, s_m) = (cos, sin)(pi m / (c+1)).  On the chart where
A2m = s_m A1 + c_m A2 is invertible the data is equivalent to a plane ADHM
triple (B_m, E_m, e) together with the free gauge block A2m, and overlapping
charts are glued by a Moebius transformation in B and a power factor in E.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import linalg
from .errors import (
    IndexOutOfRange,
    InvalidInput,
    NoChart,
    NonSimpleSpectrum,
    NotCostable,
    NotInChart,
    NotInOverlap,
    ShapeMismatch,
    SingularA2m,
    SingularGauge,
    UnsupportedBackend,
)
from .linalg import Matrix, angle_constants, inverse, is_invertible, nullspace, vstack
from .pencil import analyze_pencil
from .plane import PlaneADHM, check_T2, joint_spectrum


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class XnADHM:
    n: int
    c: int
    A1: Matrix
    A2: Matrix
    C: tuple
    e: Matrix

    def __post_init__(self):
        if self.n < 1 or self.c < 1:
            raise ShapeMismatch("n and c must be >= 1")
        object.__setattr__(self, "C", tuple(self.C))
        if len(self.C) != self.n:
            raise ShapeMismatch(f"expected {self.n} C-blocks, got {len(self.C)}")
        mats = [self.A1, self.A2, *self.C]
        for M in mats:
            if (M.rows, M.cols) != (self.c, self.c):
                raise ShapeMismatch("A and C blocks must be c x c")
        if (self.e.rows, self.e.cols) != (1, self.c):
            raise ShapeMismatch("e must be a row c-vector")
        bk = self.A1.backend
        if any(M.backend != bk for M in [*mats, self.e]):
            raise ShapeMismatch("blocks on different backends")

    @property
    def backend(self):
        return self.A1.backend

    def cast(self, backend):
        return XnADHM(self.n, self.c, self.A1.cast(backend),
                      self.A2.cast(backend),
                      tuple(C.cast(backend) for C in self.C),
                      self.e.cast(backend))


@dataclass(frozen=True)
class ChartData:
    m: int
    B: Matrix
    E: Matrix
    e: Matrix
    A2m: Matrix

    def __post_init__(self):
        c = self.B.rows
        for M in (self.B, self.E, self.A2m):
            if (M.rows, M.cols) != (c, c):
                raise ShapeMismatch("chart blocks must be square of equal size")
        if (self.e.rows, self.e.cols) != (1, c):
            raise ShapeMismatch("e must be a row c-vector")

    @property
    def c(self):
        return self.B.rows

    @property
    def backend(self):
        return self.B.backend

    def plane(self) -> PlaneADHM:
        return PlaneADHM(self.c, self.B, self.E, self.e)


@dataclass(frozen=True)
class SigmaMatrix:
    h: int
    m: int
    entries: Matrix


# ---------------------------------------------------------------------------
# chart constants and sigma matrices
# ---------------------------------------------------------------------------

def chart_constants(c: int, m: int):
    """(cos, sin)(pi m / (c+1)) for a chart index 0 <= m <= c."""
    if not 0 <= m <= c:
        raise IndexOutOfRange(f"chart index {m} outside 0..{c}")
    return angle_constants(c, m)


def _backend_angles(backend, c_count: int, k: int):
    """Chart constants coerced into the data backend.

    Exact backends only admit the charts whose constants are integers
    (k = 0 mod (c+1), and the right-angle charts); anything else promotes a
    rational pipeline to floats and is rejected over a prime field.
    """
    cm, sm = angle_constants(c_count, k)
    if not backend.exact:
        return backend, backend.coerce(cm), backend.coerce(sm)
    if cm == int(cm) and sm == int(sm):
        return backend, backend.coerce(int(cm)), backend.coerce(int(sm))
    if backend.kind == "gf":
        raise UnsupportedBackend(
            "chart constants are irrational; prime-field data only supports "
            "integer-constant charts")
    return linalg.COMPLEX, complex(cm), complex(sm)


def sigma(h: int, m: int, c_count: int, backend=linalg.COMPLEX) -> SigmaMatrix:
    """Binomial change-of-chart matrix of size (h+1) x (h+1).

    Row p expands (s_m u1 + c_m u2)^p (c_m u1 - s_m u2)^(h-p) over the
    monomials u2^q u1^(h-q); the family satisfies the one-parameter group law
    sigma(h, m) sigma(h, l) = sigma(h, m + l).
    """
    if h < 0:
        raise IndexOutOfRange("h must be >= 0")
    backend, cm, sm = _backend_angles(backend, c_count, m)
    mul, add = backend.mul, backend.add
    rows = []
    for p in range(h + 1):
        a = [backend.zero] * (p + 1)          # (s u1 + c u2)^p over u2-powers
        for j in range(p + 1):
            a[j] = backend.coerce(math.comb(p, j))
            a[j] = mul(a[j], _pow(backend, cm, j))
            a[j] = mul(a[j], _pow(backend, sm, p - j))
        b = [backend.zero] * (h - p + 1)      # (c u1 - s u2)^(h-p)
        for i in range(h - p + 1):
            b[i] = backend.coerce(math.comb(h - p, i))
            b[i] = mul(b[i], _pow(backend, backend.neg(sm), i))
            b[i] = mul(b[i], _pow(backend, cm, h - p - i))
        row = [backend.zero] * (h + 1)
        for j in range(p + 1):
            for i in range(h - p + 1):
                row[i + j] = add(row[i + j], mul(a[j], b[i]))
        rows.append(row)
    return SigmaMatrix(h, m, Matrix.from_rows(rows, backend))


def _pow(backend, x, k):
    out = backend.one
    for _ in range(k):
        out = backend.mul(out, x)
    return out


# ---------------------------------------------------------------------------
# chart matrices and the three conditions
# ---------------------------------------------------------------------------

def chart_matrices(d: XnADHM, m: int):
    """(A1m, A2m, E_m, D_m) in chart m.

    A1m = c_m A1 - s_m A2, A2m = s_m A1 + c_m A2, D_m is the binomial
    combination of the C blocks that acts as the free parameter of the chart,
    and E_m = D_m A2m.
    """
    bk, cm, sm = _backend_angles(d.backend, d.c, m)
    dd = d.cast(bk) if bk != d.backend else d
    A1m = dd.A1.scale(cm) - dd.A2.scale(sm)
    A2m = dd.A1.scale(sm) + dd.A2.scale(cm)
    Dm = Matrix.zeros(d.c, d.c, bk)
    for q in range(1, d.n + 1):
        coef = bk.mul(bk.coerce(math.comb(d.n - 1, q - 1)),
                      bk.mul(_pow(bk, cm, d.n - q), _pow(bk, sm, q - 1)))
        Dm = Dm + dd.C[q - 1].scale(coef)
    Em = Dm @ A2m
    return A1m, A2m, Em, Dm


def check_P1(d: XnADHM, tol=None) -> bool:
    """Chain condition on (A1, A2, C)."""
    defects = []
    if d.n == 1:
        defects.append(d.A1 @ d.C[0] @ d.A2 - d.A2 @ d.C[0] @ d.A1)
    else:
        for q in range(d.n - 1):
            defects.append(d.A1 @ d.C[q] - d.A2 @ d.C[q + 1])
            defects.append(d.C[q] @ d.A1 - d.C[q + 1] @ d.A2)
    if d.backend.exact:
        return all(D.is_zero() for D in defects)
    scale = linalg.scale_of(d.A1, d.A2) * linalg.scale_of(*d.C)
    if d.n == 1:
        scale *= linalg.scale_of(d.A1, d.A2)
    return all(D.maxnorm() <= linalg._tol(tol) * scale for D in defects)


def check_P2(d: XnADHM, tol=None) -> bool:
    """Pencil regularity, delegated to the pencil analyzer."""
    return analyze_pencil(d.A1, d.A2, tol).regular


def check_P3_direct(d: XnADHM, tol=None) -> bool:
    """Literal spectral test of the co-stability condition.

    Under (P2) the quantifier over [l1:l2] reduces to the finite root set of
    the determinant form; inside each root's kernel-meets-ker(e) subspace the
    joint eigenvector search runs over the global spectra of M1 = C1 A2 and
    M2 = Cn A1 (spectrum of M1 first, then M2), and a violation is a joint
    eigenvector whose eigenvalue pair satisfies l1^n m1 + l2^n m2 = 0.
    """
    if d.backend.kind == "gf":
        raise UnsupportedBackend(
            "(P3) needs root finding; use the quiver module's exhaustive "
            "check over prime fields")
    analysis = analyze_pencil(d.A1, d.A2, tol)
    if not analysis.regular:
        raise InvalidInput("condition (P3) is only decidable for regular pencils")
    dd = d.cast(linalg.COMPLEX) if d.backend.exact else d
    c = d.c
    ident = Matrix.identity(c)
    M1 = dd.C[0] @ dd.A2
    M2 = dd.C[d.n - 1] @ dd.A1
    eig1 = linalg.eigenvalues(M1)
    eig2 = linalg.eigenvalues(M2)
    sign = (-1) ** d.n
    for (nu1, nu2), _ in analysis.eigenvalues:
        l1, l2 = nu2, nu1
        P = dd.A1.scale(l2) + dd.A2.scale(l1)
        K = nullspace(vstack(P, dd.e), linalg.EIG_TOL)
        if K.cols == 0:
            continue
        for a, _ in eig1:
            Ka = nullspace(vstack(P, dd.e, M1 - ident.scale(a)), linalg.EIG_TOL)
            if Ka.cols == 0:
                continue
            mu1 = -a
            for b, _ in eig2:
                mu2 = sign * b
                constraint = l1 ** d.n * mu1 + l2 ** d.n * mu2
                if abs(constraint) > linalg.CLUSTER_TOL * max(
                        1.0, abs(mu1), abs(mu2)):
                    continue
                Kab = nullspace(vstack(P, dd.e, M1 - ident.scale(a),
                                       M2 - ident.scale(b)), linalg.EIG_TOL)
                if Kab.cols > 0:
                    return False
    return True


def check_P3_via_chart(d: XnADHM, tol=None) -> bool:
    """Equivalent co-stability test through any chart with invertible A2m."""
    m = _any_valid_chart(d, tol)
    cd = zeta(d, m, tol)
    return check_T2(cd.plane(), tol)


def _any_valid_chart(d: XnADHM, tol=None) -> int:
    best, best_val = None, 0.0
    for m in range(d.c + 1):
        _, A2m, _, _ = chart_matrices(d, m)
        if A2m.backend.exact:
            if not A2m.backend.is_zero(linalg.det(A2m)):
                return m
        else:
            v = abs(linalg.det(A2m))
            if is_invertible(A2m, tol) and v > best_val:
                best, best_val = m, v
    if best is None:
        raise NoChart("every chart matrix A2m is singular; the pencil is singular")
    return best


# ---------------------------------------------------------------------------
# chart isomorphisms
# ---------------------------------------------------------------------------

def zeta(d: XnADHM, m: int, tol=None) -> ChartData:
    """Chart-m reading (B_m, E_m, e; A2m) of the data."""
    A1m, A2m, Em, _ = chart_matrices(d, m)
    if not is_invertible(A2m, tol):
        raise NotInChart(f"det A2m = 0 in chart {m}")
    B = inverse(A2m) @ A1m
    e = d.e.cast(B.backend)
    return ChartData(m, B, Em, e, A2m)


def zeta_inverse(cd: ChartData, n: int, tol=None, check=True) -> XnADHM:
    """Rebuild the full data from a chart reading.

    With (B, E, e) co-stable and commuting this lands back in the locus where
    all three conditions hold; ``check=False`` skips the co-stability guard
    (used to manufacture violating samples).
    """
    c = cd.c
    bk, cm, sm = _backend_angles(cd.backend, c, cd.m)
    B = cd.B.cast(bk)
    E = cd.E.cast(bk)
    e = cd.e.cast(bk)
    A = cd.A2m.cast(bk)
    if not is_invertible(A, tol):
        raise SingularA2m("A2m block must be invertible")
    if check and not check_T2(PlaneADHM(c, B, E, e), tol):
        raise NotCostable("chart triple violates co-stability")
    ident = Matrix.identity(c, bk)
    A1 = A @ (B.scale(cm) + ident.scale(sm))
    A2 = A @ (ident.scale(cm) - B.scale(sm))
    sig = sigma(n - 1, cd.m, c, bk).entries
    EAinv = E @ inverse(A)
    powersB = [ident]
    for _ in range(n - 1):
        powersB.append(powersB[-1] @ B)
    Cs = []
    for q in range(n):
        Cq = Matrix.zeros(c, c, bk)
        for p in range(n):
            Cq = Cq + powersB[p].scale(sig.at(q, p))
        Cs.append(Cq @ EAinv)
    return XnADHM(n, c, A1, A2, tuple(Cs), e)


def transition_phi(d: PlaneADHM, n: int, m: int, l: int, tol=None) -> PlaneADHM:
    """Chart-m plane data re-read in chart l.

    Defined on the overlap det(c_{m-l} - s_{m-l} b1) != 0, where it acts as a
    Moebius map on b1, multiplies b2 by the n-th power of the denominator and
    leaves e untouched.
    """
    bk, cd_, sd = _backend_angles(d.backend, d.c, m - l)
    b1 = d.b1.cast(bk)
    b2 = d.b2.cast(bk)
    ident = Matrix.identity(d.c, bk)
    T = ident.scale(cd_) - b1.scale(sd)
    if not is_invertible(T, tol):
        raise NotInOverlap(f"charts {m} and {l} do not overlap at this point")
    b1l = inverse(T) @ (ident.scale(sd) + b1.scale(cd_))
    b2l = T.power(n) @ b2
    return PlaneADHM(d.c, b1l, b2l, d.e.cast(bk))


def transition_omega(cd: ChartData, n: int, l: int, tol=None) -> ChartData:
    """Chart transition on full chart data: the plane part moves by
    ``transition_phi`` and the gauge block picks up the same denominator."""
    bk, cdl, sdl = _backend_angles(cd.backend, cd.c, cd.m - l)
    moved = transition_phi(cd.plane(), n, cd.m, l, tol)
    B = cd.B.cast(bk)
    A2m = cd.A2m.cast(bk)
    ident = Matrix.identity(cd.c, bk)
    A2l = A2m @ (ident.scale(cdl) - B.scale(sdl))
    return ChartData(l, moved.b1, moved.b2, moved.e, A2l)


def gl2_action(phi1: Matrix, phi2: Matrix, d: XnADHM, tol=None) -> XnADHM:
    """(A_i, C_j, e) -> (phi2 A_i phi1^-1, phi1 C_j phi2^-1, e phi1^-1)."""
    if not (is_invertible(phi1, tol) and is_invertible(phi2, tol)):
        raise SingularGauge("both gauge matrices must be invertible")
    inv1 = inverse(phi1)
    inv2 = inverse(phi2)
    return XnADHM(d.n, d.c,
                  phi2 @ d.A1 @ inv1,
                  phi2 @ d.A2 @ inv1,
                  tuple(phi1 @ C @ inv2 for C in d.C),
                  d.e @ inv1)


def gl2_action_chart(phi1: Matrix, phi2: Matrix, cd: ChartData, tol=None) -> ChartData:
    """Induced action on a chart reading:
    (B, E, e; A2m) -> (phi1 B phi1^-1, phi1 E phi1^-1, e phi1^-1; phi2 A2m phi1^-1)."""
    if not (is_invertible(phi1, tol) and is_invertible(phi2, tol)):
        raise SingularGauge("both gauge matrices must be invertible")
    inv1 = inverse(phi1)
    return ChartData(cd.m, phi1 @ cd.B @ inv1, phi1 @ cd.E @ inv1,
                     cd.e @ inv1, phi2 @ cd.A2m @ inv1)


# ---------------------------------------------------------------------------
# covering chart, point constructions, spectral witness
# ---------------------------------------------------------------------------

def cover_chart(d: XnADHM, tol=None) -> int:
    """Smallest chart index maximizing |det A2m|.

    Some chart is always invertible for a regular pencil: the determinant
    form has at most c projective roots and there are c+1 chart ratios.
    """
    charts = []
    for m in range(d.c + 1):
        _, A2m, _, _ = chart_matrices(d, m)
        charts.append(A2m)
    if d.backend.exact:
        # charts whose constants stay in the field are judged exactly; the
        # promoted ones fall back to the float tolerance
        for m, A2m in enumerate(charts):
            if A2m.backend.exact:
                if not A2m.backend.is_zero(linalg.det(A2m)):
                    return m
            elif is_invertible(A2m, tol):
                return m
        raise InvalidInput("singular pencil: no invertible chart")
    best, best_val = None, -1.0
    for m, A2m in enumerate(charts):
        v = abs(linalg.det(A2m))
        if v > best_val:
            best, best_val = m, v
    if not is_invertible(charts[best], tol):
        raise InvalidInput("singular pencil: no invertible chart")
    return best


def from_xn_points(n: int, m: int, points, backend=linalg.COMPLEX) -> XnADHM:
    """Configuration of distinct points given in chart-m coordinates.

    Realized as diagonal chart data (B, E) = (diag z, diag w) with unit
    framing and unit gauge block, then rebuilt through the chart.
    """
    from .plane import from_plane_points

    plane = from_plane_points(points, backend)
    cd = ChartData(m, plane.b1, plane.b2, plane.e,
                   Matrix.identity(plane.c, backend))
    return zeta_inverse(cd, n)


def to_xn_points(d: XnADHM, m: int | None = None, tol=None):
    """(chart index, sorted point pairs) read as the joint spectrum of
    (B_m, E_m); raises on a non-simple joint spectrum."""
    if m is None:
        m = cover_chart(d, tol)
    cd = zeta(d, m, tol)
    pairs = joint_spectrum(cd.plane(), tol)
    if sum(mult for _, _, mult in pairs) != d.c or any(
            mult > 1 for _, _, mult in pairs):
        raise NonSimpleSpectrum(
            f"joint spectrum not simple: {[(z, w, k) for z, w, k in pairs]}")
    return m, [(z, w) for z, w, _ in pairs]


def spectral_witness(d: XnADHM, tol=None):
    """Constructive eigenvector witness for data satisfying (P1) and (P2).

    Returns (v, (l1, l2), (m1, m2)) with l1^n m1 + l2^n m2 = 0,
    (l2 A1 + l1 A2) v = 0, C1 A2 v = -m1 v and Cn A1 v = (-1)^n m2 v: the
    common eigenvector of the commuting chart pair (B_m, E_m), pushed through
    the chart dictionary.
    """
    m = cover_chart(d, tol)
    cd = zeta(d, m, tol)
    from .plane import common_eigenvectors

    pairs = common_eigenvectors(cd.B, cd.E, tol)
    if not pairs:
        raise InvalidInput("no joint eigenvector; does the data satisfy (P1)?")
    z, w, V = pairs[0]
    v = V.column(0)
    cm, sm = angle_constants(d.c, m)
    l1 = cm * z + sm
    l2 = sm * z - cm
    mu1 = (-1) ** (d.n - 1) * (sm * z - cm) ** d.n * w
    mu2 = (-1) ** d.n * (cm * z + sm) ** d.n * w
    return v, (l1, l2), (mu1, mu2)
