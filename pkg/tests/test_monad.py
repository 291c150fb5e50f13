"""Monad coefficients: composition slots, the standard immersion, chart
re-expansion, gauge action and normalization."""

import pytest

from xnadhm.errors import InvalidInput, NotInOverlap, NotNormalizable, SingularGauge
from xnadhm.linalg import Matrix, angle_constants, hstack, inverse, residual
from xnadhm.monad import (
    GaugeElement,
    MonadCoeffs,
    build_jm,
    compose_residual,
    embed_gl_gauge,
    framing_residual,
    gauge_action,
    gauge_normalize,
    max_residual,
    reexpand_chart,
)
from xnadhm.plane import PlaneADHM, check_T1
from xnadhm.sampling import (
    random_costable_triple,
    random_invertible,
    random_matrix,
    rng_from_seed,
)
from xnadhm.xn import sigma, transition_phi


def random_monad_coeffs(rng, n, c, m=0):
    return MonadCoeffs(
        n, c, m,
        tuple(random_matrix(rng, c, c) for _ in range(n + 2)),
        tuple(random_matrix(rng, c + 1, c) for _ in range(2)),
        tuple(random_matrix(rng, c, c) for _ in range(2)),
        tuple(random_matrix(rng, c, c + 1) for _ in range(n + 2)),
        random_matrix(rng, 2 * c + 1, 1))


def random_gauge(rng, n, c, zero_last_column=True):
    """Random gauge element; by default the polynomial block has zero last
    column so the truncated framing vector transforms faithfully."""
    psi12 = []
    for _ in range(n):
        blk = random_matrix(rng, c, c + 1)
        if zero_last_column:
            blk = hstack(blk.submatrix(range(c), range(c)),
                         Matrix.zeros(c, 1))
        psi12.append(blk)
    return GaugeElement(phi=random_invertible(rng, c),
                        psi11=random_invertible(rng, c),
                        psi12=tuple(psi12),
                        psi22=random_invertible(rng, c + 1),
                        chi=random_invertible(rng, c))


# ---------------------------------------------------------------------------
# independent oracle: formal bilinear expansion over symbolic sections
# ---------------------------------------------------------------------------

def compose_oracle(mc):
    """Multiply beta and alpha as formal sums over labelled sections.

    beta1 carries monomials ('y', i); beta2 carries ('E', q) and ('inf',);
    alpha1 carries ('E', q)/('inf',); alpha2 carries ('y', i).  Products:
    y_i * E_q -> EE_(q+i), y_i * inf -> yinf_i, E_q * y_i -> EE_(q+i),
    inf * y_i -> yinf_i.
    """
    n, c = mc.n, mc.c
    acc = {}

    def add(key, M):
        acc[key] = acc[key] + M if key in acc else M

    beta_terms = ([(("y", i), mc.beta1[i], "b1") for i in range(2)]
                  + [(("E", q), mc.beta2[q], "b2") for q in range(n + 1)]
                  + [(("inf",), mc.beta2[n + 1], "b2")])
    alpha_terms = ([(("E", q), mc.alpha1[q], "a1") for q in range(n + 1)]
                   + [(("inf",), mc.alpha1[n + 1], "a1")]
                   + [(("y", i), mc.alpha2[i], "a2") for i in range(2)])
    for bkey, B, bkind in beta_terms:
        for akey, A, akind in alpha_terms:
            if bkind == "b1" and akind != "a1":
                continue            # block pairing: beta1 acts on the k2 part
            if bkind == "b2" and akind != "a2":
                continue
            if bkey[0] == "y" and akey[0] == "E":
                add(("EE", akey[1] + bkey[1]), B @ A)
            elif bkey[0] == "y" and akey[0] == "inf":
                add(("yinf", bkey[1]), B @ A)
            elif bkey[0] == "E" and akey[0] == "y":
                add(("EE", bkey[1] + akey[1]), B @ A)
            elif bkey[0] == "inf" and akey[0] == "y":
                add(("yinf", akey[1]), B @ A)
    slots = [acc.get(("EE", q), Matrix.zeros(c, c)) for q in range(n + 2)]
    slots.append(acc.get(("yinf", 0), Matrix.zeros(c, c)))
    slots.append(acc.get(("yinf", 1), Matrix.zeros(c, c)))
    return slots


def test_compose_residual_vs_oracle():
    rng = rng_from_seed(1)
    for _ in range(10):
        n = int(rng.integers(1, 4))
        c = int(rng.integers(1, 4))
        mc = random_monad_coeffs(rng, n, c)
        got = compose_residual(mc)
        want = compose_oracle(mc)
        assert len(got) == n + 4
        for G, W in zip(got, want):
            assert residual(G, W) < 1e-12


def test_compose_residual_zero_data():
    c, n = 2, 2
    mc = MonadCoeffs(n, c, 0,
                     tuple(Matrix.zeros(c, c) for _ in range(n + 2)),
                     tuple(Matrix.zeros(c + 1, c) for _ in range(2)),
                     tuple(Matrix.zeros(c, c) for _ in range(2)),
                     tuple(Matrix.zeros(c, c + 1) for _ in range(n + 2)),
                     Matrix.zeros(2 * c + 1, 1))
    assert max_residual(compose_residual(mc)) == 0


# ---------------------------------------------------------------------------
# the standard immersion
# ---------------------------------------------------------------------------

def test_build_jm_scalar_blocks():
    d = PlaneADHM(1, Matrix.from_rows([[0.3]]), Matrix.from_rows([[1.7]]),
                  Matrix.row_vector([1.0]))
    mc = build_jm(d, 2, 0)
    assert mc.alpha1[0].is_zero() and mc.alpha1[1].is_zero()
    assert abs(mc.alpha1[2].at(0, 0) - 1) < 1e-15
    assert abs(mc.alpha1[3].at(0, 0) - 1.7) < 1e-15
    assert abs(mc.beta1[1].at(0, 0) - 0.3) < 1e-15
    assert [mc.beta2[2].at(0, j) for j in range(2)] == [-1, 0]
    assert [mc.beta2[3].at(0, j) for j in range(2)] == [-1.7, 1.0]
    assert [mc.xi.at(i, 0) for i in range(3)] == [0, 0, 1]


def test_build_jm_composes_to_zero_iff_T1():
    rng = rng_from_seed(2)
    for _ in range(10):
        c = int(rng.integers(2, 4))
        n = int(rng.integers(1, 4))
        good = random_costable_triple(rng, c)
        mc = build_jm(good, n, int(rng.integers(0, c + 1)))
        assert max_residual(compose_residual(mc)) < 1e-12
        assert max_residual(framing_residual(mc)) == 0
        bad = PlaneADHM(c, random_matrix(rng, c, c), random_matrix(rng, c, c),
                        good.e)
        assert not check_T1(bad)
        res = compose_residual(build_jm(bad, n, 0))
        comm_defect = (bad.b2 @ bad.b1 - bad.b1 @ bad.b2).transpose()
        for q in range(n + 3):
            assert res[q].maxnorm() < 1e-12
        assert residual(res[n + 3], comm_defect) < 1e-12


def test_build_jm_beta10_invertible():
    rng = rng_from_seed(3)
    d = random_costable_triple(rng, 3)
    mc = build_jm(d, 2, 1)
    assert residual(mc.beta1[0], Matrix.identity(3)) == 0


# ---------------------------------------------------------------------------
# chart re-expansion
# ---------------------------------------------------------------------------

def test_reexpand_identity_and_roundtrip():
    rng = rng_from_seed(4)
    mc = random_monad_coeffs(rng, 2, 2, m=1)
    assert reexpand_chart(mc, 1) is mc
    back = reexpand_chart(reexpand_chart(mc, 0), 1)
    for A, B in zip(back.alpha1, mc.alpha1):
        assert residual(A, B) < 1e-10
    for A, B in zip(back.beta2, mc.beta2):
        assert residual(A, B) < 1e-10


def test_reexpand_residual_covariance():
    # residual slots transform by sigma^(n+1), the infinity pair by rotation
    rng = rng_from_seed(5)
    for _ in range(5):
        n = int(rng.integers(1, 4))
        c = int(rng.integers(1, 3))
        mc = random_monad_coeffs(rng, n, c, m=0)
        l = int(rng.integers(0, c + 1))
        before = compose_residual(mc)
        after = compose_residual(reexpand_chart(mc, l))
        sig = sigma(n + 1, l - mc.m, c).entries
        for q in range(n + 2):
            want = Matrix.zeros(c, c)
            for p in range(n + 2):
                want = want + before[p].scale(sig.at(p, q))
            assert residual(after[q], want) < 1e-9
        rot = sigma(1, l - mc.m, c).entries
        for i in range(2):
            want = before[n + 2].scale(rot.at(0, i)) + before[n + 3].scale(
                rot.at(1, i))
            assert residual(after[n + 2 + i], want) < 1e-9


# ---------------------------------------------------------------------------
# gauge action
# ---------------------------------------------------------------------------

def test_gauge_identity():
    rng = rng_from_seed(6)
    mc = random_monad_coeffs(rng, 2, 2)
    out = gauge_action(GaugeElement.identity(2, 2), mc)
    for A, B in zip(out.alpha1, mc.alpha1):
        assert residual(A, B) < 1e-14


def test_gauge_residual_covariance():
    # beta' alpha' = chi (beta alpha) phi^(-1), slot by slot
    rng = rng_from_seed(7)
    for _ in range(8):
        n = int(rng.integers(1, 4))
        c = int(rng.integers(1, 4))
        mc = random_monad_coeffs(rng, n, c)
        g = random_gauge(rng, n, c, zero_last_column=False)
        before = compose_residual(mc)
        after = compose_residual(gauge_action(g, mc))
        phi_inv = inverse(g.phi)
        for B, A in zip(before, after):
            want = g.chi @ B @ phi_inv
            s = max(1.0, want.maxnorm())
            assert residual(A, want) / s < 1e-9


def test_gauge_preserves_zero_residual():
    rng = rng_from_seed(8)
    for _ in range(8):
        c = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        d = random_costable_triple(rng, c)
        mc = build_jm(d, n, 0)
        g = random_gauge(rng, n, c)
        moved = gauge_action(g, mc)
        assert max_residual(compose_residual(moved)) < 1e-10
        assert max_residual(framing_residual(moved)) < 1e-10


def test_gauge_group_law_and_inverse():
    rng = rng_from_seed(9)
    n, c = 3, 2
    mc = random_monad_coeffs(rng, n, c)
    g = random_gauge(rng, n, c, zero_last_column=False)
    h = random_gauge(rng, n, c, zero_last_column=False)
    two_step = gauge_action(g, gauge_action(h, mc))
    composed = gauge_action(g.compose(h), mc)
    for A, B in zip(two_step.alpha1, composed.alpha1):
        assert residual(A, B) / max(1.0, B.maxnorm()) < 1e-9
    for A, B in zip(two_step.beta2, composed.beta2):
        assert residual(A, B) / max(1.0, B.maxnorm()) < 1e-9
    undone = gauge_action(g.inverse(), gauge_action(g, mc))
    for A, B in zip(undone.alpha1, mc.alpha1):
        assert residual(A, B) / max(1.0, B.maxnorm()) < 1e-9


def test_gauge_rejects_singular_blocks():
    rng = rng_from_seed(10)
    mc = random_monad_coeffs(rng, 1, 2)
    g = GaugeElement.identity(1, 2)
    bad = GaugeElement(phi=Matrix.zeros(2, 2), psi11=g.psi11, psi12=g.psi12,
                       psi22=g.psi22, chi=g.chi)
    with pytest.raises(SingularGauge):
        gauge_action(bad, mc)


# ---------------------------------------------------------------------------
# gauge normalization
# ---------------------------------------------------------------------------

def test_normalize_fixed_point():
    rng = rng_from_seed(11)
    d = random_costable_triple(rng, 2)
    mc = build_jm(d, 2, 1)
    got, gauge = gauge_normalize(mc, 1)
    assert residual(got.b1, d.b1) < 1e-12
    assert residual(got.b2, d.b2) < 1e-12
    assert residual(got.e, d.e) < 1e-12
    for blk, ref in ((gauge.phi, Matrix.identity(2)),
                     (gauge.psi11, Matrix.identity(2)),
                     (gauge.psi22, Matrix.identity(3)),
                     (gauge.chi, Matrix.identity(2))):
        assert residual(blk, ref) < 1e-12


def test_normalize_matches_transition():
    rng = rng_from_seed(12)
    checked = 0
    while checked < 15:
        c = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        d = random_costable_triple(rng, c)
        m = int(rng.integers(0, c + 1))
        l = int(rng.integers(0, c + 1))
        try:
            expected = transition_phi(d, n, m, l)
        except NotInOverlap:
            continue
        got, gauge = gauge_normalize(reexpand_chart(build_jm(d, n, m), l), l)
        s = max(1.0, expected.b1.maxnorm(), expected.b2.maxnorm())
        assert residual(got.b1, expected.b1) / s < 1e-9
        assert residual(got.b2, expected.b2) / s < 1e-9
        assert residual(got.e, expected.e) / s < 1e-9
        assert residual(gauge.chi, Matrix.identity(c)) < 1e-9
        checked += 1


def test_normalize_gauge_matches_closed_form():
    # the unique chi = 1 gauge in closed form: phi = d1^-(n-1), psi11 = d1,
    # psi22 = diag(d1^-n, 1), psi12 slot q = -sum_p sigma_(q-p) (-d2 d1^-1)^p
    # with sigma_q the top-row entries of sigma^n_(l-m) and
    # d1 = c_(m-l) - s_(m-l) t(b1), d2 = s_(m-l) + c_(m-l) t(b1)
    rng = rng_from_seed(13)
    checked = 0
    while checked < 10:
        c = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        d = random_costable_triple(rng, c)
        m = int(rng.integers(0, c + 1))
        l = int(rng.integers(0, c + 1))
        try:
            transition_phi(d, n, m, l)
        except NotInOverlap:
            continue
        _, gauge = gauge_normalize(reexpand_chart(build_jm(d, n, m), l), l)
        cd, sd = angle_constants(c, m - l)
        tb1 = d.b1.transpose()
        ident = Matrix.identity(c)
        d1 = ident.scale(cd) - tb1.scale(sd)
        d2 = ident.scale(sd) + tb1.scale(cd)
        sig = sigma(n, l - m, c).entries
        core = -(d2 @ inverse(d1))
        assert residual(gauge.phi, inverse(d1.power(n - 1))) < 1e-9
        assert residual(gauge.psi11, d1) < 1e-9
        top = inverse(d1.power(n))
        psi22 = Matrix.from_rows(
            [[top.at(i, j) for j in range(c)] + [0] for i in range(c)]
            + [[0] * c + [1]])
        assert residual(gauge.psi22, psi22) < 1e-8
        for q in range(n):
            acc = Matrix.zeros(c, c)
            for p in range(q + 1):
                acc = acc + core.power(p).scale(sig.at(n, q - p))
            want = hstack(-acc, Matrix.zeros(c, 1))
            assert residual(gauge.psi12[q], want) / max(
                1.0, want.maxnorm()) < 1e-8
        checked += 1


def test_normalize_boundary_raises():
    # place an eigenvalue of b1 exactly on the chart-overlap divisor
    c, n, m, l = 2, 2, 1, 0
    cd, sd = angle_constants(c, m - l)
    z = cd / sd
    d = PlaneADHM(c, Matrix.diagonal([z, 0.3]), Matrix.diagonal([1.0, 2.0]),
                  Matrix.row_vector([1.0, 1.0]))
    with pytest.raises(NotNormalizable):
        gauge_normalize(build_jm(d, n, m), l)
    with pytest.raises(NotInOverlap):
        transition_phi(d, n, m, l)


def test_normalize_scalar_hand_pipeline():
    z, w, ev = 0.42 + 0.13j, -0.9 + 0.4j, 1.0
    n, m, l = 2, 0, 1
    d = PlaneADHM(1, Matrix.from_rows([[z]]), Matrix.from_rows([[w]]),
                  Matrix.row_vector([ev]))
    got, _ = gauge_normalize(reexpand_chart(build_jm(d, n, m), l), l)
    cd, sd = angle_constants(1, m - l)
    assert abs(got.b1.at(0, 0) - (sd + cd * z) / (cd - sd * z)) < 1e-12
    assert abs(got.b2.at(0, 0) - (cd - sd * z) ** n * w) < 1e-12
    assert abs(got.e.at(0, 0) - ev) < 1e-12


def test_normalize_rejects_non_monad_points():
    rng = rng_from_seed(14)
    mc = random_monad_coeffs(rng, 2, 2)
    with pytest.raises(InvalidInput):
        gauge_normalize(mc, 0)


def test_embed_gl_gauge_tracks_base_change():
    rng = rng_from_seed(15)
    c, n = 2, 2
    d = random_costable_triple(rng, c)
    phi0 = random_invertible(rng, c)
    mc = build_jm(d, n, 0)
    moved = gauge_action(embed_gl_gauge(phi0, n), mc)
    from xnadhm.plane import gl_action
    want = build_jm(gl_action(phi0, d), n, 0)
    for A, B in zip(moved.alpha1, want.alpha1):
        assert residual(A, B) / max(1.0, B.maxnorm()) < 1e-10
    for A, B in zip(moved.beta2, want.beta2):
        assert residual(A, B) / max(1.0, B.maxnorm()) < 1e-10
