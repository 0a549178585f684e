"""Quadratic form matrices, exact rank, pencil invariants, classification."""

from fractions import Fraction

import numpy as np
import pytest

from zmckit.families import ads, ds2, make_poly
from zmckit.isometry import apply_to_poly, boost_exact, random_exact_isometry, rotation_exact
from zmckit.parser import parse_poly
from zmckit.poly import Poly
from zmckit.quadform import (
    QuadMatrix,
    char_poly_exact,
    classify_candidate,
    exact_rank,
    from_matrix,
    pencil_invariants,
    reducibility_rank,
    to_matrix,
)
from zmckit.scalars import ONE, ZERO, QuadExtScalar
from zmckit.zmc import AmbientSig

SIG4 = AmbientSig(2, -1, 4)


def test_to_matrix_hand_example():
    f = parse_poly("2 x1 x2 + x3^2 - x4^2", 4)
    qm = to_matrix(f, SIG4)
    a = qm.entries
    assert a[0][1] == ONE and a[1][0] == ONE
    assert a[2][2] == ONE and a[3][3] == QuadExtScalar(-1)
    assert a[0][0] == ZERO and a[0][2] == ZERO


def test_to_matrix_requires_degree_two():
    with pytest.raises(ValueError, match="degree 2"):
        to_matrix(parse_poly("x1^3", 4), SIG4)
    with pytest.raises(ValueError, match="degree 2"):
        to_matrix(parse_poly("x1^2 + x2", 4), SIG4)


def test_round_trip_random_quadrics():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        terms = {}
        for _ in range(int(rng.integers(1, 7))):
            i, j = sorted(rng.integers(0, n, size=2))
            mono = [0] * n
            mono[i] += 1
            mono[j] += 1
            terms[tuple(mono)] = QuadExtScalar(
                Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
            )
        f = Poly(n, terms)
        if f.is_zero():
            continue
        sig = AmbientSig(min(2, n - 1), -1, n)
        assert from_matrix(to_matrix(f, sig)) == f


def test_exact_rank_examples():
    assert reducibility_rank(to_matrix(make_poly(ads(1, 1, 0)), SIG4)) == "irreducible"
    assert reducibility_rank(to_matrix(parse_poly("x1 x2", 4), SIG4)) == "reducible"
    assert reducibility_rank(to_matrix(parse_poly("x1^2", 4), SIG4)) == "reducible"


def test_exact_rank_with_surds():
    f = make_poly(ads(2, 3, 1))
    qm = to_matrix(f, f_sig := ads(2, 3, 1).sig)
    assert exact_rank([list(r) for r in qm.entries]) == f_sig.nvars - 1  # u-block is zero


def test_char_poly_of_known_matrix():
    # B2 A for f = 2 x1 x2 + x3^2 - x4^2 has blocks [[0,-1],[-1,0]], diag(1,-1):
    # spectrum {1, 1, -1, -1}, char poly (x^2-1)^2 = x^4 - 2x^2 + 1.
    qm = to_matrix(make_poly(ads(1, 1, 0)), SIG4)
    coeffs = char_poly_exact(
        [[qm.entries[i][j] * qm.sig.b_diag[i] for j in range(4)] for i in range(4)]
    )
    assert coeffs == (
        ONE,
        ZERO,
        QuadExtScalar(-2),
        ZERO,
        ONE,
    )
    inv = pencil_invariants(qm)
    values = sorted(v.real for v in inv.eigenvalues)
    assert np.allclose(values, [-1, -1, 1, 1])


def test_pencil_invariants_isometry_invariance():
    spec = ads(2, 1, 1)
    f = make_poly(spec)
    sig = spec.sig
    base = pencil_invariants(to_matrix(f, sig)).char_poly
    m = rotation_exact(sig, 3, 4, Fraction(2, 5))
    m2 = boost_exact(sig, 1, 3, Fraction(1, 3))
    for iso in (m, m2):
        moved = apply_to_poly(f, iso)
        assert pencil_invariants(to_matrix(moved, sig)).char_poly == base


def test_ds2_pencil_regression():
    # Frozen exact fingerprints; the float roots were cross-checked against
    # numpy eigenvalues of B A and equal {-sqrt(m) x2, (1/sqrt(m)) x(m+1)}.
    frozen = {
        2: "x^5 + 1/2 sqrt(2) x^4 - 5/2 x^3 - 1/4 sqrt(2) x^2 + 2 x - 1/2 sqrt(2)",
        3: "x^6 + 2/3 sqrt(3) x^5 - 3 x^4 - 4/9 sqrt(3) x^3 + 31/9 x^2 "
           "- 10/9 sqrt(3) x + 1/3",
        4: "x^7 + 3/2 x^6 - 7/2 x^5 - 5/4 x^4 + 85/16 x^3 - 121/32 x^2 "
           "+ 9/8 x - 1/8",
    }
    for m, want in frozen.items():
        spec = ds2(m)
        inv = pencil_invariants(to_matrix(make_poly(spec), spec.sig))
        # Render the char poly as a univariate for comparison.
        coeffs = inv.char_poly
        n = len(coeffs) - 1
        rendered = Poly(
            1, {(n - i,): c for i, c in enumerate(coeffs) if not c.is_zero()}
        ).render().replace("x1", "x")
        assert rendered == want, rendered
        values = sorted(v.real for v in inv.eigenvalues)
        expected = [-(m**0.5)] * 2 + [m**-0.5] * (m + 1)
        assert np.allclose(values, expected, atol=1e-8)


def test_classify_family_members_self_match():
    for m, n, k in [(1, 1, 0), (2, 3, 1), (1, 2, 2)]:
        spec = ads(m, n, k)
        result = classify_candidate(make_poly(spec), spec.sig)
        assert result.verdict == "matches"
        assert result.params == (m, n, k)


def test_classify_after_isometry():
    rng = np.random.default_rng(17)
    spec = ads(2, 3, 1)
    f = make_poly(spec)
    for _ in range(5):
        iso = random_exact_isometry(spec.sig, rng, steps=4)
        result = classify_candidate(apply_to_poly(f, iso), spec.sig)
        assert result.verdict == "matches"
        assert result.params == (2, 3, 1)


def test_classify_generic_cone_is_inconclusive():
    # The residual of x1^2 + x2^2 - x3^2 in index 2 is exactly 32 f (the
    # variety is empty on the pseudo-sphere: the cone meets only <Bx,x> = 0),
    # so divisibility and irreducibility hold but no fingerprint can match.
    f = parse_poly("x1^2 + x2^2 - x3^2", 3)
    from zmckit.zmc import zmc_residual

    sig = AmbientSig(2, -1, 3)
    assert zmc_residual(f, sig) == f.scale(32)
    result = classify_candidate(f, sig)
    assert result.verdict == "inconclusive"


def test_classify_rejects_non_dividing_quadric():
    f = parse_poly("x1^2 + 2 x2^2 - x3^2", 3)
    result = classify_candidate(f, AmbientSig(2, -1, 3))
    assert result.verdict == "not in family"
    assert "residual" in result.detail


def test_classify_rejects_reducible():
    f = parse_poly("x1 x2", 4)
    # This happens to satisfy divisibility in (2,-1)?  Rank 2 regardless.
    result = classify_candidate(f, SIG4)
    assert result.verdict in ("not in family", "inconclusive")
    if result.verdict == "not in family":
        assert result.params is None


def test_classify_scalar_multiple_is_inconclusive():
    f = make_poly(ads(1, 2, 0)).scale(3)
    result = classify_candidate(f, ads(1, 2, 0).sig)
    assert result.verdict == "inconclusive"


def test_classify_wrong_inputs():
    with pytest.raises(ValueError, match="degree-2"):
        classify_candidate(parse_poly("x1^3", 4), SIG4)
    with pytest.raises(ValueError, match="signature"):
        classify_candidate(parse_poly("x1^2", 4), AmbientSig(1, 1, 4))


def test_fingerprint_injectivity_report():
    """Empirical check that pencil fingerprints separate parameter triples."""
    seen = {}
    collisions = []
    for total in range(2, 9):
        for m in range(1, total):
            for n in range(1, total - m + 1):
                k = total - m - n
                spec = ads(m, n, k)
                qm = to_matrix(make_poly(spec), spec.sig)
                key = char_poly_exact(
                    [
                        [qm.entries[i][j] * spec.sig.b_diag[i] for j in range(spec.nvars)]
                        for i in range(spec.nvars)
                    ]
                )
                if (spec.nvars, key) in seen:
                    collisions.append((seen[(spec.nvars, key)], (m, n, k)))
                seen[(spec.nvars, key)] = (m, n, k)
    print(f"fingerprint collisions across m+n+k <= 8: {collisions or 'none'}")
    assert collisions == []
