from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gkm14 import gkm, modforms
from gkm14.gkm import (
    BASIS, ZERO, ClosureNotCertified, NotInLattice, NotRealRoot, TruncationExceeded,
    classify_real_root, key_from_ambient, norm, pair, reflect, root_multiplicity,
)

H = Fraction(1, 2)
II = lambda m, n: ZERO[:12] + (m, n)  # noqa: E731


@pytest.fixture(scope="module")
def datum():
    return gkm.default_datum()


@pytest.fixture(scope="module")
def lat(datum):
    return datum.lattice


@pytest.fixture(scope="module")
def rho(datum):
    return gkm.weyl_vector_search(datum=datum)


@pytest.fixture(scope="module")
def frame(rho, lat):
    return gkm.Frame(rho.two_rho, lat, rho.epsilon)


keys = st.lists(st.integers(-2, 2), min_size=14, max_size=14).map(
    lambda c: tuple(sum(ci * b[j] for ci, b in zip(c, BASIS)) for j in range(14)))


# -- the lattice --------------------------------------------------------------

def test_basis_norms_and_signature(lat):
    assert lat.signature == (13, 1)
    assert norm(BASIS[0]) == H
    assert norm(BASIS[11]) == Fraction(3, 2)
    assert pair(BASIS[12], BASIS[13]) == 1
    for b in BASIS:
        assert lat.contains(b)


def test_not_in_lattice(lat):
    assert not lat.contains((1,) + (0,) * 13)
    with pytest.raises(NotInLattice):
        key_from_ambient([Fraction(1, 8)] + [0] * 11)


@given(keys)
def test_coords_round_trip(lat, k):
    c = lat.coords(k)
    assert tuple(sum(ci * b[j] for ci, b in zip(c, BASIS)) for j in range(14)) == k


def test_height_vector_must_be_timelike():
    with pytest.raises(ValueError):
        gkm.RootLattice(height_vector=II(1, 1))


# -- multiplicities ----------------------------------------------------------------

def test_mult_norm2_in_L():
    assert root_multiplicity(II(1, 1)) == 1


def test_mult_isotropic_class0():
    assert root_multiplicity(II(1, 0)) == 12


def test_mult_norm_minus2_in_L():
    assert root_multiplicity(II(1, -1)) == 300


def test_mult_orbit7_norm1_is_zero(lat):
    # Table 1 orbit 7 representative has norm 3; the II part (1, -1) brings it to 1
    k = key_from_ambient([H] * 6 + [0] * 6, 1, -1)
    assert norm(k) == 1 and lat.orbit(k) == 7
    assert root_multiplicity(k) == 0


def test_truncation_exceeded(lat):
    shallow = gkm.RootDatum(lat, order=4)
    with pytest.raises(TruncationExceeded):
        shallow.mult(II(5, -1))
    assert root_multiplicity(II(5, -1)) == modforms.vkplus_characters(6).f[0].coeff(5)


def test_zero_has_no_multiplicity(datum):
    with pytest.raises(ValueError):
        datum.mult(ZERO)


@given(keys)
def test_mult_symmetric(datum, k):
    if k == ZERO or norm(k) < -6:
        return
    assert root_multiplicity(k) == root_multiplicity(gkm.neg(k))


@given(keys, st.sampled_from(range(12)))
def test_mult_depends_on_class_and_norm(lat, k, i):
    """Sign changes and II swaps keep class and norm, hence multiplicity."""
    if k == ZERO or norm(k) < -6:
        return
    flipped = tuple(-t if j == i else t for j, t in enumerate(k[:12])) + (k[13], k[12])
    assert norm(flipped) == norm(k)
    if lat.class_index(flipped) == lat.class_index(k):
        assert root_multiplicity(flipped) == root_multiplicity(k)


def test_f_principal_parts_give_only_three_real_norms():
    chars = modforms.vkplus_characters(6)
    neg = {n + 1: [e for e in f.exponents() if e < 0] for n, f in enumerate(chars.f)}
    assert neg == {1: [-1], 2: [], 3: [], 4: [-H], 5: [], 6: [], 7: [Fraction(-1, 4)]}
    # f1 <-> norm 2 (class 0 only), f4 <-> norm 1, f7 <-> norm 1/2, each coefficient 1
    assert [chars.f[n - 1].coeff(neg[n][0]) for n in (1, 4, 7)] == [1, 1, 1]


# -- classification and reflections --------------------------------------------------

def test_classify_examples(lat):
    half = key_from_ambient([H] + [0] * 11)
    assert norm(half) == H and classify_real_root(half) == "real_type_3"
    assert root_multiplicity(half) == 1
    one = key_from_ambient([H, H] + [0] * 10)
    assert lat.orbit(one) == 6 and classify_real_root(one) == "real_type_2"
    assert classify_real_root(II(1, 1)) == "real_type_1"
    assert classify_real_root(II(2, 1)) == "not_root"
    assert classify_real_root(II(1, -1)) == "imaginary"
    assert classify_real_root(ZERO) == "not_root"


def test_sampled_real_roots(lat):
    for t, ks in gkm.sample_real_roots(lat).items():
        assert len(ks) == 8
        for k in ks:
            assert classify_real_root(k) == gkm.REAL_TYPES[t]
            assert root_multiplicity(k) == 1


def test_reflect_alpha_is_minus_alpha(lat):
    for ks in gkm.sample_real_roots(lat, 4).values():
        for a in ks:
            assert reflect(a, a) == tuple(Fraction(-t) for t in a)


def test_reflect_requires_real_root():
    with pytest.raises(NotRealRoot):
        reflect(II(1, -1), II(1, 0))


def _l_basis():
    """Keys of a basis of L = N + II_{1,1} (N-part x in D12, key 4x)."""
    rows = []
    for i in range(11):
        x = [0] * 12
        x[i], x[i + 1] = 4, -4
        rows.append(tuple(x) + (0, 0))
    rows.append((0,) * 10 + (4, 4, 0, 0))
    return rows + [II(1, 0), II(0, 1)]


def test_reflections_preserve_lattice_on_generators(lat):
    """4(x, alpha) is integral for alpha^2 = 1/2, so reflections map L' into L'."""
    for ks in gkm.sample_real_roots(lat).values():
        for a in ks:
            for x in BASIS:
                y = reflect(a, x)
                assert all(t.denominator == 1 for t in y)
                y = tuple(int(t) for t in y)
                assert lat.contains(y)
                assert norm(y) == norm(x)


def test_reflections_act_on_discriminant_by_orbit_preserving_isometries(lat):
    """L goes to L, and the induced map on L'/L keeps every Table 1 orbit."""
    lbasis = _l_basis()
    for ks in gkm.sample_real_roots(lat).values():
        for a in ks:
            for x in lbasis:
                assert lat.in_L(tuple(int(t) for t in reflect(a, x)))
            for x in BASIS:
                y = tuple(int(t) for t in reflect(a, x))
                assert lat.orbit(y) == lat.orbit(x)


@given(keys, st.integers(0, 23))
def test_weyl_invariance_of_mult(lat, b, i):
    roots = [k for ks in gkm.sample_real_roots(lat).values() for k in ks]
    a = roots[i]
    if b == ZERO or norm(b) < -6:
        return
    img = tuple(int(t) for t in reflect(a, b))
    assert root_multiplicity(img) == root_multiplicity(b)


# -- Weyl vector -------------------------------------------------------------------

def test_weyl_vector_properties(rho, lat):
    z = rho.two_rho
    assert norm(z) == 0
    assert lat.primitive(z)
    assert lat.in_double(z)
    assert z == (46, 42, 38, 34, 30, 26, 22, 18, 14, 10, 6, 2, 23, -25)
    assert any(c.startswith("no real root") for c in rho.certificates)


def test_simple_roots_satisfy_weyl_condition(rho, frame):
    assert len(rho.simple_roots) >= 20
    for s in rho.simple_roots:
        assert pair(s.key, frame.rho) / s.norm == -H
        assert root_multiplicity(s.key) == 1
        assert s.kind.startswith("real_type")
        assert norm(s.key) > 0


def test_weyl_vector_deterministic(datum, rho):
    again = gkm.weyl_vector_search(datum=datum)
    assert again.two_rho == rho.two_rho
    assert [s.key for s in again.simple_roots] == [s.key for s in rho.simple_roots]


def test_simple_real_roots_api(rho, datum):
    roots = gkm.simple_real_roots(rho, Fraction(1, 4), datum)
    assert [r.key for r in roots] == [r.key for r in rho.simple_roots if r.height <= Fraction(1, 4)]


def test_simple_reflections_keep_real_roots_real(rho, frame, datum):
    """Closure oracle: simple reflections send low real roots to real roots."""
    low = [r for r in gkm.positive_roots(frame, datum, Fraction(7, 16)) if r.kind.startswith("real")]
    lat = datum.lattice
    for s in rho.simple_roots[:40]:
        for r in low:
            img = tuple(int(t) for t in reflect(s.key, r.key))
            assert gkm.real_root_type(img, lat) is not None
            assert lat.orbit(img) == lat.orbit(r.key)


def test_positive_roots_permuted_by_simple_reflection(rho, frame, datum):
    roots = gkm.positive_roots(frame, datum, H)
    s = rho.simple_roots[0]
    for r in roots:
        if r.key == s.key:
            continue
        img = tuple(int(t) for t in reflect(s.key, r.key))
        assert frame.hnum(img) > 0
        assert root_multiplicity(img) == r.mult


# -- Weyl orbit -------------------------------------------------------------------

def test_weyl_orbit(rho, datum):
    orbit = gkm.weyl_orbit_of_rho(rho, Fraction(7, 16), datum)
    assert orbit[0] == (rho.two_rho, 1)
    seen = dict(orbit)
    for x in seen:
        assert norm(x) == 0
    for s in rho.simple_roots:
        img = tuple(int(t) for t in reflect(s.key, rho.two_rho))
        if img in seen:
            assert seen[img] == -1


def test_weyl_orbit_needs_simple_roots(rho, datum):
    with pytest.raises(ClosureNotCertified):
        gkm.weyl_orbit_of_rho(rho, H, datum, rho.simple_roots, Fraction(1, 4))


# -- denominator identity -----------------------------------------------------------

def test_anchor_and_isotropic_terms(rho, frame, datum):
    hb = Fraction(7, 16)
    roots = gkm.positive_roots(frame, datum, hb)
    lhs = gkm.product_side(frame, roots, hb)
    simple = [r for r in roots if r.kind.startswith("real") and r.norm == 2 * frame.level(r.key)]
    rhs = gkm.sum_side(frame, gkm.weyl_orbit_of_rho(rho, hb, datum, simple, hb), hb)
    assert lhs.terms[ZERO] == rhs.terms[ZERO] == 1
    assert lhs.terms[frame.z] == rhs.terms[frame.z] == -12


def test_denominator_identity_half(rho, datum):
    rep = gkm.denominator_check(H, rho, datum)
    assert rep.passed, rep.first_mismatch
    assert rep.n_exponents_compared >= 100 and rep.n_weyl_elements >= 25


def test_reverse_order_oracle(rho, frame, datum):
    """Ledgers built from opposite root orders agree term by term."""
    hb = Fraction(7, 16)
    roots = gkm.positive_roots(frame, datum, hb)
    a = gkm.product_side(frame, roots, hb)
    b = gkm.product_side(frame, roots[::-1], hb)
    assert a.support() == b.support()
    assert all(a.terms.get(k, 0) == b.terms.get(k, 0) for k in a.support())
    assert gkm.denominator_check(hb, rho, datum, reverse_order=True).passed


def test_parallel_enumeration_matches(frame, datum):
    hb = Fraction(7, 16)
    assert gkm.positive_roots(frame, datum, hb, workers=2) == gkm.positive_roots(frame, datum, hb)


def test_report_json(rho, datum):
    js = gkm.denominator_check(Fraction(3, 8), rho, datum).to_json()
    assert set(js) >= {"height_bound", "n_exponents_compared", "n_weyl_elements", "pass"}
    assert js["height_bound"] == "3/8"


def test_no_positive_norm_roots_outside_real_norms(frame, datum):
    for r in gkm.positive_roots(frame, datum, H):
        if r.norm > 0:
            assert r.norm in (H, 1, 2) and r.mult == 1
        else:
            assert r.kind == "imaginary"
