import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from gkm14.lattice import (
    IntegralLattice, LatticeError, NotInDual, NotPositiveDefinite, UnknownName, build_named,
    coset_q_value, discriminant_group, short_vectors,
)

H = Fraction(1, 2)


@pytest.fixture(scope="module")
def N():
    return build_named("N")


@pytest.fixture(scope="module")
def K():
    return build_named("K")


def box_counts(lat, x0, max_norm, radius=1):
    """Brute-force oracle: ambient vectors x0 + d, d in a box, that lie in x0 + L."""
    basis = np.array([[float(t) for t in r] for r in lat.basis])
    binv = np.linalg.inv(basis)
    form = float(lat.ambient_form[0])
    d = np.array(list(itertools.product(range(-radius, radius + 1), repeat=lat.rank)), dtype=float)
    y = d + np.array([float(t) for t in x0])
    nrm = form * np.sum(y * y, axis=1)
    y, nrm = y[nrm <= float(max_norm) + 1e-9], nrm[nrm <= float(max_norm) + 1e-9]
    c = (y - np.array([float(t) for t in x0])) @ binv
    member = np.all(np.abs(c - np.round(c)) < 1e-9, axis=1)
    return Counter(Fraction(round(v * 4), 4) for v in nrm[member])


def sympy_det(lat):
    return int(sympy.Matrix(lat.gram).det())


def test_det_N(N):
    assert N.det == 2 ** 14 == sympy_det(N)


def test_det_K(K):
    assert K.det == 2 ** 12 == sympy_det(K)


def test_ii11_unimodular():
    ii = build_named("II_1_1")
    assert abs(ii.det) == 1
    assert discriminant_group(ii)[0] == ()
    assert ii.gram == ((0, 1), (1, 0))


def test_unknown_name():
    with pytest.raises(UnknownName):
        build_named("A2")


def test_rescale_multiplies_gram():
    d4 = build_named("D4")
    assert build_named("D4", [("rescale", 3)]).gram == tuple(tuple(3 * x for x in r) for r in d4.gram)


def test_direct_sum_rank_and_det(N):
    l = build_named("N", [("direct_sum", "II11")])
    assert l.rank == 14 and l.det == -N.det


def test_odd_or_degenerate_gram_rejected():
    with pytest.raises(LatticeError):
        IntegralLattice([[1]])
    with pytest.raises(LatticeError):
        IntegralLattice([[2, 2], [2, 2]])


def test_json_round_trip(K):
    assert IntegralLattice.from_json(K.to_json()) == K


def test_invariant_factors_N(N):
    factors, gens = discriminant_group(N)
    assert factors == (2,) * 10 + (4, 4)
    assert len(gens) == 12


def test_invariant_factors_K(K):
    factors, _ = discriminant_group(K)
    assert factors == (2,) * 12


def test_invariant_factors_match_sympy_snf(N):
    from sympy.matrices.normalforms import smith_normal_form
    snf = smith_normal_form(sympy.Matrix(N.gram), domain=sympy.ZZ)
    diag = sorted(abs(int(snf[i, i])) for i in range(N.rank))
    assert tuple(d for d in diag if d != 1) == discriminant_group(N)[0]


@pytest.mark.parametrize("name", ["N", "K", "E8", "D4"])
def test_factor_product_is_det(name):
    lat = build_named(name)
    factors, _ = discriminant_group(lat)
    prod = 1
    for f in factors:
        prod *= f
    assert prod == abs(lat.det)


def test_q_values(N):
    assert coset_q_value(N.coset_from_ambient([H] + [0] * 11)) == Fraction(1, 4)
    assert coset_q_value(N.coset_from_ambient([H] * 4 + [0] * 8)) == 0
    assert coset_q_value(N.zero()) == 0


def test_q_value_independent_of_representative(N):
    v = N.coset_from_ambient([H] * 3 + [0] * 9)
    w = N.coset_from_ambient([H + 1, H, -H] + [0] * 9)
    assert coset_q_value(v) == coset_q_value(w) == Fraction(3, 4)


def test_not_in_dual(N):
    with pytest.raises(NotInDual):
        N.coset([Fraction(1, 3)] + [0] * 11)


def test_short_vectors_N(N):
    rpt = short_vectors(N.zero(), 4, use_cache=False)
    assert rpt.counts == {0: 1, 4: 264}
    assert rpt.counts == box_counts(N, [0] * 12, 4)


def test_short_vectors_K(K):
    rpt = short_vectors(K.zero(), 6, use_cache=False)
    assert rpt.counts == {0: 1, 4: 264, 6: 2048}
    oracle = box_counts(K, [0] * 12, 6) + box_counts(K, [H] * 12, 6)
    assert rpt.counts == oracle


def test_short_vectors_order_four_coset(N):
    # one minimal vector per coset: -v lies in a different coset of order 4
    x0 = [H] + [0] * 11
    rpt = short_vectors(N.coset_from_ambient(x0), H, use_cache=False)
    assert rpt.counts == {H: 1}
    assert box_counts(N, x0, H) == {H: 1}


def test_indefinite_rejected():
    with pytest.raises(NotPositiveDefinite):
        short_vectors(build_named("II_1_1").zero(), 2)


def test_vectors_have_listed_norms(K):
    rpt = short_vectors(K.coset_from_ambient([H, H] + [0] * 10), 3, want_vectors=True)
    assert Counter(K.norm(v) for v in rpt.vectors) == rpt.counts


def test_counts_over_all_cosets_equal_dual_count(K):
    """Summing coset counts over K'/K equals a direct count in K' (norms <= 4)."""
    data = K.discriminant()
    total = Counter()
    for a in itertools.product(*(range(d) for d in data.factors)):
        c = K.coset(data.element_coords(a))
        total.update(short_vectors(c, 4, use_cache=False).counts)
    # K' = (1/2)K scaled: norms in K' are those of K divided by 4, so count K at norm <= 16
    direct = Counter({k / 4: v for k, v in short_vectors(K.zero(), 16, use_cache=False).counts.items()})
    assert total == direct


@given(st.lists(st.sampled_from([0, H, Fraction(1, 4), Fraction(3, 4)]), min_size=12, max_size=12))
def test_negation_symmetry(x):
    N = build_named("N")
    x = [x[0]] * 12 if x[0] in (Fraction(1, 4), Fraction(3, 4)) else [t if t in (0, H) else 0 for t in x]
    c = N.coset_from_ambient(x)
    a = short_vectors(c, 3, use_cache=False).counts
    b = short_vectors(-c, 3, use_cache=False).counts
    assert a == b
    if (2 * c).class_key() == (0,) * 12:
        assert all(v % 2 == 0 for k, v in a.items() if k > 0)
