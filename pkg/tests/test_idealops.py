import random

import pytest
from hypothesis import given, settings, strategies as st

from ulrichcert import linalg
from ulrichcert.gb import dense_kernel
from ulrichcert.idealops import (RingMap, codim, eliminate, ideal_quotient, intersect,
                                 irrelevant_ideal, preimage, quotient_by_element, saturate,
                                 saturate_by_element, singular_locus_check)
from ulrichcert.mpoly import Ring, parse_poly, random_poly
from ulrichcert.presentation import Ideal

COX = Ring(["x_0", "x_1", "y_0", "y_1", "y_2"], [(1, 0), (1, 0), (0, 1), (0, 1), (0, 1)])


def ideal(R, *texts):
    return Ideal([parse_poly(t, R) for t in texts], R)


R2 = Ring("x y")
R3 = Ring("x y z")
P3 = Ring("x y z w")


def test_quotient_examples():
    I = ideal(R2, "x^2", "x*y")
    assert ideal_quotient(I, ideal(R2, "1")) == I
    assert ideal_quotient(I, ideal(R2, "x")) == ideal(R2, "x", "y")
    assert ideal_quotient(I, ideal(R2, "x", "y")) == ideal(R2, "x")
    with pytest.raises(ValueError):
        ideal_quotient(I, Ideal([R2.zero()], R2))


def test_saturation_examples():
    I = ideal(R2, "x^2", "x*y")
    assert saturate(I, ideal(R2, "x", "y")) == ideal(R2, "x")
    assert saturate(I) == ideal(R2, "x")
    tc = ideal(P3, "x*z - y^2", "y*w - z^2", "x*w - y*z")
    assert saturate(tc, ideal(P3, "x", "y")) == tc
    assert saturate(tc) == tc


def test_twisted_cubic_embedded_point_removed():
    tc = ideal(P3, "x*z - y^2", "y*w - z^2", "x*w - y*z")
    m = irrelevant_ideal(P3)
    dirty = tc * ideal(P3, "x", "y", "z", "w") + Ideal(tc.gens[:1], P3)
    assert dirty != tc
    assert saturate(dirty) == tc
    assert saturate(dirty, m, method="quotient") == tc


def test_cox_irrelevant_ideal_is_bidegree_11_monomials():
    m = irrelevant_ideal(COX)
    mons = Ideal([COX.monomial(e) for e in COX.monomials((1, 1))], COX)
    assert len(mons.gens) == 6
    assert m == mons


def random_bigraded(seed):
    rng = random.Random(seed)
    gens = [random_poly(COX, rng.choice([(1, 1), (1, 2), (2, 1)]), rng, density=0.5)
            for _ in range(rng.randrange(2, 4))]
    x0, y0 = COX.var(0), COX.var(2)
    # a component supported on the irrelevant locus
    junk = [f * x0 for f in gens] + [gens[0] * y0]
    return Ideal([g for g in junk if g], COX)


def random_standard(seed):
    rng = random.Random(seed)
    gens = [random_poly(R3, (rng.randrange(1, 3),), rng, density=0.6)
            for _ in range(rng.randrange(1, 3))]
    gens = [g for g in gens if g] or [R3.var(0)]
    m = [R3.var(i) for i in range(3)]
    return Ideal([g * rng.choice(m) for g in gens], R3)


@pytest.mark.parametrize("seed", range(6))
def test_saturation_properties(seed):
    I = random_bigraded(seed) if seed % 2 else random_standard(seed)
    J = irrelevant_ideal(I.ring)
    Q = ideal_quotient(I, J)
    S = saturate(I)
    assert I.is_subset(Q) and Q.is_subset(S)
    assert saturate(S) == S
    assert saturate(I, J, method="quotient") == S


def test_saturate_by_element():
    I = ideal(R2, "x^3*y", "x^2*y^2")
    assert saturate_by_element(I, R2.var("x")) == ideal(R2, "y")
    assert quotient_by_element(I, R2.var("x")) == ideal(R2, "x^2*y", "x*y^2")


def test_intersection():
    I = ideal(R2, "x")
    J = ideal(R2, "y")
    assert intersect(I, J) == ideal(R2, "x*y")
    K = ideal(R3, "x", "y")
    L = ideal(R3, "y", "z")
    assert intersect(K, L) == ideal(R3, "y", "x*z")


def test_eliminate_cusp():
    R = Ring("y x z", degrees=[1, 2, 3])
    I = ideal(R, "x - y^2", "z - y^3")
    E = eliminate(I, ["y"])
    assert E == ideal(R, "x^3 - z^2")
    T = Ring("x z", degrees=[2, 3])
    assert eliminate(I, ["y"], target=T) == ideal(T, "x^3 - z^2")


def test_eliminate_nothing():
    I = ideal(R3, "x*y - z^2", "x^2 - y*z")
    assert eliminate(I, []) == I


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_eliminate_in_steps(seed):
    rng = random.Random(seed)
    R = Ring("a b c d")
    I = Ideal([random_poly(R, (2,), rng, density=0.5) for _ in range(3)] + [R.var(3) * R.var(0)], R)
    both = eliminate(I, ["a", "b"])
    steps = eliminate(eliminate(I, ["a"]), ["b"])
    assert both == steps


def test_preimage_examples():
    A = Ring("z_0 z_1")
    B = Ring("t")
    t = B.var(0)
    phi = RingMap(A, B, [t, t * 2])
    assert preimage(phi) == ideal(A, "z_1 - 2*z_0")
    ident = RingMap(R3, R3, list(R3.gens()))
    J = ideal(R3, "x*y - z^2")
    assert preimage(ident, J) == J


def test_preimage_twisted_cubic():
    # the Veronese-type map P^3 <- P^1 by cubics has the twisted cubic as kernel
    B = Ring("s t")
    s, t = B.gens()
    phi = RingMap(P3, B, [s**3, s**2 * t, s * t**2, t**3])
    K = preimage(phi)
    assert K == ideal(P3, "x*z - y^2", "y*w - z^2", "x*w - y*z")


@pytest.mark.parametrize("seed", range(4))
def test_preimage_against_dense_kernel(seed):
    rng = random.Random(seed)
    A = Ring("u v w")
    B = Ring("s t r")
    images = [random_poly(B, (2,), rng) for _ in range(3)]
    J = Ideal([random_poly(B, (3,), rng)], B)
    phi = RingMap(A, B, images)
    K = preimage(phi, J)
    for g in K.gens:
        assert J.contains(phi(g))
    for d in (1, 2, 3):
        # dim of {f in A_d : phi(f) in J}: kernel of A_d ⊕ B_{2d-3} -> B_{2d}
        mons = A.monomials((d,))
        cols = [[phi(A.monomial(e))] for e in mons] + [[J.gens[0]]]
        ker = dense_kernel(cols, [(0,)], [(2 * d,)] * len(mons) + [(3,)], (2 * d,))
        # multipliers of the A-columns are constants; project the kernel onto them
        rows = [[vec[k].coefficient((0, 0, 0)) for k in range(len(mons))] for vec in ker]
        dim = linalg.rank(linalg.as_matrix(rows, len(mons)), A.p) if rows else 0
        assert len(mons) - K.hilbert_function((d,)) == dim


def test_singular_locus():
    conic = ideal(R3, "x^2 + y^2 + z^2")
    J, k, ok = singular_locus_check(conic, 3)
    assert ok and k == 3
    cone = ideal(R3, "x^2 + y^2")
    _, k, ok = singular_locus_check(cone, 3)
    assert not ok and k == 2


def test_codim_examples():
    assert codim(Ideal([], R3)) == 0
    assert codim(ideal(R3, "x", "y")) == 2
    assert codim(ideal(P3, "x*z - y^2", "y*w - z^2", "x*w - y*z")) == 2
    assert codim(ideal(R3, "x", "y", "z")) == 3
