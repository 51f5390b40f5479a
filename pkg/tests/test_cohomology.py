import random
from math import comb

import pytest

from ulrichcert.cohomology import (NotCohenMacaulay, canonical_module, ext_dim, ext_module,
                                   hom_module, resolution, sheaf_cohomology_dim)
from ulrichcert.gb import FreeModule
from ulrichcert.mpoly import Ring, parse_poly, random_poly
from ulrichcert.presentation import Ideal, ModulePresentation, poly_eval

P2 = Ring("x y z")
P3 = Ring("x y z w")
P5 = Ring(["z_0", "z_1", "z_2", "z_3", "z_4", "z_5"])


def quotient(R, *texts):
    return ModulePresentation.quotient_ring([parse_poly(t, R) for t in texts])


def twisted_cubic():
    return quotient(P3, "x*z - y^2", "y*w - z^2", "x*w - y*z")


def binom(a, b):
    # binomial coefficient as a polynomial in a, valid for negative a
    if b < 0:
        return 0
    num = 1
    for i in range(b):
        num *= a - i
    den = 1
    for i in range(1, b + 1):
        den *= i
    return num // den


def dims(M, degrees):
    return [M.hilbert_function((d,)) for d in degrees]


def test_hom_examples():
    R = Ring("x y")
    Sx = quotient(R, "x")
    S = ModulePresentation.free(R, [(0,)])
    H = hom_module(Sx, S)
    assert dims(H, range(-2, 4)) == [0] * 6
    H = hom_module(S, Sx)
    assert dims(H, range(-1, 5)) == dims(Sx, range(-1, 5))


@pytest.mark.parametrize("t", [-1, 0, 2])
def test_hom_from_free_is_twist(t):
    # Hom(S(-t), N) = N(t): graded pieces shift by t
    rng = random.Random(t)
    N = twisted_cubic()
    F = ModulePresentation.free(P3, [(t,)])
    H = hom_module(F, N)
    for d in range(-3, 4):
        assert H.hilbert_function((d,)) == N.hilbert_function((d + t,))
    # a cokernel presentation with two generators
    l1, l2 = random_poly(P2, (1,), rng), random_poly(P2, (1,), rng)
    G = FreeModule(P2, [(0,), (0,)])
    N2 = ModulePresentation(G, [G.element([l1, l2]), G.element([l2 * l2, l1 * l2])])
    H2 = hom_module(ModulePresentation.free(P2, [(t,)]), N2)
    for d in range(-2, 4):
        assert H2.hilbert_function((d,)) == N2.hilbert_function((d + t,))


def test_ext_examples():
    R = Ring("x y")
    M = quotient(R, "x", "y")
    assert [ext_dim(2, M, (-2,), (e,)) for e in range(-2, 3)] == [0, 0, 1, 0, 0]
    assert all(ext_dim(i, M, (-2,), (e,)) == 0 for i in (0, 1) for e in range(-3, 3))
    E = ext_module(2, M, (-2,))
    assert sorted(E.ambient.twists) == [(0,)]
    assert E.hilbert_function((0,)) == 1 and E.hilbert_function((1,)) == 0
    tc = twisted_cubic()
    assert all(ext_dim(0, tc, (0,), (e,)) == 0 for e in range(-4, 4))


@pytest.mark.parametrize("M", [twisted_cubic(), quotient(P3, "x", "y"), quotient(P2, "x^3")])
def test_ext_vanishes_above_projective_dimension(M):
    pd = resolution(M).length
    for i in range(pd + 1, M.ring.nvars + 1):
        for e in range(-6, 3):
            assert ext_dim(i, M, (-M.ring.nvars,), (e,)) == 0
        assert ext_module(i, M, (0,)).ambient.rank == 0


def test_cohomology_of_structure_sheaf_on_p5():
    S = ModulePresentation.free(P5, [(0,)])
    for d in range(-8, 3):
        assert sheaf_cohomology_dim(S, 0, d) == (comb(d + 5, 5) if d >= 0 else 0)
        for i in range(1, 5):
            assert sheaf_cohomology_dim(S, i, d) == 0
        assert sheaf_cohomology_dim(S, 5, d) == (binom(-d - 1, 5) if d <= -6 else 0)
    with pytest.raises(ValueError):
        sheaf_cohomology_dim(S, 6, 0)


def test_twisted_cubic_cohomology():
    tc = twisted_cubic()
    # O_C(d) = O_{P^1}(3d)
    for d in range(-3, 4):
        h0 = 3 * d + 1 if d >= 0 else 0
        h1 = -3 * d - 1 if d < 0 else 0
        assert sheaf_cohomology_dim(tc, 0, d) == h0
        assert sheaf_cohomology_dim(tc, 1, d) == h1
        assert sheaf_cohomology_dim(tc, 2, d) == 0


def _modules():
    rng = random.Random(9)
    out = [twisted_cubic(), quotient(P3, "x", "y"), quotient(P2, "x^4 + y^4 + z^4"),
           ModulePresentation.quotient_ring([random_poly(P3, (2,), rng) for _ in range(2)]),
           ModulePresentation.free(P2, [(1,)])]
    l1, l2 = random_poly(P2, (1,), rng), random_poly(P2, (1,), rng)
    G = FreeModule(P2, [(0,), (1,)])
    out.append(ModulePresentation(G, [G.element([l1 * l2, l1])]))
    tc = Ideal([parse_poly(t, P3) for t in ("x*z - y^2", "y*w - z^2", "x*w - y*z")], P3)
    out.append(ModulePresentation.ideal(tc.gens))
    return out


@pytest.mark.parametrize("k", range(7))
def test_euler_characteristic(k):
    M = _modules()[k]
    n = M.ring.nvars - 1
    P, _ = M.hilbert_polynomial()
    for d in range(-4, 4):
        chi = sum((-1) ** i * sheaf_cohomology_dim(M, i, d) for i in range(n + 1))
        assert chi == poly_eval(P, d)


def test_canonical_module_of_complete_intersection():
    rng = random.Random(4)
    I = Ideal([random_poly(P5, (2,), rng) for _ in range(2)], P5)
    W, degs = canonical_module(I)
    assert degs == [(2,)]
    for d in range(2, 5):
        assert W.hilbert_function((d,)) == I.hilbert_function((d - 2,))


def test_canonical_module_twisted_cubic():
    I = Ideal([parse_poly(t, P3) for t in ("x*z - y^2", "y*w - z^2", "x*w - y*z")], P3)
    W, degs = canonical_module(I, 2)
    # omega_C = O_{P^1}(-2): h0(omega(n)) = h0(O_P1(3n - 2))
    assert degs == [(1,), (1,)]
    for n in range(0, 4):
        assert W.hilbert_function((n,)) == max(3 * n - 1, 0)


def test_not_cohen_macaulay():
    skew = Ideal([parse_poly(t, P3) for t in ("x*z", "x*w", "y*z", "y*w")], P3)
    with pytest.raises(NotCohenMacaulay):
        canonical_module(skew, 2)


def test_serre_duality_on_the_curve(reference_run):
    I_D = reference_run.ideals["I_D"]
    W, degs = canonical_module(I_D, 4)
    assert degs == [(-1,), (-1,)]
    O_D = I_D.quotient_module()
    for j in range(4):
        assert sheaf_cohomology_dim(O_D, 1, j) == W.hilbert_function((-j,))
    assert W.hilbert_function((0,)) == 12


@pytest.mark.parametrize("k", [0, 3, 5])
def test_ext_independent_of_resolution(k):
    M = _modules()[k]
    n = M.ring.nvars
    C = resolution(M)
    for i in range(n + 1):
        E = ext_module(i, M, (-n,))
        for e in range(-6, 3):
            a = ext_dim(i, M, (-n,), (e,))
            assert a == ext_dim(i, C, (-n,), (e,)) == E.hilbert_function((e,))
