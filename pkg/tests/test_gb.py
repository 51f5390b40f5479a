import random

import pytest
from hypothesis import given, settings, strategies as st

from ulrichcert import linalg
from ulrichcert.gb import (FreeModule, Vector, apply_matrix, graded_pieces_matrix,
                           groebner_basis, normal_form, syzygy_module)
from ulrichcert.mpoly import Ring, parse_poly, random_poly
from oracles import (coefficient_rows, ideal_piece_rows, rank_mod_p, sympy_groebner,
                     sympy_remainder)


def P(text, R):
    return parse_poly(text, R)


def random_ideal(seed, nvars=None, p=997):
    rng = random.Random(seed)
    n = nvars or rng.randrange(2, 5)
    R = Ring([f"v{i}" for i in range(n)], p=p)
    gens = []
    for _ in range(rng.randrange(1, 4)):
        f = random_poly(R, (rng.randrange(1, 4),), rng, density=0.4)
        if f:
            gens.append(f)
    return R, gens or [R.var(0)]


def test_single_generator():
    R = Ring("x y z")
    f = P("3*x^2 - y*z", R)
    G = groebner_basis([f])
    assert G.polys() == [f.monic()]


def test_already_reduced():
    R = Ring("x y")
    G = groebner_basis([R.var("x"), R.var("y")])
    assert sorted(map(str, G.polys())) == ["x", "y"]


def test_twisted_cubic():
    R = Ring("x y z w")
    gens = [P("x*z - y^2", R), P("y*w - z^2", R), P("x*w - y*z", R)]
    G = groebner_basis(gens, certify=True)
    assert G.certified
    assert set(G.polys()) == {g.monic() for g in gens}
    assert set(G.polys()) == set(sympy_groebner(gens, R))


def test_normal_form_examples():
    R = Ring("x y z")
    G = groebner_basis([R.var("x"), R.var("y")])
    assert normal_form(R.one(), G) == R.one()
    f = P("x^2*z + x*y", R)
    assert normal_form(f, G).is_zero()


def test_normal_form_against_sympy_dehomogenized():
    # the engine is graded, so the affine ideal <x^2 - y, xy - 1> over F_7 is
    # homogenized by h (last in grevlex); setting h = 1 in the normal form of
    # x^2 y gives the affine remainder, which is unique given the lead terms
    Rh = Ring("x y h", p=7)
    G = groebner_basis([P("x^2 - y*h", Rh), P("x*y - h^2", Rh)], certify=True)
    assert G.certified
    r = normal_form(P("x^2*y", Rh), G)
    R = Ring("x y", p=7)
    x, y = R.gens()
    affine = r.substitute([x, y, R.one()], target=R)
    oracle = sympy_remainder(P("x^2*y", R), [P("x^2 - y", R), P("x*y - 1", R)], R)
    assert affine == oracle
    for e, _ in affine.terms:
        assert not (e[0] >= 2) and not (e[0] >= 1 and e[1] >= 1)


def test_inhomogeneous_rejected():
    R = Ring("x y")
    with pytest.raises(ValueError):
        groebner_basis([P("x^2 - y", R)])
    with pytest.raises(ValueError):
        groebner_basis([P("x^2 - y", R)], strategy="sugar")


@pytest.mark.parametrize("seed", range(50))
def test_strategies_agree(seed):
    R, gens = random_ideal(seed)
    bases = [groebner_basis(gens, strategy=s, certify=True) for s in ("sugar", "fifo", "f4")]
    for G in bases:
        assert G.certified
    assert bases[0].polys() == bases[1].polys() == bases[2].polys()


@pytest.mark.parametrize("seed", range(12))
def test_gb_matches_sympy(seed):
    R, gens = random_ideal(1000 + seed, nvars=3)
    assert set(groebner_basis(gens).polys()) == set(sympy_groebner(gens, R))


@pytest.mark.parametrize("seed", range(8))
def test_membership_vs_linear_algebra(seed):
    rng = random.Random(seed)
    R, gens = random_ideal(2000 + seed, nvars=3)
    G = groebner_basis(gens)
    for d in range(1, 7):
        span = ideal_piece_rows(gens, R, d)
        base = rank_mod_p(span, R.p) if span else 0
        member = None
        if span:
            # a random element of I_d
            member = R.zero()
            for g in gens:
                if g.degree() <= d:
                    member = member + g * random_poly(R, (d - g.degree(),), rng)
        probe = random_poly(R, (d,), rng)
        for f in (member, probe):
            if f is None:
                continue
            in_span = rank_mod_p(span + coefficient_rows([f], R, d), R.p) == base
            assert G.contains(f) == in_span
            assert normal_form(f, G).is_zero() == in_span


def _syz_degree_check(cols, F, src, syz, dmax):
    R = F.ring
    col_polys = [F.components(c) for c in cols]
    syz_polys = [src.components(s) for s in syz]
    syz_degs = [src.degree_of(s) for s in syz]
    for d in range(0, dmax + 1):
        A, unknowns, _ = graded_pieces_matrix(col_polys, F.twists, src.twists, (d,))
        if not unknowns:
            continue
        ker = len(unknowns) - linalg.rank(A, R.p)
        if syz:
            B, _, eqs = graded_pieces_matrix(syz_polys, src.twists, syz_degs, (d,))
            got = linalg.rank(B.T, R.p) if B.size else 0
        else:
            got = 0
        assert got == ker, d


@pytest.mark.parametrize("seed", range(6))
def test_syzygies_match_dense_kernel(seed):
    rng = random.Random(seed)
    R = Ring("x y z")
    F = FreeModule(R, [(0,), (1,)])
    cols = []
    for k in range(3):
        a = rng.randrange(1, 3)
        cols.append(F.element([random_poly(R, (a,), rng), random_poly(R, (a - 1,), rng)]))
    src, syz = syzygy_module(cols, F)
    for s in syz:
        assert not apply_matrix(cols, F, s, src)
    _syz_degree_check(cols, F, src, syz, 2 + 4)


def test_syzygy_examples():
    R = Ring("x y")
    F = FreeModule(R, [(0,)])
    x, y = R.gens()
    src, syz = syzygy_module([F.element([x]), F.element([y])], F)
    assert len(syz) == 1
    comps = src.components(syz[0])
    assert comps[0] == y.scale(comps[0].lead_coeff()) and comps[1] == -x.scale(comps[0].lead_coeff())
    F2 = FreeModule(R, [(0,), (0,)])
    src, syz = syzygy_module([F2.basis_vector(0), F2.basis_vector(1)], F2)
    assert syz == []


def test_module_gb_certificate():
    R = Ring("x y z")
    F = FreeModule(R, [(0,), (0,)])
    x, y, z = R.gens()
    gens = [Vector.from_components(F, [x, y]), Vector.from_components(F, [y, z]),
            Vector.from_components(F, [z, x])]
    G = groebner_basis(gens, certify=True)
    assert G.certified
    G2 = groebner_basis(gens, strategy="sugar", certify=True)
    assert G.elements == G2.elements


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_gb_certificate_property(seed):
    R, gens = random_ideal(seed)
    G = groebner_basis(gens, certify=True)
    assert G.certified
    assert G.contains_all(gens)
    for g in G.polys():
        assert g.lead_coeff() == 1


def test_truncated_gb_is_flagged():
    R = Ring("x y z")
    gens = [P("x*y - z^2", R), P("x^2 - y*z", R)]
    G = groebner_basis(gens, max_degree=2)
    assert not G.complete
    full = groebner_basis(gens)
    assert full.complete and len(full) >= len(G)
