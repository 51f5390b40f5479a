"""Export a Macaulay2 script that re-derives every pipeline check from the
constructed ideals, for validation by an independent computer algebra system.
"""

from .mpoly import format_poly

HEADER = """\
-- Cross-validation script written by ulrichcert.
-- Run with: M2 --script <this file>.  Every assert mirrors a report check.
p = {p};
kk = ZZ/p;
"""

COX = """
-- the curve D' in P^1 x P^2
S = kk[x_0,x_1,y_0,y_1,y_2, Degrees=>{{2:{{1,0}},3:{{0,1}}}}];
IDprime = ideal(
  {gens});
irr = ideal(x_0,x_1)*ideal(y_0,y_1,y_2);
assert(saturate(IDprime, irr) == IDprime);
assert(apply({{{{3,4}},{{4,3}},{{3,3}}}}, d -> hilbertFunction(d, module IDprime)) == {{10,3,0}});
(s,t) = toSequence gens degreesRing S;
assert(numerator hilbertSeries(module truncate({{3,3}}, IDprime), Reduce=>false)
  == 5*s^4*t^5 - 11*s^4*t^4 - 6*s^3*t^5 + 3*s^4*t^3 + 10*s^3*t^4);
"""

PLANE = """
-- plane model and its nodes
R = kk[y_0,y_1,y_2];
IGamma = ideal(
  {gens});
assert(numgens IGamma == 1 and first degree IGamma_0 == 10);
IDelta = saturate(IGamma + ideal jacobian IGamma);
delta = degree IDelta;
assert((10, binomial(9,2) - delta, delta) == (10, 12, 24));
assert(codim(minors(2, jacobian IDelta) + IDelta) == 3);
FDelta = res IDelta;
assert(apply(length FDelta + 1, i -> rank FDelta_i) == {{1,4,3}});
assert(hilbertFunction(7, module IDelta) == 12);
"""

P5 = """
-- the curve D in P^5 and the threefold X
T = kk[z_0..z_5];
ID = ideal(
  {gens_D});
IX = ideal(
  {gens_X});
hp = hilbertPolynomial(T/ID, Projective=>false);
assert((codim ID, degree ID, 1 - sub(hp, (ring hp)_0 => 0)) == (4, 15, 12));
FD = res ID;
assert(length FD == 4);
assert(apply(5, i -> rank FD_i) == {{1,12,25,16,2}});
omega = minimalPresentation Ext^4(T^1/ID, T^{{-6}});
assert(sort flatten degrees cover omega == {{-1,-1}});
assert(hilbertFunction(0, omega) == 12);
assert(isSubset(IX, ID) and codim IX == 2 and degree IX == 4);
assert(hilbertFunction(2, T/IX) == 19 and hilbertFunction(2, T/ID) == 19);

-- normal sheaves
P5 = Proj T;
ID2 = saturate(ID^2 + IX);
NDX = sheafHom(sheaf_P5(ID/ID2), sheaf_P5(T^1/ID));
assert((rank HH^0 NDX, rank HH^1 NDX) == (30, 0));
assert((rank HH^0 NDX(-1), rank HH^1 NDX(-1)) == (0, 0));
NDP = sheafHom(sheaf_P5(ID/saturate(ID^2)), sheaf_P5(T^1/ID));
assert((rank HH^0 NDP, rank HH^1 NDP) == (68, 0));

-- Ulrich numerics for the rank 3 bundle E with 0 -> O_X^2 -> E -> I_D/X(3) -> 0
h2 = hilbertFunction(2, module ID) - hilbertFunction(2, module IX);
h3 = hilbertFunction(3, module ID) - hilbertFunction(3, module IX);
assert((h2, h3, 2 + h3) == (0, 10, 12));
print "all checks passed";
"""


def _gens(polys):
    return ",\n  ".join(format_poly(f) for f in polys)


def macaulay2_script(ideals):
    """Script text for a dict of ideals with keys I_D and I_X (required) and
    optionally I_Dprime and I_Gamma."""
    I_D, I_X = ideals["I_D"], ideals["I_X"]
    out = [HEADER.format(p=I_D.ring.p)]
    if "I_Dprime" in ideals:
        out.append(COX.format(gens=_gens(ideals["I_Dprime"].gens)))
    if "I_Gamma" in ideals:
        out.append(PLANE.format(gens=_gens(ideals["I_Gamma"].gens)))
    out.append(P5.format(gens_D=_gens(I_D.gens), gens_X=_gens(I_X.gens)))
    return "".join(out)
