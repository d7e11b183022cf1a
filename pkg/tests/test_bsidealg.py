from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from strandmirror.bsidealg import (
    BHom,
    all_intervals,
    algebra_table,
    check_semiorthogonal,
    compose,
    correction_set,
    exactness_report,
    ext_m_projective,
    ext_pbar_projective,
    ext_pbar_self,
    ext_table,
    generator,
    hom_exponent,
    hom_table,
    identity,
    initial_intervals,
    iv,
    m_module_components_ok,
    localization_kernel_check,
    m_module_complex,
    module_components,
    monomial_quotient_support,
    pbar_complex,
    pbar_components_ok,
    projective,
    quiver_arrows,
    quiver_relations,
    restriction_sequence_ok,
    union,
)

# Oracle: a map P_I -> P_J is an element r of R/(x_I) with x_J r = 0, i.e. a
# monomial x^g with g not >= 1_I but g + 1_J >= 1_I.  Composition multiplies
# the two elements inside R/(x_I).


def _ind(k, I):
    return tuple(int(I.lo <= i <= I.hi) for i in range(1, k + 1))


def _dominates(g, e):
    return all(a >= b for a, b in zip(g, e))


def oracle_homs(k, I, J, bound):
    eI, eJ = _ind(k, I), _ind(k, J)
    out = set()
    for g in product(range(bound + 1), repeat=k):
        if not _dominates(g, eI) and _dominates(tuple(a + b for a, b in zip(g, eJ)), eI):
            out.add(g)
    return out


def to_monomial(h: BHom):
    eI, eJ = _ind(h.k, h.source), _ind(h.k, h.target)
    lead = tuple(int(a and not b) for a, b in zip(eI, eJ))
    return {tuple(b + l for b, l in zip(beta, lead)): c for beta, c in h.coeff.items()}


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_hom_spaces_match_module_oracle(k):
    bound = 2
    for I in all_intervals(k):
        for J in all_intervals(k):
            want = oracle_homs(k, I, J, bound)
            got = set()
            for w in hom_table(k, I, J, 2 * bound + 1):
                beta = hom_exponent(k, I, J, w)
                (g,) = to_monomial(generator(k, I, J, beta))
                if max(g) <= bound:
                    got.add(g)
            assert got == want, (I, J)


def test_hom_examples():
    k = 3
    assert hom_exponent(k, iv(1, 2), iv(1, 2), (0, 0, 0)) == (0, 0, 0)
    # End(P_I) = R/(x_I): x_1 x_2 vanishes on P_[1,2]
    assert hom_exponent(k, iv(1, 2), iv(1, 2), (2, 2, 0)) is None
    assert hom_exponent(k, iv(1, 2), iv(1, 2), (2, 0, 4)) == (1, 0, 2)
    # P_[1] -> P_[1,2] is the projection, P_[1,2] -> P_[2] multiplies by x_1
    assert hom_exponent(k, iv(1), iv(1, 2), (0, 1, 0)) == (0, 0, 0)
    assert hom_exponent(k, iv(1, 2), iv(2), (1, 0, 0)) == (0, 0, 0)
    assert hom_exponent(k, iv(1, 2), iv(2), (0, 0, 0)) is None


def test_correction_set():
    assert correction_set(iv(1), iv(1, 2), iv(2)) == frozenset()
    assert correction_set(iv(1), iv(2), iv(1)) == frozenset({1, 2})
    assert correction_set(iv(1, 2), iv(1, 3), iv(1, 2)) == frozenset({3})


def test_compose_examples():
    k = 2
    a = generator(k, iv(1), iv(1, 2))
    b = generator(k, iv(1, 2), iv(2))
    assert compose(a, b).is_zero()
    # x_1 followed by the projection is x_1 in End(P_[1,2])
    assert compose(b, generator(k, iv(2), iv(1, 2))).coeff == {(1, 0): 1}
    with pytest.raises(ValueError):
        compose(a, a)
    with pytest.raises(ValueError):
        union(iv(1), iv(3))


ALL3 = all_intervals(3)


@st.composite
def chain(draw, k=3, length=2):
    objs = [draw(st.sampled_from(all_intervals(k))) for _ in range(length + 1)]
    maps = []
    for I, J in zip(objs, objs[1:]):
        ind = tuple(int(a != b) for a, b in zip(_ind(k, I), _ind(k, J)))
        w = tuple(2 * draw(st.integers(0, 2)) + e for e in ind)
        beta = hom_exponent(k, I, J, w)
        if beta is None:
            maps.append(BHom(k, I, J))
        else:
            maps.append(generator(k, I, J, beta).scaled(draw(st.sampled_from([1, -1, 3]))))
    return maps


@settings(max_examples=1500, deadline=None)
@given(chain())
def test_compose_matches_oracle(pair):
    f, g = pair
    got = to_monomial(compose(f, g))
    want = {}
    eI = _ind(3, f.source)
    for a, c in to_monomial(f).items():
        for b, d in to_monomial(g).items():
            m = tuple(x + y for x, y in zip(a, b))
            if not _dominates(m, eI):
                want[m] = want.get(m, 0) + c * d
    assert got == want


@settings(max_examples=1500, deadline=None)
@given(chain(length=3))
def test_compose_associative_and_unital(triple):
    f, g, h = triple
    assert compose(compose(f, g), h).coeff == compose(f, compose(g, h)).coeff
    assert compose(identity(3, f.source), f).coeff == f.coeff
    assert compose(f, identity(3, f.target)).coeff == f.coeff


@settings(max_examples=500, deadline=None)
@given(chain())
def test_composition_adds_multidegrees(pair):
    f, g = pair
    fg = compose(f, g)
    if f.is_zero() or g.is_zero() or fg.is_zero():
        return
    (m1,), (m2,), (m3,) = f.multidegrees(), g.multidegrees(), fg.multidegrees()
    assert m3 == tuple(a + b for a, b in zip(m1, m2))


def test_complexes_are_well_formed():
    for k in range(1, 5):
        for I in all_intervals(k):
            for J in all_intervals(k):
                try:
                    union(I, J)
                except ValueError:
                    continue
                assert m_module_complex(k, I, J).check() == []
        for i in range(1, k + 1):
            assert pbar_complex(i, k).check() == []
    with pytest.raises(ValueError):
        pbar_complex(0, 2)


@pytest.mark.parametrize("k", [2, 3])
def test_exactness_small(k):
    for I in all_intervals(k):
        for J in all_intervals(k):
            try:
                union(I, J)
            except ValueError:
                continue
            rep = exactness_report(m_module_complex(k, I, J), 4)
            assert rep["failures"] == [] and rep["complex_errors"] == []


def test_module_components_of_projective():
    k = 2
    comps = module_components(projective(k, iv(1, 2)), iv(1, 2), 4)
    # (P_[1,2])_[1,2] = End(P_[1,2]) = R/(x1 x2)
    assert set(comps) == monomial_quotient_support(k, [[1, 2]], 4)
    assert all(h == {0: 1} for h in comps.values())


def test_monomial_quotient_support():
    assert monomial_quotient_support(2, [[1], [2]], 4) == {(0, 0)}
    assert monomial_quotient_support(1, [[1]], 6, shift=(1,)) == {(1,)}
    # multidegree 2*gamma: 1, x_1, x_2 survive below wmax = 2
    assert monomial_quotient_support(2, [[1, 2]], 2) == {(0, 0), (2, 0), (0, 2)}


def test_k2_example():
    # End(Pbar_2) = k[x_1] and Ext(Pbar_2, P_1) = k in degree 1
    assert ext_pbar_self(2, 2, 6)["ok"]
    tab = ext_table(pbar_complex(2, 2), projective(2, iv(1)), 6)
    nonzero = {key: r for key, r in tab.items() if r}
    assert len(nonzero) == 1 and list(nonzero)[0][0] == 1 and list(nonzero.values()) == [1]
    r = ext_pbar_projective(2, 1, 6)
    assert r["ok"] and r["stated"] and r["size"] == 1


@pytest.mark.parametrize("k", [2, 3, 4])
def test_pbar_suite(k):
    for i in range(1, k + 1):
        assert ext_pbar_self(i, k, 4)["ok"]
        assert pbar_components_ok(i, k, 4)
    for i in range(1, k):
        r = ext_pbar_projective(k, i, 4)
        assert r["ok"] and r["degrees"] == [1]
        assert r["stated"] == (i == k - 1)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_m_module_suite(k):
    for j in range(2, k + 1):
        for m in range(j, k + 1):
            assert m_module_components_ok(k, j, m, 4)
            for I in all_intervals(k):
                if I.lo < j <= I.hi + 1:
                    assert ext_m_projective(k, j, m, I, 4)["ok"], (j, m, I)
    assert check_semiorthogonal(k, 4)["failures"] == []
    assert localization_kernel_check(k, 4)["failures"] == []
    for j in range(2, k + 1):
        assert restriction_sequence_ok(k, j, 4)


def test_quiver_k2():
    arrows = {(str(I), str(J), lab) for I, J, lab in quiver_arrows(2)}
    assert len(arrows) == 4
    assert len(quiver_relations(2)) == 2
    assert quiver_arrows(2, initial_only=True) == [(iv(1), iv(1, 2), "a2"), (iv(1, 2), iv(1), "b2")]
    assert initial_intervals(3) == [iv(1), iv(1, 2), iv(1, 3)]


def test_algebra_table_trivial():
    t = algebra_table(1, 0)
    assert t["objects"] == ["[1,1]"]
    assert t["homs"] == [{"src": "[1,1]", "tgt": "[1,1]", "multidegree": [0], "betas": [[0]]}]
    assert t["products"] == [["[1,1]", "[1,1]", [0], "[1,1]", [0], [0], 1]]
