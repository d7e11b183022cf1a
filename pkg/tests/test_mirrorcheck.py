import pytest
from hypothesis import given, settings, strategies as st

from strandmirror.bsidealg import iv, m_module_complex
from strandmirror.combinat import subset
from strandmirror.mirrorcheck import (
    GammaGroup,
    associativity_errors,
    crossed_degree_errors,
    crossed_dimension_identity,
    crossed_product,
    dictionary,
    gamma_grade,
    interval_table,
    parse_gamma,
    stop_chain_is_complex,
    stop_complex,
    stop_kernel_labels,
    strand_table,
    table_json,
    triple_check,
    verify_dimensions,
    verify_mirror,
    verify_stop_complexes,
)


def test_dictionary_examples():
    D = dictionary(3)
    assert D(subset(3, [2, 3])) == iv(1, 1)
    assert D(subset(3, [0, 1])) == iv(3, 3)
    assert D(subset(3, [1, 2])) == iv(1, 3)
    assert D(subset(3, [0, 3])) == iv(2, 2)
    assert len(D.subsets()) == 6
    assert D.backward[iv(2)] == subset(3, [0, 3])
    with pytest.raises(ValueError):
        dictionary(1)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_triple_overlap_matches_correction_set(k):
    assert triple_check(k) == []


def test_close_iff_overlap():
    for k in (2, 3, 4):
        D = dictionary(k)
        for S in D.subsets():
            for T in D.subsets():
                from strandmirror.combinat import is_close

                assert is_close(S, T) == bool(D(S).as_set() & D(T).as_set())


@pytest.mark.parametrize("k", [2, 3])
def test_verify_mirror_small(k):
    r = verify_mirror(k, 4)
    assert r["ok"], r["mismatches"][:3]
    assert {p["name"] for p in r["parts"]} >= {"mirror-dimensions", "mirror-structure-constants"}


def test_verify_dimensions_report_shape():
    rep = verify_dimensions(2, 2)
    j = rep.to_json()
    assert j["ok"] and j["checked"] > 0 and j["mismatches"] == []
    assert rep.summary().startswith("PASS")


def test_tables_agree_through_dictionary():
    assert table_json(strand_table(3, 4)) == table_json(interval_table(3, 4))


@pytest.mark.parametrize("k", [2, 3])
def test_stop_complexes(k):
    assert verify_stop_complexes(k, 4).ok


def test_stop_complex_example():
    # complement {0,1,2} of X = {3} in [0,3]: side 1 gives M{[2,2],[1,1]}, side 2 M{[1,1],[2,2]}
    X = subset(3, [3])
    assert stop_kernel_labels(1, X, 3) == (iv(2), iv(1))
    assert stop_kernel_labels(2, X, 3) == (iv(1), iv(2))
    assert stop_complex(1, X, 3).to_json() == m_module_complex(3, iv(2), iv(1)).to_json()
    assert stop_chain_is_complex(1, X, 2, 3) and stop_chain_is_complex(2, X, 2, 3)


# ---- Gamma


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.data())
def test_gamma_group_laws(moduli, data):
    G = GammaGroup(tuple(moduli))
    el = st.tuples(*(st.integers(0, d - 1) for d in moduli))
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert G.add(G.add(a, b), c) == G.add(a, G.add(b, c))
    assert G.add(a, b) == G.add(b, a)
    assert G.add(a, G.neg(a)) == G.zero()
    assert G.sub(G.add(a, b), b) == a
    assert len(G.elements()) == G.order


def test_parse_gamma():
    assert parse_gamma("2,2").moduli == (2, 2)
    assert parse_gamma("").order == 1
    with pytest.raises(ValueError):
        parse_gamma("0")


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2,), (3,), (2, 2), (4, 6)]), st.data())
def test_gamma_grading_is_a_cocycle(moduli, data):
    G = GammaGroup(moduli)
    k = data.draw(st.integers(2, 4))
    phi = [data.draw(st.tuples(*(st.integers(-5, 5) for _ in moduli))) for _ in range(k)]
    gr = gamma_grade(k - 1, k, G, phi)
    # gauge: every object's identity sits in degree zero
    for (S, T), g in gr.pair_degrees.items():
        if S == T:
            assert g == G.zero()


@pytest.mark.parametrize("moduli,phi", [((2,), [(1,), (1,)]), ((3,), [(1,), (2,)]), ((2, 2), [(1, 0), (0, 1)])])
def test_crossed_product_k2(moduli, phi):
    base = strand_table(2, 4)
    cp = crossed_product(2, GammaGroup(moduli), phi, 4, base)
    assert crossed_degree_errors(cp) == []
    assert crossed_dimension_identity(cp, base)
    checked, bad = associativity_errors(cp, 4)
    assert checked > 0 and bad == []


def test_trivial_gamma_is_byte_identical():
    import json

    base = strand_table(2, 4)
    cp = crossed_product(2, GammaGroup((1,)), [(0,), (0,)], 4, base)
    G = cp["group"]
    assert json.dumps(table_json(cp, G), sort_keys=True) == json.dumps(table_json(base), sort_keys=True)


def test_base_table_associative():
    checked, bad = associativity_errors(strand_table(3, 3), 3)
    assert checked > 0 and bad == []
