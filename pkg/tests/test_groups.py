import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from p2q import catalog
from p2q.groups import (
    ActionSpec,
    GroupError,
    Morphism,
    ResourceBoundError,
    center,
    cyclic,
    derived_subgroup,
    direct_product,
    from_json,
    from_table,
    is_isomorphic,
    is_normal,
    semidirect,
    sylow,
    to_json,
)

import oracles


def mult_action(K, H, unit):
    return ActionSpec.from_generators(K, H, {1: (np.arange(H.order) * unit) % H.order})


def dihedral(n):
    H, K = cyclic(n), cyclic(2)
    return semidirect(H, K, mult_action(K, H, n - 1))


def a4_built():
    from p2q.gl2p import row_action_images, singer_element

    H, K = direct_product(cyclic(2), cyclic(2)), cyclic(3)
    return semidirect(H, K, ActionSpec.from_generators(K, H, {1: row_action_images(singer_element(2, 3))}))


# frozen by oracles.order_census
C9_CENSUS = {1: 1, 3: 2, 9: 6}
C3XC3_CENSUS = {1: 1, 3: 8}
A4_CENSUS = {1: 1, 2: 3, 3: 8}


class TestCyclic:
    def test_trivial_group(self):
        G = cyclic(1)
        assert G.order == 1 and G.identity == 0
        assert G.generators.size == 0

    def test_zero_rejected(self):
        with pytest.raises(GroupError):
            cyclic(0)

    def test_sixth_powers_are_identity(self):
        G = cyclic(6)
        assert G.is_abelian()
        assert all(G.power(x, 6) == G.identity for x in range(6))

    def test_nine_has_six_generators(self):
        G = cyclic(9)
        assert oracles.order_census(oracles.as_lists(G)) == C9_CENSUS
        assert G.order_profile() == C9_CENSUS


class TestDirectProduct:
    def test_c2_c3_is_c6(self):
        ok, witness = is_isomorphic(direct_product(cyclic(2), cyclic(3)), cyclic(6))
        assert ok and witness.is_bijective

    def test_c3_c3_census(self):
        G = direct_product(cyclic(3), cyclic(3))
        assert oracles.order_census(oracles.as_lists(G)) == C3XC3_CENSUS
        assert G.order_profile() == C3XC3_CENSUS

    def test_center_is_product_of_centers(self, s3):
        G = direct_product(s3, cyclic(5))
        expected = {h * 5 + k for h in center(s3) for k in range(5)}
        assert center(G) == expected == oracles.center(oracles.as_lists(G))
        assert len(expected) == 5

    def test_h_major_indexing(self):
        H, K = cyclic(4), cyclic(3)
        G = direct_product(H, K)
        for h in range(4):
            for k in range(3):
                assert G.pair(h, k) == h * 3 + k
                assert tuple(G.split(h * 3 + k)) == (h, k)


class TestSemidirect:
    def test_trivial_action_gives_direct_product(self):
        H, K = cyclic(5), cyclic(4)
        G = semidirect(H, K, ActionSpec.trivial(K, H))
        assert is_isomorphic(G, direct_product(H, K))[0]
        assert np.array_equal(G.table, direct_product(H, K).table)

    def test_dihedral_18(self):
        G = dihedral(9)
        T = oracles.as_lists(G)
        assert G.order == 18 and not G.is_abelian()
        assert center(G) == oracles.center(T) == {G.identity}

    def test_singer_action_gives_a4(self, a4):
        G = a4_built()
        assert G.order_profile() == A4_CENSUS
        assert len(derived_subgroup(G)) == 4
        assert oracles.isomorphic(oracles.as_lists(G), oracles.as_lists(a4))

    def test_product_convention(self):
        # (h1, k1)(h2, k2) = (h1 * phi_k1(h2), k1 k2), and k h k^-1 = phi_k(h)
        H, K = cyclic(7), cyclic(3)
        G = semidirect(H, K, mult_action(K, H, 2))
        for h1, k1, h2, k2 in [(1, 1, 3, 2), (4, 2, 5, 1), (6, 0, 2, 2)]:
            assert G.mul(G.pair(h1, k1), G.pair(h2, k2)) == G.pair((h1 + pow(2, k1) * h2) % 7, (k1 + k2) % 3)
        k, h = G.pair(0, 1), G.pair(1, 0)
        assert G.mul(G.mul(k, h), G.inverse(k)) == G.pair(2, 0)

    def test_action_must_be_homomorphism(self):
        H, K = cyclic(5), cyclic(3)
        with pytest.raises(GroupError):
            mult_action(K, H, 2)  # 2 has order 4 mod 5, not dividing 3

    def test_action_images_must_be_automorphisms(self):
        H, K = cyclic(6), cyclic(2)
        bad = np.array([np.arange(6), (np.arange(6) * 2) % 6])
        with pytest.raises(GroupError):
            ActionSpec(K, H, bad)

    def test_action_must_match_factors(self):
        H, K = cyclic(5), cyclic(4)
        act = mult_action(K, H, 2)
        with pytest.raises(GroupError):
            semidirect(cyclic(5), K, act)


class TestValidation:
    def test_non_latin(self):
        with pytest.raises(GroupError):
            from_table([[0, 1], [1, 1]])

    def test_non_associative_loop(self):
        loop = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ]
        assert oracles.is_latin(loop) and not oracles.is_associative(loop)
        with pytest.raises(GroupError, match="associativity"):
            from_table(loop)

    def test_missing_identity(self):
        # x*y = -x-y mod 3: a Latin square without an identity
        with pytest.raises(GroupError, match="identity"):
            from_table([[0, 2, 1], [2, 1, 0], [1, 0, 2]])

    def test_out_of_range(self):
        with pytest.raises(GroupError):
            from_table([[0, 2], [1, 0]])

    def test_oversize_table_is_a_resource_error(self):
        with pytest.raises(ResourceBoundError):
            cyclic(9000).table

    def test_sampled_check_above_threshold(self):
        G = from_table(cyclic(600).table)
        assert G.order == 600
        H = from_table(cyclic(520).table, full_check=True)
        assert H.order == 520

    def test_json_round_trip(self, s3):
        data = to_json(s3)
        G = from_json(data)
        assert np.array_equal(G.table, s3.table) and G.identity == s3.identity
        with pytest.raises(GroupError):
            from_json({"order": 7, "table": data["table"]})


class TestStructure:
    def test_center_of_abelian_is_everything(self):
        G = direct_product(cyclic(4), cyclic(6))
        assert center(G) == set(range(24))

    def test_derived_of_abelian_is_trivial(self):
        G = direct_product(cyclic(4), cyclic(6))
        assert derived_subgroup(G) == {G.identity}

    def test_derived_of_dihedral_18_is_c9(self):
        G = dihedral(9)
        assert derived_subgroup(G) == {G.pair(h, 0) for h in range(9)}
        assert derived_subgroup(G) == oracles.derived_subgroup(oracles.as_lists(G))

    def test_derived_of_type_9_is_sylow_p(self):
        G = catalog.build(catalog.GroupSpec(9, 7, 3))
        assert derived_subgroup(G) == {G.pair(h, 0) for h in range(49)}

    def test_sylow_of_cyclic_12(self):
        G = cyclic(12)
        assert sylow(G, 2) == {0, 3, 6, 9}

    def test_sylow_2_of_a4_is_normal(self, a4):
        P = sylow(a4, 2)
        assert len(P) == 4 and is_normal(a4, P)
        assert oracles.is_normal(oracles.as_lists(a4), P)

    def test_sylow_3_of_type_4(self):
        G = catalog.build(catalog.GroupSpec(4, 3, 2))
        P = sylow(G, 3)
        assert P == {G.pair(h, 0) for h in range(9)} and is_normal(G, P)

    def test_sylow_rejects_non_divisor(self):
        with pytest.raises(GroupError):
            sylow(cyclic(12), 5)

    def test_sylow_is_deterministic(self):
        G = catalog.build(catalog.GroupSpec(10, 2, 3))
        assert sylow(G, 2) == sylow(G, 2)


class TestIsomorphism:
    def test_c6_vs_s3(self, s3):
        assert is_isomorphic(cyclic(6), s3) == (False, None)

    def test_type_8_parameter_inverse(self):
        G2 = catalog.build(catalog.GroupSpec(8, 11, 5, 2))
        G3 = catalog.build(catalog.GroupSpec(8, 11, 5, 3))
        ok, witness = is_isomorphic(G2, G3)
        assert ok and witness.is_bijective and witness.check_all_pairs()

    def test_agrees_with_naive_search(self, s3, a4):
        corpus = [cyclic(12), direct_product(cyclic(2), cyclic(6)), a4, a4_built(), dihedral(6),
                  direct_product(s3, cyclic(2)), catalog.build(catalog.GroupSpec(2, 2, 3))]
        tables = [oracles.as_lists(G) for G in corpus]
        for i, G1 in enumerate(corpus):
            for j, G2 in enumerate(corpus):
                assert is_isomorphic(G1, G2)[0] == oracles.isomorphic(tables[i], tables[j])


def _corpus():
    out = [cyclic(1), cyclic(30), dihedral(15), a4_built(), direct_product(cyclic(3), a4_built())]
    for p, q in [(2, 3), (3, 2), (2, 5), (5, 3), (7, 3)]:
        out.extend(catalog.build(s) for s in catalog.enumerate_specs(p, q))
    return out


def test_isomorphism_reflexive_symmetric_with_valid_witnesses():
    corpus = _corpus()
    for i, G1 in enumerate(corpus):
        ok, w = is_isomorphic(G1, G1)
        assert ok and w.is_bijective
        for G2 in corpus[i + 1 :]:
            a, w12 = is_isomorphic(G1, G2)
            b, w21 = is_isomorphic(G2, G1)
            assert a == b
            if a:
                assert w12.check_all_pairs() and w21.check_all_pairs()


def test_dichotomy_for_every_built_group():
    from p2q.numtheory import p2q_factor

    for G in _corpus():
        pq = p2q_factor(G.order)
        if pq is None:
            continue
        p, q = pq
        assert is_normal(G, sylow(G, p)) or is_normal(G, sylow(G, q))


class TestMorphism:
    def test_identity_and_inverse(self):
        G = cyclic(10)
        f = Morphism(G, G, (np.arange(10) * 3) % 10)
        assert f.is_automorphism
        assert f.then(f.inverse()) == Morphism.identity(G)

    def test_then_applies_left_first(self):
        G = cyclic(10)
        f = Morphism(G, G, (np.arange(10) * 3) % 10)
        g = Morphism(G, G, (np.arange(10) * 7) % 10)
        assert f.then(g)(1) == g(f(1)) == 1

    def test_non_homomorphism_rejected(self, s3):
        with pytest.raises(GroupError):
            Morphism(cyclic(4), cyclic(4), [0, 2, 1, 3])

    def test_quotient_map_is_not_bijective(self):
        f = Morphism(cyclic(6), cyclic(3), np.arange(6) % 3)
        assert not f.is_bijective and f.check_all_pairs()


# property tests over random constructions -------------------------------------


@st.composite
def small_groups(draw):
    kind = draw(st.sampled_from(["cyclic", "direct", "semidirect"]))
    if kind == "cyclic":
        return cyclic(draw(st.integers(1, 30)))
    if kind == "direct":
        return direct_product(cyclic(draw(st.integers(1, 6))), cyclic(draw(st.integers(1, 6))))
    n, m = draw(st.integers(2, 13)), draw(st.integers(1, 6))
    choices = [u for u in oracles.units(n) if pow(u, m, n) == 1]
    u = draw(st.sampled_from(choices))
    H, K = cyclic(n), cyclic(m)
    return semidirect(H, K, mult_action(K, H, u))


@given(small_groups())
def test_constructions_are_groups(G):
    T = oracles.as_lists(G)
    assert oracles.is_latin(T) and oracles.is_associative(T)
    assert oracles.element_orders(T) == G.orders.tolist()
    from_table(G.table, full_check=True)


@given(small_groups())
def test_center_and_derived_are_subgroups(G):
    T = oracles.as_lists(G)
    Z, D = center(G), derived_subgroup(G)
    assert Z == oracles.center(T)
    assert D == oracles.derived_subgroup(T)
    for S in (Z, D):
        assert oracles.closure(T, sorted(S)) == set(S)


@given(small_groups(), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_sylow_has_full_prime_power(G, r):
    if G.order % r:
        return
    part = 1
    n = G.order
    while n % r == 0:
        part *= r
        n //= r
    P = sylow(G, r)
    T = oracles.as_lists(G)
    assert len(P) == part and oracles.closure(T, sorted(P)) == set(P)


@given(small_groups())
def test_generators_generate(G):
    T = oracles.as_lists(G)
    assert oracles.closure(T, G.generators.tolist()) == set(range(G.order))
    assert len(G.generators) <= max(1, int(np.log2(G.order)) + 1)
