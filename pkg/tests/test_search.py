from itertools import product

import pytest

from boxworld.search import (
    SearchBoundError,
    factor_label_action,
    search_reversible_group,
    verify_theorem1,
    verify_theorem2,
)
from boxworld.states import is_state
from boxworld.theory import (
    SystemSpec,
    enumerate_extremal_effects,
    gram_product,
    hamming,
    identity_coeffs,
    product_effect_coeffs,
)
from boxworld.transforms import (
    LinearMap,
    TransformGroup,
    build_hybrid_cnot,
    effect_action,
    generate_group,
    trivial_generators,
)

from conftest import CBIT, HYBRID, ONE_GBIT, THREE_BITS, TRIT_PAIR, TWO_GBITS


@pytest.mark.parametrize("sys, order", [(ONE_GBIT, 8), (CBIT, 2), (THREE_BITS, 48), (TRIT_PAIR, 72)])
def test_search_matches_generated_group(sys, order):
    S = search_reversible_group(sys)
    G = generate_group(sys, trivial_generators(sys))
    assert len(S) == order
    assert S.same_elements(G)
    assert S.provenance == "searched"


def test_two_gbit_search(two_gbit_group, two_gbit_trivial_group):
    assert len(two_gbit_group) == 128
    assert two_gbit_group.same_elements(two_gbit_trivial_group)


@pytest.mark.parametrize("sys", [ONE_GBIT, CBIT, HYBRID, THREE_BITS, TRIT_PAIR, SystemSpec.of([2, 3])])
def test_pruning_does_not_lose_elements(sys):
    assert search_reversible_group(sys, prune=False).same_elements(search_reversible_group(sys))


def test_heterogeneous_outcome_counts():
    sys = SystemSpec.of([2, 3])
    S = search_reversible_group(sys)
    assert S.stats["gram_pruning"] is False
    assert S.same_elements(generate_group(sys, trivial_generators(sys)))


def test_search_bound():
    with pytest.raises(SearchBoundError):
        search_reversible_group(TWO_GBITS, bound_effects=10)


def _actions(sys, G):
    return [effect_action(sys, T) for T in G]


def test_adjoints_permute_effects_with_unit_scale(two_gbit_group):
    labels = enumerate_extremal_effects(TWO_GBITS)
    for T in two_gbit_group:
        images = [T.apply_adjoint(product_effect_coeffs(TWO_GBITS, A)) for A in labels]
        coeffs = {product_effect_coeffs(TWO_GBITS, A) for A in labels}
        assert set(images) == coeffs
        assert T.apply_adjoint(identity_coeffs(TWO_GBITS)) == identity_coeffs(TWO_GBITS)


def test_gram_and_hamming_preserved(two_gbit_group):
    labels = enumerate_extremal_effects(TWO_GBITS)
    for act in _actions(TWO_GBITS, two_gbit_group):
        for Q, R in product(labels, repeat=2):
            assert gram_product(TWO_GBITS, act[Q], act[R]) == gram_product(TWO_GBITS, Q, R)
            assert hamming(act[Q], act[R]) == hamming(Q, R)


def test_single_site_differences_keep_their_kind(two_gbit_group):
    labels = enumerate_extremal_effects(TWO_GBITS)

    def kind(Q, R):
        (i,) = [j for j in range(len(Q)) if Q[j] != R[j]]
        return "same-measurement" if Q[i].m == R[i].m else "different-measurement"

    for act in _actions(TWO_GBITS, two_gbit_group):
        for Q, R in product(labels, repeat=2):
            if hamming(Q, R) == 1:
                assert hamming(act[Q], act[R]) == 1
                assert kind(act[Q], act[R]) == kind(Q, R)


@pytest.mark.parametrize("sys", [ONE_GBIT, TWO_GBITS, THREE_BITS, TRIT_PAIR])
def test_every_element_factors(sys, two_gbit_group):
    G = two_gbit_group if sys == TWO_GBITS else search_reversible_group(sys)
    for act in _actions(sys, G):
        fac = factor_label_action(sys, act)
        assert fac is not None and fac.is_relabelling


def test_cnot_does_not_factor():
    assert factor_label_action(HYBRID, effect_action(HYBRID, build_hybrid_cnot())) is None


def test_searched_elements_map_vertices_to_states(two_gbit_group, two_gbit_vertices):
    for T in two_gbit_group:
        for v in two_gbit_vertices.vertices:
            assert is_state(TWO_GBITS, T.apply(v)).ok


def test_verify_theorem1_reports():
    r = verify_theorem1(THREE_BITS)
    assert r["status"] == "PASS" and r["searched_order"] == r["generated_order"] == 48
    r = verify_theorem1(HYBRID, oracle=True)
    assert r["status"] == "exception-expected"
    assert r["searched_order"] > r["generated_order"] == 16
    assert r["extra_elements"] == r["searched_order"] - 16
    assert r["oracle"]["status"] == "PASS"
    r = verify_theorem1(CBIT)
    assert r["status"] == "PASS"


def test_hybrid_search_contains_cnot():
    S = search_reversible_group(HYBRID)
    assert build_hybrid_cnot() in S


def test_verify_theorem2_variants(two_gbit_vertices):
    ident = TransformGroup(TWO_GBITS, (LinearMap.identity(9),))
    assert verify_theorem2(TWO_GBITS, ident, two_gbit_vertices)["status"] == "PASS"
    gens = trivial_generators(HYBRID) + [build_hybrid_cnot()]
    G = generate_group(HYBRID, gens)
    r = verify_theorem2(HYBRID, G)
    assert r["status"] == "PASS" and r["pure_product_vertices"] == 8


def test_two_classical_bits_have_every_simplex_permutation():
    sys = SystemSpec.of([2], [2])
    r = verify_theorem1(sys)
    assert r["searched_order"] == 24 and r["generated_order"] == 8
    assert r["status"] == "exception-expected"
