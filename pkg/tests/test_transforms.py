from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxworld.exact import RMatrix, RVector, tensor_map
from boxworld.states import evaluate, local_pure_state, product_state, uniform_state
from boxworld.theory import (
    LocalEffectLabel as L,
    SiteSpec,
    SystemSpec,
    enumerate_extremal_effects,
    identity_coeffs,
    product_effect_coeffs,
)
from boxworld.transforms import (
    HYBRID,
    LinearMap,
    NotAllowedError,
    adjoint,
    build_hybrid_cnot,
    effect_action,
    generate_group,
    generator_relabel_measurements,
    generator_relabel_outcomes,
    generator_site_permutation,
    group_membership,
    is_allowed,
    is_reversible_allowed,
    map_from_effect_permutation,
    trivial_generators,
    trivial_group_order,
)

from conftest import ONE_GBIT, THREE_BITS, TRIT_PAIR, TWO_GBITS

X, NX, Z, NZ = L(0, 0), L(0, 1), L(1, 0), L(1, 1)

small_q = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def test_adjoint_identity():
    I = LinearMap.identity(3)
    assert adjoint(I) == I


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(small_q, min_size=3, max_size=3), min_size=3, max_size=3))
def test_adjoint_involution_and_pairing(rows):
    T = LinearMap(RMatrix(rows))
    assert adjoint(adjoint(T)) == T
    for i in range(3):
        for j in range(3):
            A, s = RVector.unit(3, i), RVector.unit(3, j)
            assert evaluate(T.apply_adjoint(A), s) == evaluate(A, T.apply(s))


def test_is_allowed_examples():
    assert is_allowed(ONE_GBIT, LinearMap.identity(3)).ok
    flip = generator_relabel_outcomes(ONE_GBIT, 0, 0, (1, 0))
    assert is_allowed(ONE_GBIT, flip).ok
    # adjoint X -> 2X with not-X and Z fixed, so 1 = X + not-X -> 1 + X
    scale = LinearMap(RMatrix.from_columns([[2, 0, 0], [0, 1, 0], [1, 0, 1]]).T)
    chk = is_allowed(ONE_GBIT, scale)
    assert not chk.ok and chk.witness == "identity"
    # scaling the X basis slot alone keeps 1 fixed but sends not-X out of the cone
    chk = is_allowed(ONE_GBIT, LinearMap(RMatrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]])))
    assert not chk.ok and chk.witness == (NX,)
    # identity fixed, but X -> 1 - X - Z leaves the cone
    bad = LinearMap(RMatrix.from_columns([[-1, -1, 1], [0, 1, 0], [0, 0, 1]]).T)
    assert bad.apply_adjoint(identity_coeffs(ONE_GBIT)) == identity_coeffs(ONE_GBIT)
    chk = is_allowed(ONE_GBIT, bad)
    assert not chk.ok and chk.witness == (X,)


def test_reversibility_examples():
    swap = generator_site_permutation(TWO_GBITS, (1, 0))
    assert is_reversible_allowed(TWO_GBITS, swap)
    # collapse everything onto a fixed state: T s = <1, s> s0
    s0 = product_state(local_pure_state(SiteSpec((2, 2)), [0, 0]))
    collapse = LinearMap(RMatrix([[s0[i] * (j == 2) for j in range(3)] for i in range(3)]))
    assert is_allowed(ONE_GBIT, collapse).ok
    assert not is_reversible_allowed(ONE_GBIT, collapse)
    assert is_reversible_allowed(HYBRID, build_hybrid_cnot())


def test_measurement_swap_action():
    T = generator_relabel_measurements(ONE_GBIT, 0, (1, 0))
    act = effect_action(ONE_GBIT, T)
    assert act == {(X,): (Z,), (Z,): (X,), (NX,): (NZ,), (NZ,): (NX,)}


def test_outcome_flip_action():
    T = generator_relabel_outcomes(ONE_GBIT, 0, 0, (1, 0))
    act = effect_action(ONE_GBIT, T)
    assert act == {(X,): (NX,), (NX,): (X,), (Z,): (Z,), (NZ,): (NZ,)}


def test_site_swap_action():
    T = generator_site_permutation(TWO_GBITS, (1, 0))
    act = effect_action(TWO_GBITS, T)
    assert all(act[(a, b)] == (b, a) for a, b in enumerate_extremal_effects(TWO_GBITS))


def test_generator_type_checks():
    with pytest.raises(ValueError):
        generator_site_permutation(HYBRID, (1, 0))
    with pytest.raises(ValueError):
        generator_relabel_measurements(SystemSpec.of([2, 3]), 0, (1, 0))
    with pytest.raises(ValueError):
        generator_relabel_outcomes(ONE_GBIT, 0, 0, (0, 0))


def test_nonlinear_assignment_rejected():
    labels = enumerate_extremal_effects(ONE_GBIT)
    images = dict(zip(labels, labels))
    images[(NX,)], images[(Z,)] = (Z,), (NX,)  # swaps a dependent and an independent effect
    with pytest.raises(NotAllowedError):
        map_from_effect_permutation(ONE_GBIT, images)


@pytest.mark.parametrize(
    "sys, order",
    [
        (ONE_GBIT, 2 * 2**2),
        (TWO_GBITS, 2 * 8**2),
        (THREE_BITS, factorial(3) * 2**3),
        (TRIT_PAIR, 2 * factorial(3) ** 2),
        (HYBRID, 8 * 2),
        (SystemSpec.of([2, 3]), 2 * 6),
        (SystemSpec.of([2], [2]), 2 * 2 * 2),
    ],
)
def test_generated_group_orders(sys, order):
    G = generate_group(sys, trivial_generators(sys))
    assert len(G) == order == trivial_group_order(sys)


def test_group_axioms(two_gbit_trivial_group):
    G = two_gbit_trivial_group
    I = LinearMap.identity(9)
    assert I in G
    elems = list(G)
    for g in elems[::7]:
        assert g.inverse() in G
        for h in elems[::11]:
            assert g @ h in G


def test_group_membership():
    G = generate_group(HYBRID, trivial_generators(HYBRID))
    assert group_membership(LinearMap.identity(HYBRID.dim), G)
    assert not group_membership(build_hybrid_cnot(), G)
    swap = generator_site_permutation(TWO_GBITS, (1, 0))
    assert group_membership(swap, generate_group(TWO_GBITS, trivial_generators(TWO_GBITS)))


def test_generate_rejects_non_allowed():
    with pytest.raises(NotAllowedError):
        generate_group(ONE_GBIT, [LinearMap(RMatrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))])


def test_cnot_action_and_involution():
    T = build_hybrid_cnot()
    act = effect_action(HYBRID, T)
    Y, NY = L(0, 0), L(0, 1)
    for A in (X, NX, Z, NZ):
        assert act[(A, Y)] == (A, Y)
        assert act[(A, NY)] == (L(A.m, 1 - A.k), NY)
    assert T @ T == LinearMap.identity(HYBRID.dim)
    with pytest.raises(ValueError):
        build_hybrid_cnot(TWO_GBITS)


def test_cnot_correlates_product_input():
    gb = local_pure_state(SiteSpec((2, 2)), [0, 1])
    cb = uniform_state(SystemSpec.of([2]))
    s = product_state(gb, cb)
    out = build_hybrid_cnot().apply(s)
    vals = [
        evaluate(product_effect_coeffs(HYBRID, (L(0, a), L(0, y))), out)
        for a in (0, 1)
        for y in (0, 1)
    ]
    assert vals == [F(1, 2), 0, 0, F(1, 2)]
    # the same numbers through the pairing identity on the input side
    T = build_hybrid_cnot()
    vals2 = [
        evaluate(T.apply_adjoint(product_effect_coeffs(HYBRID, (L(0, a), L(0, y)))), s)
        for a in (0, 1)
        for y in (0, 1)
    ]
    assert vals2 == vals


def test_generators_are_allowed_with_an_ancilla():
    # a gbit relabelling tensored with the identity on a second gbit stays allowed
    for g in trivial_generators(ONE_GBIT):
        ext = LinearMap(tensor_map(g.matrix, RMatrix.identity(3)))
        assert is_reversible_allowed(TWO_GBITS, ext)
