import json
import random
from fractions import Fraction

import pytest

from tfgroups import linalg as la
from tfgroups.groups import (
    GroupError,
    LocalizedGroup,
    contains_group,
    direct_sum,
    equals_group,
    from_json,
    group,
    impurity_witness,
    intersect_subspace,
    is_inf_divisible,
    is_pure,
    member,
    membership_order,
    p_omega,
    pure_closure,
    random_element,
    relevant_primes,
    scale,
    sum_groups,
    to_json,
    zero_group,
)
from tfgroups.kclass import build_G_base, build_G_U, x_, z_

from fixtures import PRIME_TUPLES, Zloc, all_fixtures, family_cases, frac_vec, rand_group

x0, z0 = x_(0, 1), z_(0, 1)
G_empty = build_G_U(1, ())
G_0 = build_G_U(1, (0,))


def gens(G):
    return [(g.vector, g.primes) for g in G.generators]


# -- data model ----------------------------------------------------------------


def test_canonical_generators():
    assert gens(group(2, [((2, 0), [2])])) == [(frac_vec(1, 0), (2,))]
    assert gens(group(2, [((6, 0), [2])])) == [(frac_vec(3, 0), (2,))]
    assert gens(group(2, [((0, 0), [3])])) == []


def test_canonical_sign_and_denominators():
    (g,) = group(2, [((Fraction(-1, 4), Fraction(3, 4)), [2])]).generators
    assert g.vector == frac_vec(1, -3)
    # denominators outside P survive
    (g,) = group(1, [((Fraction(1, 3),), [2])]).generators
    assert g.vector == (Fraction(1, 3),)


def test_primes_validated():
    with pytest.raises(GroupError):
        group(1, [((1,), [4])])
    with pytest.raises(GroupError):
        group(1, [((1,), [1])])
    with pytest.raises(GroupError):
        group(2, [((1,), [2])])


def test_duplicate_generators_collapse():
    G = group(1, [((1,), [2]), ((2,), [2]), ((-4,), [2])])
    assert len(G.generators) == 1


# -- membership ---------------------------------------------------------------


def test_member_examples():
    assert member((Fraction(3, 4),), Zloc(2))
    assert not member(la.scal(Fraction(1, 3), x0), G_empty)
    assert member(la.scal(Fraction(1, 7), z0), G_0)


def test_member_zero_group():
    assert member((0, 0), zero_group(2))
    assert not member((1, 0), zero_group(2))


def test_member_dimension_mismatch():
    with pytest.raises(GroupError):
        member((1,), G_empty)


def test_member_needs_local_info_beyond_generators():
    # ⟨(1,1),(1,-1)⟩ has index 2 in ℤ² although no generator mentions 2
    G = group(2, [((1, 1), []), ((1, -1), [])])
    assert 2 in relevant_primes(G)
    assert not member((1, 0), G)
    assert member((2, 0), G)
    assert membership_order((1, 0), G) == 2
    assert membership_order((Fraction(1, 2), 0), G) == 4
    assert membership_order((Fraction(1, 3), 1), group(2, [((1, 0), [2]), ((0, 1), [])])) == 3
    assert membership_order((1, 0), group(2, [((0, 1), [])])) == 0


def test_inf_divisible_examples():
    assert is_inf_divisible(x0, G_0, 2)
    assert not is_inf_divisible(z0, G_empty, 7)
    for G in all_fixtures().values():
        for p in (2, 3, 11):
            assert is_inf_divisible(la.zeros(G.ambient_dim), G, p)


def test_relevant_primes():
    assert 2 in relevant_primes(Zloc(2))
    assert relevant_primes(zero_group(3)) == ()
    assert set(relevant_primes(G_0)) >= {2, 3, 5, 7}


# -- intersections and p^ω ------------------------------------------------------


def test_intersect_subspace_examples():
    for G in all_fixtures().values():
        d = G.ambient_dim
        assert equals_group(intersect_subspace(G, la.full_space(d)), G)
        assert intersect_subspace(G, la.zero_space(d)).is_zero()
    got = intersect_subspace(G_empty, la.subspace_span([z0], 2))
    assert equals_group(got, group(2, [(z0, [3])]))


@pytest.mark.parametrize("seed", range(40))
def test_intersect_subspace_against_membership(seed):
    rng = random.Random(seed)
    G = rand_group(rng, [2, 3, 5])
    d = G.ambient_dim
    W = la.subspace_span([[rng.randint(-2, 2) for _ in range(d)] for _ in range(rng.randint(0, d))], d)
    I = intersect_subspace(G, W)
    assert contains_group(I, G)
    for g in I.generators:
        assert g.vector in W
    # probes inside W: membership in G and in G ∩ W must agree
    for t in range(25):
        if not W.basis:
            break
        coeffs = [Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3, 4, 5, 9, 7])) for _ in W.basis]
        w = la.vecmat(coeffs, [list(b) for b in W.basis], d)
        assert member(w, G) == member(w, I)


def test_p_omega_examples():
    assert equals_group(p_omega(G_0, 7), group(2, [(z0, [3]), (z0, [7])]))
    assert equals_group(p_omega(G_empty, 5), group(2, [(la.add(x0, z0), [5])]))
    for G in all_fixtures().values():
        assert p_omega(G, 11).is_zero()
    assert equals_group(p_omega(G_0, 2), group(2, [(x0, [2])]))


@pytest.mark.parametrize("pt", PRIME_TUPLES, ids=str)
@pytest.mark.parametrize("n,U", family_cases(), ids=str)
def test_p_omega_invariants(pt, n, U):
    G = build_G_U(n, U, pt)
    for p in pt.as_list() + [23]:
        P = p_omega(G, p)
        assert contains_group(P, G)
        assert is_pure(P, G)
        for g in P.generators:
            assert is_inf_divisible(g.vector, G, p)
            assert member(la.scal(Fraction(1, p**4), g.vector), G)
        assert equals_group(p_omega(P, p), P)


def test_fact_21_on_pure_pairs():
    # p^ω H = p^ω G ∩ H whenever H is pure in G
    pairs = [(build_G_base(n), build_G_U(n, U)) for n, U in family_cases(2)]
    pairs += [(pure_closure([z0], G_0), G_0), (pure_closure([la.add(x0, z0)], G_empty), G_empty)]
    pairs += [(p_omega(G_0, 3), G_0)]
    for H, G in pairs:
        assert is_pure(H, G)
        for p in (2, 3, 5, 7):
            lhs = p_omega(H, p)
            rhs = intersect_subspace(p_omega(G, p), H.span)
            assert equals_group(lhs, rhs), (p, gens(H))


# -- containment, sums, scaling ------------------------------------------------


def test_containment_examples():
    Z, Z2 = Zloc(), Zloc(2)
    assert equals_group(G_0, G_0)
    assert contains_group(Z, Z2) and not contains_group(Z2, Z)
    assert equals_group(p_omega(G_0, 2), group(2, [(x0, [2])]))


def test_sum_and_direct_sum():
    D = direct_sum(Zloc(2), Zloc(3))
    assert gens(D) == [(frac_vec(1, 0), (2,)), (frac_vec(0, 1), (3,))]
    S = sum_groups(Zloc(2), Zloc(3))
    assert equals_group(S, Zloc(2, 3))


def test_scale():
    assert equals_group(scale(Zloc(2), 2), Zloc(2))
    assert gens(scale(Zloc(), 3)) == [(frac_vec(3), ())]
    with pytest.raises(GroupError):
        scale(Zloc(), 0)


# -- purity ----------------------------------------------------------------------


def test_purity_examples():
    assert is_pure(build_G_base(2), build_G_U(2, (1,)))
    assert not is_pure(Zloc(), Zloc(2))
    for G in all_fixtures().values():
        assert is_pure(G, G)


def test_impurity_witness():
    w = impurity_witness(Zloc(), Zloc(2))
    assert w is not None
    assert member(w.vector, Zloc(2)) and w.vector in Zloc().span
    assert not contains_group(LocalizedGroup(1, (w,)), Zloc())
    with pytest.raises(GroupError):
        impurity_witness(Zloc(2), Zloc())


def test_purity_matches_definition_on_small_cases():
    # nH = H ∩ nG for small primes n, checked on sample elements of G
    H = group(2, [((2, 0), [])])
    G = group(2, [((1, 0), []), ((0, 1), [])])
    assert not is_pure(H, G)
    assert member((2, 0), H) and not member((1, 0), H)
    H2 = group(2, [((1, 1), [3])])
    G2 = group(2, [((1, 0), [3]), ((0, 1), [3])])
    assert is_pure(H2, G2)


def test_pure_closure_examples():
    expect = group(2, [(x0, [2])])
    assert equals_group(pure_closure([x0], G_empty), expect)
    assert equals_group(pure_closure([la.scal(2, x0)], G_empty), expect)
    assert pure_closure([], G_empty).is_zero()


# -- sampling and JSON ---------------------------------------------------------


def test_random_element():
    G = build_G_U(2, (0,))
    assert la.is_zero(random_element(G, 5, exponent_bound=0, coeff_bound=0))
    for seed in range(30):
        assert member(random_element(G, seed), G)
    assert random_element(G, 17) == random_element(G, 17)


@pytest.mark.parametrize("name", list(all_fixtures()))
def test_json_round_trip(name):
    G = all_fixtures()[name]
    text = json.dumps(to_json(G), sort_keys=True)
    H = from_json(json.loads(text))
    assert equals_group(G, H)
    assert json.dumps(to_json(H), sort_keys=True) == text


@pytest.mark.parametrize(
    "data,where",
    [
        ([], "group"),
        ({"ambient_dim": -1, "generators": []}, "ambient_dim"),
        ({"ambient_dim": 1}, "generators"),
        ({"ambient_dim": 1, "generators": [{"vector": [1, 2], "primes": []}]}, "generators[0].vector"),
        ({"ambient_dim": 1, "generators": [{"vector": ["x"], "primes": []}]}, "generators[0].vector"),
        ({"ambient_dim": 1, "generators": [{"vector": [1], "primes": [2, 9]}]}, "generators[0].primes[1]"),
    ],
)
def test_json_errors_name_location(data, where):
    with pytest.raises(GroupError) as exc:
        from_json(data)
    assert str(exc.value).startswith(where)


def test_zero_group_round_trip():
    Z = zero_group(3)
    assert to_json(Z) == {"ambient_dim": 3, "generators": []}
    assert from_json(to_json(Z)).is_zero()
