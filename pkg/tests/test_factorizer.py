import itertools
import random

import pytest

from plab.ball_graph import ProductShape, conormal_adjacent, extreme_vertices
from plab.errors import (
    ConstructionError,
    FactorizationError,
    PreconditionError,
    SizeCapError,
    TotalityError,
)
from plab.factorizer import (
    Factorization,
    Homomorphism,
    build_from_factors,
    check_bijective_factors,
    check_E_square_homomorphism,
    check_interior_lemma,
    check_sphere_implies_extreme,
    compatible_sigmas,
    enumerate_injective_homomorphisms,
    factor,
    random_homomorphism,
    verify_homomorphism,
)

MINIMAL = ProductShape.of((1, 1), (1, 1))


def _is_hom_brute(shape, mapping):
    vs = shape.vertex_list
    if len(set(mapping.values())) != len(vs):
        return False
    return all(
        conormal_adjacent(shape, mapping[u], mapping[v])
        for u, v in itertools.combinations(vs, 2)
        if conormal_adjacent(shape, u, v)
    )


# ----------------------------------------------------------- verify

def test_identity_is_hom():
    assert verify_homomorphism(MINIMAL, Homomorphism.identity(MINIMAL))


def test_constant_map_fails():
    m = {u: (0, 0) for u in MINIMAL.vertex_list}
    res = verify_homomorphism(MINIMAL, m)
    assert not res and "injective" in res.detail


def test_interior_swap_matches_brute_check():
    s = ProductShape.of((1, 2), (1, 1))
    m = {u: u for u in s.vertex_list}
    m[(2, 2)], m[(3, 2)] = (3, 2), (2, 2)
    assert bool(verify_homomorphism(s, m)) == _is_hom_brute(s, m)


def test_partial_map_rejected():
    with pytest.raises(TotalityError):
        Homomorphism.from_mapping(MINIMAL, {(0, 0): (0, 0)})


def test_text_round_trip():
    rng = random.Random(5)
    _, hom = random_homomorphism(MINIMAL, rng)
    text = hom.to_text()
    assert text.startswith("shape ")
    assert Homomorphism.from_text(text) == hom


# -------------------------------------------------------- enumeration

def test_single_pair_has_two_homs():
    homs = list(enumerate_injective_homomorphisms(ProductShape.of((1, 0))))
    assert len(homs) == 2


def test_pair_plus_isolated_matches_brute_force():
    s = ProductShape.of((1, 1))
    vs = s.vertex_list
    brute = sum(_is_hom_brute(s, dict(zip(vs, p))) for p in itertools.permutations(vs))
    homs = list(enumerate_injective_homomorphisms(s))
    assert len(homs) == brute
    assert all(verify_homomorphism(s, h) for h in homs)


def test_minimal_shape_matches_brute_force():
    vs = MINIMAL.vertex_list
    brute = sum(_is_hom_brute(MINIMAL, dict(zip(vs, p))) for p in itertools.permutations(vs))
    assert len(list(enumerate_injective_homomorphisms(MINIMAL))) == brute


def test_enumeration_cap():
    with pytest.raises(SizeCapError):
        list(enumerate_injective_homomorphisms(ProductShape.of((1, 1), (2, 1))))


# ------------------------------------------------------------ factor

def test_factor_identity():
    fact = factor(MINIMAL, Homomorphism.identity(MINIMAL))
    assert fact == Factorization.identity(MINIMAL)


def test_factor_coordinate_swap():
    m = {u: (u[1], u[0]) for u in MINIMAL.vertex_list}
    fact = factor(MINIMAL, m)
    assert fact.sigma == (1, 0)
    assert fact.local_maps == ((0, 1), (0, 1))


def test_factor_needs_pairs():
    s = ProductShape.of((1, 1), (0, 2))
    with pytest.raises(PreconditionError):
        factor(s, Homomorphism.identity(s))


def test_factor_rejects_non_hom():
    m = {u: u for u in MINIMAL.vertex_list}
    m[(0, 0)], m[(2, 2)] = (2, 2), (0, 0)
    with pytest.raises(PreconditionError):
        factor(MINIMAL, m)


@pytest.mark.parametrize("comps", [((1, 1), (1, 1)), ((2, 0), (1, 1)), ((1, 1), (2, 1), (1, 0))])
def test_round_trip(comps):
    shape = ProductShape.of(*comps)
    rng = random.Random(11)
    for _ in range(30):
        fact, hom = random_homomorphism(shape, rng)
        assert factor(shape, hom).to_json() == fact.to_json()


def test_sigma_is_unique():
    for hom in enumerate_injective_homomorphisms(MINIMAL):
        assert len(compatible_sigmas(MINIMAL, hom)) == 1


def test_factorization_json():
    f = Factorization((1, 0), ((1, 0), (0, 1)))
    assert f.to_json() == '{"locals":[[1,0],[0,1]],"sigma":[1,0]}'
    assert Factorization.from_json(f.to_json()) == f


# ------------------------------------------------- bare-edge components

def _factorable_brute(shape, hom):
    """Search every sigma and every odd bijection g_i for one satisfying the identity on E."""
    n = shape.n
    for sigma in itertools.permutations(range(n)):
        options = []
        for i, c in enumerate(shape.components):
            tgt = shape.components[sigma[i]]
            if tgt.pairs != c.pairs:
                break
            options.append([g for g in itertools.permutations(tgt.sphere)
                            if all(g[s ^ 1] == g[s] ^ 1 for s in c.sphere)])
        else:
            for gs in itertools.product(*options):
                if all(all(hom(x)[sigma[i]] == gs[i][x[i]] for i in range(n))
                       for x in extreme_vertices(shape)):
                    return True
    return False


def test_bare_edge_components_admit_non_factoring_homs():
    # two components that are single edges: B_* is K4 and every permutation is a hom
    shape = ProductShape.of((1, 0), (1, 0))
    homs = list(enumerate_injective_homomorphisms(shape))
    bad = [h for h in homs if not _factorable_brute(shape, h)]
    assert bad
    for h in bad:
        with pytest.raises(FactorizationError):
            factor(shape, h)
    good = [h for h in homs if _factorable_brute(shape, h)]
    for h in good:
        factor(shape, h)


def test_three_vertex_components_always_factor():
    for comps in [((1, 1), (1, 1)), ((1, 1), (1, 2))]:
        shape = ProductShape.of(*comps)
        for h in enumerate_injective_homomorphisms(shape):
            assert _factorable_brute(shape, h)
            factor(shape, h)


# ------------------------------------------------------------- build

def test_build_identity():
    shape = MINIMAL
    interior = {u: u for u in shape.vertex_list}
    hom = build_from_factors(shape, Factorization.identity(shape), interior)
    assert hom == Homomorphism.identity(shape)


def test_build_pair_swap():
    shape = ProductShape.of((2, 1), (1, 1))
    fact = Factorization((0, 1), ((2, 3, 0, 1), (0, 1)))
    hom = build_from_factors(shape, fact)
    assert verify_homomorphism(shape, hom)
    assert hom((0, 2)) == (2, 2)


def test_build_random_families():
    rng = random.Random(2)
    for comps in [((1, 0),), ((2, 1), (1, 1)), ((1, 1), (1, 1), (2, 0))]:
        shape = ProductShape.of(*comps)
        for _ in range(10):
            fact, hom = random_homomorphism(shape, rng)
            assert verify_homomorphism(shape, hom)


def test_build_rejects_invalid_factors():
    shape = ProductShape.of((1, 0), (2, 0))
    # g_0 into a proper subset of the larger sphere forces g_1 to be non-injective
    fact = Factorization((1, 0), ((0, 1), (0, 1, 0, 1)))
    with pytest.raises(ConstructionError):
        build_from_factors(shape, fact)


def test_build_rejects_non_injective_interior():
    shape = MINIMAL
    interior = {u: (2, 2) for u in shape.vertex_list}
    with pytest.raises(ConstructionError):
        build_from_factors(shape, Factorization.identity(shape), interior)


# ------------------------------------------------------------ lemmas

def test_lemma_checks_on_identity():
    hom = Homomorphism.identity(MINIMAL)
    fact = factor(MINIMAL, hom)
    assert check_E_square_homomorphism(MINIMAL, hom)
    assert check_interior_lemma(MINIMAL, hom, fact)
    assert check_bijective_factors(MINIMAL, hom, fact)
    assert check_sphere_implies_extreme(MINIMAL, hom)


def test_lemmas_on_adversarial_interiors():
    shape = ProductShape.of((1, 2), (1, 1))
    rng = random.Random(8)
    for _ in range(20):
        fact, hom = random_homomorphism(shape, rng)
        assert check_E_square_homomorphism(shape, hom)
        assert check_interior_lemma(shape, hom, fact)
        r = check_bijective_factors(shape, hom, fact)
        assert r and r.hypothesis_held
        r = check_sphere_implies_extreme(shape, hom)
        assert r and r.hypothesis_held


def test_interior_single_component_reduces_to_e():
    shape = ProductShape.of((2, 0))
    for hom in enumerate_injective_homomorphisms(shape):
        assert check_interior_lemma(shape, hom, factor(shape, hom))


def test_vacuous_hypothesis_reported():
    # injective but not a hom: sphere vertex (0, 0) is sent into the interior
    m = {u: u for u in MINIMAL.vertex_list}
    m[(0, 0)], m[(2, 2)] = (2, 2), (0, 0)
    r = check_sphere_implies_extreme(MINIMAL, m)
    assert r.passed and not r.hypothesis_held and r.detail == "hypothesis not met"
    r = check_bijective_factors(MINIMAL, m, Factorization.identity(MINIMAL))
    assert r.passed and not r.hypothesis_held
