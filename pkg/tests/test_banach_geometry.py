import math

import numpy as np
import pytest

from plab import banach_geometry as bg
from plab.ball_graph import ProductShape
from plab.errors import DomainError, HypothesisError, PreconditionError, SamplingError
from plab.factorizer import Homomorphism, factor

SPACE = bg.SumSpace.of((2, 2.0), (2, 3.0))


def test_is_extreme_examples():
    assert bg.is_extreme(SPACE, [1, 0, 0, -1])
    assert not bg.is_extreme(SPACE, [1, 0, 0, 0])
    assert not bg.is_extreme(SPACE, [1, 0, 0.999, 0], tol=1e-6)
    with pytest.raises(DomainError):
        bg.is_extreme(SPACE, [2, 0, 0, 0])


def test_ball_graph_one_dimensional():
    space = bg.SumSpace.of((1, 2.0))
    g = bg.ball_to_graph(space, np.array([[-1.0], [0.0], [1.0]]))
    assert {tuple(sorted(e)) for e in g.conormal} == {(0, 2)}


def test_ball_graph_antipodal_and_cartesian():
    space = bg.SumSpace.of((2, 2.0), (1, 2.0))
    z = np.array([0.6, 0.8, 1.0])
    w = np.array([-0.6, -0.8, 1.0])
    g = bg.ball_to_graph(space, np.array([z, -z, w]))
    con = {tuple(sorted(e)) for e in g.conormal}
    cart = {tuple(sorted(e)) for e in g.cartesian}
    assert (0, 1) in con
    assert (0, 2) in cart and (0, 1) not in cart


def test_sampling_stays_in_ball():
    rng = np.random.default_rng(0)
    z = bg.sample_ball(SPACE, 500, rng)
    assert (SPACE.norm(z) <= 1 + 1e-12).all()
    s = bg.sample_sum_sphere(SPACE, 500, rng)
    assert np.allclose(SPACE.norm(s), 1.0)


def test_extension_of_zero_and_identity():
    rng = np.random.default_rng(1)
    ext = bg.HomogeneousExtension(bg.identity_family(SPACE))
    assert np.all(ext(np.zeros(4)) == 0)
    z = bg.sample_ball(SPACE, 50, rng)
    assert np.allclose(ext(z), z)


def test_extension_rotation():
    space = bg.SumSpace.of((2, 2.0))
    th = 0.7
    R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    fam = bg.SphereMapFamily(space, (0,), (bg.SphereMap.linear(R),))
    z = np.array([0.3, 0.4])
    out = bg.HomogeneousExtension(fam)(z)
    r = np.linalg.norm(z)
    assert np.allclose(out, r * (R @ (z / r)))
    assert np.isclose(np.linalg.norm(out), 0.5)


def test_gamma_phi_inverse_and_block_norms():
    rng = np.random.default_rng(2)
    space = bg.SumSpace.of((3, 1.5), (3, 1.5), (2, 2.0))
    gamma = bg.HomogeneousExtension(bg.random_family(space, rng))
    z = bg.sample_ball(space, 1000, rng)
    assert space.norm(gamma.inverse()(gamma(z)) - z).max() <= 1e-9
    sig = list(gamma.family.sigma)
    assert np.abs(space.block_norms(gamma(z))[:, sig] - space.block_norms(z)).max() <= 1e-12


def test_homogeneity_self_and_perturbed():
    rng = np.random.default_rng(3)
    ext = bg.HomogeneousExtension(bg.random_family(SPACE, rng))
    for k in range(SPACE.n + 1):
        assert bg.check_homogeneity(SPACE, ext, ext, k, 200, 1e-9, rng)

    def bumped(z):
        out = ext(z).copy()
        interior = SPACE.block_norms(z).max(axis=-1) < 0.9
        out[interior] *= 0.99
        return out

    res = bg.check_homogeneity(SPACE, bumped, ext, SPACE.n, 200, 1e-9, rng)
    assert not res.passed and res.witness is not None
    with pytest.raises(SamplingError):
        bg.check_homogeneity(SPACE, ext, ext, SPACE.n + 1, 10, 1e-9, rng)


def test_tangent_collinear_l2():
    est = bg.two_ball_intersection_diameter(bg.LpComponent(2, 2.0), [1, 0], 0.5, [-1, 0], 1.5)
    assert np.allclose(est.point, [0.5, 0])
    assert est.diameter <= 1e-6


def test_tangent_linf_control():
    est = bg.two_ball_intersection_diameter(bg.LpComponent(2, math.inf), [1, 0], 1, [-1, 0], 1)
    assert est.diameter == pytest.approx(2.0)


def test_tangent_random_l3():
    rng = np.random.default_rng(4)
    comp = bg.LpComponent(2, 3.0)
    for _ in range(10):
        est = bg.two_ball_intersection_diameter(comp, *bg.random_tangent_configuration(comp, rng), rng=rng)
        assert est.diameter <= 1e-6


def test_tangent_requires_tangency():
    with pytest.raises(PreconditionError):
        bg.two_ball_intersection_diameter(bg.LpComponent(2, 2.0), [0, 0], 1, [3, 0], 1)


def test_certify_examples():
    rng = np.random.default_rng(5)
    gamma = bg.HomogeneousExtension(bg.random_family(SPACE, rng))
    cert = bg.certify_isometry(SPACE, gamma, inverse=gamma.inverse(), rng=rng)
    assert cert.passed and cert.max_defect <= 1e-9
    cert = bg.certify_isometry(SPACE, lambda z: np.asarray(z) / 2, inverse=lambda z: 2 * np.asarray(z), rng=rng)
    assert not cert.hypotheses["sphere_onto_sphere"]
    cert = bg.certify_isometry(SPACE, lambda z: np.asarray(z), rng=rng)
    assert cert.passed and cert.max_defect == 0.0


def test_graph_hom_identity():
    grid = bg.signed_basis_grid(SPACE)
    hom = bg.nonexpansive_to_graph_hom(SPACE, lambda z: z, grid)
    assert hom == Homomorphism.identity(grid.shape)


def test_graph_hom_matches_factor_route():
    rng = np.random.default_rng(6)
    space = bg.SumSpace.of((2, 3.0), (2, 3.0))
    grid = bg.signed_basis_grid(space)
    fam = bg.random_family(space, rng, orthogonal=False)
    hom = bg.nonexpansive_to_graph_hom(space, bg.HomogeneousExtension(fam), grid)
    fact, direct = bg.family_on_grid(grid, fam)
    assert hom == direct
    assert factor(grid.shape, hom) == fact


def test_graph_hom_contraction_rejected():
    grid = bg.signed_basis_grid(SPACE)
    with pytest.raises(HypothesisError):
        bg.nonexpansive_to_graph_hom(SPACE, lambda z: 0.5 * z, grid)


def test_bridge_check_grids():
    assert bg.bridge_check(bg.signed_basis_grid(SPACE))
    rng = np.random.default_rng(7)
    shape = ProductShape.of((2, 2), (1, 3))
    assert bg.bridge_check(bg.random_grid(SPACE, shape, rng))


def test_point_export_round_trip():
    x = np.random.default_rng(8).standard_normal((4, 3))
    text = bg.export_points(x)
    assert len(text.splitlines()) == 4
    assert (bg.import_points(text) == x).all()


def test_space_dict_round_trip():
    space = bg.SumSpace.of((2, 1.5), (1, math.inf))
    assert bg.SumSpace.from_dict(space.to_dict()) == space
