import math

import numpy as np
import pytest

from blochlab.bloch import (
    EstimateConfig,
    bergman_constant,
    bloch_norm,
    bloch_seminorm,
    composition_norm_bounds,
    lipschitz_ratio,
    local_dilation,
    lsc_check,
    q_norm,
    zhu_q_ball,
)
from blochlab.domains import Ball, CartanI, CartanII, CartanIV, Disk, Polydisk, metric_form, metric_matrix, sample_points
from blochlab.errors import UnsupportedError, ValidationError
import numpy.linalg as la
from blochlab.maps import (
    Affine,
    BallAutomorphism,
    BlaschkeProduct,
    Compose,
    Constant,
    DiagonalEmbedding,
    ExprMap,
    ExtremalLogMap,
    MobiusDisk,
    ModifiedProjection,
    Projection,
)
from helpers import random_ball_selfmap, random_disk_selfmap, random_polynomial, random_unitary

SMALL = EstimateConfig(samples=2000, seed=7)


def test_q_norm_examples():
    assert q_norm(Projection(1, 2), Polydisk(2), [0, 0]) == pytest.approx(1.0)
    assert q_norm(Projection(1, 4), CartanI(2, 2), np.zeros(4)) == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert q_norm(ExprMap("z1^2", 1), Disk(), [0.5]) == pytest.approx(0.75, abs=1e-12)
    assert q_norm(ModifiedProjection(1, 2, "+", 5), CartanIV(5), np.zeros(5)) == pytest.approx(math.sqrt(0.4), abs=1e-12)


def test_q_norm_rejects_vector_maps_and_exterior_points():
    with pytest.raises(ValidationError):
        q_norm(DiagonalEmbedding(2), Polydisk(2), [0, 0])
    with pytest.raises(ValidationError):
        q_norm(Projection(1, 2), Ball(2), [1, 0])


def test_zhu_q_examples():
    f = random_polynomial(np.random.default_rng(0), 3)
    g = f.jacobian(np.zeros(3))[0]
    assert zhu_q_ball(f, np.zeros(3), 3) == pytest.approx(np.linalg.norm(g))
    assert zhu_q_ball(ExtremalLogMap([0.3, 0.4j]), [0, 0], 2) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("spec", [Disk(), Ball(3), Polydisk(2), CartanI(3, 2), CartanIV(5)], ids=str)
def test_q_norm_is_the_supremum_over_directions(spec):
    rng = np.random.default_rng(1)
    n = sample_points(spec, 1, 0.5, 1).shape[1]
    f = random_polynomial(rng, n)
    for z in sample_points(spec, 5, 0.9, 2):
        g = f.jacobian(z)[0]
        q = q_norm(f, spec, z)
        for _ in range(1000):
            u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            assert abs(g @ u) / math.sqrt(metric_form(spec, z, u).real) <= q * (1 + 1e-12)
        u = la.solve(metric_matrix(spec, z), g.conj())
        assert abs(g @ u) / math.sqrt(metric_form(spec, z, u).real) == pytest.approx(q, rel=1e-10)


def test_q_norm_automorphism_invariance_and_contraction():
    rng = np.random.default_rng(2)
    spec = Ball(2)
    for _ in range(5):
        f = random_polynomial(rng, 2)
        S = BallAutomorphism(random_unitary(rng, 2), sample_points(spec, 1, 0.8, int(rng.integers(1000)))[0])
        phi = random_ball_selfmap(rng, 2)
        for z in sample_points(spec, 20, 0.95, 3):
            assert q_norm(Compose(f, S), spec, z) == pytest.approx(q_norm(f, spec, S(z)), rel=1e-9)
            lhs = q_norm(Compose(f, phi), spec, z)
            assert lhs <= local_dilation(phi, spec, z) * q_norm(f, spec, phi(z)) + 1e-10


def test_seminorm_examples():
    r = bloch_seminorm(ExprMap("z1", 1), Disk(), SMALL)
    assert r.value == pytest.approx(1.0, abs=1e-6)
    r = bloch_seminorm(ExprMap("z1^2", 1), Disk(), SMALL)
    assert r.value == pytest.approx(4 / (3 * math.sqrt(3)), abs=1e-4)
    assert r.value == pytest.approx(q_norm(ExprMap("z1^2", 1), Disk(), r.witness), abs=0)
    r = bloch_seminorm(ExtremalLogMap([0.5, 0.5j]), Ball(2), SMALL, normalization="zhu")
    assert r.value == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(UnsupportedError):
        bloch_seminorm(Projection(1, 2), Polydisk(2), SMALL, normalization="zhu")


def test_seminorm_is_deterministic():
    f = random_polynomial(np.random.default_rng(3), 2)
    a = bloch_seminorm(f, Polydisk(2), SMALL)
    b = bloch_seminorm(f, Polydisk(2), SMALL)
    assert a.value == b.value and np.array_equal(a.witness, b.witness)


def test_seminorm_skips_singular_samples():
    # pole on the circle |z| = 1/0.999... sits outside; put one inside to force skips
    f = ExprMap("1/(z1 - 0.5)", 1)
    r = bloch_seminorm(f, Disk(), EstimateConfig(samples=200, schedule=(0.5,), max_evals=50))
    assert r.value > 0 and r.lower_bound_certified


def test_bloch_norm_examples():
    assert bloch_norm(Constant([1.0], 1), Disk(), SMALL) == pytest.approx(1.0)
    assert bloch_norm(ExprMap("z1", 1), Disk(), SMALL) == pytest.approx(1.0, abs=1e-6)
    assert bloch_norm(ExprMap("z1^2", 1), Disk(), SMALL) == pytest.approx(0.769800, abs=1e-4)


def test_local_dilation_examples():
    assert local_dilation(ExprMap("z1^2", 1), Disk(), [0.5]) == pytest.approx(0.8, abs=1e-12)
    for n in (2, 3):
        for z in sample_points(Polydisk(n), 5, 0.9, 1):
            assert local_dilation(DiagonalEmbedding(n), Polydisk(n), z) == pytest.approx(math.sqrt(n), abs=1e-10)
    for z in sample_points(Ball(3), 10, 0.95, 1):
        S = BallAutomorphism(random_unitary(np.random.default_rng(0), 3), [0.2, 0.1j, -0.4])
        assert local_dilation(S, Ball(3), z) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValidationError):
        local_dilation(Affine([[2.0]]), Disk(), [0.6])


def test_bergman_constant_examples():
    assert bergman_constant(DiagonalEmbedding(3), Polydisk(3), SMALL).value == pytest.approx(math.sqrt(3), abs=1e-6)
    r = bergman_constant(MobiusDisk(0.3), Disk(), SMALL)
    assert r.value == pytest.approx(1.0, abs=1e-10)
    r = bergman_constant(ExprMap("z1^2", 1), Disk(), SMALL)
    assert 0.99 < r.value <= 1.0 + 1e-9


def test_schwarz_pick_and_koranyi_on_samples():
    rng = np.random.default_rng(4)
    for _ in range(5):
        phi = random_disk_selfmap(rng)
        for z in sample_points(Disk(), 100, 0.99, 5):
            assert local_dilation(phi, Disk(), z) <= 1 + 1e-9
        phi = random_ball_selfmap(rng, 2)
        for z in sample_points(Ball(2), 100, 0.99, 5):
            assert local_dilation(phi, Ball(2), z) <= 1 + 1e-9


def test_bounded_maps_have_seminorm_below_bloch_constant():
    f = ExprMap("0.5*z1 + 0.4*z2^2", 2)  # |f| < 1 on the polydisk
    assert bloch_seminorm(f, Polydisk(2), SMALL).value <= 1 + 1e-6
    f = Projection(1, 4)
    assert bloch_seminorm(f, CartanI(2, 2), SMALL).value <= math.sqrt(0.5) + 1e-6


def test_lipschitz_examples():
    assert lipschitz_ratio(Constant([0.3], 1), Disk(), 200, 1) == 0.0
    r = lipschitz_ratio(ExprMap("z1", 1), Disk(), 10000, 1, centers=[[0]])
    assert 0.95 < r <= 1.0
    with pytest.raises(UnsupportedError):
        lipschitz_ratio(Projection(1, 5), CartanIV(5), 10, 1)


def test_norm_bound_examples():
    b = composition_norm_bounds(Constant([0.9], 1), Disk(), SMALL)
    assert b.lower == pytest.approx(0.5 * math.log(19), abs=1e-9)
    assert b.upper == pytest.approx(0.5 * math.log(19), abs=1e-9)
    b = composition_norm_bounds(MobiusDisk(0.5), Disk(), SMALL)
    assert b.lower == 1.0
    assert b.upper == pytest.approx(1.549306, abs=1e-6)
    b = composition_norm_bounds(BallAutomorphism(random_unitary(np.random.default_rng(1), 2), [0, 0]), Ball(2), SMALL)
    assert (b.lower, b.upper) == (1.0, pytest.approx(1.0, abs=1e-9))
    assert b.upper <= b.upper_certified + 1e-9


def test_lsc_examples():
    f = ExprMap("z1^2", 1)
    cfg = EstimateConfig(samples=500, seed=3)
    r = lsc_check([f, f], f, Disk(), cfg)
    assert r.beta_limit == pytest.approx(r.min_tail_beta)
    seq = [ExprMap(f"{1 - 1 / n!r}*z1", 1) for n in range(5, 11)]
    r = lsc_check(seq, ExprMap("z1", 1), Disk(), cfg)
    assert r.beta_limit == pytest.approx(1.0, abs=1e-6) and r.min_tail_beta == pytest.approx(0.8, abs=1e-6)
    assert r.beta_limit <= r.min_tail_beta + 1 / 5
    with pytest.raises(ValidationError):
        lsc_check([ExprMap("z1", 1)], ExprMap("z1 + 1", 1), Disk(), cfg)


def test_config_validation():
    with pytest.raises(ValidationError):
        EstimateConfig(samples=0)
    with pytest.raises(ValidationError):
        EstimateConfig(schedule=(0.9, 0.5))
    with pytest.raises(ValidationError):
        EstimateConfig(schedule=(1.0,))


def test_blaschke_extra_seeds_find_zero_witness():
    B = BlaschkeProduct([0, 0.3])
    cfg = EstimateConfig(samples=50, seed=1, extra_seeds=((0.3,),))
    r = bloch_seminorm(B, Disk(), cfg)
    assert r.value >= q_norm(B, Disk(), [0.3])


def test_symmetric_matrix_coordinates():
    # diagonal entries reach the Bloch constant; each off-diagonal variable fills
    # two entries of Z, which divides its semi-norm by sqrt(2)
    spec = CartanII(2)
    c = math.sqrt(2 / 3)
    assert q_norm(Projection(1, 3), spec, np.zeros(3)) == pytest.approx(c, abs=1e-12)
    assert q_norm(Projection(2, 3), spec, np.zeros(3)) == pytest.approx(c / math.sqrt(2), abs=1e-12)
    assert bloch_seminorm(Projection(2, 3), spec, SMALL).value == pytest.approx(c / math.sqrt(2), abs=1e-6)
