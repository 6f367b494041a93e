import math

import numpy as np
import pytest

from signaling_games import nash, stackelberg
from signaling_games.core import (
    AffineDecoder,
    AffineEncoder,
    GaussianPrior,
    Kind,
    SingularMatrix,
    UnconstrainedGame,
    WrongConstraintMode,
    affine_cost_decoder,
    affine_cost_encoder,
    decoder_best_response,
    encoder_best_response_soft,
    encoder_power,
)
from signaling_games.nash import (
    MatrixGame,
    multidim_fixed_point,
    multidim_intercept,
    multidim_t_map,
    nash_hard_costs,
    nash_soft_costs,
    solve_hard,
    solve_soft,
)

from conftest import game, random_game


def random_deviation(rng, params, enc):
    """A random encoder that respects the hard budget when there is one."""
    a, c = rng.normal(scale=2.0, size=2)
    dev = AffineEncoder(a, c)
    if hasattr(params.constraint, "p_bar"):
        power = encoder_power(params.prior_e, dev)
        scale = math.sqrt(params.constraint.p_bar / power) * rng.uniform(0, 1)
        dev = AffineEncoder(a * scale, c * scale)
    return dev


class TestSoft:
    def test_example(self):
        r = solve_soft(game(lam=0.25))
        assert r.encoder.a == pytest.approx(1.0, abs=1e-14)
        assert r.encoder.c == 0.0
        assert r.decoder.k == pytest.approx(0.5, abs=1e-14)
        assert r.decoder.l == 0.0

    def test_threshold(self):
        r = solve_soft(game(var_d=2.0, nv=0.5, lam=4.0))
        assert r.kind is Kind.NON_INFORMATIVE and r.decoder.k == 0.0

    def test_costs_example(self):
        assert nash_soft_costs(game(lam=0.25)) == pytest.approx((0.75, 0.5), abs=1e-15)

    def test_noninformative_costs(self):
        p = game(mu_e=1.0, var_e=2.0, var_d=1.0, nv=1.0, lam=1.5)
        assert nash_soft_costs(p) == (3.0, 1.0)

    def test_lambda_zero(self):
        with pytest.raises(UnconstrainedGame):
            solve_soft(game(lam=0.0))
        with pytest.raises(UnconstrainedGame):
            nash_soft_costs(game(lam=0.0))

    def test_wrong_mode(self):
        with pytest.raises(WrongConstraintMode):
            solve_soft(game(p_bar=1.0))

    def test_fixed_point_residual(self, rng):
        for _ in range(1000):
            p = random_game(rng, "soft")
            r = solve_soft(p)
            br_e = encoder_best_response_soft(r.decoder, p.lam)
            br_d = decoder_best_response(p, r.encoder)
            assert abs(br_e.a - r.encoder.a) < 1e-12 and abs(br_e.c - r.encoder.c) < 1e-12
            assert abs(br_d.k - r.decoder.k) < 1e-12 and abs(br_d.l - r.decoder.l) < 1e-12

    def test_costs_match_core(self, rng):
        for _ in range(200):
            p = random_game(rng, "soft")
            r = solve_soft(p)
            ce, cd = nash_soft_costs(p)
            assert ce == pytest.approx(r.cost_e, rel=1e-10)
            assert cd == pytest.approx(r.cost_d, rel=1e-10)

    def test_independent_of_encoder_prior(self, rng):
        for _ in range(50):
            p = random_game(rng, "soft")
            q = game(mu_e=rng.normal(), var_e=rng.uniform(0.1, 5), mu_d=p.prior_d.mean,
                     var_d=p.prior_d.variance, nv=p.noise_variance, lam=p.lam)
            a, b = solve_soft(p), solve_soft(q)
            assert (a.kind, a.encoder, a.decoder) == (b.kind, b.encoder, b.decoder)

    def test_team_reduction(self, rng):
        for _ in range(100):
            p = random_game(rng, "soft", identical=True)
            r = solve_soft(p)
            var, nv, lam = p.prior_d.variance, p.noise_variance, p.lam
            if lam < var / nv:
                assert r.cost_e == pytest.approx(2 * math.sqrt(lam * var * nv) - lam * nv, rel=1e-10)
                assert r.cost_d == pytest.approx(math.sqrt(lam * var * nv), rel=1e-10)
            # with identical priors the Stackelberg commitment reaches the same cost
            assert stackelberg.solve_soft(p).cost_e == pytest.approx(r.cost_e, rel=1e-9)

    def test_deviations(self, rng):
        for _ in range(20):
            p = random_game(rng, "soft")
            r = solve_soft(p)
            for _ in range(500):
                dev = random_deviation(rng, p, r.encoder)
                assert affine_cost_encoder(p, dev, r.decoder) >= r.cost_e - 1e-9
                k, l = rng.normal(scale=2.0, size=2)
                assert affine_cost_decoder(p, r.encoder, AffineDecoder(k, l)) >= r.cost_d - 1e-9


class TestHard:
    def test_example(self):
        sol = solve_hard(game(mu_e=0.3, mu_d=0.3, p_bar=1.0))
        r = sol.equilibrium
        assert r.encoder.a == pytest.approx(1.0, abs=1e-15)
        assert r.decoder.k == pytest.approx(0.5, abs=1e-15)
        assert r.decoder.l == 0.3
        assert sol.kkt_multiplier == pytest.approx(0.25, abs=1e-15)
        k, nu = r.decoder.k, sol.kkt_multiplier
        assert abs(k / (k * k + nu) - r.encoder.a) < 1e-14

    def test_identical_prior_policy(self):
        r = solve_hard(game(mu_e=1.0, mu_d=1.0, var_e=4.0, var_d=4.0, p_bar=2.0)).equilibrium
        assert r.encoder.a == pytest.approx(math.sqrt(2.0) / 2.0, rel=1e-15)
        assert r.encoder.c == pytest.approx(-r.encoder.a, rel=1e-15)

    def test_costs_example(self):
        assert nash_hard_costs(game(p_bar=1.0)) == pytest.approx((0.5, 0.5), abs=1e-15)

    def test_mean_gap_point(self):
        p = game(mu_e=2.0, var_e=1, var_d=1, nv=0.01, p_bar=1)
        ce, cd = nash_hard_costs(p)
        r = solve_hard(p).equilibrium
        assert (ce, cd) == pytest.approx((r.cost_e, r.cost_d), rel=1e-10)

    def test_existence_and_kkt(self, rng):
        for _ in range(1000):
            p = random_game(rng, "hard")
            sol = solve_hard(p)
            r = sol.equilibrium
            assert r.kind is Kind.INFORMATIVE
            assert sol.kkt_multiplier > 0
            assert encoder_power(p.prior_e, r.encoder) == pytest.approx(p.constraint.p_bar, rel=1e-13)
            k, nu = r.decoder.k, sol.kkt_multiplier
            assert abs(k / (k * k + nu) - r.encoder.a) < 1e-12
            assert abs(-k * r.decoder.l / (k * k + nu) - r.encoder.c) < 1e-12
            br = decoder_best_response(p, r.encoder)
            assert abs(br.k - r.decoder.k) < 1e-12 and abs(br.l - r.decoder.l) < 1e-12

    def test_costs_match_core(self, rng):
        for _ in range(200):
            p = random_game(rng, "hard")
            r = solve_hard(p).equilibrium
            assert nash_hard_costs(p) == pytest.approx((r.cost_e, r.cost_d), rel=1e-10)

    def test_deviations(self, rng):
        for _ in range(20):
            p = random_game(rng, "hard")
            r = solve_hard(p).equilibrium
            for _ in range(500):
                dev = random_deviation(rng, p, r.encoder)
                assert encoder_power(p.prior_e, dev) <= p.constraint.p_bar * (1 + 1e-12)
                assert affine_cost_encoder(p, dev, r.decoder) >= r.cost_e - 1e-9
                k, l = rng.normal(scale=2.0, size=2)
                assert affine_cost_decoder(p, r.encoder, AffineDecoder(k, l)) >= r.cost_d - 1e-9

    def test_wrong_mode(self):
        with pytest.raises(WrongConstraintMode):
            solve_hard(game(lam=1.0))
        with pytest.raises(WrongConstraintMode):
            nash_hard_costs(game(lam=1.0))


class TestMultidim:
    def test_scalar_map(self):
        g = MatrixGame(np.eye(1), np.eye(1), 0.25)
        assert nash.decoder_gain_transpose(g, [[1.0]]) == pytest.approx(np.array([[0.5]]))
        assert multidim_t_map(g, [[1.0]]) == pytest.approx(np.array([[1.0]]), abs=1e-15)

    def test_zero_is_fixed(self):
        g = MatrixGame(np.diag([1.0, 2.0]), np.eye(2), 0.3)
        a, res, ok = multidim_fixed_point(g, np.zeros((2, 2)))
        assert ok and res == 0.0 and not a.any()

    def test_diagonal_map(self):
        g = MatrixGame(np.eye(2), np.eye(2), 0.25)
        assert multidim_t_map(g, np.eye(2)) == pytest.approx(np.eye(2), abs=1e-15)

    @pytest.mark.parametrize("var_d, nv, lam", [(1.0, 1.0, 0.25), (2.0, 0.5, 0.7), (0.5, 0.2, 0.1)])
    def test_scalar_reduction(self, var_d, nv, lam):
        g = MatrixGame([[var_d]], [[nv]], lam)
        a, res, ok = multidim_fixed_point(g, np.eye(1))
        assert ok and res <= 1e-12
        ref = solve_soft(game(var_d=var_d, nv=nv, lam=lam)).encoder.a
        assert a[0, 0] == pytest.approx(ref, abs=1e-10)

    def test_diagonal_decoupling(self):
        g = MatrixGame(np.diag([1.0, 3.0]), np.diag([0.5, 2.0]), 0.2)
        a, res, ok = multidim_fixed_point(g, np.eye(2))
        assert ok and res <= 1e-12
        for i, (vd, nv) in enumerate([(1.0, 0.5), (3.0, 2.0)]):
            assert a[i, i] == pytest.approx(solve_soft(game(var_d=vd, nv=nv, lam=0.2)).encoder.a, abs=1e-8)
        assert abs(a[0, 1]) < 1e-8 and abs(a[1, 0]) < 1e-8

    def test_general_fixed_point_is_mutual_best_response(self):
        rng = np.random.default_rng(7)
        b = rng.normal(size=(3, 3))
        sd = b @ b.T + np.eye(3)
        c = rng.normal(size=(3, 3))
        sw = 0.3 * (c @ c.T) + 0.2 * np.eye(3)
        g = MatrixGame(sd, sw, 0.5)
        a, res, ok = multidim_fixed_point(g, np.eye(3), max_iter=100_000)
        assert ok and res <= 1e-12
        # decoder gain K = F^T; check the encoder's first-order condition K^T (I - K A) = lam A
        k = nash.decoder_gain_transpose(g, a).T
        grad = k.T @ (np.eye(3) - k @ a) - g.lam * a
        assert np.abs(grad).max() < 1e-10
        # and that the decoder gain is the LMMSE gain for the decoder prior
        cov_y = a @ sd @ a.T + sw
        assert np.allclose(k, sd @ a.T @ np.linalg.inv(cov_y), atol=1e-12)

    def test_slow_game_reports_nonconvergence(self):
        # a nearly rotation-invariant game contracts slowly; the flag must say so
        rng = np.random.default_rng(7)
        b = rng.normal(size=(3, 3))
        c = rng.normal(size=(3, 3))
        g = MatrixGame(b @ b.T + np.eye(3), 0.3 * (c @ c.T) + 0.2 * np.eye(3), 0.05)
        a, res, ok = multidim_fixed_point(g, np.eye(3))
        assert not ok and res > 1e-12
        assert res == pytest.approx(float(np.linalg.norm(a - multidim_t_map(g, a))))

    def test_residual_reported(self):
        g = MatrixGame(np.diag([1.0, 3.0]), np.eye(2), 0.2)
        a, res, ok = multidim_fixed_point(g, np.eye(2), max_iter=1)
        assert not ok
        assert res == pytest.approx(float(np.linalg.norm(a - multidim_t_map(g, a))))

    def test_intercept(self):
        a = np.array([[2.0, 0.0], [1.0, 1.0]])
        assert multidim_intercept(a, [1.0, -1.0]) == pytest.approx(np.array([-2.0, 0.0]))

    def test_singular(self):
        g = MatrixGame(np.eye(2), np.eye(2) * 1e-13, 1e-14)
        with pytest.raises(SingularMatrix):
            multidim_t_map(g, np.diag([1e7, 1.0]))

    def test_validation(self):
        with pytest.raises(ValueError):
            MatrixGame([[1.0, 0.5], [0.0, 1.0]], np.eye(2), 0.1)
        with pytest.raises(ValueError):
            MatrixGame(np.eye(2), np.diag([1.0, -1.0]), 0.1)
        with pytest.raises(ValueError):
            MatrixGame(np.eye(2), np.eye(2), 0.0)
        g = MatrixGame(np.eye(2), np.eye(2), 0.1)
        with pytest.raises(ValueError):
            multidim_t_map(g, np.eye(3))
        with pytest.raises(ValueError):
            multidim_fixed_point(g, np.eye(2), tol=0)
