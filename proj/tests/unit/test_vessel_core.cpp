#include <doctest.h>

#include <cmath>
#include <random>

#include "kdv/soliton.hpp"
#include "kdv/spectral.hpp"
#include "kdv/standard_construction.hpp"
#include "kdv/vessel.hpp"
#include "oracles.hpp"

using namespace kdv;
using doctest::Approx;

namespace {

FiniteVessel one_soliton() { return build_soliton(SolitonSpec{{1.0}, {std::sqrt(2.0)}}); }

FiniteVessel zero_vessel() { return build_discrete_vessel(DiscreteSpectrum{{1.0, 2.0}, {0.0, 0.0}, {}}); }

}  // namespace

TEST_SUITE("vessel_core") {
TEST_CASE("SL parameters are the fixed constants") {
    const auto& p = sl_parameters();
    Matrix2c s1, s2, g;
    s1 << 0, 1, 1, 0;
    s2 << 1, 0, 0, 0;
    g << 0, 0, 0, I_unit;
    CHECK(p.sigma1 == s1);
    CHECK(p.sigma2 == s2);
    CHECK(p.gamma == g);
    CHECK(p.sigma2 * p.sigma2 == p.sigma2);
    CHECK(p.sigma1 * p.sigma1 == Matrix2c::Identity());
    CHECK((p.gamma + p.gamma.adjoint()).norm() == 0.0);
}

TEST_CASE("linkage output matrix") {
    SUBCASE("zero coupling leaves gamma unchanged") {
        CHECK(linkage_gamma_star(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2)) == sl_parameters().gamma);
    }
    SUBCASE("one soliton at the origin") {
        const EvaluatedState st = evaluate(one_soliton(), 0.0, 0.0);
        CHECK(st.gamma_star(1, 0).real() == Approx(-1.0));
        CHECK(st.gamma_star(0, 1).real() == Approx(1.0));
        CHECK(st.beta == Approx(-1.0));
    }
    SUBCASE("bottom-right entry is i") {
        const FiniteVessel v = build_soliton(SolitonSpec{{0.5, 1.3}, {1.0, Complex(0.2, 0.7)}});
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-2, 2);
        for (int i = 0; i < 20; ++i) {
            const EvaluatedState st = evaluate(v, u(rng), u(rng));
            CHECK(std::abs(st.gamma_star(1, 1) - I_unit) < 1e-12);
            CHECK(std::abs(st.gamma_star(1, 0) - st.beta) < 1e-12);
        }
    }
}

TEST_CASE("beta") {
    CHECK(beta_of_state(CMatrix::Zero(3, 2), CMatrix::Identity(3, 3)) == 0.0);

    // 1x1 arithmetic: X = 2, B = (sqrt2, i sqrt2) so (B* X^-1 B)_11 = 1.
    CMatrix B(1, 2);
    B << std::sqrt(2.0), I_unit * std::sqrt(2.0);
    CMatrix Xinv(1, 1);
    Xinv << 0.5;
    CHECK(beta_of_state(B, Xinv) == Approx(-1.0));

    SUBCASE("beta = -d/dx log tau with second-order convergence") {
        const FiniteVessel v = build_soliton(SolitonSpec::from_weights({0.7, 1.4}, {1.0, 0.3}));
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        for (int i = 0; i < 20; ++i) {
            const double x = u(rng), t = u(rng);
            const double beta = evaluate(v, x, t).beta;
            auto err = [&](double h) {
                return std::abs(-(log_tau(v, x + h, t).log_abs - log_tau(v, x - h, t).log_abs) / (2 * h) - beta);
            };
            const double e1 = err(1e-3), e2 = err(5e-4);
            CHECK(e1 < 1e-5);
            if (e1 > 1e-10) CHECK(e1 / e2 == Approx(4.0).epsilon(0.05));
        }
    }
}

TEST_CASE("tau") {
    CHECK(tau(zero_vessel(), 0.4, -0.2) == Approx(1.0));
    CHECK(tau(one_soliton(), 0.0, 0.0) == Approx(2.0));

    const FiniteVessel v3 = build_soliton(SolitonSpec::from_weights({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0}));
    const double brute = oracle::cofactor_det(v3.X(0.0, 0.0)).real();
    CHECK(brute == Approx(4.0 + 362.0 / 900.0).epsilon(1e-14));
    CHECK(tau(v3, 0.0, 0.0) == Approx(brute).epsilon(1e-13));

    SUBCASE("log domain survives where the value overflows") {
        const SolitonSpec spec = SolitonSpec::from_weights({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0});
        const FiniteVessel v = build_soliton(spec);
        CHECK_THROWS_AS(tau(v, 100.0, 0.0), OverflowError);
        const TauValue tv = log_tau(v, 100.0, 0.0);
        CHECK(tv.sign == 1);
        CHECK(tv.log_abs == Approx(soliton_log_tau(spec, 100.0, 0.0)).epsilon(1e-12));
        CHECK(tv.log_abs > 1100.0);
    }
}

TEST_CASE("Lyapunov residual") {
    const FiniteVessel sol = build_soliton(SolitonSpec{{0.5, 1.0, 2.0}, {1.0, 0.5, Complex(0.0, 2.0)}});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 20; ++i) CHECK(lyapunov_residual(sol, u(rng), u(rng)) < 1e-12);

    const FiniteVessel disc = build_discrete_vessel(DiscreteSpectrum{{1.0, 2.0}, {1.0, 1.0}, {}});
    CHECK(lyapunov_residual(disc, 0.7, 0.3) < 1e-12);

    const FiniteVessel corrupted(
        VesselKind::soliton, sol.A(), [sol](double x, double t) { return sol.B(x, t); },
        [sol](double x, double t) {
            CMatrix X = sol.X(x, t);
            // Diagonal entries are unconstrained since A is diagonal and skew.
            X(0, 1) += 1e-3;
            X(1, 0) += 1e-3;
            return X;
        },
        sol.X0());
    CHECK(lyapunov_residual(corrupted, 0.0, 0.0) > 1e-4);
}

TEST_CASE("evolution residuals") {
    SUBCASE("one soliton, fourth-order stencil") {
        const ResidualReport r = evolution_residuals(one_soliton(), 0.0, 0.0, 1e-3, 4);
        CHECK(r.max_differential() < 1e-6);
        CHECK(r.r_lyapunov < 1e-12);
    }
    SUBCASE("second-order convergence") {
        const FiniteVessel v = build_soliton(SolitonSpec::from_weights({0.6, 1.1}, {1.0, 1.0}));
        const ResidualReport a = evolution_residuals(v, 0.3, -0.2, 1e-3);
        const ResidualReport b = evolution_residuals(v, 0.3, -0.2, 5e-4);
        CHECK(a.r_DB / b.r_DB == Approx(4.0).epsilon(0.02));
        CHECK(a.r_DX / b.r_DX == Approx(4.0).epsilon(0.02));
        CHECK(*a.r_DBt / *b.r_DBt == Approx(4.0).epsilon(0.02));
        CHECK(*a.r_DXt / *b.r_DXt == Approx(4.0).epsilon(0.02));
    }
    SUBCASE("constant vessel") {
        const ResidualReport r = evolution_residuals(zero_vessel(), 0.5, 0.5, 1e-3);
        CHECK(r.max_differential() < 1e-14);
        CHECK(r.r_normalization == 0.0);
    }
}

TEST_CASE("normalization residual") {
    CHECK(normalization_residual(one_soliton(), 0.0, 0.0) < 1e-15);
    CHECK(normalization_residual(zero_vessel(), 1.0, 1.0) == 0.0);
    const FiniteVessel disc = build_discrete_vessel(DiscreteSpectrum{{0.5, 1.5, 2.5}, {1.0, 0.3, 0.2}, {}});
    CHECK(normalization_residual(disc, 1.1, 0.4) < 1e-12);
}

TEST_CASE("inertia") {
    CHECK(inertia(CMatrix::Identity(3, 3)).positive == 3);
    CHECK(inertia(CMatrix::Identity(3, 3)).dissipative());
    const Inertia sol = inertia(build_soliton(SolitonSpec{{1.0, 2.0}, {1.0, 1.0}}).X(0.3, 0.1));
    CHECK(sol.positive == 2);
    CHECK(sol.negative == 0);
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    CHECK(inertia(d).kappa() == 1);
    d(1, 1) = 1e-15;
    CHECK_THROWS_AS(inertia(d), NumericalError);
}

TEST_CASE("singular X is reported with its location") {
    CMatrix A = CMatrix::Zero(2, 2);
    const FiniteVessel v(
        VesselKind::tabulated, A, [](double, double) { return CMatrix(CMatrix::Zero(2, 2)); },
        [](double, double) { return CMatrix(CMatrix::Ones(2, 2)); }, CMatrix::Identity(2, 2));
    CHECK_THROWS_AS(evaluate(v, 1.0, 2.0), SingularMatrixError);
}

TEST_CASE("standard construction") {
    const Grid1D grid{-1.0, 1.0, 2001};
    SUBCASE("zero input is constant") {
        CMatrix A = CMatrix::Zero(1, 1);
        A(0, 0) = Complex(0.0, -1.0);
        const FiniteVessel v = integrate_standard_construction(A, CMatrix::Zero(1, 2), CMatrix::Identity(1, 1), 0.0, grid);
        CHECK(v.B(0.37, 0.0).norm() == 0.0);
        CHECK((v.X(-0.8, 0.0) - CMatrix::Identity(1, 1)).norm() == 0.0);
    }
    SUBCASE("reproduces the soliton closed form") {
        const FiniteVessel sol = build_soliton(SolitonSpec{{0.8, 1.5}, {1.0, 0.6}});
        const FiniteVessel tab = integrate_standard_construction(sol.A(), sol.B(0.0, 0.0), sol.X(0.0, 0.0), 0.0, grid);
        CHECK_FALSE(tab.evolves_in_time());
        for (double x : {-1.0, -0.55, 0.0, 0.3331, 1.0}) {
            CHECK((tab.B(x, 0.0) - sol.B(x, 0.0)).norm() < 1e-8);
            CHECK((tab.X(x, 0.0) - sol.X(x, 0.0)).norm() < 1e-8);
        }
        CHECK(lyapunov_residual(tab, 0.41, 0.0) < 1e-8);
        // X' = B sigma2 B* recovered by differentiating the table.
        const ResidualReport r = evolution_residuals(tab, 0.2, 0.0, 1e-3, 4);
        CHECK(r.r_DX < 1e-8);
        CHECK(r.r_DB < 1e-8);
        CHECK_FALSE(r.r_DBt.has_value());
        CHECK_THROWS_AS(tab.X(1.5, 0.0), InvalidArgument);
    }
    SUBCASE("preconditions") {
        const FiniteVessel sol = build_soliton(SolitonSpec{{1.0, 2.0}, {1.0, 1.0}});
        CHECK_THROWS_AS(integrate_standard_construction(sol.A(), sol.B(0.0, 0.0), CMatrix::Identity(2, 2) * 3.0, 0.0, grid),
                        InvalidArgument);
        CHECK_THROWS_AS(integrate_standard_construction(sol.A(), sol.B(0.0, 0.0), sol.X(0.0, 0.0), 0.00037, grid),
                        InvalidArgument);
    }
}
}
