#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kdv/soliton.hpp"
#include "kdv/spectral.hpp"
#include "oracles.hpp"

using namespace kdv;
using doctest::Approx;

namespace {

const double pi = std::numbers::pi;

DiscreteSpectrum two_mode() { return {{1.0, 2.0}, {1.0, 1.0}, {}}; }

QuadratureSpectrum gaussian(int nodes) { return QuadratureSpectrum::gauss(6.0, nodes, gaussian_density(1.0, 1.0)); }

}  // namespace

TEST_SUITE("spectral") {
TEST_CASE("diagonal limit of X") {
    const FiniteVessel v = build_discrete_vessel(DiscreteSpectrum{{1.0}, {1.0}, {}});
    const double integral = oracle::simpson([](double y) { return std::sin(y) * std::sin(y); }, 0.0, pi, 2000);
    CHECK(v.X(pi, 0.0)(0, 0).real() - 1.0 == Approx(integral).epsilon(1e-12));
    CHECK(integral == Approx(pi / 2));
}

TEST_CASE("X at the origin is the identity") {
    const FiniteVessel v = build_discrete_vessel(DiscreteSpectrum{{0.5, 1.0, 2.5}, {1.0, 2.0, 0.5}, {}});
    CHECK((v.X(0.0, 0.0) - CMatrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("X equals the integral of B sigma2 B* from the origin") {
    const FiniteVessel v = build_discrete_vessel(DiscreteSpectrum{{0.7, 1.3, 2.0}, {1.0, Complex(0.0, 0.5), 0.8}, {}});
    const CMatrix& s2 = sl_parameters().sigma2;
    for (double t : {0.0, 0.3}) {
        for (double x : {-1.2, 0.8, 2.5}) {
            const CMatrix integral = oracle::simpson(
                [&](double y) {
                    const CMatrix B = v.B(y, t);
                    return CMatrix(B * s2 * B.adjoint());
                },
                0.0, x, 4000);
            CHECK((v.X(x, t) - v.X(0.0, t) - integral).norm() < 1e-8);
        }
    }
}

TEST_CASE("discrete vessel conditions") {
    const FiniteVessel v = build_discrete_vessel(two_mode());
    CHECK((v.A() + v.A().adjoint()).norm() == 0.0);
    CHECK(v.A()(0, 0) == Complex(0.0, 1.0));
    const ResidualReport r = evolution_residuals(v, 0.7, 0.3, 1e-3, 4);
    CHECK(r.max_differential() < 1e-6);
    CHECK(r.r_lyapunov < 1e-12);
    CHECK(r.r_normalization < 1e-12);
}

TEST_CASE("near-degenerate wavenumbers") {
    const double k = 1.3;
    const double limit = detail::sine_kernel(k, k, 0.9, 0.2);
    CHECK(detail::sine_kernel(k, k * (1 + 1e-11), 0.9, 0.2) == Approx(limit).epsilon(1e-12));
    // Kernel is continuous across the switch between the two branches.
    const double a = detail::sine_kernel(k, k * (1 + 6e-9), 0.9, 0.2);
    const double b = detail::sine_kernel(k, k * (1 + 4e-9), 0.9, 0.2);
    CHECK(a == Approx(b).epsilon(1e-7));
    CHECK(detail::sine_kernel(-k, 2.0, 0.9, 0.2) == Approx(detail::sine_kernel(k, 2.0, 0.9, 0.2)));
}

TEST_CASE("spectrum validation") {
    CHECK_THROWS_AS(build_discrete_vessel(DiscreteSpectrum{{1.0, -1.0}, {1.0, 1.0}, {}}), InvalidArgument);
    CHECK_THROWS_AS(build_discrete_vessel(DiscreteSpectrum{{0.0}, {1.0}, {}}), InvalidArgument);
    CHECK_THROWS_AS(build_discrete_vessel(DiscreteSpectrum{{1.0}, {1.0, 2.0}, {}}), InvalidArgument);
    CHECK_THROWS_AS(build_discrete_vessel(DiscreteSpectrum{{1.0, 2.5}, {1.0, 1.0}, Periodic{2 * pi}}), InvalidArgument);
    CHECK_NOTHROW(build_discrete_vessel(DiscreteSpectrum{{1.0, 3.0}, {1.0, 1.0}, Periodic{2 * pi}}));
    CHECK(DiscreteSpectrum{{1.0, 3.0}, {2.0, 1.0}, {}}.tail_proxy() == Approx(4.0));
}

TEST_CASE("Gauss-Legendre") {
    const QuadratureRule r = gauss_legendre(7, -1.0, 2.0);
    double wsum = 0.0, poly = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        wsum += r.weights[i];
        poly += r.weights[i] * std::pow(r.nodes[i], 13);
    }
    CHECK(wsum == Approx(3.0).epsilon(1e-14));
    CHECK(poly == Approx((std::pow(2.0, 14) - 1.0) / 14.0).epsilon(1e-13));
    CHECK(gauss_legendre(1, 0.0, 2.0).nodes[0] == Approx(1.0));
    CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("quadrature vessel") {
    SUBCASE("zero density") {
        const auto spec = QuadratureSpectrum::gauss(3.0, 8, gaussian_density(0.0, 1.0));
        const FiniteVessel v = build_quadrature_vessel(spec);
        CHECK((v.X(1.3, 0.2) - CMatrix::Identity(8, 8)).norm() == 0.0);
        CHECK(q_from_linkage(evaluate(v, 1.3, 0.2)) == 0.0);
        CHECK(q_odd_continuum(spec, 0.7) == 0.0);
    }
    SUBCASE("identities") {
        const FiniteVessel v = build_quadrature_vessel(gaussian(32));
        CHECK(v.kind() == VesselKind::quadrature);
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(-1, 1);
        for (int i = 0; i < 10; ++i) CHECK(lyapunov_residual(v, 2 * u(rng), u(rng)) < 1e-12);
    }
    SUBCASE("refinement") {
        const FiniteVessel a = build_quadrature_vessel(gaussian(32));
        const FiniteVessel b = build_quadrature_vessel(gaussian(64));
        for (double x : {0.3, 1.0, 2.0}) CHECK(std::abs(evaluate(a, x, 0.0).beta - evaluate(b, x, 0.0).beta) < 1e-8);
        CHECK(std::abs(q_odd_continuum(gaussian(32), 1.0) - q_odd_continuum(gaussian(64), 1.0)) < 1e-8);
    }
    CHECK_THROWS_AS((QuadratureSpectrum{{0.5, 0.2}, {1.0, 1.0}, gaussian_density(1, 1)}.validate()), InvalidArgument);
    CHECK_THROWS_AS((QuadratureSpectrum{{0.5}, {-1.0}, gaussian_density(1, 1)}.validate()), InvalidArgument);
}

TEST_CASE("fixed-vector residual") {
    const FiniteVessel v = build_discrete_vessel(two_mode());
    CHECK(fixed_vector_residual(v, 0.0) == 0.0);
    CHECK_THROWS_AS(fixed_vector_residual(build_soliton(SolitonSpec{{1.0}, {1.0}}), 1.0), InvalidArgument);

    // Dense oracle for the same quantity.
    const double x = 1.0;
    CVector w(2);
    w << std::sin(1.0), std::sin(2.0) / 2.0;
    const double dense = (v.X(x, 0.0) * w - w).norm() / w.norm();
    CHECK(fixed_vector_residual(v, x) == Approx(dense).epsilon(1e-14));
}

TEST_CASE("odd formulas for beta and q") {
    CHECK(beta_odd(DiscreteSpectrum{{1.0}, {1.0}, {}}, pi / 2) == Approx(1.0));
    CHECK(beta_odd(two_mode(), 0.0) == 0.0);
    CHECK(beta_odd(two_mode(), -0.8) == Approx(beta_odd(two_mode(), 0.8)));

    const auto spec = gaussian(48);
    for (double x : {0.4, 1.3}) {
        CHECK(q_odd_continuum(spec, -x) == Approx(-q_odd_continuum(spec, x)));
        auto err = [&](double h) {
            return std::abs(2.0 * (beta_odd_continuum(spec, x + h) - beta_odd_continuum(spec, x - h)) / (2 * h) -
                            q_odd_continuum(spec, x));
        };
        CHECK(err(1e-2) < 1e-3);
        CHECK(std::log2(err(1e-2) / err(5e-3)) == Approx(2.0).epsilon(0.05));
    }
}

TEST_CASE("vessel beta against the odd formula near the origin") {
    // Both equal |v|^2 to leading order with opposite signs; the sum is O(x^5).
    const DiscreteSpectrum spec{{1.0, 2.0, 3.0}, {1.0, 0.5, 0.25}, {}};
    const FiniteVessel v = build_discrete_vessel(spec);
    auto gap = [&](double x) { return std::abs(evaluate(v, x, 0.0).beta + beta_odd(spec, x)); };
    CHECK(gap(0.05) / gap(0.025) == Approx(32.0).epsilon(0.05));
    CHECK(evaluate(v, 0.05, 0.0).beta < 0.0);
    CHECK(beta_odd(spec, 0.05) > 0.0);
}
}
