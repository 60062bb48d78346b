#include "kdv/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

namespace kdv {

namespace {

std::string idx(std::size_t i) { return "[" + std::to_string(i) + "]"; }

}  // namespace

void DiscreteSpectrum::validate() const {
    if (k.empty()) throw InvalidArgument("discrete spectrum: at least one wavenumber is required");
    if (k.size() != b.size()) throw InvalidArgument("discrete spectrum: k and b have different lengths");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] == 0.0 || !std::isfinite(k[i]))
            throw InvalidArgument("discrete spectrum: k" + idx(i) + " must be nonzero and finite");
        if (!std::isfinite(std::abs(b[i]))) throw InvalidArgument("discrete spectrum: b" + idx(i) + " is not finite");
        for (std::size_t j = 0; j < i; ++j) {
            const double a = k[i] * k[i], c = k[j] * k[j];
            if (std::abs(a - c) <= 1e-14 * std::max(a, c))
                throw InvalidArgument("discrete spectrum: k" + idx(j) + "^2 and k" + idx(i) + "^2 coincide");
        }
    }
    if (const auto* p = std::get_if<Periodic>(&flavor)) {
        if (!(p->T > 0.0) || !std::isfinite(p->T)) throw InvalidArgument("discrete spectrum: period must be positive");
        for (std::size_t i = 0; i < k.size(); ++i) {
            const double N = k[i] * p->T / (2.0 * std::numbers::pi);
            if (std::abs(N - std::round(N)) > 1e-12 * std::max(1.0, std::abs(N)))
                throw InvalidArgument("discrete spectrum: k" + idx(i) + " is not on the 2 pi N / T lattice");
        }
    }
}

double DiscreteSpectrum::tail_proxy() const {
    double m = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) m = std::max(m, std::norm(b[i]) * std::abs(k[i]));
    return m;
}

namespace detail {

double sine_kernel(double kn, double km, double x, double t) {
    const double un = kn * kn, um = km * km;
    const double gap = std::abs(un - um);
    if (gap < 1e-8 * std::max(un, um)) {
        // Symmetric in (un, um), so the confluent value at the midpoint is
        // accurate to second order in the gap.
        const double k = std::sqrt(0.5 * (un + um));
        const double theta = k * x - k * k * k * t;
        return (x - 3.0 * k * k * t) / (2.0 * k * k) - std::sin(2.0 * theta) / (4.0 * k * k * k);
    }
    const double tn = kn * x - kn * kn * kn * t, tm = km * x - km * km * km * t;
    const double sn = std::sin(tn) / kn, sm = std::sin(tm) / km;
    return (sn * std::cos(tm) - std::cos(tn) * sm) / (un - um);
}

}  // namespace detail

FiniteVessel build_discrete_vessel(const DiscreteSpectrum& spec, bool self_check) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.k.size());
    Eigen::VectorXd k(n);
    CVector b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i) = spec.k[i];
        b(i) = spec.b[i];
    }
    CMatrix A = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) A(i, i) = Complex(0.0, k(i) * k(i));

    auto B = [k, b](double x, double t) {
        const Eigen::Index m = k.size();
        CMatrix out(m, 2);
        for (Eigen::Index j = 0; j < m; ++j) {
            const double theta = k(j) * x - k(j) * k(j) * k(j) * t;
            out(j, 0) = b(j) * (std::sin(theta) / k(j));
            out(j, 1) = b(j) * Complex(0.0, std::cos(theta));
        }
        return out;
    };
    auto X = [k, b](double x, double t) {
        const Eigen::Index m = k.size();
        CMatrix out = CMatrix::Identity(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = i; j < m; ++j) {
                const Complex e = detail::sine_kernel(k(i), k(j), x, t) * b(i) * std::conj(b(j));
                out(i, j) += e;
                if (j != i) out(j, i) += std::conj(e);
            }
        return out;
    };

    FiniteVessel vessel(VesselKind::discrete, std::move(A), B, X, CMatrix::Identity(n, n));
    if (self_check) {
        std::mt19937_64 rng(0x5eed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            const double x = u(rng), t = u(rng);
            const double r = lyapunov_residual(vessel, x, t);
            if (!(r < 1e-12))
                throw NumericalError("discrete self-check: Lyapunov residual " + std::to_string(r));
        }
    }
    return vessel;
}

namespace {

// P_n(z) and P_n'(z) by the three-term recurrence.
std::pair<double, double> legendre(int n, double z) {
    double p0 = 1.0, p1 = z;
    for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
    if (!(b > a)) throw InvalidArgument("gauss_legendre: empty interval");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double dp = legendre(n, z).second;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

Density gaussian_density(double amplitude, double width) {
    if (!(width > 0.0)) throw InvalidArgument("gaussian density: width must be positive");
    return [amplitude, width](double s) { return Complex(amplitude * std::exp(-0.5 * s * s / (width * width)), 0.0); };
}

QuadratureSpectrum QuadratureSpectrum::gauss(double s_max, int n, Density density) {
    if (!(s_max > 0.0)) throw InvalidArgument("quadrature spectrum: s_max must be positive");
    auto rule = gauss_legendre(n, 0.0, s_max);
    QuadratureSpectrum spec{std::move(rule.nodes), std::move(rule.weights), std::move(density)};
    spec.validate();
    return spec;
}

void QuadratureSpectrum::validate() const {
    if (nodes.empty()) throw InvalidArgument("quadrature spectrum: no nodes");
    if (nodes.size() != weights.size()) throw InvalidArgument("quadrature spectrum: nodes and weights differ in length");
    if (!density) throw InvalidArgument("quadrature spectrum: missing density");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(nodes[i] > 0.0)) throw InvalidArgument("quadrature spectrum: node" + idx(i) + " must be positive");
        if (i > 0 && !(nodes[i] > nodes[i - 1]))
            throw InvalidArgument("quadrature spectrum: nodes must be strictly increasing");
        if (!(weights[i] > 0.0)) throw InvalidArgument("quadrature spectrum: weight" + idx(i) + " must be positive");
    }
}

DiscreteSpectrum QuadratureSpectrum::as_discrete() const {
    validate();
    DiscreteSpectrum d;
    d.k = nodes;
    d.b.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) d.b.push_back(std::sqrt(weights[i]) * density(nodes[i]));
    return d;
}

FiniteVessel build_quadrature_vessel(const QuadratureSpectrum& spec, bool self_check) {
    const FiniteVessel v = build_discrete_vessel(spec.as_discrete(), self_check);
    return FiniteVessel(VesselKind::quadrature, v.A(), [v](double x, double t) { return v.B(x, t); },
                        [v](double x, double t) { return v.X(x, t); }, v.X0());
}

double fixed_vector_residual(const FiniteVessel& vessel, double x) {
    if (vessel.kind() != VesselKind::discrete && vessel.kind() != VesselKind::quadrature)
        throw InvalidArgument("fixed_vector_residual: requires a discrete or quadrature vessel");
    const CVector v = vessel.B(x, 0.0).col(0);
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    return (vessel.X(x, 0.0) * v - v).norm() / nv;
}

double beta_odd(const DiscreteSpectrum& spec, double x) {
    spec.validate();
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.k.size(); ++i) {
        const double s = std::sin(spec.k[i] * x) / spec.k[i];
        sum += std::norm(spec.b[i]) * s * s;
    }
    return sum;
}

double beta_odd_continuum(const QuadratureSpectrum& spec, double x) { return beta_odd(spec.as_discrete(), x); }

double q_odd_continuum(const QuadratureSpectrum& spec, double x) {
    spec.validate();
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
        const double s = spec.nodes[i];
        sum += spec.weights[i] * std::norm(spec.density(s)) * std::sin(2.0 * s * x) / s;
    }
    return 2.0 * sum;
}

}  // namespace kdv
