#include "kdv/soliton.hpp"

#include <cmath>
#include <random>

namespace kdv {

SolitonSpec SolitonSpec::from_weights(std::vector<double> k, const std::vector<double>& c) {
    if (k.size() != c.size()) throw InvalidArgument("soliton: k and c have different lengths");
    SolitonSpec spec;
    spec.b.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!(c[i] > 0.0)) throw InvalidArgument("soliton: weight c[" + std::to_string(i) + "] must be positive");
        if (!(k[i] > 0.0)) throw InvalidArgument("soliton: k[" + std::to_string(i) + "] must be positive");
        spec.b.emplace_back(std::sqrt(2.0 * k[i] * c[i]), 0.0);
    }
    spec.k = std::move(k);
    spec.validate();
    return spec;
}

void SolitonSpec::validate() const {
    if (k.empty()) throw InvalidArgument("soliton: at least one wavenumber is required");
    if (k.size() != b.size()) throw InvalidArgument("soliton: k and b have different lengths");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!(k[i] > 0.0) || !std::isfinite(k[i]))
            throw InvalidArgument("soliton: k[" + std::to_string(i) + "] must be positive and finite");
        if (b[i] == Complex{} || !std::isfinite(std::abs(b[i])))
            throw InvalidArgument("soliton: b[" + std::to_string(i) + "] must be nonzero and finite");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(k[i] - k[j]) <= 1e-12 * std::max(k[i], k[j]))
                throw InvalidArgument("soliton: k[" + std::to_string(j) + "] and k[" + std::to_string(i) +
                                      "] coincide");
    }
}

FiniteVessel build_soliton(const SolitonSpec& spec, bool self_check) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.size());
    Eigen::VectorXd k(n);
    CVector b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i) = spec.k[i];
        b(i) = spec.b[i];
    }
    CMatrix A = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) A(i, i) = Complex(0.0, -k(i) * k(i));

    auto B = [k, b](double x, double t) {
        const Eigen::Index m = k.size();
        CMatrix out(m, 2);
        for (Eigen::Index j = 0; j < m; ++j) {
            const Complex d = std::exp(k(j) * x + k(j) * k(j) * k(j) * t) * b(j);
            out(j, 0) = d;
            out(j, 1) = I_unit * k(j) * d;
        }
        return out;
    };
    auto X = [k, b](double x, double t) {
        const Eigen::Index m = k.size();
        CVector d(m);
        for (Eigen::Index j = 0; j < m; ++j) d(j) = std::exp(k(j) * x + k(j) * k(j) * k(j) * t) * b(j);
        CMatrix out = CMatrix::Identity(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) out(i, j) += d(i) * std::conj(d(j)) / (k(i) + k(j));
        return out;
    };

    FiniteVessel vessel(VesselKind::soliton, std::move(A), B, X, CMatrix::Identity(n, n));
    if (self_check) {
        std::mt19937_64 rng(0x5eed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            const double x = u(rng), t = u(rng);
            const double r = lyapunov_residual(vessel, x, t);
            if (!(r < 1e-12))
                throw NumericalError("soliton self-check: Lyapunov residual " + std::to_string(r) + " at x=" +
                                     std::to_string(x) + ", t=" + std::to_string(t));
        }
    }
    return vessel;
}

double tau_cauchy_3(const SolitonSpec& spec, double x, double t) {
    spec.validate();
    if (spec.size() != 3) throw InvalidArgument("tau_cauchy_3 requires exactly three solitons");
    const auto& k = spec.k;
    auto a = [&](int i, int j) {
        const double r = (k[i] - k[j]) / (k[i] + k[j]);
        return r * r;
    };
    double c[3], e[3];
    for (int i = 0; i < 3; ++i) {
        c[i] = spec.weight(i);
        e[i] = std::exp(2.0 * k[i] * x + 2.0 * k[i] * k[i] * k[i] * t);
    }
    double sum = 1.0;
    for (int i = 0; i < 3; ++i) sum += c[i] * e[i];
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) sum += c[i] * c[j] * a(i, j) * e[i] * e[j];
    sum += c[0] * c[1] * c[2] * a(0, 1) * a(0, 2) * a(1, 2) * e[0] * e[1] * e[2];
    return sum;
}

namespace {

// X = G N G with G = diag(g), g_i = max(1, |d_i|), d_i = e^{theta_i} b_i. The
// representation is fixed in a neighbourhood of x, so derivatives of N are
// exact and log g_i is linear in x wherever g_i != 1.
struct Balanced {
    CMatrix N, dN, d2N;
    double log_scale = 0.0;   // sum of 2 log g_i
    double dlog_scale = 0.0;  // its x-derivative
};

Balanced balance(const SolitonSpec& spec, double x, double t) {
    const auto n = static_cast<Eigen::Index>(spec.size());
    Eigen::VectorXd p(n), dp(n), d2p(n), kappa(n);
    CVector f(n);
    Balanced out;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double k = spec.k[i];
        const double theta = k * x + k * k * k * t;
        const double log_mod = theta + std::log(std::abs(spec.b[i]));
        if (log_mod > 0.0) {
            p(i) = std::exp(-2.0 * log_mod);
            dp(i) = -2.0 * k * p(i);
            d2p(i) = 4.0 * k * k * p(i);
            f(i) = spec.b[i] / std::abs(spec.b[i]);
            kappa(i) = 0.0;
            out.log_scale += 2.0 * log_mod;
            out.dlog_scale += 2.0 * k;
        } else {
            p(i) = 1.0;
            dp(i) = d2p(i) = 0.0;
            f(i) = std::exp(theta) * spec.b[i];
            kappa(i) = k;
        }
    }
    out.N.resize(n, n);
    out.dN.resize(n, n);
    out.d2N.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex g = f(i) * std::conj(f(j)) / (spec.k[i] + spec.k[j]);
            const double s = kappa(i) + kappa(j);
            out.N(i, j) = g;
            out.dN(i, j) = s * g;
            out.d2N(i, j) = s * s * g;
        }
    out.N.diagonal() += p.cast<Complex>();
    out.dN.diagonal() += dp.cast<Complex>();
    out.d2N.diagonal() += d2p.cast<Complex>();
    return out;
}

Eigen::LLT<CMatrix> factor(const CMatrix& N, double x, double t) {
    Eigen::LLT<CMatrix> llt(N);
    if (llt.info() != Eigen::Success) throw SingularMatrixError(x, t, "soliton: X is not positive definite");
    return llt;
}

}  // namespace

double soliton_log_tau(const SolitonSpec& spec, double x, double t) {
    spec.validate();
    const Balanced bal = balance(spec, x, t);
    const auto llt = factor(bal.N, x, t);
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < bal.N.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i).real());
    return bal.log_scale + logdet;
}

double soliton_beta(const SolitonSpec& spec, double x, double t) {
    spec.validate();
    const Balanced bal = balance(spec, x, t);
    const auto llt = factor(bal.N, x, t);
    const CMatrix Y = llt.solve(bal.dN);
    return -(bal.dlog_scale + Y.trace().real());
}

double q_soliton(const SolitonSpec& spec, double x, double t) {
    spec.validate();
    const Balanced bal = balance(spec, x, t);
    const auto llt = factor(bal.N, x, t);
    const CMatrix Y1 = llt.solve(bal.dN);
    const CMatrix Y2 = llt.solve(bal.d2N);
    return -2.0 * (Y2.trace().real() - (Y1 * Y1).trace().real());
}

double one_soliton_reference(double k, double c, double x, double t) {
    if (!(k > 0.0) || !(c > 0.0)) throw InvalidArgument("one_soliton_reference: k and c must be positive");
    const double sech = 1.0 / std::cosh(k * x + k * k * k * t + 0.5 * std::log(c));
    return -2.0 * k * k * sech * sech;
}

}  // namespace kdv
