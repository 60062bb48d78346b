#include "kdv/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kdv {

Lattice::Lattice(double k0, int M) : k0_(k0), M_(M) {
    if (!(k0 > 0.0) || !std::isfinite(k0)) throw InvalidArgument("lattice: k0 must be positive");
    if (M < 1) throw InvalidArgument("lattice: M must be at least 1");
    for (int m = -M; m <= M; ++m)
        if (m != 0) members_.push_back(m);
    pairs_.resize(members_.size());
    for (std::size_t a = 0; a < members_.size(); ++a)
        for (std::size_t b = 0; b < members_.size(); ++b) {
            const int s = members_[a] + members_[b];
            if (s == 0) continue;
            const auto pos = position(s);
            if (pos < 0) {
                ++dropped_;
            } else {
                pairs_[pos].push_back({a, b});
                ++kept_;
            }
        }
}

std::ptrdiff_t Lattice::position(int m) const noexcept {
    if (m == 0 || m < -M_ || m > M_) return -1;
    return m < 0 ? m + M_ : m + M_ - 1;
}

double Lattice::dropped_fraction() const noexcept {
    const std::size_t total = kept_ + dropped_;
    return total == 0 ? 0.0 : static_cast<double>(dropped_) / static_cast<double>(total);
}

bool Lattice::symmetric() const {
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (members_[mirror(i)] != -members_[i]) return false;
    return true;
}

Lattice make_lattice(double k0, int M) { return Lattice(k0, M); }

namespace {

void check_size(const Lattice& lattice, const std::vector<double>& p) {
    if (p.size() != lattice.size())
        throw InvalidArgument("lattice vector has " + std::to_string(p.size()) + " entries, expected " +
                              std::to_string(lattice.size()));
}

}  // namespace

std::vector<double> dbnt_rhs(const Lattice& lattice, const std::vector<double>& p, double t) {
    check_size(lattice, p);
    std::vector<double> out(p.size(), 0.0);
    for (std::size_t N = 0; N < p.size(); ++N) {
        const double kN = lattice.k(N);
        double sum = 0.0;
        for (const auto& [n, m] : lattice.pairs(N)) {
            const double kn = lattice.k(n), km = lattice.k(m);
            sum += p[n] * p[m] / (kn * km) * std::cos(6.0 * kn * km * kN * t);
        }
        out[N] = -1.5 * kN * kN * sum;
    }
    return out;
}

double conservation_residual(const Lattice& lattice, const std::vector<double>& p, double t) {
    const auto dp = dbnt_rhs(lattice, p, t);
    double sum = 0.0;
    for (std::size_t N = 0; N < dp.size(); ++N) sum += dp[N] / (lattice.k(N) * lattice.k(N));
    return std::abs(sum);
}

double mirror_asymmetry(const Lattice& lattice, const std::vector<double>& p) {
    check_size(lattice, p);
    double r = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) r = std::max(r, std::abs(p[i] - p[lattice.mirror(i)]));
    return r;
}

double BTrajectory::max_conservation() const {
    return conservation.empty() ? 0.0 : *std::max_element(conservation.begin(), conservation.end());
}

double BTrajectory::max_asymmetry() const {
    return asymmetry.empty() ? 0.0 : *std::max_element(asymmetry.begin(), asymmetry.end());
}

BTrajectory integrate_b(const Lattice& lattice, const std::vector<double>& p0, const std::vector<double>& t_grid,
                        const IntegrationOptions& options) {
    check_size(lattice, p0);
    if (t_grid.empty()) throw InvalidArgument("integrate_b: empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw InvalidArgument("integrate_b: time grid must be increasing");
    if (options.substeps < 1) throw InvalidArgument("integrate_b: substeps must be at least 1");
    for (std::size_t i = 0; i < p0.size(); ++i)
        if (!(p0[i] >= 0.0)) throw InvalidArgument("integrate_b: p0[" + std::to_string(i) + "] must be non-negative");
    if (mirror_asymmetry(lattice, p0) > 1e-12) throw InvalidArgument("integrate_b: p0 must satisfy p_N = p_{-N}");

    auto monitor = [&](const std::vector<double>& p, double t) {
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] < -1e-12)
                throw NumericalError("integrate_b: p[" + std::to_string(lattice.member(i)) +
                                     "] became negative at t=" + std::to_string(t));
        const double c = conservation_residual(lattice, p, t);
        if (options.enforce_conservation && c > options.conservation_tol)
            throw NumericalError("integrate_b: conservation residual " + std::to_string(c) + " at t=" +
                                 std::to_string(t));
        return c;
    };

    BTrajectory traj;
    std::vector<double> p = p0;
    traj.times.push_back(t_grid.front());
    traj.p.push_back(p);
    traj.conservation.push_back(monitor(p, t_grid.front()));
    traj.asymmetry.push_back(mirror_asymmetry(lattice, p));

    const std::size_t n = p.size();
    std::vector<double> tmp(n);
    auto axpy = [&](const std::vector<double>& k, double a) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + a * k[i];
        return tmp;
    };
    for (std::size_t j = 1; j < t_grid.size(); ++j) {
        const double h = (t_grid[j] - t_grid[j - 1]) / options.substeps;
        double worst = 0.0;
        for (int s = 0; s < options.substeps; ++s) {
            const double t = t_grid[j - 1] + s * h;
            const auto k1 = dbnt_rhs(lattice, p, t);
            const auto k2 = dbnt_rhs(lattice, axpy(k1, 0.5 * h), t + 0.5 * h);
            const auto k3 = dbnt_rhs(lattice, axpy(k2, 0.5 * h), t + 0.5 * h);
            const auto k4 = dbnt_rhs(lattice, axpy(k3, h), t + h);
            for (std::size_t i = 0; i < n; ++i) p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            const double t_next = s + 1 == options.substeps ? t_grid[j] : t + h;
            worst = std::max(worst, monitor(p, t_next));
        }
        traj.times.push_back(t_grid[j]);
        traj.p.push_back(p);
        traj.conservation.push_back(worst);
        traj.asymmetry.push_back(mirror_asymmetry(lattice, p));
    }
    return traj;
}

double beta_from_b(const Lattice& lattice, const BTrajectory& traj, double x, double t) {
    if (traj.times.empty()) throw InvalidArgument("beta_from_b: empty trajectory");
    if (t < traj.times.front() || t > traj.times.back())
        throw InvalidArgument("beta_from_b: t=" + std::to_string(t) + " outside the trajectory");
    auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
    std::size_t j = it == traj.times.end() ? traj.times.size() - 1 : static_cast<std::size_t>(it - traj.times.begin());
    if (j == 0) j = 1;
    std::vector<double> p;
    if (traj.times.size() == 1) {
        p = traj.p.front();
    } else {
        const double t0 = traj.times[j - 1], t1 = traj.times[j];
        const double w = (t - t0) / (t1 - t0);
        p.resize(lattice.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 - w) * traj.p[j - 1][i] + w * traj.p[j][i];
    }
    check_size(lattice, p);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double k = lattice.k(i);
        const double s = std::sin(k * x - k * k * k * t) / k;
        sum += p[i] * s * s;
    }
    return sum;
}

DiscreteSpectrum folded_spectrum(const Lattice& lattice, const std::vector<double>& p) {
    check_size(lattice, p);
    DiscreteSpectrum spec;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (lattice.member(i) < 0) continue;
        spec.k.push_back(lattice.k(i));
        spec.b.emplace_back(std::sqrt(std::max(0.0, p[i] + p[lattice.mirror(i)])), 0.0);
    }
    return spec;
}

}  // namespace kdv
