#pragma once

#include <cstddef>
#include <vector>

#include "kdv/spectral.hpp"

namespace kdv {

/**
 * Symmetric arithmetic lattice {m k0 : 0 < |m| <= M}. Members are stored in
 * increasing order (-M .. -1, 1 .. M). For each member N the ordered pairs
 * (n, m) with n + m = N are precomputed with integer arithmetic; ordered
 * pairs whose sum is nonzero and leaves the lattice are counted as dropped.
 */
class Lattice {
   public:
    struct Pair {
        std::size_t n;
        std::size_t m;
    };

    Lattice(double k0, int M);

    double k0() const noexcept { return k0_; }
    int M() const noexcept { return M_; }
    std::size_t size() const noexcept { return members_.size(); }
    int member(std::size_t pos) const { return members_.at(pos); }
    double k(std::size_t pos) const { return members_.at(pos) * k0_; }
    /// Position of integer member m, or -1 if m is not in the lattice.
    std::ptrdiff_t position(int m) const noexcept;
    /// Position of -member(pos).
    std::size_t mirror(std::size_t pos) const { return members_.size() - 1 - pos; }

    const std::vector<Pair>& pairs(std::size_t pos) const { return pairs_.at(pos); }
    std::size_t kept_pairs() const noexcept { return kept_; }
    std::size_t dropped_pairs() const noexcept { return dropped_; }
    double dropped_fraction() const noexcept;
    bool symmetric() const;

   private:
    double k0_;
    int M_;
    std::vector<int> members_;
    std::vector<std::vector<Pair>> pairs_;
    std::size_t kept_ = 0;
    std::size_t dropped_ = 0;
};

Lattice make_lattice(double k0, int M);

/// dp_N/dt = -(3/2) k_N^2 sum_{n+m=N} p_n p_m / (k_n k_m) cos(6 k_n k_m k_N t).
std::vector<double> dbnt_rhs(const Lattice& lattice, const std::vector<double>& p, double t);

/// |sum_N (dp_N/dt) / k_N^2|.
double conservation_residual(const Lattice& lattice, const std::vector<double>& p, double t);

/// max_N |p_N - p_{-N}|.
double mirror_asymmetry(const Lattice& lattice, const std::vector<double>& p);

struct IntegrationOptions {
    int substeps = 1;  ///< RK4 steps between consecutive output times
    double conservation_tol = 1e-9;
    /// Throw on a conservation breach; otherwise only record it.
    bool enforce_conservation = true;
};

struct BTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> p;
    /// Largest conservation residual seen since the previous output time.
    std::vector<double> conservation;
    std::vector<double> asymmetry;

    double max_conservation() const;
    double max_asymmetry() const;
};

/// Classical RK4 on the p_N system. Throws NumericalError when some p_N drops
/// below -1e-12 or, if enforced, when conservation is breached.
BTrajectory integrate_b(const Lattice& lattice, const std::vector<double>& p0, const std::vector<double>& t_grid,
                        const IntegrationOptions& options = {});

/// sum_N p_N(t) sin^2(k_N x - k_N^3 t) / k_N^2, with p linearly interpolated
/// between stored times (second-order accurate in the output spacing).
double beta_from_b(const Lattice& lattice, const BTrajectory& traj, double x, double t);

/// Spectrum over the positive members with |b_m|^2 = p_m + p_{-m}, so that
/// beta_odd of it equals the lattice sum at t = 0.
DiscreteSpectrum folded_spectrum(const Lattice& lattice, const std::vector<double>& p);

}  // namespace kdv
