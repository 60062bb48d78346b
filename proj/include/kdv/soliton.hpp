#pragma once

#include <vector>

#include "kdv/vessel.hpp"

namespace kdv {

/// n-soliton data: distinct positive wavenumbers k and nonzero amplitudes b.
struct SolitonSpec {
    std::vector<double> k;
    std::vector<Complex> b;

    /// Builds b_i = sqrt(2 k_i c_i) from the tau weights c_i = |b_i|^2 / (2 k_i).
    static SolitonSpec from_weights(std::vector<double> k, const std::vector<double>& c);

    std::size_t size() const noexcept { return k.size(); }
    double weight(std::size_t i) const { return std::norm(b[i]) / (2.0 * k[i]); }
    /// Throws InvalidArgument if any invariant fails.
    void validate() const;
};

/**
 * A = diag(-i k_j^2),
 * B(x,t) = diag(e^{k_j x + k_j^3 t} b_j) [1, i k_j],
 * X(x,t) = I + [e^{(k_i+k_j)x + (k_i^3+k_j^3)t} b_i conj(b_j) / (k_i + k_j)],
 * with X0 = I. With `self_check` the Lyapunov identity is verified at 50
 * pseudo-random points before returning.
 */
FiniteVessel build_soliton(const SolitonSpec& spec, bool self_check = true);

/// Closed-form three-soliton tau via the Cauchy determinant expansion.
double tau_cauchy_3(const SolitonSpec& spec, double x, double t);

/// log det X(x,t), stable for arbitrarily large exponents.
double soliton_log_tau(const SolitonSpec& spec, double x, double t);

/// beta = -d/dx log tau, evaluated analytically.
double soliton_beta(const SolitonSpec& spec, double x, double t);

/// q = -2 d^2/dx^2 log tau, evaluated analytically.
double q_soliton(const SolitonSpec& spec, double x, double t);

/// -2 k^2 sech^2(k x + k^3 t + ln(c)/2).
double one_soliton_reference(double k, double c, double x, double t);

}  // namespace kdv
