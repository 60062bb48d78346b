#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "kdv/vessel.hpp"

namespace kdv {

struct AlmostPeriodic {};
/// Wavenumbers on the lattice 2 pi N / T.
struct Periodic {
    double T = 0.0;
};
using SpectrumFlavor = std::variant<AlmostPeriodic, Periodic>;

/// Truncated discrete spectrum: wavenumbers with pairwise distinct squares.
struct DiscreteSpectrum {
    std::vector<double> k;
    std::vector<Complex> b;
    SpectrumFlavor flavor = AlmostPeriodic{};

    void validate() const;
    /// max |b_n|^2 |k_n|, a proxy for the size of the truncated tail.
    double tail_proxy() const;
};

/**
 * A = diag(i k_n^2), B = diag(b_n) [sin(theta_n)/k_n, i cos(theta_n)],
 * theta_n = k_n x - k_n^3 t, X = I + [E(k_n, k_m) b_n conj(b_m)], X0 = I.
 */
FiniteVessel build_discrete_vessel(const DiscreteSpectrum& spec, bool self_check = true);

/// Gauss-Legendre nodes and weights on [a, b].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n, double a, double b);

using Density = std::function<Complex(double s)>;

/// a exp(-s^2 / (2 w^2)).
Density gaussian_density(double amplitude, double width);

/// Continuous spectrum on the positive imaginary axis mu = i s^2, sampled at
/// quadrature nodes.
struct QuadratureSpectrum {
    std::vector<double> nodes;
    std::vector<double> weights;
    Density density;

    static QuadratureSpectrum gauss(double s_max, int n, Density density);
    void validate() const;
    /// Equivalent discrete spectrum with sqrt(w_i) folded into the amplitudes.
    DiscreteSpectrum as_discrete() const;
};

FiniteVessel build_quadrature_vessel(const QuadratureSpectrum& spec, bool self_check = true);

/// |X(x,0) v - v| / |v| with v the first column of B(x,0); 0 when v = 0.
double fixed_vector_residual(const FiniteVessel& vessel, double x);

/// sum |b_n|^2 sin^2(k_n x) / k_n^2.
double beta_odd(const DiscreteSpectrum& spec, double x);
/// Quadrature form of integral |c(s)|^2 sin^2(s x) / s^2 ds.
double beta_odd_continuum(const QuadratureSpectrum& spec, double x);
/// 2 integral |c(s)|^2 sin(2 s x) / s ds.
double q_odd_continuum(const QuadratureSpectrum& spec, double x);

namespace detail {

/// Entry kernel of X for the sine/cosine generators. Even in both k arguments,
/// with the confluent limit on the diagonal.
double sine_kernel(double kn, double km, double x, double t);

}  // namespace detail

}  // namespace kdv
