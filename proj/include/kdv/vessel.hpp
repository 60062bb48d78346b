#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "kdv/sl_parameters.hpp"
#include "kdv/types.hpp"

namespace kdv {

enum class VesselKind { soliton, discrete, quadrature, tabulated };

std::string_view to_string(VesselKind kind);

/// Matrix-valued function of (x, t).
using MatrixField = std::function<CMatrix(double x, double t)>;

/**
 * A finite-dimensional realization (A, B(x,t), X(x,t)) with reference X0.
 *
 * B is n x 2, X is n x n Hermitian. Evaluators are captured by value and
 * must not mutate shared state, so a vessel can be evaluated from several
 * threads at once. Tabulated vessels only depend on x; `evolves_in_time()`
 * is false for them and time derivatives are not defined.
 */
class FiniteVessel {
   public:
    FiniteVessel(VesselKind kind, CMatrix A, MatrixField B, MatrixField X, CMatrix X0,
                 bool evolves_in_time = true);

    Eigen::Index dim() const noexcept { return A_.rows(); }
    VesselKind kind() const noexcept { return kind_; }
    bool evolves_in_time() const noexcept { return evolves_in_time_; }

    const CMatrix& A() const noexcept { return A_; }
    const CMatrix& X0() const noexcept { return X0_; }
    CMatrix B(double x, double t) const { return B_(x, t); }
    CMatrix X(double x, double t) const { return X_(x, t); }

   private:
    VesselKind kind_;
    CMatrix A_;
    MatrixField B_;
    MatrixField X_;
    CMatrix X0_;
    bool evolves_in_time_;
};

/// Numerical thresholds used when evaluating a vessel.
struct Tolerances {
    double hermitian_asymmetry = 1e-12;  ///< relative to 1 + |X|
    double beta_imaginary = 1e-10;       ///< relative to 1 + |beta|
    double tau_imaginary = 1e-10;
    double singular_rcond = 1e-13;  ///< after symmetric diagonal scaling
    double zero_eigenvalue = 1e-12;  ///< relative to |X|, for inertia
};

/// det(X0^{-1} X) carried as log-magnitude and sign.
struct TauValue {
    double log_abs = 0.0;
    int sign = 1;

    /// Throws OverflowError when exp(log_abs) is not representable.
    double value() const;
};

/// Everything derived from one (x, t) sample of a vessel.
struct EvaluatedState {
    double x = 0.0;
    double t = 0.0;
    CMatrix B;
    CMatrix X;     ///< symmetrized (X + X*)/2
    CMatrix Xinv;
    Matrix2c gram;  ///< B* X^{-1} B
    Matrix2c gamma_star;
    double beta = 0.0;
    TauValue tau;
};

/// Evaluates B, X, X^{-1}, gamma_*, beta and tau at (x, t).
/// Throws SingularMatrixError when X is (numerically) singular.
EvaluatedState evaluate(const FiniteVessel& vessel, double x, double t, const Tolerances& tol = {});

/// gamma + sigma2 B* X^{-1} B sigma1 - sigma1 B* X^{-1} B sigma2.
Matrix2c linkage_gamma_star(const CMatrix& B, const CMatrix& Xinv);

/// beta = -[1 0] B* X^{-1} B [1 0]^T. Throws NumericalError if the value is
/// not real within tolerance.
double beta_of_state(const CMatrix& B, const CMatrix& Xinv, double imag_tol = 1e-10);

/// q = 2 beta' using the linkage identity beta' = beta^2 - 2 Im (B*X^{-1}B)_{12},
/// valid for any vessel whose B obeys the translation condition.
double q_from_linkage(const EvaluatedState& state);

TauValue log_tau(const FiniteVessel& vessel, double x, double t);

/// det(X0^{-1} X(x,t)); throws OverflowError when the value exceeds double
/// range (use log_tau instead).
double tau(const FiniteVessel& vessel, double x, double t);

/// |A X + X A* + B sigma1 B*|_F / (1 + |X|_F).
double lyapunov_residual(const FiniteVessel& vessel, double x, double t);

/// |tr(sigma1 B* X^{-1} B)|.
double normalization_residual(const FiniteVessel& vessel, double x, double t);

struct ResidualReport {
    double r_DB = 0.0;
    double r_DX = 0.0;
    std::optional<double> r_DBt;  ///< empty for x-only (tabulated) vessels
    std::optional<double> r_DXt;
    double r_lyapunov = 0.0;
    double r_normalization = 0.0;
    double h = 0.0;
    int accuracy = 2;

    /// Largest of the four differential residuals that are defined.
    double max_differential() const;
};

/**
 * Centered finite-difference residuals of the translation and evolution
 * conditions at (x, t):
 *   d/dx(B sigma1) + A B sigma2 + B gamma,   d/dx X - B sigma2 B*,
 *   d/dt B - i A d/dx B,   d/dt X - (i A B sigma2 B* - i B sigma2 B* A* + i B gamma B*).
 * `accuracy` 2 uses the x+-h, t+-h stencil; 4 adds the +-2h points.
 */
ResidualReport evolution_residuals(const FiniteVessel& vessel, double x, double t, double h,
                                   int accuracy = 2);

struct Inertia {
    int positive = 0;
    int negative = 0;

    bool dissipative() const noexcept { return negative == 0; }
    /// Number of negative squares (Pontryagin index).
    int kappa() const noexcept { return negative; }
};

/// Eigenvalue sign counts of a Hermitian matrix. Rejects (near-)zero
/// eigenvalues with NumericalError.
Inertia inertia(const CMatrix& X, const Tolerances& tol = {});

namespace detail {

struct HermitianInverse {
    CMatrix inverse;
    double log_abs_det = 0.0;
    Complex phase = 1.0;  ///< det / |det|, real up to roundoff for Hermitian input
};

/// Inverts a Hermitian matrix after symmetric diagonal scaling; returns
/// std::nullopt if the scaled reciprocal condition estimate is below `rcond_min`.
std::optional<HermitianInverse> invert_hermitian(const CMatrix& X, double rcond_min);

/// Centered first derivative of a matrix-valued function of one variable.
CMatrix central_difference(const std::function<CMatrix(double)>& f, double at, double h, int accuracy);

}  // namespace detail

}  // namespace kdv
