#pragma once

#include <vector>

#include "kdv/grid.hpp"
#include "kdv/vessel.hpp"

namespace kdv {

/**
 * S(lambda) = I - B* X^{-1} (lambda I - A)^{-1} B sigma1 at a fixed (x, t).
 * The state and B* X^{-1} are computed once; each lambda costs one LU solve.
 */
class TransferFunction {
   public:
    TransferFunction(const FiniteVessel& vessel, double x, double t, const Tolerances& tol = {});

    /// Throws PoleError when lambda is within 1e-10 of an eigenvalue of A.
    Matrix2c operator()(Complex lambda) const;

    const EvaluatedState& state() const noexcept { return state_; }
    const std::vector<Complex>& poles() const noexcept { return poles_; }

   private:
    CMatrix A_;
    EvaluatedState state_;
    CMatrix left_;  // B* X^{-1}
    std::vector<Complex> poles_;
};

Matrix2c eval_S(const FiniteVessel& vessel, Complex lambda, double x, double t);

/// |S*(-conj(lambda)) sigma1 S(lambda) - sigma1|_F.
double symmetry_residual(const FiniteVessel& vessel, Complex lambda, double x, double t);

/// |dS/dx - sigma1 (lambda sigma2 + gamma_*) S + S sigma1 (lambda sigma2 + gamma)|_F
/// with a centered x-difference.
double ds_residual(const FiniteVessel& vessel, Complex lambda, double x, double t, double h, int accuracy = 2);

/**
 * Maps u1 = e^{omega x}, u2 = -i omega u1 (omega^2 = i lambda, principal
 * branch) through y = S(lambda, x, t) u and returns the largest interior value
 * of |-y1'' + 2 beta' y1 + i lambda y1|, both derivatives by second-order
 * centered differences on the grid.
 */
double intertwining_residual(const FiniteVessel& vessel, Complex lambda, const Grid1D& x_grid, double t);

/// H_n = B* X^{-1} A^n B sigma1 for n = 0..nmax.
std::vector<Matrix2c> moments(const FiniteVessel& vessel, double x, double t, int nmax);

/// Largest residual of the four relations linking H_{n+1} to H_n and beta,
/// with x-derivatives by centered differences of step h.
double moment_recursion_residual(const FiniteVessel& vessel, double x, double t, int n, double h = 1e-4);

struct GLKernels {
    Complex omega;  ///< [1 0] B*(x) X(x0)^{-1} B(y) [1 0]^T
    Complex K;      ///< -[1 0] B*(x) X(x)^{-1} B(y) [1 0]^T
};

GLKernels gl_kernels(const FiniteVessel& vessel, double x0, double x, double y, double t = 0.0);

/// |K(x,y) + Omega(x,y) + int_{x0}^{x} K(x,s) Omega(s,y) ds| by composite
/// Simpson on `nodes` (odd, >= 3) uniform nodes. Requires x > y.
double gl_residual(const FiniteVessel& vessel, double x0, double x, double y, int nodes, double t = 0.0);

struct KDiagPotential {
    double value = 0.0;  ///< candidate closest to the reference
    int sign = 1;
    double plus = 0.0;   ///< +2 d/dx K(x,x)
    double minus = 0.0;  ///< -2 d/dx K(x,x)
    double reference = 0.0;  ///< 2 beta' from the linkage identity
};

KDiagPotential q_from_K_diag(const FiniteVessel& vessel, double x, double h, double t = 0.0);

}  // namespace kdv
