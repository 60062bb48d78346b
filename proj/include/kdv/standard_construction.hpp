#pragma once

#include "kdv/grid.hpp"
#include "kdv/vessel.hpp"

namespace kdv {

/**
 * Builds an x-only vessel from (A, B0, X0) at x0 by integrating
 *   0 = d/dx(B sigma1) + A B sigma2 + B gamma,   B(x0) = B0,
 *   d/dx X = B sigma2 B*,                          X(x0) = X0,
 * with classical RK4 on the grid (optionally `substeps` per cell). Between
 * grid nodes B and X are reconstructed by cubic Hermite interpolation using
 * the exact node derivatives, so the tabulated vessel is fourth-order accurate.
 *
 * Requires A X0 + X0 A* + B0 sigma1 B0* = 0 (relative 1e-10) and x0 on the grid.
 * Throws SingularMatrixError when X loses invertibility at a node, and
 * NumericalError when the Lyapunov identity drifts above 1e-8.
 */
FiniteVessel integrate_standard_construction(const CMatrix& A, const CMatrix& B0, const CMatrix& X0, double x0,
                                             const Grid1D& grid, int substeps = 1);

}  // namespace kdv
