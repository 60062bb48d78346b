#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kdv/grid.hpp"

namespace kdv {

enum class Axis { x, t };

/// Real samples on a Grid2D, stored t-major (index j * nx + i). Cells whose
/// value is undefined (stencil boundary, non-finite sample) are invalid.
struct SampledField {
    Grid2D grid;
    std::vector<double> values;
    std::vector<char> valid;
    std::string label;

    static SampledField zeros(const Grid2D& grid, std::string label);

    std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(j) * grid.nx + i; }
    double at(int i, int j) const { return values[index(i, j)]; }
    bool is_valid(int i, int j) const { return valid[index(i, j)] != 0; }
    std::size_t valid_count() const;
};

/// Samples fn(x, t) over the grid, splitting t-rows across `threads` workers.
SampledField sample_field(const Grid2D& grid, const std::function<double(double, double)>& fn, std::string label,
                          int threads = 1);

/// Centered derivative of order 1..3 with accuracy 2 or 4; cells whose
/// stencil leaves the grid or touches an invalid cell are invalid.
SampledField fd_derivative(const SampledField& field, Axis axis, int order, int accuracy);

/// q_t + (3/2) q q_x - (1/4) q_xxx.
SampledField kdv_residual(const SampledField& q, int accuracy);

/// 4 beta_t + 6 beta_x^2 - beta_xxx.
SampledField beta_pde_residual(const SampledField& beta, int accuracy);

/// 2 beta_x.
SampledField q_from_beta(const SampledField& beta, int accuracy = 2);

/// Largest |value| over valid cells, optionally restricted to a box.
double max_abs_valid(const SampledField& field);
double max_abs_valid(const SampledField& field, double x_lo, double x_hi, double t_lo, double t_hi);

struct ConvergenceOrder {
    double order = 0.0;
    bool at_floor = false;  ///< the finer residual is at the roundoff floor
};

/// log2(res_h / res_h2). Throws InvalidArgument on nonpositive input.
ConvergenceOrder convergence_order(double res_h, double res_h2, double floor = 1e-13);

}  // namespace kdv
