#include "kdv/grid.hpp"

#include <cmath>
#include <string>

#include "kdv/types.hpp"

namespace kdv {

void Grid1D::validate(int min_points) const {
    if (n < min_points) throw InvalidArgument("grid needs at least " + std::to_string(min_points) + " points");
    if (!(max > min) || !std::isfinite(min) || !std::isfinite(max))
        throw InvalidArgument("grid bounds must be finite with max > min");
}

void Grid2D::validate(int min_points) const {
    if (nx < min_points || nt < min_points)
        throw InvalidArgument("grid needs at least " + std::to_string(min_points) + " points per axis");
    if (!(x_max > x_min) || !(t_max > t_min) || !std::isfinite(x_min) || !std::isfinite(x_max) ||
        !std::isfinite(t_min) || !std::isfinite(t_max))
        throw InvalidArgument("grid bounds must be finite with max > min");
}

}  // namespace kdv
