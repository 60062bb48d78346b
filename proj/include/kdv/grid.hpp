#pragma once

namespace kdv {

/// Uniform grid of n points on [min, max].
struct Grid1D {
    double min = 0.0;
    double max = 1.0;
    int n = 2;

    double spacing() const noexcept { return (max - min) / (n - 1); }
    double point(int i) const noexcept { return i == n - 1 ? max : min + i * spacing(); }
    void validate(int min_points = 2) const;
};

/// Uniform tensor grid in (x, t).
struct Grid2D {
    double x_min = -1.0;
    double x_max = 1.0;
    int nx = 9;
    double t_min = 0.0;
    double t_max = 1.0;
    int nt = 9;

    double hx() const noexcept { return (x_max - x_min) / (nx - 1); }
    double ht() const noexcept { return (t_max - t_min) / (nt - 1); }
    double x(int i) const noexcept { return i == nx - 1 ? x_max : x_min + i * hx(); }
    double t(int j) const noexcept { return j == nt - 1 ? t_max : t_min + j * ht(); }
    Grid1D x_axis() const noexcept { return {x_min, x_max, nx}; }
    Grid1D t_axis() const noexcept { return {t_min, t_max, nt}; }
    /// Requires at least `min_points` per axis and positive spacing.
    void validate(int min_points = 9) const;
};

}  // namespace kdv
