#include "kdv/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <span>
#include <thread>

#include "kdv/types.hpp"

namespace kdv {

SampledField SampledField::zeros(const Grid2D& grid, std::string label) {
    grid.validate(2);
    const auto n = static_cast<std::size_t>(grid.nx) * grid.nt;
    return {grid, std::vector<double>(n, 0.0), std::vector<char>(n, 1), std::move(label)};
}

std::size_t SampledField::valid_count() const { return std::count(valid.begin(), valid.end(), 1); }

SampledField sample_field(const Grid2D& grid, const std::function<double(double, double)>& fn, std::string label,
                          int threads) {
    SampledField f = SampledField::zeros(grid, std::move(label));
    auto rows = [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                const double v = fn(grid.x(i), grid.t(j));
                f.values[f.index(i, j)] = v;
                f.valid[f.index(i, j)] = std::isfinite(v);
            }
    };
    threads = std::clamp(threads, 1, grid.nt);
    if (threads == 1) {
        rows(0, grid.nt);
        return f;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w) {
        const int j0 = grid.nt * w / threads, j1 = grid.nt * (w + 1) / threads;
        pool.emplace_back([&, w, j0, j1] {
            try {
                rows(j0, j1);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return f;
}

namespace {

// Centered stencil weights for offsets -r..r.
std::span<const double> stencil(int order, int accuracy) {
    static constexpr std::array<double, 3> d1a2{-0.5, 0.0, 0.5};
    static constexpr std::array<double, 5> d1a4{1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    static constexpr std::array<double, 3> d2a2{1.0, -2.0, 1.0};
    static constexpr std::array<double, 5> d2a4{-1.0 / 12, 4.0 / 3, -2.5, 4.0 / 3, -1.0 / 12};
    static constexpr std::array<double, 5> d3a2{-0.5, 1.0, 0.0, -1.0, 0.5};
    static constexpr std::array<double, 7> d3a4{0.125, -1.0, 1.625, 0.0, -1.625, 1.0, -0.125};
    if (accuracy != 2 && accuracy != 4) throw InvalidArgument("fd_derivative: accuracy must be 2 or 4");
    switch (order) {
        case 1: return accuracy == 2 ? std::span<const double>(d1a2) : std::span<const double>(d1a4);
        case 2: return accuracy == 2 ? std::span<const double>(d2a2) : std::span<const double>(d2a4);
        case 3: return accuracy == 2 ? std::span<const double>(d3a2) : std::span<const double>(d3a4);
        default: throw InvalidArgument("fd_derivative: order must be 1, 2 or 3");
    }
}

}  // namespace

SampledField fd_derivative(const SampledField& field, Axis axis, int order, int accuracy) {
    const auto w = stencil(order, accuracy);
    const int r = static_cast<int>(w.size()) / 2;
    const Grid2D& g = field.grid;
    const int len = axis == Axis::x ? g.nx : g.nt;
    if (len < 2 * r + 1) throw InvalidArgument("fd_derivative: grid too small for the stencil");
    const double h = axis == Axis::x ? g.hx() : g.ht();
    const double scale = 1.0 / std::pow(h, order);

    SampledField out = SampledField::zeros(g, "d" + std::to_string(order) + (axis == Axis::x ? "x " : "t ") + field.label);
    for (int j = 0; j < g.nt; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int c = axis == Axis::x ? i : j;
            bool ok = c - r >= 0 && c + r < len;
            double sum = 0.0;
            for (int o = -r; ok && o <= r; ++o) {
                const int ii = axis == Axis::x ? i + o : i, jj = axis == Axis::x ? j : j + o;
                if (!field.is_valid(ii, jj)) ok = false;
                else sum += w[o + r] * field.at(ii, jj);
            }
            out.values[out.index(i, j)] = ok ? sum * scale : 0.0;
            out.valid[out.index(i, j)] = ok;
        }
    return out;
}

SampledField kdv_residual(const SampledField& q, int accuracy) {
    const auto qt = fd_derivative(q, Axis::t, 1, accuracy);
    const auto qx = fd_derivative(q, Axis::x, 1, accuracy);
    const auto qxxx = fd_derivative(q, Axis::x, 3, accuracy);
    SampledField out = SampledField::zeros(q.grid, "kdv residual of " + q.label);
    for (std::size_t c = 0; c < out.values.size(); ++c) {
        out.valid[c] = qt.valid[c] && qx.valid[c] && qxxx.valid[c];
        out.values[c] = out.valid[c] ? qt.values[c] + 1.5 * q.values[c] * qx.values[c] - 0.25 * qxxx.values[c] : 0.0;
    }
    return out;
}

SampledField beta_pde_residual(const SampledField& beta, int accuracy) {
    const auto bt = fd_derivative(beta, Axis::t, 1, accuracy);
    const auto bx = fd_derivative(beta, Axis::x, 1, accuracy);
    const auto bxxx = fd_derivative(beta, Axis::x, 3, accuracy);
    SampledField out = SampledField::zeros(beta.grid, "beta residual of " + beta.label);
    for (std::size_t c = 0; c < out.values.size(); ++c) {
        out.valid[c] = bt.valid[c] && bx.valid[c] && bxxx.valid[c];
        out.values[c] =
            out.valid[c] ? 4.0 * bt.values[c] + 6.0 * bx.values[c] * bx.values[c] - bxxx.values[c] : 0.0;
    }
    return out;
}

SampledField q_from_beta(const SampledField& beta, int accuracy) {
    SampledField q = fd_derivative(beta, Axis::x, 1, accuracy);
    for (auto& v : q.values) v *= 2.0;
    q.label = "q from " + beta.label;
    return q;
}

double max_abs_valid(const SampledField& field) {
    double m = 0.0;
    for (std::size_t c = 0; c < field.values.size(); ++c)
        if (field.valid[c]) m = std::max(m, std::abs(field.values[c]));
    return m;
}

double max_abs_valid(const SampledField& field, double x_lo, double x_hi, double t_lo, double t_hi) {
    const double ex = 1e-9 * field.grid.hx(), et = 1e-9 * field.grid.ht();
    double m = 0.0;
    for (int j = 0; j < field.grid.nt; ++j) {
        const double t = field.grid.t(j);
        if (t < t_lo - et || t > t_hi + et) continue;
        for (int i = 0; i < field.grid.nx; ++i) {
            const double x = field.grid.x(i);
            if (x < x_lo - ex || x > x_hi + ex || !field.is_valid(i, j)) continue;
            m = std::max(m, std::abs(field.at(i, j)));
        }
    }
    return m;
}

ConvergenceOrder convergence_order(double res_h, double res_h2, double floor) {
    if (!(res_h > 0.0) || !(res_h2 > 0.0)) throw InvalidArgument("convergence_order: residuals must be positive");
    return {std::log2(res_h / res_h2), res_h2 <= floor};
}

}  // namespace kdv
