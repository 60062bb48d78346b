#pragma once

// Independent reference computations shared by the unit tests.

#include <cmath>
#include <functional>
#include <vector>

#include "kdv/types.hpp"

namespace oracle {

// Determinant by cofactor expansion along the first row.
inline kdv::Complex cofactor_det(const kdv::CMatrix& m) {
    const auto n = m.rows();
    if (n == 1) return m(0, 0);
    kdv::Complex sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        kdv::CMatrix minor(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r)
            for (Eigen::Index c = 0, cc = 0; c < n; ++c)
                if (c != j) minor(r - 1, cc++) = m(r, c);
        sum += (j % 2 == 0 ? 1.0 : -1.0) * m(0, j) * cofactor_det(minor);
    }
    return sum;
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

inline kdv::CMatrix simpson(const std::function<kdv::CMatrix(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    kdv::CMatrix s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * (h / 3.0);
}

}  // namespace oracle
