#include "kdv/standard_construction.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace kdv {

namespace {

struct Table {
    Grid1D grid;
    std::vector<CMatrix> B, dB, X, dX;

    // Cubic Hermite reconstruction on the cell containing x.
    CMatrix interpolate(const std::vector<CMatrix>& f, const std::vector<CMatrix>& df, double x) const {
        const double h = grid.spacing();
        const double slack = 1e-12 * (1.0 + std::abs(grid.min) + std::abs(grid.max));
        if (x < grid.min - slack || x > grid.max + slack)
            throw InvalidArgument("tabulated vessel evaluated outside its grid at x=" + std::to_string(x));
        int i = static_cast<int>(std::floor((x - grid.min) / h));
        i = std::clamp(i, 0, grid.n - 2);
        const double s = (x - grid.point(i)) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        return h00 * f[i] + (h10 * h) * df[i] + h01 * f[i + 1] + (h11 * h) * df[i + 1];
    }
};

struct Rhs {
    const CMatrix& A;

    CMatrix dB(const CMatrix& B) const {
        const auto& p = sl_parameters();
        return -(A * B * p.sigma2 + B * p.gamma) * p.sigma1;
    }
    CMatrix dX(const CMatrix& B) const { return B * sl_parameters().sigma2 * B.adjoint(); }
};

void rk4_step(const Rhs& f, CMatrix& B, CMatrix& X, double h) {
    const CMatrix kb1 = f.dB(B), kx1 = f.dX(B);
    const CMatrix B2 = B + 0.5 * h * kb1;
    const CMatrix kb2 = f.dB(B2), kx2 = f.dX(B2);
    const CMatrix B3 = B + 0.5 * h * kb2;
    const CMatrix kb3 = f.dB(B3), kx3 = f.dX(B3);
    const CMatrix B4 = B + h * kb3;
    const CMatrix kb4 = f.dB(B4), kx4 = f.dX(B4);
    B += (h / 6.0) * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
    X += (h / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
}

}  // namespace

FiniteVessel integrate_standard_construction(const CMatrix& A, const CMatrix& B0, const CMatrix& X0, double x0,
                                             const Grid1D& grid, int substeps) {
    grid.validate(2);
    const Eigen::Index n = A.rows();
    if (A.cols() != n || B0.rows() != n || B0.cols() != 2 || X0.rows() != n || X0.cols() != n)
        throw InvalidArgument("standard construction: inconsistent dimensions");
    if (substeps < 1) throw InvalidArgument("standard construction: substeps must be >= 1");
    if ((X0 - X0.adjoint()).norm() > 1e-12 * (1.0 + X0.norm()))
        throw InvalidArgument("standard construction: X0 is not Hermitian");
    if (!detail::invert_hermitian(X0, 1e-13)) throw InvalidArgument("standard construction: X0 is singular");

    const auto& p = sl_parameters();
    const double lyap0 = (A * X0 + X0 * A.adjoint() + B0 * p.sigma1 * B0.adjoint()).norm();
    if (lyap0 > 1e-10 * (1.0 + X0.norm()))
        throw InvalidArgument("standard construction: A X0 + X0 A* + B0 sigma1 B0* = " + std::to_string(lyap0) +
                              ", not zero");

    const double h = grid.spacing();
    const double k0 = (x0 - grid.min) / h;
    const int i0 = static_cast<int>(std::lround(k0));
    if (i0 < 0 || i0 >= grid.n || std::abs(grid.point(i0) - x0) > 1e-9 * h)
        throw InvalidArgument("standard construction: x0 is not a grid node");

    auto table = std::make_shared<Table>();
    table->grid = grid;
    table->B.resize(grid.n);
    table->X.resize(grid.n);
    table->dB.resize(grid.n);
    table->dX.resize(grid.n);
    table->B[i0] = B0;
    table->X[i0] = X0;

    const Rhs rhs{A};
    auto sweep = [&](int direction) {
        CMatrix B = B0, X = X0;
        const double step = direction * h / substeps;
        for (int i = i0 + direction; i >= 0 && i < grid.n; i += direction) {
            for (int s = 0; s < substeps; ++s) rk4_step(rhs, B, X, step);
            X = 0.5 * (X + X.adjoint());
            table->B[i] = B;
            table->X[i] = X;
        }
    };
    sweep(+1);
    sweep(-1);

    for (int i = 0; i < grid.n; ++i) {
        const double xi = grid.point(i);
        if (!detail::invert_hermitian(table->X[i], 1e-13))
            throw SingularMatrixError(xi, 0.0, "standard construction: X became singular");
        const double lyap = (A * table->X[i] + table->X[i] * A.adjoint() +
                             table->B[i] * p.sigma1 * table->B[i].adjoint())
                                .norm() /
                            (1.0 + table->X[i].norm());
        if (lyap > 1e-8)
            throw NumericalError("standard construction: Lyapunov identity drifted to " + std::to_string(lyap) +
                                 " at x=" + std::to_string(xi));
        table->dB[i] = rhs.dB(table->B[i]);
        table->dX[i] = rhs.dX(table->B[i]);
    }

    std::shared_ptr<const Table> t = table;
    return FiniteVessel(
        VesselKind::tabulated, A, [t](double x, double) { return t->interpolate(t->B, t->dB, x); },
        [t](double x, double) {
            CMatrix X = t->interpolate(t->X, t->dX, x);
            return CMatrix(0.5 * (X + X.adjoint()));
        },
        X0, false);
}

}  // namespace kdv
