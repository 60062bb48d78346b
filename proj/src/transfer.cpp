#include "kdv/transfer.hpp"

#include <cmath>
#include <limits>

namespace kdv {

TransferFunction::TransferFunction(const FiniteVessel& vessel, double x, double t, const Tolerances& tol)
    : A_(vessel.A()), state_(evaluate(vessel, x, t, tol)) {
    left_ = state_.B.adjoint() * state_.Xinv;
    Eigen::ComplexEigenSolver<CMatrix> es(A_, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) poles_.push_back(es.eigenvalues()(i));
}

Matrix2c TransferFunction::operator()(Complex lambda) const {
    double nearest = std::numeric_limits<double>::infinity();
    Complex pole;
    for (const Complex& p : poles_)
        if (std::abs(lambda - p) < nearest) {
            nearest = std::abs(lambda - p);
            pole = p;
        }
    if (nearest <= 1e-10) throw PoleError(lambda, pole);
    const Eigen::Index n = A_.rows();
    const CMatrix shifted = lambda * CMatrix::Identity(n, n) - A_;
    const CMatrix R = shifted.partialPivLu().solve(state_.B);
    return Matrix2c::Identity() - left_ * R * sl_parameters().sigma1;
}

Matrix2c eval_S(const FiniteVessel& vessel, Complex lambda, double x, double t) {
    return TransferFunction(vessel, x, t)(lambda);
}

double symmetry_residual(const FiniteVessel& vessel, Complex lambda, double x, double t) {
    const TransferFunction S(vessel, x, t);
    const Matrix2c& s1 = sl_parameters().sigma1;
    return (S(-std::conj(lambda)).adjoint() * s1 * S(lambda) - s1).norm();
}

double ds_residual(const FiniteVessel& vessel, Complex lambda, double x, double t, double h, int accuracy) {
    const auto& p = sl_parameters();
    const TransferFunction S(vessel, x, t);
    const Matrix2c s = S(lambda);
    const CMatrix dS = detail::central_difference(
        [&](double y) { return CMatrix(eval_S(vessel, lambda, y, t)); }, x, h, accuracy);
    const Matrix2c rhs = p.sigma1 * (lambda * p.sigma2 + S.state().gamma_star) * s -
                         s * p.sigma1 * (lambda * p.sigma2 + p.gamma);
    return (dS - rhs).norm();
}

double intertwining_residual(const FiniteVessel& vessel, Complex lambda, const Grid1D& x_grid, double t) {
    x_grid.validate(5);
    const Complex omega = std::exp(0.5 * std::log(I_unit * lambda));
    const int n = x_grid.n;
    std::vector<Complex> y1(n);
    std::vector<double> beta(n);
    for (int i = 0; i < n; ++i) {
        const double x = x_grid.point(i);
        const TransferFunction S(vessel, x, t);
        const Complex u1 = std::exp(omega * x);
        const Eigen::Vector2cd u(u1, -I_unit * omega * u1);
        y1[i] = (S(lambda) * u)(0);
        beta[i] = S.state().beta;
    }
    const double h = x_grid.spacing();
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const Complex d2y = (y1[i + 1] - 2.0 * y1[i] + y1[i - 1]) / (h * h);
        const double dbeta = (beta[i + 1] - beta[i - 1]) / (2.0 * h);
        worst = std::max(worst, std::abs(-d2y + 2.0 * dbeta * y1[i] + I_unit * lambda * y1[i]));
    }
    return worst;
}

std::vector<Matrix2c> moments(const FiniteVessel& vessel, double x, double t, int nmax) {
    if (nmax < 0) throw InvalidArgument("moments: nmax must be non-negative");
    const EvaluatedState st = evaluate(vessel, x, t);
    const CMatrix left = st.B.adjoint() * st.Xinv;
    std::vector<Matrix2c> H;
    H.reserve(nmax + 1);
    CMatrix AnB = st.B;
    for (int n = 0; n <= nmax; ++n) {
        H.push_back(left * AnB * sl_parameters().sigma1);
        AnB = vessel.A() * AnB;
    }
    return H;
}

double moment_recursion_residual(const FiniteVessel& vessel, double x, double t, int n, double h) {
    if (n < 0) throw InvalidArgument("moment_recursion_residual: n must be non-negative");
    if (!(h > 0.0)) throw InvalidArgument("moment_recursion_residual: h must be positive");
    const auto Hm = moments(vessel, x - h, t, n + 1);
    const auto H0 = moments(vessel, x, t, n + 1);
    const auto Hp = moments(vessel, x + h, t, n + 1);
    const EvaluatedState st = evaluate(vessel, x, t);
    const double beta = st.beta;
    const double dbeta = 0.5 * q_from_linkage(st);

    auto d = [&](int m, int i, int j) { return (Hp[m](i, j) - Hm[m](i, j)) / (2.0 * h); };
    auto dd = [&](int m, int i, int j) { return (Hp[m](i, j) - 2.0 * H0[m](i, j) + Hm[m](i, j)) / (h * h); };
    const auto& a = H0[n];
    const auto& b = H0[n + 1];
    const int m = n + 1;

    const double r1 = std::abs(b(0, 1) - (I_unit * a(1, 0) - d(n, 0, 0) + beta * a(0, 0)));
    const double r2 = std::abs(b(0, 0) - b(1, 1) - I_unit * (d(m, 0, 1) - beta * b(0, 1)));
    const double r3 = std::abs(d(m, 0, 0) + d(m, 1, 1) -
                               (-I_unit * (dbeta - beta * beta) * b(0, 1) + beta * (b(0, 0) - b(1, 1))));
    const double r4 = std::abs(2.0 * I_unit * d(m, 1, 0) - (dd(m, 0, 0) - 2.0 * beta * d(m, 0, 0)));
    return std::max({r1, r2, r3, r4});
}

namespace {

CMatrix inverse_at(const FiniteVessel& vessel, double x, double t) { return evaluate(vessel, x, t).Xinv; }

}  // namespace

GLKernels gl_kernels(const FiniteVessel& vessel, double x0, double x, double y, double t) {
    const CVector bx = vessel.B(x, t).col(0);
    const CVector by = vessel.B(y, t).col(0);
    const CMatrix X0inv = inverse_at(vessel, x0, t);
    const CMatrix Xinv = inverse_at(vessel, x, t);
    return {bx.dot(X0inv * by), -bx.dot(Xinv * by)};
}

double gl_residual(const FiniteVessel& vessel, double x0, double x, double y, int nodes, double t) {
    if (!(x > y)) throw InvalidArgument("gl_residual: requires x > y");
    if (nodes < 3 || nodes % 2 == 0) throw InvalidArgument("gl_residual: node count must be odd and at least 3");
    const CVector bx = vessel.B(x, t).col(0);
    const CVector by = vessel.B(y, t).col(0);
    const CMatrix X0inv = inverse_at(vessel, x0, t);
    const CMatrix Xinv = inverse_at(vessel, x, t);
    const CVector kx = Xinv.adjoint() * bx;  // K(x,s) = -kx* b(s)
    const CVector oy = X0inv * by;           // Omega(s,y) = b(s)* oy

    const double h = (x - x0) / (nodes - 1);
    Complex integral = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const CVector bs = vessel.B(x0 + i * h, t).col(0);
        const double w = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        integral += w * (-kx.dot(bs)) * bs.dot(oy);
    }
    integral *= h / 3.0;
    const Complex K = -kx.dot(by);
    const Complex omega = bx.dot(oy);
    return std::abs(K + omega + integral);
}

KDiagPotential q_from_K_diag(const FiniteVessel& vessel, double x, double h, double t) {
    if (!(h > 0.0)) throw InvalidArgument("q_from_K_diag: h must be positive");
    auto Kdiag = [&](double s) { return gl_kernels(vessel, s, s, s, t).K.real(); };
    const double dK = (Kdiag(x + h) - Kdiag(x - h)) / (2.0 * h);
    KDiagPotential out;
    out.plus = 2.0 * dK;
    out.minus = -2.0 * dK;
    out.reference = q_from_linkage(evaluate(vessel, x, t));
    if (std::abs(out.plus - out.reference) <= std::abs(out.minus - out.reference)) {
        out.sign = 1;
        out.value = out.plus;
    } else {
        out.sign = -1;
        out.value = out.minus;
    }
    return out;
}

}  // namespace kdv
