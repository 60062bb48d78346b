#include "kdv/vessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kdv {

std::string_view to_string(VesselKind kind) {
    switch (kind) {
        case VesselKind::soliton:
            return "soliton";
        case VesselKind::discrete:
            return "discrete";
        case VesselKind::quadrature:
            return "quadrature";
        case VesselKind::tabulated:
            return "tabulated";
    }
    return "unknown";
}

FiniteVessel::FiniteVessel(VesselKind kind, CMatrix A, MatrixField B, MatrixField X, CMatrix X0,
                           bool evolves_in_time)
    : kind_(kind),
      A_(std::move(A)),
      B_(std::move(B)),
      X_(std::move(X)),
      X0_(std::move(X0)),
      evolves_in_time_(evolves_in_time) {
    if (A_.rows() == 0 || A_.rows() != A_.cols()) throw InvalidArgument("vessel: A must be square and non-empty");
    if (X0_.rows() != A_.rows() || X0_.cols() != A_.cols())
        throw InvalidArgument("vessel: X0 dimension does not match A");
    if (!B_ || !X_) throw InvalidArgument("vessel: missing evaluator");
}

double TauValue::value() const {
    if (log_abs > std::log(std::numeric_limits<double>::max()))
        throw OverflowError("tau overflows double range (log|tau| = " + std::to_string(log_abs) +
                            "); use log_tau");
    return sign * std::exp(log_abs);
}

namespace detail {

std::optional<HermitianInverse> invert_hermitian(const CMatrix& X, double rcond_min) {
    const Eigen::Index n = X.rows();
    Eigen::VectorXd scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = std::abs(X(i, i));
        scale(i) = (d > 0.0 && std::isfinite(d)) ? 1.0 / std::sqrt(d) : 1.0;
    }
    const CMatrix Y = scale.asDiagonal() * X * scale.asDiagonal();
    Eigen::PartialPivLU<CMatrix> lu(Y);
    const double rc = lu.rcond();
    if (!(rc >= rcond_min)) return std::nullopt;

    HermitianInverse out;
    out.inverse = scale.asDiagonal() * lu.inverse() * scale.asDiagonal();

    Complex phase = static_cast<double>(lu.permutationP().determinant());
    double log_abs = 0.0;
    const CMatrix& U = lu.matrixLU();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = std::abs(U(i, i));
        log_abs += std::log(m);
        phase *= U(i, i) / m;
        log_abs -= 2.0 * std::log(scale(i));
    }
    out.log_abs_det = log_abs;
    out.phase = phase;
    return out;
}

CMatrix central_difference(const std::function<CMatrix(double)>& f, double at, double h, int accuracy) {
    if (accuracy == 2) return (f(at + h) - f(at - h)) / (2.0 * h);
    if (accuracy == 4)
        return (8.0 * (f(at + h) - f(at - h)) - (f(at + 2.0 * h) - f(at - 2.0 * h))) / (12.0 * h);
    throw InvalidArgument("finite-difference accuracy must be 2 or 4");
}

}  // namespace detail

namespace {

CMatrix symmetrized(const CMatrix& X, double x, double t, double tol) {
    const double asym = (X - X.adjoint()).norm();
    if (asym > tol * (1.0 + X.norm()))
        throw NumericalError("X(x,t) not Hermitian at (x,t)=(" + std::to_string(x) + ", " + std::to_string(t) +
                             "): asymmetry " + std::to_string(asym));
    return 0.5 * (X + X.adjoint());
}

}  // namespace

Matrix2c linkage_gamma_star(const CMatrix& B, const CMatrix& Xinv) {
    const auto& p = sl_parameters();
    const Matrix2c M = B.adjoint() * Xinv * B;
    return p.gamma + p.sigma2 * M * p.sigma1 - p.sigma1 * M * p.sigma2;
}

double beta_of_state(const CMatrix& B, const CMatrix& Xinv, double imag_tol) {
    const Complex m11 = (B.col(0).adjoint() * Xinv * B.col(0))(0, 0);
    if (std::abs(m11.imag()) > imag_tol * (1.0 + std::abs(m11.real())))
        throw NumericalError("beta has imaginary residue " + std::to_string(m11.imag()));
    return -m11.real();
}

EvaluatedState evaluate(const FiniteVessel& vessel, double x, double t, const Tolerances& tol) {
    EvaluatedState s;
    s.x = x;
    s.t = t;
    s.B = vessel.B(x, t);
    s.X = symmetrized(vessel.X(x, t), x, t, tol.hermitian_asymmetry);

    auto inv = detail::invert_hermitian(s.X, tol.singular_rcond);
    if (!inv) throw SingularMatrixError(x, t, "X is singular");
    auto inv0 = detail::invert_hermitian(vessel.X0(), tol.singular_rcond);
    if (!inv0) throw SingularMatrixError(x, t, "reference X0 is singular");

    s.Xinv = std::move(inv->inverse);
    s.gram = s.B.adjoint() * s.Xinv * s.B;
    s.gamma_star = linkage_gamma_star(s.B, s.Xinv);
    s.beta = beta_of_state(s.B, s.Xinv, tol.beta_imaginary);
    const Complex phase = inv->phase * std::conj(inv0->phase);
    if (std::abs(phase.imag()) > tol.tau_imaginary)
        throw NumericalError("tau has imaginary residue " + std::to_string(phase.imag()));
    s.tau.log_abs = inv->log_abs_det - inv0->log_abs_det;
    s.tau.sign = phase.real() >= 0.0 ? 1 : -1;
    return s;
}

double q_from_linkage(const EvaluatedState& state) {
    const double dbeta = state.beta * state.beta - 2.0 * state.gram(0, 1).imag();
    return 2.0 * dbeta;
}

TauValue log_tau(const FiniteVessel& vessel, double x, double t) { return evaluate(vessel, x, t).tau; }

double tau(const FiniteVessel& vessel, double x, double t) { return log_tau(vessel, x, t).value(); }

double lyapunov_residual(const FiniteVessel& vessel, double x, double t) {
    const auto& p = sl_parameters();
    const CMatrix B = vessel.B(x, t);
    const CMatrix X = vessel.X(x, t);
    const CMatrix& A = vessel.A();
    const CMatrix R = A * X + X * A.adjoint() + B * p.sigma1 * B.adjoint();
    return R.norm() / (1.0 + X.norm());
}

double normalization_residual(const FiniteVessel& vessel, double x, double t) {
    const auto s = evaluate(vessel, x, t);
    const Matrix2c m = sl_parameters().sigma1 * s.gram;
    return std::abs(m.trace());
}

double ResidualReport::max_differential() const {
    double m = std::max(r_DB, r_DX);
    if (r_DBt) m = std::max(m, *r_DBt);
    if (r_DXt) m = std::max(m, *r_DXt);
    return m;
}

ResidualReport evolution_residuals(const FiniteVessel& vessel, double x, double t, double h, int accuracy) {
    if (!(h > 0.0)) throw InvalidArgument("evolution_residuals: step h must be positive");
    const auto& p = sl_parameters();
    const CMatrix& A = vessel.A();
    const CMatrix B = vessel.B(x, t);
    const CMatrix Bsig2Bs = B * p.sigma2 * B.adjoint();

    const CMatrix dBx = detail::central_difference([&](double y) { return vessel.B(y, t); }, x, h, accuracy);
    const CMatrix dXx = detail::central_difference([&](double y) { return vessel.X(y, t); }, x, h, accuracy);

    ResidualReport r;
    r.h = h;
    r.accuracy = accuracy;
    r.r_DB = (dBx * p.sigma1 + A * B * p.sigma2 + B * p.gamma).norm();
    r.r_DX = (dXx - Bsig2Bs).norm();
    if (vessel.evolves_in_time()) {
        const CMatrix dBt = detail::central_difference([&](double s) { return vessel.B(x, s); }, t, h, accuracy);
        const CMatrix dXt = detail::central_difference([&](double s) { return vessel.X(x, s); }, t, h, accuracy);
        r.r_DBt = (dBt - I_unit * A * dBx).norm();
        const CMatrix rhs = I_unit * A * Bsig2Bs - I_unit * Bsig2Bs * A.adjoint() + I_unit * B * p.gamma * B.adjoint();
        r.r_DXt = (dXt - rhs).norm();
    }
    r.r_lyapunov = lyapunov_residual(vessel, x, t);
    r.r_normalization = normalization_residual(vessel, x, t);
    return r;
}

Inertia inertia(const CMatrix& X, const Tolerances& tol) {
    if (X.rows() != X.cols()) throw InvalidArgument("inertia: matrix must be square");
    const double norm = X.norm();
    if ((X - X.adjoint()).norm() > tol.hermitian_asymmetry * (1.0 + norm))
        throw InvalidArgument("inertia: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (X + X.adjoint()), Eigen::EigenvaluesOnly);
    Inertia in;
    for (double ev : es.eigenvalues()) {
        if (std::abs(ev) < tol.zero_eigenvalue * norm)
            throw NumericalError("inertia: near-zero eigenvalue " + std::to_string(ev) + ", cannot classify");
        (ev > 0.0 ? in.positive : in.negative)++;
    }
    return in;
}

}  // namespace kdv
