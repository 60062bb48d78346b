#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kdv {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Matrix2c = Eigen::Matrix2cd;

inline constexpr Complex I_unit{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed configuration, a spectrum violating its
/// invariants, a grid that is too small. Maps to CLI exit code 2.
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// Configuration problem located at a field path such as `vessel.soliton.k[0]`.
class ConfigError : public InvalidArgument {
   public:
    ConfigError(std::string path, const std::string& what)
        : InvalidArgument(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

   private:
    std::string path_;
};

/// Numerical breakdown (singular X, pole hit, overflow, broken invariant).
/// Maps to CLI exit code 3.
class NumericalError : public Error {
   public:
    using Error::Error;
};

class SingularMatrixError : public NumericalError {
   public:
    SingularMatrixError(double x, double t, const std::string& what)
        : NumericalError(what + " at (x,t)=(" + std::to_string(x) + ", " + std::to_string(t) + ")"),
          x_(x),
          t_(t) {}
    double x() const noexcept { return x_; }
    double t() const noexcept { return t_; }

   private:
    double x_, t_;
};

class PoleError : public NumericalError {
   public:
    PoleError(Complex lambda, Complex eigenvalue)
        : NumericalError("spectral parameter (" + std::to_string(lambda.real()) + ", " +
                         std::to_string(lambda.imag()) + ") hits eigenvalue (" +
                         std::to_string(eigenvalue.real()) + ", " + std::to_string(eigenvalue.imag()) +
                         ") of A"),
          lambda_(lambda),
          eigenvalue_(eigenvalue) {}
    Complex lambda() const noexcept { return lambda_; }
    Complex nearest_eigenvalue() const noexcept { return eigenvalue_; }

   private:
    Complex lambda_, eigenvalue_;
};

class OverflowError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

}  // namespace kdv
