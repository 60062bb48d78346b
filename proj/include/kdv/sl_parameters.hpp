#pragma once

#include "kdv/types.hpp"

namespace kdv {

/// Constant 2x2 matrices of the Sturm-Liouville vessel class.
struct SLParameters {
    Matrix2c sigma1;  ///< [[0,1],[1,0]], its own inverse
    Matrix2c sigma2;  ///< [[1,0],[0,0]], rank-one projector
    Matrix2c gamma;   ///< [[0,0],[0,i]], skew-Hermitian
};

const SLParameters& sl_parameters();

}  // namespace kdv
