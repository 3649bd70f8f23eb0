#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "metrolab/error.hpp"

namespace metrolab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

namespace tol {
inline constexpr double kNorm = 1e-12;          // normalization of produced states
inline constexpr double kInputNorm = 1e-10;     // accepted deviation in caller-supplied vectors
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kNegativeEigen = 1e-10;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kVarianceClamp = 1e-10;
inline constexpr double kTailMass = 1e-10;
inline constexpr double kPovm = 1e-10;
}  // namespace tol

// Largest matrix dimension for which dense eigendecompositions are attempted.
// Defaults to 4096; the METROLAB_MAX_DIM environment variable overrides it.
std::size_t max_dense_dim();

// Throws NumericError when `dim` exceeds max_dense_dim().
void require_dense_dim(std::size_t dim, const char* context);

// Largest |A - A^dagger| entry.
double hermiticity_defect(const Matrix& m);

}  // namespace metrolab
