#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace tracenorm {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Row-major carrier used by the coordinate kernels, where entries are
// consumed one row at a time.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Centralized numerical tolerances shared across the library.
namespace tol {
inline constexpr double symmetry = 1e-10;        // accepted relative asymmetry
inline constexpr double orthonormality = 1e-10;  // ||Q^T Q - I||_F bound
inline constexpr double lyapunov = 1e-12;        // relative residual of the solve
inline constexpr double rank_deficiency = 1e-12; // relative to the largest singular value
inline constexpr double triplet = 1e-10;         // dominant-triplet residual, relative
inline constexpr double gap_slack = 1e-9;        // roundoff slack on nonnegative gaps
}  // namespace tol

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rank-one update direction that no longer yields usable progress; the
// caller's stopping certificate should have fired instead.
struct DegenerateUpdateError : NumericalError {
  using NumericalError::NumericalError;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw PreconditionError(what);
}

inline void require_dims(bool cond, const char* what) {
  if (!cond) throw DimensionError(what);
}

}  // namespace tracenorm
