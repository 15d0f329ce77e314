#pragma once

#include <utility>

#include "ddc/types.hpp"

namespace ddc {

struct Spectrum {
    ComplexVector eigenvalues;
    double abscissa;  // max real part, taken over the list above
};

// Stability margin used by every user-facing Hurwitz verdict: abscissa below
// this counts as stable. Keeps eigenvalue rounding at large gains from
// flipping verdicts.
inline constexpr double kHurwitzThreshold = -1e-9;

// All eigenvalues of a square matrix. A diagonal balancing pass precedes the
// QR iteration so badly graded matrices (entries spanning many orders of
// magnitude) keep accurate small eigenvalues.
Spectrum eigenvalues(const Matrix& m);

bool is_hurwitz(const Matrix& m);

// Solves a_cl^T P + P a_cl = -q for symmetric positive definite P by
// vectorizing into the n^2 x n^2 Kronecker-sum system. a_cl must be Hurwitz
// (abscissa < 0, checked first); q symmetric.
Matrix lyapunov_solve(const Matrix& a_cl, const Matrix& q);

// (lambda_min, lambda_max) of a symmetric matrix.
std::pair<double, double> symmetric_extreme_eigs(const Matrix& m);

// m^j v by repeated multiplication; j must not exceed twice the dimension.
Vector matrix_power_apply(const Matrix& m, int j, const Vector& v);

}  // namespace ddc
