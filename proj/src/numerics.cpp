#include "ddc/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace ddc {
namespace {

void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols())
        throw NonSquare(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
}

// Parlett-Reinsch balancing with power-of-two scale factors: a diagonal
// similarity, so the spectrum is bit-exactly preserved while row and column
// norms are evened out. Eigen's QR iteration does not balance on its own.
void balance_in_place(Matrix& m) {
    const Index n = m.rows();
    const double radix = 2.0;
    const double radix_sq = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (Index i = 0; i < n; ++i) {
            double col = 0.0;
            double row = 0.0;
            for (Index j = 0; j < n; ++j) {
                if (j == i) continue;
                col += std::abs(m(j, i));
                row += std::abs(m(i, j));
            }
            if (col == 0.0 || row == 0.0) continue;
            double factor = 1.0;
            double scaled_col = col;
            double target = row / radix;
            while (scaled_col < target) {
                factor *= radix;
                scaled_col *= radix_sq;
            }
            target = row * radix;
            while (scaled_col > target) {
                factor /= radix;
                scaled_col /= radix_sq;
            }
            if ((scaled_col + row) / factor < 0.95 * (col + row)) {
                done = false;
                m.row(i) /= factor;
                m.col(i) *= factor;
            }
        }
    }
}

}  // namespace

Spectrum eigenvalues(const Matrix& m) {
    require_square(m, "eigenvalues");
    Matrix balanced = m;
    balance_in_place(balanced);
    Eigen::EigenSolver<Matrix> solver(balanced, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("eigenvalues: QR iteration did not converge");
    Spectrum s;
    s.eigenvalues = solver.eigenvalues();
    s.abscissa = s.eigenvalues.size() > 0 ? s.eigenvalues.real().maxCoeff()
                                          : -std::numeric_limits<double>::infinity();
    return s;
}

bool is_hurwitz(const Matrix& m) { return eigenvalues(m).abscissa < kHurwitzThreshold; }

Matrix lyapunov_solve(const Matrix& a_cl, const Matrix& q) {
    require_square(a_cl, "lyapunov_solve");
    require_square(q, "lyapunov_solve");
    if (a_cl.rows() != q.rows())
        throw DimensionMismatch("lyapunov_solve: dynamics " + std::to_string(a_cl.rows()) +
                                " vs cost " + std::to_string(q.rows()));
    const Index n = a_cl.rows();
    if ((q - q.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff()))
        throw NotSymmetric("lyapunov_solve: q is not symmetric");
    double abscissa = eigenvalues(a_cl).abscissa;
    if (abscissa >= 0.0)
        throw NotHurwitz("lyapunov_solve: spectral abscissa " + std::to_string(abscissa) +
                         " is not negative");

    // vec(a^T P) + vec(P a) = (I (x) a^T + a^T (x) I) vec(P), column-major vec.
    Matrix at = a_cl.transpose();
    Matrix system = Matrix::Zero(n * n, n * n);
    for (Index i = 0; i < n; ++i) {
        system.block(i * n, i * n, n, n) += at;
        for (Index j = 0; j < n; ++j)
            system.block(i * n, j * n, n, n).diagonal().array() += at(i, j);
    }
    Eigen::FullPivLU<Matrix> lu(system);
    if (!lu.isInvertible()) throw SingularSystem("lyapunov_solve: Kronecker-sum system singular");
    Vector rhs = -Eigen::Map<const Vector>(q.data(), n * n);
    Vector vec_p = lu.solve(rhs);
    Matrix p = Eigen::Map<const Matrix>(vec_p.data(), n, n);
    return 0.5 * (p + p.transpose());
}

std::pair<double, double> symmetric_extreme_eigs(const Matrix& m) {
    require_square(m, "symmetric_extreme_eigs");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
        throw NotSymmetric("symmetric_extreme_eigs: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("symmetric_extreme_eigs: iteration did not converge");
    const auto& vals = solver.eigenvalues();
    return {vals(0), vals(vals.size() - 1)};
}

Vector matrix_power_apply(const Matrix& m, int j, const Vector& v) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("matrix_power_apply: matrix is " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()));
    if (v.size() != m.rows())
        throw DimensionMismatch("matrix_power_apply: vector length " + std::to_string(v.size()) +
                                " vs dimension " + std::to_string(m.rows()));
    if (j < 0 || j > 2 * m.rows())
        throw DimensionMismatch("matrix_power_apply: power " + std::to_string(j) +
                                " out of range for dimension " + std::to_string(m.rows()));
    Vector out = v;
    for (int step = 0; step < j; ++step) out = m * out;
    return out;
}

}  // namespace ddc
