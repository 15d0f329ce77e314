#pragma once

#include "ddc/numerics.hpp"
#include "ddc/plant.hpp"
#include "ddc/types.hpp"

namespace ddc {

enum class TheoremKind { Theorem1, Theorem2 };

// Exact LTI closed loop of plant plus estimator chain in coordinates
// z = (x_1..x_n, xhat_1..xhat_n). The estimate rows depend on x only through
// x_1 and form a lower-triangular block with -sigma on the diagonal.
struct AugmentedSystem {
    Matrix a_aug;  // 2n x 2n
    int n;         // plant/chain order (extended dimension for Theorem2)
    TheoremKind kind;
    double sigma;
    double gamma;   // Theorem2 only, else 0
    double beta;    // Theorem2 only, else 0
    RowVector k;    // length n (Theorem1) or n-1 (Theorem2)
    Vector a_last;  // plant coefficient row: length n (Theorem1) or n-1 (Theorem2)
    double b_gain;  // plant input gain (Theorem1); 1 for Theorem2, whose scale is beta
};

AugmentedSystem build_aug_thm1(const ControllerFormPlant& p, const FeedbackGain& k, double sigma);

// Adaptation loop: the controller integrates u' = -gamma(xhat_n - K xhat_{1:n-1})
// and the plant responds through the unknown scale beta. gamma and beta must
// agree in sign; everything is normalized to the positive case.
AugmentedSystem build_aug_thm2(const AdaptivePlant& p, const FeedbackGain& k, double gamma,
                               double sigma);

// Estimation errors e_{i,j} between the j-th derivative of the i-th estimate
// and the matching state, flattened row-major over i then j (j up to n-i).
// Theorem2 additionally carries e_u, the gap between x_n and the target
// feedback K x_{1:n-1}.
struct ErrorCoordinates {
    Vector e;
    double e_u = 0.0;
};

// Flat position of e_{i,j}; i in 1..n, j in 0..n-i.
Index error_index(int n, int i, int j);

ErrorCoordinates error_coordinates(const AugmentedSystem& s, const Vector& z);

// Quadratic certificate function: x'Px plus the squared errors (Theorem2:
// the plant part is x_{1:n-1}'P x_{1:n-1} and e_u^2 joins the sum).
double lyapunov_value(const AugmentedSystem& s, const Matrix& p_mat, const Vector& z);

// Spectrum of a_aug. Well-graded loops go through the dense solver directly;
// once sigma >= 16 * (loop coefficient scale) the QR iteration starts losing
// the slow eigenvalues to rounding, so the spectrum is instead reassembled
// from the characteristic polynomial rescaled once per magnitude band, each
// band O(1)-conditioned where its own roots live. Throws ConvergenceFailure
// when neither route is trustworthy.
Spectrum augmented_spectrum(const AugmentedSystem& s);

}  // namespace ddc
