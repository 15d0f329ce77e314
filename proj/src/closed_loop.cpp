#include "ddc/closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ddc/numerics.hpp"

namespace ddc {
namespace {

// Lower half shared by both loops: row i is sigma^{i+1} in column 0 and
// -sigma^{i-j+1} at estimate column j <= i (the resolvent of the stage
// recursion, solved in closed form).
void fill_estimate_rows(Matrix& a_aug, int n, double sigma) {
    for (int i = 0; i < n; ++i) {
        a_aug(n + i, 0) = std::pow(sigma, i + 1);
        for (int j = 0; j <= i; ++j) a_aug(n + i, n + j) = -std::pow(sigma, i - j + 1);
    }
}

}  // namespace

AugmentedSystem build_aug_thm1(const ControllerFormPlant& p, const FeedbackGain& k, double sigma) {
    if (k.k.size() != p.n)
        throw DimensionMismatch("augmented loop: gain has " + std::to_string(k.k.size()) +
                                " entries for dimension " + std::to_string(p.n));
    if (!(sigma > 0.0)) throw ConfigError("augmented loop: sigma must be positive");
    const int n = p.n;
    auto [a, b, c] = build_matrices(p);
    AugmentedSystem sys;
    sys.n = n;
    sys.kind = TheoremKind::Theorem1;
    sys.sigma = sigma;
    sys.gamma = 0.0;
    sys.beta = 0.0;
    sys.k = k.k;
    sys.a_last = p.a_last;
    sys.b_gain = p.b_last;
    sys.a_aug = Matrix::Zero(2 * n, 2 * n);
    sys.a_aug.topLeftCorner(n, n) = a;
    sys.a_aug.topRightCorner(n, n) = b * k.k;
    fill_estimate_rows(sys.a_aug, n, sigma);
    return sys;
}

AugmentedSystem build_aug_thm2(const AdaptivePlant& p, const FeedbackGain& k, double gamma,
                               double sigma) {
    if (k.k.size() != p.n - 1)
        throw DimensionMismatch("augmented loop: gain has " + std::to_string(k.k.size()) +
                                " entries for extended dimension " + std::to_string(p.n));
    if (!(sigma > 0.0)) throw ConfigError("augmented loop: sigma must be positive");
    if (gamma * p.beta <= 0.0)
        throw SignMismatch("augmented loop: gamma and beta must share a sign, got gamma = " +
                           std::to_string(gamma) + ", beta = " + std::to_string(p.beta));
    const int n = p.n;
    AugmentedSystem sys;
    sys.n = n;
    sys.kind = TheoremKind::Theorem2;
    sys.sigma = sigma;
    sys.gamma = gamma;
    sys.beta = p.beta;
    sys.k = k.k;
    sys.a_last = p.a_last;
    sys.b_gain = 1.0;
    sys.a_aug = Matrix::Zero(2 * n, 2 * n);
    for (int i = 0; i + 1 < n; ++i) sys.a_aug(i, i + 1) = 1.0;
    // x_n' = A_n x_{2:n} + beta*gamma (K xhat_{1:n-1} - xhat_n)
    const double bg = p.beta * gamma;
    sys.a_aug.row(n - 1).segment(1, n - 1) = p.a_last.transpose();
    sys.a_aug.row(n - 1).segment(n, n - 1) = bg * k.k;
    sys.a_aug(n - 1, 2 * n - 1) = -bg;
    fill_estimate_rows(sys.a_aug, n, sigma);
    return sys;
}

Index error_index(int n, int i, int j) {
    if (i < 1 || i > n || j < 0 || i + j > n)
        throw DimensionMismatch("error_index: (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") out of range for dimension " + std::to_string(n));
    return static_cast<Index>((i - 1) * (n + 1) - (i - 1) * i / 2 + j);
}

ErrorCoordinates error_coordinates(const AugmentedSystem& s, const Vector& z) {
    const int n = s.n;
    if (z.size() != 2 * n)
        throw DimensionMismatch("error_coordinates: state has " + std::to_string(z.size()) +
                                " entries for dimension " + std::to_string(n));
    ErrorCoordinates ec;
    ec.e = Vector::Zero(n * (n + 1) / 2);
    Vector power = z;  // a_aug^j z, advanced once per j
    for (int j = 0; j + 1 <= n; ++j) {
        for (int i = 1; i + j <= n; ++i) ec.e(error_index(n, i, j)) = power(n + i - 1) - z(i + j - 1);
        power = matrix_power_apply(s.a_aug, 1, power);
    }
    if (s.kind == TheoremKind::Theorem2)
        ec.e_u = z(n - 1) - s.k.dot(z.head(n - 1));
    return ec;
}

double lyapunov_value(const AugmentedSystem& s, const Matrix& p_mat, const Vector& z) {
    const int n = s.n;
    if (z.size() != 2 * n)
        throw DimensionMismatch("lyapunov_value: state has " + std::to_string(z.size()) +
                                " entries for dimension " + std::to_string(n));
    const Index plant_dim = s.kind == TheoremKind::Theorem1 ? n : n - 1;
    if (p_mat.rows() != plant_dim || p_mat.cols() != plant_dim)
        throw DimensionMismatch("lyapunov_value: certificate matrix is " +
                                std::to_string(p_mat.rows()) + "x" + std::to_string(p_mat.cols()) +
                                ", expected " + std::to_string(plant_dim));
    ErrorCoordinates ec = error_coordinates(s, z);
    Vector xp = z.head(plant_dim);
    double v = xp.dot(p_mat * xp) + ec.e.squaredNorm();
    if (s.kind == TheoremKind::Theorem2) v += ec.e_u * ec.e_u;
    return v;
}

namespace {

// Ascending-coefficient polynomials. Every band polynomial below is scaled so
// the roots it is responsible for sit at O(1) magnitude; sigma only enters
// through nonpositive powers, so coefficients never overflow.
using Poly = std::vector<double>;

Poly poly_mul(const Poly& p, const Poly& q) {
    Poly r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

Poly linear_power(double c0, double c1, int e) {
    Poly r{1.0};
    const Poly lin{c0, c1};
    for (int i = 0; i < e; ++i) r = poly_mul(r, lin);
    return r;
}

// acc += scale * s^shift * term
void add_shifted(Poly& acc, double scale, int shift, const Poly& term) {
    if (acc.size() < term.size() + shift) acc.resize(term.size() + shift, 0.0);
    for (std::size_t i = 0; i < term.size(); ++i) acc[i + shift] += scale * term[i];
}

// Roots through the balanced companion of the monic normalization. Top
// coefficients at the subnormal edge are dropped: those roots sit out at
// infinity and every caller filters by magnitude anyway.
std::vector<std::complex<double>> poly_roots(Poly c) {
    for (double v : c)
        if (!std::isfinite(v)) throw ConvergenceFailure("poly_roots: coefficients overflowed");
    while (c.size() > 1 && std::abs(c.back()) < 1e-300) c.pop_back();
    const auto d = static_cast<Index>(c.size()) - 1;
    std::vector<std::complex<double>> out;
    if (d < 1) return out;
    Matrix comp = Matrix::Zero(d, d);
    for (Index i = 0; i + 1 < d; ++i) comp(i, i + 1) = 1.0;
    for (Index j = 0; j < d; ++j) comp(d - 1, j) = -c[static_cast<std::size_t>(j)] / c.back();
    Spectrum sp = eigenvalues(comp);
    out.reserve(static_cast<std::size_t>(d));
    for (Index i = 0; i < sp.eigenvalues.size(); ++i) out.push_back(sp.eigenvalues(i));
    return out;
}

double max_abs(const Vector& v) { return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const RowVector& v) { return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0; }

// A rescaled band is trusted only at O(1) root magnitude. Rounding smears any
// cluster it cannot resolve into a ring far from magnitude one, and the
// window rejects the ring; the genuine roots of a separated band satisfy
// |1 + w| <= (1/16)^(1/n), well inside.
constexpr double kWindowLo = 1.0 / 32.0;
constexpr double kWindowHi = 32.0;

void keep_reciprocal_below(const Poly& slow, double boundary, double band_scale,
                           std::vector<std::complex<double>>& roots) {
    // roots of the reversed polynomial are mu = 1/s; |mu| > 1/boundary keeps
    // |s| < boundary without ever forming the ill-scaled large roots. Genuine
    // roots of this band also obey the Cauchy-type bound |s| <= 4*band_scale,
    // so the window cap applies here too.
    Poly rev(slow.rbegin(), slow.rend());
    for (auto mu : poly_roots(rev)) {
        const double am = std::abs(mu);
        if (am > 1.0 / boundary && am >= 1.0 / (kWindowHi * band_scale))
            roots.push_back(1.0 / mu);
    }
}

void keep_scaled_band(const Poly& band, double unit, double lo, double hi,
                      std::vector<std::complex<double>>& roots) {
    for (auto w : poly_roots(band)) {
        const double aw = std::abs(w);
        const double mag = std::abs(unit * w);
        if (mag >= lo && mag < hi && aw >= kWindowLo && aw <= kWindowHi)
            roots.push_back(unit * w);
    }
}

std::vector<std::complex<double>> banded_spectrum_thm1(const AugmentedSystem& s) {
    const int n = s.n;
    const double sigma = s.sigma;
    const double b = s.b_gain;
    const double scale = 1.0 + max_abs(s.a_last) + std::abs(b) * max_abs(s.k);
    // chi(s)/sigma^n: the n loop-shaped roots at O(1), the fast ones pushed out
    Poly plant(static_cast<std::size_t>(n) + 1, 0.0);
    plant[static_cast<std::size_t>(n)] = 1.0;
    for (int j = 0; j < n; ++j) plant[static_cast<std::size_t>(j)] = -s.a_last(j);
    Poly slow = poly_mul(plant, linear_power(1.0, 1.0 / sigma, n));
    for (int i = 1; i <= n; ++i)
        add_shifted(slow, -b * s.k(i - 1), i - 1, linear_power(1.0, 1.0 / sigma, n - i));
    // chi(sigma w)/sigma^2n: the n estimator roots near w = -1
    Poly pf(static_cast<std::size_t>(n) + 1, 0.0);
    pf[static_cast<std::size_t>(n)] = 1.0;
    for (int j = 0; j < n; ++j) pf[static_cast<std::size_t>(j)] = -s.a_last(j) * std::pow(sigma, j - n);
    Poly fast = poly_mul(pf, linear_power(1.0, 1.0, n));
    for (int i = 1; i <= n; ++i)
        add_shifted(fast, -b * s.k(i - 1) * std::pow(sigma, i - 1 - n), i - 1,
                    linear_power(1.0, 1.0, n - i));

    const double boundary = std::sqrt(sigma * scale);
    std::vector<std::complex<double>> roots;
    keep_reciprocal_below(slow, boundary, scale, roots);
    keep_scaled_band(fast, sigma, boundary, std::numeric_limits<double>::infinity(), roots);
    return roots;
}

std::vector<std::complex<double>> banded_spectrum_thm2(const AugmentedSystem& s) {
    const int n = s.n;
    const double sigma = s.sigma;
    const double bg = s.beta * s.gamma;
    const double kmax = max_abs(s.k);
    const double slow_scale = 2.0 + max_abs(s.a_last) + kmax;
    // chi(s)/sigma^n; the adaptation channel adds bg at degree n-1
    Poly plant(static_cast<std::size_t>(n) + 1, 0.0);
    plant[static_cast<std::size_t>(n)] = 1.0;
    for (int j = 1; j < n; ++j) plant[static_cast<std::size_t>(j)] = -s.a_last(j - 1);
    Poly slow = poly_mul(plant, linear_power(1.0, 1.0 / sigma, n));
    for (int i = 1; i < n; ++i)
        add_shifted(slow, -bg * s.k(i - 1), i - 1, linear_power(1.0, 1.0 / sigma, n - i));
    add_shifted(slow, bg, n - 1, {1.0});
    // chi(sigma w)/sigma^2n
    Poly pf(static_cast<std::size_t>(n) + 1, 0.0);
    pf[static_cast<std::size_t>(n)] = 1.0;
    for (int j = 1; j < n; ++j)
        pf[static_cast<std::size_t>(j)] = -s.a_last(j - 1) * std::pow(sigma, j - n);
    Poly fast = poly_mul(pf, linear_power(1.0, 1.0, n));
    for (int i = 1; i < n; ++i)
        add_shifted(fast, -(bg / sigma) * s.k(i - 1) * std::pow(sigma, i - n), i - 1,
                    linear_power(1.0, 1.0, n - i));
    add_shifted(fast, bg / sigma, n - 1, {1.0});

    std::vector<std::complex<double>> roots;
    if (bg >= 16.0 * slow_scale) {
        // adaptation fast enough to form its own band: chi(bg y)/(sigma^n bg^n)
        Poly pm(static_cast<std::size_t>(n) + 1, 0.0);
        pm[static_cast<std::size_t>(n)] = 1.0;
        for (int j = 1; j < n; ++j)
            pm[static_cast<std::size_t>(j)] = -s.a_last(j - 1) * std::pow(bg, j - n);
        Poly mid = poly_mul(pm, linear_power(1.0, bg / sigma, n));
        for (int i = 1; i < n; ++i)
            add_shifted(mid, -s.k(i - 1) * std::pow(bg, i - n), i - 1,
                        linear_power(1.0, bg / sigma, n - i));
        add_shifted(mid, 1.0, n - 1, {1.0});
        const double b1 = std::sqrt(bg * slow_scale);
        const double b2 = std::sqrt(sigma * bg);
        keep_reciprocal_below(slow, b1, slow_scale, roots);
        keep_scaled_band(mid, bg, b1, b2, roots);
        keep_scaled_band(fast, sigma, b2, std::numeric_limits<double>::infinity(), roots);
    } else {
        const double total = std::max(slow_scale, bg * (1.0 + kmax));
        const double boundary = std::sqrt(sigma * total);
        keep_reciprocal_below(slow, boundary, total, roots);
        keep_scaled_band(fast, sigma, boundary, std::numeric_limits<double>::infinity(), roots);
    }
    return roots;
}

Spectrum spectrum_from_roots(const std::vector<std::complex<double>>& roots) {
    Spectrum sp;
    sp.eigenvalues.resize(static_cast<Index>(roots.size()));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i) {
        sp.eigenvalues(static_cast<Index>(i)) = roots[i];
        worst = std::max(worst, roots[i].real());
    }
    sp.abscissa = worst;
    return sp;
}

constexpr double kDenseGradingCap = 1e12;

}  // namespace

Spectrum augmented_spectrum(const AugmentedSystem& s) {
    const double kmax = max_abs(s.k);
    double scale = 0.0;
    if (s.kind == TheoremKind::Theorem1) {
        scale = 1.0 + max_abs(s.a_last) + std::abs(s.b_gain) * kmax;
    } else {
        const double bg = s.beta * s.gamma;
        scale = std::max(2.0 + max_abs(s.a_last) + kmax, bg * (1.0 + kmax));
    }
    if (!(s.sigma >= 16.0 * scale)) {
        if (!s.a_aug.allFinite())
            throw ConvergenceFailure("augmented_spectrum: loop matrix has non-finite entries");
        if (s.a_aug.cwiseAbs().maxCoeff() > kDenseGradingCap)
            throw ConvergenceFailure(
                "augmented_spectrum: grading beyond the dense solver but sigma below the banded "
                "regime");
        return eigenvalues(s.a_aug);
    }
    auto roots =
        s.kind == TheoremKind::Theorem1 ? banded_spectrum_thm1(s) : banded_spectrum_thm2(s);
    if (static_cast<int>(roots.size()) != 2 * s.n) {
        // band accounting failed; dense QR still answers while entries are modest
        if (s.a_aug.allFinite() && s.a_aug.cwiseAbs().maxCoeff() <= kDenseGradingCap)
            return eigenvalues(s.a_aug);
        throw ConvergenceFailure("augmented_spectrum: bands lost track of the eigenvalue count");
    }
    return spectrum_from_roots(roots);
}

}  // namespace ddc
