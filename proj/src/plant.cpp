#include "ddc/plant.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "ddc/numerics.hpp"

namespace ddc {

ControllerFormPlant::ControllerFormPlant(int n_, Vector a, double b)
    : n(n_), a_last(std::move(a)), b_last(b) {
    if (n < 1) throw ConfigError("plant dimension must be positive, got " + std::to_string(n));
    if (a_last.size() != n)
        throw DimensionMismatch("plant: a_last has " + std::to_string(a_last.size()) +
                                " entries for dimension " + std::to_string(n));
    if (b_last == 0.0) throw ConfigError("plant: b_last must be nonzero");
    if (!a_last.allFinite()) throw ConfigError("plant: a_last entries must be finite");
}

AdaptivePlant::AdaptivePlant(int n_, Vector a, double beta_)
    : n(n_), a_last(std::move(a)), beta(beta_), beta_sign(beta_ > 0 ? 1 : -1) {
    if (n < 2)
        throw ConfigError("adaptive plant: extended dimension must be at least 2, got " +
                          std::to_string(n));
    if (a_last.size() != n - 1)
        throw DimensionMismatch("adaptive plant: a_last has " + std::to_string(a_last.size()) +
                                " entries for extended dimension " + std::to_string(n));
    if (beta == 0.0) throw ConfigError("adaptive plant: beta must be nonzero");
    if (!std::isfinite(beta)) throw ConfigError("adaptive plant: beta must be finite");
}

ControllerFormPlant AdaptivePlant::underlying_plant() const {
    return ControllerFormPlant(n - 1, a_last, 1.0);
}

std::tuple<Matrix, Matrix, Matrix> build_matrices(const ControllerFormPlant& p) {
    const int n = p.n;
    Matrix a = Matrix::Zero(n, n);
    if (n > 1) a.topRightCorner(n - 1, n - 1) = Matrix::Identity(n - 1, n - 1);
    a.row(n - 1) = p.a_last.transpose();
    Matrix b = Matrix::Zero(n, 1);
    b(n - 1, 0) = p.b_last;
    Matrix c = Matrix::Zero(1, n);
    c(0, 0) = 1.0;
    return {a, b, c};
}

namespace {

// Ascending coefficients c_0..c_{n-1} of prod (s - p_i) = s^n + sum c_j s^j.
Vector expand_poles(const ComplexVector& poles) {
    std::vector<std::complex<double>> c{1.0};
    for (Index i = 0; i < poles.size(); ++i) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= poles(i) * c[k];
        }
        c = next;
    }
    Vector out(poles.size());
    for (Index k = 0; k < poles.size(); ++k) {
        const auto& coef = c[static_cast<std::size_t>(k)];
        out(k) = coef.real();
    }
    return out;
}

void require_conjugate_closed(const ComplexVector& poles) {
    constexpr double tol = 1e-12;
    std::vector<bool> used(static_cast<std::size_t>(poles.size()), false);
    for (Index i = 0; i < poles.size(); ++i) {
        if (std::abs(poles(i).imag()) <= tol || used[static_cast<std::size_t>(i)]) continue;
        bool matched = false;
        for (Index j = 0; j < poles.size(); ++j) {
            if (j == i || used[static_cast<std::size_t>(j)]) continue;
            if (std::abs(poles(j) - std::conj(poles(i))) <= tol &&
                std::abs(poles(j).imag()) > tol) {
                used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = true;
                matched = true;
                break;
            }
        }
        if (!matched) throw NonConjugateSet("pole set is not closed under conjugation");
    }
}

}  // namespace

FeedbackGain pole_placement_gain(const ControllerFormPlant& p, const ComplexVector& desired_poles) {
    if (desired_poles.size() != p.n)
        throw DimensionMismatch("pole placement: " + std::to_string(desired_poles.size()) +
                                " poles for dimension " + std::to_string(p.n));
    for (Index i = 0; i < desired_poles.size(); ++i)
        if (desired_poles(i).real() >= 0.0)
            throw UnstablePoleRequested("pole placement: pole with real part " +
                                        std::to_string(desired_poles(i).real()));
    require_conjugate_closed(desired_poles);

    Vector coeffs = expand_poles(desired_poles);
    FeedbackGain gain;
    gain.k = RowVector(p.n);
    for (int j = 0; j < p.n; ++j) gain.k(j) = (-coeffs(j) - p.a_last(j)) / p.b_last;

    auto [a, b, c] = build_matrices(p);
    auto spectrum = eigenvalues(a + b * gain.k);
    Vector check = expand_poles(spectrum.eigenvalues);
    if ((check - coeffs).cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, coeffs.cwiseAbs().maxCoeff()))
        throw ConvergenceFailure("pole placement: closed-loop spectrum failed verification");
    return gain;
}

LqrSolution lqr_solve(const ControllerFormPlant& plant, const Matrix& q_cost, double r_cost) {
    if (q_cost.rows() != plant.n || q_cost.cols() != plant.n)
        throw DimensionMismatch("lqr: cost matrix is " + std::to_string(q_cost.rows()) + "x" +
                                std::to_string(q_cost.cols()) + " for dimension " +
                                std::to_string(plant.n));
    if (r_cost <= 0.0) throw ConfigError("lqr: control cost must be positive");

    auto [a, b, c] = build_matrices(plant);
    ComplexVector init_poles(plant.n);
    for (int i = 0; i < plant.n; ++i) init_poles(i) = std::complex<double>(-(i + 1), 0.0);
    RowVector k = pole_placement_gain(plant, init_poles).k;

    LqrSolution sol;
    Matrix p;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        Matrix a_cl = a + b * k;
        Matrix rhs = q_cost + k.transpose() * r_cost * k;
        try {
            p = lyapunov_solve(a_cl, 0.5 * (rhs + rhs.transpose()));
        } catch (const NotHurwitz&) {
            throw IterationDivergence("lqr: iterate lost stability");
        }
        sol.cost_traces.push_back(p.trace());
        RowVector next_k = -(1.0 / r_cost) * (b.transpose() * p);
        double step = (next_k - k).norm();
        k = next_k;
        if (step <= 1e-10) {
            converged = true;
            break;
        }
    }
    if (!converged) throw IterationDivergence("lqr: no convergence in 100 iterations");

    Matrix residual =
        a.transpose() * p + p * a - p * b * (1.0 / r_cost) * b.transpose() * p + q_cost;
    if (residual.norm() > 1e-6)
        throw IterationDivergence("lqr: Riccati residual " + std::to_string(residual.norm()));
    if (!is_hurwitz(a + b * k)) throw IterationDivergence("lqr: final gain not stabilizing");

    sol.gain.k = k;
    sol.p = p;
    return sol;
}

FeedbackGain lqr_gain(const ControllerFormPlant& p, const Matrix& q_cost, double r_cost) {
    return lqr_solve(p, q_cost, r_cost).gain;
}

Vector benchmark_oscillator_rhs(const Vector& x) {
    if (x.size() != 5)
        throw DimensionMismatch("benchmark oscillator: state has " + std::to_string(x.size()) +
                                " entries, needs 5");
    Vector dx(5);
    dx.head(4) = x.tail(4);
    dx(4) = 0.2 * (x(0) * x(0) - 1.0) - x(1) - x(2) - 4.0 * x(3) - x(4);
    return dx;
}

ControllerFormPlant random_plant(std::uint64_t seed, int n) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> coef(-5, 5);
    Vector a(n);
    for (int i = 0; i < n; ++i) a(i) = coef(gen);
    int b = 0;
    while (b == 0) b = coef(gen);
    return ControllerFormPlant(n, a, static_cast<double>(b));
}

AdaptivePlant random_adaptive_plant(std::uint64_t seed, int n, double beta) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> coef(-5, 5);
    Vector a(n - 1);
    for (int i = 0; i + 1 < n; ++i) a(i) = coef(gen);
    return AdaptivePlant(n, a, beta);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer over the combined word
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace ddc
