#include "ddc/certificates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <string>
#include <thread>

#include "ddc/closed_loop.hpp"
#include "ddc/numerics.hpp"

namespace ddc {

namespace {

// min eigenvalue of q, rejecting anything that is not symmetric positive definite
double definite_lower_bound(const Matrix& q) {
    double lo = symmetric_extreme_eigs(q).first;
    if (!(lo > 0.0)) throw ConfigError("certify: cost matrix must be positive definite");
    return lo;
}

double min_chain_decay(int n) {
    double d = lemma2_constant(1);
    for (int k = 2; k <= n; ++k) d = std::min(d, lemma2_constant(k));
    return d;
}

template <typename Fn>
void run_indexed(int count, int jobs, Fn&& fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            try {
                for (int i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& ep : errors)
        if (ep) std::rethrow_exception(ep);
}

ComplexVector ladder_poles(int count) {
    ComplexVector poles(count);
    for (int i = 0; i < count; ++i) poles(i) = std::complex<double>(-(i + 1), 0.0);
    return poles;
}

}  // namespace

double lemma2_constant(int k) {
    if (k < 1) throw ConfigError("lemma2_constant: chain length must be positive");
    Matrix m = Matrix::Identity(k, k);
    for (int i = 0; i + 1 < k; ++i) {
        m(i, i + 1) = -0.5;
        m(i + 1, i) = -0.5;
    }
    return symmetric_extreme_eigs(m).first;
}

double sum_square_constant(int n) {
    if (n < 1) throw ConfigError("sum_square_constant: need a positive count");
    return static_cast<double>(n);
}

std::pair<double, double> cross_term_constants(int n) {
    if (n < 1) throw ConfigError("cross_term_constants: need a positive dimension");
    if (n == 1) return {0.0, 0.0};
    return {static_cast<double>(n - 1), 1.0};
}

Thm1Certificate certify_thm1(const ControllerFormPlant& plant, const FeedbackGain& gain,
                             const Matrix& q_mat) {
    const int n = plant.n;
    if (gain.k.size() != n) throw DimensionMismatch("certify_thm1: gain size vs plant order");
    auto [a, b, c] = build_matrices(plant);
    Matrix a_cl = a + b * gain.k;
    if (!is_hurwitz(a_cl)) throw NotStabilizing("certify_thm1: A + BK is not Hurwitz");

    Thm1Certificate cert;
    cert.q_mat = q_mat;
    cert.lambda = definite_lower_bound(q_mat);
    cert.p_mat = lyapunov_solve(a_cl, q_mat);
    cert.k_star = plant.a_last.transpose() + plant.b_last * gain.k;
    cert.c1 = sum_square_constant(n);
    cert.c2 = sum_square_constant(n);
    auto [c3, c4] = cross_term_constants(n);
    cert.c3 = c3;
    cert.c4 = c4;
    cert.d = min_chain_decay(n);
    cert.epsilon = 0.5 * cert.lambda / (1.0 + cert.c3 + cert.k_star.squaredNorm());
    cert.norm_pbk = (cert.p_mat * b * gain.k).norm();
    cert.norm_bnk = (plant.b_last * gain.k).norm();
    cert.sigma_bar = ((cert.norm_pbk * cert.norm_pbk + cert.c1 + cert.c4) / cert.epsilon +
                      cert.norm_bnk * cert.norm_bnk + cert.c2) /
                     (2.0 * cert.d);
    return cert;
}

Thm1Certificate certify_thm1(const ControllerFormPlant& plant, const FeedbackGain& gain) {
    return certify_thm1(plant, gain, Matrix::Identity(plant.n, plant.n));
}

double Thm2Certificate::sigma_bar_for(double gamma) const {
    double bg = beta * gamma;
    return (bg * bg * (c1 + c2) + bg * c3 + (c4 + c7) / epsilon + an_b * an_b * c5 + (n - 1)) /
           (2.0 * d);
}

Thm2Certificate certify_thm2(const AdaptivePlant& plant, const FeedbackGain& gain,
                             const Matrix& q_mat, std::optional<double> gamma_eval) {
    if (!(plant.beta > 0.0))
        throw SignMismatch("certify_thm2: analysis uses the beta > 0 normal form");
    if (gamma_eval && !(*gamma_eval > 0.0))
        throw SignMismatch("certify_thm2: evaluation gamma must be positive");
    const int n = plant.n;
    const int m = n - 1;
    if (gain.k.size() != m) throw DimensionMismatch("certify_thm2: gain size vs plant order");
    // In the reduced coordinates w = x_{1:n-1} the plant row feeds x_n alone,
    // so the matrix K has to stabilize is the bare shift chain plus B K.
    ControllerFormPlant chain(m, Vector::Zero(m), 1.0);
    auto [a, b, c] = build_matrices(chain);
    Matrix a_cl = a + b * gain.k;
    if (!is_hurwitz(a_cl)) throw NotStabilizing("certify_thm2: shift chain plus B K is not Hurwitz");

    Thm2Certificate cert;
    cert.n = n;
    cert.q_mat = q_mat;
    cert.lambda = definite_lower_bound(q_mat);
    cert.p_mat = lyapunov_solve(a_cl, q_mat);
    cert.k_bar = gain.k - plant.a_last.transpose();
    cert.beta = plant.beta;
    double k2 = gain.k.squaredNorm();
    cert.c1 = 1.0 + k2;
    cert.c2 = sum_square_constant(n);
    cert.c3 = std::sqrt(n * (1.0 + k2)) - 1.0;
    cert.c4 = n * (plant.a_last.transpose() * a_cl).squaredNorm();
    cert.c5 = sum_square_constant(n);
    cert.c6 = static_cast<double>(std::max(n - 2, 0)) + k2;
    cert.c7 = static_cast<double>(n);
    cert.d = min_chain_decay(n);
    cert.epsilon = 0.5 * cert.lambda / (3.0 + cert.c6);
    cert.norm_pb = (cert.p_mat * b).norm();
    cert.norm_kbar_acl = (cert.k_bar * a_cl).norm();
    cert.kbar_b = (cert.k_bar * b)(0);
    cert.an_b = (plant.a_last.transpose() * b)(0);
    cert.gamma_bar = ((cert.norm_pb * cert.norm_pb + cert.norm_kbar_acl * cert.norm_kbar_acl) /
                          cert.epsilon -
                      2.0 * cert.kbar_b + 4.0) /
                     (2.0 * cert.beta);
    // the sign condition already restricts gamma to positives, so a degenerate
    // nonpositive bracket collapses the threshold to that restriction alone
    cert.gamma_bar = std::max(cert.gamma_bar, 1e-9);
    cert.gamma_eval = gamma_eval ? *gamma_eval : 1.01 * cert.gamma_bar;
    cert.sigma_bar = cert.sigma_bar_for(cert.gamma_eval);
    return cert;
}

Thm2Certificate certify_thm2(const AdaptivePlant& plant, const FeedbackGain& gain) {
    return certify_thm2(plant, gain, Matrix::Identity(plant.n - 1, plant.n - 1));
}

namespace {

double minimal_sigma_scan(const std::function<bool(double)>& stable, double search_cap) {
    if (!(search_cap > 0.0)) throw ConfigError("minimal_sigma: search cap must be positive");
    if (!stable(search_cap))
        throw UnstableAtCap("minimal_sigma: unstable at the search cap " +
                            std::to_string(search_cap));

    const double floor = 1e-9;
    if (search_cap <= floor) return 0.0;
    constexpr int kScanPoints = 64;
    const double ratio = std::pow(search_cap / floor, 1.0 / (kScanPoints - 1));

    double hi = search_cap;
    double lo = 0.0;
    for (int i = kScanPoints - 2; i >= 0; --i) {
        double s = floor * std::pow(ratio, i);
        if (stable(s)) {
            hi = s;
        } else {
            lo = s;
            break;
        }
    }
    if (lo == 0.0) return 0.0;  // stable on the whole scanned range

    while (hi - lo > 1e-6 * hi) {
        double mid = std::sqrt(lo * hi);
        if (stable(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

double minimal_sigma(const std::function<Matrix(double)>& builder, double search_cap) {
    return minimal_sigma_scan(
        [&](double s) { return eigenvalues(builder(s)).abscissa < 0.0; }, search_cap);
}

double minimal_sigma(const ControllerFormPlant& plant, const FeedbackGain& gain,
                     double search_cap) {
    return minimal_sigma_scan(
        [&](double s) {
            try {
                return augmented_spectrum(build_aug_thm1(plant, gain, s)).abscissa < 0.0;
            } catch (const ConvergenceFailure&) {
                return false;  // unverifiable grading counts as unstable
            }
        },
        search_cap);
}

double minimal_sigma(const AdaptivePlant& plant, const FeedbackGain& gain, double gamma,
                     double search_cap) {
    return minimal_sigma_scan(
        [&](double s) {
            try {
                return augmented_spectrum(build_aug_thm2(plant, gain, gamma, s)).abscissa < 0.0;
            } catch (const ConvergenceFailure&) {
                return false;
            }
        },
        search_cap);
}

std::vector<SweepRecord> thm1_soundness_sweep(std::uint64_t master_seed, int count,
                                              const std::vector<double>& multipliers, int jobs) {
    std::vector<SweepRecord> records(static_cast<std::size_t>(std::max(count, 0)));
    run_indexed(count, jobs, [&](int index) {
        std::uint64_t seed = derive_seed(master_seed, index);
        int n = 1 + index % 6;
        auto plant = random_plant(seed, n);
        auto gain = pole_placement_gain(plant, ladder_poles(n));
        auto cert = certify_thm1(plant, gain);

        SweepRecord rec;
        rec.seed = seed;
        rec.n = n;
        rec.beta = 0.0;
        rec.gamma_bar = 0.0;
        rec.sigma_bar = cert.sigma_bar;
        rec.pass = true;
        for (double mult : multipliers) {
            auto sys = build_aug_thm1(plant, gain, mult * cert.sigma_bar);
            double abscissa = augmented_spectrum(sys).abscissa;
            rec.abscissas.push_back(abscissa);
            if (!(abscissa < 0.0)) rec.pass = false;
        }
        records[static_cast<std::size_t>(index)] = std::move(rec);
    });
    return records;
}

std::vector<SweepRecord> thm2_soundness_sweep(std::uint64_t master_seed, int count,
                                              const std::vector<double>& multipliers, int jobs) {
    static constexpr double kBetas[] = {0.5, 1.0, 2.0};
    std::vector<SweepRecord> records(static_cast<std::size_t>(std::max(count, 0)));
    run_indexed(count, jobs, [&](int index) {
        std::uint64_t seed = derive_seed(master_seed, index);
        int n = 2 + index % 6;
        double beta = kBetas[(index / 6) % 3];
        auto plant = random_adaptive_plant(seed, n, beta);
        auto gain = pole_placement_gain(ControllerFormPlant(n - 1, Vector::Zero(n - 1), 1.0),
                                        ladder_poles(n - 1));
        auto cert = certify_thm2(plant, gain);

        SweepRecord rec;
        rec.seed = seed;
        rec.n = n;
        rec.beta = beta;
        rec.gamma_bar = cert.gamma_bar;
        rec.sigma_bar = cert.sigma_bar;
        rec.pass = true;
        for (double mult : multipliers) {
            double gamma = mult * cert.gamma_bar;
            double sigma = mult * cert.sigma_bar_for(gamma);
            auto sys = build_aug_thm2(plant, gain, gamma, sigma);
            double abscissa = augmented_spectrum(sys).abscissa;
            rec.abscissas.push_back(abscissa);
            if (!(abscissa < 0.0)) rec.pass = false;
        }
        records[static_cast<std::size_t>(index)] = std::move(rec);
    });
    return records;
}

}  // namespace ddc
