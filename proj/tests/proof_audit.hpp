#pragma once

// Numeric audit of every per-point inequality behind the two stability
// thresholds. Each point is checked on random (x, e, e_u) samples with the
// constants the certificate actually computed; a violation beyond rounding
// slack means the implemented constants do not dominate that proof step.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ddc/certificates.hpp"
#include "ddc/closed_loop.hpp"
#include "ddc/plant.hpp"

namespace proof_audit {

struct Outcome {
    long samples = 0;
    long violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();  // min slack seen
    std::string first_violation;
};

namespace detail {

inline void check(Outcome& out, const char* label, double lhs, double rhs) {
    double slack = rhs - lhs;
    double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    out.worst_margin = std::min(out.worst_margin, slack / scale);
    if (slack < -1e-12 * scale) {
        ++out.violations;
        if (out.first_violation.empty())
            out.first_violation = std::string(label) + ": lhs " + std::to_string(lhs) + " rhs " +
                                  std::to_string(rhs);
    }
}

inline ddc::Vector random_vec(std::mt19937_64& gen, ddc::Index size, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ddc::Vector v(size);
    for (ddc::Index i = 0; i < size; ++i) v(i) = scale * u(gen);
    return v;
}

}  // namespace detail

// Appendix points behind the Theorem-1 threshold, sampled at the plant's
// dimension. e is indexed through ddc::error_index.
inline Outcome audit_thm1(const ddc::ControllerFormPlant& plant, const ddc::FeedbackGain& gain,
                          const ddc::Thm1Certificate& cert, long samples, std::uint64_t seed) {
    using ddc::Vector;
    const int n = plant.n;
    auto [a, b, c] = ddc::build_matrices(plant);
    const ddc::Matrix pbk = cert.p_mat * b * gain.k;
    const ddc::RowVector bnk = plant.b_last * gain.k;
    const double eps = cert.epsilon;

    Outcome out;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> mag(-2.0, 2.0);
    for (long trial = 0; trial < samples; ++trial) {
        double xs = std::pow(10.0, mag(gen));
        double es = std::pow(10.0, mag(gen));
        Vector x = detail::random_vec(gen, n, xs);
        Vector e = detail::random_vec(gen, n * (n + 1) / 2, es);
        double sum_e2 = e.squaredNorm();
        Vector e0(n);
        for (int i = 1; i <= n; ++i) e0(i - 1) = e(ddc::error_index(n, i, 0));
        double anti = 0.0;  // sum of e_{i,n-i}
        for (int i = 1; i <= n; ++i) anti += e(ddc::error_index(n, i, n - i));

        // 1: quadratic lower bound of the chosen Q
        detail::check(out, "t1p1", cert.lambda * x.squaredNorm(), x.dot(cert.q_mat * x));
        // 2: plant-estimate coupling through PBK
        detail::check(out, "t1p2", 2.0 * x.dot(pbk * e0),
                      eps * x.squaredNorm() + cert.norm_pbk * cert.norm_pbk / eps * sum_e2);
        // 3: K* cross term against the anti-diagonal sum
        double kstar_x = cert.k_star.dot(x);
        detail::check(out, "t1p3", -2.0 * kstar_x * anti,
                      eps * cert.k_star.squaredNorm() * x.squaredNorm() + cert.c1 / eps * sum_e2);
        // 4: gain-error coupling, x-free
        detail::check(out, "t1p4", -2.0 * bnk.dot(e0) * anti,
                      (cert.norm_bnk * cert.norm_bnk + cert.c2) * sum_e2);
        // 5: shifted-state cross sum
        double cross = 0.0;
        for (int i = 1; i + 1 <= n; ++i)
            for (int j = 0; i + j + 1 <= n; ++j) cross += e(ddc::error_index(n, i, j)) * x(i + j);
        detail::check(out, "t1p5", -2.0 * cross,
                      eps * cert.c3 * x.squaredNorm() + cert.c4 / eps * sum_e2);
        // 6: Lemma-2 chain decay core (sigma factored out)
        double chain_form = sum_e2;
        for (int i = 1; i <= n; ++i)
            for (int j = 0; j + 1 <= n - i; ++j)
                chain_form -= e(ddc::error_index(n, i, j)) * e(ddc::error_index(n, i, j + 1));
        detail::check(out, "t1p6", cert.d * sum_e2, chain_form);

        ++out.samples;
    }
    return out;
}

// Appendix points behind the Theorem-2 thresholds. x here is the state of the
// underlying plant (dimension n-1); gamma is sampled per trial.
inline Outcome audit_thm2(const ddc::AdaptivePlant& plant, const ddc::FeedbackGain& gain,
                          const ddc::Thm2Certificate& cert, long samples, std::uint64_t seed) {
    using ddc::Vector;
    const int n = plant.n;
    const int m = n - 1;
    // same reduced loop matrix the certificate uses: shift chain plus B K
    auto [a, b, c] = ddc::build_matrices(ddc::ControllerFormPlant(m, ddc::Vector::Zero(m), 1.0));
    const ddc::Matrix a_cl = a + b * gain.k;
    const Vector pb = cert.p_mat * b;
    const ddc::RowVector kbar_acl = cert.k_bar * a_cl;
    const ddc::RowVector an_acl = plant.a_last.transpose() * a_cl;
    const double eps = cert.epsilon;
    const double beta = plant.beta;

    Outcome out;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> mag(-2.0, 2.0);
    std::uniform_real_distribution<double> gdist(0.01, 10.0);
    for (long trial = 0; trial < samples; ++trial) {
        double xs = std::pow(10.0, mag(gen));
        double es = std::pow(10.0, mag(gen));
        Vector x = detail::random_vec(gen, m, xs);
        Vector e = detail::random_vec(gen, n * (n + 1) / 2, es);
        double e_u = es * std::uniform_real_distribution<double>(-1.0, 1.0)(gen);
        double gamma = gdist(gen);
        double bg = beta * gamma;
        double sum_e2 = e.squaredNorm();
        Vector e0(m);
        for (int i = 1; i <= m; ++i) e0(i - 1) = e(ddc::error_index(n, i, 0));
        double e_n = e(ddc::error_index(n, n, 0));
        double anti = 0.0;  // sum of e_{i,n-i}
        for (int i = 1; i <= n; ++i) anti += e(ddc::error_index(n, i, n - i));
        double feedback_err = e_n - gain.k.dot(e0);

        // 1: quadratic lower bound of Q
        detail::check(out, "t2p1", cert.lambda * x.squaredNorm(), x.dot(cert.q_mat * x));
        // 2: plant coupling to e_u through PB
        detail::check(out, "t2p2", 2.0 * x.dot(pb) * e_u,
                      eps * x.squaredNorm() + cert.norm_pb * cert.norm_pb / eps * e_u * e_u);
        // 3: adaptation coupling, estimate errors
        detail::check(out, "t2p3", -2.0 * e_u * bg * feedback_err,
                      e_u * e_u + bg * bg * cert.c1 * sum_e2);
        // 4: e_u against the closed-loop drift
        detail::check(out, "t2p4", -2.0 * e_u * kbar_acl.dot(x),
                      eps * x.squaredNorm() +
                          cert.norm_kbar_acl * cert.norm_kbar_acl / eps * e_u * e_u);
        // 5: adaptation coupling, anti-diagonal sum
        detail::check(out, "t2p5", -2.0 * bg * e_u * anti,
                      e_u * e_u + bg * bg * cert.c2 * sum_e2);
        // 6: estimate-error self coupling (gamma-free after dividing by beta*gamma > 0)
        detail::check(out, "t2p6", -2.0 * feedback_err * anti, cert.c3 * sum_e2);
        // 7: plant drift against the anti-diagonal sum
        detail::check(out, "t2p7", -2.0 * an_acl.dot(x) * anti,
                      eps * x.squaredNorm() + cert.c4 / eps * sum_e2);
        // 8: control-direction coupling
        detail::check(out, "t2p8", -2.0 * cert.an_b * e_u * anti,
                      e_u * e_u + cert.an_b * cert.an_b * cert.c5 * sum_e2);
        // 9: shifted-state cross sum with x_n rewritten as e_u + Kx
        double s_last = 0.0;  // sum of e_{i,n-i-1}, the terms multiplying x_n
        for (int i = 1; i + 1 <= n; ++i) s_last += e(ddc::error_index(n, i, n - i - 1));
        double cross = 0.0;  // remaining terms, x index within the plant state
        for (int i = 1; i + 2 <= n; ++i)
            for (int j = 0; i + j + 2 <= n; ++j) cross += e(ddc::error_index(n, i, j)) * x(i + j);
        double lhs9 = -2.0 * cross - 2.0 * (gain.k.dot(x) + e_u) * s_last;
        double rhs9 = eps * cert.c6 * x.squaredNorm() + cert.c7 / eps * sum_e2 + e_u * e_u +
                      (n - 1) * sum_e2;
        detail::check(out, "t2p9", lhs9, rhs9);
        // 10: Lemma-2 chain decay core
        double chain_form = sum_e2;
        for (int i = 1; i <= n; ++i)
            for (int j = 0; j + 1 <= n - i; ++j)
                chain_form -= e(ddc::error_index(n, i, j)) * e(ddc::error_index(n, i, j + 1));
        detail::check(out, "t2p10", cert.d * sum_e2, chain_form);

        ++out.samples;
    }
    return out;
}

}  // namespace proof_audit
