#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ddc/dirty_diff.hpp"
#include "oracles.hpp"

using ddc::Matrix;
using ddc::Vector;

TEST_CASE("chain_outputs: hand substitutions") {
    ddc::DirtyChain zero(2.0, 3);
    Vector out0 = ddc::chain_outputs(zero, 0.0);
    CHECK(out0.size() == 4);
    CHECK(out0.cwiseAbs().maxCoeff() == 0.0);

    ddc::DirtyChain c1(2.0, 1);
    c1.q(0) = 3.0;
    Vector out1 = ddc::chain_outputs(c1, 1.0);
    CHECK(out1(0) == 1.0);
    CHECK(out1(1) == 5.0);

    ddc::DirtyChain c2(1.0, 2);
    c2.q(0) = -1.0;
    c2.q(1) = 0.0;
    Vector out2 = ddc::chain_outputs(c2, 1.0);
    CHECK(out2(0) == 1.0);
    CHECK(out2(1) == 0.0);
    CHECK(out2(2) == 0.0);
}

TEST_CASE("chain_outputs: pure read") {
    ddc::DirtyChain c(3.0, 2);
    c.q(0) = 0.5;
    c.q(1) = -0.25;
    Vector first = ddc::chain_outputs(c, 2.0);
    Vector second = ddc::chain_outputs(c, 2.0);
    CHECK((first - second).cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.q(0) == 0.5);
    CHECK(c.q(1) == -0.25);
}

TEST_CASE("chain_rhs: hand substitutions") {
    ddc::DirtyChain zero(1.0, 2);
    CHECK(ddc::chain_rhs(zero, 0.0).cwiseAbs().maxCoeff() == 0.0);

    // Steady state under constant input: q1 = -sigma*c balances exactly.
    const double c = 0.7;
    ddc::DirtyChain steady(2.0, 1);
    steady.q(0) = -2.0 * c;
    CHECK(ddc::chain_rhs(steady, c)(0) == 0.0);
    CHECK(ddc::chain_outputs(steady, c)(1) == 0.0);

    ddc::DirtyChain step(1.0, 1);
    CHECK(ddc::chain_rhs(step, 1.0)(0) == -1.0);
}

TEST_CASE("chain validation and filtered first stage") {
    CHECK_THROWS_AS(ddc::DirtyChain(0.0, 1), ddc::ConfigError);
    CHECK_THROWS_AS(ddc::DirtyChain(-1.0, 1), ddc::ConfigError);
    CHECK_THROWS_AS(ddc::DirtyChain(1.0, 0), ddc::ConfigError);

    ddc::DirtyChain f(2.0, 1, true);
    CHECK(f.q.size() == 2);  // filtered measurement state + one stage
    f.q(0) = 0.25;           // xhat_1
    f.q(1) = 1.0;            // stage state
    Vector out = ddc::chain_outputs(f, 9.0);  // y only drives the rhs, not outputs
    CHECK(out(0) == 0.25);
    CHECK(out(1) == doctest::Approx(1.0 + 2.0 * 0.25).epsilon(1e-15));
    Vector rhs = ddc::chain_rhs(f, 9.0);
    CHECK(rhs(0) == doctest::Approx(-2.0 * (0.25 - 9.0)).epsilon(1e-15));
    CHECK(rhs(1) == doctest::Approx(-2.0 * (1.0 + 2.0 * 0.25)).epsilon(1e-15));
}

TEST_CASE("estimate_from_samples: guards") {
    Vector two = Vector::Zero(2);
    CHECK_THROWS_AS(ddc::estimate_from_samples(100.0, 1, two, 0.01, false), ddc::StepTooLarge);
    CHECK_THROWS_AS(ddc::estimate_from_samples(1.0, 1, Vector::Zero(1), 0.01, false),
                    ddc::EmptyInput);
    CHECK_THROWS_AS(ddc::estimate_from_samples(1.0, 1, Vector::Zero(0), 0.01, false),
                    ddc::EmptyInput);
}

TEST_CASE("estimate_from_samples: constant input decays inside the analytic envelope") {
    const double sigma = 5.0;
    const double c = 0.3;
    const double dt = 1e-4;
    const int steps = 40000;  // t = 4, so sigma*c*e^{-sigma t} ~ 3e-9
    Vector samples = Vector::Constant(steps + 1, c);
    Matrix est = ddc::estimate_from_samples(sigma, 1, samples, dt, false);
    CHECK(est.rows() == steps + 1);
    CHECK(est.cols() == 2);
    // zero-state init: xhat2(0) = sigma*c, then exponential decay
    CHECK(est(0, 1) == doctest::Approx(sigma * c).epsilon(1e-12));
    for (int k = 0; k <= steps; k += 50) {
        double bound = sigma * c * std::exp(-sigma * k * dt) + 1e-9;
        CHECK(std::abs(est(k, 1)) <= bound);
    }
    CHECK(std::abs(est(steps, 1)) <= 1e-6);
}

TEST_CASE("estimate_from_samples: ramp tracks the analytic step response") {
    const double sigma = 5.0;
    const double dt = 1e-5;
    const int steps = 100000;  // t = 1
    Vector samples(steps + 1);
    for (int k = 0; k <= steps; ++k) samples(k) = k * dt;
    Matrix est = ddc::estimate_from_samples(sigma, 1, samples, dt, false);
    double worst = 0.0;
    for (int k = 0; k <= steps; ++k) {
        double t = k * dt;
        double want = 1.0 - std::exp(-sigma * t);
        worst = std::max(worst, std::abs(est(k, 1) - want));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("estimate_from_samples: sine amplitude approaches the frequency response") {
    const double sigma = 100.0;
    const double dt = 1e-4;
    const int steps = 200000;  // t = 20, transient long gone
    Vector samples(steps + 1);
    for (int k = 0; k <= steps; ++k) samples(k) = std::sin(k * dt);
    Matrix est = ddc::estimate_from_samples(sigma, 1, samples, dt, false);
    double amp = 0.0;
    int tail_start = steps - static_cast<int>(2 * M_PI / dt);  // one period
    for (int k = tail_start; k <= steps; ++k) amp = std::max(amp, std::abs(est(k, 1)));
    double want = std::abs(ddc::frequency_response(sigma, 1.0));
    CHECK(want == doctest::Approx(sigma / std::sqrt(1.0 + sigma * sigma)).epsilon(1e-12));
    CHECK(amp == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("estimate_from_samples: stage 2 equals a low-passed analytic derivative") {
    // Independent oracle: exact exponential-integrator propagation of
    // w' = -sigma (w - cos t), the pole-sigma low-pass of d/dt sin t.
    const double dt = 1e-5;
    const int steps = 100000;  // t = 1
    for (double sigma : {1.0, 5.0, 25.0}) {
        Vector samples(steps + 1);
        for (int k = 0; k <= steps; ++k) samples(k) = std::sin(k * dt);
        Matrix est = ddc::estimate_from_samples(sigma, 1, samples, dt, false);

        double w = 0.0;
        double rms = 0.0;
        const std::complex<double> pole(sigma, 1.0);
        const double decay = std::exp(-sigma * dt);
        for (int k = 0; k <= steps; ++k) {
            double diff = est(k, 1) - w;
            rms += diff * diff;
            // advance the oracle: w(t+dt) = e^{-s dt} w + Re[s e^{i t}(e^{(s+i)dt}-1)/(s+i)] e^{-s dt}
            std::complex<double> phase(0.0, k * dt);
            std::complex<double> inc =
                sigma * std::exp(phase) * (std::exp(pole * dt) - 1.0) / pole;
            w = decay * (w + inc.real());
        }
        rms = std::sqrt(rms / (steps + 1));
        CHECK(rms <= 1e-4);
    }
}

TEST_CASE("estimate_from_samples: linear in the input") {
    auto gen = test_support::rng(81);
    const double dt = 1e-3;
    const int steps = 500;
    Vector y1(steps + 1), y2(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        y1(k) = std::sin(3 * k * dt) + 0.2 * std::cos(17 * k * dt);
        y2(k) = std::exp(-k * dt) * std::cos(5 * k * dt);
    }
    const double a = 1.7, b = -0.4;
    for (bool ff : {false, true}) {
        Matrix ea = ddc::estimate_from_samples(20.0, 3, y1, dt, ff);
        Matrix eb = ddc::estimate_from_samples(20.0, 3, y2, dt, ff);
        Matrix eab = ddc::estimate_from_samples(20.0, 3, a * y1 + b * y2, dt, ff);
        double scale = eab.cwiseAbs().maxCoeff();
        CHECK((eab - (a * ea + b * eb)).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale));
    }
    (void)gen;
}

TEST_CASE("estimate_from_samples: zero-estimate initialization starts flat") {
    const double sigma = 10.0;
    const double dt = 1e-4;
    Vector samples = Vector::Constant(101, 2.5);
    Matrix est = ddc::estimate_from_samples(sigma, 2, samples, dt, false,
                                            ddc::ChainInit::ZeroEstimates);
    CHECK(est(0, 0) == 2.5);
    CHECK(std::abs(est(0, 1)) <= 1e-12);
    CHECK(std::abs(est(0, 2)) <= 1e-12);
    // constant input and flat start: estimates stay at zero
    CHECK(est.col(1).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(est.col(2).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("frequency_response: fixed points") {
    CHECK(std::abs(ddc::frequency_response(3.0, 0.0)) == 0.0);
    auto at_sigma = ddc::frequency_response(4.0, 4.0);
    CHECK(std::abs(at_sigma) == doctest::Approx(4.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(at_sigma.real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(at_sigma.imag() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(ddc::frequency_response(7.0, 1e9)) == doctest::Approx(7.0).epsilon(1e-6));
}
