#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "ddc/types.hpp"

namespace ddc {

// Chain-of-integrators plant with the dynamics concentrated in the last row:
// A = [[0, I], [a_last]], B = [0, ..., 0, b_last]^T, C = [1, 0, ..., 0].
struct ControllerFormPlant {
    int n;
    Vector a_last;  // last row of A, n entries
    double b_last;  // control effectiveness, nonzero

    ControllerFormPlant(int n_, Vector a, double b);
};

// Plant of dimension n-1 driven through an integrator by the adaptation law,
// giving n states total. beta scales the control channel; the simulator knows
// its value, the controller only its sign. B of the underlying plant has last
// entry exactly 1.
struct AdaptivePlant {
    int n;          // dimension of the extended dynamics
    Vector a_last;  // last row of the (n-1)-dim A
    double beta;
    int beta_sign;

    AdaptivePlant(int n_, Vector a, double beta_);
    ControllerFormPlant underlying_plant() const;
};

struct FeedbackGain {
    RowVector k;
};

std::tuple<Matrix, Matrix, Matrix> build_matrices(const ControllerFormPlant& p);

// K with A+BK companion for the desired characteristic polynomial:
// K_j = (-c_{j-1} - a_last_j)/b_last. The pole set must be stable and closed
// under conjugation; the result is verified against an eigenvalue check.
FeedbackGain pole_placement_gain(const ControllerFormPlant& p, const ComplexVector& desired_poles);

// Kleinman iteration output. cost_traces holds trace(P_i) per iterate; the
// sequence is non-increasing when the iteration behaves.
struct LqrSolution {
    FeedbackGain gain;
    Matrix p;
    std::vector<double> cost_traces;
};

LqrSolution lqr_solve(const ControllerFormPlant& p, const Matrix& q_cost, double r_cost);
FeedbackGain lqr_gain(const ControllerFormPlant& p, const Matrix& q_cost, double r_cost);

// Fifth-order benchmark oscillator: four integrators feeding
// x5' = 0.2(x1^2 - 1) - x2 - x3 - 4 x4 - x5.
Vector benchmark_oscillator_rhs(const Vector& x);

// Randomized plants for the property suites and sweeps: a_last integer
// entries in [-5,5], b_last a nonzero integer in [-5,5].
ControllerFormPlant random_plant(std::uint64_t seed, int n);
AdaptivePlant random_adaptive_plant(std::uint64_t seed, int n, double beta);

// Stateless per-index seed derivation (splitmix64 over master ^ index) so
// sweep items can run in any order or in parallel with stable streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace ddc
