#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ddc/plant.hpp"
#include "ddc/types.hpp"

namespace ddc {

// Smallest eigenvalue d_k of the k x k chain-coupling form (1 on the
// diagonal, -1/2 on the off-diagonals): the decay rate the estimator chain
// retains after its cross terms are absorbed.
double lemma2_constant(int k);

// Tight constant c with (sum z_i)^2 <= c * sum z_i^2: the all-ones spectrum, n.
double sum_square_constant(int n);

// (c3, c4) bounding the shifted-state cross sum: c3 counts the worst number
// of error terms sharing one state index (n-1), c4 = 1 because the paired
// error squares form a sub-sum of the full error sum. (0, 0) when the sum is
// empty at n = 1.
std::pair<double, double> cross_term_constants(int n);

// Everything behind the sigma threshold of the static output-feedback loop,
// kept for reports and audits.
struct Thm1Certificate {
    Matrix p_mat, q_mat;
    double lambda;     // smallest eigenvalue of q_mat
    RowVector k_star;  // A_n + B_n K
    double c1, c2, c3, c4;
    double d;
    double epsilon;
    double norm_pbk;  // ||P B K||
    double norm_bnk;  // ||B_n K||
    double sigma_bar;
};

Thm1Certificate certify_thm1(const ControllerFormPlant& p, const FeedbackGain& k,
                             const Matrix& q_mat);
Thm1Certificate certify_thm1(const ControllerFormPlant& p, const FeedbackGain& k);

// Thresholds for the adaptation loop. sigma_bar depends on the gamma actually
// used; the stored value is evaluated at gamma_eval (default 1.01*gamma_bar)
// and sigma_bar_for re-evaluates at any other gamma.
struct Thm2Certificate {
    int n;  // extended dimension
    Matrix p_mat, q_mat;
    double lambda;
    RowVector k_bar;  // K - A_n
    double c1, c2, c3, c4, c5, c6, c7;
    double d;
    double epsilon;
    double beta;
    double norm_pb;        // ||P B||
    double norm_kbar_acl;  // ||(K - A_n)(A + B K)||
    double kbar_b;         // (K - A_n) B
    double an_b;           // A_n B (last coefficient of A_n)
    double gamma_bar;
    double gamma_eval;
    double sigma_bar;

    double sigma_bar_for(double gamma) const;
};

Thm2Certificate certify_thm2(const AdaptivePlant& p, const FeedbackGain& k, const Matrix& q_mat,
                             std::optional<double> gamma_eval = std::nullopt);
Thm2Certificate certify_thm2(const AdaptivePlant& p, const FeedbackGain& k);

// Infimum of the stabilizing sigma region touching search_cap, by geometric
// scan plus bisection on the spectral abscissa sign (strictly negative counts
// as stable here so an everywhere-stable loop reports exactly 0). Relative
// tolerance 1e-6; throws UnstableAtCap when even search_cap is unstable.
double minimal_sigma(const std::function<Matrix(double)>& builder, double search_cap);

// Same search for the two standard loops, with spectra taken through
// augmented_spectrum so the scan stays trustworthy when the cap reaches
// certified thresholds far beyond dense-eigensolver grading limits. A sigma
// whose spectrum cannot be certified either way counts as unstable, so the
// result is always a verified-stable threshold.
double minimal_sigma(const ControllerFormPlant& p, const FeedbackGain& k, double search_cap);
double minimal_sigma(const AdaptivePlant& p, const FeedbackGain& k, double gamma,
                     double search_cap);

// One randomized closed loop checked at every requested threshold multiple.
struct SweepRecord {
    std::uint64_t seed;
    int n;
    double beta;       // 0 for the static loop
    double gamma_bar;  // 0 for the static loop
    double sigma_bar;
    std::vector<double> abscissas;
    bool pass;
};

// Randomized soundness sweeps: integer-coefficient plants, pole-placement
// gains, stability demanded at each multiplier times the certified threshold
// (for the adaptation loop the multiplier scales gamma first, then the sigma
// threshold re-evaluated at that gamma). Deterministic per (master_seed,
// index); jobs > 1 splits the index range across threads.
std::vector<SweepRecord> thm1_soundness_sweep(std::uint64_t master_seed, int count,
                                              const std::vector<double>& multipliers,
                                              int jobs = 1);
std::vector<SweepRecord> thm2_soundness_sweep(std::uint64_t master_seed, int count,
                                              const std::vector<double>& multipliers,
                                              int jobs = 1);

}  // namespace ddc
