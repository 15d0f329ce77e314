#pragma once

#include <complex>

#include "ddc/types.hpp"

namespace ddc {

// Cascade of first-order derivative filters. Each stage i holds one state q_i
// and emits xhat_{i+1} = q_i + sigma*xhat_i; the estimate vector is therefore
// recomputable from (q, input) alone. With filter_first the measurement is
// low-passed into an extra leading state instead of being used raw.
struct DirtyChain {
    double sigma;
    int order;  // number of derivative stages, >= 1
    bool filter_first;
    Vector q;  // stage states; with filter_first, q(0) is the filtered measurement

    DirtyChain(double sigma_, int order_, bool filter_first_ = false);
    Index state_dimension() const { return q.size(); }
};

// Initial filter state policies. ZeroState: q = 0, so stage outputs start at
// sigma^i times the first measurement. ZeroEstimates: q_1 = -sigma*y0 (and the
// filtered measurement state, when present, starts at y0) so every derivative
// estimate starts at exactly 0.
enum class ChainInit { ZeroState, ZeroEstimates };

// Input reconstruction between samples while integrating: interpolate
// linearly at the integrator stage times, or hold the latest sample.
enum class InputHold { StageInterpolation, ZeroOrder };

void initialize_chain(DirtyChain& c, ChainInit init, double y0);

// Estimates (xhat_1 .. xhat_{order+1}) for measurement y. Pure read.
Vector chain_outputs(const DirtyChain& c, double y);

// Time derivative of the chain state for measurement y.
Vector chain_rhs(const DirtyChain& c, double y);

// Runs the chain over a uniformly sampled signal with classical RK4; row k of
// the result holds the estimates at sample k. Guards: at least 2 samples,
// dt*sigma <= 0.5.
Matrix estimate_from_samples(double sigma, int order, const Vector& samples, double dt,
                             bool filter_first, ChainInit init = ChainInit::ZeroState,
                             InputHold hold = InputHold::StageInterpolation);

// One differentiator stage in the frequency domain: sigma*i*omega/(i*omega + sigma).
std::complex<double> frequency_response(double sigma, double omega);

}  // namespace ddc
