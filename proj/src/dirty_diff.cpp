#include "ddc/dirty_diff.hpp"

#include <cmath>
#include <string>

namespace ddc {

DirtyChain::DirtyChain(double sigma_, int order_, bool filter_first_)
    : sigma(sigma_), order(order_), filter_first(filter_first_) {
    if (!(sigma > 0.0)) throw ConfigError("dirty chain: sigma must be positive");
    if (order < 1) throw ConfigError("dirty chain: order must be at least 1");
    q = Vector::Zero(order + (filter_first ? 1 : 0));
}

void initialize_chain(DirtyChain& c, ChainInit init, double y0) {
    c.q.setZero();
    if (init == ChainInit::ZeroEstimates) {
        if (c.filter_first) {
            c.q(0) = y0;          // filtered measurement starts on the signal
            c.q(1) = -c.sigma * y0;  // first stage cancels sigma*xhat_1
        } else {
            c.q(0) = -c.sigma * y0;
        }
    }
}

Vector chain_outputs(const DirtyChain& c, double y) {
    Vector out(c.order + 1);
    const int base = c.filter_first ? 1 : 0;
    out(0) = c.filter_first ? c.q(0) : y;
    for (int i = 0; i < c.order; ++i) out(i + 1) = c.q(base + i) + c.sigma * out(i);
    return out;
}

Vector chain_rhs(const DirtyChain& c, double y) {
    Vector est = chain_outputs(c, y);
    Vector dq(c.q.size());
    const int base = c.filter_first ? 1 : 0;
    if (c.filter_first) dq(0) = -c.sigma * (c.q(0) - y);
    for (int i = 0; i < c.order; ++i) dq(base + i) = -c.sigma * (c.q(base + i) + c.sigma * est(i));
    return dq;
}

Matrix estimate_from_samples(double sigma, int order, const Vector& samples, double dt,
                             bool filter_first, ChainInit init, InputHold hold) {
    if (samples.size() < 2)
        throw EmptyInput("estimate_from_samples: need at least 2 samples, got " +
                         std::to_string(samples.size()));
    if (!(dt > 0.0)) throw ConfigError("estimate_from_samples: dt must be positive");
    if (dt * sigma > 0.5)
        throw StepTooLarge("estimate_from_samples: dt*sigma = " + std::to_string(dt * sigma) +
                           " exceeds 0.5");

    DirtyChain chain(sigma, order, filter_first);
    initialize_chain(chain, init, samples(0));

    const Index count = samples.size();
    Matrix out(count, order + 1);
    out.row(0) = chain_outputs(chain, samples(0)).transpose();

    Vector state = chain.q;
    for (Index k = 0; k + 1 < count; ++k) {
        const double y0 = samples(k);
        const double y1 = samples(k + 1);
        const double ym = hold == InputHold::ZeroOrder ? y0 : 0.5 * (y0 + y1);
        const double ye = hold == InputHold::ZeroOrder ? y0 : y1;
        auto f = [&](const Vector& s, double y) {
            chain.q = s;
            return chain_rhs(chain, y);
        };
        Vector k1 = f(state, y0);
        Vector k2 = f(state + 0.5 * dt * k1, ym);
        Vector k3 = f(state + 0.5 * dt * k2, ym);
        Vector k4 = f(state + dt * k3, ye);
        state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        chain.q = state;
        out.row(k + 1) = chain_outputs(chain, y1).transpose();
    }
    return out;
}

std::complex<double> frequency_response(double sigma, double omega) {
    if (!(sigma > 0.0)) throw ConfigError("frequency_response: sigma must be positive");
    const std::complex<double> iw(0.0, omega);
    return sigma * iw / (iw + sigma);
}

}  // namespace ddc
