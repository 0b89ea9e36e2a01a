#include "phsub/series.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace phsub {

namespace {

// |∂_λ log p_n| ≤ slope · (n+1) for every n.
double score_slope(const StateModel &model) {
    double l = model.lambda();
    switch (model.family()) {
        case Family::Thermal:
            return 1.0 / l;
        case Family::Subtracted:
            return 3.0 / l;
        case Family::Added:
            return 2.0 / l;
        case Family::RealisticAccepted:
            return 2.0 / l + 1.0;
        case Family::RealisticRejected: {
            const ProtocolParams &p = model.protocol();
            return rejected_mean_derivative(p) / rejected_mean(p);
        }
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace

double GeometricEnvelope::tail_after(std::int64_t last) const {
    double next = static_cast<double>(last + 1);
    double rho = ratio * std::pow((next + 2.0) / (next + 1.0), degree);
    if (!(rho < 1.0)) {
        return std::numeric_limits<double>::infinity();
    }
    double log_first = std::log(scale) + degree * std::log(next + 1.0) + next * std::log(ratio);
    return std::exp(log_first) / (1.0 - rho);
}

Truncation truncate(const GeometricEnvelope &env, double tol, std::int64_t cap) {
    if (env.ratio <= 0.0 || env.tail_after(0) < tol) {
        return {0, false, env.ratio <= 0.0 ? 0.0 : env.tail_after(0)};
    }
    // The bound is non-increasing once finite: bracket by doubling, then bisect.
    std::int64_t lo = 0;
    std::int64_t hi = 1;
    while (!(env.tail_after(hi) < tol)) {
        lo = hi;
        if (hi >= cap) {
            return {cap, true, env.tail_after(cap)};
        }
        hi = std::min(hi * 2, cap);
    }
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (env.tail_after(mid) < tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {hi, false, env.tail_after(hi)};
}

GeometricEnvelope pmf_envelope(const StateModel &model) {
    double l = model.lambda();
    switch (model.family()) {
        case Family::Thermal:
            return {l / (1.0 + l), 1.0 / (1.0 + l), 0};
        case Family::Subtracted:
            return {l / (1.0 + l), 1.0 / ((1.0 + l) * (1.0 + l)), 1};
        case Family::Added:
            return {l / (1.0 + l), 1.0 / (l * (1.0 + l)), 1};
        case Family::RealisticAccepted: {
            // p_n ≤ p_n(thermal at ηλ) / ℘₁.
            double a = model.protocol().eta() * l;
            return {a / (1.0 + a), 1.0 / ((1.0 + a) * success_probability(model.protocol())), 0};
        }
        case Family::RealisticRejected: {
            double lt = rejected_mean(model.protocol());
            return {lt / (1.0 + lt), 1.0 / (1.0 + lt), 0};
        }
    }
    return {1.0, 1.0, 0};
}

GeometricEnvelope fisher_envelope(const StateModel &model) {
    GeometricEnvelope env = pmf_envelope(model);
    double slope = score_slope(model);
    env.scale *= slope * slope;
    env.degree += 2;
    return env;
}

void CompensatedSum::add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
        compensation_ += (sum_ - t) + v;
    } else {
        compensation_ += (v - t) + sum_;
    }
    sum_ = t;
}

}  // namespace phsub
