#include "phsub/states.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "phsub/errors.h"

namespace phsub {

namespace {

void require_lambda(double lambda) {
    if (!(lambda > 0) || !std::isfinite(lambda)) {
        throw InvalidParameter("mean photon number must be finite and > 0, got " + std::to_string(lambda));
    }
}

void require_unit_interval(double v, const char *name) {
    if (!(v > 0 && v <= 1)) {
        throw InvalidParameter(std::string(name) + " must lie in (0, 1], got " + std::to_string(v));
    }
}

void require_index(std::int64_t n) {
    if (n < 0) {
        throw DomainError("photon number must be >= 0, got " + std::to_string(n));
    }
}

// Geometric pmf with mean mu, computed in log space so that large n and tiny mu stay finite.
double geometric(double mu, std::int64_t n) {
    if (n == 0) {
        return 1.0 / (1.0 + mu);
    }
    return std::exp(-std::log1p(mu) - static_cast<double>(n) * std::log1p(1.0 / mu));
}

// ∂/∂mu of geometric(mu, n).
double geometric_dmu(double mu, std::int64_t n) {
    double nd = static_cast<double>(n);
    return geometric(mu, n) * (nd / mu - (nd + 1.0) / (1.0 + mu));
}

// (1−η)ελ: the mean number of photons the herald detector would register.
double herald_mean(const ProtocolParams &p) {
    return (1.0 - p.eta()) * p.epsilon() * p.lambda();
}

void require_heralded(const ProtocolParams &p) {
    if (p.eta() >= 1.0) {
        throw UndefinedConditionalState("heralded state undefined for eta = 1 (click probability is zero)");
    }
}

}  // namespace

ThermalParams::ThermalParams(double lambda) : lambda_(lambda) {
    require_lambda(lambda);
}

ProtocolParams::ProtocolParams(double lambda, double eta, double epsilon)
    : lambda_(lambda), eta_(eta), epsilon_(epsilon) {
    require_lambda(lambda);
    require_unit_interval(eta, "beam-splitter transmittance eta");
    require_unit_interval(epsilon, "detector efficiency epsilon");
}

std::string_view family_name(Family family) {
    switch (family) {
        case Family::Thermal:
            return "thermal";
        case Family::Subtracted:
            return "subtracted";
        case Family::Added:
            return "added";
        case Family::RealisticAccepted:
            return "realistic_accepted";
        case Family::RealisticRejected:
            return "realistic_rejected";
    }
    return "unknown";
}

StateModel::StateModel(Family family, double lambda, std::optional<ProtocolParams> protocol)
    : family_(family), lambda_(lambda), protocol_(std::move(protocol)) {
}

StateModel StateModel::thermal(double lambda) {
    return StateModel(Family::Thermal, ThermalParams(lambda).lambda(), std::nullopt);
}

StateModel StateModel::subtracted(double lambda) {
    return StateModel(Family::Subtracted, ThermalParams(lambda).lambda(), std::nullopt);
}

StateModel StateModel::added(double lambda) {
    return StateModel(Family::Added, ThermalParams(lambda).lambda(), std::nullopt);
}

StateModel StateModel::realistic_accepted(const ProtocolParams &params) {
    require_heralded(params);
    return StateModel(Family::RealisticAccepted, params.lambda(), params);
}

StateModel StateModel::realistic_rejected(const ProtocolParams &params) {
    return StateModel(Family::RealisticRejected, params.lambda(), params);
}

const ProtocolParams &StateModel::protocol() const {
    if (!protocol_) {
        throw std::logic_error("state family '" + std::string(family_name(family_)) + "' has no protocol parameters");
    }
    return *protocol_;
}

StateModel StateModel::with_lambda(double lambda) const {
    if (protocol_) {
        return StateModel(family_, lambda, protocol_->with_lambda(lambda));
    }
    return StateModel(family_, ThermalParams(lambda).lambda(), std::nullopt);
}

double thermal_pmf(const ThermalParams &p, std::int64_t n) {
    require_index(n);
    return geometric(p.lambda(), n);
}

double subtracted_pmf(const ThermalParams &p, std::int64_t n) {
    require_index(n);
    double l = p.lambda();
    double nd = static_cast<double>(n);
    return (nd + 1.0) * std::exp(-2.0 * std::log1p(l) - nd * std::log1p(1.0 / l));
}

double added_pmf(const ThermalParams &p, std::int64_t n) {
    require_index(n);
    if (n == 0) {
        return 0.0;
    }
    double l = p.lambda();
    double nd = static_cast<double>(n);
    return nd * std::exp(-2.0 * std::log1p(l) - (nd - 1.0) * std::log1p(1.0 / l));
}

double success_probability(const ProtocolParams &p) {
    double x = herald_mean(p);
    return x / (1.0 + x);
}

double success_probability_derivative(const ProtocolParams &p) {
    double x = herald_mean(p);
    return (1.0 - p.eta()) * p.epsilon() / ((1.0 + x) * (1.0 + x));
}

double rejected_mean(const ProtocolParams &p) {
    return p.eta() * p.lambda() / (1.0 + herald_mean(p));
}

double rejected_mean_derivative(const ProtocolParams &p) {
    double x = herald_mean(p);
    return p.eta() / ((1.0 + x) * (1.0 + x));
}

double realistic_subtracted_pmf(const ProtocolParams &p, std::int64_t n) {
    require_index(n);
    require_heralded(p);
    double p1 = success_probability(p);
    double p0 = 1.0 / (1.0 + herald_mean(p));
    return (geometric(p.eta() * p.lambda(), n) - p0 * geometric(rejected_mean(p), n)) / p1;
}

double realistic_subtracted_pmf_bracketed(const ProtocolParams &p, std::int64_t n) {
    require_index(n);
    require_heralded(p);
    double a = p.eta() * p.lambda();
    double c = p.eta() + (1.0 - p.eta()) * p.epsilon();
    // 1 − s with s = (1 + ηλ) / (1 + λ(η + (1−η)ε)).
    double delta = herald_mean(p) / (1.0 + c * p.lambda());
    double bracket = -std::expm1(static_cast<double>(n + 1) * std::log1p(-delta));
    return geometric(a, n) * bracket / success_probability(p);
}

double pmf(const StateModel &model, std::int64_t n) {
    double l = model.lambda();
    switch (model.family()) {
        case Family::Thermal:
            return thermal_pmf(ThermalParams(l), n);
        case Family::Subtracted:
            return subtracted_pmf(ThermalParams(l), n);
        case Family::Added:
            return added_pmf(ThermalParams(l), n);
        case Family::RealisticAccepted:
            // no cancellation when ℘₁ is small
            return realistic_subtracted_pmf_bracketed(model.protocol(), n);
        case Family::RealisticRejected:
            return thermal_pmf(ThermalParams(rejected_mean(model.protocol())), n);
    }
    throw UnsupportedFamily("pmf: unknown family");
}

double pmf_derivative(const StateModel &model, std::int64_t n) {
    require_index(n);
    double l = model.lambda();
    double nd = static_cast<double>(n);
    switch (model.family()) {
        case Family::Thermal:
            return geometric_dmu(l, n);
        case Family::Subtracted:
            return pmf(model, n) * (nd / l - (nd + 2.0) / (1.0 + l));
        case Family::Added:
            if (n == 0) {
                return 0.0;
            }
            return pmf(model, n) * ((nd - 1.0) / l - (nd + 1.0) / (1.0 + l));
        case Family::RealisticAccepted: {
            const ProtocolParams &p = model.protocol();
            double p1 = success_probability(p);
            double dp1 = success_probability_derivative(p);
            double p0 = 1.0 - p1;
            double lt = rejected_mean(p);
            double numerator = p.eta() * geometric_dmu(p.eta() * l, n) + dp1 * geometric(lt, n) -
                               p0 * rejected_mean_derivative(p) * geometric_dmu(lt, n);
            return numerator / p1 - pmf(model, n) * dp1 / p1;
        }
        case Family::RealisticRejected: {
            const ProtocolParams &p = model.protocol();
            return rejected_mean_derivative(p) * geometric_dmu(rejected_mean(p), n);
        }
    }
    throw UnsupportedFamily("pmf_derivative: unknown family");
}

double mean_photon_number(const StateModel &model) {
    double l = model.lambda();
    switch (model.family()) {
        case Family::Thermal:
            return l;
        case Family::Subtracted:
            return 2.0 * l;
        case Family::Added:
            return 2.0 * l + 1.0;
        case Family::RealisticAccepted: {
            double x = herald_mean(model.protocol());
            return model.protocol().eta() * l * (2.0 + x) / (1.0 + x);
        }
        case Family::RealisticRejected:
            return rejected_mean(model.protocol());
    }
    throw UnsupportedFamily("mean_photon_number: unknown family");
}

}  // namespace phsub
