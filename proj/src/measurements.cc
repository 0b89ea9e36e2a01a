#include "phsub/measurements.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phsub/errors.h"
#include "phsub/series.h"

namespace phsub {

namespace {

constexpr double kHomodyneMargin = 0.5;

struct BranchMix {
    double p1;
    double dp1;
    double eta;
    double rejected;
    double drejected;
};

BranchMix branch_mix(const ProtocolParams &p) {
    return {success_probability(p), success_probability_derivative(p), p.eta(), rejected_mean(p),
            rejected_mean_derivative(p)};
}

// Thermal kernels all have the shape K(mu) ∝ A^(−power) exp(−t/A) with A = 1 + slope·mu.
struct KernelShape {
    double slope;
    double power;
    double t;
};

// Heralded-state densities follow from the thermal kernel K(mu) and its mu-derivative:
//   f  = (K(ηλ) − ℘₀ K(λ̃)) / ℘₁
//   ∂f = (η K'(ηλ) + ℘₁' K(λ̃) − ℘₀ λ̃' K'(λ̃)) / ℘₁ − f ℘₁' / ℘₁
// For small ℘₁ the difference in f cancels badly. With R = ℘₀ K(λ̃)/K(ηλ) built from logs,
// f = K(ηλ)·(−expm1(log R))/℘₁, and A(ηλ) − A(λ̃) = slope·ηλ·℘₁ exactly.
template <class Kernel>
double heralded_density(const ProtocolParams &p, Kernel kernel, KernelShape shape) {
    const double p1 = success_probability(p);
    const double el = p.eta() * p.lambda();
    const double a1 = 1.0 + shape.slope * el;
    const double a2 = 1.0 + shape.slope * rejected_mean(p);
    const double gap = shape.slope * el * p1;
    const double log_r = std::log1p(-p1) + shape.power * std::log1p(gap / a2) - shape.t * gap / (a1 * a2);
    return kernel(el) * -std::expm1(log_r) / p1;
}

template <class Kernel, class KernelDerivative>
double heralded_density_derivative(const ProtocolParams &p, Kernel kernel, KernelDerivative dkernel) {
    BranchMix m = branch_mix(p);
    double a = m.eta * p.lambda();
    double f = (kernel(a) - (1.0 - m.p1) * kernel(m.rejected)) / m.p1;
    double num = m.eta * dkernel(a) + m.dp1 * kernel(m.rejected) - (1.0 - m.p1) * m.drejected * dkernel(m.rejected);
    return num / m.p1 - f * m.dp1 / m.p1;
}

double gauss_kernel(double mu, double x) {
    double v = 1.0 + 2.0 * mu;
    return std::exp(-x * x / v) / std::sqrt(std::numbers::pi * v);
}

double gauss_kernel_dmu(double mu, double x) {
    double v = 1.0 + 2.0 * mu;
    return gauss_kernel(mu, x) * (2.0 * x * x / (v * v) - 1.0 / v);
}

double exp_kernel(double mu, double u) {
    double m = 1.0 + mu;
    return std::exp(-u / m) / m;
}

double exp_kernel_dmu(double mu, double u) {
    double m = 1.0 + mu;
    return exp_kernel(mu, u) * (u / (m * m) - 1.0 / m);
}

double offprob_kernel(double eps, double mu) {
    return 1.0 / (1.0 + eps * mu);
}

double offprob_kernel_dmu(double eps, double mu) {
    double d = 1.0 + eps * mu;
    return -eps / (d * d);
}

void require_detector(double eps) {
    if (!(eps > 0 && eps <= 1)) {
        throw InvalidParameter("on-off detector efficiency must lie in (0, 1], got " + std::to_string(eps));
    }
}

}  // namespace

HeterodyneRadialPoint::HeterodyneRadialPoint(double u) : u_(u) {
    if (!(u >= 0)) {
        throw DomainError("heterodyne radial variable |alpha|^2 must be >= 0, got " + std::to_string(u));
    }
}

double homodyne_pdf(const StateModel &model, HomodynePoint point) {
    const double x = point.x;
    const double l = model.lambda();
    const double v = 1.0 + 2.0 * l;
    switch (model.family()) {
        case Family::Thermal:
            return gauss_kernel(l, x);
        case Family::Subtracted: {
            double poly = 1.0 + l * (3.0 + 2.0 * x * x + 2.0 * l);
            return poly * std::exp(-x * x / v) / (std::sqrt(std::numbers::pi) * std::pow(v, 2.5));
        }
        case Family::Added: {
            double poly = l + 2.0 * (l * l + x * x * (1.0 + l));
            return poly * std::exp(-x * x / v) / (std::sqrt(std::numbers::pi) * std::pow(v, 2.5));
        }
        case Family::RealisticAccepted:
            return heralded_density(
                model.protocol(), [x](double mu) { return gauss_kernel(mu, x); }, KernelShape{2.0, 0.5, x * x});
        case Family::RealisticRejected:
            return gauss_kernel(rejected_mean(model.protocol()), x);
    }
    throw UnsupportedFamily("homodyne_pdf: unknown family");
}

double homodyne_pdf_derivative(const StateModel &model, HomodynePoint point) {
    const double x = point.x;
    const double l = model.lambda();
    const double v = 1.0 + 2.0 * l;
    const double x2 = x * x;
    auto polynomial_gaussian = [&](double poly, double dpoly) {
        // ∂_λ [poly · e^{−x²/v} / (√π v^{5/2})]
        double base = std::exp(-x2 / v) / (std::sqrt(std::numbers::pi) * std::pow(v, 2.5));
        return base * (dpoly - 5.0 * poly / v + 2.0 * x2 * poly / (v * v));
    };
    switch (model.family()) {
        case Family::Thermal:
            return gauss_kernel_dmu(l, x);
        case Family::Subtracted:
            return polynomial_gaussian(1.0 + l * (3.0 + 2.0 * x2 + 2.0 * l), 3.0 + 2.0 * x2 + 4.0 * l);
        case Family::Added:
            return polynomial_gaussian(l + 2.0 * (l * l + x2 * (1.0 + l)), 1.0 + 4.0 * l + 2.0 * x2);
        case Family::RealisticAccepted:
            return heralded_density_derivative(
                model.protocol(), [x](double mu) { return gauss_kernel(mu, x); },
                [x](double mu) { return gauss_kernel_dmu(mu, x); });
        case Family::RealisticRejected: {
            const ProtocolParams &p = model.protocol();
            return rejected_mean_derivative(p) * gauss_kernel_dmu(rejected_mean(p), x);
        }
    }
    throw UnsupportedFamily("homodyne_pdf_derivative: unknown family");
}

double heterodyne_radial_pdf(const StateModel &model, HeterodyneRadialPoint point) {
    const double u = point.u();
    const double l = model.lambda();
    const double m = 1.0 + l;
    switch (model.family()) {
        case Family::Thermal:
            return exp_kernel(l, u);
        case Family::Subtracted:
            return (1.0 + l * (1.0 + u)) / (m * m * m) * std::exp(-u / m);
        case Family::Added:
            return u / (m * m) * std::exp(-u / m);
        case Family::RealisticAccepted:
            return heralded_density(
                model.protocol(), [u](double mu) { return exp_kernel(mu, u); }, KernelShape{1.0, 1.0, u});
        case Family::RealisticRejected:
            return exp_kernel(rejected_mean(model.protocol()), u);
    }
    throw UnsupportedFamily("heterodyne_radial_pdf: unknown family");
}

double heterodyne_radial_pdf_derivative(const StateModel &model, HeterodyneRadialPoint point) {
    const double u = point.u();
    const double l = model.lambda();
    const double m = 1.0 + l;
    const double m2 = m * m;
    switch (model.family()) {
        case Family::Thermal:
            return exp_kernel_dmu(l, u);
        case Family::Subtracted: {
            double poly = 1.0 + l * (1.0 + u);
            return std::exp(-u / m) * ((1.0 + u) / (m2 * m) - 3.0 * poly / (m2 * m2) + poly * u / (m2 * m2 * m));
        }
        case Family::Added:
            return std::exp(-u / m) * (-2.0 * u / (m2 * m) + u * u / (m2 * m2));
        case Family::RealisticAccepted:
            return heralded_density_derivative(
                model.protocol(), [u](double mu) { return exp_kernel(mu, u); },
                [u](double mu) { return exp_kernel_dmu(mu, u); });
        case Family::RealisticRejected: {
            const ProtocolParams &p = model.protocol();
            return rejected_mean_derivative(p) * exp_kernel_dmu(rejected_mean(p), u);
        }
    }
    throw UnsupportedFamily("heterodyne_radial_pdf_derivative: unknown family");
}

OnOffDistribution onoff_pmf(const StateModel &model, double eps) {
    require_detector(eps);
    const double l = model.lambda();
    double off = 0;
    switch (model.family()) {
        case Family::Thermal:
            off = offprob_kernel(eps, l);
            break;
        case Family::Subtracted: {
            double d = 1.0 + eps * l;
            off = 1.0 / (d * d);
            break;
        }
        case Family::Added: {
            double d = 1.0 + eps * l;
            off = (1.0 - eps) / (d * d);
            break;
        }
        case Family::RealisticAccepted:
            off = heralded_density(
                model.protocol(), [eps](double mu) { return offprob_kernel(eps, mu); }, KernelShape{eps, 1.0, 0.0});
            break;
        case Family::RealisticRejected:
            off = offprob_kernel(eps, rejected_mean(model.protocol()));
            break;
    }
    return {off, 1.0 - off};
}

OnOffDistribution onoff_pmf_series(const StateModel &model, double eps) {
    require_detector(eps);
    GeometricEnvelope env = pmf_envelope(model);
    env.ratio *= 1.0 - eps;
    Truncation t = truncate(env);
    if (t.capped) {
        throw NonConvergence("on-off series hit the truncation cap");
    }
    const double log_miss = std::log1p(-eps);
    CompensatedSum off;
    for (std::int64_t n = 0; n <= t.last_index; ++n) {
        double weight = n == 0 ? 1.0 : (eps == 1.0 ? 0.0 : std::exp(static_cast<double>(n) * log_miss));
        off.add(pmf(model, n) * weight);
    }
    return {off.value(), 1.0 - off.value()};
}

double onoff_off_derivative(const StateModel &model, double eps) {
    require_detector(eps);
    const double l = model.lambda();
    const double d = 1.0 + eps * l;
    switch (model.family()) {
        case Family::Thermal:
            return offprob_kernel_dmu(eps, l);
        case Family::Subtracted:
            return -2.0 * eps / (d * d * d);
        case Family::Added:
            return -2.0 * eps * (1.0 - eps) / (d * d * d);
        case Family::RealisticAccepted:
            return heralded_density_derivative(
                model.protocol(), [eps](double mu) { return offprob_kernel(eps, mu); },
                [eps](double mu) { return offprob_kernel_dmu(eps, mu); });
        case Family::RealisticRejected: {
            const ProtocolParams &p = model.protocol();
            return rejected_mean_derivative(p) * offprob_kernel_dmu(eps, rejected_mean(p));
        }
    }
    throw UnsupportedFamily("onoff_off_derivative: unknown family");
}

Interval homodyne_domain(const StateModel &model) {
    double half_width = 8.0 * std::sqrt((1.0 + 2.0 * model.lambda()) / 2.0 * (1.0 + kHomodyneMargin));
    return {-half_width, half_width};
}

Interval heterodyne_domain(const StateModel &model) {
    double l = model.lambda();
    return {0.0, (1.0 + l) * std::max(60.0, 40.0 + 10.0 * std::log1p(l))};
}

}  // namespace phsub
