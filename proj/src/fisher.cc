#include "phsub/fisher.h"

#include <cmath>
#include <string>

#include "phsub/errors.h"
#include "phsub/measurements.h"
#include "phsub/quadrature.h"
#include "phsub/series.h"

namespace phsub {

namespace {

constexpr double kSeriesRelTol = 1e-12;
constexpr double kNonConvergenceRel = 1e-8;
constexpr double kDensityFloor = 1e-300;

// Central difference of g(λ) around model.lambda().
template <class G>
double central(const StateModel &model, const DerivativeSpec &d, G g) {
    double h = d.step_for(model.lambda());
    return (g(model.with_lambda(model.lambda() + h)) - g(model.with_lambda(model.lambda() - h))) / (2.0 * h);
}

}  // namespace

std::string_view method_name(FisherMethod method) {
    switch (method) {
        case FisherMethod::ClosedForm:
            return "closed_form";
        case FisherMethod::Series:
            return "series";
        case FisherMethod::Quadrature:
            return "quadrature";
        case FisherMethod::FiniteDifference:
            return "finite_difference";
    }
    return "unknown";
}

DerivativeSpec DerivativeSpec::central_difference(double rel_step) {
    if (!(rel_step > 1e-9 && rel_step < 1e-3)) {
        throw InvalidParameter("central-difference rel_step must lie in (1e-9, 1e-3), got " + std::to_string(rel_step));
    }
    return DerivativeSpec(Mode::CentralDifference, rel_step);
}

double DerivativeSpec::step_for(double lambda) const {
    double h = rel_step_ * std::max(lambda, 1.0);
    // Stay inside λ > 0.
    return std::min(h, 0.5 * lambda);
}

FisherResult fi_discrete(const StateModel &model, DerivativeSpec d) {
    const GeometricEnvelope env = fisher_envelope(model);
    const bool analytic = d.mode() == DerivativeSpec::Mode::Analytic;

    CompensatedSum sum;
    std::int64_t n = 0;
    double tail = 0;
    bool capped = false;
    for (;; ++n) {
        double p = pmf(model, n);
        if (p > 0) {
            double dp = analytic ? pmf_derivative(model, n)
                                 : central(model, d, [n](const StateModel &m) { return pmf(m, n); });
            sum.add(dp * dp / p);
        }
        tail = env.tail_after(n);
        if (tail <= kSeriesRelTol * sum.value()) {
            break;
        }
        if (n >= kMaxSeriesTerms) {
            capped = true;
            break;
        }
    }

    FisherResult r;
    r.value = sum.value();
    r.method = analytic ? FisherMethod::Series : FisherMethod::FiniteDifference;
    r.terms_or_nodes = n + 1;
    r.est_error = tail + static_cast<double>(n + 1) * 1e-16 * r.value;
    if (capped && r.est_error > kNonConvergenceRel * r.value) {
        throw NonConvergence("photon-number FI series hit the " + std::to_string(kMaxSeriesTerms) +
                             "-term cap for family " + std::string(family_name(model.family())) +
                             " at lambda=" + std::to_string(model.lambda()));
    }
    return r;
}

FisherResult fi_continuous(const StateModel &model, ContinuousMeasurement meas, DerivativeSpec d) {
    const bool analytic = d.mode() == DerivativeSpec::Mode::Analytic;
    const bool homodyne = meas == ContinuousMeasurement::Homodyne;

    auto density = [homodyne](const StateModel &m, double t) {
        return homodyne ? homodyne_pdf(m, HomodynePoint{t}) : heterodyne_radial_pdf(m, HeterodyneRadialPoint(t));
    };
    auto derivative = [&](double t) {
        if (analytic) {
            return homodyne ? homodyne_pdf_derivative(model, HomodynePoint{t})
                            : heterodyne_radial_pdf_derivative(model, HeterodyneRadialPoint(t));
        }
        return central(model, d, [&](const StateModel &m) { return density(m, t); });
    };
    auto integrand = [&](double t) {
        double f = density(model, t);
        if (!(f > kDensityFloor)) {
            return 0.0;
        }
        double df = derivative(t);
        return df * df / f;
    };

    Interval dom = homodyne ? homodyne_domain(model) : heterodyne_domain(model);
    QuadratureResult q = integrate(integrand, dom.lo, dom.hi);

    FisherResult r;
    r.value = q.value;
    r.method = analytic ? FisherMethod::Quadrature : FisherMethod::FiniteDifference;
    r.terms_or_nodes = q.evaluations;
    r.est_error = q.abs_error;
    if (q.abs_error > kNonConvergenceRel * std::abs(q.value)) {
        throw NonConvergence(std::string(homodyne ? "homodyne" : "heterodyne") + " FI quadrature did not converge for " +
                             std::string(family_name(model.family())) + " at lambda=" + std::to_string(model.lambda()));
    }
    return r;
}

double fi_binary(double p, double dp_dlambda) {
    if (!(p > 0 && p < 1)) {
        throw DomainError("binary FI needs 0 < p < 1, got " + std::to_string(p));
    }
    return dp_dlambda * dp_dlambda / (p * (1.0 - p));
}

FisherResult fi_onoff(const StateModel &model, double detector_epsilon, DerivativeSpec d) {
    OnOffDistribution dist = onoff_pmf(model, detector_epsilon);
    double dp = 0;
    FisherResult r;
    if (d.mode() == DerivativeSpec::Mode::Analytic) {
        dp = onoff_off_derivative(model, detector_epsilon);
        r.method = FisherMethod::ClosedForm;
    } else {
        dp = central(model, d, [detector_epsilon](const StateModel &m) { return onoff_pmf(m, detector_epsilon).p_off; });
        r.method = FisherMethod::FiniteDifference;
    }
    r.value = fi_binary(dist.p_off, dp);
    r.terms_or_nodes = 2;
    return r;
}

FisherResult qfi_closed(const StateModel &model) {
    const double l = model.lambda();
    FisherResult r;
    r.method = FisherMethod::ClosedForm;
    switch (model.family()) {
        case Family::Thermal:
            r.value = 1.0 / (l * (1.0 + l));
            break;
        case Family::Subtracted:
        case Family::Added:
            r.value = 2.0 / (l * (1.0 + l));
            break;
        case Family::RealisticRejected: {
            const ProtocolParams &p = model.protocol();
            double x = (1.0 - p.eta()) * p.epsilon() * l;
            r.value = p.eta() / ((1.0 + x) * (1.0 + x)) / (l * (1.0 + p.eta() * l + x));
            break;
        }
        case Family::RealisticAccepted:
            throw UnsupportedFamily("no closed-form QFI for the heralded state; use fi_discrete");
    }
    return r;
}

double reparameterize_fi(double f_wrt_tilde, double dtilde_dlambda) {
    return f_wrt_tilde * dtilde_dlambda * dtilde_dlambda;
}

}  // namespace phsub
