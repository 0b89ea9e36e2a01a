#ifndef PHSUB_MEASUREMENTS_H
#define PHSUB_MEASUREMENTS_H

#include "phsub/states.h"

namespace phsub {

/// Quadrature outcome of homodyne detection, x̂ = (â + â†)/√2.
struct HomodynePoint {
    double x;
};

/// Squared modulus u = |α|² of a heterodyne outcome. All states here are phase
/// invariant, so the radial density f(u) = π·Q(α) carries the full λ-dependence.
class HeterodyneRadialPoint {
   public:
    explicit HeterodyneRadialPoint(double u);
    double u() const {
        return u_;
    }

   private:
    double u_;
};

struct OnOffDistribution {
    double p_off;
    double p_on;
};

struct Interval {
    double lo;
    double hi;
};

double homodyne_pdf(const StateModel &model, HomodynePoint point);
double homodyne_pdf_derivative(const StateModel &model, HomodynePoint point);

double heterodyne_radial_pdf(const StateModel &model, HeterodyneRadialPoint point);
double heterodyne_radial_pdf_derivative(const StateModel &model, HeterodyneRadialPoint point);

/// Closed-form on-off statistics, p_off = Σ p_n (1−ε)^n.
OnOffDistribution onoff_pmf(const StateModel &model, double detector_epsilon);
/// The same quantity by truncated Fock summation.
OnOffDistribution onoff_pmf_series(const StateModel &model, double detector_epsilon);
/// ∂p_off/∂λ in closed form.
double onoff_off_derivative(const StateModel &model, double detector_epsilon);

/// Fixed integration windows outside of which the density mass is below 1e-14.
Interval homodyne_domain(const StateModel &model);
Interval heterodyne_domain(const StateModel &model);

}  // namespace phsub

#endif
