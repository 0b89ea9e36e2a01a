#ifndef PHSUB_FISHER_H
#define PHSUB_FISHER_H

#include <cstdint>
#include <string_view>

#include "phsub/states.h"

namespace phsub {

enum class FisherMethod { ClosedForm, Series, Quadrature, FiniteDifference };

std::string_view method_name(FisherMethod method);

/// A Fisher-information value for λ (units 1/λ²) with the work it took and an
/// a-posteriori error estimate.
struct FisherResult {
    double value = 0;
    FisherMethod method = FisherMethod::ClosedForm;
    std::int64_t terms_or_nodes = 0;
    double est_error = 0;
};

/// How ∂_λ is taken inside an FI computation. Central differences use the step
/// h = rel_step · max(λ, 1) and exist as a cross-check of the analytic path.
class DerivativeSpec {
   public:
    enum class Mode { Analytic, CentralDifference };

    static DerivativeSpec analytic() {
        return DerivativeSpec(Mode::Analytic, 1e-6);
    }
    static DerivativeSpec central_difference(double rel_step = 1e-6);

    Mode mode() const {
        return mode_;
    }
    double rel_step() const {
        return rel_step_;
    }
    double step_for(double lambda) const;

   private:
    DerivativeSpec(Mode mode, double rel_step) : mode_(mode), rel_step_(rel_step) {
    }
    Mode mode_;
    double rel_step_;
};

enum class ContinuousMeasurement { Homodyne, HeterodyneRadial };

/// Classical FI of the photon-number distribution (equal to the QFI for these
/// Fock-diagonal families), summed up to the envelope truncation point.
FisherResult fi_discrete(const StateModel &model, DerivativeSpec d = DerivativeSpec::analytic());

/// FI of the homodyne or radial heterodyne density by adaptive quadrature.
FisherResult fi_continuous(const StateModel &model, ContinuousMeasurement meas,
                           DerivativeSpec d = DerivativeSpec::analytic());

/// FI of a two-outcome record, dp² / (p(1−p)).
double fi_binary(double p, double dp_dlambda);

/// FI of on-off detection with efficiency `detector_epsilon` on the state.
FisherResult fi_onoff(const StateModel &model, double detector_epsilon, DerivativeSpec d = DerivativeSpec::analytic());

/// Closed-form QFI; RealisticAccepted has none and throws UnsupportedFamily.
FisherResult qfi_closed(const StateModel &model);

/// Chain rule f · (dλ̃/dλ)².
double reparameterize_fi(double f_wrt_tilde, double dtilde_dlambda);

}  // namespace phsub

#endif
