#ifndef PHSUB_PROTOCOL_H
#define PHSUB_PROTOCOL_H

#include <string_view>

#include "phsub/fisher.h"
#include "phsub/states.h"

namespace phsub {

/// Per-trial resource costs: preparation C_P, post-selection C_S, final measurement C_M.
class CostModel {
   public:
    CostModel(double c_prep, double c_select, double c_measure);

    double c_prep() const {
        return c_prep_;
    }
    double c_select() const {
        return c_select_;
    }
    double c_measure() const {
        return c_measure_;
    }

   private:
    double c_prep_;
    double c_select_;
    double c_measure_;
};

/// Detection applied to one output branch of the beam splitter.
class OutputMeasurement {
   public:
    enum class Kind { PhotonNumber, Homodyne, HeterodyneRadial, OnOff };

    static OutputMeasurement photon_number() {
        return OutputMeasurement(Kind::PhotonNumber, 1.0);
    }
    static OutputMeasurement homodyne() {
        return OutputMeasurement(Kind::Homodyne, 1.0);
    }
    static OutputMeasurement heterodyne() {
        return OutputMeasurement(Kind::HeterodyneRadial, 1.0);
    }
    static OutputMeasurement onoff(double efficiency);

    Kind kind() const {
        return kind_;
    }
    /// Only meaningful for OnOff.
    double efficiency() const {
        return efficiency_;
    }

   private:
    OutputMeasurement(Kind kind, double efficiency) : kind_(kind), efficiency_(efficiency) {
    }
    Kind kind_;
    double efficiency_;
};

std::string_view measurement_name(const OutputMeasurement &m);

struct BranchMeasurement {
    OutputMeasurement accepted;
    OutputMeasurement rejected;
};

struct TotalInformation {
    double click_fi;
    double accepted_term;
    double rejected_term;
    double total;
    /// Unweighted branch FIs behind accepted_term and rejected_term.
    FisherResult accepted_fi;
    FisherResult rejected_fi;
};

struct ConvexityBounds {
    double lower;
    double upper;
};

/// FI of measurement `m` on `model`. Photon counting uses the closed-form QFI where
/// one exists and the Fock series otherwise.
FisherResult measurement_fi(const StateModel &model, const OutputMeasurement &m);

/// FI of the herald record {℘₀, ℘₁}.
double click_fi(const ProtocolParams &p);

/// Click-record FI plus the probability-weighted FI of each branch.
TotalInformation total_information(const ProtocolParams &p, const BranchMeasurement &m);

/// Extended-convexity lower bound η/(λ(1+ηλ)) and the joint-state bound 1/(λ(1+λ)).
ConvexityBounds convexity_bounds(const ProtocolParams &p);

/// FI about λ from on-off detection (efficiency ε) on the rejected branch.
double fi_rejected_onoff(const ProtocolParams &p);

/// Information per unit cost of the post-selection strategy. The rejected branch is
/// always read out by on-off detection with the herald efficiency. With `compact` the
/// rejected-branch terms are dropped from numerator and denominator.
double rate_postselected(const ProtocolParams &p, const CostModel &c, const OutputMeasurement &accepted,
                         bool compact = false);

/// As above, with the accepted-branch FI already computed.
double rate_postselected_from_fi(const ProtocolParams &p, const CostModel &c, double accepted_fi, bool compact = false);

/// Information per unit cost of measuring the thermal state directly.
double rate_direct(double lambda, const CostModel &c, double meas_fi);

}  // namespace phsub

#endif
