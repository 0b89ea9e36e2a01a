#include "phsub/protocol.h"

#include <string>

#include "phsub/errors.h"

namespace phsub {

CostModel::CostModel(double c_prep, double c_select, double c_measure)
    : c_prep_(c_prep), c_select_(c_select), c_measure_(c_measure) {
    if (!(c_prep >= 0 && c_select >= 0 && c_measure >= 0)) {
        throw InvalidParameter("costs must be >= 0");
    }
    if (!(c_prep + c_measure > 0)) {
        throw InvalidParameter("c_prep + c_measure must be > 0");
    }
}

OutputMeasurement OutputMeasurement::onoff(double efficiency) {
    if (!(efficiency > 0 && efficiency <= 1)) {
        throw InvalidParameter("on-off efficiency must lie in (0, 1], got " + std::to_string(efficiency));
    }
    return OutputMeasurement(Kind::OnOff, efficiency);
}

std::string_view measurement_name(const OutputMeasurement &m) {
    switch (m.kind()) {
        case OutputMeasurement::Kind::PhotonNumber:
            return "photon_number";
        case OutputMeasurement::Kind::Homodyne:
            return "homodyne";
        case OutputMeasurement::Kind::HeterodyneRadial:
            return "heterodyne";
        case OutputMeasurement::Kind::OnOff:
            return "onoff";
    }
    return "unknown";
}

FisherResult measurement_fi(const StateModel &model, const OutputMeasurement &m) {
    switch (m.kind()) {
        case OutputMeasurement::Kind::PhotonNumber:
            if (model.family() == Family::RealisticAccepted) {
                return fi_discrete(model);
            }
            return qfi_closed(model);
        case OutputMeasurement::Kind::Homodyne:
            return fi_continuous(model, ContinuousMeasurement::Homodyne);
        case OutputMeasurement::Kind::HeterodyneRadial:
            return fi_continuous(model, ContinuousMeasurement::HeterodyneRadial);
        case OutputMeasurement::Kind::OnOff:
            return fi_onoff(model, m.efficiency());
    }
    throw UnsupportedFamily("measurement_fi: unknown measurement");
}

double click_fi(const ProtocolParams &p) {
    return fi_binary(success_probability(p), success_probability_derivative(p));
}

TotalInformation total_information(const ProtocolParams &p, const BranchMeasurement &m) {
    double p1 = success_probability(p);
    TotalInformation t{};
    t.click_fi = click_fi(p);
    t.accepted_fi = measurement_fi(StateModel::realistic_accepted(p), m.accepted);
    t.rejected_fi = measurement_fi(StateModel::realistic_rejected(p), m.rejected);
    t.accepted_term = p1 * t.accepted_fi.value;
    t.rejected_term = (1.0 - p1) * t.rejected_fi.value;
    t.total = t.click_fi + t.accepted_term + t.rejected_term;
    return t;
}

ConvexityBounds convexity_bounds(const ProtocolParams &p) {
    double l = p.lambda();
    return {p.eta() / (l * (1.0 + p.eta() * l)), 1.0 / (l * (1.0 + l))};
}

double fi_rejected_onoff(const ProtocolParams &p) {
    double l = p.lambda();
    double e = p.epsilon();
    double d = 1.0 + e * l;
    return e * p.eta() / (l * d * d * (1.0 + e * (1.0 - p.eta()) * l));
}

double rate_postselected(const ProtocolParams &p, const CostModel &c, const OutputMeasurement &accepted,
                         bool compact) {
    return rate_postselected_from_fi(p, c, measurement_fi(StateModel::realistic_accepted(p), accepted).value, compact);
}

double rate_postselected_from_fi(const ProtocolParams &p, const CostModel &c, double f_acc, bool compact) {
    double p1 = success_probability(p);
    double p0 = 1.0 - p1;
    if (compact) {
        return (p1 * f_acc + click_fi(p)) / (c.c_prep() + c.c_select() + p1 * c.c_measure());
    }
    double numerator = p1 * f_acc + p0 * fi_rejected_onoff(p) + click_fi(p);
    double denominator = c.c_prep() + c.c_select() + p1 * c.c_measure() + p0 * c.c_select();
    return numerator / denominator;
}

double rate_direct(double lambda, const CostModel &c, double meas_fi) {
    static_cast<void>(ThermalParams(lambda));
    if (!(meas_fi >= 0)) {
        throw InvalidParameter("measurement FI must be >= 0");
    }
    return meas_fi / (c.c_prep() + c.c_measure());
}

}  // namespace phsub
