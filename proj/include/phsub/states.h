#ifndef PHSUB_STATES_H
#define PHSUB_STATES_H

#include <cstdint>
#include <optional>
#include <string_view>

namespace phsub {

/// Mean photon number of a single-mode thermal state. Always > 0.
class ThermalParams {
   public:
    explicit ThermalParams(double lambda);
    double lambda() const {
        return lambda_;
    }

   private:
    double lambda_;
};

/// Thermal input plus the subtraction hardware: beam-splitter transmittance η and
/// on-off detector efficiency ε on the reflected arm.
class ProtocolParams {
   public:
    ProtocolParams(double lambda, double eta, double epsilon);

    double lambda() const {
        return lambda_;
    }
    double eta() const {
        return eta_;
    }
    double epsilon() const {
        return epsilon_;
    }
    ProtocolParams with_lambda(double lambda) const {
        return ProtocolParams(lambda, eta_, epsilon_);
    }

   private:
    double lambda_;
    double eta_;
    double epsilon_;
};

enum class Family { Thermal, Subtracted, Added, RealisticAccepted, RealisticRejected };

std::string_view family_name(Family family);

/// A Fock-diagonal state family evaluated at a given λ.
///
/// The realistic families carry the full protocol parameters; the accepted (heralded)
/// state additionally requires η < 1 so that the herald can fire at all.
class StateModel {
   public:
    static StateModel thermal(double lambda);
    static StateModel subtracted(double lambda);
    static StateModel added(double lambda);
    static StateModel realistic_accepted(const ProtocolParams &params);
    static StateModel realistic_rejected(const ProtocolParams &params);

    Family family() const {
        return family_;
    }
    double lambda() const {
        return lambda_;
    }
    bool is_realistic() const {
        return protocol_.has_value();
    }
    /// Throws std::logic_error for the ideal families.
    const ProtocolParams &protocol() const;

    StateModel with_lambda(double lambda) const;

   private:
    StateModel(Family family, double lambda, std::optional<ProtocolParams> protocol);

    Family family_;
    double lambda_;
    std::optional<ProtocolParams> protocol_;
};

double thermal_pmf(const ThermalParams &p, std::int64_t n);
double subtracted_pmf(const ThermalParams &p, std::int64_t n);
double added_pmf(const ThermalParams &p, std::int64_t n);

/// Probability ℘₁ that the on-off detector on the reflected arm clicks.
double success_probability(const ProtocolParams &p);
double success_probability_derivative(const ProtocolParams &p);

/// Mean photon number λ̃ of the no-click branch (a thermal state).
double rejected_mean(const ProtocolParams &p);
double rejected_mean_derivative(const ProtocolParams &p);

/// Heralded state pmf, evaluated as the difference of two thermal pmfs:
/// (p_n(ηλ) − ℘₀ p_n(λ̃)) / ℘₁.
double realistic_subtracted_pmf(const ProtocolParams &p, std::int64_t n);
/// Same pmf through the thermal(ηλ) × [1 − s^{n+1}] / ℘₁ factorization.
double realistic_subtracted_pmf_bracketed(const ProtocolParams &p, std::int64_t n);

double pmf(const StateModel &model, std::int64_t n);
/// Analytic ∂p_n/∂λ.
double pmf_derivative(const StateModel &model, std::int64_t n);
/// Closed-form mean photon number.
double mean_photon_number(const StateModel &model);

}  // namespace phsub

#endif
