#ifndef PHSUB_ORACLE_H
#define PHSUB_ORACLE_H

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "phsub/protocol.h"
#include "phsub/rng.h"
#include "phsub/states.h"

namespace phsub {

struct SimConfig {
    ProtocolParams params;
    std::uint64_t trials;
    std::uint64_t seed;
};

struct ClickRecord {
    std::uint64_t clicks = 0;
    /// Trials where photons were reflected but the detector stayed silent.
    std::uint64_t missed = 0;
    std::uint64_t reflected_photons = 0;

    bool operator==(const ClickRecord &) const = default;
};

struct SimReport {
    std::uint64_t trials = 0;
    std::uint64_t n_accepted = 0;
    double empirical_p1 = 0;
    double p1_std_error = 0;
    /// Transmitted photon counts, indexed by photon number, per branch.
    std::vector<std::uint64_t> accepted_hist;
    std::vector<std::uint64_t> rejected_hist;
    ClickRecord click_record;

    bool operator==(const SimReport &) const = default;
};

/// Trials per independently seeded partition. The partitioning, not the worker
/// count, fixes the random streams, so reports do not depend on `workers`.
inline constexpr std::uint64_t kTrialsPerPartition = 1ULL << 20;

/// Seeded Monte Carlo of the physical protocol: thermal photon number, binomial
/// splitting at the beam splitter, and an on-off click on the reflected photons.
SimReport simulate_protocol(const SimConfig &cfg, unsigned workers = 0);

std::int64_t sample_thermal(Xoshiro256 &rng, double mean);
/// Exact Binomial(n, p): per-trial Bernoulli draws for n < 64, geometric gap skipping above.
std::int64_t sample_binomial(Xoshiro256 &rng, std::int64_t n, double p);
/// On-off click on k photons with efficiency eps.
bool sample_click(Xoshiro256 &rng, std::int64_t k, double eps);

std::int64_t sample_photon_number(const StateModel &model, Xoshiro256 &rng);
/// Supported for Thermal, Subtracted, Added and RealisticRejected.
double sample_heterodyne_radial(const StateModel &model, Xoshiro256 &rng);
/// Supported for Thermal and RealisticRejected.
double sample_homodyne(const StateModel &model, Xoshiro256 &rng);

struct EmpiricalFi {
    double value;
    double std_error;
    std::uint64_t samples;
};

/// Score-based FI estimate: draw outcomes at λ and average the squared central
/// difference of the log-likelihood between λ+δ and λ−δ.
EmpiricalFi empirical_fi(const StateModel &model, const OutputMeasurement &meas, double delta,
                         std::uint64_t trials, std::uint64_t seed);

struct ChiSquareResult {
    double statistic;
    int dof;
    double p_value;
};

/// Pearson goodness of fit of a count histogram against `probability(n)`. Bins are
/// merged until each expects at least `min_expected` counts; the last bin absorbs
/// the model's mass beyond the histogram.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> counts,
                                const std::function<double(std::int64_t)> &probability, double min_expected = 5.0);

}  // namespace phsub

#endif
