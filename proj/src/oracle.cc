#include "phsub/oracle.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "phsub/errors.h"
#include "phsub/measurements.h"

namespace phsub {

namespace {

struct Partial {
    std::uint64_t accepted = 0;
    std::vector<std::uint64_t> accepted_hist;
    std::vector<std::uint64_t> rejected_hist;
    ClickRecord clicks;
};

void bump(std::vector<std::uint64_t> &hist, std::int64_t n) {
    auto idx = static_cast<std::size_t>(n);
    if (hist.size() <= idx) {
        hist.resize(idx + 1, 0);
    }
    ++hist[idx];
}

void merge_into(std::vector<std::uint64_t> &dst, const std::vector<std::uint64_t> &src) {
    if (dst.size() < src.size()) {
        dst.resize(src.size(), 0);
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] += src[i];
    }
}

Partial run_partition(const ProtocolParams &p, std::uint64_t trials, Xoshiro256 rng) {
    Partial out;
    const double reflect = 1.0 - p.eta();
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::int64_t n = sample_thermal(rng, p.lambda());
        std::int64_t k = sample_binomial(rng, n, reflect);
        bool click = sample_click(rng, k, p.epsilon());
        out.clicks.reflected_photons += static_cast<std::uint64_t>(k);
        if (click) {
            ++out.accepted;
            ++out.clicks.clicks;
            bump(out.accepted_hist, n - k);
        } else {
            if (k > 0) {
                ++out.clicks.missed;
            }
            bump(out.rejected_hist, n - k);
        }
    }
    return out;
}

double gamma2(Xoshiro256 &rng, double scale) {
    return -scale * std::log(rng.uniform_open0() * rng.uniform_open0());
}

double log_likelihood(const StateModel &model, const OutputMeasurement &meas, double outcome) {
    switch (meas.kind()) {
        case OutputMeasurement::Kind::PhotonNumber:
            return std::log(pmf(model, static_cast<std::int64_t>(outcome)));
        case OutputMeasurement::Kind::OnOff: {
            OnOffDistribution d = onoff_pmf(model, meas.efficiency());
            return std::log(outcome > 0.5 ? d.p_on : d.p_off);
        }
        case OutputMeasurement::Kind::HeterodyneRadial:
            return std::log(heterodyne_radial_pdf(model, HeterodyneRadialPoint(outcome)));
        case OutputMeasurement::Kind::Homodyne:
            return std::log(homodyne_pdf(model, HomodynePoint{outcome}));
    }
    return 0;
}

double sample_outcome(const StateModel &model, const OutputMeasurement &meas, Xoshiro256 &rng) {
    switch (meas.kind()) {
        case OutputMeasurement::Kind::PhotonNumber:
            return static_cast<double>(sample_photon_number(model, rng));
        case OutputMeasurement::Kind::OnOff:
            return sample_click(rng, sample_photon_number(model, rng), meas.efficiency()) ? 1.0 : 0.0;
        case OutputMeasurement::Kind::HeterodyneRadial:
            return sample_heterodyne_radial(model, rng);
        case OutputMeasurement::Kind::Homodyne:
            return sample_homodyne(model, rng);
    }
    return 0;
}

}  // namespace

std::int64_t sample_thermal(Xoshiro256 &rng, double mean) {
    // P(N >= n) = q^n with q = mean/(1+mean); invert the survival function.
    double log_q = -std::log1p(1.0 / mean);
    double n = std::floor(std::log(rng.uniform_open0()) / log_q);
    return static_cast<std::int64_t>(n);
}

std::int64_t sample_binomial(Xoshiro256 &rng, std::int64_t n, double p) {
    if (n <= 0 || p <= 0) {
        return 0;
    }
    if (p >= 1) {
        return n;
    }
    if (n < 64) {
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            hits += rng.uniform_open0() <= p ? 1 : 0;
        }
        return hits;
    }
    // Gaps between successive successes are geometric; walk them until past n.
    const double log_miss = std::log1p(-p);
    std::int64_t hits = 0;
    double position = -1;
    for (;;) {
        position += std::floor(std::log(rng.uniform_open0()) / log_miss) + 1.0;
        if (position >= static_cast<double>(n)) {
            return hits;
        }
        ++hits;
    }
}

bool sample_click(Xoshiro256 &rng, std::int64_t k, double eps) {
    if (k <= 0) {
        return false;
    }
    if (eps >= 1) {
        return true;
    }
    double p_click = -std::expm1(static_cast<double>(k) * std::log1p(-eps));
    return rng.uniform_open0() <= p_click;
}

SimReport simulate_protocol(const SimConfig &cfg, unsigned workers) {
    if (cfg.trials < 1) {
        throw InvalidParameter("simulation needs at least one trial");
    }
    const std::uint64_t partitions = (cfg.trials + kTrialsPerPartition - 1) / kTrialsPerPartition;
    std::vector<Partial> partials(partitions);

    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, partitions));

    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        for (std::uint64_t i = next++; i < partitions; i = next++) {
            std::uint64_t begin = i * kTrialsPerPartition;
            std::uint64_t count = std::min(kTrialsPerPartition, cfg.trials - begin);
            partials[i] = run_partition(cfg.params, count, Xoshiro256::for_stream(cfg.seed, i));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (auto &t : pool) {
        t.join();
    }

    SimReport report;
    report.trials = cfg.trials;
    for (const Partial &part : partials) {
        report.n_accepted += part.accepted;
        merge_into(report.accepted_hist, part.accepted_hist);
        merge_into(report.rejected_hist, part.rejected_hist);
        report.click_record.clicks += part.clicks.clicks;
        report.click_record.missed += part.clicks.missed;
        report.click_record.reflected_photons += part.clicks.reflected_photons;
    }
    double n = static_cast<double>(cfg.trials);
    report.empirical_p1 = static_cast<double>(report.n_accepted) / n;
    report.p1_std_error = std::sqrt(report.empirical_p1 * (1.0 - report.empirical_p1) / n);
    return report;
}

std::int64_t sample_photon_number(const StateModel &model, Xoshiro256 &rng) {
    const double l = model.lambda();
    switch (model.family()) {
        case Family::Thermal:
            return sample_thermal(rng, l);
        case Family::Subtracted:
            // (n+1) q^n (1−q)²: sum of two independent geometric variables.
            return sample_thermal(rng, l) + sample_thermal(rng, l);
        case Family::Added:
            return 1 + sample_thermal(rng, l) + sample_thermal(rng, l);
        case Family::RealisticAccepted: {
            const ProtocolParams &p = model.protocol();
            for (;;) {
                std::int64_t n = sample_thermal(rng, l);
                std::int64_t k = sample_binomial(rng, n, 1.0 - p.eta());
                if (sample_click(rng, k, p.epsilon())) {
                    return n - k;
                }
            }
        }
        case Family::RealisticRejected:
            return sample_thermal(rng, rejected_mean(model.protocol()));
    }
    throw UnsupportedFamily("sample_photon_number: unknown family");
}

double sample_heterodyne_radial(const StateModel &model, Xoshiro256 &rng) {
    const double m = 1.0 + model.lambda();
    switch (model.family()) {
        case Family::Thermal:
            return -m * std::log(rng.uniform_open0());
        case Family::Subtracted:
            // Mixture of Exp(m) with weight 1/m and Gamma(2, m) with weight λ/m.
            if (rng.uniform_open0() <= 1.0 / m) {
                return -m * std::log(rng.uniform_open0());
            }
            return gamma2(rng, m);
        case Family::Added:
            return gamma2(rng, m);
        case Family::RealisticRejected:
            return -(1.0 + rejected_mean(model.protocol())) * std::log(rng.uniform_open0());
        case Family::RealisticAccepted:
            break;
    }
    throw UnsupportedFamily("heterodyne sampling is not available for " + std::string(family_name(model.family())));
}

double sample_homodyne(const StateModel &model, Xoshiro256 &rng) {
    double mean = 0;
    switch (model.family()) {
        case Family::Thermal:
            mean = model.lambda();
            break;
        case Family::RealisticRejected:
            mean = rejected_mean(model.protocol());
            break;
        default:
            throw UnsupportedFamily("homodyne sampling is not available for " +
                                    std::string(family_name(model.family())));
    }
    double sigma = std::sqrt((1.0 + 2.0 * mean) / 2.0);
    double r = std::sqrt(-2.0 * std::log(rng.uniform_open0()));
    return sigma * r * std::cos(2.0 * std::numbers::pi * rng.uniform_open0());
}

EmpiricalFi empirical_fi(const StateModel &model, const OutputMeasurement &meas, double delta, std::uint64_t trials,
                         std::uint64_t seed) {
    const double l = model.lambda();
    if (!(delta > 1e-4 * l && delta < 1e-1 * l)) {
        throw InvalidParameter("empirical FI step must lie in (1e-4*lambda, 1e-1*lambda), got " + std::to_string(delta));
    }
    if (trials < 2) {
        throw InvalidParameter("empirical FI needs at least two samples");
    }
    const StateModel up = model.with_lambda(l + delta);
    const StateModel down = model.with_lambda(l - delta);
    Xoshiro256 rng(seed);

    // Welford on the squared score.
    double mean = 0;
    double m2 = 0;
    for (std::uint64_t i = 1; i <= trials; ++i) {
        double x = sample_outcome(model, meas, rng);
        double score = (log_likelihood(up, meas, x) - log_likelihood(down, meas, x)) / (2.0 * delta);
        double s2 = score * score;
        double d = s2 - mean;
        mean += d / static_cast<double>(i);
        m2 += d * (s2 - mean);
    }
    double var = m2 / static_cast<double>(trials - 1);
    return {mean, std::sqrt(var / static_cast<double>(trials)), trials};
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> counts,
                                const std::function<double(std::int64_t)> &probability, double min_expected) {
    double total = 0;
    for (auto c : counts) {
        total += static_cast<double>(c);
    }
    if (total <= 0) {
        throw InvalidParameter("chi-square test needs a non-empty histogram");
    }

    struct Bin {
        double observed;
        double expected;
    };
    std::vector<Bin> bins;
    Bin current{0, 0};
    double covered = 0;
    for (std::size_t n = 0; n < counts.size(); ++n) {
        double p = probability(static_cast<std::int64_t>(n));
        covered += p;
        current.observed += static_cast<double>(counts[n]);
        current.expected += total * p;
        if (current.expected >= min_expected) {
            bins.push_back(current);
            current = {0, 0};
        }
    }
    current.expected += total * std::max(0.0, 1.0 - covered);
    if (current.expected >= min_expected || bins.empty()) {
        bins.push_back(current);
    } else {
        bins.back().observed += current.observed;
        bins.back().expected += current.expected;
    }

    double stat = 0;
    for (const Bin &b : bins) {
        if (b.expected > 0) {
            double d = b.observed - b.expected;
            stat += d * d / b.expected;
        }
    }
    int dof = static_cast<int>(bins.size()) - 1;
    double p_value = dof > 0 ? boost::math::gamma_q(0.5 * dof, 0.5 * stat) : 1.0;
    return {stat, dof, p_value};
}

}  // namespace phsub
