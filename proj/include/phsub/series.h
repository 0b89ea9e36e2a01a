#ifndef PHSUB_SERIES_H
#define PHSUB_SERIES_H

#include <cstdint>

#include "phsub/states.h"

namespace phsub {

/// Hard cap on the number of Fock terms in any series.
inline constexpr std::int64_t kMaxSeriesTerms = 1'000'000;
/// Absolute tail target for pmf-level sums.
inline constexpr double kTailTolerance = 1e-12;

/// Dominating sequence scale · (n+1)^degree · ratio^n for the terms of a Fock-space series.
struct GeometricEnvelope {
    double ratio;
    double scale;
    int degree;

    /// Upper bound on the envelope mass beyond index `last`, i.e. Σ_{n>last}.
    /// Infinite while the envelope is still growing at `last`.
    double tail_after(std::int64_t last) const;
};

struct Truncation {
    std::int64_t last_index;
    bool capped;
    double tail_bound;
};

/// Smallest N whose envelope tail beyond N is below `tol`, or the cap.
Truncation truncate(const GeometricEnvelope &env, double tol = kTailTolerance, std::int64_t cap = kMaxSeriesTerms);

/// Envelope of p_n for the family.
GeometricEnvelope pmf_envelope(const StateModel &model);
/// Envelope of p_n · (∂_λ log p_n)², the Fisher-information summand.
GeometricEnvelope fisher_envelope(const StateModel &model);

/// Neumaier-compensated running sum.
class CompensatedSum {
   public:
    void add(double v);
    double value() const {
        return sum_ + compensation_;
    }

   private:
    double sum_ = 0;
    double compensation_ = 0;
};

}  // namespace phsub

#endif
