#ifndef PHSUB_QUADRATURE_H
#define PHSUB_QUADRATURE_H

#include <functional>

namespace phsub {

struct QuadratureOptions {
    double abs_tol = 1e-14;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0;
    double abs_error = 0;
    int evaluations = 0;
    int intervals = 0;
    bool converged = false;
};

/// Globally adaptive 15-point Gauss–Kronrod integration of f over [a, b].
/// The interval with the largest error estimate is bisected until the summed estimate
/// meets max(abs_tol, rel_tol·|I|) or the interval budget runs out.
QuadratureResult integrate(const std::function<double(double)> &f, double a, double b,
                           const QuadratureOptions &options = {});

}  // namespace phsub

#endif
