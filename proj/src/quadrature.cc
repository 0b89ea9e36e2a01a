#include "phsub/quadrature.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace phsub {

namespace {

// Kronrod abscissae; odd indices (and the centre) are the embedded 7-point Gauss nodes.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment &other) const {
        return error < other.error;
    }
};

Segment gauss_kronrod_15(const std::function<double(double)> &f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);

    double gauss = fc * kGaussWeights[3];
    double kronrod = fc * kKronrodWeights[7];
    double abs_sum = std::abs(kronrod);
    double f_lo[7];
    double f_hi[7];
    for (int j = 0; j < 7; ++j) {
        double dx = half * kNodes[j];
        f_lo[j] = f(centre - dx);
        f_hi[j] = f(centre + dx);
        double pair = f_lo[j] + f_hi[j];
        kronrod += kKronrodWeights[j] * pair;
        abs_sum += kKronrodWeights[j] * (std::abs(f_lo[j]) + std::abs(f_hi[j]));
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }

    double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        asc += kKronrodWeights[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));
    }

    double result = kronrod * half;
    abs_sum *= std::abs(half);
    asc *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0 && err != 0) {
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    }
    if (abs_sum > std::numeric_limits<double>::min() / (50 * eps)) {
        err = std::max(50 * eps * abs_sum, err);
    }
    return {a, b, result, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)> &f, double a, double b,
                           const QuadratureOptions &options) {
    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod_15(f, a, b);
    heap.push(first);
    double total = first.value;
    double total_err = first.error;
    int evaluations = 15;

    auto target = [&]() { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

    while (total_err > target() && static_cast<int>(heap.size()) < options.max_intervals) {
        Segment worst = heap.top();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            break;
        }
        heap.pop();
        Segment left = gauss_kronrod_15(f, worst.a, mid);
        Segment right = gauss_kronrod_15(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-add from scratch so that the running updates do not accumulate rounding.
    QuadratureResult out;
    out.intervals = static_cast<int>(heap.size());
    out.evaluations = evaluations;
    std::vector<double> values;
    values.reserve(heap.size());
    double err = 0;
    while (!heap.empty()) {
        values.push_back(heap.top().value);
        err += heap.top().error;
        heap.pop();
    }
    std::sort(values.begin(), values.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    double sum = 0;
    for (double v : values) {
        sum += v;
    }
    out.value = sum;
    out.abs_error = err;
    out.converged = err <= std::max(options.abs_tol, options.rel_tol * std::abs(sum));
    return out;
}

}  // namespace phsub
