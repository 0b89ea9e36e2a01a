// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "phsub/fisher.h"
#include "phsub/measurements.h"
#include "phsub/oracle.h"
#include "phsub/protocol.h"
#include "phsub/states.h"

using namespace phsub;

namespace {

constexpr double kEta = 0.95;
const std::vector<double> kPoints{0.01, 0.1, 1.0, 10.0, 100.0};

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> out;
    for (int i = 0; i < points; i++) {
        out.push_back(lo * std::pow(hi / lo, double(i) / (points - 1)));
    }
    return out;
}

double rel(double a, double b) {
    return std::abs(a - b) / std::abs(b);
}

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char *name;
    double time_limit;  // seconds, 0 = none
    std::function<Outcome()> run;
};

std::string fmt(const char *f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome closed_form_qfi() {
    double worst = 0;
    for (double l : kPoints) {
        double t = 1 / (l * (1 + l));
        worst = std::max(worst, rel(fi_discrete(StateModel::thermal(l)).value, t));
        worst = std::max(worst, rel(fi_discrete(StateModel::subtracted(l)).value, 2 * t));
        worst = std::max(worst, rel(fi_discrete(StateModel::added(l)).value, 2 * t));
    }
    return {worst < 1e-9, fmt("max rel err %.2e (tol 1e-9)", worst)};
}

Outcome figure1_endpoints() {
    double lo = 1e-3;
    double low = fi_discrete(StateModel::realistic_accepted(ProtocolParams(lo, kEta, 0.99))).value /
                 fi_discrete(StateModel::subtracted(lo)).value;
    double hi = 1e2;
    double high = fi_discrete(StateModel::realistic_accepted(ProtocolParams(hi, kEta, 0.99))).value /
                  fi_discrete(StateModel::thermal(hi)).value;
    bool ok_low = low >= 0.98 && low <= 1.0;
    bool ok_high = high >= 0.95 && high <= 1.05;
    char buf[300];
    std::snprintf(buf, sizeof buf, "acc/sub at 1e-3 = %.6f, want [0.98, 1] %s; acc/thermal at 1e2 = %.6f, want [0.95, 1.05] %s",
                  low, ok_low ? "ok" : "NO", high, ok_high ? "ok" : "NO");
    return {ok_low && ok_high, buf};
}

Outcome gaussian_oracles() {
    double worst = 0;
    for (double l : kPoints) {
        worst = std::max(worst, rel(fi_continuous(StateModel::thermal(l), ContinuousMeasurement::Homodyne).value,
                                    2 / ((1 + 2 * l) * (1 + 2 * l))));
        worst = std::max(worst, rel(fi_continuous(StateModel::thermal(l), ContinuousMeasurement::HeterodyneRadial).value,
                                    1 / ((1 + l) * (1 + l))));
    }
    return {worst < 1e-7, fmt("max rel err %.2e (tol 1e-7)", worst)};
}

Outcome mixture_identity() {
    double worst = 0;
    for (double eps : {0.97, 0.99}) {
        for (double l : {0.1, 1.0, 10.0}) {
            ProtocolParams p(l, kEta, eps);
            double p1 = success_probability(p);
            ThermalParams rej(rejected_mean(p));
            ThermalParams transmitted(kEta * l);
            for (int n = 0; n <= 200; n++) {
                double lhs = p1 * realistic_subtracted_pmf(p, n) + (1 - p1) * thermal_pmf(rej, n);
                worst = std::max(worst, std::abs(lhs - thermal_pmf(transmitted, n)));
            }
        }
    }
    return {worst <= 1e-12, fmt("max abs err %.2e (tol 1e-12)", worst)};
}

Outcome rejected_onoff_consistency() {
    double worst = 0;
    for (double eps : {0.97, 0.99}) {
        for (double l : log_grid(1e-2, 1e2, 200)) {
            ProtocolParams p(l, kEta, eps);
            double lt = rejected_mean(p);
            double composed = reparameterize_fi(fi_onoff(StateModel::thermal(lt), eps).value, rejected_mean_derivative(p));
            worst = std::max(worst, rel(composed, fi_rejected_onoff(p)));
        }
    }
    return {worst <= 1e-12, fmt("max rel err %.2e (tol 1e-12)", worst)};
}

Outcome convexity_sandwich() {
    const BranchMeasurement counting{OutputMeasurement::photon_number(), OutputMeasurement::photon_number()};
    double worst_gap = 0;
    int violations = 0;
    for (double eps : {0.97, 0.99}) {
        for (double l : log_grid(1e-2, 1e2, 200)) {
            ProtocolParams p(l, kEta, eps);
            auto b = convexity_bounds(p);
            double tot = total_information(p, counting).total;
            if (!(b.lower <= tot && tot <= b.upper * (1 + 1e-6))) {
                violations++;
            }
            worst_gap = std::max(worst_gap, rel(tot, b.upper));
        }
    }
    return {violations == 0 && worst_gap < 1e-2,
            fmt("%g bound violations; max |F_tot - QFI|/QFI = %.3e (tol 1e-2)", violations, worst_gap)};
}

Outcome regime_claims() {
    double het_sub = fi_continuous(StateModel::subtracted(5), ContinuousMeasurement::HeterodyneRadial).value;
    bool a = het_sub > 1 / (5.0 * 6.0);
    double onoff_sub = fi_onoff(StateModel::subtracted(0.2), 0.97).value;
    bool b = onoff_sub > 1 / (0.2 * 1.2);
    BranchMeasurement het{OutputMeasurement::heterodyne(), OutputMeasurement::heterodyne()};
    double ftot_het = total_information(ProtocolParams(0.1, kEta, 0.99), het).total;
    double th_het = fi_continuous(StateModel::thermal(0.1), ContinuousMeasurement::HeterodyneRadial).value;
    bool c = ftot_het > th_het;
    BranchMeasurement onoff{OutputMeasurement::onoff(0.99), OutputMeasurement::onoff(0.99)};
    double ftot_onoff = total_information(ProtocolParams(5, kEta, 0.99), onoff).total;
    double th_onoff = fi_onoff(StateModel::thermal(5), 0.99).value;
    bool d = ftot_onoff > th_onoff;
    char buf[400];
    std::snprintf(buf, sizeof buf,
                  "het sub %.5g > %.5g %s; onoff sub %.5g > %.5g %s; het F_tot %.5g > %.5g %s; onoff F_tot %.5g > %.5g %s",
                  het_sub, 1 / 30.0, a ? "ok" : "NO", onoff_sub, 1 / 0.24, b ? "ok" : "NO", ftot_het, th_het,
                  c ? "ok" : "NO", ftot_onoff, th_onoff, d ? "ok" : "NO");
    return {a && b && c && d, buf};
}

Outcome rate_crossover() {
    const CostModel costs(1, 0.5, 10);
    auto r_ps = [&](double l) { return rate_postselected(ProtocolParams(l, kEta, 0.99), costs, OutputMeasurement::heterodyne()); };
    auto r_0 = [&](double l) { return rate_direct(l, costs, 1 / (l * (1 + l))); };
    bool wins_low = r_ps(0.1) > r_0(0.1);
    bool r0_ok = std::abs(r_0(0.1) - 0.82645) <= 1e-5;
    double crossing = NAN;
    auto grid = log_grid(0.1, 100, 400);
    double prev = r_ps(grid[0]) - r_0(grid[0]);
    for (std::size_t i = 1; i < grid.size(); i++) {
        double d = r_ps(grid[i]) - r_0(grid[i]);
        if ((d > 0) != (prev > 0)) {
            crossing = grid[i];
            break;
        }
        prev = d;
    }
    bool crosses = std::isfinite(crossing);
    char buf[400];
    std::snprintf(buf, sizeof buf,
                  "R_ps(0.1) = %.5g > R_0(0.1) = %.7g %s; R_0(0.1) vs 0.82645 %s; crossing in [0.1,100]: %s "
                  "(R_ps(100) = %.4g, R_0(100) = %.4g)",
                  r_ps(0.1), r_0(0.1), wins_low ? "ok" : "NO", r0_ok ? "ok" : "NO",
                  crosses ? fmt("near %.3g", crossing).c_str() : "none", r_ps(100), r_0(100));
    return {wins_low && r0_ok && crosses, buf};
}

Outcome monte_carlo() {
    ProtocolParams p(1, kEta, 0.99);
    auto r = simulate_protocol(SimConfig{p, 10'000'000, 20211018});
    double p1 = success_probability(p);
    double z = std::abs(r.empirical_p1 - p1) / r.p1_std_error;
    auto chi = chi_square_test(r.accepted_hist, [&](std::int64_t n) { return realistic_subtracted_pmf(p, n); });
    auto e = empirical_fi(StateModel::thermal(1), OutputMeasurement::photon_number(), 1e-3, 10'000'000, 20211019);
    double ez = std::abs(e.value - 0.5) / e.std_error;
    char buf[400];
    std::snprintf(buf, sizeof buf, "p1 %.6f vs %.6f (%.2f sigma, tol 4); accepted chi2 p = %.3g (tol 1e-4); FI %.5f +- %.5f (%.2f s.e., tol 3)",
                  r.empirical_p1, p1, z, chi.p_value, e.value, e.std_error, ez);
    return {z < 4 && chi.p_value > 1e-4 && ez < 3, buf};
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "closed-form QFI", 1, closed_form_qfi},
        {2, "fig1 endpoints", 10, figure1_endpoints},
        {3, "gaussian measurement oracles", 0, gaussian_oracles},
        {4, "mixture identity", 0, mixture_identity},
        {5, "rejected on-off FI consistency", 0, rejected_onoff_consistency},
        {6, "convexity sandwich", 60, convexity_sandwich},
        {7, "regime claims", 0, regime_claims},
        {8, "fig7 crossover", 0, rate_crossover},
        {9, "monte carlo", 120, monte_carlo},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = c.time_limit == 0 || secs < c.time_limit;
        bool pass = o.pass && in_time;
        failed += !pass;
        std::string limit = c.time_limit > 0 ? fmt(" (limit %g s)", c.time_limit) : "";
        std::printf("criterion %d [%s]: %s  %s; %.2f s%s%s\n", c.id, c.name, pass ? "PASS" : "FAIL", o.detail.c_str(),
                    secs, limit.c_str(), in_time ? "" : " TOO SLOW");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
