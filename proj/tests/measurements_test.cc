#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <gtest/gtest.h>

#include "phsub/errors.h"
#include "phsub/measurements.h"
#include "phsub/oracle.h"
#include "phsub/quadrature.h"

using namespace phsub;

namespace {

std::vector<StateModel> families(double l, double eps = 0.99) {
    ProtocolParams p(l, 0.95, eps);
    return {StateModel::thermal(l), StateModel::subtracted(l), StateModel::added(l),
            StateModel::realistic_accepted(p), StateModel::realistic_rejected(p)};
}

double boost_line(const StateModel &m) {
    boost::math::quadrature::sinh_sinh<double> q;
    return q.integrate([&](double x) { return homodyne_pdf(m, {x}); });
}

double boost_half_line(const StateModel &m) {
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate([&](double u) { return heterodyne_radial_pdf(m, HeterodyneRadialPoint(u)); });
}

}  // namespace

TEST(measurements, homodyne_values) {
    EXPECT_NEAR(homodyne_pdf(StateModel::thermal(1e-12), {0}), 1 / std::sqrt(std::numbers::pi), 1e-11);
    EXPECT_NEAR(homodyne_pdf(StateModel::thermal(1), {0}), 1 / std::sqrt(3 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(homodyne_pdf(StateModel::subtracted(1), {0}), 6 / (std::sqrt(std::numbers::pi) * std::pow(3.0, 2.5)), 1e-15);
    EXPECT_NEAR(homodyne_pdf(StateModel::subtracted(1), {0}), 0.21715667, 5e-9);
    double x = 0.7;
    double v = 3;
    EXPECT_NEAR(homodyne_pdf(StateModel::added(1), {x}),
                (1 + 2 * (1 + x * x * 2)) / (std::sqrt(std::numbers::pi) * std::pow(v, 2.5)) * std::exp(-x * x / v),
                1e-15);
}

TEST(measurements, heterodyne_values) {
    EXPECT_DOUBLE_EQ(heterodyne_radial_pdf(StateModel::thermal(1), HeterodyneRadialPoint(0)), 0.5);
    EXPECT_EQ(heterodyne_radial_pdf(StateModel::added(1), HeterodyneRadialPoint(0)), 0.0);
    EXPECT_DOUBLE_EQ(heterodyne_radial_pdf(StateModel::subtracted(1), HeterodyneRadialPoint(0)), 0.25);
    EXPECT_NEAR(heterodyne_radial_pdf(StateModel::subtracted(2), HeterodyneRadialPoint(1.5)),
                (1 + 2 * 2.5) / 27.0 * std::exp(-0.5), 1e-15);
    EXPECT_THROW(HeterodyneRadialPoint(-1e-9), DomainError);
}

TEST(measurements, onoff_values) {
    auto th = onoff_pmf(StateModel::thermal(1), 0.99);
    EXPECT_NEAR(th.p_off, 1 / 1.99, 1e-15);
    EXPECT_NEAR(th.p_off + th.p_on, 1.0, 1e-15);
    EXPECT_EQ(onoff_pmf(StateModel::added(1), 1.0).p_off, 0.0);
    EXPECT_NEAR(onoff_pmf(StateModel::subtracted(1), 0.99).p_off, 1 / (1.99 * 1.99), 1e-15);
    EXPECT_NEAR(onoff_pmf(StateModel::added(1), 0.99).p_off, 0.01 / (1.99 * 1.99), 1e-15);
}

TEST(measurements, normalization_own_quadrature) {
    for (double l : {0.1, 1.0, 10.0}) {
        for (const auto &m : families(l)) {
            auto hd = homodyne_domain(m);
            auto r = integrate([&](double x) { return homodyne_pdf(m, {x}); }, hd.lo, hd.hi);
            EXPECT_NEAR(r.value, 1.0, 1e-9) << family_name(m.family()) << " l=" << l;
            auto rd = heterodyne_domain(m);
            EXPECT_EQ(rd.lo, 0.0);
            auto s = integrate([&](double u) { return heterodyne_radial_pdf(m, HeterodyneRadialPoint(u)); }, rd.lo,
                               rd.hi);
            EXPECT_NEAR(s.value, 1.0, 1e-9) << family_name(m.family()) << " l=" << l;
        }
    }
}

TEST(measurements, normalization_boost_oracle) {
    for (double l : {0.1, 1.0, 10.0}) {
        for (const auto &m : families(l)) {
            EXPECT_NEAR(boost_line(m), 1.0, 1e-9) << family_name(m.family()) << " l=" << l;
            EXPECT_NEAR(boost_half_line(m), 1.0, 1e-9) << family_name(m.family()) << " l=" << l;
        }
    }
}

TEST(measurements, domains_hold_the_mass) {
    for (double l : {0.01, 1.0, 100.0}) {
        for (const auto &m : families(l)) {
            auto hd = homodyne_domain(m);
            boost::math::quadrature::exp_sinh<double> q;
            double right = q.integrate([&](double t) { return homodyne_pdf(m, {hd.hi + t}); });
            double left = q.integrate([&](double t) { return homodyne_pdf(m, {hd.lo - t}); });
            EXPECT_LT(left + right, 1e-14) << family_name(m.family()) << " l=" << l;
            auto rd = heterodyne_domain(m);
            double tail = q.integrate([&](double t) { return heterodyne_radial_pdf(m, HeterodyneRadialPoint(rd.hi + t)); });
            EXPECT_LT(tail, 1e-14) << family_name(m.family()) << " l=" << l;
        }
    }
}

TEST(measurements, mixture_identity) {
    for (double eps : {0.97, 0.99}) {
        for (double l : {0.1, 1.0, 10.0}) {
            ProtocolParams p(l, 0.95, eps);
            double p1 = success_probability(p);
            auto acc = StateModel::realistic_accepted(p);
            auto rej = StateModel::realistic_rejected(p);
            auto tr = StateModel::thermal(0.95 * l);
            for (double x = -8; x <= 8; x += 0.25) {
                double lhs = p1 * homodyne_pdf(acc, {x}) + (1 - p1) * homodyne_pdf(rej, {x});
                ASSERT_NEAR(lhs, homodyne_pdf(tr, {x}), 1e-10) << x;
            }
            for (double u = 0; u <= 60; u += 0.5) {
                HeterodyneRadialPoint pt(u);
                double lhs = p1 * heterodyne_radial_pdf(acc, pt) + (1 - p1) * heterodyne_radial_pdf(rej, pt);
                ASSERT_NEAR(lhs, heterodyne_radial_pdf(tr, pt), 1e-10) << u;
            }
            double lhs = p1 * onoff_pmf(acc, eps).p_off + (1 - p1) * onoff_pmf(rej, eps).p_off;
            EXPECT_NEAR(lhs, onoff_pmf(tr, eps).p_off, 1e-12);
        }
    }
}

TEST(measurements, onoff_series_matches_closed_form) {
    for (double l : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        for (double eps : {0.3, 0.97, 1.0}) {
            for (const auto &m : families(l, eps)) {
                auto a = onoff_pmf(m, eps);
                auto b = onoff_pmf_series(m, eps);
                EXPECT_NEAR(a.p_off, b.p_off, 1e-12) << family_name(m.family()) << " l=" << l << " eps=" << eps;
                EXPECT_NEAR(a.p_on, b.p_on, 1e-12);
            }
        }
    }
}

TEST(measurements, density_derivatives) {
    for (double l : {0.1, 1.0, 10.0}) {
        for (const auto &m : families(l)) {
            double h = 1e-5 * l;
            auto up = m.with_lambda(l + h);
            auto dn = m.with_lambda(l - h);
            for (double x : {-3.0, -0.4, 0.0, 1.1, 5.0}) {
                double fd = (homodyne_pdf(up, {x}) - homodyne_pdf(dn, {x})) / (2 * h);
                EXPECT_NEAR(homodyne_pdf_derivative(m, {x}), fd, 1e-7 * (std::abs(fd) + 1e-3));
            }
            for (double u : {0.0, 0.3, 2.0, 15.0}) {
                HeterodyneRadialPoint pt(u);
                double fd = (heterodyne_radial_pdf(up, pt) - heterodyne_radial_pdf(dn, pt)) / (2 * h);
                EXPECT_NEAR(heterodyne_radial_pdf_derivative(m, pt), fd, 1e-7 * (std::abs(fd) + 1e-3));
            }
            double fd = (onoff_pmf(up, 0.9).p_off - onoff_pmf(dn, 0.9).p_off) / (2 * h);
            EXPECT_NEAR(onoff_off_derivative(m, 0.9), fd, 1e-7 * (std::abs(fd) + 1e-3));
        }
    }
}

TEST(measurements, homodyne_histogram_from_sampler) {
    constexpr int kSamples = 1'000'000;
    constexpr int kBins = 50;
    ProtocolParams p(1, 0.95, 0.99);
    for (const auto &m : {StateModel::thermal(1), StateModel::realistic_rejected(p)}) {
        auto d = homodyne_domain(m);
        double lo = d.lo / 2;
        double hi = d.hi / 2;
        double w = (hi - lo) / kBins;
        std::vector<double> counts(kBins + 2);
        Xoshiro256 rng(11);
        for (int i = 0; i < kSamples; i++) {
            double x = sample_homodyne(m, rng);
            int b = x < lo ? 0 : x >= hi ? kBins + 1 : 1 + static_cast<int>((x - lo) / w);
            counts[std::min(b, kBins)]++;
        }
        double tv = 0;
        for (int b = 0; b <= kBins; b++) {
            double a = b == 0 ? d.lo : lo + (b - 1) * w;
            double z = b == 0 ? lo : lo + b * w;
            if (b == kBins) {
                z = d.hi;
            }
            double prob = integrate([&](double x) { return homodyne_pdf(m, {x}); }, a, z).value;
            tv += std::abs(counts[b] / kSamples - prob);
        }
        EXPECT_LT(0.5 * tv, 5 / std::sqrt(double(kSamples))) << family_name(m.family());
    }
}

TEST(measurements, heterodyne_histogram_from_sampler) {
    constexpr int kSamples = 1'000'000;
    ProtocolParams p(2, 0.95, 0.99);
    for (const auto &m : {StateModel::thermal(2), StateModel::subtracted(2), StateModel::added(2),
                          StateModel::realistic_rejected(p)}) {
        Xoshiro256 rng(5);
        std::vector<std::uint64_t> hist;
        double w = 0.5;
        for (int i = 0; i < kSamples; i++) {
            double u = sample_heterodyne_radial(m, rng);
            ASSERT_GE(u, 0.0);
            auto b = static_cast<std::size_t>(u / w);
            if (b >= hist.size()) {
                hist.resize(b + 1);
            }
            hist[b]++;
        }
        auto r = chi_square_test(hist, [&](std::int64_t b) {
            return integrate([&](double u) { return heterodyne_radial_pdf(m, HeterodyneRadialPoint(u)); }, b * w,
                             (b + 1) * w)
                .value;
        });
        EXPECT_GT(r.p_value, 1e-4) << family_name(m.family()) << " chi2=" << r.statistic;
    }
}
