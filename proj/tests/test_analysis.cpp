#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ranktraffic/analysis.hpp"
#include "ranktraffic/hit_sim.hpp"
#include "ranktraffic/rng.hpp"

using namespace ranktraffic;

TEST_CASE("a single point lands in a single bin") {
    const std::vector<double> x{3.0}, y{42.0};
    const BinnedCurve curve = log_bin(x, y, 10);
    REQUIRE(curve.size() == 1);
    CHECK(curve.mean[0] == doctest::Approx(42.0));
    CHECK(curve.count[0] == 1);
    CHECK(curve.stderr_of_mean[0] == 0.0);
}

TEST_CASE("constant y gives constant bin means") {
    std::vector<double> x, y;
    for (int i = 1; i <= 1000; ++i) {
        x.push_back(static_cast<double>(i));
        y.push_back(2.5);
    }
    const BinnedCurve curve = log_bin(x, y, 10);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve.mean[i] == doctest::Approx(2.5));
        CHECK(curve.stderr_of_mean[i] == doctest::Approx(0.0));
    }
}

TEST_CASE("identity data bins onto the diagonal") {
    std::vector<double> x, y;
    for (int i = 0; i < 300; ++i) {
        x.push_back(std::pow(10.0, i / 100.0));
        y.push_back(x.back());
    }
    const BinnedCurve curve = log_bin(x, y, 10);
    for (std::size_t i = 0; i < curve.size(); ++i)
        CHECK(curve.mean[i] == doctest::Approx(curve.center[i]).epsilon(1e-12));
}

TEST_CASE("log_bin validates input") {
    const std::vector<double> bad_x{1.0, 0.0}, y2{1.0, 2.0};
    CHECK_THROWS_AS(log_bin(bad_x, y2, 10), std::invalid_argument);
    const std::vector<double> x1{1.0};
    CHECK_THROWS_AS(log_bin(x1, y2, 10), std::invalid_argument);
    CHECK_THROWS_AS(log_bin(x1, std::vector<double>{1.0}, 0), std::invalid_argument);
}

TEST_CASE("curves binned on the shared grid align bin indices") {
    const std::vector<double> xa{1.0, 2.0, 70.0}, ya{1.0, 1.0, 1.0};
    const std::vector<double> xb{2.05, 75.0}, yb{1.0, 1.0};
    const BinnedCurve a = log_bin(xa, ya, 10);
    const BinnedCurve b = log_bin(xb, yb, 10);
    // 2.0 and 2.05 share anchored bin floor(10*log10 x), as do 70 and 75
    CHECK(a.bin_index[0] != b.bin_index[0]);
    CHECK(a.bin_index[1] == b.bin_index[0]);
    CHECK(a.bin_index[2] == b.bin_index[1]);
}

TEST_CASE("uniform samples on [1,10] give a flat density") {
    SplitMix64 rng(3);
    std::vector<double> samples(200'000);
    for (double& s : samples) s = 1.0 + 9.0 * rng.uniform01();
    const BinnedCurve pdf = estimate_pdf_logbins(samples, 10);
    for (std::size_t i = 0; i < pdf.size(); ++i)
        CHECK(pdf.mean[i] == doctest::Approx(1.0 / 9.0).epsilon(0.05));
}

TEST_CASE("pdf estimate integrates to one") {
    SplitMix64 rng(4);
    std::vector<double> samples(100'000);
    for (double& s : samples) s = std::pow(1.0 - rng.uniform01(), -1.0);  // pareto
    const BinnedCurve pdf = estimate_pdf_logbins(samples, 10);
    double integral = 0.0;
    for (std::size_t i = 0; i < pdf.size(); ++i) {
        const double lo = std::pow(10.0, static_cast<double>(pdf.bin_index[i]) / 10.0);
        const double hi = std::pow(10.0, static_cast<double>(pdf.bin_index[i] + 1) / 10.0);
        integral += pdf.mean[i] * (hi - lo);
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("truncated pareto samples recover their pdf exponent") {
    const HitSetDistribution dist(1.1, 1e-6, 0.1);
    SplitMix64 rng(9);
    std::vector<double> samples(500'000);
    for (double& s : samples) s = sample_hit_fraction(dist, rng.uniform01());
    const BinnedCurve pdf = estimate_pdf_logbins(samples, 10);
    const FitResult fit = fit_power_law(pdf, 1e-5, 1e-2);
    CHECK(fit.exponent == doctest::Approx(-1.1).epsilon(0.1));
}

TEST_CASE("pdf estimation rejects bad input") {
    CHECK_THROWS_AS(estimate_pdf_logbins(std::vector<double>{}, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_pdf_logbins(std::vector<double>{1.0, -1.0}, 10),
                    std::invalid_argument);
}

TEST_CASE("exact power law is fitted to machine precision") {
    std::vector<double> x, y;
    for (int i = 1; i <= 5000; ++i) {
        x.push_back(static_cast<double>(i));
        y.push_back(std::pow(static_cast<double>(i), -2.0));
    }
    const BinnedCurve curve = log_bin(x, y, 10);
    const FitResult fit = fit_power_law(curve, 1.0, 5000.0);
    CHECK(fit.exponent == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(fit.stderr_ == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("constant data fits exponent zero") {
    std::vector<double> x, y;
    for (int i = 1; i <= 1000; ++i) {
        x.push_back(static_cast<double>(i));
        y.push_back(3.0);
    }
    const FitResult fit = fit_power_law(log_bin(x, y, 10), 1.0, 1000.0);
    CHECK(fit.exponent == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("noisy power law is recovered within tolerance") {
    SplitMix64 rng(15);
    std::vector<double> x, y;
    for (int i = 0; i < 20'000; ++i) {
        const double xv = std::pow(10.0, 3.0 * rng.uniform01());
        const double noise = 1.0 + 0.05 * (2.0 * rng.uniform01() - 1.0);
        x.push_back(xv);
        y.push_back(std::pow(xv, 1.8) * noise);
    }
    const FitResult fit = fit_power_law(log_bin(x, y, 10), 1.0, 1000.0);
    CHECK(fit.exponent == doctest::Approx(1.8).epsilon(0.03));
}

TEST_CASE("fit is equivariant under vertical rescaling") {
    std::vector<double> x, y, cy;
    for (int i = 1; i <= 2000; ++i) {
        x.push_back(static_cast<double>(i));
        y.push_back(std::pow(static_cast<double>(i), -1.3));
        cy.push_back(1234.5 * y.back());
    }
    const FitResult a = fit_power_law(log_bin(x, y, 10), 1.0, 2000.0);
    const FitResult b = fit_power_law(log_bin(x, cy, 10), 1.0, 2000.0);
    CHECK(a.exponent == doctest::Approx(b.exponent).epsilon(1e-12));
}

TEST_CASE("fit refuses sparse or nonpositive ranges") {
    std::vector<double> x{1.0, 2.0, 4.0}, y{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(fit_power_law(log_bin(x, y, 10), 1.0, 4.0),
                    std::invalid_argument);
    std::vector<double> xs, ys;
    for (int i = 1; i <= 100; ++i) {
        xs.push_back(static_cast<double>(i));
        ys.push_back(i >= 40 && i <= 55 ? -1.0 : 1.0);  // one bin all negative
    }
    CHECK_THROWS_AS(fit_power_law(log_bin(xs, ys, 10), 1.0, 100.0),
                    std::invalid_argument);
}

TEST_CASE("constructed linear traffic maps to exponent one in degree") {
    // t(R) chosen so that t as a function of k = (N/R)^(1/beta) is exactly
    // linear: t(R) = c * (N/R)^(1/beta)
    const std::size_t n = 100'000;
    const double beta = 1.1;
    TrafficCurve curve;
    curve.n_pages = n;
    curve.alpha = 1.63;
    curve.t.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        curve.t[i] = 1e-6 * std::pow(static_cast<double>(n) /
                                         static_cast<double>(i + 1),
                                     1.0 / beta);
    const TrafficDegreeCurve tk = traffic_vs_indegree(curve, beta);
    CHECK(tk.gamma_fit.exponent == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(tk.surfing_slope == doctest::Approx(1.0));
    CHECK(tk.naive_search_slope == doctest::Approx(1.63 * beta));
    // binned traffic is non-decreasing in k
    for (std::size_t i = 1; i < tk.binned.size(); ++i)
        CHECK(tk.binned.mean[i] >= tk.binned.mean[i - 1]);
}

TEST_CASE("traffic_vs_indegree validates input") {
    TrafficCurve empty;
    CHECK_THROWS_AS(traffic_vs_indegree(empty, 1.1), std::invalid_argument);
    TrafficCurve one;
    one.t.assign(10, 0.1);
    CHECK_THROWS_AS(traffic_vs_indegree(one, 0.0), std::invalid_argument);
}
