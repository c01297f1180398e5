#include <doctest.h>

#include <cmath>
#include <random>

#include "bvs/bayes_factor.hpp"
#include "bvs/numerics.hpp"
#include "oracles.hpp"

using namespace bvs;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("mixing density integrates to one") {
    int n = 50, k0 = 1, dim = 3;
    double g0 = (n - k0) / (dim + 1.0);
    // g = g0 (1 + t^2) absorbs the endpoint singularity; split the infinite
    // tail at t = 1 with u = 1/t. At t = 0 the transformed integrand has the
    // finite limit 2/pi.
    auto left = [&](double t) {
        if (t == 0.0) return 2.0 / kPi;
        double g = g0 * (1.0 + t * t);
        return mixing_density(g, n, k0, dim) * 2.0 * g0 * t;
    };
    auto right = [&](double u) {
        double t = 1.0 / u;
        double g = g0 * (1.0 + t * t);
        return mixing_density(g, n, k0, dim) * 2.0 * g0 * t / (u * u);
    };
    double total = oracle::simpson(left, 0.0, 1.0, 1e-12) +
                   oracle::simpson(right, 1e-9, 1.0, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(mixing_density(g0, n, k0, dim), NumericError);
    CHECK_THROWS_AS(mixing_density(g0 * 0.5, n, k0, dim), NumericError);
}

TEST_CASE("the substitution v = g0/g turns the mixing density into the arcsine law") {
    int n = 33, k0 = 2, dim = 4;
    double g0 = (n - k0) / (dim + 1.0);
    for (int i = 1; i <= 20; ++i) {
        double v = i / 21.0;
        double g = g0 / v;
        // density in v = density in g times |dg/dv| = g0 / v^2
        double got = mixing_density(g, n, k0, dim) * g0 / (v * v);
        double want = 1.0 / (kPi * std::sqrt(v * (1.0 - v)));
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("mixing density decays like g^{-3/2}") {
    int n = 50, k0 = 1, dim = 3;
    double g0 = (n - k0) / (dim + 1.0);
    double g = 1e6 * g0;
    double got = mixing_density(g, n, k0, dim);
    double leading = std::sqrt(g0) / (kPi * std::pow(g, 1.5));
    CHECK(std::fabs(got / leading - 1.0) <= 0.05);
}

TEST_CASE("no fit improvement means evidence against the bigger model") {
    BayesFactorInput in(50, 1, 3, 1.0);
    double lb = log_bayes_factor(in);
    CHECK(lb < 0.0);
    // Monte Carlo over the arcsine mixing measure.
    oracle::ArcsineSampler sampler(2024);
    double hn = 0.5 * (50 - 1), hd = 0.5 * (50 - 3 - 1);
    double g0 = in.g_floor();
    double sum = 0.0, sumsq = 0.0;
    const int draws = 1'000'000;
    for (int i = 0; i < draws; ++i) {
        double v = sampler.next();
        double g = g0 / std::max(v, 1e-300);
        double w = std::exp(-hn * std::log1p(g) + hd * std::log1p(g));
        sum += w;
        sumsq += w * w;
    }
    double mc = sum / draws;
    double se = std::sqrt((sumsq / draws - mc * mc) / draws);
    CHECK(std::fabs(std::exp(lb) - mc) <= 4.0 * se + 1e-12);
}

TEST_CASE("monotonicity in the SSE ratio (pairwise)") {
    double b1 = log_bayes_factor(BayesFactorInput(30, 1, 2, 0.3));
    double b2 = log_bayes_factor(BayesFactorInput(30, 1, 2, 0.6));
    CHECK(b1 >= b2);
}

TEST_CASE("reference value against the independent quadrature oracle") {
    double got = log_bayes_factor(BayesFactorInput(20, 1, 1, 0.5));
    double want = oracle::log_bayes_factor_oracle(20, 1, 1, 0.5);
    CHECK(std::fabs(got - want) <= 1e-7 * std::max(1.0, std::fabs(want)));
    // Frozen from the oracle.
    CHECK(std::exp(got) == doctest::Approx(83.0117610872).epsilon(1e-6));
}

TEST_CASE("Gauss-Chebyshev agrees with the adaptive oracle across a grid") {
    std::mt19937_64 gen(7);
    auto unit = [&]() { return (gen() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 50; ++i) {
        int n = 12 + static_cast<int>(unit() * 180);
        int k0 = 1 + static_cast<int>(unit() * 3);
        int dim = 1 + static_cast<int>(unit() * std::min(6, n - k0 - 2));
        double q = 0.05 + 0.95 * unit();
        double got = log_bayes_factor(BayesFactorInput(n, k0, dim, q));
        double want = oracle::log_bayes_factor_oracle(n, k0, dim, q);
        CHECK(std::fabs(got - want) <= 1e-7 * std::max(1.0, std::fabs(want)));
    }
}

TEST_CASE("Lemma-style monotonicity property, 1000 random checks") {
    std::mt19937_64 gen(99);
    auto unit = [&]() { return (gen() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 1000; ++i) {
        int n = 10 + static_cast<int>(unit() * 240);
        int k0 = 1 + static_cast<int>(unit() * 4);
        int dim = 1 + static_cast<int>(unit() * std::min(8, n - k0 - 2));
        double q1 = 0.01 + 0.98 * unit();
        double q2 = q1 + (1.0 - q1) * unit();
        double b1 = log_bayes_factor(BayesFactorInput(n, k0, dim, q1));
        double b2 = log_bayes_factor(BayesFactorInput(n, k0, dim, q2));
        CHECK(b1 >= b2 - 1e-9);
    }
}

TEST_CASE("dimension penalty at q = 1") {
    double prev = 0.0;
    for (int dim = 1; dim <= 6; ++dim) {
        double lb = log_bayes_factor(BayesFactorInput(40, 1, dim, 1.0));
        CHECK(lb < prev);
        prev = lb;
    }
}

TEST_CASE("the Bayes factor depends on the data only through the SSE ratio") {
    FitStatistics a{.sse_gamma = 2.0, .sse_null = 4.0, .n = 30, .k0 = 1, .dim = 2};
    FitStatistics b{.sse_gamma = 51.0, .sse_null = 102.0, .n = 30, .k0 = 1, .dim = 2};
    CHECK(log_bayes_factor(BayesFactorInput::from_fit(a)) ==
          log_bayes_factor(BayesFactorInput::from_fit(b)));
}

TEST_CASE("log_posterior_unnormalized") {
    CHECK(log_posterior_unnormalized(0.0, std::log(0.5)) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-15));
    std::mt19937_64 gen(5);
    auto unit = [&]() { return (gen() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 100; ++i) {
        double lb = 10.0 * (unit() - 0.5), lp = -5.0 * unit();
        CHECK(std::fabs(log_posterior_unnormalized(lb, lp) - (lb + lp)) <= 1e-12);
    }
    // Shifting every log prior by a constant shifts every weight by the same
    // constant and cancels upon normalization.
    std::vector<double> lps{-1.0, -2.0, -0.5};
    std::vector<double> lbs{0.3, 1.1, -0.7};
    auto normalized = [&](double shift) {
        std::vector<double> w(3);
        double mx = -1e300;
        for (int i = 0; i < 3; ++i) {
            w[i] = log_posterior_unnormalized(lbs[i], lps[i] + shift);
            mx = std::max(mx, w[i]);
        }
        double s = 0.0;
        for (double& v : w) s += std::exp(v - mx);
        std::vector<double> out(3);
        for (int i = 0; i < 3; ++i) out[i] = std::exp(w[i] - mx) / s;
        return out;
    };
    auto p0 = normalized(0.0), p1 = normalized(17.0);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(p0[i] - p1[i]) <= 1e-12);
    CHECK_THROWS_AS(
        log_posterior_unnormalized(std::numeric_limits<double>::infinity(), 0.0), NumericError);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(BayesFactorInput(30, 1, 0, 0.5), DataError);
    CHECK_THROWS_AS(BayesFactorInput(10, 1, 9, 0.5), DataError);
    CHECK_THROWS_AS(BayesFactorInput(30, 1, 2, 0.0), DegenerateFitError);
    CHECK_THROWS_AS(BayesFactorInput(30, 1, 2, 1.5), DataError);
}

TEST_CASE("BayesFactorTable matches the escalated evaluation") {
    BayesFactorTable table(60, 1, 8);
    for (int d : {1, 2, 3, 8})
        for (double q : {0.05, 0.4, 0.99}) {
            double got = table.log_bf(d, q);
            double want = log_bayes_factor(BayesFactorInput(60, 1, d, q));
            CHECK(std::fabs(got - want) <= 1e-8 * std::max(1.0, std::fabs(want)));
        }
    CHECK(table.log_bf(0, 0.5) == 0.0);
}
