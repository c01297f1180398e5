#pragma once

// Test-side oracles, deliberately independent of the library's numeric paths:
// Simpson refinement instead of Gauss-Kronrod, Stirling instead of Lanczos,
// series erf instead of erfc, exhaustive search instead of branch-and-bound.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "bvs/glm.hpp"
#include "bvs/model_space.hpp"

namespace oracle {

// Composite Simpson with interval doubling until two refinements agree.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, int max_doublings = 22) {
    auto composite = [&](int n) {
        double h = (b - a) / n;
        double s = f(a) + f(b);
        for (int i = 1; i < n; i += 2) s += 4.0 * f(a + i * h);
        for (int i = 2; i < n; i += 2) s += 2.0 * f(a + i * h);
        return s * h / 3.0;
    };
    double prev = composite(16);
    for (int n = 32, it = 0; it < max_doublings; n *= 2, ++it) {
        double cur = composite(n);
        if (std::fabs(cur - prev) <= tol * std::max(1.0, std::fabs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

// Stirling series for ln Gamma, argument shifted up for accuracy.
inline double stirling_log_gamma(double x) {
    double shift = 0.0;
    while (x < 20.0) {
        shift -= std::log(x);
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    double series = inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0 -
                    inv * inv2 * inv2 * inv2 / 1680.0;
    return shift + (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * 3.14159265358979323846) +
           series;
}

// ln n! summed directly from integer logs.
inline double log_factorial(int n) {
    double s = 0.0;
    for (int i = 2; i <= n; ++i) s += std::log(static_cast<double>(i));
    return s;
}

// Taylor series for erf; converges fast for |x| <= 3.
inline double erf_series(double x) {
    double term = x;
    double sum = x;
    for (int n = 1; n < 120; ++n) {
        term *= -x * x / n;
        sum += term / (2.0 * n + 1.0);
        if (std::fabs(term) < 1e-18) break;
    }
    return sum * 2.0 / std::sqrt(3.14159265358979323846);
}

// Bayes factor by brute quadrature on the untransformed g-integral with
// explicit singularity splitting at 2 g0: the left part removes the
// (g - g0)^{-1/2} endpoint with g = g0 (1 + t^2), the right part maps
// (2 g0, infinity) to (0, 1/2) via u = g0 / g.
inline double log_bayes_factor_oracle(int n, int k0, int dim, double q) {
    double g0 = (n - k0) / (dim + 1.0);
    double hn = 0.5 * (n - k0);
    double hd = 0.5 * (n - dim - k0);

    // Everything in log space against a reference level at g = g0.
    double ref = -hn * std::log1p(g0 * q) + hd * std::log1p(g0);

    auto core = [&](double g) {
        return std::exp(-hn * std::log1p(g * q) + hd * std::log1p(g) - ref);
    };
    // Left: g = g0 (1 + t^2), dg = 2 g0 t dt, sqrt(g - g0) = sqrt(g0) t.
    auto left = [&](double t) {
        double g = g0 * (1.0 + t * t);
        return core(g) * std::sqrt(g0) / (3.14159265358979323846 * g) * 2.0 * g0 /
               std::sqrt(g0);
    };
    double left_val = simpson(left, 0.0, 1.0, 1e-12);
    // Right: u = g0/g on (0, 1/2]; dg = -g0/u^2 du.
    auto right = [&](double u) {
        if (u <= 0.0) return 0.0;
        double g = g0 / u;
        double density = std::sqrt(g0) / (3.14159265358979323846 * g * std::sqrt(g - g0));
        return core(g) * density * g0 / (u * u);
    };
    double right_val = simpson(right, 1e-14, 0.5, 1e-12);
    return ref + std::log(left_val + right_val);
}

// Exhaustive best subset per dimension via the library's QR path only.
struct BestSubsets {
    std::vector<double> sse;
    std::vector<bvs::ModelIndicator> mask;
};

inline BestSubsets exhaustive_best_subsets(const bvs::Dataset& ds) {
    int k = ds.k();
    BestSubsets out{std::vector<double>(k + 1, std::numeric_limits<double>::infinity()),
                    std::vector<bvs::ModelIndicator>(k + 1, bvs::ModelIndicator(k))};
    bvs::ModelStream stream(k, 30);
    bvs::ModelIndicator m(k);
    while (stream.next(m)) {
        double s = bvs::sse(ds, m).sse_gamma;
        int d = m.dimension();
        if (s < out.sse[d]) {
            out.sse[d] = s;
            out.mask[d] = m;
        }
    }
    return out;
}

// Arcsine(0,1) sampler for the Monte Carlo Bayes-factor check.
struct ArcsineSampler {
    std::mt19937_64 gen;
    explicit ArcsineSampler(std::uint64_t seed) : gen(seed) {}
    double next() {
        double u = (gen() >> 11) * 0x1.0p-53;
        double s = std::sin(1.5707963267948966 * u);
        return s * s;
    }
};

}  // namespace oracle
