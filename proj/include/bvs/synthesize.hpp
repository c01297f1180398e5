#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvs/glm.hpp"

namespace bvs {

/// Seeded Gaussian fixture: candidate columns are iid standard normal, the
/// response is the sum of the true-support columns times `coefficient` plus
/// N(0, noise_sd^2) noise, and X0 is an intercept. Fully deterministic for a
/// fixed seed, on any platform.
struct SynthesisSpec {
    int n = 100;
    int k = 10;
    std::vector<int> true_support;  // 0-based candidate indices
    double coefficient = 5.0;
    double noise_sd = 1.0;
    std::uint64_t seed = 1;
};

Dataset synthesize(const SynthesisSpec& spec);

/// Writes a dataset back out as CSV (header row, response first).
void write_csv(const Dataset& dataset, const std::string& path);

}  // namespace bvs
