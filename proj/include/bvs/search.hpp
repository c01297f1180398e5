#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bvs/bayes_factor.hpp"
#include "bvs/glm.hpp"
#include "bvs/model_space.hpp"
#include "bvs/priors.hpp"

namespace bvs {

/// Size caps and policy knobs for the posterior machinery. Caps are
/// configuration: the defaults mirror what is tractable on a desktop.
struct SearchLimits {
    int enumeration_cap = 25;
    int bnb_cap = 50;
    double bnb_time_budget_sec = 300.0;
    /// Permit models with SSE == 0 (their Bayes factor is treated as +inf;
    /// posterior mass collapses onto the smallest such models). Off by
    /// default: perfect fits raise DegenerateFitError.
    bool allow_perfect_fit = false;
};

struct PosteriorSummary {
    enum class Method { exact, gibbs };

    std::vector<double> inclusion_probs;
    ModelIndicator hpm;
    ModelIndicator mpm;
    double log_normalizer = std::numeric_limits<double>::quiet_NaN();  // exact mode only
    Method method = Method::exact;
    std::optional<std::vector<double>> mc_standard_errors;
    /// Gibbs reports the best model it happened to visit; the sampler is not
    /// designed to identify the highest posterior model.
    bool hpm_is_best_visited_only = false;
    std::vector<std::string> warnings;
};

/// Exact best subsets: for each dimension d the SSE-minimizing model, with
/// its Bayes factor against the null. complete == false flags a timeout with
/// partial (best-so-far) content; proven_optimal mirrors that per dimension.
struct DimensionProfile {
    int k = 0, n = 0, k0 = 0;
    double sse_null = 0.0;
    std::vector<ModelIndicator> best;
    std::vector<double> sse;
    std::vector<double> log_bf;
    bool complete = true;
    std::vector<bool> proven_optimal;
};

/// Full enumeration of the 2^k models: normalized posterior, inclusion
/// probabilities, highest-posterior model and median-probability model.
PosteriorSummary exact_posterior(const Dataset& dataset, const PriorFamily& family,
                                 const SearchLimits& limits = {});

/// Branch-and-bound best subset per dimension. The bounding rule uses SSE
/// monotonicity: the fully saturated model of a subtree lower-bounds every
/// descendant, so a subtree is cut when that bound cannot improve any
/// dimension it reaches. Variables are processed in decreasing order of
/// single-variable SSE reduction.
DimensionProfile best_subset_per_dimension(const Dataset& dataset,
                                           const SearchLimits& limits = {});

/// Highest posterior model from a dimension profile: within a dimension the
/// prior is constant and the Bayes factor is monotone in SSE, so the profile
/// models are the only candidates. Ties go to the smaller dimension.
ModelIndicator hpm_via_profile(const DimensionProfile& profile, const PriorFamily& family,
                               const Dataset& dataset);

/// Log posterior ratio of each profile model to the null model.
std::vector<double> profile_log_posterior_ratios(const DimensionProfile& profile,
                                                 const PriorFamily& family);

/// Median probability model: variables with inclusion probability strictly
/// above one half.
ModelIndicator mpm_from_inclusions(const std::vector<double>& inclusion_probs);

struct GibbsConfig {
    std::int64_t iterations = 100'000;
    std::int64_t burn_in = 1'000;
    std::uint64_t seed = 1;
};

/// Systematic-scan Gibbs sampler over model space. Inclusion probabilities
/// are Rao-Blackwellized averages of the full-conditional probabilities after
/// burn-in; a fixed seed reproduces results bit for bit.
PosteriorSummary gibbs_posterior(const Dataset& dataset, const PriorFamily& family,
                                 const GibbsConfig& config, const SearchLimits& limits = {});

}  // namespace bvs
