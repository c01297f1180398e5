#include <algorithm>
#include <cmath>
#include <random>

#include "bvs/numerics.hpp"
#include "bvs/search.hpp"
#include "sse_engine.hpp"

namespace bvs {

namespace {

constexpr double kDegenerateRel = 1e-12;

// Canonical 53-bit uniforms straight from the engine output, so a fixed seed
// reproduces the chain bit for bit on any platform.
struct UniformSource {
    std::mt19937_64 gen;
    explicit UniformSource(std::uint64_t seed) : gen(seed) {}
    double next() { return (gen() >> 11) * 0x1.0p-53; }
};

}  // namespace

PosteriorSummary gibbs_posterior(const Dataset& dataset, const PriorFamily& family,
                                 const GibbsConfig& config, const SearchLimits& limits) {
    if (config.iterations <= config.burn_in || config.burn_in < 0)
        throw DataError("gibbs_posterior: need iterations > burn_in >= 0");
    int k = dataset.k();
    int n = dataset.n();
    int k0 = dataset.k0();

    std::vector<double> log_prior(k + 1);
    for (int d = 0; d <= k; ++d) log_prior[d] = log_prior_model(family, k, d);
    BayesFactorTable bf(n, k0, std::min(k, n - k0 - 1));
    detail::SseEngine engine(dataset);
    UniformSource rng(config.seed);

    const double sse_null = dataset.sse_null();
    const int max_dim = n - k0 - 1;  // Bayes factor needs n - k0 - d >= 1

    // Chain state: start at the null model.
    std::vector<char> in_model(k, 0);
    std::vector<int> selected;
    double current_sse = sse_null;

    auto log_weight = [&](int d, double model_sse) -> double {
        if (d == 0) return log_prior[0];
        if (d > max_dim) return -std::numeric_limits<double>::infinity();
        double q = model_sse / sse_null;
        if (q < kDegenerateRel) return std::numeric_limits<double>::quiet_NaN();  // degenerate
        return bf.log_bf(d, q) + log_prior[d];
    };

    std::int64_t kept = config.iterations - config.burn_in;
    std::vector<double> rb_sum(k, 0.0);

    // Batch means for Monte Carlo standard errors.
    const int n_batches = static_cast<int>(std::min<std::int64_t>(50, kept));
    std::vector<double> batch_acc(static_cast<std::size_t>(k) * n_batches, 0.0);
    std::vector<std::int64_t> batch_count(n_batches, 0);

    ModelIndicator best_visited(k);
    double best_visited_lp = log_weight(0, sse_null);
    bool degenerate_warned = false;

    for (std::int64_t it = 0; it < config.iterations; ++it) {
        for (int j = 0; j < k; ++j) {
            bool was_in = in_model[j];

            // SSE and weight for both states of bit j; one is the current.
            std::vector<int> with = selected;
            if (!was_in) {
                with.push_back(j);
            }
            std::vector<int> without = selected;
            if (was_in) without.erase(std::find(without.begin(), without.end(), j));

            double sse_with, sse_without;
            if (was_in) {
                sse_with = current_sse;
                sse_without = engine.sse_of(without);
            } else {
                sse_with = engine.sse_of(with);
                sse_without = current_sse;
            }
            double lp_on = log_weight(static_cast<int>(with.size()), sse_with);
            double lp_off = log_weight(static_cast<int>(without.size()), sse_without);

            if (std::isnan(lp_on)) {
                if (!limits.allow_perfect_fit) {
                    if (!degenerate_warned) degenerate_warned = true;
                    lp_on = -std::numeric_limits<double>::infinity();  // state excluded
                } else {
                    lp_on = std::numeric_limits<double>::infinity();
                }
            }

            double p_on;
            if (lp_on == -std::numeric_limits<double>::infinity())
                p_on = 0.0;
            else if (lp_on == std::numeric_limits<double>::infinity())
                p_on = 1.0;
            else
                p_on = 1.0 / (1.0 + std::exp(lp_off - lp_on));

            bool now_in = rng.next() < p_on;
            if (now_in != was_in) {
                in_model[j] = now_in;
                if (now_in) {
                    selected = std::move(with);
                    current_sse = sse_with;
                } else {
                    selected = std::move(without);
                    current_sse = sse_without;
                }
            }

            double lp_now = now_in ? lp_on : lp_off;
            if (lp_now > best_visited_lp) {
                best_visited_lp = lp_now;
                best_visited = ModelIndicator(k, selected);
            }

            if (it >= config.burn_in) {
                rb_sum[j] += p_on;
                std::int64_t kept_idx = it - config.burn_in;
                int batch = static_cast<int>(kept_idx * n_batches / kept);
                batch_acc[static_cast<std::size_t>(j) * n_batches + batch] += p_on;
            }
        }
        if (it >= config.burn_in) {
            std::int64_t kept_idx = it - config.burn_in;
            batch_count[static_cast<int>(kept_idx * n_batches / kept)] += 1;
        }
    }

    PosteriorSummary out{.inclusion_probs = std::vector<double>(k, 0.0),
                         .hpm = best_visited,
                         .mpm = ModelIndicator(k),
                         .method = PosteriorSummary::Method::gibbs,
                         .hpm_is_best_visited_only = true};
    for (int j = 0; j < k; ++j) out.inclusion_probs[j] = rb_sum[j] / static_cast<double>(kept);
    out.mpm = mpm_from_inclusions(out.inclusion_probs);

    std::vector<double> se(k, 0.0);
    if (n_batches >= 2) {
        for (int j = 0; j < k; ++j) {
            double mean = out.inclusion_probs[j];
            double var = 0.0;
            int used = 0;
            for (int bidx = 0; bidx < n_batches; ++bidx) {
                if (batch_count[bidx] == 0) continue;
                double bm = batch_acc[static_cast<std::size_t>(j) * n_batches + bidx] /
                            static_cast<double>(batch_count[bidx]);
                var += (bm - mean) * (bm - mean);
                ++used;
            }
            if (used >= 2) se[j] = std::sqrt(var / (used - 1) / used);
        }
    }
    out.mc_standard_errors = std::move(se);
    if (degenerate_warned)
        out.warnings.push_back("some toggles led to perfect fits and were skipped");
    return out;
}

}  // namespace bvs
