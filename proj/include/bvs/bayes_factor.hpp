#pragma once

#include <vector>

#include "bvs/errors.hpp"
#include "bvs/glm.hpp"

// Bayes factor of a submodel against the null model under the intrinsic
// parameter prior. The data enter only through q = SSE_model / SSE_null.

namespace bvs {

struct BayesFactorInput {
    int n = 0;
    int k0 = 0;
    int dim = 0;
    double q = 1.0;

    BayesFactorInput(int n, int k0, int dim, double q);
    static BayesFactorInput from_fit(const FitStatistics& fit);

    double g_floor() const { return (n - k0) / (dim + 1.0); }
};

/// Mixing density p(g) = sqrt(g0) / (pi g sqrt(g - g0)) on (g0, infinity)
/// with g0 = (n - k0)/(dim + 1). Throws on g <= g0.
double mixing_density(double g, int n, int k0, int dim);

/// ln B for the model against the null. Evaluated after the change of
/// variables v = g0/g, under which the mixing measure becomes Beta(1/2, 1/2).
/// Even dimensions use a Gauss-Chebyshev sum of the log-space integrand; odd
/// dimensions carry a residual sqrt(v) factor, folded in by v = 1 - s^2 and
/// handled with Gauss-Legendre. Orders escalate until two evaluations agree,
/// with an adaptive fallback.
double log_bayes_factor(const BayesFactorInput& input);

/// ln(B * prior): the unnormalized log posterior weight.
double log_posterior_unnormalized(double log_bf, double log_prior);

/// Precomputed evaluator for repeated Bayes factors on one dataset shape:
/// caches the per-dimension node constants so hot loops (enumeration, Gibbs)
/// pay only one pass over the nodes per call. Read-only after construction.
class BayesFactorTable {
  public:
    BayesFactorTable(int n, int k0, int k_max, int node_count = 201);

    /// ln B at dimension d (1 <= d <= k_max) and SSE ratio q; d == 0 returns 0.
    double log_bf(int d, double q) const;

  private:
    struct DimNodes {
        double g0 = 0.0;
        std::vector<double> a;      // even d: g = g0/v per node; odd d: 1 - s^2
        std::vector<double> fixed;  // per-node terms independent of q
    };

    int n_, k0_;
    double half_n_k0_;
    std::vector<DimNodes> per_dim_;
};

}  // namespace bvs
