#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bvs/errors.hpp"
#include "bvs/numerics.hpp"

// Model prior probabilities over subsets of k candidate variables. Every
// family assigns the same probability to all models of one dimension, so the
// public surface works in (k, d) throughout and returns log probabilities.

namespace bvs {

enum class PriorTag {
    uniform,
    jeffreys,
    harmonic,
    cmg,
    half_p,
    half_k,
    beta_binomial,
    hier_beta,
    exponential,
};

/// A model-prior family plus hyperparameters. Immutable after construction.
///
/// beta_binomial mixes the inclusion probability p over Beta(a, b); (1, 1)
/// coincides with jeffreys and (1, 2) is the parsimonious default.
/// exponential weights each model by exp(-c d); c may be fixed or resolved to
/// log(k) at use time (c_is_log_k).
struct PriorFamily {
    PriorTag tag = PriorTag::jeffreys;
    double a = 1.0;
    double b = 1.0;
    double c = 1.2785;
    bool c_is_log_k = false;
    num::QuadratureSpec quadrature{.node_count = 201,
                                   .scheme = num::QuadScheme::adaptive_subdivision,
                                   .abs_tol = 0.0,
                                   .rel_tol = 1e-10,
                                   .max_evals = 1'000'000};

    static PriorFamily uniform() { return {PriorTag::uniform}; }
    static PriorFamily jeffreys() { return {PriorTag::jeffreys}; }
    static PriorFamily harmonic() { return {PriorTag::harmonic}; }
    static PriorFamily cmg() { return {PriorTag::cmg}; }
    static PriorFamily half_p() { return {PriorTag::half_p}; }
    static PriorFamily half_k() { return {PriorTag::half_k}; }
    static PriorFamily beta_binomial(double a, double b);
    static PriorFamily hier_beta() { return {PriorTag::hier_beta}; }
    static PriorFamily exponential(double c);
    static PriorFamily exponential_log_k();

    /// Parses a selector: uniform, jeffreys, harmonic, cmg, half-p, half-k,
    /// beta-binomial:a:b, hier-beta, exp:c (exp alone uses c = 1.2785,
    /// exp:logk resolves c = log k at use time).
    static PriorFamily parse(const std::string& selector);

    std::string name() const;
    double effective_c(int k) const;
    void validate() const;
};

/// Total prior probability per model size: mass[d] sums Pr(M) over the
/// C(k, d) models of dimension d. log_mass carries the same values without
/// underflow in the tails.
struct DimensionMass {
    int k = 0;
    std::vector<double> mass;
    std::vector<double> log_mass;
};

/// ln Pr(M) for any model of dimension d among k candidates.
double log_prior_model(const PriorFamily& family, int k, int d);

/// Mass function over dimensions 0..k. Families defined through a mixing
/// density are normalized exactly; the quadrature families (cmg, hier_beta)
/// are normalized explicitly over d = 0..k.
DimensionMass dimension_mass(const PriorFamily& family, int k);

/// Constants (C1, C2) of the half-k family: Jeffreys-shaped probabilities up
/// to the middle dimension, constant above, chosen so the pmf sums to one and
/// per-model probabilities agree at the two joining dimensions.
std::pair<double, double> half_k_constants(int k);

/// Mixing density of the hierarchical Beta family at p in (0, 1):
///   sqrt(pi) Phi(-sqrt(-2 log(1-p))) / ((1-p) sqrt(-log(1-p))).
double hierarchical_beta_density(double p);

/// ln of hierarchical_beta_density, stable near both endpoints.
double log_hierarchical_beta_density(double p);

/// Intrinsic prior density for the Poisson rate behind the cmg family:
///   exp(-(lambda+1)) cosh(2 sqrt(lambda)) / sqrt(pi lambda).
double cmg_lambda_density(double lambda);

/// Prior probability that any given variable enters the model: E[d]/k under
/// the family's dimension mass.
double prior_inclusion_probability(const PriorFamily& family, int k);

/// Large-k closed-form approximation of ln mass(d), where one is available
/// for this family and regime; std::nullopt otherwise (e.g. half_p between
/// k/2 and k).
std::optional<double> approx_dimension_mass(const PriorFamily& family, int k, int d);

/// Harmonic number H_m = 1 + 1/2 + ... + 1/m.
double harmonic_number(int m);

}  // namespace bvs
