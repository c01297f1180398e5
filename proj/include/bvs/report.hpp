#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bvs/glm.hpp"
#include "bvs/priors.hpp"
#include "bvs/search.hpp"

namespace bvs {

/// Per-variable line of an analysis report. The annotation mirrors the usual
/// table convention: H when the variable is in the highest posterior model,
/// M when in the median probability model.
struct VariableReport {
    std::string name;
    double inclusion_probability = 0.0;
    bool in_hpm = false;
    bool in_mpm = false;
    std::optional<double> mc_standard_error;
};

struct AnalysisReport {
    int schema_version = 1;
    std::string prior;
    std::string method;  // "exact" or "gibbs"
    std::uint64_t seed = 0;
    std::int64_t iterations = 0;
    std::int64_t burn_in = 0;
    int n = 0, k0 = 0, k = 0;
    std::vector<VariableReport> variables;
    std::string hpm_mask;
    std::string mpm_mask;
    std::optional<double> log_normalizer;
    bool hpm_is_best_visited_only = false;
    std::vector<std::string> warnings;
};

AnalysisReport make_report(const Dataset& dataset, const PriorFamily& family,
                           const PosteriorSummary& summary);

std::string report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const std::string& text);
void report_to_csv(const AnalysisReport& report, std::ostream& out);

/// Prior-diagnostic table: one row per (family, d) with the dimension mass
/// and the log per-model prior, both at the given k. Families that fail
/// (e.g. an integration error) are reported on stderr and skipped; the
/// return value is the number of failures.
int priors_table_csv(const std::vector<PriorFamily>& families, int k, std::ostream& out);

/// Prior inclusion probabilities, exact and large-k approximations, for the
/// classic family lineup at each requested k.
void inclusion_table_csv(const std::vector<int>& ks, std::ostream& out);

/// Figure-style profile data: per family and dimension, the log posterior
/// ratio of the best size-d model to the null model.
void profile_csv(const DimensionProfile& profile, const std::vector<PriorFamily>& families,
                 std::ostream& out);

/// The eight families of the priors figure, in its plotting order.
std::vector<PriorFamily> figure_families();

/// All nine selectable families with default hyperparameters.
std::vector<PriorFamily> all_families();

/// Doubles rendered with 12 significant digits, so repeated runs emit
/// byte-identical tables.
std::string fmt12(double v);

}  // namespace bvs
