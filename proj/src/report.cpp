#include "bvs/report.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include <json.hpp>

namespace bvs {

using nlohmann::json;

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

AnalysisReport make_report(const Dataset& dataset, const PriorFamily& family,
                           const PosteriorSummary& summary) {
    AnalysisReport r;
    r.prior = family.name();
    r.method = summary.method == PosteriorSummary::Method::exact ? "exact" : "gibbs";
    r.n = dataset.n();
    r.k0 = dataset.k0();
    r.k = dataset.k();
    r.hpm_mask = summary.hpm.to_string();
    r.mpm_mask = summary.mpm.to_string();
    if (summary.method == PosteriorSummary::Method::exact)
        r.log_normalizer = summary.log_normalizer;
    r.hpm_is_best_visited_only = summary.hpm_is_best_visited_only;
    r.warnings = summary.warnings;
    for (int j = 0; j < dataset.k(); ++j) {
        VariableReport v;
        v.name = dataset.candidate_names()[j];
        v.inclusion_probability = summary.inclusion_probs[j];
        v.in_hpm = summary.hpm.test(j);
        v.in_mpm = summary.mpm.test(j);
        if (summary.mc_standard_errors) v.mc_standard_error = (*summary.mc_standard_errors)[j];
        r.variables.push_back(std::move(v));
    }
    return r;
}

std::string report_to_json(const AnalysisReport& r) {
    json j;
    j["schema_version"] = r.schema_version;
    j["prior"] = r.prior;
    j["method"] = r.method;
    j["seed"] = r.seed;
    j["iterations"] = r.iterations;
    j["burn_in"] = r.burn_in;
    j["n"] = r.n;
    j["k0"] = r.k0;
    j["k"] = r.k;
    j["hpm_mask"] = r.hpm_mask;
    j["mpm_mask"] = r.mpm_mask;
    if (r.log_normalizer) j["log_normalizer"] = *r.log_normalizer;
    j["hpm_is_best_visited_only"] = r.hpm_is_best_visited_only;
    j["warnings"] = r.warnings;
    j["variables"] = json::array();
    for (const auto& v : r.variables) {
        json jv;
        jv["name"] = v.name;
        jv["inclusion_probability"] = v.inclusion_probability;
        jv["in_hpm"] = v.in_hpm;
        jv["in_mpm"] = v.in_mpm;
        std::string ann;
        if (v.in_hpm) ann += "H";
        if (v.in_mpm) ann += "M";
        jv["annotation"] = ann;
        if (v.mc_standard_error) jv["mc_standard_error"] = *v.mc_standard_error;
        j["variables"].push_back(std::move(jv));
    }
    return j.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("report_from_json: ") + e.what());
    }
    AnalysisReport r;
    r.schema_version = j.at("schema_version").get<int>();
    r.prior = j.at("prior").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.iterations = j.at("iterations").get<std::int64_t>();
    r.burn_in = j.at("burn_in").get<std::int64_t>();
    r.n = j.at("n").get<int>();
    r.k0 = j.at("k0").get<int>();
    r.k = j.at("k").get<int>();
    r.hpm_mask = j.at("hpm_mask").get<std::string>();
    r.mpm_mask = j.at("mpm_mask").get<std::string>();
    if (j.contains("log_normalizer")) r.log_normalizer = j["log_normalizer"].get<double>();
    r.hpm_is_best_visited_only = j.at("hpm_is_best_visited_only").get<bool>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& jv : j.at("variables")) {
        VariableReport v;
        v.name = jv.at("name").get<std::string>();
        v.inclusion_probability = jv.at("inclusion_probability").get<double>();
        v.in_hpm = jv.at("in_hpm").get<bool>();
        v.in_mpm = jv.at("in_mpm").get<bool>();
        if (jv.contains("mc_standard_error"))
            v.mc_standard_error = jv["mc_standard_error"].get<double>();
        r.variables.push_back(std::move(v));
    }
    return r;
}

void report_to_csv(const AnalysisReport& r, std::ostream& out) {
    out << "variable,inclusion_probability,in_hpm,in_mpm,annotation,mc_standard_error\n";
    for (const auto& v : r.variables) {
        std::string ann;
        if (v.in_hpm) ann += "H";
        if (v.in_mpm) ann += "M";
        out << v.name << "," << fmt12(v.inclusion_probability) << "," << (v.in_hpm ? 1 : 0) << ","
            << (v.in_mpm ? 1 : 0) << "," << ann << ","
            << (v.mc_standard_error ? fmt12(*v.mc_standard_error) : "") << "\n";
    }
}

std::vector<PriorFamily> figure_families() {
    return {PriorFamily::half_p(),    PriorFamily::jeffreys(),
            PriorFamily::uniform(),   PriorFamily::half_k(),
            PriorFamily::cmg(),       PriorFamily::hier_beta(),
            PriorFamily::beta_binomial(1.0, 2.0), PriorFamily::harmonic()};
}

std::vector<PriorFamily> all_families() {
    auto fams = figure_families();
    fams.push_back(PriorFamily::exponential_log_k());
    return fams;
}

int priors_table_csv(const std::vector<PriorFamily>& families, int k, std::ostream& out) {
    out << "family,k,d,mass,log_per_model_prior\n";
    int failures = 0;
    for (const auto& family : families) {
        try {
            DimensionMass dm = dimension_mass(family, k);
            for (int d = 0; d <= k; ++d) {
                double log_per_model = dm.log_mass[d] - log_choose(k, d);
                out << family.name() << "," << k << "," << d << "," << fmt12(dm.mass[d]) << ","
                    << fmt12(log_per_model) << "\n";
            }
        } catch (const Error& e) {
            ++failures;
            std::cerr << "priors-table: family " << family.name() << " failed: " << e.what()
                      << "\n";
        }
    }
    return failures;
}

void inclusion_table_csv(const std::vector<int>& ks, std::ostream& out) {
    out << "k,uniform,jeffreys,beta-binomial:1:2,half-p,hier-beta,cmg,cmg_approx,"
           "harmonic,harmonic_approx\n";
    for (int k : ks) {
        if (k < 1) throw DataError("inclusion-table: k must be positive");
        double unif = prior_inclusion_probability(PriorFamily::uniform(), k);
        double jeff = prior_inclusion_probability(PriorFamily::jeffreys(), k);
        double b12 = prior_inclusion_probability(PriorFamily::beta_binomial(1.0, 2.0), k);
        double halfp = prior_inclusion_probability(PriorFamily::half_p(), k);
        double hier = prior_inclusion_probability(PriorFamily::hier_beta(), k);
        double cmg = prior_inclusion_probability(PriorFamily::cmg(), k);
        double cmg_approx = std::min(1.0, 1.5 / k);
        double harm = prior_inclusion_probability(PriorFamily::harmonic(), k);
        // Large-k form of the harmonic number: log(k+1) + Euler's constant
        // plus the first correction term.
        double harm_approx =
            (1.0 + 1.0 / k) / (std::log(k + 1.0) + 0.5772 + 0.5 / (k + 1.0)) - 1.0 / k;
        out << k << "," << fmt12(unif) << "," << fmt12(jeff) << "," << fmt12(b12) << ","
            << fmt12(halfp) << "," << fmt12(hier) << "," << fmt12(cmg) << ","
            << fmt12(cmg_approx) << "," << fmt12(harm) << "," << fmt12(harm_approx) << "\n";
    }
}

void profile_csv(const DimensionProfile& profile, const std::vector<PriorFamily>& families,
                 std::ostream& out) {
    out << "family,d,log_posterior_ratio_to_null,mask,status\n";
    for (const auto& family : families) {
        std::vector<double> ratios = profile_log_posterior_ratios(profile, family);
        for (int d = 0; d <= profile.k; ++d) {
            if (!std::isfinite(profile.sse[d])) continue;
            const char* status = profile.proven_optimal[d] ? "exact" : "timeout";
            out << family.name() << "," << d << "," << fmt12(ratios[d]) << ","
                << profile.best[d].to_string() << "," << status << "\n";
        }
    }
}

}  // namespace bvs
