#include "bvs/cli_app.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "bvs/report.hpp"
#include "bvs/search.hpp"
#include "bvs/synthesize.hpp"

namespace bvs {

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<PriorFamily> parse_priors(const std::string& csv) {
    std::vector<PriorFamily> fams;
    for (const auto& sel : split_list(csv)) fams.push_back(PriorFamily::parse(sel));
    if (fams.empty()) throw DataError("no prior families given");
    return fams;
}

// Writes to the path, or stdout for "-".
void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file '" + path + "'");
    out << content;
}

struct AnalyzeOptions {
    std::string data_path;
    std::string response = "y";
    std::string common;
    std::string prior = "jeffreys";
    std::string method = "auto";
    std::int64_t iterations = 100'000;
    std::int64_t burn_in = 1'000;
    std::uint64_t seed = 1;
    std::string output = "-";
    std::string format = "json";
    SearchLimits limits;
};

int cmd_analyze(const AnalyzeOptions& opt) {
    Dataset dataset = load_csv(opt.data_path, split_list(opt.common), opt.response);
    PriorFamily family = PriorFamily::parse(opt.prior);

    std::string method = opt.method;
    if (method == "auto") {
        if (dataset.k() <= opt.limits.enumeration_cap)
            method = "exact";
        else
            method = dataset.k() <= opt.limits.bnb_cap ? "bnb" : "gibbs";
    }

    std::unique_ptr<PosteriorSummary> summary;
    if (method == "exact") {
        summary = std::make_unique<PosteriorSummary>(exact_posterior(dataset, family, opt.limits));
    } else if (method == "gibbs" || method == "bnb") {
        GibbsConfig cfg{opt.iterations, opt.burn_in, opt.seed};
        summary = std::make_unique<PosteriorSummary>(
            gibbs_posterior(dataset, family, cfg, opt.limits));
        if (method == "bnb") {
            if (dataset.k() > opt.limits.bnb_cap)
                throw CapacityError("analyze: k exceeds the branch-and-bound cap; "
                                    "use --method gibbs");
            DimensionProfile profile = best_subset_per_dimension(dataset, opt.limits);
            summary->hpm = hpm_via_profile(profile, family, dataset);
            summary->hpm_is_best_visited_only = !profile.complete;
            if (!profile.complete)
                summary->warnings.push_back("branch-and-bound timed out; HPM not proven");
        }
    } else {
        throw DataError("analyze: unknown method '" + opt.method + "'");
    }

    AnalysisReport report = make_report(dataset, family, *summary);
    report.seed = opt.seed;
    if (summary->method == PosteriorSummary::Method::gibbs) {
        report.iterations = opt.iterations;
        report.burn_in = opt.burn_in;
    }

    if (opt.format == "json") {
        write_output(opt.output, report_to_json(report));
    } else if (opt.format == "csv") {
        std::ostringstream os;
        report_to_csv(report, os);
        write_output(opt.output, os.str());
    } else {
        throw DataError("analyze: unknown format '" + opt.format + "'");
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Objective model priors and intrinsic Bayes factors for variable selection "
                 "in the general linear model"};
    app.require_subcommand(1);
    app.footer("Set BVS_CACHE_DIR to persist the quadrature-backed prior tables between runs.");

    // analyze
    AnalyzeOptions an;
    auto* analyze = app.add_subcommand("analyze", "Posterior summary for a dataset");
    analyze->add_option("--data", an.data_path, "CSV file with a header row")->required();
    analyze->add_option("--response", an.response, "Response column name (default y)");
    analyze->add_option("--common", an.common,
                        "Comma-separated common covariate columns (always in the model)");
    analyze->add_option("--prior", an.prior,
                        "uniform|jeffreys|harmonic|cmg|half-p|half-k|beta-binomial:a:b|"
                        "hier-beta|exp:c|exp:logk");
    analyze->add_option("--method", an.method,
                        "auto|exact|gibbs|bnb (bnb = Gibbs plus branch-and-bound HPM)");
    analyze->add_option("--iterations", an.iterations, "Gibbs iterations");
    analyze->add_option("--burn-in", an.burn_in, "Gibbs burn-in");
    analyze->add_option("--seed", an.seed, "Sampler seed");
    analyze->add_option("--output", an.output, "Output path, - for stdout");
    analyze->add_option("--format", an.format, "json|csv");
    analyze->add_option("--enum-cap", an.limits.enumeration_cap, "Exact enumeration cap");
    analyze->add_option("--bnb-cap", an.limits.bnb_cap, "Branch-and-bound cap");
    analyze->add_flag("--allow-perfect-fit", an.limits.allow_perfect_fit,
                      "Treat zero-SSE models as posterior mass one instead of failing");

    // priors-table
    int pt_k = 49;
    std::string pt_priors;
    std::string pt_output = "-";
    auto* ptable = app.add_subcommand("priors-table",
                                      "Dimension mass and log per-model prior for each family");
    ptable->add_option("--k", pt_k, "Number of candidate variables");
    ptable->add_option("--priors", pt_priors, "Comma-separated selectors (default: all nine)");
    ptable->add_option("--output", pt_output, "Output path, - for stdout");

    // figure1
    std::string f1_output = "-";
    auto* fig1 = app.add_subcommand("figure1",
                                    "Prior-diagnostic data at k=49 for the eight classic "
                                    "families (both panels)");
    fig1->add_option("--output", f1_output, "Output path, - for stdout");

    // inclusion-table
    std::string it_ks = "1,3,5,7,9,20,200";
    std::string it_output = "-";
    auto* itable = app.add_subcommand("inclusion-table",
                                      "Prior inclusion probabilities, exact and approximate");
    itable->add_option("--k-list", it_ks, "Comma-separated k values");
    itable->add_option("--output", it_output, "Output path, - for stdout");

    // profile
    std::string pr_data, pr_common, pr_response = "y";
    std::string pr_priors;
    std::string pr_output = "-";
    SearchLimits pr_limits;
    auto* profile = app.add_subcommand("profile",
                                       "Best model per dimension with log posterior ratios");
    profile->add_option("--data", pr_data, "CSV file with a header row")->required();
    profile->add_option("--response", pr_response, "Response column name");
    profile->add_option("--common", pr_common, "Comma-separated common covariate columns");
    profile->add_option("--priors", pr_priors, "Comma-separated selectors (default: the eight)");
    profile->add_option("--output", pr_output, "Output path, - for stdout");
    profile->add_option("--bnb-cap", pr_limits.bnb_cap, "Branch-and-bound cap");
    profile->add_option("--time-budget", pr_limits.bnb_time_budget_sec,
                        "Branch-and-bound budget in seconds");
    profile->add_flag("--allow-perfect-fit", pr_limits.allow_perfect_fit,
                      "Keep dimensions whose best model has zero SSE");

    // synthesize
    SynthesisSpec sspec;
    std::string sy_true;
    std::string sy_output = "data.csv";
    auto* synth = app.add_subcommand("synthesize", "Seeded Gaussian fixture generator");
    synth->add_option("--n", sspec.n, "Rows");
    synth->add_option("--k", sspec.k, "Candidate variables");
    synth->add_option("--true", sy_true, "Comma-separated 1-based true-variable indices");
    synth->add_option("--coef", sspec.coefficient, "True coefficient size");
    synth->add_option("--noise-sd", sspec.noise_sd, "Noise standard deviation");
    synth->add_option("--seed", sspec.seed, "Generator seed");
    synth->add_option("--output", sy_output, "Output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(an);
        if (ptable->parsed()) {
            std::vector<PriorFamily> fams =
                pt_priors.empty() ? all_families() : parse_priors(pt_priors);
            std::ostringstream os;
            int failures = priors_table_csv(fams, pt_k, os);
            write_output(pt_output, os.str());
            return failures == 0 ? 0 : 3;
        }
        if (fig1->parsed()) {
            std::ostringstream os;
            int failures = priors_table_csv(figure_families(), 49, os);
            write_output(f1_output, os.str());
            return failures == 0 ? 0 : 3;
        }
        if (itable->parsed()) {
            std::vector<int> ks;
            for (const auto& s : split_list(it_ks)) ks.push_back(std::stoi(s));
            std::ostringstream os;
            inclusion_table_csv(ks, os);
            write_output(it_output, os.str());
            return 0;
        }
        if (profile->parsed()) {
            Dataset dataset = load_csv(pr_data, split_list(pr_common), pr_response);
            std::vector<PriorFamily> fams =
                pr_priors.empty() ? figure_families() : parse_priors(pr_priors);
            DimensionProfile prof = best_subset_per_dimension(dataset, pr_limits);
            std::ostringstream os;
            profile_csv(prof, fams, os);
            write_output(pr_output, os.str());
            return 0;
        }
        if (synth->parsed()) {
            for (const auto& s : split_list(sy_true)) {
                int idx = std::stoi(s);
                if (idx < 1) throw DataError("synthesize: --true indices are 1-based");
                sspec.true_support.push_back(idx - 1);
            }
            Dataset dataset = synthesize(sspec);
            write_csv(dataset, sy_output);
            return 0;
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateFitError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace bvs
