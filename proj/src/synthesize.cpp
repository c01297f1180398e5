#include "bvs/synthesize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace bvs {

namespace {

// Box-Muller over explicit 53-bit uniforms; std::normal_distribution is not
// pinned down by the standard and would break cross-platform determinism.
struct NormalSource {
    std::mt19937_64 gen;
    bool have_spare = false;
    double spare = 0.0;

    explicit NormalSource(std::uint64_t seed) : gen(seed) {}

    double uniform() { return (gen() >> 11) * 0x1.0p-53; }

    double next() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }
};

}  // namespace

Dataset synthesize(const SynthesisSpec& spec) {
    if (spec.n < 3) throw DataError("synthesize: need n >= 3");
    if (spec.k < 1) throw DataError("synthesize: need k >= 1");
    for (int j : spec.true_support)
        if (j < 0 || j >= spec.k) throw DataError("synthesize: true support index out of range");

    NormalSource rng(spec.seed);
    Matrix x(spec.n, spec.k);
    for (int j = 0; j < spec.k; ++j)
        for (int i = 0; i < spec.n; ++i) x(i, j) = rng.next();

    std::vector<double> y(spec.n, 0.0);
    for (int i = 0; i < spec.n; ++i) {
        double mean = 0.0;
        for (int j : spec.true_support) mean += spec.coefficient * x(i, j);
        y[i] = mean + spec.noise_sd * rng.next();
    }

    Matrix x0(spec.n, 1);
    for (int i = 0; i < spec.n; ++i) x0(i, 0) = 1.0;

    std::vector<std::string> cand_names(spec.k);
    for (int j = 0; j < spec.k; ++j) cand_names[j] = "x" + std::to_string(j + 1);
    return Dataset(std::move(y), std::move(x0), std::move(x), "y", {"(intercept)"},
                   std::move(cand_names));
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("write_csv: cannot open '" + path + "'");
    out << dataset.response_name();
    for (const auto& name : dataset.candidate_names()) out << "," << name;
    out << "\n";
    char buf[64];
    for (int i = 0; i < dataset.n(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", dataset.y()[i]);
        out << buf;
        for (int j = 0; j < dataset.k(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", dataset.x()(i, j));
            out << "," << buf;
        }
        out << "\n";
    }
}

}  // namespace bvs
