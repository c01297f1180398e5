#include "bvs/priors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "bvs/model_space.hpp"

namespace bvs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

PriorFamily PriorFamily::beta_binomial(double a, double b) {
    PriorFamily f{PriorTag::beta_binomial};
    f.a = a;
    f.b = b;
    f.validate();
    return f;
}

PriorFamily PriorFamily::exponential(double c) {
    PriorFamily f{PriorTag::exponential};
    f.c = c;
    f.validate();
    return f;
}

PriorFamily PriorFamily::exponential_log_k() {
    PriorFamily f{PriorTag::exponential};
    f.c_is_log_k = true;
    return f;
}

void PriorFamily::validate() const {
    if (tag == PriorTag::beta_binomial && (!(a > 0.0) || !(b > 0.0)))
        throw DataError("beta-binomial prior needs a > 0 and b > 0");
    if (tag == PriorTag::exponential && !c_is_log_k && !(c > 0.0))
        throw DataError("exponential prior needs c > 0");
}

double PriorFamily::effective_c(int k) const {
    if (!c_is_log_k) return c;
    if (k < 2) throw DataError("exponential prior with c = log k needs k >= 2");
    return std::log(static_cast<double>(k));
}

PriorFamily PriorFamily::parse(const std::string& selector) {
    if (selector == "uniform") return uniform();
    if (selector == "jeffreys") return jeffreys();
    if (selector == "harmonic") return harmonic();
    if (selector == "cmg") return cmg();
    if (selector == "half-p") return half_p();
    if (selector == "half-k") return half_k();
    if (selector == "hier-beta") return hier_beta();
    if (selector == "exp") return exponential(1.2785);
    if (selector.rfind("exp:", 0) == 0) {
        std::string arg = selector.substr(4);
        if (arg == "logk") return exponential_log_k();
        try {
            return exponential(std::stod(arg));
        } catch (const std::exception&) {
            throw DataError("bad exponential prior selector: " + selector);
        }
    }
    if (selector.rfind("beta-binomial:", 0) == 0) {
        std::string rest = selector.substr(14);
        auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw DataError("beta-binomial selector needs two parameters: " + selector);
        try {
            return beta_binomial(std::stod(rest.substr(0, colon)),
                                 std::stod(rest.substr(colon + 1)));
        } catch (const DataError&) {
            throw;
        } catch (const std::exception&) {
            throw DataError("bad beta-binomial selector: " + selector);
        }
    }
    throw DataError("unknown prior selector: " + selector);
}

std::string PriorFamily::name() const {
    std::ostringstream os;
    switch (tag) {
        case PriorTag::uniform: return "uniform";
        case PriorTag::jeffreys: return "jeffreys";
        case PriorTag::harmonic: return "harmonic";
        case PriorTag::cmg: return "cmg";
        case PriorTag::half_p: return "half-p";
        case PriorTag::half_k: return "half-k";
        case PriorTag::hier_beta: return "hier-beta";
        case PriorTag::beta_binomial:
            os << "beta-binomial:" << a << ":" << b;
            return os.str();
        case PriorTag::exponential:
            if (c_is_log_k) return "exp:logk";
            os << "exp:" << c;
            return os.str();
    }
    return "?";
}

double harmonic_number(int m) {
    if (m < 1) throw DataError("harmonic_number: m must be positive");
    // Summed smallest-first for accuracy.
    double h = 0.0;
    for (int j = m; j >= 1; --j) h += 1.0 / j;
    return h;
}

std::pair<double, double> half_k_constants(int k) {
    if (k < 2) throw DataError("half_k_constants: k must be >= 2");
    double log_nk = big_model_count(k);
    if (k % 2 == 0) {
        // Unknowns (C1, C2) from total mass one and equal per-model
        // probability at dimensions k/2 and k/2 + 1:
        //   C1 (k+2) + C2 k = 2 (k+1)
        //   C1 = C2 * k * C(k, k/2) / (2 N_k)
        double r = std::exp(log_choose(k, k / 2) - log_nk);  // C(k,k/2)/N_k
        double c2 = 2.0 * (k + 1.0) / (k * (1.0 + 0.5 * (k + 2.0) * r));
        double c1 = c2 * k * r * 0.5;
        return {c1, c2};
    }
    // Odd k: C1 + C2 = 2 and C1 = C2 (k+1) C(k, (k-1)/2) / (2 N_k).
    double r = std::exp(log_choose(k, (k - 1) / 2) - log_nk);
    double c2 = 2.0 / (1.0 + 0.5 * (k + 1.0) * r);
    double c1 = 2.0 - c2;
    return {c1, c2};
}

double log_hierarchical_beta_density(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw NumericError("hierarchical beta density: p must lie strictly in (0, 1)");
    double L = -std::log1p(-p);
    return 0.5 * std::log(kPi) + num::log_normal_cdf(-std::sqrt(2.0 * L)) - std::log1p(-p) -
           0.5 * std::log(L);
}

double hierarchical_beta_density(double p) { return std::exp(log_hierarchical_beta_density(p)); }

double cmg_lambda_density(double lambda) {
    if (!(lambda > 0.0)) throw NumericError("cmg_lambda_density: lambda must be positive");
    return std::exp(-(lambda + 1.0) - 0.5 * std::log(kPi * lambda) +
                    num::log_cosh(2.0 * std::sqrt(lambda)));
}

namespace {

// ----- quadrature-backed dimension masses (cmg, hier_beta) -----------------

// Integrates exp(logf) over (lo, hi) after shifting out the maximum of logf,
// located by a grid scan plus golden-section refinement. Returns the log of
// the integral. The support is clipped where logf falls 45 nats below peak.
double log_integral_of_exp(const std::function<double(double)>& logf, double lo, double hi,
                           const num::QuadratureSpec& spec) {
    constexpr int kGrid = 257;
    double best_x = lo, best_v = kNegInf;
    for (int i = 0; i < kGrid; ++i) {
        double x = lo + (hi - lo) * (i + 0.5) / kGrid;
        double v = logf(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    if (!std::isfinite(best_v)) return kNegInf;

    // Golden-section refinement around the grid max.
    double a = std::max(lo, best_x - (hi - lo) / kGrid);
    double b = std::min(hi, best_x + (hi - lo) / kGrid);
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = logf(x1), f2 = logf(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-14 * (hi - lo); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = logf(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = logf(x1);
        }
    }
    double peak = std::max({best_v, f1, f2});

    // Clip the support: walk out from the peak until 45 nats below it.
    constexpr double kDrop = 45.0;
    double step = (hi - lo) / kGrid;
    double left = std::max(lo, best_x - step), right = std::min(hi, best_x + step);
    while (left > lo && logf(left) > peak - kDrop) left = std::max(lo, left - step);
    while (right < hi && logf(right) > peak - kDrop) right = std::min(hi, right + step);

    auto f = [&](double x) { return std::exp(logf(x) - peak); };
    double integral = num::integrate(f, left, right, spec);
    if (!(integral > 0.0)) return kNegInf;
    return peak + std::log(integral);
}

// ln of the unnormalized cmg dimension weight: the Poisson pmf at d mixed
// over the intrinsic rate prior, integrated after lambda = t^2.
double cmg_log_weight(int d, const num::QuadratureSpec& spec) {
    double lgd = num::log_gamma(d + 1.0);
    auto logf = [&](double t) {
        if (!(t > 0.0)) return kNegInf;
        double lt = std::log(t);
        return 2.0 * d * lt - 2.0 * t * t - 1.0 + num::log_cosh(2.0 * t) + kLn2 -
               0.5 * std::log(kPi) - lgd;
    };
    // The integrand peaks near t = sqrt(d/2); keep a safe margin.
    double hi = std::sqrt(std::max(4.0, d / 2.0 + 8.0 * std::sqrt(d / 2.0 + 1.0))) + 6.0;
    return log_integral_of_exp(logf, 0.0, hi, spec);
}

// ln of the hierarchical-Beta per-model prior at dimension d: the mixture
// integral over p computed after p = sin^2(theta), which removes the
// p^{-1/2} endpoint singularity of the mixing density.
double hier_beta_log_weight(int k, int d, const num::QuadratureSpec& spec) {
    auto logf = [&](double theta) {
        double s = std::sin(theta), c = std::cos(theta);
        if (!(s > 0.0) || !(c > 0.0)) return kNegInf;
        double p = s * s;
        double log1mp = 2.0 * std::log(c);
        double L = -log1mp;
        double log_density = 0.5 * std::log(kPi) + num::log_normal_cdf(-std::sqrt(2.0 * L)) -
                             log1mp - 0.5 * std::log(L);
        return 2.0 * d * std::log(s) + (k - d) * log1mp + log_density +
               std::log(2.0 * s * c);
    };
    return log_integral_of_exp(logf, 0.0, kPi / 2.0, spec);
}

// ----- cache of per-(family, k) log dimension masses ------------------------

struct MassKey {
    PriorTag tag;
    int k;
    auto operator<=>(const MassKey&) const = default;
};

std::optional<std::vector<double>> load_cached_masses(const std::string& file, int k) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    std::vector<double> vals;
    vals.reserve(k + 1);
    double v;
    while (in >> v) vals.push_back(v);
    if (static_cast<int>(vals.size()) != k + 1) return std::nullopt;
    return vals;
}

void store_cached_masses(const std::string& file, const std::vector<double>& vals) {
    std::ofstream out(file);
    if (!out) return;
    out.precision(17);
    for (double v : vals) out << v << "\n";
}

std::string cache_file_for(const MassKey& key) {
    const char* dir = std::getenv("BVS_CACHE_DIR");
    if (!dir || !*dir) return {};
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::string fam = key.tag == PriorTag::cmg ? "cmg" : "hier-beta";
    return std::string(dir) + "/" + fam + "-k" + std::to_string(key.k) + ".logmass";
}

// Normalized log dimension masses for the two quadrature families. Cached per
// (family, k); safe for concurrent readers.
const std::vector<double>& quadrature_log_masses(const PriorFamily& family, int k) {
    static std::shared_mutex mu;
    static std::map<MassKey, std::vector<double>> cache;

    MassKey key{family.tag, k};
    {
        std::shared_lock lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    std::string file = cache_file_for(key);
    std::vector<double> logw;
    bool from_disk = false;
    if (!file.empty()) {
        if (auto cached = load_cached_masses(file, k)) {
            logw = std::move(*cached);
            from_disk = true;
        }
    }
    if (!from_disk) {
        logw.resize(k + 1);
        for (int d = 0; d <= k; ++d) {
            if (family.tag == PriorTag::cmg) {
                logw[d] = cmg_log_weight(d, family.quadrature);
            } else {
                logw[d] = hier_beta_log_weight(k, d, family.quadrature) + log_choose(k, d);
            }
        }
        double lse = num::log_sum_exp(logw);
        for (double& v : logw) v -= lse;
        if (!file.empty()) store_cached_masses(file, logw);
    }

    std::unique_lock lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(logw));
    return it->second;
}

// ----- closed-form per-family log mass --------------------------------------

double log_mass_closed_form(const PriorFamily& family, int k, int d) {
    switch (family.tag) {
        case PriorTag::uniform:
            return log_choose(k, d) - k * kLn2;
        case PriorTag::jeffreys:
            return -std::log(k + 1.0);
        case PriorTag::beta_binomial:
            return log_choose(k, d) + num::log_beta(family.a + d, family.b + k - d) -
                   num::log_beta(family.a, family.b);
        case PriorTag::harmonic:
            return -std::log1p(static_cast<double>(d)) - std::log(harmonic_number(k + 1));
        case PriorTag::half_p: {
            // Inclusion probability uniform on (0, c) with c = (k+1)/(2k);
            // mass(d) = C(k,d) (1/c) B(d+1, k-d+1) I_c(d+1, k-d+1).
            double c = (k + 1.0) / (2.0 * k);
            return log_choose(k, d) - std::log(c) + num::log_beta(d + 1.0, k - d + 1.0) +
                   num::log_reg_inc_beta(c, d + 1.0, k - d + 1.0);
        }
        case PriorTag::half_k: {
            auto [c1, c2] = half_k_constants(k);
            int cut = (k % 2 == 0) ? k / 2 : (k - 1) / 2;
            // Below the cut the C(k,d) per-model denominator cancels against
            // the models-per-dimension count.
            if (d <= cut) return std::log(c1) - std::log(k + 1.0);
            double log_nk = big_model_count(k);
            double log_per_model = (k % 2 == 0)
                                       ? std::log(c2 * k / (2.0 * (k + 1.0))) - log_nk
                                       : std::log(c2 / 2.0) - log_nk;
            return log_choose(k, d) + log_per_model;
        }
        case PriorTag::exponential: {
            double c = family.effective_c(k);
            return log_choose(k, d) - c * d - k * std::log1p(std::exp(-c));
        }
        default:
            throw NumericError("log_mass_closed_form: not a closed-form family");
    }
}

bool is_quadrature_family(PriorTag tag) {
    return tag == PriorTag::cmg || tag == PriorTag::hier_beta;
}

double log_mass_impl(const PriorFamily& family, int k, int d) {
    if (is_quadrature_family(family.tag)) return quadrature_log_masses(family, k)[d];
    return log_mass_closed_form(family, k, d);
}

}  // namespace

double log_prior_model(const PriorFamily& family, int k, int d) {
    if (k < 1) throw DataError("log_prior_model: k must be positive");
    if (d < 0 || d > k) throw DataError("log_prior_model: need 0 <= d <= k");
    family.validate();
    return log_mass_impl(family, k, d) - log_choose(k, d);
}

DimensionMass dimension_mass(const PriorFamily& family, int k) {
    if (k < 1) throw DataError("dimension_mass: k must be positive");
    family.validate();
    DimensionMass out;
    out.k = k;
    out.log_mass.resize(k + 1);
    out.mass.resize(k + 1);
    for (int d = 0; d <= k; ++d) {
        out.log_mass[d] = log_mass_impl(family, k, d);
        out.mass[d] = std::exp(out.log_mass[d]);
    }
    return out;
}

double prior_inclusion_probability(const PriorFamily& family, int k) {
    DimensionMass dm = dimension_mass(family, k);
    std::vector<double> terms;
    terms.reserve(k);
    for (int d = 1; d <= k; ++d) terms.push_back(dm.log_mass[d] + std::log(static_cast<double>(d)));
    return std::exp(num::log_sum_exp(terms) - std::log(static_cast<double>(k)));
}

std::optional<double> approx_dimension_mass(const PriorFamily& family, int k, int d) {
    if (k < 1 || d < 0 || d > k) throw DataError("approx_dimension_mass: bad (k, d)");
    double kk = k;
    switch (family.tag) {
        case PriorTag::jeffreys:
            return -std::log(kk);
        case PriorTag::uniform:
            if (d == 0 || d == k) return -kk * kLn2;
            if (d == 1) return std::log(kk) - kk * kLn2;
            if (2 * d == k) return 0.5 * std::log(2.0 / (kk * kPi));
            return std::nullopt;
        case PriorTag::beta_binomial:
            if (family.a == 1.0 && family.b == 2.0 && d < k)
                return std::log(2.0 / kk) + std::log1p(-static_cast<double>(d) / kk);
            return std::nullopt;
        case PriorTag::half_p:
            if (2 * d < k) return std::log(2.0 / kk);
            if (d == k) return 1.0 - kk * kLn2 - std::log(kk);
            return std::nullopt;
        case PriorTag::hier_beta:
            if (d == 0) return std::log(kPi / 2.0) - 0.5 * std::log(kk);
            if (d == 1) return std::log(kPi / 4.0) - 0.5 * std::log(kk);
            if (d == k) return -std::log(2.0 * kk * std::log(kk));
            return log_hierarchical_beta_density(static_cast<double>(d) / kk) - std::log(kk);
        case PriorTag::harmonic:
            return -std::log1p(static_cast<double>(d)) - std::log(std::log(kk + 1.0));
        default:
            return std::nullopt;
    }
}

}  // namespace bvs
