#include "bvs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <set>

namespace bvs::num {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

void QuadratureSpec::validate() const {
    if (node_count < 2) throw NumericError("QuadratureSpec: node_count must be >= 2");
    if (scheme == QuadScheme::adaptive_subdivision && abs_tol <= 0.0 && rel_tol <= 0.0)
        throw NumericError("QuadratureSpec: adaptive scheme needs abs_tol or rel_tol > 0");
    if (abs_tol < 0.0 || rel_tol < 0.0)
        throw NumericError("QuadratureSpec: tolerances must be nonnegative");
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw NumericError("log_gamma: argument must be finite and positive");
    // Lanczos-type series, g = 5.2421875, 14 terms. Good to ~1e-15 relative.
    static const double cof[14] = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
        0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : cof) ser += c / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw NumericError("log_beta: arguments must be finite and positive");
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double x, double a, double b) {
    constexpr int kMaxIter = 2000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw NumericError("reg_inc_beta: continued fraction did not converge");
}

void check_inc_beta_args(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw NumericError("reg_inc_beta: a, b must be finite and positive");
    if (!(x >= 0.0) || !(x <= 1.0)) throw NumericError("reg_inc_beta: x must lie in [0, 1]");
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
    check_inc_beta_args(x, a, b);
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double lfront = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(lfront) * beta_cf(x, a, b) / a;
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                     beta_cf(1.0 - x, b, a) / b;
}

double log_reg_inc_beta(double x, double a, double b) {
    check_inc_beta_args(x, a, b);
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x == 1.0) return 0.0;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        double lfront = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
        return lfront + std::log(beta_cf(x, a, b) / a);
    }
    double tail = std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                  beta_cf(1.0 - x, b, a) / b;
    return std::log1p(-tail);
}

double normal_cdf(double z) {
    if (!std::isfinite(z)) throw NumericError("normal_cdf: argument must be finite");
    return 0.5 * std::erfc(-z * 0.7071067811865475244);
}

double log_normal_cdf(double z) {
    if (!std::isfinite(z)) throw NumericError("log_normal_cdf: argument must be finite");
    if (z > -20.0) {
        double p = normal_cdf(z);
        if (p > 0.0) return std::log(p);
    }
    // Asymptotic expansion of the Mills ratio for the far left tail.
    double zz = z * z;
    double series = 1.0 - 1.0 / zz + 3.0 / (zz * zz) - 15.0 / (zz * zz * zz) +
                    105.0 / (zz * zz * zz * zz);
    return -0.5 * zz - std::log(-z) - 0.5 * std::log(2.0 * kPi) + std::log(series);
}

double log_cosh(double x) {
    double ax = std::fabs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - 0.6931471805599453094;
}

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

double log_sum_exp(std::span<const double> values) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::max(m, v);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : values) s += std::exp(v - m);
    return m + std::log(s);
}

const std::vector<double>& chebyshev_unit_nodes(int n) {
    if (n < 2) throw NumericError("chebyshev_unit_nodes: need n >= 2");
    static std::mutex mu;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> nodes(n);
    for (int i = 1; i <= n; ++i) {
        double theta = (2.0 * i - 1.0) * kPi / (2.0 * n);
        nodes[i - 1] = 0.5 * (1.0 + std::cos(theta));
    }
    return cache.emplace(n, std::move(nodes)).first->second;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_unit(int n) {
    if (n < 2) throw NumericError("gauss_legendre_unit: need n >= 2");
    static std::mutex mu;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // Newton iteration on the Legendre recurrence, symmetric pairs at once.
    std::vector<double> x(n), w(n);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        double wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    // Map [-1, 1] to (0, 1).
    for (int i = 0; i < n; ++i) {
        x[i] = 0.5 * (1.0 + x[i]);
        w[i] *= 0.5;
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace {

// Gauss-Kronrod 7/15 pair on [-1, 1]. Kronrod nodes and weights plus the
// embedded 7-point Gauss weights (at the odd-index Kronrod nodes).
const double kKronrodNodes[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

const double kKronrodWeights[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

const double kGaussWeights[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Interval {
    double lo, hi;
    double value;
    double error;
    std::size_t id;  // creation order, deterministic tie break
};

struct IntervalOrder {
    bool operator()(const Interval& a, const Interval& b) const {
        if (a.error != b.error) return a.error > b.error;
        return a.id < b.id;
    }
};

void gk15(const std::function<double(double)>& f, double lo, double hi, double& value,
          double& error) {
    double c = 0.5 * (lo + hi);
    double h = 0.5 * (hi - lo);
    double fk[15];
    for (int i = 0; i < 15; ++i) fk[i] = f(c + h * kKronrodNodes[i]);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) k += kKronrodWeights[i] * fk[i];
    for (int i = 0; i < 7; ++i) g += kGaussWeights[i] * fk[2 * i + 1];
    value = k * h;
    error = std::fabs((k - g) * h);
}

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          const QuadratureSpec& spec) {
    std::set<Interval, IntervalOrder> queue;
    std::size_t next_id = 0;
    std::size_t evals = 0;
    double total_value = 0.0;
    double total_error = 0.0;

    auto push = [&](double a, double b) {
        Interval iv{a, b, 0.0, 0.0, next_id++};
        gk15(f, a, b, iv.value, iv.error);
        evals += 15;
        total_value += iv.value;
        total_error += iv.error;
        queue.insert(iv);
    };
    push(lo, hi);

    auto resum = [&]() {
        // Rebuild the accumulated sums occasionally to shed rounding drift.
        total_value = 0.0;
        total_error = 0.0;
        for (const auto& iv : queue) {
            total_value += iv.value;
            total_error += iv.error;
        }
    };

    std::size_t since_resum = 0;
    while (true) {
        double target = std::max(spec.abs_tol, spec.rel_tol * std::fabs(total_value));
        if (total_error <= target) {
            resum();
            if (total_error <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total_value)))
                return total_value;
        }
        if (evals + 30 > spec.max_evals)
            throw IntegrationError("integrate: evaluation budget exhausted", total_value,
                                   total_error);
        Interval worst = *queue.begin();
        queue.erase(queue.begin());
        total_value -= worst.value;
        total_error -= worst.error;
        double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // Interval no longer splittable in double precision; accept it.
            queue.insert(worst);
            total_value += worst.value;
            resum();
            return total_value;
        }
        push(worst.lo, mid);
        push(mid, worst.hi);
        if (++since_resum >= 4096) {
            resum();
            since_resum = 0;
        }
    }
}

double integrate_chebyshev(const std::function<double(double)>& f, double lo, double hi, int n) {
    const auto& nodes = chebyshev_unit_nodes(n);
    double width = hi - lo;
    double sum = 0.0;
    for (double v : nodes) {
        double x = lo + width * v;
        sum += f(x) * kPi * std::sqrt(v * (1.0 - v));
    }
    return sum * width / n;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
    spec.validate();
    if (!(lo < hi)) throw NumericError("integrate: need lo < hi");
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw NumericError("integrate: endpoints must be finite (substitute first)");
    if (spec.scheme == QuadScheme::gauss_chebyshev_first_kind)
        return integrate_chebyshev(f, lo, hi, spec.node_count);
    return integrate_adaptive(f, lo, hi, spec);
}

}  // namespace bvs::num
