#include "bvs/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "bvs/numerics.hpp"
#include "sse_engine.hpp"

namespace bvs {

namespace {

constexpr double kDegenerateRel = 1e-12;

std::vector<double> per_dimension_log_priors(const PriorFamily& family, int k) {
    std::vector<double> lp(k + 1);
    for (int d = 0; d <= k; ++d) lp[d] = log_prior_model(family, k, d);
    return lp;
}

}  // namespace

// ---------------------------------------------------------------------------
// SseEngine
// ---------------------------------------------------------------------------

namespace detail {

SseEngine::SseEngine(const Dataset& dataset, int gram_cap)
    : ds_(dataset), p_total_(dataset.k0() + dataset.k()) {
    yty_ = 0.0;
    for (double v : ds_.y()) yty_ += v * v;
    aty_.resize(p_total_);
    for (int j = 0; j < p_total_; ++j) aty_[j] = dot_ay(j);
    have_gram_ = p_total_ <= gram_cap;
    if (have_gram_) {
        gram_.assign(std::size_t(p_total_) * p_total_, 0.0);
        for (int i = 0; i < p_total_; ++i)
            for (int j = i; j < p_total_; ++j) {
                double v = dot_aa(i, j);
                gram_[std::size_t(j) * p_total_ + i] = v;
                gram_[std::size_t(i) * p_total_ + j] = v;
            }
    }
}

double SseEngine::dot_ay(int i) const {
    const double* a = i < ds_.k0() ? ds_.x0().col(i) : ds_.x().col(i - ds_.k0());
    const auto& y = ds_.y();
    double s = 0.0;
    for (int r = 0; r < ds_.n(); ++r) s += a[r] * y[r];
    return s;
}

double SseEngine::dot_aa(int i, int j) const {
    const double* a = i < ds_.k0() ? ds_.x0().col(i) : ds_.x().col(i - ds_.k0());
    const double* b = j < ds_.k0() ? ds_.x0().col(j) : ds_.x().col(j - ds_.k0());
    double s = 0.0;
    for (int r = 0; r < ds_.n(); ++r) s += a[r] * b[r];
    return s;
}

double SseEngine::sse_of(const std::vector<int>& candidates) const {
    int k0 = ds_.k0();
    int p = k0 + static_cast<int>(candidates.size());
    if (p == 0) return yty_;

    // Combined column ids: common covariates then the selected candidates.
    std::vector<int> ids(p);
    std::iota(ids.begin(), ids.begin() + k0, 0);
    for (std::size_t s = 0; s < candidates.size(); ++s) ids[k0 + s] = k0 + candidates[s];

    std::vector<double> g(std::size_t(p) * p);
    std::vector<double> rhs(p);
    for (int c = 0; c < p; ++c) {
        rhs[c] = aty_[ids[c]];
        for (int r = 0; r <= c; ++r) {
            double v = have_gram_ ? gram_[std::size_t(ids[c]) * p_total_ + ids[r]]
                                  : dot_aa(ids[r], ids[c]);
            g[std::size_t(c) * p + r] = v;
        }
    }

    // Lower Cholesky in place (only the upper-triangular storage is filled;
    // read g(r, c) for r <= c).
    auto at = [&](int r, int c) -> double& { return g[std::size_t(c) * p + r]; };
    std::vector<double> l(std::size_t(p) * p, 0.0);
    auto lat = [&](int r, int c) -> double& { return l[std::size_t(c) * p + r]; };
    for (int j = 0; j < p; ++j) {
        double diag = at(j, j);
        for (int t = 0; t < j; ++t) diag -= lat(j, t) * lat(j, t);
        if (!(diag > 0.0)) {
            // Pivot collapse: defer to the QR route.
            ModelIndicator m(ds_.k());
            for (int c : candidates) m.set(c, true);
            return sse(ds_, m).sse_gamma;
        }
        double dj = std::sqrt(diag);
        lat(j, j) = dj;
        for (int i = j + 1; i < p; ++i) {
            double v = at(j, i);
            for (int t = 0; t < j; ++t) v -= lat(i, t) * lat(j, t);
            lat(i, j) = v / dj;
        }
    }
    // Solve L z = rhs; SSE = yty - ||z||^2.
    double explained = 0.0;
    std::vector<double> z(p);
    for (int i = 0; i < p; ++i) {
        double v = rhs[i];
        for (int t = 0; t < i; ++t) v -= lat(i, t) * z[t];
        z[i] = v / lat(i, i);
        explained += z[i] * z[i];
    }
    return std::max(0.0, yty_ - explained);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact enumeration
// ---------------------------------------------------------------------------

PosteriorSummary exact_posterior(const Dataset& dataset, const PriorFamily& family,
                                 const SearchLimits& limits) {
    int k = dataset.k();
    if (k > limits.enumeration_cap)
        throw CapacityError("exact_posterior: k = " + std::to_string(k) +
                            " exceeds the enumeration cap " +
                            std::to_string(limits.enumeration_cap) +
                            "; use gibbs_posterior instead");

    std::vector<double> log_prior = per_dimension_log_priors(family, k);

    // Streaming log-sum-exp with a shared running maximum for the normalizer
    // and the per-variable inclusion numerators.
    double mx = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    std::vector<double> var_sums(k, 0.0);

    ModelIndicator hpm(k);
    double hpm_lp = -std::numeric_limits<double>::infinity();
    int hpm_dim = 0;

    // Perfect fits collapse the posterior; collect the smallest ones.
    std::vector<ModelIndicator> perfect;
    int perfect_min_dim = k + 1;

    ModelStream stream(k, limits.enumeration_cap);
    ModelIndicator m(k);
    while (stream.next(m)) {
        FitStatistics fit = sse(dataset, m);
        int d = fit.dim;
        double lp;
        if (d == 0) {
            lp = log_prior[0];
        } else {
            double q = fit.sse_gamma / fit.sse_null;
            if (q < kDegenerateRel) {
                if (!limits.allow_perfect_fit)
                    throw DegenerateFitError("exact_posterior: model " + m.to_string() +
                                             " fits the response exactly");
                if (d < perfect_min_dim) {
                    perfect.clear();
                    perfect_min_dim = d;
                }
                if (d == perfect_min_dim) perfect.push_back(m);
                continue;
            }
            lp = log_bayes_factor(BayesFactorInput(fit.n, fit.k0, d, q)) + log_prior[d];
        }

        if (lp > hpm_lp || (lp == hpm_lp && (d < hpm_dim ||
                            (d == hpm_dim && ModelIndicator::lex_less(m, hpm))))) {
            hpm_lp = lp;
            hpm = m;
            hpm_dim = d;
        }

        if (lp > mx) {
            double scale = std::exp(mx - lp);
            total *= scale;
            for (double& v : var_sums) v *= scale;
            mx = lp;
        }
        double w = std::exp(lp - mx);
        total += w;
        for (int j = 0; j < k; ++j)
            if (m.test(j)) var_sums[j] += w;
    }

    PosteriorSummary out{.inclusion_probs = std::vector<double>(k, 0.0),
                         .hpm = hpm,
                         .mpm = ModelIndicator(k),
                         .method = PosteriorSummary::Method::exact};

    if (!perfect.empty()) {
        // All Bayes factors of the minimal perfect-fit models diverge at the
        // same rate, so the limit posterior splits their prior mass and every
        // other model vanishes.
        out.warnings.push_back("perfect fits found; posterior collapsed onto dimension " +
                               std::to_string(perfect_min_dim));
        double w = 1.0 / static_cast<double>(perfect.size());
        for (const auto& pm : perfect)
            for (int j = 0; j < k; ++j)
                if (pm.test(j)) out.inclusion_probs[j] += w;
        out.hpm = perfect.front();
        out.log_normalizer = std::numeric_limits<double>::infinity();
        out.mpm = mpm_from_inclusions(out.inclusion_probs);
        return out;
    }

    for (int j = 0; j < k; ++j) out.inclusion_probs[j] = var_sums[j] / total;
    out.log_normalizer = mx + std::log(total);
    out.mpm = mpm_from_inclusions(out.inclusion_probs);
    return out;
}

// ---------------------------------------------------------------------------
// Branch-and-bound best subsets
// ---------------------------------------------------------------------------

namespace {

// Subset-tree state on the cross-products matrix of the X0-residualized
// candidates and response: g holds the (m+1) x (m+1) Gram with the response
// last, so g[y][y] is the SSE of the included set. Including a column is one
// Schur-complement step; the n-row data never enter the tree.
struct BnbState {
    std::vector<double> g;          // (m+1)^2, col-major, m = remaining count
    std::vector<int> included;      // original candidate indices
    std::vector<int> remaining;     // original candidate indices, search order
    double sse_included = 0.0;      // g[y][y]

    int m() const { return static_cast<int>(remaining.size()); }
    double at(int r, int c) const { return g[std::size_t(c) * (m() + 1) + r]; }
};

// Removes candidate column c from the state.
void drop_column(BnbState& st, int c) {
    int dim = st.m() + 1;
    std::vector<double> next(std::size_t(dim - 1) * (dim - 1));
    int oc = 0;
    for (int cc = 0; cc < dim; ++cc) {
        if (cc == c) continue;
        int orow = 0;
        for (int rr = 0; rr < dim; ++rr) {
            if (rr == c) continue;
            next[std::size_t(oc) * (dim - 1) + orow] = st.g[std::size_t(cc) * dim + rr];
            ++orow;
        }
        ++oc;
    }
    st.g = std::move(next);
    st.remaining.erase(st.remaining.begin() + c);
}

// Projects column c out of the remaining columns and the response (one
// Gaussian-elimination step on the Gram), then drops it. Returns false if the
// column carries no mass beyond the included set (collinear).
bool push_column(BnbState& st, int c, double pivot_floor) {
    int dim = st.m() + 1;
    double pivot = st.at(c, c);
    if (!(pivot > pivot_floor)) return false;

    std::vector<double> next(std::size_t(dim - 1) * (dim - 1));
    int oc = 0;
    for (int cc = 0; cc < dim; ++cc) {
        if (cc == c) continue;
        double gc = st.g[std::size_t(cc) * dim + c];
        int orow = 0;
        for (int rr = 0; rr < dim; ++rr) {
            if (rr == c) continue;
            double gr = st.g[std::size_t(c) * dim + rr];
            next[std::size_t(oc) * (dim - 1) + orow] =
                st.g[std::size_t(cc) * dim + rr] - gr * gc / pivot;
            ++orow;
        }
        ++oc;
    }
    st.g = std::move(next);
    st.included.push_back(st.remaining[c]);
    st.remaining.erase(st.remaining.begin() + c);
    st.sse_included = std::max(0.0, st.g.back());
    return true;
}

struct BnbBest {
    std::vector<double> sse;
    std::vector<ModelIndicator> mask;
    int k;

    explicit BnbBest(int k)
        : sse(k + 1, std::numeric_limits<double>::infinity()),
          mask(k + 1, ModelIndicator(k)),
          k(k) {}

    void record(const std::vector<int>& included, double value) {
        int d = static_cast<int>(included.size());
        if (value < sse[d]) {
            sse[d] = value;
            mask[d] = ModelIndicator(k, included);
        }
    }
};

struct BnbDriver {
    BnbBest best;
    double pivot_floor;
    std::chrono::steady_clock::time_point deadline;
    bool timed_out = false;
    long nodes = 0;

    BnbDriver(int k, double pivot_floor, double budget_sec)
        : best(k),
          pivot_floor(pivot_floor),
          deadline(std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(budget_sec))) {}

    // Saturated SSE of the subtree: include every remaining column. The
    // intermediate prefixes are real models, so record them too.
    double saturated(const BnbState& st) {
        BnbState tmp = st;
        while (!tmp.remaining.empty()) {
            if (!push_column(tmp, 0, pivot_floor)) {
                // Collinear leftover carries no information; drop it.
                drop_column(tmp, 0);
                continue;
            }
            best.record(tmp.included, tmp.sse_included);
        }
        return tmp.sse_included;
    }

    void dfs(BnbState& st, double sat_bound) {
        if (timed_out) return;
        if ((++nodes & 0xFF) == 0 && std::chrono::steady_clock::now() > deadline) {
            timed_out = true;
            return;
        }
        best.record(st.included, st.sse_included);
        if (st.remaining.empty()) return;

        int d = static_cast<int>(st.included.size());
        int m = static_cast<int>(st.remaining.size());
        bool can_improve = false;
        for (int dd = d + 1; dd <= d + m; ++dd)
            if (sat_bound < best.sse[dd]) {
                can_improve = true;
                break;
            }
        if (!can_improve) return;

        // Branch on the variable with the largest marginal SSE reduction at
        // this node; include-first shares the parent's saturated set.
        int pick = 0;
        double best_red = -1.0;
        for (int c = 0; c < m; ++c) {
            double diag = st.at(c, c);
            if (!(diag > pivot_floor)) continue;
            double gy = st.at(c, m);
            double red = gy * gy / diag;
            if (red > best_red) {
                best_red = red;
                pick = c;
            }
        }
        BnbState inc = st;
        if (push_column(inc, pick, pivot_floor)) {
            dfs(inc, sat_bound);
        }
        BnbState exc = st;
        drop_column(exc, pick);
        double exc_bound = exc.remaining.empty() ? exc.sse_included : saturated(exc);
        dfs(exc, exc_bound);
    }
};

}  // namespace

DimensionProfile best_subset_per_dimension(const Dataset& dataset, const SearchLimits& limits) {
    int k = dataset.k();
    int n = dataset.n();
    if (k > limits.bnb_cap)
        throw CapacityError("best_subset_per_dimension: k = " + std::to_string(k) +
                            " exceeds the branch-and-bound cap " + std::to_string(limits.bnb_cap));

    // Residualize candidates and response against X0 once (Householder pass),
    // leaving rows k0..n-1 as the active data.
    Matrix cols(n, k + 1);
    for (int j = 0; j < k; ++j) std::copy(dataset.x().col(j), dataset.x().col(j) + n, cols.col(j));
    std::copy(dataset.y().begin(), dataset.y().end(), cols.col(k));
    {
        Matrix x0 = dataset.x0();
        for (int j = 0; j < dataset.k0(); ++j) {
            int row = j;
            double norm2 = 0.0;
            for (int i = row; i < n; ++i) norm2 += x0(i, j) * x0(i, j);
            double norm = std::sqrt(norm2);
            if (!(norm > 0.0)) throw DataError("best_subset_per_dimension: degenerate X0");
            double alpha = x0(row, j) > 0 ? -norm : norm;
            std::vector<double> v(n - row);
            v[0] = x0(row, j) - alpha;
            for (int i = row + 1; i < n; ++i) v[i - row] = x0(i, j);
            double vnorm2 = 0.0;
            for (double w : v) vnorm2 += w * w;
            auto reflect = [&](double* colptr) {
                double dot = 0.0;
                for (int i = row; i < n; ++i) dot += v[i - row] * colptr[i];
                double f = 2.0 * dot / vnorm2;
                for (int i = row; i < n; ++i) colptr[i] -= f * v[i - row];
            };
            for (int jj = j + 1; jj < dataset.k0(); ++jj) reflect(x0.col(jj));
            for (int c = 0; c <= k; ++c) reflect(cols.col(c));
        }
    }

    // Cross-products of the active rows, candidates ordered by decreasing
    // single-variable SSE reduction, response last.
    int k0 = dataset.k0();
    auto active_dot = [&](int a, int b) {
        double s = 0.0;
        for (int i = k0; i < n; ++i) s += cols(i, a) * cols(i, b);
        return s;
    };
    std::vector<std::pair<double, int>> order(k);
    for (int j = 0; j < k; ++j) {
        double gjj = active_dot(j, j);
        double gjy = active_dot(j, k);
        order[j] = {gjj > 0.0 ? -gjy * gjy / gjj : 0.0, j};
    }
    std::sort(order.begin(), order.end());

    BnbState root;
    root.remaining.resize(k);
    for (int c = 0; c < k; ++c) root.remaining[c] = order[c].second;
    root.g.resize(std::size_t(k + 1) * (k + 1));
    std::vector<int> slot(k + 1);
    for (int c = 0; c < k; ++c) slot[c] = order[c].second;
    slot[k] = k;
    for (int c = 0; c <= k; ++c)
        for (int r = 0; r <= k; ++r)
            root.g[std::size_t(c) * (k + 1) + r] = active_dot(slot[r], slot[c]);
    root.sse_included = root.g.back();

    double max_diag = 0.0;
    for (int c = 0; c < k; ++c)
        max_diag = std::max(max_diag, root.g[std::size_t(c) * (k + 1) + c]);
    BnbDriver driver(k, 1e-13 * max_diag, limits.bnb_time_budget_sec);

    // Seed the incumbents with greedy forward and backward stepwise chains;
    // strong early bounds shrink the tree by orders of magnitude.
    {
        detail::SseEngine engine(dataset);
        std::vector<int> fwd;
        std::vector<char> in_fwd(k, 0);
        for (int step = 0; step < k; ++step) {
            int best_j = -1;
            double best_sse = std::numeric_limits<double>::infinity();
            for (int j = 0; j < k; ++j) {
                if (in_fwd[j]) continue;
                fwd.push_back(j);
                double s = engine.sse_of(fwd);
                fwd.pop_back();
                if (s < best_sse) {
                    best_sse = s;
                    best_j = j;
                }
            }
            if (best_j < 0) break;
            fwd.push_back(best_j);
            in_fwd[best_j] = 1;
            driver.best.record(fwd, best_sse);
        }
        std::vector<int> bwd(k);
        std::iota(bwd.begin(), bwd.end(), 0);
        for (int step = k; step > 1; --step) {
            int drop_at = -1;
            double best_sse = std::numeric_limits<double>::infinity();
            for (int t = 0; t < static_cast<int>(bwd.size()); ++t) {
                std::vector<int> trial = bwd;
                trial.erase(trial.begin() + t);
                double s = engine.sse_of(trial);
                if (s < best_sse) {
                    best_sse = s;
                    drop_at = t;
                }
            }
            bwd.erase(bwd.begin() + drop_at);
            driver.best.record(bwd, best_sse);
        }
    }

    double root_bound = driver.saturated(root);
    driver.dfs(root, root_bound);

    DimensionProfile profile;
    profile.k = k;
    profile.n = n;
    profile.k0 = dataset.k0();
    profile.sse_null = dataset.sse_null();
    profile.best = std::move(driver.best.mask);
    profile.complete = !driver.timed_out;
    profile.proven_optimal.assign(k + 1, profile.complete);
    profile.sse.assign(k + 1, std::numeric_limits<double>::infinity());
    profile.log_bf.assign(k + 1, 0.0);
    for (int d = 0; d <= k; ++d) {
        if (!std::isfinite(driver.best.sse[d])) continue;
        // Report the winner's SSE from the orthogonal decomposition; the
        // cross-products sweep only steers the search.
        profile.sse[d] = sse(dataset, profile.best[d]).sse_gamma;
        if (d == 0) continue;
        double q = profile.sse[d] / profile.sse_null;
        if (q < kDegenerateRel) {
            if (!limits.allow_perfect_fit)
                throw DegenerateFitError("best_subset_per_dimension: dimension " +
                                         std::to_string(d) + " fits the response exactly");
            profile.log_bf[d] = std::numeric_limits<double>::infinity();
            continue;
        }
        profile.log_bf[d] = log_bayes_factor(BayesFactorInput(n, dataset.k0(), d, q));
    }
    return profile;
}

ModelIndicator hpm_via_profile(const DimensionProfile& profile, const PriorFamily& family,
                               const Dataset& dataset) {
    if (profile.k != dataset.k())
        throw DataError("hpm_via_profile: profile does not match dataset");
    std::vector<double> lp = profile_log_posterior_ratios(profile, family);
    int best_d = 0;
    for (int d = 1; d <= profile.k; ++d) {
        if (!std::isfinite(profile.sse[d])) continue;
        if (lp[d] > lp[best_d]) best_d = d;  // strict: ties keep the smaller dimension
    }
    return profile.best[best_d];
}

std::vector<double> profile_log_posterior_ratios(const DimensionProfile& profile,
                                                 const PriorFamily& family) {
    std::vector<double> log_prior = per_dimension_log_priors(family, profile.k);
    std::vector<double> out(profile.k + 1, -std::numeric_limits<double>::infinity());
    for (int d = 0; d <= profile.k; ++d) {
        if (!std::isfinite(profile.sse[d])) continue;
        out[d] = profile.log_bf[d] + log_prior[d] - log_prior[0];
    }
    return out;
}

ModelIndicator mpm_from_inclusions(const std::vector<double>& inclusion_probs) {
    int k = static_cast<int>(inclusion_probs.size());
    ModelIndicator m(k);
    for (int j = 0; j < k; ++j) {
        double p = inclusion_probs[j];
        if (!(p >= 0.0) || !(p <= 1.0))
            throw DataError("mpm_from_inclusions: probabilities must lie in [0, 1]");
        if (p > 0.5) m.set(j, true);
    }
    return m;
}

}  // namespace bvs
