#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "bvs/errors.hpp"

// Self-contained special functions and quadrature. Everything here is a pure
// function of its arguments and safe to call from any thread.

namespace bvs::num {

enum class QuadScheme {
    gauss_chebyshev_first_kind,
    adaptive_subdivision,
};

/// Parameters for integrate(). The Gauss-Chebyshev scheme uses a fixed node
/// count; the adaptive scheme bisects until the internal error estimate is
/// below max(abs_tol, rel_tol * |result|) or the evaluation budget runs out.
struct QuadratureSpec {
    int node_count = 201;
    QuadScheme scheme = QuadScheme::adaptive_subdivision;
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    std::size_t max_evals = 1'000'000;

    void validate() const;
};

/// ln Gamma(x) for x > 0. Relative error below 1e-13.
double log_gamma(double x);

/// ln B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
/// Absolute error below 1e-12; I_0 = 0 and I_1 = 1 exactly.
double reg_inc_beta(double x, double a, double b);

/// ln I_x(a, b). Usable where I underflows (e.g. a in the thousands).
double log_reg_inc_beta(double x, double a, double b);

/// Standard normal CDF, absolute error below 1e-14.
double normal_cdf(double z);

/// ln Phi(z), stable for z far into the left tail.
double log_normal_cdf(double z);

/// ln cosh(x) without overflow.
double log_cosh(double x);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

/// log of the sum of exponentials of the given values.
double log_sum_exp(std::span<const double> values);

/// Gauss-Chebyshev (first kind) nodes mapped to (0, 1). The matching rule for
/// the arcsine weight 1/(pi sqrt(v(1-v))) uses equal weights 1/n.
const std::vector<double>& chebyshev_unit_nodes(int n);

/// Gauss-Legendre nodes and weights mapped to (0, 1).
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_unit(int n);

/// Integral of f over (lo, hi).
///
/// Adaptive scheme: Gauss-Kronrod 7/15 pairs with recursive bisection of the
/// worst interval. Throws IntegrationError (carrying the best estimate and
/// error bound) when the budget is exhausted before convergence.
///
/// Gauss-Chebyshev scheme: fixed-order rule that absorbs an arcsine-type
/// endpoint weight; exact for p(v) * arcsine(v) with deg p <= 2n-1.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec);

}  // namespace bvs::num
