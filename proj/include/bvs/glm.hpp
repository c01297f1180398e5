#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bvs/errors.hpp"
#include "bvs/model_space.hpp"

namespace bvs {

/// Dense column-major matrix. Just enough linear algebra for least squares.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return data_[std::size_t(j) * rows_ + i]; }
    double operator()(int i, int j) const { return data_[std::size_t(j) * rows_ + i]; }
    double* col(int j) { return data_.data() + std::size_t(j) * rows_; }
    const double* col(int j) const { return data_.data() + std::size_t(j) * rows_; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Per-model fit summary feeding the Bayes factor.
struct FitStatistics {
    double sse_gamma = 0.0;
    double sse_null = 0.0;
    int n = 0;
    int k0 = 0;
    int dim = 0;
};

/// Regression data: response y, common covariates X0 (always in the model)
/// and k candidate covariates X. Immutable after construction; (X0 X) is
/// verified to have full column rank and n must exceed k0 + k.
class Dataset {
  public:
    Dataset(std::vector<double> y, Matrix x0, Matrix x, std::string response_name,
            std::vector<std::string> common_names, std::vector<std::string> candidate_names);

    int n() const { return n_; }
    int k0() const { return k0_; }
    int k() const { return k_; }
    const std::vector<double>& y() const { return y_; }
    const Matrix& x0() const { return x0_; }
    const Matrix& x() const { return x_; }
    double sse_null() const { return sse_null_; }
    const std::string& response_name() const { return response_name_; }
    const std::vector<std::string>& common_names() const { return common_names_; }
    const std::vector<std::string>& candidate_names() const { return candidate_names_; }

  private:
    int n_ = 0, k0_ = 0, k_ = 0;
    std::vector<double> y_;
    Matrix x0_, x_;
    double sse_null_ = 0.0;
    std::string response_name_;
    std::vector<std::string> common_names_;
    std::vector<std::string> candidate_names_;
};

/// Reads a UTF-8 CSV with a header row: comma separated, '.' decimal, NA
/// rejected. The response column and the common (k0) columns are selected by
/// name; every other column becomes a candidate. An intercept column is
/// prepended to X0 unless one of the declared common columns is constant.
Dataset load_csv(const std::string& path, const std::vector<std::string>& k0_columns,
                 const std::string& response);

/// SSE of the least-squares fit of y on (X0, X_m) via Householder QR.
FitStatistics sse(const Dataset& dataset, const ModelIndicator& m);

/// SSE of m with variable j toggled. Consistent with a fresh decomposition to
/// about 1e-8 relative.
double delta_sse(const Dataset& dataset, const ModelIndicator& m, int j);

/// Residual sum of squares of y regressed on the given columns (Householder
/// QR, rank-checked). Column count may be zero.
double least_squares_sse(const Matrix& columns, const std::vector<double>& y);

}  // namespace bvs
