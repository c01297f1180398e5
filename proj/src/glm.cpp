#include "bvs/glm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace bvs {

namespace {

// In-place Householder QR on A (n x p), overwriting y with Q^T y. Returns the
// rank-revealing diagonal magnitudes. Throws on rank deficiency, naming the
// offending column via `names` when provided.
void householder_apply(Matrix& a, std::vector<double>& y,
                       const std::vector<std::string>* names) {
    int n = a.rows(), p = a.cols();
    if (p > n) throw DataError("least squares: more columns than rows");

    double max_col_norm = 0.0;
    for (int j = 0; j < p; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += a(i, j) * a(i, j);
        max_col_norm = std::max(max_col_norm, std::sqrt(s));
    }
    double tol = n * std::numeric_limits<double>::epsilon() * max_col_norm;

    for (int j = 0; j < p; ++j) {
        double norm = 0.0;
        for (int i = j; i < n; ++i) norm += a(i, j) * a(i, j);
        norm = std::sqrt(norm);
        if (norm <= tol) {
            std::string which = names && j < static_cast<int>(names->size())
                                    ? " (column '" + (*names)[j] + "')"
                                    : " (column " + std::to_string(j) + ")";
            throw DataError("least squares: rank-deficient design" + which);
        }
        double alpha = a(j, j) > 0 ? -norm : norm;
        double vjj = a(j, j) - alpha;
        a(j, j) = vjj;
        double vnorm2 = 0.0;
        for (int i = j; i < n; ++i) vnorm2 += a(i, j) * a(i, j);
        if (vnorm2 == 0.0) continue;
        for (int c = j + 1; c < p; ++c) {
            double dot = 0.0;
            for (int i = j; i < n; ++i) dot += a(i, j) * a(i, c);
            double f = 2.0 * dot / vnorm2;
            for (int i = j; i < n; ++i) a(i, c) -= f * a(i, j);
        }
        double dot = 0.0;
        for (int i = j; i < n; ++i) dot += a(i, j) * y[i];
        double f = 2.0 * dot / vnorm2;
        for (int i = j; i < n; ++i) y[i] -= f * a(i, j);
        a(j, j) = alpha;
    }
}

Matrix gather_columns(const Dataset& ds, const ModelIndicator& m,
                      std::vector<std::string>* names_out) {
    int p = ds.k0() + m.dimension();
    Matrix cols(ds.n(), p);
    int c = 0;
    for (int j = 0; j < ds.k0(); ++j, ++c) {
        std::copy(ds.x0().col(j), ds.x0().col(j) + ds.n(), cols.col(c));
        if (names_out) names_out->push_back(ds.common_names()[j]);
    }
    for (int j = 0; j < ds.k(); ++j) {
        if (!m.test(j)) continue;
        std::copy(ds.x().col(j), ds.x().col(j) + ds.n(), cols.col(c++));
        if (names_out) names_out->push_back(ds.candidate_names()[j]);
    }
    return cols;
}

}  // namespace

double least_squares_sse(const Matrix& columns, const std::vector<double>& y) {
    int n = columns.rows(), p = columns.cols();
    if (static_cast<int>(y.size()) != n) throw DataError("least squares: y length mismatch");
    std::vector<double> qty = y;
    if (p > 0) {
        Matrix a = columns;
        householder_apply(a, qty, nullptr);
    }
    double s = 0.0;
    for (int i = p; i < n; ++i) s += qty[i] * qty[i];
    return s;
}

Dataset::Dataset(std::vector<double> y, Matrix x0, Matrix x, std::string response_name,
                 std::vector<std::string> common_names, std::vector<std::string> candidate_names)
    : n_(static_cast<int>(y.size())),
      k0_(x0.cols()),
      k_(x.cols()),
      y_(std::move(y)),
      x0_(std::move(x0)),
      x_(std::move(x)),
      response_name_(std::move(response_name)),
      common_names_(std::move(common_names)),
      candidate_names_(std::move(candidate_names)) {
    if (n_ == 0) throw DataError("Dataset: empty response");
    if (x0_.rows() != n_ || x_.rows() != n_) throw DataError("Dataset: row count mismatch");
    if (k_ < 1) throw DataError("Dataset: no candidate columns");
    if (n_ <= k0_ + k_)
        throw DataError("Dataset: need n > k0 + k (" + std::to_string(n_) +
                        " rows for k0 + k = " + std::to_string(k0_ + k_) + ")");

    // Full-rank check of (X0 X) and the null-model SSE in one pass each.
    Matrix full(n_, k0_ + k_);
    std::vector<std::string> names;
    for (int j = 0; j < k0_; ++j) {
        std::copy(x0_.col(j), x0_.col(j) + n_, full.col(j));
        names.push_back(common_names_[j]);
    }
    for (int j = 0; j < k_; ++j) {
        std::copy(x_.col(j), x_.col(j) + n_, full.col(k0_ + j));
        names.push_back(candidate_names_[j]);
    }
    std::vector<double> qty = y_;
    householder_apply(full, qty, &names);

    Matrix x0copy = x0_;
    std::vector<double> qty0 = y_;
    if (k0_ > 0) householder_apply(x0copy, qty0, &names);
    sse_null_ = 0.0;
    for (int i = k0_; i < n_; ++i) sse_null_ += qty0[i] * qty0[i];
    if (!(sse_null_ > 0.0))
        throw DataError("Dataset: null-model SSE is zero; the response lies in span(X0)");
}

FitStatistics sse(const Dataset& dataset, const ModelIndicator& m) {
    if (m.k() != dataset.k()) throw DataError("sse: indicator length does not match dataset");
    FitStatistics out;
    out.n = dataset.n();
    out.k0 = dataset.k0();
    out.dim = m.dimension();
    out.sse_null = dataset.sse_null();
    if (out.dim == 0) {
        out.sse_gamma = out.sse_null;
        return out;
    }
    Matrix cols = gather_columns(dataset, m, nullptr);
    out.sse_gamma = least_squares_sse(cols, dataset.y());
    return out;
}

double delta_sse(const Dataset& dataset, const ModelIndicator& m, int j) {
    ModelIndicator toggled = m;
    toggled.set(j, !m.test(j));
    return sse(dataset, toggled).sse_gamma;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, int row, const std::string& column) {
    std::string t = trim(field);
    if (t.empty() || t == "NA" || t == "na" || t == "NaN")
        throw DataError("csv: missing value in column '" + column + "' at data row " +
                        std::to_string(row));
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw DataError("csv: non-numeric value '" + t + "' in column '" + column +
                        "' at data row " + std::to_string(row));
    }
    if (pos != t.size() || !std::isfinite(v))
        throw DataError("csv: non-numeric value '" + t + "' in column '" + column +
                        "' at data row " + std::to_string(row));
    return v;
}

bool is_constant(const std::vector<double>& col) {
    for (double v : col)
        if (v != col.front()) return false;
    return true;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::vector<std::string>& k0_columns,
                 const std::string& response) {
    std::ifstream in(path);
    if (!in) throw DataError("csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("csv: empty file '" + path + "'");
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);

    std::vector<std::vector<double>> columns(header.size());
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw DataError("csv: row " + std::to_string(row) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        for (std::size_t c = 0; c < fields.size(); ++c)
            columns[c].push_back(parse_number(fields[c], row, header[c]));
    }
    if (row == 0) throw DataError("csv: no data rows in '" + path + "'");

    auto find_column = [&](const std::string& name) {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return static_cast<int>(c);
        throw DataError("csv: column '" + name + "' not found in '" + path + "'");
    };

    int y_idx = find_column(response);
    std::vector<int> k0_idx;
    bool has_constant_common = false;
    for (const auto& name : k0_columns) {
        int idx = find_column(name);
        k0_idx.push_back(idx);
        if (is_constant(columns[idx])) has_constant_common = true;
    }

    int n = row;
    bool add_intercept = !has_constant_common;
    int k0 = static_cast<int>(k0_idx.size()) + (add_intercept ? 1 : 0);

    std::vector<std::string> common_names;
    Matrix x0(n, k0);
    int c0 = 0;
    if (add_intercept) {
        for (int i = 0; i < n; ++i) x0(i, 0) = 1.0;
        common_names.push_back("(intercept)");
        c0 = 1;
    }
    for (std::size_t j = 0; j < k0_idx.size(); ++j, ++c0) {
        for (int i = 0; i < n; ++i) x0(i, c0) = columns[k0_idx[j]][i];
        common_names.push_back(header[k0_idx[j]]);
    }

    std::vector<int> cand_idx;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (static_cast<int>(c) == y_idx) continue;
        if (std::find(k0_idx.begin(), k0_idx.end(), static_cast<int>(c)) != k0_idx.end()) continue;
        cand_idx.push_back(static_cast<int>(c));
    }
    if (cand_idx.empty()) throw DataError("csv: no candidate columns left in '" + path + "'");

    Matrix x(n, static_cast<int>(cand_idx.size()));
    std::vector<std::string> cand_names;
    for (std::size_t j = 0; j < cand_idx.size(); ++j) {
        for (int i = 0; i < n; ++i) x(i, static_cast<int>(j)) = columns[cand_idx[j]][i];
        cand_names.push_back(header[cand_idx[j]]);
    }

    return Dataset(std::move(columns[y_idx]), std::move(x0), std::move(x), header[y_idx],
                   std::move(common_names), std::move(cand_names));
}

}  // namespace bvs
