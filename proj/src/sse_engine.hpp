#pragma once

#include <vector>

#include "bvs/glm.hpp"

// Fast submodel SSE via Cholesky on the Gram matrix of the selected columns.
// A speed path for the samplers; agreement with the QR route is covered by
// tests (about 1e-10 relative on well-conditioned designs). Falls back to QR
// if a pivot collapses.

namespace bvs::detail {

class SseEngine {
  public:
    explicit SseEngine(const Dataset& dataset, int gram_cap = 1024);

    /// SSE of the model containing X0 plus the given candidate indices.
    double sse_of(const std::vector<int>& candidates) const;

  private:
    double dot_aa(int i, int j) const;  // Gram entry over combined columns
    double dot_ay(int i) const;

    const Dataset& ds_;
    int p_total_;
    bool have_gram_;
    std::vector<double> gram_;  // p_total x p_total, col-major, if it fits
    std::vector<double> aty_;
    double yty_;
};

}  // namespace bvs::detail
