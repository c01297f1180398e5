#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvs/errors.hpp"

namespace bvs {

/// Inclusion mask over k candidate variables, packed into 64-bit words so k in
/// the thousands stays cheap. Variable indices are 0-based and match the
/// dataset's candidate column order. Immutable value semantics: copy freely.
class ModelIndicator {
  public:
    explicit ModelIndicator(int k);
    ModelIndicator(int k, const std::vector<int>& included);

    int k() const { return k_; }
    bool test(int j) const;
    void set(int j, bool on);
    int dimension() const;

    /// Indices of the included variables, ascending.
    std::vector<int> included() const;

    /// "0110..." with variable 0 first.
    std::string to_string() const;

    bool operator==(const ModelIndicator& other) const = default;

    /// Lexicographic order on the bit string (variable 0 first, 0 before 1).
    /// Used for deterministic tie breaks.
    static bool lex_less(const ModelIndicator& a, const ModelIndicator& b);

    const std::vector<std::uint64_t>& words() const { return words_; }

  private:
    friend class ModelStream;
    int k_;
    std::vector<std::uint64_t> words_;
};

/// Streams all 2^k masks in binary-counting order (variable 0 is the fastest
/// toggling bit). Single consumer; independent streams may run concurrently.
class ModelStream {
  public:
    ModelStream(int k, int cap = kDefaultEnumerationCap);

    /// Advances to the next model; returns false when exhausted.
    bool next(ModelIndicator& out);

    static constexpr int kDefaultEnumerationCap = 25;

  private:
    int k_;
    bool done_ = false;
    bool started_ = false;
    ModelIndicator current_;
};

/// ln C(k, d) via log-gamma.
double log_choose(int k, int d);

/// ln N_k where N_k counts the "large" models: sizes from 1 + k/2 (k even) or
/// (k+1)/2 (k odd) up to k. Computed by log-sum-exp over the binomial tail.
double big_model_count(int k);

}  // namespace bvs
