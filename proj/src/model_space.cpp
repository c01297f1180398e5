#include "bvs/model_space.hpp"

#include <bit>

#include "bvs/numerics.hpp"

namespace bvs {

ModelIndicator::ModelIndicator(int k) : k_(k) {
    if (k < 1) throw DataError("ModelIndicator: k must be positive");
    words_.assign((static_cast<std::size_t>(k) + 63) / 64, 0);
}

ModelIndicator::ModelIndicator(int k, const std::vector<int>& included) : ModelIndicator(k) {
    for (int j : included) set(j, true);
}

bool ModelIndicator::test(int j) const {
    if (j < 0 || j >= k_) throw DataError("ModelIndicator: variable index out of range");
    return (words_[j / 64] >> (j % 64)) & 1u;
}

void ModelIndicator::set(int j, bool on) {
    if (j < 0 || j >= k_) throw DataError("ModelIndicator: variable index out of range");
    std::uint64_t mask = std::uint64_t{1} << (j % 64);
    if (on)
        words_[j / 64] |= mask;
    else
        words_[j / 64] &= ~mask;
}

int ModelIndicator::dimension() const {
    int d = 0;
    for (std::uint64_t w : words_) d += std::popcount(w);
    return d;
}

std::vector<int> ModelIndicator::included() const {
    std::vector<int> out;
    for (int j = 0; j < k_; ++j)
        if (test(j)) out.push_back(j);
    return out;
}

std::string ModelIndicator::to_string() const {
    std::string s(k_, '0');
    for (int j = 0; j < k_; ++j)
        if (test(j)) s[j] = '1';
    return s;
}

bool ModelIndicator::lex_less(const ModelIndicator& a, const ModelIndicator& b) {
    if (a.k_ != b.k_) throw DataError("ModelIndicator::lex_less: mismatched k");
    for (std::size_t w = 0; w < a.words_.size(); ++w) {
        std::uint64_t diff = a.words_[w] ^ b.words_[w];
        if (diff) {
            int bit = std::countr_zero(diff);
            return !((a.words_[w] >> bit) & 1u);
        }
    }
    return false;
}

ModelStream::ModelStream(int k, int cap) : k_(k), current_(std::max(k, 1)) {
    if (k < 1) throw DataError("ModelStream: k must be positive");
    if (k > cap)
        throw CapacityError("ModelStream: k = " + std::to_string(k) + " exceeds enumeration cap " +
                            std::to_string(cap) + "; use the sampling path instead");
}

bool ModelStream::next(ModelIndicator& out) {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        out = current_;
        return true;
    }
    // Binary increment over the mask words.
    auto& words = current_.words_;
    int remaining_bits = k_;
    bool carried = true;
    for (std::size_t w = 0; w < words.size() && carried; ++w) {
        int bits = remaining_bits >= 64 ? 64 : remaining_bits;
        std::uint64_t limit_mask =
            bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
        std::uint64_t v = (words[w] + 1) & limit_mask;
        carried = (v == 0);
        words[w] = v;
        remaining_bits -= bits;
    }
    if (carried) {
        done_ = true;
        return false;
    }
    out = current_;
    return true;
}

double log_choose(int k, int d) {
    if (k < 0 || d < 0 || d > k) throw DataError("log_choose: need 0 <= d <= k");
    return num::log_gamma(k + 1.0) - num::log_gamma(d + 1.0) - num::log_gamma(k - d + 1.0);
}

double big_model_count(int k) {
    if (k < 1) throw DataError("big_model_count: k must be positive");
    int lo = (k % 2 == 0) ? 1 + k / 2 : (k + 1) / 2;
    std::vector<double> terms;
    terms.reserve(k - lo + 1);
    for (int i = lo; i <= k; ++i) terms.push_back(log_choose(k, i));
    return num::log_sum_exp(terms);
}

}  // namespace bvs
