#include "wrps/label.hpp"

#include <algorithm>
#include <stdexcept>

namespace wrps {

bool right_extends(const Rule& rule, std::span<const State> a, std::span<const State> b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("right_extends: labels must be non-empty and of equal length");
    }
    const std::size_t tau = a.size();
    for (std::size_t i = 0; i < tau; ++i) {
        if (rule(a[i], b[i]) != b[(i + 1) % tau]) {
            return false;
        }
    }
    return true;
}

std::vector<Label> out_neighbors(const Rule& rule, std::span<const State> a) {
    const std::size_t tau = a.size();
    std::vector<Label> out;
    if (tau == 0) {
        return out;
    }
    Label b(tau);
    for (int b0 = 0; b0 < rule.n(); ++b0) {
        b[0] = static_cast<State>(b0);
        for (std::size_t i = 0; i + 1 < tau; ++i) {
            b[i + 1] = rule(a[i], b[i]);
        }
        if (rule(a[tau - 1], b[tau - 1]) == b[0]) {
            out.push_back(b);
        }
    }
    return out;
}

LabelCodec::LabelCodec(std::vector<State> alphabet, int tau, int n)
    : alphabet_(std::move(alphabet)), index_of_(static_cast<std::size_t>(n), -1), tau_(tau), size_(0) {
    if (tau < 1) {
        throw std::invalid_argument("label length must be positive");
    }
    std::ranges::sort(alphabet_);
    const auto dup = std::ranges::unique(alphabet_);
    alphabet_.erase(dup.begin(), dup.end());
    if (alphabet_.empty()) {
        throw std::invalid_argument("label alphabet is empty");
    }
    for (std::size_t k = 0; k < alphabet_.size(); ++k) {
        if (alphabet_[k] >= n) {
            throw std::invalid_argument("label alphabet state out of range");
        }
        index_of_[alphabet_[k]] = static_cast<int>(k);
    }
    size_ = ipow(alphabet_.size(), static_cast<unsigned>(tau));
}

Label LabelCodec::decode(std::uint64_t code) const {
    Label out(static_cast<std::size_t>(tau_));
    const std::uint64_t k = alphabet_.size();
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = alphabet_[code % k];
        code /= k;
    }
    return out;
}

std::uint64_t LabelCodec::encode(std::span<const State> label) const {
    std::uint64_t code = 0;
    for (State v : label) {
        const int idx = v < index_of_.size() ? index_of_[v] : -1;
        if (idx < 0) {
            return size_;
        }
        code = code * alphabet_.size() + static_cast<std::uint64_t>(idx);
    }
    return code;
}

}  // namespace wrps
