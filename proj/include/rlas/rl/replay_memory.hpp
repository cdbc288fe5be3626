#pragma once

#include <algorithm>
#include <deque>
#include <vector>

#include "rlas/rl/environment.hpp"

namespace rlas::rl {

/// Bounded FIFO of transitions; the oldest entry is evicted when full.
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw ConfigError("replay capacity must be positive");
    }

    void push(const Transition& t) {
        if (buffer_.size() == capacity_) buffer_.pop_front();
        buffer_.push_back(t);
    }

    std::size_t size() const { return buffer_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return buffer_.empty(); }
    const Transition& operator[](std::size_t i) const { return buffer_[i]; }

    /// min(batch, size()) distinct transitions (Floyd's sampling).
    std::vector<Transition> sample(std::size_t batch, Rng& rng) const {
        const std::size_t n = buffer_.size();
        const std::size_t k = std::min(batch, n);
        std::vector<std::size_t> picked;
        picked.reserve(k);
        for (std::size_t j = n - k; j < n; ++j) {
            const auto t = static_cast<std::size_t>(rng.below(j + 1));
            const bool seen = std::find(picked.begin(), picked.end(), t) != picked.end();
            picked.push_back(seen ? j : t);
        }
        std::vector<Transition> out;
        out.reserve(k);
        for (std::size_t i : picked) out.push_back(buffer_[i]);
        return out;
    }

private:
    std::size_t capacity_;
    std::deque<Transition> buffer_;
};

} // namespace rlas::rl
