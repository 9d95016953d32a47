#pragma once

#include <algorithm>
#include <variant>
#include <vector>

#include "equidyn/systems.hpp"

namespace equidyn::detail {

// Checks whether the word on W_rho has the given resolution-m column trace,
// stepping in place and stopping at the first mismatch. Holds a reference to
// the target; not safe to share across threads.
class TraceMatcher {
public:
    TraceMatcher(const System& sys, const std::vector<Word>& target, int m, int rho)
        : sys_(sys), target_(target), m_(m), rho_(rho),
          sided_(system_sidedness(sys)), a_(window_size(sided_, rho)), b_(a_.size())
    {
        if (const auto* odo = std::get_if<Odometer>(&sys_)) {
            for (std::size_t i = 0; i < a_.size(); ++i) {
                sizes_.push_back(odo->size_at(static_cast<int>(i)));
            }
        }
    }

    bool operator()(const Word& w)
    {
        std::copy(w.begin(), w.end(), a_.begin());
        int radius = rho_;
        for (std::size_t t = 0;; ++t) {
            const std::size_t low = sided_ == Sidedness::TwoSided
                                        ? static_cast<std::size_t>(radius - m_)
                                        : 0;
            if (!std::equal(target_[t].begin(), target_[t].end(), a_.begin() + low)) {
                return false;
            }
            if (t + 1 == target_.size()) {
                return true;
            }
            radius = advance(radius);
        }
    }

private:
    int advance(int radius)
    {
        if (const auto* ca = std::get_if<CellularAutomaton>(&sys_)) {
            const int out_radius = radius - ca->radius();
            const std::size_t out_len = window_size(sided_, out_radius);
            for (std::size_t j = 0; j < out_len; ++j) {
                b_[j] = ca->apply(a_.data() + j);
            }
            std::swap(a_, b_);
            return out_radius;
        }
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (a_[i] + 1 < sizes_[i]) {
                ++a_[i];
                break;
            }
            a_[i] = 0;
        }
        return radius;
    }

    const System& sys_;
    const std::vector<Word>& target_;
    int m_;
    int rho_;
    Sidedness sided_;
    Word a_;
    Word b_;
    std::vector<int> sizes_;
};

} // namespace equidyn::detail
