#include "garling/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace garling {

FiniteSequence FiniteSequence::from_entries(std::vector<Entry> entries) {
    std::erase_if(entries, [](const Entry& e) { return e.value == 0.0; });
    for (const Entry& e : entries) {
        if (e.index < 1) {
            throw std::invalid_argument("sequence indices are 1-based; got " +
                                        std::to_string(e.index));
        }
        if (!std::isfinite(e.value)) {
            throw std::invalid_argument("sequence values must be finite");
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].index == entries[i - 1].index) {
            throw std::invalid_argument("duplicate index " + std::to_string(entries[i].index));
        }
    }
    FiniteSequence f;
    f.entries_ = std::move(entries);
    return f;
}

FiniteSequence FiniteSequence::from_dense(const std::vector<double>& dense) {
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (!std::isfinite(dense[i])) {
            throw std::invalid_argument("sequence values must be finite");
        }
        if (dense[i] != 0.0) {
            entries.push_back({static_cast<std::int64_t>(i) + 1, dense[i]});
        }
    }
    FiniteSequence f;
    f.entries_ = std::move(entries);
    return f;
}

FiniteSequence FiniteSequence::constant_on(std::int64_t first, std::int64_t count, double v) {
    if (first < 1) throw std::invalid_argument("interval start must be >= 1");
    if (count < 0) throw std::invalid_argument("interval length must be >= 0");
    FiniteSequence f;
    if (v == 0.0) return f;
    if (!std::isfinite(v)) throw std::invalid_argument("sequence values must be finite");
    f.entries_.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        f.entries_.push_back({first + i, v});
    }
    return f;
}

FiniteSequence FiniteSequence::indicator(std::vector<std::int64_t> indices) {
    std::vector<Entry> entries;
    entries.reserve(indices.size());
    for (std::int64_t i : indices) entries.push_back({i, 1.0});
    return from_entries(std::move(entries));
}

FiniteSequence FiniteSequence::unit(std::int64_t index, double v) {
    return from_entries({{index, v}});
}

std::vector<std::int64_t> FiniteSequence::support() const {
    std::vector<std::int64_t> out;
    out.reserve(entries_.size());
    for (const Entry& e : entries_) out.push_back(e.index);
    return out;
}

double FiniteSequence::at(std::int64_t index) const {
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), index,
        [](const Entry& e, std::int64_t i) { return e.index < i; });
    if (it != entries_.end() && it->index == index) return it->value;
    return 0.0;
}

std::int64_t FiniteSequence::max_index() const {
    return entries_.empty() ? 0 : entries_.back().index;
}

std::int64_t FiniteSequence::min_index() const {
    return entries_.empty() ? 0 : entries_.front().index;
}

double FiniteSequence::max_abs_value() const {
    double m = 0.0;
    for (const Entry& e : entries_) m = std::max(m, std::abs(e.value));
    return m;
}

FiniteSequence FiniteSequence::scaled(double c) const {
    if (!std::isfinite(c)) throw std::invalid_argument("scale factor must be finite");
    FiniteSequence f;
    if (c == 0.0) return f;
    f.entries_ = entries_;
    for (Entry& e : f.entries_) e.value *= c;
    return f;
}

FiniteSequence FiniteSequence::without_index(std::int64_t index) const {
    FiniteSequence f;
    f.entries_.reserve(entries_.size());
    for (const Entry& e : entries_) {
        if (e.index != index) f.entries_.push_back(e);
    }
    return f;
}

FiniteSequence FiniteSequence::disjoint_sum(const FiniteSequence& a, const FiniteSequence& b) {
    std::vector<Entry> merged;
    merged.reserve(a.entries_.size() + b.entries_.size());
    std::size_t i = 0, j = 0;
    while (i < a.entries_.size() || j < b.entries_.size()) {
        if (j == b.entries_.size() ||
            (i < a.entries_.size() && a.entries_[i].index < b.entries_[j].index)) {
            merged.push_back(a.entries_[i++]);
        } else if (i == a.entries_.size() || b.entries_[j].index < a.entries_[i].index) {
            merged.push_back(b.entries_[j++]);
        } else {
            throw std::invalid_argument("supports overlap at index " +
                                        std::to_string(a.entries_[i].index));
        }
    }
    FiniteSequence f;
    f.entries_ = std::move(merged);
    return f;
}

std::vector<double> decreasing_rearrangement(const FiniteSequence& f) {
    std::vector<double> mags;
    mags.reserve(f.support_size());
    for (const auto& e : f.entries()) mags.push_back(std::abs(e.value));
    // stable: ties keep the lower original index first
    std::stable_sort(mags.begin(), mags.end(), std::greater<double>());
    return mags;
}

Selection Selection::of(std::vector<std::int64_t> indices) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 1) {
            throw std::invalid_argument("selection indices are 1-based");
        }
        if (i > 0 && indices[i] <= indices[i - 1]) {
            throw std::invalid_argument("selection indices must be strictly increasing");
        }
    }
    Selection s;
    s.indices = std::move(indices);
    return s;
}

SignPattern SignPattern::alternating() {
    SignPattern s;
    s.cycle_ = {1.0, -1.0};
    return s;
}

SignPattern SignPattern::from_map(std::map<std::int64_t, double> signs) {
    for (const auto& [index, v] : signs) {
        if (index < 1) throw std::invalid_argument("sign indices are 1-based");
        if (std::abs(std::abs(v) - 1.0) > 1e-15) {
            throw std::invalid_argument("signs must be +1 or -1");
        }
    }
    SignPattern s;
    s.overrides_ = std::move(signs);
    return s;
}

SignPattern SignPattern::cycled(std::string_view plus_minus) {
    if (plus_minus.empty()) throw std::invalid_argument("empty sign pattern");
    SignPattern s;
    for (char c : plus_minus) {
        if (c == '+') {
            s.cycle_.push_back(1.0);
        } else if (c == '-') {
            s.cycle_.push_back(-1.0);
        } else {
            throw std::invalid_argument("sign pattern may contain only '+' and '-'");
        }
    }
    return s;
}

double SignPattern::at(std::int64_t index) const {
    if (index < 1) throw std::invalid_argument("sign indices are 1-based");
    if (!cycle_.empty()) {
        return cycle_[static_cast<std::size_t>((index - 1) % static_cast<std::int64_t>(cycle_.size()))];
    }
    const auto it = overrides_.find(index);
    return it == overrides_.end() ? 1.0 : it->second;
}

} // namespace garling
