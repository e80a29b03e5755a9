#include "garling/operators.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace garling {

IncreasingMap IncreasingMap::identity() {
    IncreasingMap m;
    m.fn_ = [](std::int64_t n) { return n; };
    return m;
}

IncreasingMap IncreasingMap::affine(std::int64_t step, std::int64_t offset) {
    if (step < 1) throw std::invalid_argument("affine map needs step >= 1");
    if (step + offset < 1) throw std::invalid_argument("affine map needs phi(1) >= 1");
    IncreasingMap m;
    m.fn_ = [step, offset](std::int64_t n) { return step * n + offset; };
    return m;
}

IncreasingMap IncreasingMap::from_selection(Selection s) {
    IncreasingMap m;
    m.domain_size_ = static_cast<std::int64_t>(s.indices.size());
    m.fn_ = [indices = std::move(s.indices)](std::int64_t n) {
        if (n > static_cast<std::int64_t>(indices.size())) {
            throw std::out_of_range("index map domain has size " +
                                    std::to_string(indices.size()));
        }
        return indices[static_cast<std::size_t>(n - 1)];
    };
    return m;
}

IncreasingMap IncreasingMap::from_function(std::function<std::int64_t(std::int64_t)> fn) {
    IncreasingMap m;
    m.fn_ = std::move(fn);
    return m;
}

std::int64_t IncreasingMap::operator()(std::int64_t n) const {
    if (n < 1) throw std::invalid_argument("index map arguments are 1-based");
    const std::int64_t v = fn_(n);
    // Any strictly increasing positive-integer map satisfies phi(n) >= n;
    // this catches most broken callables without memoizing evaluations.
    if (v < n) {
        throw std::invalid_argument("map is not strictly increasing: phi(" +
                                    std::to_string(n) + ") = " + std::to_string(v));
    }
    return v;
}

std::optional<std::int64_t> IncreasingMap::domain_size() const { return domain_size_; }

IndexSet IndexSet::of(std::vector<std::int64_t> sorted_indices) {
    for (std::size_t i = 0; i < sorted_indices.size(); ++i) {
        if (sorted_indices[i] < 1) throw std::invalid_argument("indices are 1-based");
        if (i > 0 && sorted_indices[i] <= sorted_indices[i - 1]) {
            throw std::invalid_argument("index set must be strictly increasing");
        }
    }
    IndexSet s;
    s.indices_ = std::move(sorted_indices);
    return s;
}

IndexSet IndexSet::interval(std::int64_t lo, std::int64_t hi) {
    if (lo < 1) throw std::invalid_argument("interval start must be >= 1");
    if (hi < lo) {
        throw std::invalid_argument("interval end " + std::to_string(hi) +
                                    " precedes start " + std::to_string(lo) +
                                    "; use an explicit empty set instead");
    }
    IndexSet s;
    s.is_interval_ = true;
    s.lo_ = lo;
    s.hi_ = hi;
    return s;
}

bool IndexSet::contains(std::int64_t index) const {
    if (is_interval_) return index >= lo_ && index <= hi_;
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

FiniteSequence apply_signs(const SignPattern& eps, const FiniteSequence& f) {
    std::vector<FiniteSequence::Entry> out;
    out.reserve(f.support_size());
    for (const auto& e : f.entries()) {
        out.push_back({e.index, eps.at(e.index) * e.value});
    }
    return FiniteSequence::from_entries(std::move(out));
}

FiniteSequence project(const IndexSet& A, const FiniteSequence& f) {
    std::vector<FiniteSequence::Entry> out;
    for (const auto& e : f.entries()) {
        if (A.contains(e.index)) out.push_back(e);
    }
    return FiniteSequence::from_entries(std::move(out));
}

FiniteSequence extract(const IncreasingMap& phi, const FiniteSequence& f) {
    std::vector<FiniteSequence::Entry> out;
    const std::int64_t top = f.max_index();
    const std::int64_t bound = phi.domain_size().value_or(top); // phi(n) >= n caps the scan
    for (std::int64_t n = 1; n <= bound; ++n) {
        const std::int64_t target = phi(n);
        if (target > top) break;
        const double v = f.at(target);
        if (v != 0.0) out.push_back({n, v});
    }
    return FiniteSequence::from_entries(std::move(out));
}

FiniteSequence spread(const IncreasingMap& phi, const FiniteSequence& f) {
    if (const auto size = phi.domain_size()) {
        if (f.max_index() > *size) {
            throw std::invalid_argument("map domain (size " + std::to_string(*size) +
                                        ") does not cover supp(f)");
        }
    }
    std::vector<FiniteSequence::Entry> out;
    out.reserve(f.support_size());
    std::int64_t prev = 0;
    for (const auto& e : f.entries()) {
        const std::int64_t target = phi(e.index);
        if (target <= prev) {
            throw std::invalid_argument("map failed to be strictly increasing on supp(f)");
        }
        prev = target;
        out.push_back({target, e.value});
    }
    return FiniteSequence::from_entries(std::move(out));
}

FiniteSequence left_shift(const FiniteSequence& f) {
    std::vector<FiniteSequence::Entry> out;
    out.reserve(f.support_size());
    std::int64_t slot = 0;
    for (const auto& e : f.entries()) {
        out.push_back({++slot, e.value});
    }
    return FiniteSequence::from_entries(std::move(out));
}

} // namespace garling
