#include "garling/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace garling {

struct BlockSequence::Impl {
    std::optional<std::int64_t> count;
    Generator gen;       // null for explicit families
    SizeFn size_fn;
    MaxAbsFn max_abs_fn;
    bool maxima_nonincreasing = false;

    mutable std::mutex mutex;
    mutable std::map<std::int64_t, FiniteSequence> blocks;
    mutable std::map<std::int64_t, double> max_abs_cache;
    mutable std::vector<std::int64_t> boundaries{1}; // boundaries[k] = packed boundary of block k+1

    void check_index(std::int64_t n) const {
        if (n < 1) throw std::invalid_argument("block indices are 1-based");
        if (count && n > *count) {
            throw std::out_of_range("block family has " + std::to_string(*count) +
                                    " blocks; block " + std::to_string(n) + " requested");
        }
    }

    // Caller holds the mutex.
    const FiniteSequence& fetch_block_locked(std::int64_t n, WorkBudget& budget) const {
        auto it = blocks.find(n);
        if (it != blocks.end()) return it->second;
        if (!gen) throw std::logic_error("explicit block family is missing block " +
                                         std::to_string(n));
        budget.charge(1);
        FiniteSequence y = gen(n, budget);
        if (y.empty()) {
            throw std::domain_error("block " + std::to_string(n) + " is zero");
        }
        // Validate the interval layout against the nearest materialized
        // neighbors (intermediate blocks may not exist yet).
        auto after = blocks.lower_bound(n);
        if (after != blocks.end() && y.max_index() >= after->second.min_index()) {
            throw std::domain_error("blocks " + std::to_string(n) + " and " +
                                    std::to_string(after->first) + " overlap or disorder");
        }
        if (after != blocks.begin()) {
            auto before = std::prev(after);
            if (before->second.max_index() >= y.min_index()) {
                throw std::domain_error("blocks " + std::to_string(before->first) + " and " +
                                        std::to_string(n) + " overlap or disorder");
            }
        }
        return blocks.emplace(n, std::move(y)).first->second;
    }
};

BlockSequence BlockSequence::from_blocks(std::vector<FiniteSequence> blocks) {
    if (blocks.empty()) throw std::invalid_argument("block family must be nonempty");
    auto impl = std::make_shared<Impl>();
    impl->count = static_cast<std::int64_t>(blocks.size());
    std::int64_t prev_max = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].empty()) {
            throw std::invalid_argument("block " + std::to_string(i + 1) + " is zero");
        }
        if (blocks[i].min_index() <= prev_max) {
            throw std::invalid_argument("block supports must occupy increasing disjoint "
                                        "intervals; violation at block " +
                                        std::to_string(i + 1));
        }
        prev_max = blocks[i].max_index();
        impl->blocks.emplace(static_cast<std::int64_t>(i) + 1, std::move(blocks[i]));
    }
    return BlockSequence(std::move(impl));
}

BlockSequence BlockSequence::lazy(std::optional<std::int64_t> count, Generator gen,
                                  SizeFn size_fn, MaxAbsFn max_abs_fn,
                                  bool maxima_nonincreasing) {
    if (!gen) throw std::invalid_argument("lazy block family needs a generator");
    if (count && *count < 1) throw std::invalid_argument("block count must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->count = count;
    impl->gen = std::move(gen);
    impl->size_fn = std::move(size_fn);
    impl->max_abs_fn = std::move(max_abs_fn);
    impl->maxima_nonincreasing = maxima_nonincreasing;
    return BlockSequence(std::move(impl));
}

std::optional<std::int64_t> BlockSequence::count() const { return impl_->count; }

bool BlockSequence::has_block(std::int64_t n) const {
    return n >= 1 && (!impl_->count || n <= *impl_->count);
}

FiniteSequence BlockSequence::block(std::int64_t n) const {
    WorkBudget unlimited = WorkBudget::unlimited();
    return block(n, unlimited);
}

FiniteSequence BlockSequence::block(std::int64_t n, WorkBudget& budget) const {
    impl_->check_index(n);
    std::lock_guard<std::mutex> lock(impl_->mutex);
    return impl_->fetch_block_locked(n, budget);
}

std::int64_t BlockSequence::support_size(std::int64_t n, WorkBudget& budget) const {
    impl_->check_index(n);
    if (impl_->size_fn) {
        budget.charge(1);
        const std::int64_t s = impl_->size_fn(n);
        if (s < 1) throw std::domain_error("block " + std::to_string(n) + " reports size < 1");
        return s;
    }
    std::lock_guard<std::mutex> lock(impl_->mutex);
    const FiniteSequence& y = impl_->fetch_block_locked(n, budget);
    return static_cast<std::int64_t>(y.support_size());
}

double BlockSequence::max_abs(std::int64_t n, WorkBudget& budget) const {
    impl_->check_index(n);
    std::lock_guard<std::mutex> lock(impl_->mutex);
    auto it = impl_->max_abs_cache.find(n);
    if (it != impl_->max_abs_cache.end()) return it->second;
    double m = 0.0;
    if (impl_->max_abs_fn) {
        m = impl_->max_abs_fn(n, budget);
    } else {
        const FiniteSequence& y = impl_->fetch_block_locked(n, budget);
        budget.charge(y.support_size());
        m = y.max_abs_value();
    }
    impl_->max_abs_cache.emplace(n, m);
    return m;
}

BlockSequence::Metadata BlockSequence::metadata(std::int64_t n, WorkBudget& budget) const {
    return Metadata{support_size(n, budget), max_abs(n, budget)};
}

std::int64_t BlockSequence::packed_boundary(std::int64_t n, WorkBudget& budget) const {
    // One more boundary than there are blocks: boundary(count + 1) is the
    // first position past the whole packed family.
    if (n < 1) throw std::invalid_argument("block indices are 1-based");
    if (impl_->count && n > *impl_->count + 1) {
        throw std::out_of_range("block family has " + std::to_string(*impl_->count) +
                                " blocks; boundary " + std::to_string(n) + " requested");
    }
    {
        std::lock_guard<std::mutex> lock(impl_->mutex);
        if (n <= static_cast<std::int64_t>(impl_->boundaries.size())) {
            return impl_->boundaries[static_cast<std::size_t>(n - 1)];
        }
    }
    // Extend outside the lock: support_size re-locks as needed.
    while (true) {
        std::int64_t have;
        std::int64_t last;
        {
            std::lock_guard<std::mutex> lock(impl_->mutex);
            have = static_cast<std::int64_t>(impl_->boundaries.size());
            last = impl_->boundaries.back();
            if (n <= have) return impl_->boundaries[static_cast<std::size_t>(n - 1)];
        }
        const std::int64_t size = support_size(have, budget);
        std::lock_guard<std::mutex> lock(impl_->mutex);
        if (static_cast<std::int64_t>(impl_->boundaries.size()) == have) {
            impl_->boundaries.push_back(last + size);
        }
    }
}

bool BlockSequence::maxima_nonincreasing() const { return impl_->maxima_nonincreasing; }

BlockSequence left_shift_blocks(const BlockSequence& bs, std::int64_t count) {
    if (count < 1) throw std::invalid_argument("need at least one block to shift");
    if (bs.count() && count > *bs.count()) {
        throw std::out_of_range("family has only " + std::to_string(*bs.count()) + " blocks");
    }
    std::vector<FiniteSequence> shifted;
    shifted.reserve(static_cast<std::size_t>(count));
    std::int64_t boundary = 1;
    for (std::int64_t n = 1; n <= count; ++n) {
        const FiniteSequence y = bs.block(n);
        std::vector<FiniteSequence::Entry> entries;
        entries.reserve(y.support_size());
        std::int64_t slot = boundary;
        for (const auto& e : y.entries()) {
            entries.push_back({slot++, e.value});
        }
        boundary = slot;
        shifted.push_back(FiniteSequence::from_entries(std::move(entries)));
    }
    return BlockSequence::from_blocks(std::move(shifted));
}

BlockClassification classify_blocks(const BlockSequence& bs, std::int64_t prefix_len,
                                    double threshold, WorkBudget& budget) {
    if (prefix_len < 1) throw std::invalid_argument("prefix length must be >= 1");
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
    if (bs.count()) prefix_len = std::min(prefix_len, *bs.count());

    BlockClassification out;
    out.threshold = threshold;
    out.per_block_max.reserve(static_cast<std::size_t>(prefix_len));
    out.running_inf.reserve(static_cast<std::size_t>(prefix_len));
    double inf = std::numeric_limits<double>::infinity();
    for (std::int64_t n = 1; n <= prefix_len; ++n) {
        const double m = bs.max_abs(n, budget);
        inf = std::min(inf, m);
        out.per_block_max.push_back(m);
        out.running_inf.push_back(inf);
    }

    using Verdict = BlockClassification::Verdict;
    if (out.running_inf.back() >= threshold) {
        out.verdict = Verdict::gliding_hump;
        return out;
    }
    if (prefix_len >= 4) {
        // Quarter the prefix; the last chunk takes the remainder.
        const std::int64_t q = prefix_len / 4;
        double qmax[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::int64_t n = 0; n < prefix_len; ++n) {
            const std::int64_t c = std::min<std::int64_t>(n / q, 3);
            qmax[c] = std::max(qmax[c], out.per_block_max[static_cast<std::size_t>(n)]);
        }
        const bool last_quarter_small = qmax[3] < threshold;
        const bool trending_down = qmax[1] >= qmax[2] && qmax[2] >= qmax[3];
        if (last_quarter_small && trending_down) {
            out.verdict = Verdict::uniformly_null_trend;
            return out;
        }
    }
    out.verdict = Verdict::inconclusive;
    return out;
}

BlockClassification classify_blocks(const BlockSequence& bs, std::int64_t prefix_len,
                                    double threshold) {
    WorkBudget unlimited = WorkBudget::unlimited();
    return classify_blocks(bs, prefix_len, threshold, unlimited);
}

namespace {

// Shared lazily computed prefix sums W_{2^{n-1}} for the dyadic family.
struct DyadicState {
    Weight w;
    double p;
    std::mutex mutex;
    WeightCursor cursor;
    std::map<std::int64_t, double> prefix_at_start; // n -> W_{2^{n-1}}

    DyadicState(Weight weight, double exponent)
        : w(weight), p(exponent), cursor(weight) {}

    double start_prefix(std::int64_t n, WorkBudget& budget) {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = prefix_at_start.find(n);
        if (it != prefix_at_start.end()) return it->second;
        const std::int64_t m = std::int64_t{1} << (n - 1);
        double W;
        if (m <= w.cache_cap()) {
            // Cached prefix sums agree with the streaming cursor bit for bit
            // (same values, same left-to-right accumulation).
            const std::int64_t fresh = std::max<std::int64_t>(m - w.materialized(), 1);
            budget.charge(static_cast<std::uint64_t>(fresh));
            W = w.prefix_sum(m);
        } else {
            W = cursor.prefix_at(m, budget); // streaming, O(1) memory
        }
        prefix_at_start.emplace(n, W);
        return W;
    }

    double coefficient(std::int64_t n, WorkBudget& budget) {
        const double W = start_prefix(n, budget);
        return (p == 1.0) ? 1.0 / W : std::pow(W, -1.0 / p);
    }
};

} // namespace

BlockSequence dyadic_blocks(const Weight& w, double p, std::int64_t count) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("exponent p must satisfy 1 <= p < infinity");
    }
    if (count < 1 || count > 62) {
        throw std::invalid_argument("dyadic family supports 1 <= count <= 62");
    }
    auto state = std::make_shared<DyadicState>(w, p);
    auto gen = [state](std::int64_t n, WorkBudget& budget) {
        const std::int64_t start = std::int64_t{1} << (n - 1);
        budget.charge(static_cast<std::uint64_t>(start)); // one unit per entry built
        return FiniteSequence::constant_on(start, start, state->coefficient(n, budget));
    };
    auto size_fn = [](std::int64_t n) { return std::int64_t{1} << (n - 1); };
    auto max_abs_fn = [state](std::int64_t n, WorkBudget& budget) {
        return state->coefficient(n, budget);
    };
    // W is nondecreasing, so the block coefficients W_{2^{n-1}}^{-1/p} never increase.
    return BlockSequence::lazy(count, std::move(gen), std::move(size_fn),
                               std::move(max_abs_fn), /*maxima_nonincreasing=*/true);
}

} // namespace garling
