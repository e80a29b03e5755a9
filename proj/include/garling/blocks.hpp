#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "garling/budget.hpp"
#include "garling/sequence.hpp"
#include "garling/weight.hpp"

namespace garling {

/// A (possibly lazily generated) sequence of blocks y_1, y_2, ... whose
/// supports occupy consecutive disjoint index intervals:
/// max supp(y_n) < min supp(y_{n+1}).  Blocks are nonzero.
///
/// Lazy families can supply a metadata callback giving the support size and
/// the largest |coefficient| of a block without materializing it; threshold
/// scans in the subsequence-selection experiment rely on this to stay cheap.
/// Materialized blocks are memoized.
class BlockSequence {
public:
    struct Metadata {
        std::int64_t support_size = 0;
        double max_abs = 0.0;
    };

    using Generator = std::function<FiniteSequence(std::int64_t, WorkBudget&)>;
    using SizeFn = std::function<std::int64_t(std::int64_t)>;
    using MaxAbsFn = std::function<double(std::int64_t, WorkBudget&)>;

    /// Explicit finite family; validates the support layout.
    static BlockSequence from_blocks(std::vector<FiniteSequence> blocks);

    /// Lazy family of `count` blocks (nullopt = unbounded).  Generated
    /// blocks are validated against their nearest materialized neighbors.
    /// `size_fn` gives |supp(y_n)| without materializing (used by boundary
    /// arithmetic, which must stay cheap); `max_abs_fn` gives the largest
    /// |coefficient| and may charge the budget (e.g. for weight sums).
    /// `maxima_nonincreasing` asserts that the max-|coefficient| sequence
    /// never increases, which lets threshold searches stop early.
    static BlockSequence lazy(std::optional<std::int64_t> count, Generator gen,
                              SizeFn size_fn = nullptr, MaxAbsFn max_abs_fn = nullptr,
                              bool maxima_nonincreasing = false);

    /// Number of blocks for finite families.
    std::optional<std::int64_t> count() const;

    bool has_block(std::int64_t n) const;

    /// n-th block, 1-based.  Materializes and memoizes; the budgeted
    /// overload charges per generated entry.
    FiniteSequence block(std::int64_t n) const;
    FiniteSequence block(std::int64_t n, WorkBudget& budget) const;

    /// |supp(y_n)|, via size_fn when available, else by materializing.
    std::int64_t support_size(std::int64_t n, WorkBudget& budget) const;

    /// max |coefficient| of y_n, via max_abs_fn when available.  Memoized;
    /// only the first computation charges the budget.
    double max_abs(std::int64_t n, WorkBudget& budget) const;

    Metadata metadata(std::int64_t n, WorkBudget& budget) const;

    /// Boundary of the packed layout: 1 + sum_{j<n} support_size(j); the
    /// position block n starts at after the family is shifted flush left.
    /// Defined for n up to count + 1 (the first position past the family).
    std::int64_t packed_boundary(std::int64_t n, WorkBudget& budget) const;

    bool maxima_nonincreasing() const;

    struct Impl;

private:
    explicit BlockSequence(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<Impl> impl_;
};

/// Shift a finite family flush left: block n keeps its coefficients in order
/// but its support becomes the packed interval [boundary(n), boundary(n+1)).
BlockSequence left_shift_blocks(const BlockSequence& bs, std::int64_t count);

/// Classification of a finite prefix of a block family by the trend of the
/// per-block maximum |coefficient|.
///   uniformly_null_trend  the maxima visibly decay: every block in the last
///                         quarter of the prefix sits strictly below the
///                         threshold and the quarter-maxima do not increase
///   gliding_hump          the running infimum stays at or above the threshold
///   inconclusive          anything else
struct BlockClassification {
    enum class Verdict { uniformly_null_trend, gliding_hump, inconclusive };

    Verdict verdict = Verdict::inconclusive;
    std::vector<double> per_block_max; // prefix_len values
    std::vector<double> running_inf;   // running minimum of per_block_max
    double threshold = 0.0;
};

BlockClassification classify_blocks(const BlockSequence& bs, std::int64_t prefix_len,
                                    double threshold);
BlockClassification classify_blocks(const BlockSequence& bs, std::int64_t prefix_len,
                                    double threshold, WorkBudget& budget);

/// The dyadic constant-block family for weight w and exponent p: block n is
/// the constant vector on indices [2^{n-1}, 2^n) with value chosen so the
/// selection-supremum norm is exactly 1, namely W_{2^{n-1}}^{-1/p}.
/// Lazy, with closed-form metadata; count <= 62.
BlockSequence dyadic_blocks(const Weight& w, double p, std::int64_t count);

} // namespace garling
