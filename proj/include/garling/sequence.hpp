#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace garling {

/// A finitely supported real sequence, stored sparsely as (index, value)
/// pairs with 1-based, strictly increasing indices and nonzero values.
class FiniteSequence {
public:
    struct Entry {
        std::int64_t index;
        double value;

        bool operator==(const Entry&) const = default;
    };

    FiniteSequence() = default;

    /// Build from entries in any order.  Zero values are dropped; duplicate
    /// or nonpositive indices throw std::invalid_argument.
    static FiniteSequence from_entries(std::vector<Entry> entries);

    /// Build from a dense 1-based coefficient list; zeros are dropped.
    static FiniteSequence from_dense(const std::vector<double>& dense);

    /// Constant value v on the index interval [first, first + count).
    static FiniteSequence constant_on(std::int64_t first, std::int64_t count, double v);

    /// Indicator of the given index set (value 1 at each index).
    static FiniteSequence indicator(std::vector<std::int64_t> indices);

    /// v * e_index.
    static FiniteSequence unit(std::int64_t index, double v = 1.0);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    /// Support indices, increasing.
    std::vector<std::int64_t> support() const;

    /// Value at an index (0.0 off the support).  Binary search.
    double at(std::int64_t index) const;

    /// Largest support index, or 0 for the zero sequence.
    std::int64_t max_index() const;

    /// Smallest support index, or 0 for the zero sequence.
    std::int64_t min_index() const;

    double max_abs_value() const;

    FiniteSequence scaled(double c) const;

    /// Copy with one index removed from the support (no-op off support).
    FiniteSequence without_index(std::int64_t index) const;

    /// Sum of two sequences with disjoint supports (overlap throws).
    static FiniteSequence disjoint_sum(const FiniteSequence& a, const FiniteSequence& b);

    bool operator==(const FiniteSequence& other) const = default;

private:
    std::vector<Entry> entries_; // sorted by index, values nonzero
};

/// |values| sorted into nonincreasing order; ties keep the lower original
/// index first (stable).  Length equals the support size.
std::vector<double> decreasing_rearrangement(const FiniteSequence& f);

/// A finite increasing selection of indices phi(1) < phi(2) < ... < phi(r),
/// the object the selection-supremum norm optimizes over.
struct Selection {
    std::vector<std::int64_t> indices;

    /// Validate (1-based, strictly increasing) and wrap.
    static Selection of(std::vector<std::int64_t> indices);

    std::size_t size() const { return indices.size(); }
    bool empty() const { return indices.empty(); }

    bool operator==(const Selection&) const = default;
};

/// A sign sequence: +/-1 at every index, stored as exceptions to a default
/// of +1 (or as a short pattern cycled by index).
class SignPattern {
public:
    /// The identity pattern (all +1).
    SignPattern() = default;

    static SignPattern all_ones() { return SignPattern(); }

    /// sign(n) = +1 for odd n, -1 for even n.
    static SignPattern alternating();

    /// Explicit signs by index; every value must be +1 or -1 (within 1e-15).
    static SignPattern from_map(std::map<std::int64_t, double> signs);

    /// Cycle a +/- string by index: sign(n) = pattern[(n-1) mod len].
    static SignPattern cycled(std::string_view plus_minus);

    double at(std::int64_t index) const;

private:
    std::map<std::int64_t, double> overrides_; // used when cycle_ is empty
    std::vector<double> cycle_;
};

} // namespace garling
