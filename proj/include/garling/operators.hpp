#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "garling/sequence.hpp"

namespace garling {

/// A strictly increasing map on positive integers, used both to spread a
/// sequence onto a sparser support and to extract a subsequence.
class IncreasingMap {
public:
    static IncreasingMap identity();

    /// phi(n) = step * n + offset with step >= 1 and phi(1) >= 1.
    static IncreasingMap affine(std::int64_t step, std::int64_t offset);

    /// Finite map n -> indices[n-1] given by a validated selection.
    static IncreasingMap from_selection(Selection s);

    /// Arbitrary callable; strict monotonicity is checked lazily on the
    /// points actually evaluated (phi(n) >= n is enforced, which every
    /// strictly increasing positive-integer map satisfies).
    static IncreasingMap from_function(std::function<std::int64_t(std::int64_t)> fn);

    std::int64_t operator()(std::int64_t n) const;

    /// Domain size for selection-backed maps; nullopt when unbounded.
    std::optional<std::int64_t> domain_size() const;

private:
    IncreasingMap() = default;
    std::function<std::int64_t(std::int64_t)> fn_;
    std::optional<std::int64_t> domain_size_;
};

/// A set of positive integers for coordinate projection: either an explicit
/// finite set or an index interval [lo, hi].
class IndexSet {
public:
    static IndexSet of(std::vector<std::int64_t> sorted_indices);
    static IndexSet interval(std::int64_t lo, std::int64_t hi);

    bool contains(std::int64_t index) const;

private:
    IndexSet() = default;
    std::vector<std::int64_t> indices_; // strictly increasing when used
    std::int64_t lo_ = 0, hi_ = -1;     // inclusive interval when indices_ empty
    bool is_interval_ = false;
};

/// Multiply each coordinate by a sign: (M_eps f)_n = eps_n f_n.
FiniteSequence apply_signs(const SignPattern& eps, const FiniteSequence& f);

/// Coordinate projection onto A: keeps entries with index in A.
FiniteSequence project(const IndexSet& A, const FiniteSequence& f);

/// Extraction (V_phi f)_n = f_{phi(n)}: pulls the subsequence of f along phi
/// back to consecutive positions.  For selection-backed maps the domain is
/// the selection length; for unbounded maps iteration stops once phi passes
/// the support of f.
FiniteSequence extract(const IncreasingMap& phi, const FiniteSequence& f);

/// Spreading (U_phi f): moves the coefficient at n to position phi(n), zero
/// off the range of phi.  Requires the domain of phi to cover supp(f).
FiniteSequence spread(const IncreasingMap& phi, const FiniteSequence& f);

/// Left shift of f onto 1..support_size: the extraction along the increasing
/// enumeration of supp(f).
FiniteSequence left_shift(const FiniteSequence& f);

} // namespace garling
