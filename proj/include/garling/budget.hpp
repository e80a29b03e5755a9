#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace garling {

/// Thrown when a computation would exceed its operation budget.
class BudgetExhausted : public std::runtime_error {
public:
    explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an exact algorithm cannot handle the requested instance size
/// (e.g. a dense quadratic table that would not fit in memory).
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Work meter shared by the long-running routines.  One unit corresponds to
/// one scalar evaluation: a weight value, a dynamic-programming cell update,
/// or one step of a streaming scan.  Charging past the limit throws
/// BudgetExhausted; callers that prefer to stop cleanly use try_charge.
class WorkBudget {
public:
    explicit WorkBudget(std::uint64_t limit) : limit_(limit) {}

    static WorkBudget unlimited() {
        return WorkBudget(std::numeric_limits<std::uint64_t>::max());
    }

    /// Consume `ops` units, throwing once the limit would be crossed.
    void charge(std::uint64_t ops) {
        if (!try_charge(ops)) {
            throw BudgetExhausted("work budget exhausted after " + std::to_string(used_) +
                                  " of " + std::to_string(limit_) + " operations");
        }
    }

    /// Consume `ops` units if they fit; returns false (leaving the meter at
    /// the limit) otherwise.
    bool try_charge(std::uint64_t ops) noexcept {
        if (ops > limit_ - used_) {
            used_ = limit_;
            return false;
        }
        used_ += ops;
        return true;
    }

    std::uint64_t used() const noexcept { return used_; }
    std::uint64_t limit() const noexcept { return limit_; }
    std::uint64_t remaining() const noexcept { return limit_ - used_; }
    bool exhausted() const noexcept { return used_ >= limit_; }

private:
    std::uint64_t limit_;
    std::uint64_t used_ = 0;
};

} // namespace garling
