#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garling/budget.hpp"

namespace garling {

/// Admissibility report for a weight over a finite horizon.  The class of
/// admissible weights consists of normalized (w_1 = 1), nonincreasing,
/// strictly positive sequences that tend to zero while their partial sums
/// diverge.  The first two properties are decidable on a prefix; the two
/// tail properties can only be assessed as trends, so they are reported as
/// heuristics, never as proofs.
struct MembershipReport {
    bool w1_is_one = false;
    bool nonincreasing = false;      // no increase observed up to the horizon
    bool c0_decay_trend = false;     // w_M visibly below w_{M/4}
    bool l1_divergence_trend = false; // dyadic partial-sum increments not collapsing
};

/// Summary statistics of a weight sequence over horizon M.
///
///  - ed_sup:       max_{k <= n <= M} w_n / w_k       (<= 1 iff nonincreasing)
///  - reg_sup:      max_{m <= M} W_m / (m w_m)         (regularity)
///  - conj_reg_sup: max_{m <= M} w_m * sum_{n<=m} 1/(n w_n)
///  - eq2_sup:      max over sampled m of sum_{n<=m} w_{m+1-n} / (n w_n)
///
/// The first three are exact suprema over the whole horizon; eq2 is O(m) per
/// point, so it is evaluated at geometrically spaced samples only.
struct WeightDiagnostics {
    std::int64_t horizon = 0;
    double ed_sup = 0.0;
    double reg_sup = 0.0;
    double conj_reg_sup = 0.0;
    double eq2_sup = 0.0;

    struct TrendSample {
        std::int64_t m = 0;
        double ed = 0.0;
        double reg = 0.0;
        double conj_reg = 0.0;
        double eq2 = 0.0;
    };
    std::vector<TrendSample> trend_samples;

    MembershipReport in_W_report;
};

/// A positive weight sequence w_1, w_2, ... with lazily cached values and
/// prefix sums W_n = w_1 + ... + w_n.
///
/// Built-in families:
///   power(a)          w_n = n^{-a}                      (0 <= a <= 1)
///   log_power(a, b)   w_n = log(1+n)^b n^{-a} / log(2)^b (normalized so w_1 = 1)
///   table(values)     explicit finite table
///   quotient_normalized(v)   w_n = v_n / v_1
///
/// The value cache and prefix sums are append-only and internally
/// synchronized; a Weight can be shared freely across threads.  Values of
/// formula-backed families beyond the cache cap are computed on the fly
/// without caching (see value_uncached and WeightCursor), so streaming scans
/// far past the cache stay O(1) in memory.
///
/// Monotonicity: for families that are provably nonincreasing (power with
/// a >= 0, log-power with b <= 0, verified tables) normalized_nonincreasing()
/// is true.  Otherwise materialization watches for increases; the first
/// observed increase is recorded and the flag stays false.  Rearrangement-
/// based norms require the flag; the selection-supremum norm does not.
class Weight {
public:
    Weight() = delete;

    static Weight power(double a);
    static Weight log_power(double a, double b);
    static Weight table(std::vector<double> values);
    static Weight quotient_normalized(const Weight& inner);

    /// w_n for 1-based n.  Cached (and monotonicity-checked) up to the cache
    /// cap; evaluated on the fly beyond it.  Throws std::out_of_range past
    /// the end of a finite table.
    double value(std::int64_t n) const;

    /// Formula evaluation with no side effects on the cache.
    double value_uncached(std::int64_t n) const;

    /// W_n = w_1 + ... + w_n, accumulated left to right.  Only available up
    /// to the cache cap; use WeightCursor for streaming sums beyond it.
    double prefix_sum(std::int64_t n) const;

    /// Ensure values and prefix sums up to n are cached.
    void materialize(std::int64_t n) const;

    /// Number of cached entries so far.
    std::int64_t materialized() const;

    /// Copy of the first n cached values (materializes as needed).
    std::vector<double> first_values(std::int64_t n) const;

    /// True iff w_1 = 1 and the sequence is nonincreasing over its whole
    /// domain: provable for the closed-form families listed above and for
    /// fully scanned tables; false whenever the tail is formula-generated
    /// and not provably monotone, even if no increase has been seen yet.
    bool normalized_nonincreasing() const;

    /// True iff no increase occurs among w_1..w_n.  Materializes up to n.
    bool nonincreasing_up_to(std::int64_t n) const;

    /// Index n of the first observed increase w_{n-1} < w_n, if any.
    std::optional<std::int64_t> first_increase() const;

    /// Length of a finite table; nullopt for unbounded families.
    std::optional<std::int64_t> max_index() const;

    /// Round-trippable description in the weight-spec grammar (tables are
    /// abbreviated past a few entries).
    std::string spec_string() const;

    /// Largest index the cache will store (2^21; streaming covers the rest).
    std::int64_t cache_cap() const;

    struct Impl;

private:
    explicit Weight(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<Impl> impl_;
};

/// Parse a weight specification:
///   pow:a=<float>             power family, 0 <= a <= 1
///   logpow:a=<float>,b=<float> log-power family
///   table:<v1>,<v2>,...        inline table (v1 must equal 1)
///   file:<path>                one value per line, first line must be 1
/// Throws std::invalid_argument on malformed input.
Weight make_weight(std::string_view spec);

/// Conjugate weight w*_n = 1 / (n w_n), realized as an explicit table over
/// 1..horizon.  The conjugate of a normalized weight is normalized.
Weight conjugate(const Weight& w, std::int64_t horizon);

/// Compute the diagnostics described on WeightDiagnostics over horizon M.
/// O(M) work for the exact suprema plus O(m) per geometric sample for eq2.
WeightDiagnostics diagnostics(const Weight& w, std::int64_t M);

/// Streaming cursor over prefix sums, for scans beyond the cache cap.  The
/// cursor advances monotonically, charging the budget one unit per index
/// stepped, and never grows the cache.  Sums are accumulated left to right
/// from index 1, matching Weight::prefix_sum bit for bit on the shared range.
class WeightCursor {
public:
    explicit WeightCursor(Weight w);

    /// Advance to index n (>= current position) and return W_n.
    double prefix_at(std::int64_t n, WorkBudget& budget);

    /// Weight value at the current position (position() >= 1 required).
    double last_value() const { return last_value_; }

    std::int64_t position() const { return position_; }

private:
    Weight weight_;
    std::int64_t position_ = 0;
    double sum_ = 0.0;
    double last_value_ = 0.0;
};

} // namespace garling
