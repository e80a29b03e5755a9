#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "garling/budget.hpp"
#include "garling/sequence.hpp"
#include "garling/weight.hpp"

namespace garling {

/// How a norm value was obtained.
///   dp            exact selection dynamic program
///   oracle        exhaustive enumeration of selections (small supports)
///   rearrangement sorted pairing against the weight prefix
///   closed_form   constant-coefficient shortcut (|c| W_r^{1/p})
enum class NormAlgorithm { dp, oracle, rearrangement, closed_form };

std::string to_string(NormAlgorithm a);

/// Result of a norm computation.  For selection-based norms the selection is
/// an optimal increasing index set phi(1) < ... < phi(r) realizing
///   value^p = p_power = sum_k |f_{phi(k)}|^p w_k,
/// chosen canonically: minimum cardinality first, then lexicographically
/// smallest index set.  For the rearrangement norm every coordinate
/// participates, so the selection lists the whole support (increasing) and
/// p_power is the sum pairing the decreasing rearrangement with w_1..w_r.
struct NormReport {
    double value = 0.0;
    double p_power = 0.0;
    Selection selection;
    NormAlgorithm algorithm = NormAlgorithm::dp;
};

/// Selection-supremum norm
///   ||f|| = sup_phi ( sum_n |f_{phi(n)}|^p w_n )^{1/p},
/// the supremum over strictly increasing phi.  Exact maximization:
/// restricting phi to range inside supp(f) loses nothing, so the problem is
/// finite and solved by dynamic programming over (position, slot) with
///   V[i][k] = max(V[i-1][k], V[i-1][k-1] + |a_i|^p w_k).
/// Runs of consecutive equal-|value| support positions are collapsed to a
/// sliding-window recurrence when that is cheaper; all-equal inputs use the
/// closed form |c| W_r^{1/p}.  Works for any positive weight; monotonicity
/// is not required.  The budget is charged per DP cell.
NormReport garling_norm(const FiniteSequence& f, const Weight& w, double p);
NormReport garling_norm(const FiniteSequence& f, const Weight& w, double p,
                        WorkBudget& budget);

/// Independent check: enumerate every subset of supp(f) (2^N selections) and
/// take the best.  Requires |supp(f)| <= 25.
NormReport garling_norm_oracle(const FiniteSequence& f, const Weight& w, double p);

/// Rearrangement norm ( sum_n (a*_n)^p w_n )^{1/p} pairing the decreasing
/// rearrangement with w_1..w_r.  Requires a normalized nonincreasing weight;
/// otherwise the pairing is not a norm and the call throws
/// std::invalid_argument.
NormReport lorentz_norm(const FiniteSequence& f, const Weight& w, double p);

/// Weak quasinorm sup_n W_n^{1/p} a*_n.  Same weight requirement as the
/// rearrangement norm.
double weak_lorentz_quasinorm(const FiniteSequence& f, const Weight& w, double p);

/// Plain ( sum |f_n|^p )^{1/p}.
double lp_norm(const FiniteSequence& f, double p);

/// Recompute the p-th power sum described by a report from its selection and
/// tag, for validating emitted reports.
double reevaluate_p_power(const NormReport& report, const FiniteSequence& f,
                          const Weight& w, double p);

/// Whether the selection achieves the reported value: the norm supremum is
/// always attained on finitely supported input, so this should never fail.
bool norm_attaining_check(const NormReport& report, const FiniteSequence& f,
                          const Weight& w, double p, double tol = 1e-12);

/// Minimality of f for the selection-supremum norm: f is minimal when every
/// restriction to a proper subset of the support has strictly smaller norm.
/// Coordinate projection never increases the norm, so it suffices to test
/// single-coordinate removals; `witness` is the lowest removable index when
/// f is not minimal.
struct MinimalityReport {
    bool minimal = false;
    std::optional<std::int64_t> witness;
    double norm = 0.0;
};

MinimalityReport is_minimal(const FiniteSequence& f, const Weight& w, double p,
                            double tol = 1e-9);

/// Greedily remove removable coordinates (always the lowest-index witness)
/// until minimal.  The result has the same norm as f.
FiniteSequence minimal_predecessor(const FiniteSequence& f, const Weight& w, double p,
                                   double tol = 1e-9);

} // namespace garling
