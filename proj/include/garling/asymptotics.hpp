#pragma once

#include <cstdint>
#include <vector>

#include "garling/blocks.hpp"
#include "garling/budget.hpp"
#include "garling/norms.hpp"
#include "garling/sequence.hpp"
#include "garling/weight.hpp"

namespace garling {

/// One row of the symmetry-defect experiment.  For a horizon r the forward
/// vector has coefficients a_n = (n w_n)^{-1/p} on 1..r and the reversed
/// vector b_n = a_{r+1-n}.  Then
///   norm_f        selection-supremum norm of the forward vector
///                 (its p-th power equals the harmonic number H_r exactly,
///                 by the identity selection)
///   norm_g_rev    selection-supremum norm of the reversed vector
///   harmonic      H_r = sum_{n<=r} 1/n by direct summation
///   defect        norm_f / norm_g_rev
///   lorentz_common  the common rearrangement norm of both vectors
struct DefectRow {
    std::int64_t r = 0;
    double norm_f = 0.0;
    double norm_g_rev = 0.0;
    double harmonic = 0.0;
    double defect = 0.0;
    double lorentz_common = 0.0;
    /// Sanity flag: set if the reversed norm exceeded the forward norm
    /// beyond tolerance (should never happen for nonincreasing weights).
    bool reversal_exceeded_forward = false;
};

/// Run the symmetry-defect experiment at the given horizons.  Budget is
/// charged per DP cell; the plain quadratic DP is used (coefficients are
/// pairwise distinct).
std::vector<DefectRow> symmetry_defect(const Weight& w, double p,
                                       const std::vector<std::int64_t>& r_list,
                                       WorkBudget& budget);

/// One completed step of the subsequence-selection recursion.
struct SelectionStep {
    int k = 0;
    std::int64_t L = 0;        // tail-window threshold: least L with
                               // w_{L+1} + ... + w_{L+q_k-1} < (1-alpha)/2
    std::int64_t M = 0;        // packed boundary from which every generated
                               // coefficient is below ((1-alpha)/(2L))^{1/p}
    std::int64_t block_index = 0;   // chosen block n_k
    std::int64_t q_begin = 0;       // slot interval [q_begin, q_end) in the
    std::int64_t q_end = 0;         // packed layout
    double A = 0.0;                 // sum_{i in [q_begin,q_end)} c_i^p w_i >= alpha
    std::vector<double> functional; // c_i^{p-1} w_i / A, the norming functional
    std::vector<double> packed_coefficients; // c_i, the block shifted to the slots
};

/// Trace of the subsequence-selection run: the data needed to reconstruct
/// the isomorphic-copy factorization and to certify its bounds.
struct SelectionTrace {
    double p = 0.0;
    double epsilon = 0.0;
    double alpha = 0.0; // (1+epsilon)^{-p}

    std::vector<SelectionStep> steps;
    std::vector<FiniteSequence> selected_blocks; // original y_{n_k}

    enum class Status { target_reached, budget_exhausted, blocks_exhausted };
    Status status = Status::target_reached;
    std::uint64_t budget_used = 0;
};

/// Run the selection recursion on a normalized nonnegative block family:
/// repeatedly pick a later block, far enough out and with a long enough
/// support gap, so that its left shift retains at least alpha = (1+eps)^{-p}
/// of its p-power mass against the weight.  Stops after `target_steps`
/// completed steps (0 = run until a resource runs out), on budget
/// exhaustion, or when the family is exhausted; the trace records every
/// completed step either way.  Families whose prefix classifies as a gliding
/// hump are rejected up front (std::invalid_argument).
SelectionTrace select_lp_subsequence(const BlockSequence& bs, const Weight& w,
                                     double p, double epsilon,
                                     std::uint64_t budget_limit,
                                     int target_steps);

/// Certificate for the factorization built from a trace.
struct FactorizationReport {
    /// max |functional applied to its own packed block - 1| over steps;
    /// the norming identity, exact up to roundoff.  Cross terms vanish
    /// structurally (disjoint slot intervals).
    double functional_identity_error = 0.0;
    /// Bounds for ||sum b_k y_{n_k}|| / ||b||_p over coefficient vectors b:
    /// the K basis corners and the balanced vector first, then `trials`
    /// random draws (uniform [-1,1] entries, normalized in l^p).
    double min_ratio = 0.0; // must stay >= (1+eps)^{-1}
    double max_ratio = 0.0; // must stay <= 1
    int trials = 0;         // total combinations evaluated, corners included
    int violations = 0;     // ratios outside [(1+eps)^{-1} - tol, 1 + tol]
};

FactorizationReport verify_factorization(const SelectionTrace& trace, const Weight& w,
                                         double p, int trials, std::uint64_t rng_seed);

/// Largest ratio ||sum b_k y_k|| / ||b||_p over random and adversarial
/// coefficient vectors against the first `dims` blocks of a normalized
/// family; by the domination inequality this never exceeds 1.
struct DominationReport {
    double max_ratio = 0.0;
    int trials = 0;
    int dims = 0;
};

DominationReport domination_check(const BlockSequence& bs, const Weight& w, double p,
                                  int trials, std::uint64_t rng_seed);

/// Selection-supremum norms of the partial sums y_1 + ... + y_m of a block
/// family, for each m in m_list.
struct GrowthRow {
    std::int64_t m = 0;
    double norm = 0.0;
};

std::vector<GrowthRow> partial_sum_growth(const BlockSequence& bs, const Weight& w,
                                          double p, const std::vector<std::int64_t>& m_list,
                                          WorkBudget& budget);

/// Sample the norm over random permutations of the coefficients of f on its
/// own support: reports extremes of ||f_sigma|| / ||f||.  Every permuted
/// norm is bounded by the common rearrangement norm.
struct PermutationDefectReport {
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    double lorentz_bound = 0.0; // rearrangement norm (when the weight allows it)
    int trials = 0;
};

PermutationDefectReport permutation_defect(const FiniteSequence& f, const Weight& w,
                                           double p, int trials, std::uint64_t rng_seed);

} // namespace garling
