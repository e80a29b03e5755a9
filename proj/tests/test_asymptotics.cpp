#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "garling/asymptotics.hpp"
#include "garling/blocks.hpp"
#include "garling/budget.hpp"
#include "garling/norms.hpp"
#include "garling/sequence.hpp"
#include "garling/weight.hpp"
#include "test_support.hpp"

using namespace garling;
using garling::testing::rel_err;

namespace {

FiniteSequence forward_defect_vector(const Weight& w, double p, std::int64_t r) {
    std::vector<FiniteSequence::Entry> entries;
    for (std::int64_t n = 1; n <= r; ++n) {
        entries.push_back({n, std::pow(static_cast<double>(n) * w.value(n), -1.0 / p)});
    }
    return FiniteSequence::from_entries(std::move(entries));
}

FiniteSequence reversed_on_same_support(const FiniteSequence& f) {
    const auto& entries = f.entries();
    std::vector<FiniteSequence::Entry> rev;
    const std::size_t r = entries.size();
    for (std::size_t i = 0; i < r; ++i) {
        rev.push_back({entries[i].index, entries[r - 1 - i].value});
    }
    return FiniteSequence::from_entries(std::move(rev));
}

} // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("defect experiment: frozen rows, harmonic identity, oracle cross-check") {
    const Weight w = make_weight("pow:a=0.5");
    WorkBudget budget(100'000'000);
    const auto rows = symmetry_defect(w, 1.0, {16, 64}, budget);
    REQUIRE(rows.size() == 2);
    CHECK(budget.used() > 0);

    const DefectRow& a = rows[0];
    CHECK(a.r == 16);
    CHECK(rel_err(a.norm_f, 3.3807289932289941) < 1e-14);
    CHECK(rel_err(a.norm_g_rev, 2.4302350236751304) < 1e-14);
    CHECK(rel_err(a.harmonic, 3.3807289932289937) < 1e-14);
    CHECK(rel_err(a.defect, 1.3911119543148038) < 1e-14);
    CHECK(rel_err(a.lorentz_common, 3.3807289932289941) < 1e-14);
    CHECK_FALSE(a.reversal_exceeded_forward);

    const DefectRow& b = rows[1];
    CHECK(b.r == 64);
    CHECK(rel_err(b.norm_f, 4.7438909037057675) < 1e-14);
    CHECK(rel_err(b.norm_g_rev, 2.7789260330226457) < 1e-14);
    CHECK(rel_err(b.defect, 1.7070950602257751) < 1e-14);

    // The forward p-power equals the harmonic number H_r: with p = 1 and
    // a_n = 1/(n w_n), the identity selection pays sum 1/n and is optimal.
    for (const DefectRow& row : rows) {
        double H = 0.0;
        for (std::int64_t n = 1; n <= row.r; ++n) H += 1.0 / static_cast<double>(n);
        CHECK(rel_err(row.harmonic, H) < 1e-15);
        CHECK(rel_err(row.norm_f, H) < 1e-13);
        CHECK(row.defect == row.norm_f / row.norm_g_rev);
    }

    // Independent exhaustive check of the reversed norm at r = 16.
    const FiniteSequence f16 = forward_defect_vector(w, 1.0, 16);
    const FiniteSequence g16 = reversed_on_same_support(f16);
    const auto oracle = garling_norm_oracle(g16, w, 1.0);
    CHECK(rel_err(oracle.value, a.norm_g_rev) < 1e-12);

    // Both vectors carry the same value multiset, hence the same
    // rearrangement norm, which here equals the forward norm.
    CHECK(rel_err(lorentz_norm(f16, w, 1.0).value, a.lorentz_common) < 1e-14);
    CHECK(rel_err(lorentz_norm(g16, w, 1.0).value, a.lorentz_common) < 1e-14);
}

TEST_CASE("defect grows with the horizon and never inverts") {
    const Weight w = make_weight("pow:a=0.5");
    WorkBudget budget(100'000'000);
    const auto rows = symmetry_defect(w, 1.0, {16, 64, 256}, budget);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].defect > rows[i - 1].defect);
    }
    for (const auto& row : rows) {
        CHECK(row.defect >= 1.0);
        CHECK_FALSE(row.reversal_exceeded_forward);
    }
}

TEST_CASE("defect experiment respects its budget") {
    const Weight w = make_weight("pow:a=0.5");
    WorkBudget tiny(100);
    CHECK_THROWS_AS(symmetry_defect(w, 1.0, {256}, tiny), BudgetExhausted);
}

TEST_CASE("subsequence selection: the frozen two-step trace") {
    const Weight w = make_weight("pow:a=0.5");
    const auto bs = dyadic_blocks(w, 1.0, 48);
    const SelectionTrace trace = select_lp_subsequence(bs, w, 1.0, 3.0, 1'000'000'000, 2);

    CHECK(trace.status == SelectionTrace::Status::target_reached);
    CHECK(trace.p == 1.0);
    CHECK(trace.epsilon == 3.0);
    CHECK(trace.alpha == 0.25);
    REQUIRE(trace.steps.size() == 2);
    REQUIRE(trace.selected_blocks.size() == 2);

    const SelectionStep& s1 = trace.steps[0];
    CHECK(s1.k == 1);
    CHECK(s1.L == 1);
    CHECK(s1.M == 4);
    CHECK(s1.block_index == 3);
    CHECK(s1.q_begin == 1);
    CHECK(s1.q_end == 5);
    CHECK(std::abs(s1.A - 1.0) < 1e-14); // full mass: the block is flush already

    // Step 2 quantities, each re-derivable by hand:
    //  - window: q_2 = 5, so L is the least value with
    //    w_{L+1}+w_{L+2}+w_{L+3}+w_{L+4} < (1-alpha)/2 = 0.375, which is 112
    //  - coefficient threshold ((1-alpha)/(2L))^{1/p} = 0.75/224 forces the
    //    block whose constant 1/W_{2^{n-1}} first drops below it: n = 16,
    //    starting at the packed position M = 2^15
    const SelectionStep& s2 = trace.steps[1];
    CHECK(s2.k == 2);
    CHECK(s2.L == 112);
    CHECK(s2.M == 32768);
    CHECK(s2.block_index == 16);
    CHECK(s2.q_begin == 5);
    CHECK(s2.q_end == 32773);

    double window = 0.0;
    for (std::int64_t n = 113; n <= 116; ++n) window += w.value(n);
    CHECK(window < 0.375);
    double window_before = 0.0;
    for (std::int64_t n = 112; n <= 115; ++n) window_before += w.value(n);
    CHECK(window_before >= 0.375);

    // A_2 = (W_32772 - W_4) / W_32768, the mass the shifted block keeps.
    const double expected_A2 =
        (w.prefix_sum(32772) - w.prefix_sum(4)) / w.prefix_sum(32768);
    CHECK(rel_err(s2.A, expected_A2) < 1e-12);
    CHECK(rel_err(s2.A, 0.9923391410067756) < 1e-13);
    CHECK(s2.A >= trace.alpha);

    // Functionals are normalized: applied to their own packed block they
    // give exactly 1 (up to roundoff).
    for (const SelectionStep& s : trace.steps) {
        REQUIRE(s.functional.size() == s.packed_coefficients.size());
        REQUIRE(s.functional.size() ==
                static_cast<std::size_t>(s.q_end - s.q_begin));
        double pairing = 0.0;
        for (std::size_t i = 0; i < s.functional.size(); ++i) {
            pairing += s.functional[i] * s.packed_coefficients[i];
        }
        CHECK(std::abs(pairing - 1.0) < 1e-12);
    }

    // The whole run is deterministic, meter included, when repeated on a
    // fresh family and weight (memoized caches make reruns on the same
    // objects cheaper, so equal meters require equal starting states).
    const Weight w2 = make_weight("pow:a=0.5");
    const auto bs2 = dyadic_blocks(w2, 1.0, 48);
    const SelectionTrace again = select_lp_subsequence(bs2, w2, 1.0, 3.0, 1'000'000'000, 2);
    CHECK(again.budget_used == trace.budget_used);
    REQUIRE(again.steps.size() == 2);
    CHECK(again.steps[1].A == s2.A);
    CHECK(trace.budget_used > 0);
    CHECK(trace.budget_used < 1'000'000);
}

TEST_CASE("factorization certificate: identity, ratio bounds, no violations") {
    const Weight w = make_weight("pow:a=0.5");
    const auto bs = dyadic_blocks(w, 1.0, 48);
    const SelectionTrace trace = select_lp_subsequence(bs, w, 1.0, 3.0, 1'000'000'000, 2);

    const FactorizationReport report = verify_factorization(trace, w, 1.0, 25, 7);
    CHECK(report.functional_identity_error < 1e-12);
    CHECK(report.trials == 2 + 1 + 25); // corners, balanced, random draws
    CHECK(report.violations == 0);
    CHECK(report.min_ratio >= 1.0 / (1.0 + 3.0) - 1e-9);
    CHECK(report.max_ratio <= 1.0 + 1e-9);
    // The corner vectors alone pin the upper end: each y_{n_k} has norm 1.
    CHECK(report.max_ratio > 0.999999);

    // Spot-check the lower bound on an explicit combination: b = (1, 1).
    const FiniteSequence z =
        FiniteSequence::disjoint_sum(trace.selected_blocks[0], trace.selected_blocks[1]);
    const double combined = garling_norm(z, w, 1.0).value;
    CHECK(combined <= 2.0 + 1e-12);
    CHECK(combined >= 2.0 / (1.0 + 3.0) - 1e-12);
}

TEST_CASE("selection rejects families with a persistent hump") {
    const Weight w = make_weight("pow:a=0.5");
    std::vector<FiniteSequence> units;
    for (std::int64_t n = 1; n <= 20; ++n) units.push_back(FiniteSequence::unit(n, 1.0));
    const auto flat = BlockSequence::from_blocks(std::move(units));
    CHECK_THROWS_AS(select_lp_subsequence(flat, w, 1.0, 3.0, 1'000'000, 2),
                    std::invalid_argument);
}

TEST_CASE("selection reports exhaustion honestly") {
    const Weight w = make_weight("pow:a=0.5");

    // Too few blocks: step 2 needs the 16th dyadic block.
    const auto small = dyadic_blocks(w, 1.0, 8);
    const SelectionTrace t1 = select_lp_subsequence(small, w, 1.0, 3.0, 1'000'000'000, 2);
    CHECK(t1.status == SelectionTrace::Status::blocks_exhausted);
    CHECK(t1.steps.size() == 1);

    // Too little budget: the run stops cleanly instead of throwing.
    const auto bs = dyadic_blocks(w, 1.0, 48);
    const SelectionTrace t2 = select_lp_subsequence(bs, w, 1.0, 3.0, 2000, 2);
    CHECK(t2.status == SelectionTrace::Status::budget_exhausted);
    CHECK(t2.budget_used <= 2000);
}

TEST_CASE("domination: normalized block combinations never beat the sum of slots") {
    const Weight w = make_weight("pow:a=0.5");
    const auto bs = dyadic_blocks(w, 1.0, 10);
    const DominationReport report = domination_check(bs, w, 1.0, 40, 99);
    CHECK(report.dims == 8);
    CHECK(report.trials >= 40);
    CHECK(report.max_ratio <= 1.0 + 1e-12);
    CHECK(report.max_ratio > 0.0);
}

TEST_CASE("partial sums of the dyadic family: growth against the oracle") {
    const Weight w = make_weight("pow:a=0.5");
    WorkBudget budget(100'000'000);
    const auto rows = partial_sum_growth(dyadic_blocks(w, 1.0, 4), w, 1.0, {1, 2, 4}, budget);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].m == 1);
    CHECK(rel_err(rows[0].norm, 1.0) < 1e-14);
    // Norms never decrease as blocks accumulate.
    CHECK(rows[1].norm >= rows[0].norm - 1e-15);
    CHECK(rows[2].norm >= rows[1].norm - 1e-15);

    // Assemble the m = 4 partial sum and compare against the subset oracle.
    const auto bs = dyadic_blocks(w, 1.0, 4);
    FiniteSequence sum;
    for (std::int64_t n = 1; n <= 4; ++n) {
        sum = FiniteSequence::disjoint_sum(sum, bs.block(n));
    }
    CHECK(rel_err(rows[2].norm, garling_norm_oracle(sum, w, 1.0).value) < 1e-12);
}

TEST_CASE("permuting coefficients moves the norm, bounded by the rearrangement") {
    const Weight w = make_weight("pow:a=0.5");
    testing::TestRng rng(4711);
    for (int t = 0; t < 10; ++t) {
        const FiniteSequence f = testing::random_vector(rng, 6, 12);
        const PermutationDefectReport report =
            permutation_defect(f, w, 1.0, 30, rng.raw());
        CHECK(report.trials == 30);
        CHECK(report.min_ratio <= report.max_ratio);
        CHECK(report.min_ratio > 0.0);
        const double base = garling_norm(f, w, 1.0).value;
        CHECK(report.lorentz_bound > 0.0);
        CHECK(report.max_ratio * base <= report.lorentz_bound * (1.0 + 1e-12));
    }
}

} // TEST_SUITE("asymptotics")
