#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "garling/norms.hpp"
#include "garling/operators.hpp"
#include "garling/sequence.hpp"
#include "garling/weight.hpp"
#include "test_support.hpp"

using namespace garling;
using garling::testing::TestRng;
using garling::testing::random_vector;

namespace {

/// Random strictly increasing map whose domain covers supports up to
/// max_needed slots: either an affine map or an explicit selection.
IncreasingMap random_increasing_map(TestRng& rng, std::int64_t max_needed) {
    if (rng.uniform01() < 0.5) {
        const std::int64_t step = rng.uniform_int(1, 4);
        const std::int64_t offset = rng.uniform_int(1 - step, 5);
        return IncreasingMap::affine(step, offset);
    }
    const std::int64_t span = 4 * max_needed + 8;
    auto indices = rng.distinct_indices(max_needed, span);
    return IncreasingMap::from_selection(Selection::of(std::move(indices)));
}

} // namespace

TEST_SUITE("operators") {

TEST_CASE("increasing maps: identity, affine, selection, callable") {
    const IncreasingMap id = IncreasingMap::identity();
    CHECK(id(1) == 1);
    CHECK(id(77) == 77);

    const IncreasingMap odd = IncreasingMap::affine(2, -1);
    CHECK(odd(1) == 1);
    CHECK(odd(4) == 7);
    CHECK_THROWS_AS(IncreasingMap::affine(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(IncreasingMap::affine(2, -2), std::invalid_argument); // phi(1) = 0

    const IncreasingMap sel = IncreasingMap::from_selection(Selection::of({2, 5, 11}));
    CHECK(sel(1) == 2);
    CHECK(sel(3) == 11);
    REQUIRE(sel.domain_size().has_value());
    CHECK(*sel.domain_size() == 3);
    CHECK_THROWS_AS(sel(4), std::out_of_range);

    const IncreasingMap fn =
        IncreasingMap::from_function([](std::int64_t n) { return n * n; });
    CHECK(fn(3) == 9);
    // phi(n) >= n is necessary for any strictly increasing positive map and
    // is enforced pointwise.
    const IncreasingMap bad =
        IncreasingMap::from_function([](std::int64_t n) { return n - 1; });
    CHECK_THROWS_AS(bad(1), std::invalid_argument);
}

TEST_CASE("sign multiplication flips coordinates and is an involution") {
    const auto f = FiniteSequence::from_entries({{1, 1.5}, {2, -2.0}, {7, 3.0}});
    const SignPattern alt = SignPattern::alternating();
    const auto g = apply_signs(alt, f);
    CHECK(g.at(1) == 1.5);
    CHECK(g.at(2) == 2.0);
    CHECK(g.at(7) == 3.0);
    CHECK(apply_signs(alt, g) == f);
}

TEST_CASE("projection keeps exactly the requested coordinates") {
    const auto f = FiniteSequence::from_entries({{1, 1.0}, {3, 2.0}, {6, -1.0}, {9, 4.0}});
    const auto g = project(IndexSet::of({3, 9, 10}), f);
    CHECK(g.support() == std::vector<std::int64_t>{3, 9});
    const auto h = project(IndexSet::interval(2, 6), f);
    CHECK(h.support() == std::vector<std::int64_t>{3, 6});
    CHECK(project(IndexSet::interval(7, 8), f).empty());
    CHECK_THROWS_AS(IndexSet::of({5, 5}), std::invalid_argument);
    CHECK_THROWS_AS(IndexSet::interval(4, 2), std::invalid_argument);
}

TEST_CASE("extraction pulls a subsequence to consecutive positions") {
    const auto f = FiniteSequence::from_entries({{2, 5.0}, {4, -1.0}, {8, 2.0}});
    const auto g = extract(IncreasingMap::from_selection(Selection::of({2, 3, 8})), f);
    // g_1 = f_2, g_2 = f_3 = 0, g_3 = f_8.
    CHECK(g.at(1) == 5.0);
    CHECK(g.at(2) == 0.0);
    CHECK(g.at(3) == 2.0);
    CHECK(g.support() == std::vector<std::int64_t>{1, 3});

    const auto even = extract(IncreasingMap::affine(2, 0), f);
    // even_1 = f_2, even_2 = f_4, even_3 = f_6 = 0, even_4 = f_8.
    CHECK(even.at(1) == 5.0);
    CHECK(even.at(2) == -1.0);
    CHECK(even.at(4) == 2.0);
    CHECK(even.support_size() == 3);
}

TEST_CASE("spreading relocates coordinates along the map") {
    const auto f = FiniteSequence::from_dense({1.0, 0.0, -2.0});
    const auto g = spread(IncreasingMap::affine(3, -2), f); // n -> 3n-2
    CHECK(g.at(1) == 1.0);
    CHECK(g.at(7) == -2.0);
    CHECK(g.support_size() == 2);

    // The domain of the map must cover the support.
    const IncreasingMap small = IncreasingMap::from_selection(Selection::of({4, 9}));
    CHECK_THROWS_AS(spread(small, f), std::invalid_argument);
}

TEST_CASE("left shift packs the support onto an initial segment") {
    const auto f = FiniteSequence::from_entries({{3, 1.0}, {7, -2.0}, {20, 0.5}});
    const auto g = left_shift(f);
    CHECK(g.support() == std::vector<std::int64_t>{1, 2, 3});
    CHECK(g.at(1) == 1.0);
    CHECK(g.at(2) == -2.0);
    CHECK(g.at(3) == 0.5);
}

TEST_CASE("extract after spread is the identity, exactly") {
    TestRng rng(2024);
    for (int t = 0; t < 100; ++t) {
        const FiniteSequence f = random_vector(rng, 8, 12);
        const IncreasingMap phi = random_increasing_map(rng, 12);
        CHECK(extract(phi, spread(phi, f)) == f);
    }
}

TEST_CASE("spreading is an exact isometry for the selection-supremum norm") {
    // Selections of the spread vector correspond to selections of f through
    // phi term by term, so the dynamic program computes identical sums.
    TestRng rng(515151);
    const Weight w = make_weight("pow:a=0.5");
    const Weight nonmono = make_weight("logpow:a=0.5,b=1");
    for (int t = 0; t < 60; ++t) {
        const FiniteSequence f = random_vector(rng, 7, 10);
        const IncreasingMap phi = random_increasing_map(rng, 10);
        const FiniteSequence g = spread(phi, f);
        for (double p : {1.0, 2.0}) {
            CHECK(garling_norm(g, w, p).value == garling_norm(f, w, p).value);
            // Monotonicity of the weight is not needed for this.
            CHECK(garling_norm(g, nonmono, p).value ==
                  garling_norm(f, nonmono, p).value);
        }
    }
}

TEST_CASE("sign changes are exact norm isometries; projections contract") {
    TestRng rng(99);
    const Weight w = make_weight("pow:a=0.25");
    const double p = 1.5;
    for (int t = 0; t < 60; ++t) {
        const FiniteSequence f = random_vector(rng, 7, 14);
        const SignPattern eps = SignPattern::alternating();
        CHECK(garling_norm(apply_signs(eps, f), w, p).value ==
              garling_norm(f, w, p).value);

        const std::int64_t lo = rng.uniform_int(1, 7);
        const std::int64_t hi = rng.uniform_int(lo, 14);
        const FiniteSequence pf = project(IndexSet::interval(lo, hi), f);
        CHECK(garling_norm(pf, w, p).value <=
              garling_norm(f, w, p).value + 1e-15);
    }
}

TEST_CASE("extraction contracts the norm") {
    TestRng rng(333);
    const Weight w = make_weight("pow:a=0.5");
    for (int t = 0; t < 60; ++t) {
        const FiniteSequence f = random_vector(rng, 7, 16);
        const IncreasingMap phi = random_increasing_map(rng, 16);
        const FiniteSequence g = extract(phi, f);
        for (double p : {1.0, 2.0}) {
            CHECK(garling_norm(g, w, p).value <=
                  garling_norm(f, w, p).value + 1e-15);
        }
    }
}

} // TEST_SUITE("operators")
