#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "garling/sequence.hpp"
#include "test_support.hpp"

using namespace garling;

TEST_SUITE("sequences") {

TEST_CASE("entries are sorted, zeros dropped, duplicates rejected") {
    const auto f = FiniteSequence::from_entries({{5, 2.0}, {1, -1.0}, {3, 0.0}});
    REQUIRE(f.support_size() == 2);
    CHECK(f.entries()[0].index == 1);
    CHECK(f.entries()[0].value == -1.0);
    CHECK(f.entries()[1].index == 5);
    CHECK(f.support() == std::vector<std::int64_t>{1, 5});

    CHECK_THROWS_AS(FiniteSequence::from_entries({{2, 1.0}, {2, 3.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FiniteSequence::from_entries({{0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteSequence::from_entries({{-4, 1.0}}), std::invalid_argument);
}

TEST_CASE("dense construction is 1-based and sparse") {
    const auto f = FiniteSequence::from_dense({0.0, 2.5, 0.0, -1.0});
    REQUIRE(f.support_size() == 2);
    CHECK(f.at(2) == 2.5);
    CHECK(f.at(4) == -1.0);
    CHECK(f.at(1) == 0.0);
    CHECK(f.at(99) == 0.0);
    CHECK(f.min_index() == 2);
    CHECK(f.max_index() == 4);
    CHECK(f.max_abs_value() == 2.5);

    const FiniteSequence zero = FiniteSequence::from_dense({0.0, 0.0});
    CHECK(zero.empty());
    CHECK(zero.max_index() == 0);
    CHECK(zero.min_index() == 0);
}

TEST_CASE("factories: constant interval, indicator, unit") {
    const auto c = FiniteSequence::constant_on(4, 3, 0.5);
    CHECK(c.support() == std::vector<std::int64_t>{4, 5, 6});
    CHECK(c.at(5) == 0.5);

    const auto ind = FiniteSequence::indicator({7, 2, 9});
    CHECK(ind.support() == std::vector<std::int64_t>{2, 7, 9});
    CHECK(ind.at(7) == 1.0);

    const auto u = FiniteSequence::unit(3, -2.0);
    CHECK(u.support() == std::vector<std::int64_t>{3});
    CHECK(u.at(3) == -2.0);
}

TEST_CASE("scaling, coordinate removal, disjoint sums") {
    const auto f = FiniteSequence::from_dense({1.0, -2.0});
    const auto g = f.scaled(-0.5);
    CHECK(g.at(1) == -0.5);
    CHECK(g.at(2) == 1.0);
    CHECK(f.scaled(0.0).empty());

    const auto h = f.without_index(1);
    CHECK(h.support() == std::vector<std::int64_t>{2});
    CHECK(f.without_index(42) == f);

    const auto a = FiniteSequence::from_entries({{1, 1.0}, {4, 2.0}});
    const auto b = FiniteSequence::from_entries({{2, -1.0}, {6, 1.0}});
    const auto s = FiniteSequence::disjoint_sum(a, b);
    CHECK(s.support() == std::vector<std::int64_t>{1, 2, 4, 6});
    CHECK_THROWS_AS(FiniteSequence::disjoint_sum(a, a), std::invalid_argument);
}

TEST_CASE("decreasing rearrangement sorts absolute values, stably") {
    const auto f = FiniteSequence::from_entries({{2, -3.0}, {5, 1.0}, {9, 2.0}, {11, -2.0}});
    const auto r = decreasing_rearrangement(f);
    CHECK(r == std::vector<double>{3.0, 2.0, 2.0, 1.0});
    CHECK(decreasing_rearrangement(FiniteSequence()).empty());
}

TEST_CASE("selections must be strictly increasing and 1-based") {
    const auto s = Selection::of({1, 4, 9});
    CHECK(s.size() == 3);
    CHECK_THROWS_AS(Selection::of({3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(Selection::of({4, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Selection::of({0, 1}), std::invalid_argument);
    CHECK(Selection::of({}).empty());
}

TEST_CASE("sign patterns: defaults, alternation, cycles, explicit maps") {
    const SignPattern id = SignPattern::all_ones();
    CHECK(id.at(1) == 1.0);
    CHECK(id.at(1000) == 1.0);

    const SignPattern alt = SignPattern::alternating();
    CHECK(alt.at(1) == 1.0);
    CHECK(alt.at(2) == -1.0);
    CHECK(alt.at(7) == 1.0);

    const SignPattern cyc = SignPattern::cycled("+-");
    for (std::int64_t n = 1; n <= 20; ++n) {
        CHECK(cyc.at(n) == alt.at(n));
    }
    const SignPattern three = SignPattern::cycled("++-");
    CHECK(three.at(1) == 1.0);
    CHECK(three.at(2) == 1.0);
    CHECK(three.at(3) == -1.0);
    CHECK(three.at(4) == 1.0);
    CHECK_THROWS_AS(SignPattern::cycled(""), std::invalid_argument);
    CHECK_THROWS_AS(SignPattern::cycled("+x"), std::invalid_argument);

    const SignPattern m = SignPattern::from_map({{3, -1.0}, {5, 1.0}});
    CHECK(m.at(3) == -1.0);
    CHECK(m.at(5) == 1.0);
    CHECK(m.at(4) == 1.0); // default off the map
    CHECK_THROWS_AS(SignPattern::from_map({{1, 0.5}}), std::invalid_argument);
}

TEST_CASE("random vector generator respects its bounds") {
    testing::TestRng rng(42);
    for (int t = 0; t < 50; ++t) {
        const FiniteSequence f = testing::random_vector(rng, 6, 30);
        REQUIRE(!f.empty());
        CHECK(f.support_size() <= 6);
        CHECK(f.max_index() <= 30);
        CHECK(f.min_index() >= 1);
        for (const auto& e : f.entries()) {
            CHECK(e.value != 0.0);
            CHECK(std::abs(e.value) <= 1.0);
        }
    }
}

} // TEST_SUITE("sequences")
