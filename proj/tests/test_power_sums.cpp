#include <doctest.h>

#include <algorithm>
#include <random>

#include "tickmoments/power_sums.hpp"
#include "test_util.hpp"

using namespace tickmoments;
using tmtest::catch_error;
using tmtest::rel_diff;

TEST_SUITE("power_sums") {

TEST_CASE("single tick powers by hand") {
    const auto sums = accumulate(tmtest::ticks_from_pairs({{2.0, 3.0}}), 2);
    CHECK(sums.count() == 1);
    CHECK(sums.value_sum(1) == 6.0);
    CHECK(sums.value_sum(2) == 36.0);
    CHECK(sums.volume_sum(1) == 3.0);
    CHECK(sums.volume_sum(2) == 9.0);
}

TEST_CASE("two identical ticks double every sum") {
    const auto one = accumulate(tmtest::ticks_from_pairs({{2.0, 3.0}}), 4);
    const auto two = accumulate(tmtest::ticks_from_pairs({{2.0, 3.0}, {2.0, 3.0}}), 4);
    for (int n = 1; n <= 4; ++n) {
        CHECK(two.value_sum(n) == 2.0 * one.value_sum(n));
        CHECK(two.volume_sum(n) == 2.0 * one.volume_sum(n));
    }
}

TEST_CASE("two-tick fixture sums") {
    const auto sums = accumulate(tmtest::ticks_from_pairs({{1.0, 1.0}, {3.0, 3.0}}), 1);
    CHECK(sums.value_sum(1) == 10.0);
    CHECK(sums.volume_sum(1) == 4.0);
}

TEST_CASE("to_moments divides by the count") {
    const auto sums = accumulate(tmtest::ticks_from_pairs({{1.0, 1.0}, {3.0, 3.0}}), 1);
    const auto moments = to_moments(sums);
    CHECK(moments.count == 2);
    CHECK(moments.value_moment(1) == 5.0);
    CHECK(moments.volume_moment(1) == 2.0);

    const auto single = to_moments(accumulate(tmtest::ticks_from_pairs({{2.0, 3.0}}), 3));
    CHECK(single.value_moment(1) == 6.0);
    CHECK(single.value_moment(3) == 216.0);

    // constant value tape
    const auto constant =
        to_moments(accumulate(tmtest::ticks_from_pairs({{2.0, 3.0}, {3.0, 2.0}, {6.0, 1.0}}), 4));
    for (int n = 1; n <= 4; ++n) {
        double expected = 1.0;
        for (int i = 0; i < n; ++i) expected *= 6.0;
        CHECK(constant.value_moment(n) == expected);
    }
}

TEST_CASE("empty inputs are rejected where the window is the unit") {
    CHECK(catch_error([] { to_moments(PowerSums(2)); }).code() == Errc::empty_window);
    const WindowedTrades empty{WindowSpec::from_start(0, 10, Alignment::centered), {}};
    CHECK(catch_error([&] { accumulate(empty, 2); }).code() == Errc::empty_window);
}

TEST_CASE("order bounds are enforced") {
    CHECK(catch_error([] { PowerSums(0); }).code() == Errc::invalid_argument);
    CHECK(catch_error([] { PowerSums(17); }).code() == Errc::invalid_argument);
    PowerSums a(2), b(3);
    CHECK(catch_error([&] { a.merge(b); }).code() == Errc::invalid_argument);
    CHECK(catch_error([&] { a.value_sum(3); }).code() == Errc::invalid_argument);
}

TEST_CASE("overflowing powers raise instead of poisoning sums") {
    const std::vector<TradeTick> ticks = {make_tick(0, 1e150, 1e60)};
    CHECK(catch_error([&] { accumulate(ticks, 2); }).code() == Errc::overflow);
}

TEST_CASE("merge equals one-shot accumulation on integer ticks") {
    const auto ticks =
        tmtest::ticks_from_pairs({{1.0, 2.0}, {3.0, 1.0}, {2.0, 2.0}, {5.0, 4.0}});
    const auto whole = accumulate(ticks, 4);
    for (std::size_t split = 0; split <= ticks.size(); ++split) {
        PowerSums left = accumulate(std::span(ticks).first(split), 4);
        left.merge(accumulate(std::span(ticks).subspan(split), 4));
        for (int n = 1; n <= 4; ++n) {
            CHECK(left.value_sum(n) == whole.value_sum(n));
            CHECK(left.volume_sum(n) == whole.volume_sum(n));
        }
        CHECK(left.count() == whole.count());
    }
}

TEST_CASE("empty chunks are the identity for streaming") {
    const auto ticks = tmtest::ticks_from_pairs({{2.0, 3.0}, {4.0, 1.0}});
    const std::vector<std::vector<TradeTick>> chunks = {
        {}, {ticks[0]}, {}, {ticks[1]}, {}};
    const auto streamed = accumulate_streaming(std::span(chunks), 4);
    const auto whole = accumulate(ticks, 4);
    for (int n = 1; n <= 4; ++n) {
        CHECK(streamed.value_sum(n) == whole.value_sum(n));
        CHECK(streamed.volume_sum(n) == whole.volume_sum(n));
    }
}

TEST_CASE("chunked and one-shot accumulation agree on large random tapes") {
    std::mt19937_64 rng(23);
    const auto ticks = tmtest::random_tape(rng, 100'000);
    const auto whole = accumulate(ticks, 4);
    for (const std::size_t chunk : {std::size_t{1}, std::size_t{7}, std::size_t{4096}}) {
        const auto streamed = accumulate_streaming(std::span(ticks), 4, chunk);
        CHECK(streamed.count() == whole.count());
        for (int n = 1; n <= 4; ++n) {
            CHECK(rel_diff(streamed.value_sum(n), whole.value_sum(n)) <= 1e-12);
            CHECK(rel_diff(streamed.volume_sum(n), whole.volume_sum(n)) <= 1e-12);
        }
    }
}

TEST_CASE("permutation changes sums by at most 1e-12 relative") {
    std::mt19937_64 rng(29);
    auto ticks = tmtest::random_tape(rng, 5'000);
    const auto forward = accumulate(ticks, 4);
    std::shuffle(ticks.begin(), ticks.end(), rng);
    const auto shuffled = accumulate(ticks, 4);
    for (int n = 1; n <= 4; ++n) {
        CHECK(rel_diff(forward.value_sum(n), shuffled.value_sum(n)) <= 1e-12);
        CHECK(rel_diff(forward.volume_sum(n), shuffled.volume_sum(n)) <= 1e-12);
    }
}

TEST_CASE("sums grow monotonically under accumulation") {
    std::mt19937_64 rng(31);
    const auto ticks = tmtest::random_tape(rng, 500);
    PowerSums sums(3);
    double prev_c = 0.0, prev_u = 0.0;
    for (const auto& tick : ticks) {
        sums.add_tick(tick);
        CHECK(sums.value_sum(3) > prev_c);
        CHECK(sums.volume_sum(3) > prev_u);
        prev_c = sums.value_sum(3);
        prev_u = sums.volume_sum(3);
    }
}

TEST_CASE("power-mean inequality holds for the means") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ticks = tmtest::random_tape(rng, 200);
        const auto m = to_moments(accumulate(ticks, 4));
        CHECK(m.value_moment(2) >= m.value_moment(1) * m.value_moment(1) * (1.0 - 1e-14));
        CHECK(m.volume_moment(2) >= m.volume_moment(1) * m.volume_moment(1) * (1.0 - 1e-14));
        CHECK(m.value_moment(4) >= m.value_moment(2) * m.value_moment(2) * (1.0 - 1e-14));
    }
}

TEST_CASE("volume scaling by powers of two is exact") {
    std::mt19937_64 rng(41);
    const auto ticks = tmtest::random_tape(rng, 300);
    std::vector<TradeTick> scaled;
    for (const auto& tick : ticks) {
        scaled.push_back(make_tick(tick.ts, tick.price, 2.0 * tick.volume));
    }
    const auto base = accumulate(ticks, 4);
    const auto twice = accumulate(scaled, 4);
    double factor = 1.0;
    for (int n = 1; n <= 4; ++n) {
        factor *= 2.0;
        CHECK(twice.volume_sum(n) == factor * base.volume_sum(n));
        CHECK(twice.value_sum(n) == factor * base.value_sum(n));
    }
}

TEST_CASE("compensated summation holds small terms against a large one") {
    std::vector<TradeTick> ticks = {make_tick(0, 1e16, 1.0)};
    for (int i = 1; i <= 10'000; ++i) ticks.push_back(make_tick(i, 1.0, 1.0));
    const auto sums = accumulate(ticks, 1);
    CHECK(sums.value_sum(1) == 1e16 + 10'000.0);

    double naive = 0.0;
    for (const auto& tick : ticks) naive += tick.value;
    CHECK(naive != 1e16 + 10'000.0);  // the point of compensation
}

} // TEST_SUITE
