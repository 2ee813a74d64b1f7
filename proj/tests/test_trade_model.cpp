#include <doctest.h>

#include <random>

#include "tickmoments/trade.hpp"
#include "test_util.hpp"

using namespace tickmoments;
using tmtest::catch_error;

TEST_SUITE("trade_model") {

TEST_CASE("make_tick derives value from price and volume") {
    const TradeTick tick = make_tick(0, 2.0, 3.0);
    CHECK(tick.value == 6.0);
    CHECK(tick.price == 2.0);
    CHECK(tick.volume == 3.0);
}

TEST_CASE("make_tick keeps a consistent supplied value") {
    const TradeTick identity = make_tick(0, 1.0, 1.0, 1.0);
    CHECK(identity.value == 1.0);

    // within the 1e-6 relative band: the reported value wins
    const TradeTick rounded = make_tick(0, 2.0, 3.0, 6.000004);
    CHECK(rounded.value == 6.000004);
}

TEST_CASE("make_tick rejects bad fields") {
    CHECK(catch_error([] { make_tick(0, -1.0, 3.0); }).code() == Errc::non_positive_field);
    CHECK(catch_error([] { make_tick(0, 0.0, 3.0); }).code() == Errc::non_positive_field);
    CHECK(catch_error([] { make_tick(0, 2.0, -3.0); }).code() == Errc::non_positive_field);
    CHECK(catch_error([] { make_tick(0, 2.0, 3.0, -6.0); }).code() == Errc::non_positive_field);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(catch_error([&] { make_tick(0, nan, 3.0); }).code() == Errc::non_positive_field);

    CHECK(catch_error([] { make_tick(0, 2.0, 3.0, 7.0); }).code() == Errc::inconsistent_value);
    // just past the tolerance band
    CHECK(catch_error([] { make_tick(0, 2.0, 3.0, 6.0001); }).code() == Errc::inconsistent_value);

    CHECK(catch_error([] { make_tick(0, 1e200, 1e200); }).code() == Errc::overflow);
}

TEST_CASE("value stays within the consistency band") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> price(0.01, 1e4);
    std::uniform_real_distribution<double> volume(0.01, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const TradeTick tick = make_tick(i, price(rng), volume(rng));
        const double ratio = tick.value / (tick.price * tick.volume);
        CHECK(ratio >= 1.0 - kValueConsistencyTol);
        CHECK(ratio <= 1.0 + kValueConsistencyTol);
    }
}

TEST_CASE("centered window is half-open") {
    const WindowSpec w{10, 4, Alignment::centered};
    CHECK(w.start() == 8);
    CHECK(w.end() == 12);
    CHECK(w.contains(8));
    CHECK(w.contains(11));
    CHECK_FALSE(w.contains(12));
    CHECK_FALSE(w.contains(7));
}

TEST_CASE("trailing window ends at its reference instant") {
    const WindowSpec w = WindowSpec::from_start(0, 2, Alignment::trailing);
    CHECK(w.center == 2);
    CHECK(w.start() == 0);
    CHECK(w.contains(0));
    CHECK(w.contains(1));
    CHECK_FALSE(w.contains(2));
}

TEST_CASE("from_start round-trips for both alignments and odd widths") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<TimestampNs> starts(-1'000'000'000, 1'000'000'000);
    std::uniform_int_distribution<DurationNs> widths(1, 1'000'000);
    for (int i = 0; i < 2000; ++i) {
        const TimestampNs start = starts(rng);
        const DurationNs width = widths(rng);
        for (const auto align : {Alignment::centered, Alignment::trailing}) {
            const WindowSpec w = WindowSpec::from_start(start, width, align);
            CHECK(w.start() == start);
            CHECK(w.end() == start + width);
        }
    }
}

TEST_CASE("from_start rejects non-positive widths") {
    CHECK(catch_error([] { WindowSpec::from_start(0, 0, Alignment::centered); }).code() ==
          Errc::invalid_argument);
    CHECK(catch_error([] { WindowSpec::from_start(0, -5, Alignment::trailing); }).code() ==
          Errc::invalid_argument);
}

TEST_CASE("make_windowed validates membership and order") {
    const WindowSpec w = WindowSpec::from_start(0, 10, Alignment::centered);
    auto inside = tmtest::ticks_from_pairs({{2.0, 1.0}, {3.0, 1.0}});
    const WindowedTrades ok = make_windowed(w, inside);
    CHECK(ok.count() == 2);

    std::vector<TradeTick> outside = {make_tick(10, 2.0, 1.0)};
    CHECK(catch_error([&] { make_windowed(w, outside); }).code() == Errc::invalid_argument);

    std::vector<TradeTick> unsorted = {make_tick(5, 2.0, 1.0), make_tick(3, 2.0, 1.0)};
    CHECK(catch_error([&] { make_windowed(w, unsorted); }).code() ==
          Errc::out_of_order_timestamp);
}

TEST_CASE("whole_tape_window covers every tick") {
    auto ticks = tmtest::ticks_from_pairs({{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}});
    ticks[2].ts = 1'000'000;
    const WindowedTrades window = whole_tape_window(ticks);
    CHECK(window.count() == 3);
    for (const auto& tick : window.ticks) CHECK(window.spec.contains(tick.ts));

    CHECK(catch_error([] { whole_tape_window({}); }).code() == Errc::empty_tape);
}

TEST_CASE("ties at one timestamp stay distinct and ordered") {
    std::vector<TradeTick> ticks = {make_tick(5, 1.0, 1.0), make_tick(5, 2.0, 1.0),
                                    make_tick(5, 3.0, 1.0)};
    const WindowedTrades window = whole_tape_window(ticks);
    REQUIRE(window.count() == 3);
    CHECK(window.ticks[0].price == 1.0);
    CHECK(window.ticks[1].price == 2.0);
    CHECK(window.ticks[2].price == 3.0);
}

} // TEST_SUITE
