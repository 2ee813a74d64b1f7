#include "tickmoments/trade.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tickmoments {

TradeTick make_tick(TimestampNs ts, double price, double volume,
                    std::optional<double> value) {
    if (!(price > 0.0) || !std::isfinite(price)) {
        throw Error(Errc::non_positive_field,
                    "price must be positive and finite, got " + std::to_string(price));
    }
    if (!(volume > 0.0) || !std::isfinite(volume)) {
        throw Error(Errc::non_positive_field,
                    "volume must be positive and finite, got " + std::to_string(volume));
    }
    const double derived = price * volume;
    if (!std::isfinite(derived)) {
        throw Error(Errc::overflow, "price * volume overflows");
    }
    if (!value) {
        return TradeTick{ts, price, volume, derived};
    }
    const double v = *value;
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(Errc::non_positive_field,
                    "value must be positive and finite, got " + std::to_string(v));
    }
    if (std::abs(v - derived) / v > kValueConsistencyTol) {
        throw Error(Errc::inconsistent_value,
                    "value " + std::to_string(v) + " disagrees with price * volume = " +
                        std::to_string(derived));
    }
    return TradeTick{ts, price, volume, v};
}

WindowSpec WindowSpec::from_start(TimestampNs start, DurationNs width, Alignment alignment) {
    if (width <= 0) {
        throw Error(Errc::invalid_argument, "window width must be positive");
    }
    WindowSpec spec;
    spec.width = width;
    spec.alignment = alignment;
    spec.center = alignment == Alignment::centered ? start + width / 2 : start + width;
    return spec;
}

WindowedTrades make_windowed(WindowSpec spec, std::vector<TradeTick> ticks) {
    if (spec.width <= 0) {
        throw Error(Errc::invalid_argument, "window width must be positive");
    }
    for (std::size_t i = 0; i < ticks.size(); ++i) {
        if (!spec.contains(ticks[i].ts)) {
            throw Error(Errc::invalid_argument,
                        "tick " + std::to_string(i) + " lies outside the window");
        }
        if (i > 0 && ticks[i].ts < ticks[i - 1].ts) {
            throw Error(Errc::out_of_order_timestamp,
                        "ticks must be sorted by timestamp");
        }
    }
    return WindowedTrades{spec, std::move(ticks)};
}

WindowedTrades whole_tape_window(std::vector<TradeTick> ticks) {
    if (ticks.empty()) {
        throw Error(Errc::empty_tape, "no ticks");
    }
    const TimestampNs first = ticks.front().ts;
    const TimestampNs last = ticks.back().ts;
    // Half-open window, so extend one tick past the last timestamp.
    const DurationNs width = last - first + 1;
    return make_windowed(WindowSpec::from_start(first, width, Alignment::centered),
                         std::move(ticks));
}

} // namespace tickmoments
