#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tickmoments/errors.hpp"

namespace tickmoments {

// Nanoseconds since the Unix epoch.
using TimestampNs = std::int64_t;
using DurationNs = std::int64_t;

// One market trade. Invariant: value agrees with price * volume within
// kValueConsistencyTol relative, and price, volume, value are all positive
// and finite.
struct TradeTick {
    TimestampNs ts = 0;
    double price = 0.0;   // currency per unit
    double volume = 0.0;  // units
    double value = 0.0;   // currency
};

// Relative tolerance for a reported value column against price * volume;
// absorbs exchange-side rounding of reported values.
inline constexpr double kValueConsistencyTol = 1e-6;

// Builds a validated tick. When value is omitted it is derived from
// price * volume; when supplied it must agree within kValueConsistencyTol.
TradeTick make_tick(TimestampNs ts, double price, double volume,
                    std::optional<double> value = std::nullopt);

enum class Alignment { centered, trailing };

// An averaging interval: a half-open span [start, end) of the given width,
// keyed by a reference instant. Centered windows put the reference in the
// middle, trailing windows at the right edge (online use). Half-open so
// that adjacent windows tile a tape without double counting.
struct WindowSpec {
    TimestampNs center = 0;
    DurationNs width = 0;
    Alignment alignment = Alignment::centered;

    TimestampNs start() const noexcept {
        return alignment == Alignment::centered ? center - width / 2 : center - width;
    }
    TimestampNs end() const noexcept { return start() + width; }
    bool contains(TimestampNs t) const noexcept { return t >= start() && t < end(); }

    // The window whose half-open span begins at `start`.
    static WindowSpec from_start(TimestampNs start, DurationNs width, Alignment alignment);
};

// The ticks inside one window, sorted by timestamp; ties keep input order.
struct WindowedTrades {
    WindowSpec spec;
    std::vector<TradeTick> ticks;

    std::size_t count() const noexcept { return ticks.size(); }
    bool empty() const noexcept { return ticks.empty(); }
};

// Validates membership and ordering before wrapping; for ad-hoc windows.
WindowedTrades make_windowed(WindowSpec spec, std::vector<TradeTick> ticks);

// One centered window spanning every tick of a nonempty tape.
WindowedTrades whole_tape_window(std::vector<TradeTick> ticks);

} // namespace tickmoments
