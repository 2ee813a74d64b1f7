#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tickmoments/trade.hpp"

namespace tickmoments {

enum class TapeKind { csv, json_lines };
enum class TimestampFormat { epoch_nanos, epoch_millis, iso8601 };

struct TapeFormat {
    TapeKind kind = TapeKind::csv;
    TimestampFormat timestamp_format = TimestampFormat::epoch_nanos;
    // Writers emit the value column iff set. Readers always honor the file
    // content: a value column/key is used whenever present.
    bool has_value_column = true;
};

// One parsed tape row: the tick plus the optional annotation columns of
// agent tapes. Empty strings mean the column was absent or blank.
struct TapeRecord {
    TradeTick tick;
    std::string trade_id;
    std::string agent_id;
    std::optional<double> expectation;
};

// Canonical tape schemas.
//   CSV: header ts,price,volume with optional columns value,id,agent_id,
//        expectation (any order after the first three); decimal point,
//        no thousands separators; LF or CRLF.
//   JSON lines: one object per line, keys "ts","price","volume" and the
//        same optional keys.
// Rows must arrive in nondecreasing timestamp order; out-of-order input is
// an error, never silently sorted. Line numbers in errors are 1-based
// physical lines (the CSV header is line 1).
std::vector<TapeRecord> parse_tape_records(std::istream& source, const TapeFormat& format);
std::vector<TradeTick> parse_tape(std::istream& source, const TapeFormat& format);

void write_tape(std::ostream& out, std::span<const TradeTick> ticks, const TapeFormat& format);

// Splits a sorted tape into consecutive half-open windows of equal width
// tiling [first tick, last tick]. Every tick lands in exactly one window;
// gaps produce empty windows so indices stay aligned across runs.
std::vector<WindowedTrades> partition_windows(std::vector<TradeTick> ticks,
                                              DurationNs width, Alignment alignment);

// UTC timestamps of the form YYYY-MM-DDTHH:MM:SS[.fffffffff][Z].
TimestampNs parse_iso8601(std::string_view text);
std::string format_iso8601(TimestampNs ts);

} // namespace tickmoments
