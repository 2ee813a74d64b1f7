#include "tickmoments/tape_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace tickmoments {

namespace {

// ---------------------------------------------------------------------------
// Civil-calendar conversions (proleptic Gregorian, UTC, no leap seconds).
// ---------------------------------------------------------------------------

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yr + (m <= 2));
}

unsigned last_day_of_month(int y, unsigned m) {
    static constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) return 29;
    return lengths[m - 1];
}

// ---------------------------------------------------------------------------
// Field parsing
// ---------------------------------------------------------------------------

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_full_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_full_int64(std::string_view s, std::int64_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, long& out) {
    if (pos + len > s.size()) return false;
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        out = out * 10 + (s[i] - '0');
    }
    return true;
}

// Largest whole millisecond count whose nanosecond equivalent fits int64.
constexpr std::int64_t kMaxWholeMillis = std::numeric_limits<std::int64_t>::max() / 1'000'000 - 1;

// Exact text parse of decimal milliseconds: [-]digits[.digits], at most six
// fractional digits (one nanosecond resolution).
TimestampNs parse_millis_text(std::string_view text, long line) {
    const auto fail = [&]() -> Error {
        return Error(Errc::parse_error, "bad epoch-millis timestamp '" + std::string(text) + "'",
                     line);
    };
    std::string_view rest = text;
    bool negative = false;
    if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
        negative = rest.front() == '-';
        rest.remove_prefix(1);
    }
    const std::size_t dot = rest.find('.');
    const std::string_view whole = dot == std::string_view::npos ? rest : rest.substr(0, dot);
    const std::string_view frac = dot == std::string_view::npos ? "" : rest.substr(dot + 1);
    if (whole.empty() || frac.size() > 6 || (dot != std::string_view::npos && frac.empty())) {
        throw fail();
    }
    std::int64_t ms = 0;
    for (char c : whole) {
        if (c < '0' || c > '9') throw fail();
        if (ms > kMaxWholeMillis / 10) {
            throw Error(Errc::parse_error, "timestamp out of range", line);
        }
        ms = ms * 10 + (c - '0');
    }
    if (ms > kMaxWholeMillis) {
        throw Error(Errc::parse_error, "timestamp out of range", line);
    }
    std::int64_t frac_ns = 0;
    for (char c : frac) {
        if (c < '0' || c > '9') throw fail();
        frac_ns = frac_ns * 10 + (c - '0');
    }
    for (std::size_t i = frac.size(); i < 6; ++i) frac_ns *= 10;
    const std::int64_t magnitude = ms * 1'000'000 + frac_ns;
    return negative ? -magnitude : magnitude;
}

// Millisecond double split into exact integer part plus sub-millisecond
// remainder; whole milliseconds up to 2^53 convert without rounding.
TimestampNs millis_double_to_nanos(double ms, long line) {
    if (!std::isfinite(ms) || std::abs(ms) > static_cast<double>(kMaxWholeMillis)) {
        throw Error(Errc::parse_error, "timestamp out of range", line);
    }
    double whole = 0.0;
    const double frac = std::modf(ms, &whole);
    return static_cast<std::int64_t>(whole) * 1'000'000 + std::llround(frac * 1e6);
}

TimestampNs parse_timestamp_field(std::string_view text, TimestampFormat fmt, long line) {
    switch (fmt) {
        case TimestampFormat::epoch_nanos: {
            std::int64_t ns;
            if (!parse_full_int64(text, ns)) {
                throw Error(Errc::parse_error,
                            "bad epoch-nanos timestamp '" + std::string(text) + "'", line);
            }
            return ns;
        }
        case TimestampFormat::epoch_millis:
            return parse_millis_text(text, line);
        case TimestampFormat::iso8601: {
            try {
                return parse_iso8601(text);
            } catch (const Error& e) {
                throw Error(Errc::parse_error, e.detail(), line);
            }
        }
    }
    throw Error(Errc::parse_error, "unknown timestamp format", line);
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

enum class Column { ts, price, volume, value, id, agent_id, expectation };

std::vector<Column> parse_csv_header(std::string_view line, long line_no) {
    const auto raw = split_csv(line);
    std::vector<Column> columns;
    columns.reserve(raw.size());
    bool seen[7] = {};
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::string_view name = trim(raw[i]);
        Column col;
        if (name == "ts") col = Column::ts;
        else if (name == "price") col = Column::price;
        else if (name == "volume") col = Column::volume;
        else if (name == "value") col = Column::value;
        else if (name == "id") col = Column::id;
        else if (name == "agent_id") col = Column::agent_id;
        else if (name == "expectation") col = Column::expectation;
        else {
            throw Error(Errc::parse_error, "unknown column '" + std::string(name) + "'", line_no);
        }
        if (seen[static_cast<int>(col)]) {
            throw Error(Errc::parse_error, "duplicate column '" + std::string(name) + "'", line_no);
        }
        seen[static_cast<int>(col)] = true;
        columns.push_back(col);
    }
    if (columns.size() < 3 || columns[0] != Column::ts || columns[1] != Column::price ||
        columns[2] != Column::volume) {
        throw Error(Errc::parse_error, "header must start with ts,price,volume", line_no);
    }
    return columns;
}

TapeRecord parse_csv_row(std::string_view line, const std::vector<Column>& columns,
                         const TapeFormat& format, long line_no) {
    const auto fields = split_csv(line);
    if (fields.size() != columns.size()) {
        throw Error(Errc::parse_error,
                    "expected " + std::to_string(columns.size()) + " fields, got " +
                        std::to_string(fields.size()),
                    line_no);
    }
    TimestampNs ts = 0;
    double price = 0.0, volume = 0.0;
    std::optional<double> value;
    TapeRecord record;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const std::string_view field = trim(fields[i]);
        const bool optional_col = columns[i] != Column::ts && columns[i] != Column::price &&
                                  columns[i] != Column::volume;
        if (field.empty()) {
            if (optional_col) continue;
            throw Error(Errc::parse_error, "empty required field", line_no);
        }
        switch (columns[i]) {
            case Column::ts:
                ts = parse_timestamp_field(field, format.timestamp_format, line_no);
                break;
            case Column::price:
                if (!parse_full_double(field, price)) {
                    throw Error(Errc::parse_error, "bad price '" + std::string(field) + "'", line_no);
                }
                break;
            case Column::volume:
                if (!parse_full_double(field, volume)) {
                    throw Error(Errc::parse_error, "bad volume '" + std::string(field) + "'", line_no);
                }
                break;
            case Column::value: {
                double v;
                if (!parse_full_double(field, v)) {
                    throw Error(Errc::parse_error, "bad value '" + std::string(field) + "'", line_no);
                }
                value = v;
                break;
            }
            case Column::id:
                record.trade_id = std::string(field);
                break;
            case Column::agent_id:
                record.agent_id = std::string(field);
                break;
            case Column::expectation: {
                double e;
                if (!parse_full_double(field, e) || !std::isfinite(e)) {
                    throw Error(Errc::parse_error, "bad expectation '" + std::string(field) + "'",
                                line_no);
                }
                record.expectation = e;
                break;
            }
        }
    }
    try {
        record.tick = make_tick(ts, price, volume, value);
    } catch (const Error& e) {
        throw Error(e.code(), e.detail(), line_no);
    }
    return record;
}

TapeRecord parse_json_row(const std::string& line, const TapeFormat& format, long line_no) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, e.what(), line_no);
    }
    if (!obj.is_object()) {
        throw Error(Errc::parse_error, "each line must be a JSON object", line_no);
    }
    static const char* known[] = {"ts", "price", "volume", "value", "id", "agent_id", "expectation"};
    for (const auto& item : obj.items()) {
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return item.key() == k; }) == std::end(known)) {
            throw Error(Errc::parse_error, "unknown key '" + item.key() + "'", line_no);
        }
    }
    for (const char* required : {"ts", "price", "volume"}) {
        if (!obj.contains(required)) {
            throw Error(Errc::parse_error, std::string("missing key '") + required + "'", line_no);
        }
    }

    TimestampNs ts = 0;
    const auto& ts_json = obj["ts"];
    switch (format.timestamp_format) {
        case TimestampFormat::epoch_nanos:
            if (!ts_json.is_number_integer() && !ts_json.is_number_unsigned()) {
                throw Error(Errc::parse_error, "'ts' must be an integer nanosecond count", line_no);
            }
            ts = ts_json.get<std::int64_t>();
            break;
        case TimestampFormat::epoch_millis:
            if (ts_json.is_number_integer() || ts_json.is_number_unsigned()) {
                const auto ms = ts_json.get<std::int64_t>();
                if (ms > kMaxWholeMillis || ms < -kMaxWholeMillis) {
                    throw Error(Errc::parse_error, "timestamp out of range", line_no);
                }
                ts = ms * 1'000'000;
            } else if (ts_json.is_number_float()) {
                ts = millis_double_to_nanos(ts_json.get<double>(), line_no);
            } else {
                throw Error(Errc::parse_error, "'ts' must be a millisecond number", line_no);
            }
            break;
        case TimestampFormat::iso8601:
            if (!ts_json.is_string()) {
                throw Error(Errc::parse_error, "'ts' must be an ISO-8601 string", line_no);
            }
            try {
                ts = parse_iso8601(ts_json.get<std::string>());
            } catch (const Error& e) {
                throw Error(Errc::parse_error, e.detail(), line_no);
            }
            break;
    }

    auto number_field = [&](const char* key) -> double {
        const auto& v = obj[key];
        if (!v.is_number()) {
            throw Error(Errc::parse_error, std::string("'") + key + "' must be a number", line_no);
        }
        return v.get<double>();
    };

    TapeRecord record;
    std::optional<double> value;
    if (obj.contains("value")) value = number_field("value");
    if (obj.contains("expectation")) record.expectation = number_field("expectation");
    if (obj.contains("id")) {
        const auto& v = obj["id"];
        if (v.is_string()) record.trade_id = v.get<std::string>();
        else if (v.is_number_integer() || v.is_number_unsigned())
            record.trade_id = std::to_string(v.get<std::int64_t>());
        else throw Error(Errc::parse_error, "'id' must be a string or integer", line_no);
    }
    if (obj.contains("agent_id")) {
        const auto& v = obj["agent_id"];
        if (v.is_string()) record.agent_id = v.get<std::string>();
        else if (v.is_number_integer() || v.is_number_unsigned())
            record.agent_id = std::to_string(v.get<std::int64_t>());
        else throw Error(Errc::parse_error, "'agent_id' must be a string or integer", line_no);
    }
    try {
        record.tick = make_tick(ts, number_field("price"), number_field("volume"), value);
    } catch (const Error& e) {
        throw Error(e.code(), e.detail(), line_no);
    }
    return record;
}

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_timestamp(std::string& out, TimestampNs ts, TimestampFormat fmt) {
    switch (fmt) {
        case TimestampFormat::epoch_nanos:
            out += std::to_string(ts);
            return;
        case TimestampFormat::epoch_millis: {
            // Exact decimal milliseconds via integer arithmetic.
            std::int64_t ms = ts / 1'000'000;
            std::int64_t rem = ts % 1'000'000;
            if (rem < 0) {
                ms -= 1;
                rem += 1'000'000;
            }
            out += std::to_string(ms);
            if (rem != 0) {
                char buf[8];
                std::snprintf(buf, sizeof buf, ".%06lld", static_cast<long long>(rem));
                std::string_view frac(buf);
                while (frac.back() == '0') frac.remove_suffix(1);
                out += frac;
            }
            return;
        }
        case TimestampFormat::iso8601:
            out += format_iso8601(ts);
            return;
    }
}

} // namespace

TimestampNs parse_iso8601(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS[.fffffffff][Z]
    const auto fail = [&]() -> Error {
        return Error(Errc::parse_error, "bad ISO-8601 timestamp '" + std::string(text) + "'");
    };
    long year, month, day, hour, minute, second;
    if (text.size() < 19) throw fail();
    if (!parse_fixed_uint(text, 0, 4, year) || text[4] != '-' ||
        !parse_fixed_uint(text, 5, 2, month) || text[7] != '-' ||
        !parse_fixed_uint(text, 8, 2, day) || text[10] != 'T' ||
        !parse_fixed_uint(text, 11, 2, hour) || text[13] != ':' ||
        !parse_fixed_uint(text, 14, 2, minute) || text[16] != ':' ||
        !parse_fixed_uint(text, 17, 2, second)) {
        throw fail();
    }
    std::size_t pos = 19;
    std::int64_t frac_ns = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (digits < 9) frac_ns = frac_ns * 10 + (text[pos] - '0');
            ++digits;
            ++pos;
        }
        if (digits == 0 || digits > 9) throw fail();
        for (std::size_t i = digits; i < 9; ++i) frac_ns *= 10;
    }
    if (pos < text.size() && text[pos] == 'Z') ++pos;
    if (pos != text.size()) throw fail();
    if (month < 1 || month > 12 || day < 1 ||
        day > static_cast<long>(last_day_of_month(static_cast<int>(year), static_cast<unsigned>(month))) ||
        hour > 23 || minute > 59 || second > 59) {
        throw fail();
    }
    const std::int64_t days =
        days_from_civil(static_cast<int>(year), static_cast<unsigned>(month), static_cast<unsigned>(day));
    return ((days * 86400 + hour * 3600 + minute * 60 + second) * 1'000'000'000) + frac_ns;
}

std::string format_iso8601(TimestampNs ts) {
    std::int64_t secs = ts / 1'000'000'000;
    std::int64_t frac = ts % 1'000'000'000;
    if (frac < 0) {
        secs -= 1;
        frac += 1'000'000'000;
    }
    std::int64_t days = secs / 86400;
    std::int64_t sod = secs % 86400;
    if (sod < 0) {
        days -= 1;
        sod += 86400;
    }
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[48];
    if (frac == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d,
                      static_cast<long long>(sod / 3600), static_cast<long long>(sod / 60 % 60),
                      static_cast<long long>(sod % 60));
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%09lldZ", y, m, d,
                      static_cast<long long>(sod / 3600), static_cast<long long>(sod / 60 % 60),
                      static_cast<long long>(sod % 60), static_cast<long long>(frac));
    }
    return std::string(buf);
}

std::vector<TapeRecord> parse_tape_records(std::istream& source, const TapeFormat& format) {
    std::vector<TapeRecord> records;
    std::string line;
    long line_no = 0;
    std::vector<Column> columns;
    bool header_seen = false;
    while (std::getline(source, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        if (format.kind == TapeKind::csv && !header_seen) {
            columns = parse_csv_header(view, line_no);
            header_seen = true;
            continue;
        }
        TapeRecord record = format.kind == TapeKind::csv
                                ? parse_csv_row(view, columns, format, line_no)
                                : parse_json_row(std::string(view), format, line_no);
        if (!records.empty() && record.tick.ts < records.back().tick.ts) {
            throw Error(Errc::out_of_order_timestamp,
                        "timestamp " + std::to_string(record.tick.ts) + " precedes " +
                            std::to_string(records.back().tick.ts),
                        line_no);
        }
        records.push_back(std::move(record));
    }
    if (format.kind == TapeKind::csv && !header_seen) {
        throw Error(Errc::parse_error, "missing CSV header", 1);
    }
    return records;
}

std::vector<TradeTick> parse_tape(std::istream& source, const TapeFormat& format) {
    const auto records = parse_tape_records(source, format);
    std::vector<TradeTick> ticks;
    ticks.reserve(records.size());
    for (const auto& r : records) ticks.push_back(r.tick);
    return ticks;
}

void write_tape(std::ostream& out, std::span<const TradeTick> ticks, const TapeFormat& format) {
    std::string buf;
    if (format.kind == TapeKind::csv) {
        buf = format.has_value_column ? "ts,price,volume,value\n" : "ts,price,volume\n";
        for (const auto& t : ticks) {
            append_timestamp(buf, t.ts, format.timestamp_format);
            buf += ',';
            append_double(buf, t.price);
            buf += ',';
            append_double(buf, t.volume);
            if (format.has_value_column) {
                buf += ',';
                append_double(buf, t.value);
            }
            buf += '\n';
        }
    } else {
        for (const auto& t : ticks) {
            buf += "{\"ts\":";
            if (format.timestamp_format == TimestampFormat::iso8601) {
                buf += '"';
                append_timestamp(buf, t.ts, format.timestamp_format);
                buf += '"';
            } else {
                append_timestamp(buf, t.ts, format.timestamp_format);
            }
            buf += ",\"price\":";
            append_double(buf, t.price);
            buf += ",\"volume\":";
            append_double(buf, t.volume);
            if (format.has_value_column) {
                buf += ",\"value\":";
                append_double(buf, t.value);
            }
            buf += "}\n";
        }
    }
    out << buf;
}

std::vector<WindowedTrades> partition_windows(std::vector<TradeTick> ticks, DurationNs width,
                                              Alignment alignment) {
    if (width <= 0) {
        throw Error(Errc::invalid_argument, "window width must be positive");
    }
    if (ticks.empty()) {
        throw Error(Errc::empty_tape, "no ticks to partition");
    }
    for (std::size_t i = 1; i < ticks.size(); ++i) {
        if (ticks[i].ts < ticks[i - 1].ts) {
            throw Error(Errc::out_of_order_timestamp, "ticks must be sorted by timestamp");
        }
    }
    const TimestampNs t0 = ticks.front().ts;
    const TimestampNs t_last = ticks.back().ts;
    if (t_last > std::numeric_limits<TimestampNs>::max() - width) {
        throw Error(Errc::invalid_argument, "tape span plus width overflows the time axis");
    }
    const std::int64_t n_windows = (t_last - t0) / width + 1;
    if (n_windows > 100'000'000) {
        throw Error(Errc::invalid_argument,
                    "window width produces more than 1e8 windows over this tape");
    }
    std::vector<WindowedTrades> windows;
    windows.reserve(static_cast<std::size_t>(n_windows));
    std::size_t i = 0;
    for (std::int64_t w = 0; w < n_windows; ++w) {
        WindowSpec spec = WindowSpec::from_start(t0 + w * width, width, alignment);
        std::vector<TradeTick> bucket;
        while (i < ticks.size() && ticks[i].ts < spec.end()) {
            bucket.push_back(ticks[i]);
            ++i;
        }
        windows.push_back(WindowedTrades{spec, std::move(bucket)});
    }
    return windows;
}

} // namespace tickmoments
