#pragma once

#include <cstdint>
#include <cstdio>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace tickmoments {

// Deterministic JSON emitter: keys stay in insertion order and doubles are
// rendered with %.15g, so identical inputs serialize to identical bytes.
// (nlohmann::json is used for parsing only; its unordered maps and
// shortest-round-trip floats would break that guarantee.)
class JsonWriter {
public:
    explicit JsonWriter(int indent = 2) : indent_(indent) {}

    JsonWriter& begin_object() {
        prefix();
        buf_ += '{';
        stack_.push_back({true, false});
        return *this;
    }

    JsonWriter& end_object() {
        close('}');
        return *this;
    }

    JsonWriter& begin_array() {
        prefix();
        buf_ += '[';
        stack_.push_back({false, false});
        return *this;
    }

    JsonWriter& end_array() {
        close(']');
        return *this;
    }

    JsonWriter& key(std::string_view name) {
        prefix();
        append_string(name);
        buf_ += ": ";
        pending_value_ = true;
        return *this;
    }

    JsonWriter& value(double v) {
        prefix();
        if (!std::isfinite(v)) {
            buf_ += "null";
        } else {
            char tmp[32];
            std::snprintf(tmp, sizeof tmp, "%.15g", v);
            buf_ += tmp;
        }
        return *this;
    }

    JsonWriter& value(std::int64_t v) {
        prefix();
        buf_ += std::to_string(v);
        return *this;
    }

    JsonWriter& value(std::uint64_t v) {
        prefix();
        buf_ += std::to_string(v);
        return *this;
    }

    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }

    JsonWriter& value(std::string_view v) {
        prefix();
        append_string(v);
        return *this;
    }

    JsonWriter& value(const char* v) { return value(std::string_view(v)); }

    JsonWriter& value(bool v) {
        prefix();
        buf_ += v ? "true" : "false";
        return *this;
    }

    JsonWriter& null() {
        prefix();
        buf_ += "null";
        return *this;
    }

    const std::string& str() const { return buf_; }

private:
    struct Frame {
        bool is_object;
        bool has_items;
    };

    void prefix() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (stack_.empty()) return;
        if (stack_.back().has_items) buf_ += ',';
        stack_.back().has_items = true;
        newline_indent(stack_.size());
    }

    void close(char bracket) {
        const bool had_items = stack_.back().has_items;
        stack_.pop_back();
        if (had_items) newline_indent(stack_.size());
        buf_ += bracket;
    }

    void newline_indent(std::size_t depth) {
        buf_ += '\n';
        buf_.append(depth * static_cast<std::size_t>(indent_), ' ');
    }

    void append_string(std::string_view s) {
        buf_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': buf_ += "\\\""; break;
                case '\\': buf_ += "\\\\"; break;
                case '\n': buf_ += "\\n"; break;
                case '\r': buf_ += "\\r"; break;
                case '\t': buf_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char tmp[8];
                        std::snprintf(tmp, sizeof tmp, "\\u%04x", c);
                        buf_ += tmp;
                    } else {
                        buf_ += c;
                    }
            }
        }
        buf_ += '"';
    }

    int indent_;
    std::string buf_;
    std::vector<Frame> stack_;
    bool pending_value_ = false;
};

} // namespace tickmoments
