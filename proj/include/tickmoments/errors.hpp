#pragma once

#include <stdexcept>
#include <string>

namespace tickmoments {

// Error conditions surfaced by the library. The CLI maps them onto its
// exit-code contract: input/validation problems exit 1, numerical
// problems exit 2.
enum class Errc {
    non_positive_field,
    inconsistent_value,
    parse_error,
    out_of_order_timestamp,
    empty_tape,
    empty_window,
    overflow,
    degenerate_volume,
    bad_bins,
    insufficient_moments,
    negative_variance,
    zero_variance,
    quadrature_failure,
    bad_spec,
    empty_window_all,
    missing_expectations,
    invalid_argument,
};

inline const char* errc_name(Errc code) {
    switch (code) {
        case Errc::non_positive_field:     return "NonPositiveField";
        case Errc::inconsistent_value:     return "InconsistentValue";
        case Errc::parse_error:            return "ParseError";
        case Errc::out_of_order_timestamp: return "OutOfOrderTimestamp";
        case Errc::empty_tape:             return "EmptyTape";
        case Errc::empty_window:           return "EmptyWindow";
        case Errc::overflow:               return "Overflow";
        case Errc::degenerate_volume:      return "DegenerateVolume";
        case Errc::bad_bins:               return "BadBins";
        case Errc::insufficient_moments:   return "InsufficientMoments";
        case Errc::negative_variance:      return "NegativeVariance";
        case Errc::zero_variance:          return "ZeroVariance";
        case Errc::quadrature_failure:     return "QuadratureFailure";
        case Errc::bad_spec:               return "BadSpec";
        case Errc::empty_window_all:       return "EmptyWindowAll";
        case Errc::missing_expectations:   return "MissingExpectations";
        case Errc::invalid_argument:       return "InvalidArgument";
    }
    return "UnknownError";
}

// True for conditions produced by the numbers themselves rather than by
// malformed input or flags.
inline bool errc_is_numerical(Errc code) {
    switch (code) {
        case Errc::overflow:
        case Errc::degenerate_volume:
        case Errc::negative_variance:
        case Errc::zero_variance:
        case Errc::quadrature_failure:
        case Errc::empty_window:
        case Errc::empty_window_all:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, long line = -1)
        : std::runtime_error(line >= 0
              ? std::string(errc_name(code)) + ": " + message + " (line " + std::to_string(line) + ")"
              : std::string(errc_name(code)) + ": " + message),
          code_(code),
          line_(line),
          detail_(message) {}

    Errc code() const noexcept { return code_; }
    // 1-based input line for parse-stage errors, -1 otherwise.
    long line() const noexcept { return line_; }
    // The message without the error-name prefix and line suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    long line_;
    std::string detail_;
};

} // namespace tickmoments
