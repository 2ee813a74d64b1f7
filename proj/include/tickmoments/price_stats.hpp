#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tickmoments/power_sums.hpp"
#include "tickmoments/trade.hpp"

namespace tickmoments {

// Moment-based price statistics p(n) = C(n)/U(n) plus the scalar summaries
// derived from them. p(1) is the VWAP; variance, skewness and kurtosis here
// describe the volume-weighted price distribution, not the per-trade one.
struct PriceMoments {
    int n_max = 0;
    std::int64_t count = 0;
    std::vector<double> p;  // p(1..n_max)
    double mean = 0.0;      // p(1)

    // variance_raw = p(2) - p(1)^2 exactly as computed. variance is clamped
    // at zero; variance_clamped records that the raw value was negative.
    // Rounding residue down to -1e-12*p(2) is expected; anything below that
    // is genuine price/volume anticorrelation and is rejected downstream by
    // fit_charfn. Present iff n_max >= 2.
    std::optional<double> variance;
    std::optional<double> variance_raw;
    bool variance_clamped = false;

    std::optional<double> skewness;         // present iff n_max >= 3, zero when variance is
    std::optional<double> excess_kurtosis;  // present iff n_max >= 4, zero when variance is

    double price_moment(int n) const { return p.at(static_cast<std::size_t>(n - 1)); }
};

// Relative width of the rounding band below zero that variance clamping
// absorbs silently.
inline constexpr double kVarianceBandRel = 1e-12;

PriceMoments price_moments_from_trades(const TradeMoments& moments);
PriceMoments price_moments_from_trades(std::span<const TradeTick> ticks, int n_max);

double vwap(const WindowedTrades& window);

// Histogram binning for the frequency-based (each trade counts once)
// distributions. Prices usually live on a discrete grid, so exact-value
// bins are the default; width/edge based rules cover continuous data.
struct BinningRule {
    enum class Kind { exact_values, fixed_width, explicit_edges };

    Kind kind = Kind::exact_values;
    double width = 0.0;
    std::vector<double> edges;

    static BinningRule exact() { return {}; }
    static BinningRule fixed(double width) {
        return {Kind::fixed_width, width, {}};
    }
    static BinningRule with_edges(std::vector<double> edges) {
        return {Kind::explicit_edges, 0.0, std::move(edges)};
    }
};

struct FrequencyDistribution {
    std::vector<double> bin_edges;  // k+1 interval edges; empty for exact-value bins
    std::vector<double> values;     // one representative value per bin
    std::vector<std::int64_t> counts;
    std::vector<double> probabilities;  // counts / total
    std::int64_t total = 0;
};

struct FrequencyStats {
    FrequencyDistribution distribution;
    double mean = 0.0;  // (1/N) sum of raw samples, independent of binning
};

FrequencyStats frequency_price_stats(const WindowedTrades& window, const BinningRule& bins);

struct ValueVolumeDistributions {
    FrequencyDistribution value;
    FrequencyDistribution volume;
};

ValueVolumeDistributions frequency_value_volume_stats(const WindowedTrades& window,
                                                      const BinningRule& bins);

// Sample Pearson correlation of the (price, volume) pairs; empty when fewer
// than two ticks or either series is constant.
std::optional<double> price_volume_correlation(std::span<const TradeTick> ticks);

} // namespace tickmoments
