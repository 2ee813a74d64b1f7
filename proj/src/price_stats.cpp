#include "tickmoments/price_stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "tickmoments/errors.hpp"

namespace tickmoments {

namespace {

FrequencyDistribution build_distribution(std::span<const double> samples,
                                         const BinningRule& rule) {
    FrequencyDistribution dist;
    dist.total = static_cast<std::int64_t>(samples.size());

    switch (rule.kind) {
        case BinningRule::Kind::exact_values: {
            std::map<double, std::int64_t> counts;
            for (double x : samples) ++counts[x];
            dist.values.reserve(counts.size());
            dist.counts.reserve(counts.size());
            for (const auto& [value, count] : counts) {
                dist.values.push_back(value);
                dist.counts.push_back(count);
            }
            break;
        }
        case BinningRule::Kind::fixed_width: {
            if (!(rule.width > 0.0) || !std::isfinite(rule.width)) {
                throw Error(Errc::bad_bins, "bin width must be positive and finite");
            }
            const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
            const double origin = std::floor(*lo_it / rule.width) * rule.width;
            const double span = (*hi_it - origin) / rule.width;
            if (span > 10'000'000.0) {
                throw Error(Errc::bad_bins, "bin width produces more than 1e7 bins");
            }
            const std::size_t n_bins = static_cast<std::size_t>(span) + 1;
            dist.bin_edges.resize(n_bins + 1);
            for (std::size_t j = 0; j <= n_bins; ++j) {
                dist.bin_edges[j] = origin + static_cast<double>(j) * rule.width;
            }
            dist.counts.assign(n_bins, 0);
            for (double x : samples) {
                auto j = static_cast<std::size_t>((x - origin) / rule.width);
                if (j >= n_bins) j = n_bins - 1;
                ++dist.counts[j];
            }
            dist.values.resize(n_bins);
            for (std::size_t j = 0; j < n_bins; ++j) {
                dist.values[j] = origin + (static_cast<double>(j) + 0.5) * rule.width;
            }
            break;
        }
        case BinningRule::Kind::explicit_edges: {
            const auto& edges = rule.edges;
            if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
                std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
                throw Error(Errc::bad_bins, "bin edges must be strictly increasing");
            }
            const std::size_t n_bins = edges.size() - 1;
            dist.bin_edges = edges;
            dist.counts.assign(n_bins, 0);
            for (double x : samples) {
                if (x < edges.front() || x > edges.back()) {
                    throw Error(Errc::bad_bins,
                                "sample " + std::to_string(x) + " outside bin range");
                }
                auto it = std::upper_bound(edges.begin(), edges.end(), x);
                std::size_t j = static_cast<std::size_t>(it - edges.begin());
                j = j == 0 ? 0 : j - 1;
                if (j >= n_bins) j = n_bins - 1;  // x == last edge lands in the top bin
                ++dist.counts[j];
            }
            dist.values.resize(n_bins);
            for (std::size_t j = 0; j < n_bins; ++j) {
                dist.values[j] = 0.5 * (edges[j] + edges[j + 1]);
            }
            break;
        }
    }

    dist.probabilities.reserve(dist.counts.size());
    for (std::int64_t c : dist.counts) {
        dist.probabilities.push_back(static_cast<double>(c) / static_cast<double>(dist.total));
    }
    return dist;
}

double sample_mean(std::span<const double> samples) {
    CompensatedSum sum;
    for (double x : samples) sum.add(x);
    return sum.value() / static_cast<double>(samples.size());
}

} // namespace

PriceMoments price_moments_from_trades(const TradeMoments& moments) {
    PriceMoments out;
    out.n_max = moments.n_max;
    out.count = moments.count;
    out.p.reserve(static_cast<std::size_t>(out.n_max));
    for (int n = 1; n <= out.n_max; ++n) {
        const double um = moments.volume_moment(n);
        if (!(um > 0.0)) {
            throw Error(Errc::degenerate_volume,
                        "volume moment of order " + std::to_string(n) + " is not positive");
        }
        const double ratio = moments.value_moment(n) / um;
        if (!std::isfinite(ratio)) {
            throw Error(Errc::overflow,
                        "price moment of order " + std::to_string(n) + " overflowed");
        }
        out.p.push_back(ratio);
    }
    out.mean = out.price_moment(1);
    if (out.n_max >= 2) {
        const double raw = out.price_moment(2) - out.mean * out.mean;
        out.variance_raw = raw;
        out.variance_clamped = raw < 0.0;
        out.variance = std::max(raw, 0.0);
    }
    if (out.n_max >= 3) {
        const double p1 = out.mean;
        const double m3 = out.price_moment(3) - 3.0 * out.price_moment(2) * p1 + 2.0 * p1 * p1 * p1;
        const double var = *out.variance;
        out.skewness = var > 0.0 ? m3 / (var * std::sqrt(var)) : 0.0;
    }
    if (out.n_max >= 4) {
        const double p1 = out.mean;
        const double p1sq = p1 * p1;
        const double m4 = out.price_moment(4) - 4.0 * out.price_moment(3) * p1 +
                          6.0 * out.price_moment(2) * p1sq - 3.0 * p1sq * p1sq;
        const double var = *out.variance;
        out.excess_kurtosis = var > 0.0 ? m4 / (var * var) - 3.0 : 0.0;
    }
    return out;
}

PriceMoments price_moments_from_trades(std::span<const TradeTick> ticks, int n_max) {
    return price_moments_from_trades(to_moments(accumulate(ticks, n_max)));
}

double vwap(const WindowedTrades& window) {
    if (window.empty()) {
        throw Error(Errc::empty_window, "cannot take VWAP of an empty window");
    }
    CompensatedSum value, volume;
    for (const auto& tick : window.ticks) {
        value.add(tick.value);
        volume.add(tick.volume);
    }
    return value.value() / volume.value();
}

FrequencyStats frequency_price_stats(const WindowedTrades& window, const BinningRule& bins) {
    if (window.empty()) {
        throw Error(Errc::empty_window, "cannot compute frequency statistics of an empty window");
    }
    std::vector<double> prices;
    prices.reserve(window.ticks.size());
    for (const auto& tick : window.ticks) prices.push_back(tick.price);
    FrequencyStats stats;
    stats.distribution = build_distribution(prices, bins);
    stats.mean = sample_mean(prices);
    return stats;
}

ValueVolumeDistributions frequency_value_volume_stats(const WindowedTrades& window,
                                                      const BinningRule& bins) {
    if (window.empty()) {
        throw Error(Errc::empty_window, "cannot compute frequency statistics of an empty window");
    }
    std::vector<double> values, volumes;
    values.reserve(window.ticks.size());
    volumes.reserve(window.ticks.size());
    for (const auto& tick : window.ticks) {
        values.push_back(tick.value);
        volumes.push_back(tick.volume);
    }
    return ValueVolumeDistributions{build_distribution(values, bins),
                                    build_distribution(volumes, bins)};
}

std::optional<double> price_volume_correlation(std::span<const TradeTick> ticks) {
    const std::size_t n = ticks.size();
    if (n < 2) return std::nullopt;
    CompensatedSum sp, su;
    for (const auto& t : ticks) {
        sp.add(t.price);
        su.add(t.volume);
    }
    const double mp = sp.value() / static_cast<double>(n);
    const double mu = su.value() / static_cast<double>(n);
    CompensatedSum spp, suu, spu;
    for (const auto& t : ticks) {
        const double dp = t.price - mp;
        const double du = t.volume - mu;
        spp.add(dp * dp);
        suu.add(du * du);
        spu.add(dp * du);
    }
    const double denom = std::sqrt(spp.value() * suu.value());
    if (!(denom > 0.0)) return std::nullopt;
    return spu.value() / denom;
}

} // namespace tickmoments
