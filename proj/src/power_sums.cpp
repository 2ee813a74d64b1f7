#include "tickmoments/power_sums.hpp"

#include <cmath>
#include <string>

namespace tickmoments {

PowerSums::PowerSums(int n_max) : n_max_(n_max) {
    if (n_max < 1 || n_max > kMaxOrder) {
        throw Error(Errc::invalid_argument,
                    "moment order must be in [1, " + std::to_string(kMaxOrder) + "], got " +
                        std::to_string(n_max));
    }
    value_sums_.resize(static_cast<std::size_t>(n_max));
    volume_sums_.resize(static_cast<std::size_t>(n_max));
}

void PowerSums::add_tick(const TradeTick& tick) {
    double value_pow = 1.0;
    double volume_pow = 1.0;
    for (int n = 0; n < n_max_; ++n) {
        value_pow *= tick.value;
        volume_pow *= tick.volume;
        if (!std::isfinite(value_pow) || !std::isfinite(volume_pow)) {
            throw Error(Errc::overflow,
                        "power " + std::to_string(n + 1) + " of tick overflows a double");
        }
        value_sums_[static_cast<std::size_t>(n)].add(value_pow);
        volume_sums_[static_cast<std::size_t>(n)].add(volume_pow);
    }
    ++count_;
}

void PowerSums::merge(const PowerSums& other) {
    if (other.n_max_ != n_max_) {
        throw Error(Errc::invalid_argument, "cannot merge power sums of different orders");
    }
    for (int n = 0; n < n_max_; ++n) {
        value_sums_[static_cast<std::size_t>(n)].merge(other.value_sums_[static_cast<std::size_t>(n)]);
        volume_sums_[static_cast<std::size_t>(n)].merge(other.volume_sums_[static_cast<std::size_t>(n)]);
    }
    count_ += other.count_;
}

double PowerSums::value_sum(int n) const {
    if (n < 1 || n > n_max_) {
        throw Error(Errc::invalid_argument, "order " + std::to_string(n) + " out of range");
    }
    return value_sums_[static_cast<std::size_t>(n - 1)].value();
}

double PowerSums::volume_sum(int n) const {
    if (n < 1 || n > n_max_) {
        throw Error(Errc::invalid_argument, "order " + std::to_string(n) + " out of range");
    }
    return volume_sums_[static_cast<std::size_t>(n - 1)].value();
}

PowerSums accumulate(std::span<const TradeTick> ticks, int n_max) {
    PowerSums sums(n_max);
    for (const auto& tick : ticks) sums.add_tick(tick);
    return sums;
}

PowerSums accumulate(const WindowedTrades& window, int n_max) {
    if (window.empty()) {
        throw Error(Errc::empty_window, "cannot accumulate an empty window");
    }
    return accumulate(std::span<const TradeTick>(window.ticks), n_max);
}

PowerSums accumulate_streaming(std::span<const std::vector<TradeTick>> chunks, int n_max) {
    PowerSums total(n_max);
    for (const auto& chunk : chunks) {
        total.merge(accumulate(chunk, n_max));
    }
    return total;
}

PowerSums accumulate_streaming(std::span<const TradeTick> ticks, int n_max,
                               std::size_t chunk_size) {
    if (chunk_size == 0) {
        throw Error(Errc::invalid_argument, "chunk size must be positive");
    }
    PowerSums total(n_max);
    for (std::size_t start = 0; start < ticks.size(); start += chunk_size) {
        const std::size_t len = std::min(chunk_size, ticks.size() - start);
        total.merge(accumulate(ticks.subspan(start, len), n_max));
    }
    return total;
}

TradeMoments to_moments(const PowerSums& sums) {
    if (sums.count() == 0) {
        throw Error(Errc::empty_window, "no ticks accumulated");
    }
    TradeMoments m;
    m.n_max = sums.n_max();
    m.count = sums.count();
    m.value_moments.reserve(static_cast<std::size_t>(m.n_max));
    m.volume_moments.reserve(static_cast<std::size_t>(m.n_max));
    const double n = static_cast<double>(m.count);
    for (int order = 1; order <= m.n_max; ++order) {
        const double c = sums.value_sum(order);
        const double u = sums.volume_sum(order);
        if (!std::isfinite(c) || !std::isfinite(u)) {
            throw Error(Errc::overflow,
                        "power sums of order " + std::to_string(order) + " overflowed");
        }
        m.value_moments.push_back(c / n);
        m.volume_moments.push_back(u / n);
    }
    return m;
}

} // namespace tickmoments
