#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tickmoments/errors.hpp"
#include "tickmoments/trade.hpp"

namespace tickmoments {

// Neumaier-compensated running sum. Keeps a correction term so that adding
// many small terms to a large accumulated total does not silently lose them.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    void merge(const CompensatedSum& other) {
        add(other.sum_);
        comp_ += other.comp_;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Running power sums of trade values and volumes:
//   value_sum(n)  = sum over ticks of (price * volume)^n
//   volume_sum(n) = sum over ticks of volume^n
// for n = 1..n_max. These are the sufficient statistics for every
// volume-weighted price moment up to order n_max; accumulation is a plain
// sum, so chunks can be merged in any order.
class PowerSums {
public:
    static constexpr int kMaxOrder = 16;

    explicit PowerSums(int n_max = 4);

    void add_tick(const TradeTick& tick);
    void merge(const PowerSums& other);

    int n_max() const { return n_max_; }
    std::int64_t count() const { return count_; }
    double value_sum(int n) const;   // C(n)
    double volume_sum(int n) const;  // U(n)

private:
    int n_max_;
    std::int64_t count_ = 0;
    std::vector<CompensatedSum> value_sums_;
    std::vector<CompensatedSum> volume_sums_;
};

// Per-trade means of the power sums:
//   value_moment(n)  = C_m(n) = C(n)/N
//   volume_moment(n) = U_m(n) = U(n)/N
struct TradeMoments {
    int n_max = 0;
    std::int64_t count = 0;
    std::vector<double> value_moments;
    std::vector<double> volume_moments;

    double value_moment(int n) const {
        return value_moments.at(static_cast<std::size_t>(n - 1));
    }
    double volume_moment(int n) const {
        return volume_moments.at(static_cast<std::size_t>(n - 1));
    }
};

// Empty input yields the additive identity (all sums zero, count zero).
PowerSums accumulate(std::span<const TradeTick> ticks, int n_max);

// Entry point for one window; rejects empty windows.
PowerSums accumulate(const WindowedTrades& window, int n_max);

// Same result as one-shot accumulation, built by merging per-chunk sums.
PowerSums accumulate_streaming(std::span<const std::vector<TradeTick>> chunks, int n_max);
PowerSums accumulate_streaming(std::span<const TradeTick> ticks, int n_max,
                               std::size_t chunk_size);

TradeMoments to_moments(const PowerSums& sums);

} // namespace tickmoments
