#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tickmoments/trade.hpp"

namespace tickmoments {

// PCG-XSH-RR 32/64 (minimal variant). Hand-rolled so tapes reproduce
// bit-for-bit across platforms and languages; the generator identity goes
// into the tape metadata sidecar.
class Pcg32 {
public:
    Pcg32(std::uint64_t seed, std::uint64_t stream) : state_(0), inc_((stream << 1u) | 1u) {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    // 53-bit uniform in [0, 1), two u32 draws.
    double next_double() {
        const auto hi = static_cast<std::uint64_t>(next_u32() >> 5);  // 27 bits
        const auto lo = static_cast<std::uint64_t>(next_u32() >> 6);  // 26 bits
        return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
    }

    // Box-Muller cosine branch; consumes exactly two uniforms per call.
    double next_normal();

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

inline constexpr const char* kGeneratorName = "pcg32";

// Synthetic ticks are laid down on an equally spaced 1 ms lattice starting
// at t = 0; the statistics are exchangeable within a window, so no temporal
// structure is modeled.
inline constexpr DurationNs kTickSpacingNs = 1'000'000;

struct LawSpec {
    enum class Kind { lognormal, uniform, two_point, constant };

    Kind kind = Kind::constant;
    // lognormal: {a=mu, b=sigma}; uniform: {a=lo, b=hi};
    // two_point: {a=lo, b=hi, w=weight of lo}; constant: {a=value}
    double a = 0.0;
    double b = 0.0;
    double w = 0.0;

    static LawSpec lognormal(double mu, double sigma) {
        return {Kind::lognormal, mu, sigma, 0.0};
    }
    static LawSpec uniform(double lo, double hi) { return {Kind::uniform, lo, hi, 0.0}; }
    static LawSpec two_point(double lo, double hi, double weight) {
        return {Kind::two_point, lo, hi, weight};
    }
    static LawSpec constant(double value) { return {Kind::constant, value, 0.0, 0.0}; }
};

struct Dependence {
    enum class Kind { independent, comonotone, volume_follows_price };

    Kind kind = Kind::independent;
    double beta = 0.0;  // volume_follows_price only

    static Dependence independent() { return {}; }
    static Dependence comonotone() { return {Kind::comonotone, 0.0}; }
    static Dependence volume_follows_price(double beta) {
        return {Kind::volume_follows_price, beta};
    }
};

// Recipe for a synthetic tape. Dependence semantics:
//   independent          price and volume streams never mix
//   comonotone           volume := the price draw itself (volume_law ignored)
//   volume_follows_price both laws must be lognormal; the volume reuses the
//                        price's normal shock scaled by beta:
//                        U = exp(mu_U + beta * z_price + sigma_U * z_volume)
struct TapeSpec {
    std::int64_t n_trades = 0;
    LawSpec price_law;
    LawSpec volume_law;
    Dependence dependence;
    std::uint64_t seed = 0;
};

void validate_spec(const TapeSpec& spec);

// Deterministic for a fixed spec: stream 1 of the seed drives price draws,
// stream 2 volume draws, each law consuming a fixed number of draws per
// trade.
std::vector<TradeTick> generate(const TapeSpec& spec);

// Raw sample moments (1/N) sum p^n of the realized price draws, n=1..n_max.
// Under independent volumes this is the ground truth the volume-weighted
// estimator should recover.
std::vector<double> oracle_price_moments(const TapeSpec& spec, std::span<const TradeTick> tape,
                                         int n_max);

TapeSpec tape_spec_from_json(const std::string& text);
std::string tape_spec_to_json(const TapeSpec& spec);

// Sidecar content: generator identity, tick spacing and the full spec.
std::string tape_metadata_json(const TapeSpec& spec);

} // namespace tickmoments
