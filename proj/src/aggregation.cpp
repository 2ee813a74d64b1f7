#include "tickmoments/aggregation.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "tickmoments/errors.hpp"

namespace tickmoments {

namespace {

void validate_tape_shape(const AgentTape& tape) {
    if (!tape.trade_ids.empty() && tape.trade_ids.size() != tape.ticks.size()) {
        throw Error(Errc::invalid_argument,
                    "agent '" + tape.agent_id + "': trade_ids must be empty or one per tick");
    }
    if (!tape.expectations.empty() && tape.expectations.size() != tape.ticks.size()) {
        throw Error(Errc::invalid_argument,
                    "agent '" + tape.agent_id + "': expectations must be empty or one per tick");
    }
}

bool same_tick(const TradeTick& a, const TradeTick& b) {
    return a.ts == b.ts && a.price == b.price && a.volume == b.volume && a.value == b.value;
}

// Walks every in-window tick across all tapes, suppressing repeats of the
// same nonempty trade id and rejecting repeats that disagree on the tick
// fields.
template <typename Visit>
void for_each_deduped(std::span<const AgentTape> tapes, const WindowSpec& window, Visit&& visit) {
    std::unordered_map<std::string, TradeTick> seen;
    for (const auto& tape : tapes) {
        validate_tape_shape(tape);
        for (std::size_t i = 0; i < tape.ticks.size(); ++i) {
            const TradeTick& tick = tape.ticks[i];
            if (!window.contains(tick.ts)) continue;
            if (!tape.trade_ids.empty() && !tape.trade_ids[i].empty()) {
                const auto [it, inserted] = seen.emplace(tape.trade_ids[i], tick);
                if (!inserted) {
                    if (!same_tick(it->second, tick)) {
                        throw Error(Errc::inconsistent_value,
                                    "trade id '" + tape.trade_ids[i] +
                                        "' appears twice with different fields");
                    }
                    continue;
                }
            }
            visit(tape, i, tick);
        }
    }
}

} // namespace

MacroVariables aggregate_macro(std::span<const AgentTape> tapes, const WindowSpec& window,
                               int n_max) {
    if (tapes.empty()) {
        throw Error(Errc::invalid_argument, "need at least one agent tape");
    }
    MacroVariables macro;
    macro.n_max = n_max;
    macro.totals = PowerSums(n_max);
    for_each_deduped(tapes, window, [&](const AgentTape& tape, std::size_t, const TradeTick& tick) {
        auto [it, inserted] = macro.per_agent.try_emplace(tape.agent_id, n_max);
        (void)inserted;
        it->second.add_tick(tick);
    });
    if (macro.per_agent.empty()) {
        throw Error(Errc::empty_window_all, "no agent traded inside the window");
    }
    for (const auto& [agent, sums] : macro.per_agent) {
        macro.totals.merge(sums);
    }
    return macro;
}

double weighted_expectation(std::span<const AgentTape> tapes, const WindowSpec& window,
                            WeightMode weight, int power) {
    if (tapes.empty()) {
        throw Error(Errc::invalid_argument, "need at least one agent tape");
    }
    if (power < 1 || power > PowerSums::kMaxOrder) {
        throw Error(Errc::invalid_argument,
                    "weight power must be in [1, " + std::to_string(PowerSums::kMaxOrder) + "]");
    }
    CompensatedSum numerator, denominator;
    std::int64_t used = 0;
    for_each_deduped(tapes, window, [&](const AgentTape& tape, std::size_t i, const TradeTick& tick) {
        if (tape.expectations.empty() || !tape.expectations[i].has_value()) {
            throw Error(Errc::missing_expectations,
                        "agent '" + tape.agent_id + "' has an in-window trade without an expectation");
        }
        double base = 1.0;
        switch (weight) {
            case WeightMode::value: base = tick.value; break;
            case WeightMode::volume: base = tick.volume; break;
            case WeightMode::count: base = 1.0; break;
        }
        double w = 1.0;
        for (int n = 0; n < power; ++n) w *= base;
        if (!std::isfinite(w)) {
            throw Error(Errc::overflow, "weight power overflows a double");
        }
        numerator.add(*tape.expectations[i] * w);
        denominator.add(w);
        ++used;
    });
    if (used == 0) {
        throw Error(Errc::empty_window_all, "no agent traded inside the window");
    }
    const double den = denominator.value();
    if (!(den > 0.0)) {
        throw Error(Errc::degenerate_volume, "weights sum to zero over the window");
    }
    return numerator.value() / den;
}

std::vector<AgentTape> group_by_agent(std::span<const TapeRecord> records) {
    std::vector<AgentTape> tapes;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& record : records) {
        auto [it, inserted] = index.emplace(record.agent_id, tapes.size());
        if (inserted) {
            tapes.push_back(AgentTape{record.agent_id, {}, {}, {}});
        }
        AgentTape& tape = tapes[it->second];
        tape.ticks.push_back(record.tick);
        tape.trade_ids.push_back(record.trade_id);
        tape.expectations.push_back(record.expectation);
    }
    return tapes;
}

} // namespace tickmoments
