#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tickmoments/power_sums.hpp"
#include "tickmoments/tape_io.hpp"
#include "tickmoments/trade.hpp"

namespace tickmoments {

// One agent's trades. trade_ids and expectations are either empty or hold
// one entry per tick; an empty id string means the trade carries no id.
struct AgentTape {
    std::string agent_id;
    std::vector<TradeTick> ticks;
    std::vector<std::string> trade_ids;
    std::vector<std::optional<double>> expectations;
};

// First- and higher-order macro sums per agent and market-wide. The totals
// are exactly the componentwise sum of the per-agent entries: trades shared
// by two tapes (identical nonempty id) are kept at their first occurrence
// only, so additivity and duplicate-idempotence both hold.
struct MacroVariables {
    int n_max = 0;
    std::map<std::string, PowerSums> per_agent;
    PowerSums totals{1};
};

MacroVariables aggregate_macro(std::span<const AgentTape> tapes, const WindowSpec& window,
                               int n_max);

enum class WeightMode { value, volume, count };

// Trade-weighted average expectation over the window:
//   sum_i e_i w_i^n / sum_i w_i^n
// with w the trade value or volume (count mode fixes w = 1). Duplicated
// trade ids are counted once, like aggregate_macro.
double weighted_expectation(std::span<const AgentTape> tapes, const WindowSpec& window,
                            WeightMode weight, int power);

// Splits a parsed tape into per-agent tapes, agents ordered by first
// appearance. Records without an agent_id group under the empty id.
std::vector<AgentTape> group_by_agent(std::span<const TapeRecord> records);

} // namespace tickmoments
