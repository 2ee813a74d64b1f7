// Command line front end: moments, density, compare, simulate, aggregate.
//
// Exit codes: 0 success, 1 usage/input errors, 2 numerical failures
// (overflow, degenerate volume, failed quadrature and friends).

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tickmoments/aggregation.hpp"
#include "tickmoments/char_fn.hpp"
#include "tickmoments/errors.hpp"
#include "tickmoments/json_writer.hpp"
#include "tickmoments/power_sums.hpp"
#include "tickmoments/price_stats.hpp"
#include "tickmoments/synthetic.hpp"
#include "tickmoments/tape_io.hpp"
#include "tickmoments/trade.hpp"

namespace {

using namespace tickmoments;

struct TapeOptions {
    std::string input;
    std::string format_name = "csv";
    std::string ts_format_name = "epoch-nanos";

    TapeFormat tape_format() const {
        TapeFormat fmt;
        fmt.kind = format_name == "json-lines" ? TapeKind::json_lines : TapeKind::csv;
        if (ts_format_name == "epoch-millis") {
            fmt.timestamp_format = TimestampFormat::epoch_millis;
        } else if (ts_format_name == "iso8601") {
            fmt.timestamp_format = TimestampFormat::iso8601;
        } else {
            fmt.timestamp_format = TimestampFormat::epoch_nanos;
        }
        return fmt;
    }
};

struct WindowOptions {
    double window_seconds = 0.0;
    bool windowed = false;
    std::string align_name = "trailing";

    Alignment alignment() const {
        return align_name == "centered" ? Alignment::centered : Alignment::trailing;
    }

    DurationNs width_ns() const {
        const double ns = window_seconds * 1e9;
        if (!(ns > 0.0) || ns > 9e18) {
            throw Error(Errc::invalid_argument, "window width must be a positive duration");
        }
        return static_cast<DurationNs>(std::llround(ns));
    }
};

std::string fmt_g(double v) {
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%.15g", v);
    return tmp;
}

std::vector<TapeRecord> load_records(const TapeOptions& tape) {
    std::ifstream in(tape.input, std::ios::binary);
    if (!in) {
        throw Error(Errc::invalid_argument, "cannot open input file '" + tape.input + "'");
    }
    return parse_tape_records(in, tape.tape_format());
}

std::vector<TradeTick> load_ticks(const TapeOptions& tape) {
    auto records = load_records(tape);
    std::vector<TradeTick> ticks;
    ticks.reserve(records.size());
    for (const auto& record : records) ticks.push_back(record.tick);
    if (ticks.empty()) {
        throw Error(Errc::empty_tape, "input tape '" + tape.input + "' holds no trades");
    }
    return ticks;
}

std::vector<WindowedTrades> make_windows(std::vector<TradeTick> ticks,
                                         const WindowOptions& window) {
    if (!window.windowed) {
        std::vector<WindowedTrades> one;
        one.push_back(whole_tape_window(std::move(ticks)));
        return one;
    }
    return partition_windows(std::move(ticks), window.width_ns(), window.alignment());
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw Error(Errc::invalid_argument, "cannot open output file '" + out_path + "'");
    }
    out << text;
}

// Runs fn(0..n-1) across a small pool; the first exception wins and is
// rethrown on the caller's thread after the pool drains.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min(hw, n);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& worker : pool) worker.join();
    if (failure) std::rethrow_exception(failure);
}

void write_tape_config(JsonWriter& w, const char* command, const TapeOptions& tape) {
    w.key("command").value(command);
    w.key("input").value(tape.input);
    w.key("format").value(tape.format_name);
    w.key("ts_format").value(tape.ts_format_name);
}

void write_window_config(JsonWriter& w, const WindowOptions& window) {
    w.key("window_seconds");
    if (window.windowed) {
        w.value(window.window_seconds);
    } else {
        w.null();
    }
    w.key("alignment").value(window.align_name);
}

void write_optional(JsonWriter& w, const char* key, const std::optional<double>& v) {
    w.key(key);
    if (v) {
        w.value(*v);
    } else {
        w.null();
    }
}

std::string config_comment(const char* command, const TapeOptions& tape,
                           const WindowOptions* window, int n_max) {
    std::string line = std::string("# tickmoments ") + command + " input=" + tape.input +
                       " format=" + tape.format_name + " ts-format=" + tape.ts_format_name;
    if (window) {
        line += window->windowed ? " window=" + fmt_g(window->window_seconds) + "s" +
                                       " align=" + window->align_name
                                 : std::string(" window=whole");
    }
    if (n_max > 0) line += " nmax=" + std::to_string(n_max);
    return line + "\n";
}

// ---------------------------------------------------------------- moments

struct WindowStats {
    WindowSpec spec;
    std::int64_t count = 0;
    std::vector<double> value_sums;   // C(1..n_max)
    std::vector<double> volume_sums;  // U(1..n_max)
    std::optional<PriceMoments> pm;
    std::optional<double> frequency_mean;
};

WindowStats stats_for(const WindowedTrades& window, int n_max) {
    WindowStats out;
    out.spec = window.spec;
    out.count = static_cast<std::int64_t>(window.count());
    if (window.empty()) return out;
    const auto sums = accumulate(window, n_max);
    for (int n = 1; n <= n_max; ++n) {
        out.value_sums.push_back(sums.value_sum(n));
        out.volume_sums.push_back(sums.volume_sum(n));
    }
    out.pm = price_moments_from_trades(to_moments(sums));
    out.frequency_mean = frequency_price_stats(window, BinningRule::exact()).mean;
    return out;
}

void write_window_bounds(JsonWriter& w, const WindowSpec& spec, std::size_t index) {
    w.key("index").value(static_cast<std::int64_t>(index));
    w.key("start").value(spec.start());
    w.key("end").value(spec.end());
}

std::string moments_json(const TapeOptions& tape, const WindowOptions& window, int n_max,
                         const std::vector<WindowStats>& stats) {
    JsonWriter w;
    w.begin_object();
    w.key("config").begin_object();
    write_tape_config(w, "moments", tape);
    write_window_config(w, window);
    w.key("n_max").value(n_max);
    w.end_object();
    w.key("windows").begin_array();
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const auto& s = stats[i];
        w.begin_object();
        write_window_bounds(w, s.spec, i);
        w.key("count").value(s.count);
        if (s.pm) {
            w.key("value_sums").begin_array();
            for (double c : s.value_sums) w.value(c);
            w.end_array();
            w.key("volume_sums").begin_array();
            for (double u : s.volume_sums) w.value(u);
            w.end_array();
            w.key("p").begin_array();
            for (double p : s.pm->p) w.value(p);
            w.end_array();
            w.key("mean").value(s.pm->mean);
            write_optional(w, "variance", s.pm->variance);
            write_optional(w, "variance_raw", s.pm->variance_raw);
            w.key("variance_clamped").value(s.pm->variance_clamped);
            write_optional(w, "skewness", s.pm->skewness);
            write_optional(w, "excess_kurtosis", s.pm->excess_kurtosis);
            write_optional(w, "frequency_mean", s.frequency_mean);
        } else {
            for (const char* key : {"value_sums", "volume_sums", "p", "mean", "variance",
                                    "variance_raw"}) {
                w.key(key).null();
            }
            w.key("variance_clamped").value(false);
            for (const char* key : {"skewness", "excess_kurtosis", "frequency_mean"}) {
                w.key(key).null();
            }
        }
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str() + "\n";
}

std::string moments_csv(const TapeOptions& tape, const WindowOptions& window, int n_max,
                        const std::vector<WindowStats>& stats) {
    std::string out = config_comment("moments", tape, &window, n_max);
    out += "index,start,end,count,mean,variance,skewness,excess_kurtosis,frequency_mean";
    for (int n = 1; n <= n_max; ++n) out += ",p" + std::to_string(n);
    for (int n = 1; n <= n_max; ++n) out += ",c" + std::to_string(n);
    for (int n = 1; n <= n_max; ++n) out += ",u" + std::to_string(n);
    out += "\n";
    const auto opt_cell = [](const std::optional<double>& v) {
        return v ? fmt_g(*v) : std::string();
    };
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const auto& s = stats[i];
        out += std::to_string(i) + "," + std::to_string(s.spec.start()) + "," +
               std::to_string(s.spec.end()) + "," + std::to_string(s.count);
        if (s.pm) {
            out += "," + fmt_g(s.pm->mean) + "," + opt_cell(s.pm->variance) + "," +
                   opt_cell(s.pm->skewness) + "," + opt_cell(s.pm->excess_kurtosis) + "," +
                   opt_cell(s.frequency_mean);
            for (double p : s.pm->p) out += "," + fmt_g(p);
            for (double c : s.value_sums) out += "," + fmt_g(c);
            for (double u : s.volume_sums) out += "," + fmt_g(u);
        } else {
            out.append(static_cast<std::size_t>(5 + 3 * n_max), ',');
        }
        out += "\n";
    }
    return out;
}

int run_moments(const TapeOptions& tape, const WindowOptions& window, int n_max,
                const std::string& output_mode, const std::string& out_path) {
    const auto windows = make_windows(load_ticks(tape), window);
    std::vector<WindowStats> stats(windows.size());
    parallel_for(windows.size(), [&](std::size_t i) { stats[i] = stats_for(windows[i], n_max); });
    emit(out_path, output_mode == "csv" ? moments_csv(tape, window, n_max, stats)
                                        : moments_json(tape, window, n_max, stats));
    return 0;
}

// ---------------------------------------------------------------- compare

struct CompareRow {
    WindowSpec spec;
    std::int64_t count = 0;
    std::optional<double> frequency_mean;
    std::optional<double> vwap_value;
    std::optional<double> correlation;
};

int run_compare(const TapeOptions& tape, const WindowOptions& window,
                const std::string& output_mode, const std::string& out_path) {
    const auto windows = make_windows(load_ticks(tape), window);
    std::vector<CompareRow> rows(windows.size());
    parallel_for(windows.size(), [&](std::size_t i) {
        CompareRow row;
        row.spec = windows[i].spec;
        row.count = static_cast<std::int64_t>(windows[i].count());
        if (!windows[i].empty()) {
            row.frequency_mean = frequency_price_stats(windows[i], BinningRule::exact()).mean;
            row.vwap_value = vwap(windows[i]);
            row.correlation = price_volume_correlation(windows[i].ticks);
        }
        rows[i] = row;
    });

    double max_abs_gap = 0.0, max_rel_gap = 0.0;
    std::int64_t nonempty = 0;
    for (const auto& row : rows) {
        if (!row.vwap_value) continue;
        ++nonempty;
        const double gap = std::abs(*row.vwap_value - *row.frequency_mean);
        max_abs_gap = std::max(max_abs_gap, gap);
        max_rel_gap = std::max(max_rel_gap, gap / std::abs(*row.frequency_mean));
    }

    if (output_mode == "csv") {
        std::string out = config_comment("compare", tape, &window, 0);
        out += "index,start,end,count,frequency_mean,vwap,gap,rel_gap,price_volume_correlation\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& row = rows[i];
            out += std::to_string(i) + "," + std::to_string(row.spec.start()) + "," +
                   std::to_string(row.spec.end()) + "," + std::to_string(row.count);
            if (row.vwap_value) {
                const double gap = *row.vwap_value - *row.frequency_mean;
                out += "," + fmt_g(*row.frequency_mean) + "," + fmt_g(*row.vwap_value) + "," +
                       fmt_g(gap) + "," + fmt_g(std::abs(gap) / std::abs(*row.frequency_mean)) +
                       "," + (row.correlation ? fmt_g(*row.correlation) : std::string());
            } else {
                out += ",,,,,";
            }
            out += "\n";
        }
        emit(out_path, out);
        return 0;
    }

    JsonWriter w;
    w.begin_object();
    w.key("config").begin_object();
    write_tape_config(w, "compare", tape);
    write_window_config(w, window);
    w.end_object();
    w.key("windows").begin_array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        w.begin_object();
        write_window_bounds(w, row.spec, i);
        w.key("count").value(row.count);
        write_optional(w, "frequency_mean", row.frequency_mean);
        write_optional(w, "vwap", row.vwap_value);
        if (row.vwap_value) {
            const double gap = *row.vwap_value - *row.frequency_mean;
            w.key("gap").value(gap);
            w.key("rel_gap").value(std::abs(gap) / std::abs(*row.frequency_mean));
        } else {
            w.key("gap").null();
            w.key("rel_gap").null();
        }
        write_optional(w, "price_volume_correlation", row.correlation);
        w.end_object();
    }
    w.end_array();
    w.key("summary").begin_object();
    w.key("windows").value(static_cast<std::int64_t>(rows.size()));
    w.key("nonempty_windows").value(nonempty);
    w.key("max_gap").value(max_abs_gap);
    w.key("max_rel_gap").value(max_rel_gap);
    w.end_object();
    w.end_object();
    emit(out_path, w.str() + "\n");
    return 0;
}

// ---------------------------------------------------------------- density

int run_density(const TapeOptions& tape, int k, int grid_points, double grid_sigmas,
                const std::string& output_mode, const std::string& out_path) {
    const auto ticks = load_ticks(tape);
    const auto moments = price_moments_from_trades(ticks, std::max(k, 2));
    const auto fit = fit_charfn(moments, k);
    const auto grid = uniform_grid(fit.a1, std::sqrt(fit.a2), grid_points, grid_sigmas);
    const auto density = invert_charfn(fit, grid);

    if (output_mode == "csv") {
        std::string out = config_comment("density", tape, nullptr, 0);
        out += "# k=" + std::to_string(k) + " grid-points=" + std::to_string(grid_points) +
               " grid-sigmas=" + fmt_g(grid_sigmas) + " a1=" + fmt_g(fit.a1) +
               " a2=" + fmt_g(fit.a2) + " a3=" + fmt_g(fit.a3) +
               " clipped_mass=" + fmt_g(density.clipped_mass) + "\n";
        out += "p,density\n";
        for (std::size_t i = 0; i < density.grid.size(); ++i) {
            out += fmt_g(density.grid[i]) + "," + fmt_g(density.density[i]) + "\n";
        }
        emit(out_path, out);
        return 0;
    }

    JsonWriter w;
    w.begin_object();
    w.key("config").begin_object();
    write_tape_config(w, "density", tape);
    w.key("k").value(k);
    w.key("grid_points").value(grid_points);
    w.key("grid_sigmas").value(grid_sigmas);
    w.end_object();
    w.key("moments").begin_object();
    w.key("count").value(moments.count);
    w.key("mean").value(moments.mean);
    write_optional(w, "variance", moments.variance);
    write_optional(w, "skewness", moments.skewness);
    w.end_object();
    w.key("fit").begin_object();
    w.key("k").value(fit.k);
    w.key("a1").value(fit.a1);
    w.key("a2").value(fit.a2);
    w.key("a3").value(fit.a3);
    w.end_object();
    w.key("density").begin_object();
    w.key("clipped_mass").value(density.clipped_mass);
    w.key("grid").begin_array();
    for (double p : density.grid) w.value(p);
    w.end_array();
    w.key("values").begin_array();
    for (double d : density.density) w.value(d);
    w.end_array();
    w.end_object();
    w.end_object();
    emit(out_path, w.str() + "\n");
    return 0;
}

// ---------------------------------------------------------------- simulate

int run_simulate(const std::string& spec_path, std::optional<std::uint64_t> seed_override,
                 const TapeOptions& tape_out, bool no_value, const std::string& out_path) {
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) {
        throw Error(Errc::invalid_argument, "cannot open spec file '" + spec_path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    auto spec = tape_spec_from_json(text.str());
    if (seed_override) spec.seed = *seed_override;
    validate_spec(spec);

    const auto ticks = generate(spec);
    TapeFormat format = tape_out.tape_format();
    format.has_value_column = !no_value;

    std::ostringstream tape_text;
    write_tape(tape_text, ticks, format);
    emit(out_path, tape_text.str());
    if (!out_path.empty()) {
        emit(out_path + ".meta.json", tape_metadata_json(spec) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------- aggregate

int run_aggregate(const TapeOptions& tape, int n_max, const std::string& weight_name,
                  int power, const std::string& out_path) {
    const auto records = load_records(tape);
    if (records.empty()) {
        throw Error(Errc::empty_tape, "input tape '" + tape.input + "' holds no trades");
    }
    std::vector<TradeTick> ticks;
    ticks.reserve(records.size());
    for (const auto& record : records) ticks.push_back(record.tick);
    const WindowSpec window = whole_tape_window(std::move(ticks)).spec;

    const auto tapes = group_by_agent(records);
    const auto macro = aggregate_macro(tapes, window, n_max);

    bool any_expectation = false;
    for (const auto& record : records) any_expectation |= record.expectation.has_value();
    std::optional<double> expectation;
    if (any_expectation) {
        const WeightMode mode = weight_name == "volume"  ? WeightMode::volume
                                : weight_name == "count" ? WeightMode::count
                                                         : WeightMode::value;
        expectation = weighted_expectation(tapes, window, mode, power);
    }

    const auto totals_pm = price_moments_from_trades(to_moments(macro.totals));

    JsonWriter w;
    w.begin_object();
    w.key("config").begin_object();
    write_tape_config(w, "aggregate", tape);
    w.key("n_max").value(n_max);
    w.key("weight").value(weight_name);
    w.key("power").value(power);
    w.end_object();
    w.key("window").begin_object();
    w.key("start").value(window.start());
    w.key("end").value(window.end());
    w.end_object();
    const auto write_sums = [&](const PowerSums& sums) {
        w.key("count").value(sums.count());
        w.key("value_sums").begin_array();
        for (int n = 1; n <= n_max; ++n) w.value(sums.value_sum(n));
        w.end_array();
        w.key("volume_sums").begin_array();
        for (int n = 1; n <= n_max; ++n) w.value(sums.volume_sum(n));
        w.end_array();
    };
    w.key("totals").begin_object();
    write_sums(macro.totals);
    w.key("p").begin_array();
    for (double p : totals_pm.p) w.value(p);
    w.end_array();
    w.key("mean").value(totals_pm.mean);
    write_optional(w, "variance", totals_pm.variance);
    w.end_object();
    w.key("agents").begin_array();
    for (const auto& [agent_id, sums] : macro.per_agent) {
        w.begin_object();
        w.key("agent_id").value(agent_id);
        write_sums(sums);
        w.end_object();
    }
    w.end_array();
    if (expectation) {
        w.key("weighted_expectation").begin_object();
        w.key("weight").value(weight_name);
        w.key("power").value(power);
        w.key("value").value(*expectation);
        w.end_object();
    } else {
        w.key("weighted_expectation").null();
    }
    w.end_object();
    emit(out_path, w.str() + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"volume-weighted price moments over trade tapes"};
    app.require_subcommand(1);

    const std::vector<std::string> format_names = {"csv", "json-lines"};
    const std::vector<std::string> ts_format_names = {"epoch-nanos", "epoch-millis", "iso8601"};

    TapeOptions tape;
    WindowOptions window;
    int n_max = 4;
    std::string out_path;
    std::string output_mode = "json";

    const auto add_tape_options = [&](CLI::App* cmd) {
        cmd->add_option("--input", tape.input, "trade tape to read")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--format", tape.format_name, "tape encoding")
            ->check(CLI::IsMember(format_names));
        cmd->add_option("--ts-format", tape.ts_format_name, "timestamp encoding")
            ->check(CLI::IsMember(ts_format_names));
        cmd->add_option("--out", out_path, "output path (default stdout)");
    };
    const auto add_window_options = [&](CLI::App* cmd) {
        cmd->add_option("--window", window.window_seconds,
                        "window width in seconds (default: one whole-tape window)");
        cmd->add_option("--align", window.align_name, "window reference point")
            ->check(CLI::IsMember({"centered", "trailing"}));
    };
    const auto add_output_mode = [&](CLI::App* cmd) {
        cmd->add_option("--output", output_mode, "output encoding")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* moments_cmd =
        app.add_subcommand("moments", "power sums and moment statistics per window");
    add_tape_options(moments_cmd);
    add_window_options(moments_cmd);
    add_output_mode(moments_cmd);
    moments_cmd->add_option("--nmax", n_max, "highest moment order")->check(CLI::Range(1, 16));

    auto* compare_cmd =
        app.add_subcommand("compare", "volume-weighted vs frequency mean per window");
    add_tape_options(compare_cmd);
    add_window_options(compare_cmd);
    add_output_mode(compare_cmd);

    auto* density_cmd =
        app.add_subcommand("density", "price density from the fitted characteristic function");
    add_tape_options(density_cmd);
    add_output_mode(density_cmd);
    int k = 2;
    int grid_points = 4097;
    double grid_sigmas = 6.0;
    density_cmd->add_option("--k", k, "approximation order")->check(CLI::IsMember({2, 3}));
    density_cmd->add_option("--grid-points", grid_points, "grid resolution")
        ->check(CLI::Range(2, 1 << 24));
    density_cmd->add_option("--grid-sigmas", grid_sigmas, "half-width in standard deviations")
        ->check(CLI::PositiveNumber);

    auto* simulate_cmd = app.add_subcommand("simulate", "generate a synthetic tape");
    std::string spec_path;
    std::uint64_t seed_value = 0;
    bool no_value = false;
    simulate_cmd->add_option("--spec", spec_path, "tape spec JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    auto* seed_opt = simulate_cmd->add_option("--seed", seed_value, "override the spec seed");
    simulate_cmd->add_option("--format", tape.format_name, "tape encoding")
        ->check(CLI::IsMember(format_names));
    simulate_cmd->add_option("--ts-format", tape.ts_format_name, "timestamp encoding")
        ->check(CLI::IsMember(ts_format_names));
    simulate_cmd->add_flag("--no-value", no_value, "omit the value column");
    simulate_cmd->add_option("--out", out_path,
                             "tape output path; also writes <out>.meta.json");

    auto* aggregate_cmd =
        app.add_subcommand("aggregate", "per-agent and market-wide power sums");
    add_tape_options(aggregate_cmd);
    aggregate_cmd->add_option("--nmax", n_max, "highest moment order")->check(CLI::Range(1, 16));
    std::string weight_name = "value";
    int power = 1;
    aggregate_cmd->add_option("--weight", weight_name, "expectation weight")
        ->check(CLI::IsMember({"value", "volume", "count"}));
    aggregate_cmd->add_option("--power", power, "weight exponent")->check(CLI::Range(1, 16));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    window.windowed = moments_cmd->count("--window") > 0 || compare_cmd->count("--window") > 0;

    try {
        if (moments_cmd->parsed()) {
            return run_moments(tape, window, n_max, output_mode, out_path);
        }
        if (compare_cmd->parsed()) {
            return run_compare(tape, window, output_mode, out_path);
        }
        if (density_cmd->parsed()) {
            return run_density(tape, k, grid_points, grid_sigmas, output_mode, out_path);
        }
        if (simulate_cmd->parsed()) {
            std::optional<std::uint64_t> seed_override;
            if (seed_opt->count() > 0) seed_override = seed_value;
            return run_simulate(spec_path, seed_override, tape, no_value, out_path);
        }
        if (aggregate_cmd->parsed()) {
            return run_aggregate(tape, n_max, weight_name, power, out_path);
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return errc_is_numerical(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
