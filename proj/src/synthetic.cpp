#include "tickmoments/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

#include "tickmoments/errors.hpp"
#include "tickmoments/json_writer.hpp"
#include "tickmoments/power_sums.hpp"

namespace tickmoments {

namespace {

const char* law_kind_name(LawSpec::Kind kind) {
    switch (kind) {
        case LawSpec::Kind::lognormal: return "lognormal";
        case LawSpec::Kind::uniform: return "uniform";
        case LawSpec::Kind::two_point: return "two_point";
        case LawSpec::Kind::constant: return "constant";
    }
    return "?";
}

const char* dependence_kind_name(Dependence::Kind kind) {
    switch (kind) {
        case Dependence::Kind::independent: return "independent";
        case Dependence::Kind::comonotone: return "comonotone";
        case Dependence::Kind::volume_follows_price: return "volume_follows_price";
    }
    return "?";
}

void validate_law(const LawSpec& law, const char* which, bool is_price) {
    const auto bad = [&](const std::string& what) -> Error {
        return Error(Errc::bad_spec, std::string(which) + ": " + what);
    };
    switch (law.kind) {
        case LawSpec::Kind::lognormal:
            if (!std::isfinite(law.a) || !std::isfinite(law.b) || !(law.b > 0.0)) {
                throw bad("lognormal needs finite mu and sigma > 0");
            }
            break;
        case LawSpec::Kind::uniform:
            if (!std::isfinite(law.a) || !std::isfinite(law.b) || !(0.0 < law.a) ||
                !(law.a < law.b)) {
                throw bad("uniform needs 0 < lo < hi");
            }
            break;
        case LawSpec::Kind::two_point:
            if (is_price) {
                if (!std::isfinite(law.a) || !std::isfinite(law.b) || !(law.a > 0.0) ||
                    !(law.b > 0.0) || !(0.0 < law.w && law.w < 1.0)) {
                    throw bad("two_point needs positive levels and weight in (0,1)");
                }
            } else {
                throw bad("two_point is a price law only");
            }
            break;
        case LawSpec::Kind::constant:
            if (is_price) {
                throw bad("constant is a volume law only");
            }
            if (!std::isfinite(law.a) || !(law.a > 0.0)) {
                throw bad("constant needs a positive value");
            }
            break;
    }
}

double draw_law(const LawSpec& law, Pcg32& rng, double* shock) {
    switch (law.kind) {
        case LawSpec::Kind::lognormal: {
            const double z = rng.next_normal();
            if (shock) *shock = z;
            return std::exp(law.a + law.b * z);
        }
        case LawSpec::Kind::uniform:
            return law.a + (law.b - law.a) * rng.next_double();
        case LawSpec::Kind::two_point:
            return rng.next_double() < law.w ? law.a : law.b;
        case LawSpec::Kind::constant:
            return law.a;
    }
    throw Error(Errc::bad_spec, "unknown law kind");
}

void write_law(JsonWriter& w, const LawSpec& law) {
    w.begin_object();
    w.key("kind").value(law_kind_name(law.kind));
    switch (law.kind) {
        case LawSpec::Kind::lognormal:
            w.key("mu").value(law.a);
            w.key("sigma").value(law.b);
            break;
        case LawSpec::Kind::uniform:
            w.key("lo").value(law.a);
            w.key("hi").value(law.b);
            break;
        case LawSpec::Kind::two_point:
            w.key("lo").value(law.a);
            w.key("hi").value(law.b);
            w.key("weight").value(law.w);
            break;
        case LawSpec::Kind::constant:
            w.key("value").value(law.a);
            break;
    }
    w.end_object();
}

void write_spec(JsonWriter& w, const TapeSpec& spec) {
    w.begin_object();
    w.key("n_trades").value(spec.n_trades);
    w.key("price_law");
    write_law(w, spec.price_law);
    w.key("volume_law");
    write_law(w, spec.volume_law);
    w.key("dependence");
    w.begin_object();
    w.key("kind").value(dependence_kind_name(spec.dependence.kind));
    if (spec.dependence.kind == Dependence::Kind::volume_follows_price) {
        w.key("beta").value(spec.dependence.beta);
    }
    w.end_object();
    w.key("seed").value(spec.seed);
    w.end_object();
}

void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                const char* where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (item.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw Error(Errc::bad_spec,
                        std::string(where) + ": unknown key '" + item.key() + "'");
        }
    }
}

double number_at(const nlohmann::json& obj, const char* key, const char* where) {
    if (!obj.contains(key)) {
        throw Error(Errc::bad_spec, std::string(where) + ": missing key '" + key + "'");
    }
    if (!obj[key].is_number()) {
        throw Error(Errc::bad_spec, std::string(where) + ": '" + key + "' must be a number");
    }
    return obj[key].get<double>();
}

LawSpec law_from_json(const nlohmann::json& j, const char* where) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw Error(Errc::bad_spec, std::string(where) + ": expected an object with a 'kind'");
    }
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "lognormal") {
        check_keys(j, {"kind", "mu", "sigma"}, where);
        return LawSpec::lognormal(number_at(j, "mu", where), number_at(j, "sigma", where));
    }
    if (kind == "uniform") {
        check_keys(j, {"kind", "lo", "hi"}, where);
        return LawSpec::uniform(number_at(j, "lo", where), number_at(j, "hi", where));
    }
    if (kind == "two_point") {
        check_keys(j, {"kind", "lo", "hi", "weight"}, where);
        return LawSpec::two_point(number_at(j, "lo", where), number_at(j, "hi", where),
                                  number_at(j, "weight", where));
    }
    if (kind == "constant") {
        check_keys(j, {"kind", "value"}, where);
        return LawSpec::constant(number_at(j, "value", where));
    }
    throw Error(Errc::bad_spec, std::string(where) + ": unknown law kind '" + kind + "'");
}

} // namespace

double Pcg32::next_normal() {
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

void validate_spec(const TapeSpec& spec) {
    if (spec.n_trades < 1) {
        throw Error(Errc::bad_spec, "n_trades must be at least 1");
    }
    if (spec.n_trades > 100'000'000) {
        throw Error(Errc::bad_spec, "n_trades above 1e8 is not supported");
    }
    validate_law(spec.price_law, "price_law", true);
    validate_law(spec.volume_law, "volume_law", false);
    if (spec.dependence.kind == Dependence::Kind::volume_follows_price) {
        if (!std::isfinite(spec.dependence.beta)) {
            throw Error(Errc::bad_spec, "dependence: beta must be finite");
        }
        if (spec.price_law.kind != LawSpec::Kind::lognormal ||
            spec.volume_law.kind != LawSpec::Kind::lognormal) {
            throw Error(Errc::bad_spec,
                        "volume_follows_price requires lognormal price and volume laws");
        }
    }
}

std::vector<TradeTick> generate(const TapeSpec& spec) {
    validate_spec(spec);
    Pcg32 price_rng(spec.seed, 1);
    Pcg32 volume_rng(spec.seed, 2);
    std::vector<TradeTick> ticks;
    ticks.reserve(static_cast<std::size_t>(spec.n_trades));
    for (std::int64_t i = 0; i < spec.n_trades; ++i) {
        double z_price = 0.0;
        const double price = draw_law(spec.price_law, price_rng, &z_price);
        double volume = 0.0;
        switch (spec.dependence.kind) {
            case Dependence::Kind::independent:
                volume = draw_law(spec.volume_law, volume_rng, nullptr);
                break;
            case Dependence::Kind::comonotone:
                volume = price;
                break;
            case Dependence::Kind::volume_follows_price: {
                const double z_volume = volume_rng.next_normal();
                volume = std::exp(spec.volume_law.a + spec.dependence.beta * z_price +
                                  spec.volume_law.b * z_volume);
                break;
            }
        }
        ticks.push_back(make_tick(i * kTickSpacingNs, price, volume));
    }
    return ticks;
}

std::vector<double> oracle_price_moments(const TapeSpec& spec, std::span<const TradeTick> tape,
                                         int n_max) {
    (void)spec;
    if (n_max < 1 || n_max > PowerSums::kMaxOrder) {
        throw Error(Errc::invalid_argument, "moment order out of range");
    }
    if (tape.empty()) {
        throw Error(Errc::empty_tape, "cannot take oracle moments of an empty tape");
    }
    std::vector<CompensatedSum> sums(static_cast<std::size_t>(n_max));
    for (const auto& tick : tape) {
        double pow = 1.0;
        for (int n = 0; n < n_max; ++n) {
            pow *= tick.price;
            sums[static_cast<std::size_t>(n)].add(pow);
        }
    }
    std::vector<double> moments(static_cast<std::size_t>(n_max));
    for (int n = 0; n < n_max; ++n) {
        moments[static_cast<std::size_t>(n)] =
            sums[static_cast<std::size_t>(n)].value() / static_cast<double>(tape.size());
    }
    return moments;
}

TapeSpec tape_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, e.what());
    }
    if (!j.is_object()) {
        throw Error(Errc::bad_spec, "tape spec must be a JSON object");
    }
    check_keys(j, {"n_trades", "price_law", "volume_law", "dependence", "seed"}, "tape spec");
    TapeSpec spec;
    if (!j.contains("n_trades") || !j["n_trades"].is_number_integer()) {
        throw Error(Errc::bad_spec, "tape spec: 'n_trades' must be an integer");
    }
    spec.n_trades = j["n_trades"].get<std::int64_t>();
    if (!j.contains("price_law") || !j.contains("volume_law")) {
        throw Error(Errc::bad_spec, "tape spec: 'price_law' and 'volume_law' are required");
    }
    spec.price_law = law_from_json(j["price_law"], "price_law");
    spec.volume_law = law_from_json(j["volume_law"], "volume_law");
    if (j.contains("dependence")) {
        const auto& dep = j["dependence"];
        if (!dep.is_object() || !dep.contains("kind") || !dep["kind"].is_string()) {
            throw Error(Errc::bad_spec, "dependence: expected an object with a 'kind'");
        }
        const std::string kind = dep["kind"].get<std::string>();
        if (kind == "independent") {
            check_keys(dep, {"kind"}, "dependence");
            spec.dependence = Dependence::independent();
        } else if (kind == "comonotone") {
            check_keys(dep, {"kind"}, "dependence");
            spec.dependence = Dependence::comonotone();
        } else if (kind == "volume_follows_price") {
            check_keys(dep, {"kind", "beta"}, "dependence");
            spec.dependence =
                Dependence::volume_follows_price(number_at(dep, "beta", "dependence"));
        } else {
            throw Error(Errc::bad_spec, "dependence: unknown kind '" + kind + "'");
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() ||
            (j["seed"].is_number_integer() && !j["seed"].is_number_unsigned() &&
             j["seed"].get<std::int64_t>() < 0)) {
            throw Error(Errc::bad_spec, "tape spec: 'seed' must be a nonnegative integer");
        }
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    validate_spec(spec);
    return spec;
}

std::string tape_spec_to_json(const TapeSpec& spec) {
    JsonWriter w;
    write_spec(w, spec);
    return w.str();
}

std::string tape_metadata_json(const TapeSpec& spec) {
    JsonWriter w;
    w.begin_object();
    w.key("generator").value(kGeneratorName);
    w.key("tick_spacing_ns").value(static_cast<std::int64_t>(kTickSpacingNs));
    w.key("spec");
    write_spec(w, spec);
    w.end_object();
    return w.str();
}

} // namespace tickmoments
