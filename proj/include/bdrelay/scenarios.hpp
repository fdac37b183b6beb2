#pragma once

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdrelay/asymptotics.hpp"
#include "bdrelay/channel.hpp"
#include "bdrelay/errors.hpp"
#include "bdrelay/protocols.hpp"
#include "bdrelay/scheduler.hpp"

namespace bdrelay {

/// Parsed experiment configuration. Flat `key = value` text with `#`
/// comments; unknown keys are rejected. See the README for the grammar.
struct ScenarioConfig {
    std::string scenario;

    // Network source: "example_network", "line", or "file:<path>".
    std::string gains_source = "example_network";
    int m = -1;  // unset; scenarios fall back to their own defaults
    double d_ab = 1.0;
    double exponent = 3.8;
    double k = 1.0;
    std::optional<double> h_ab_sq = 0.04;  // direct-link override (squared magnitude)

    std::vector<double> p_db = {0.0, 20.0};
    std::vector<Protocol> protocols = all_protocols();
    int lambda_steps = 101;
    bool hull = false;
    bool power_grid = false;
    bool exhaustive_order = false;

    int m_min = 1;  // relay-count sweep
    int m_max = 8;

    double grid_step = 0.1;  // two-relay placement grid

    int B = 3;  // schedule scenario
    std::uint64_t L = 256;
    std::uint64_t seed = 1;

    double h_sq = 1.0;       // asymptotics: common squared gain
    double h_min_sq = 1.0;   // asymptotics: extreme gains for gap reports
    double h_max_sq = 1.0;

    // Explicit configurations, replacing enumeration / the full chain.
    std::optional<std::vector<DecodeSets>> decode_sets;
    std::optional<HopPartition> hops;
    std::optional<RelayOrder> order;

    int resolved_m(int fallback) const { return m >= 1 ? m : fallback; }

    GainMatrix load_gains(int m_fallback = 2) const {
        if (gains_source == "example_network") return example_network_gains();
        if (gains_source == "line")
            return line_gains(resolved_m(m_fallback), d_ab, exponent, k, h_ab_sq);
        if (gains_source.rfind("file:", 0) == 0) {
            const std::string path = gains_source.substr(5);
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot open gain file: " + path);
            if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
                nlohmann::json j;
                in >> j;
                return gains_from_json(j);
            }
            return read_gains_csv(in);
        }
        throw ConfigError("unknown gains source: " + gains_source);
    }

    EvalOptions eval_options() const {
        EvalOptions opt;
        opt.power_grid = power_grid;
        opt.exhaustive_order = exhaustive_order;
        opt.decode_sets = decode_sets;
        opt.partition = hops;
        opt.order = order;
        return opt;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: boolean expected for " + key);
}

// "1+3" -> {1,3}; empty string -> {}
inline std::set<int> parse_relay_set(const std::string& s) {
    std::set<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '+')) {
        item = trim(item);
        if (!item.empty()) out.insert(std::stoi(item));
    }
    return out;
}

// "A=1+3|B=2 ; A=|B=1" -> two configurations
inline std::vector<DecodeSets> parse_decode_sets(const std::string& s) {
    std::vector<DecodeSets> out;
    std::stringstream entries(s);
    std::string entry;
    while (std::getline(entries, entry, ';')) {
        entry = trim(entry);
        if (entry.empty()) continue;
        const auto bar = entry.find('|');
        if (bar == std::string::npos || entry.rfind("A=", 0) != 0 ||
            entry.compare(bar + 1, 2, "B=") != 0)
            throw ConfigError("config: decode_sets entries look like A=1+3|B=2");
        DecodeSets ds;
        ds.A = parse_relay_set(entry.substr(2, bar - 2));
        ds.B = parse_relay_set(entry.substr(bar + 3));
        out.push_back(std::move(ds));
    }
    if (out.empty()) throw ConfigError("config: decode_sets is empty");
    return out;
}

// "[1+2][3]" -> two hop subsets
inline HopPartition parse_hops(const std::string& s) {
    HopPartition part;
    size_t pos = 0;
    while (pos < s.size()) {
        if (s[pos] != '[') throw ConfigError("config: hops look like [1+2][3]");
        const size_t close = s.find(']', pos);
        if (close == std::string::npos) throw ConfigError("config: unterminated hop subset");
        const auto relays = parse_relay_set(s.substr(pos + 1, close - pos - 1));
        part.hops.emplace_back(relays.begin(), relays.end());
        pos = close + 1;
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    if (part.hops.empty()) throw ConfigError("config: hops is empty");
    return part;
}

// "2>1>3" -> chain order
inline RelayOrder parse_order(const std::string& s) {
    RelayOrder ord;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '>')) ord.order.push_back(std::stoi(trim(item)));
    return ord;
}

}  // namespace detail

inline ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        try {
            if (key == "scenario") cfg.scenario = val;
            else if (key == "gains") cfg.gains_source = val;
            else if (key == "m") cfg.m = std::stoi(val);
            else if (key == "d_ab") cfg.d_ab = std::stod(val);
            else if (key == "exponent") cfg.exponent = std::stod(val);
            else if (key == "k") cfg.k = std::stod(val);
            else if (key == "h_ab_sq")
                cfg.h_ab_sq = (val == "none") ? std::nullopt : std::optional<double>(std::stod(val));
            else if (key == "p_db") {
                cfg.p_db.clear();
                for (const auto& v : detail::split_list(val)) cfg.p_db.push_back(std::stod(v));
            } else if (key == "protocols") {
                cfg.protocols.clear();
                if (val == "all") cfg.protocols = all_protocols();
                else {
                    for (const auto& v : detail::split_list(val)) {
                        auto p = parse_protocol(v);
                        if (!p) throw ConfigError("config: unknown protocol " + v);
                        cfg.protocols.push_back(*p);
                    }
                }
            } else if (key == "lambda_steps") cfg.lambda_steps = std::stoi(val);
            else if (key == "hull") cfg.hull = detail::parse_bool(val, key);
            else if (key == "power_grid") cfg.power_grid = detail::parse_bool(val, key);
            else if (key == "exhaustive_order") cfg.exhaustive_order = detail::parse_bool(val, key);
            else if (key == "m_range") {
                const auto dots = val.find("..");
                if (dots == std::string::npos) throw ConfigError("config: m_range expects a..b");
                cfg.m_min = std::stoi(val.substr(0, dots));
                cfg.m_max = std::stoi(val.substr(dots + 2));
            } else if (key == "grid_step") cfg.grid_step = std::stod(val);
            else if (key == "B") cfg.B = std::stoi(val);
            else if (key == "L") cfg.L = std::stoull(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "h_sq") cfg.h_sq = std::stod(val);
            else if (key == "h_min_sq") cfg.h_min_sq = std::stod(val);
            else if (key == "h_max_sq") cfg.h_max_sq = std::stod(val);
            else if (key == "decode_sets") cfg.decode_sets = detail::parse_decode_sets(val);
            else if (key == "hops") cfg.hops = detail::parse_hops(val);
            else if (key == "order") cfg.order = detail::parse_order(val);
            else throw ConfigError("config: unknown key " + key);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(lineno) + ": bad value for " + key);
        }
    }
    if (cfg.m_min < 1 || cfg.m_max < cfg.m_min) throw ConfigError("config: bad m range");
    if (cfg.lambda_steps < 1) throw ConfigError("config: lambda_steps must be >= 1");
    return cfg;
}

inline ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// --- scenario results -------------------------------------------------------

struct RegionsEntry {
    double p_db = 0.0;
    std::string label;  // protocol or baseline name used in file names
    int phase_count = 0;
    std::vector<BoundaryPoint> sweep;  // one row per lambda
    RegionBoundary frontier;           // Pareto-filtered (hulled when asked)
};

struct RegionsResult {
    std::vector<RegionsEntry> entries;
};

struct SumRateRow {
    std::string label;
    double p_db = 0.0;
    int m = 0;
    RatePair rates;
    double sum = 0.0;
    std::string config_id;
};

struct LineResult {
    RegionsResult regions;
    std::vector<SumRateRow> sums;
};

struct RelayCountResult {
    std::vector<SumRateRow> rows;  // one per (m, protocol, P)
};

struct TwoRelayGridRow {
    double d1 = 0.0, d2 = 0.0;
    std::string label;
    double p_db = 0.0;
    double sum = 0.0;
};

struct TwoRelayGridResult {
    std::vector<TwoRelayGridRow> rows;
};

struct ScheduleResult {
    ScheduleTranscript transcript;
    long long expected_transmissions = 0;
    bool transmission_count_ok = false;
    bool delivery_ok = false;
};

struct AsymptoticsResult {
    std::vector<GapReport> gaps;
    struct PrelogRow {
        std::string family;
        double estimate = 0.0;
    };
    std::vector<PrelogRow> prelogs;
    struct LowSnrRow {
        std::string family;
        double closed_form = 0.0;
    };
    std::vector<LowSnrRow> low_snr;
};

// --- scenario runners -------------------------------------------------------

namespace detail {

inline RegionsEntry make_regions_entry(Protocol proto, const std::string& label,
                                       const GainMatrix& g, double p_db,
                                       const std::vector<double>& lambdas,
                                       const EvalOptions& opt, bool hull) {
    RegionsEntry e;
    e.p_db = p_db;
    e.label = label;
    e.phase_count = protocol_phase_count(proto, g.relay_count(), opt);
    const double P = db_to_linear(p_db);
    if (is_af(proto)) {
        const RatePair r = af_rates(proto, g, P);
        for (double l : lambdas) {
            BoundaryPoint pt;
            pt.lambda = l;
            pt.rates = r;
            pt.schedule = PhaseSchedule::uniform(e.phase_count);
            pt.config_id = "af";
            pt.objective = l * r.a + (1.0 - l) * r.b;
            e.sweep.push_back(std::move(pt));
        }
        e.frontier.points = {e.sweep.front()};
        return e;
    }
    auto provider = make_provider(protocol_constraint_sets(proto, g, P, opt));
    e.sweep = sweep_winners(provider, lambdas);
    e.frontier.points = bdrelay::detail::pareto_filter(e.sweep);
    if (hull) e.frontier.points = bdrelay::detail::concave_envelope(e.frontier.points);
    return e;
}

/// Decode-set configurations that use at most one relay -- the single-relay
/// reference curves plotted next to the multi-relay regions.
inline RegionsEntry make_single_relay_entry(Protocol proto, const GainMatrix& g, double p_db,
                                            const std::vector<double>& lambdas,
                                            const EvalOptions& opt, bool hull) {
    const double P = db_to_linear(p_db);
    std::vector<LabeledConstraintSet> sets;
    for (const auto& ds : enumerate_decode_sets(g.relay_count(), opt.decode_set_cap)) {
        std::set<int> used(ds.A);
        used.insert(ds.B.begin(), ds.B.end());
        if (used.size() > 1) continue;
        auto cs = proto == Protocol::DfMabc ? build_mabc_df(g, P, ds) : build_tdbc_df(g, P, ds);
        sets.push_back({ds.id(), std::move(cs)});
    }
    RegionsEntry e;
    e.p_db = p_db;
    e.label = std::string(protocol_name(proto)) + "_single";
    e.phase_count = protocol_phase_count(proto, g.relay_count());
    e.sweep = sweep_winners(make_provider(std::move(sets)), lambdas);
    e.frontier.points = bdrelay::detail::pareto_filter(e.sweep);
    if (hull) e.frontier.points = bdrelay::detail::concave_envelope(e.frontier.points);
    return e;
}

}  // namespace detail

/// Achievable-region tables per protocol and power, including single-relay
/// reference curves for the two terminal-phase protocols.
inline RegionsResult scenario_regions(const ScenarioConfig& cfg) {
    const GainMatrix g = cfg.load_gains();
    const auto lambdas = lambda_sweep(cfg.lambda_steps);
    const EvalOptions opt = cfg.eval_options();
    RegionsResult out;
    for (double p_db : cfg.p_db) {
        for (Protocol proto : cfg.protocols)
            out.entries.push_back(detail::make_regions_entry(proto, protocol_name(proto), g, p_db,
                                                             lambdas, opt, cfg.hull));
        if (g.relay_count() > 1) {
            for (Protocol proto : {Protocol::DfMabc, Protocol::DfTdbc}) {
                if (std::find(cfg.protocols.begin(), cfg.protocols.end(), proto) ==
                    cfg.protocols.end())
                    continue;
                out.entries.push_back(
                    detail::make_single_relay_entry(proto, g, p_db, lambdas, opt, cfg.hull));
            }
        }
    }
    return out;
}

/// Relays evenly spaced on a line: per-protocol regions plus a sum-rate
/// summary per power.
inline LineResult scenario_line(const ScenarioConfig& cfg) {
    ScenarioConfig line_cfg = cfg;
    line_cfg.gains_source = "line";
    const GainMatrix g = line_cfg.load_gains(/*m_fallback=*/8);
    const auto lambdas = lambda_sweep(cfg.lambda_steps);
    const EvalOptions opt = cfg.eval_options();

    LineResult out;
    for (double p_db : cfg.p_db) {
        const double P = db_to_linear(p_db);
        for (Protocol proto : cfg.protocols) {
            out.regions.entries.push_back(detail::make_regions_entry(
                proto, protocol_name(proto), g, p_db, lambdas, opt, cfg.hull));
            const ProtocolPoint best = best_sum_rate(proto, g, P, opt);
            out.sums.push_back(SumRateRow{protocol_name(proto), p_db, g.relay_count(), best.rates,
                                          best.rates.sum(), best.config_id});
        }
    }
    return out;
}

/// Optimized sum rate against the relay count on the line geometry.
inline RelayCountResult scenario_relay_count(const ScenarioConfig& cfg) {
    RelayCountResult out;
    const EvalOptions opt = cfg.eval_options();
    for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
        const GainMatrix g = line_gains(m, cfg.d_ab, cfg.exponent, cfg.k, cfg.h_ab_sq);
        for (double p_db : cfg.p_db) {
            const double P = db_to_linear(p_db);
            for (Protocol proto : cfg.protocols) {
                const ProtocolPoint best = best_sum_rate(proto, g, P, opt);
                out.rows.push_back(SumRateRow{protocol_name(proto), p_db, m, best.rates,
                                              best.rates.sum(), best.config_id});
            }
        }
    }
    return out;
}

/// Sum rate over all ordered two-relay placements (d1 < d2) on the unit
/// line.
inline TwoRelayGridResult scenario_two_relay_grid(const ScenarioConfig& cfg) {
    if (!(cfg.grid_step > 0.0 && cfg.grid_step < 1.0))
        throw ConfigError("two-relay-grid: grid_step must lie in (0,1)");
    const long long N = std::llround(1.0 / cfg.grid_step);
    if (std::abs(N * cfg.grid_step - 1.0) > 1e-9)
        throw ConfigError("two-relay-grid: grid_step must divide 1");
    const EvalOptions opt = cfg.eval_options();

    TwoRelayGridResult out;
    for (long long i = 1; i < N; ++i) {
        for (long long j = i + 1; j < N; ++j) {
            const double d1 = static_cast<double>(i) / N;
            const double d2 = static_cast<double>(j) / N;
            const GainMatrix g =
                gains_from_positions({d1, d2}, cfg.d_ab, cfg.exponent, cfg.k, cfg.h_ab_sq);
            for (double p_db : cfg.p_db) {
                const double P = db_to_linear(p_db);
                for (Protocol proto : cfg.protocols) {
                    const ProtocolPoint best = best_sum_rate(proto, g, P, opt);
                    out.rows.push_back(
                        TwoRelayGridRow{d1, d2, protocol_name(proto), p_db, best.rates.sum()});
                }
            }
        }
    }
    return out;
}

/// One chain-schedule run over random sub-messages, with the closed-form
/// transmission count and the delivery check.
inline ScheduleResult scenario_schedule(const ScenarioConfig& cfg) {
    const int m = cfg.resolved_m(2);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::uint64_t> dist(0, cfg.L - 1);
    std::vector<std::uint64_t> msgs_a(cfg.B), msgs_b(cfg.B);
    for (auto& v : msgs_a) v = dist(rng);
    for (auto& v : msgs_b) v = dist(rng);

    ScheduleResult out;
    out.transcript = run_schedule(m, cfg.B, msgs_a, msgs_b, cfg.L);
    out.expected_transmissions = phase_count(m, cfg.B);
    out.transmission_count_ok =
        static_cast<long long>(out.transcript.events.size()) == out.expected_transmissions;
    out.delivery_ok = verify_delivery(out.transcript, msgs_a, msgs_b);
    return out;
}

/// Gap reports plus numeric pre-log estimates on the equal-gain network.
inline AsymptoticsResult scenario_asymptotics(const ScenarioConfig& cfg) {
    AsymptoticsResult out;
    const int m = cfg.resolved_m(2);
    for (HighSnrScheme s : {HighSnrScheme::DfMabc, HighSnrScheme::DfTdbc, HighSnrScheme::DfMhmr,
                            HighSnrScheme::AfMabc, HighSnrScheme::AfTdbc, HighSnrScheme::AfMhmr})
        out.gaps.push_back(make_gap_report(s, m, cfg.h_min_sq, cfg.h_max_sq));

    const GainMatrix g = equal_gains(m, cfg.h_sq);
    const EvalOptions opt = cfg.eval_options();
    for (Protocol proto : all_protocols()) {
        auto evaluator = [&](double P) { return asymptotic_sum_rate(proto, g, P, opt); };
        out.prelogs.push_back({protocol_name(proto), numeric_prelog(evaluator, 1e6, 1e8)});
    }

    const double P_low = 1e-4;
    const std::pair<const char*, LowSnrForm> forms[] = {
        {"df_mabc", LowSnrForm::DfMabc},       {"out_mabc", LowSnrForm::MabcOut},
        {"df_tdbc", LowSnrForm::DfTdbc},       {"out_tdbc", LowSnrForm::TdbcOut},
        {"df_mhmr", LowSnrForm::DfMhmr},       {"out_mhmr_lower", LowSnrForm::MhmrOutLower},
        {"out_mhmr_upper", LowSnrForm::MhmrOutUpper},
    };
    for (const auto& [name, form] : forms)
        out.low_snr.push_back({name, low_snr_sumrate(form, m, cfg.h_sq, P_low)});
    return out;
}

// --- emission ---------------------------------------------------------------

namespace detail {

inline std::string format_db(double p_db) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", p_db);
    return buf;
}

inline std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file: " + path.string());
    out << content;
}

inline nlohmann::json points_to_json(const std::vector<BoundaryPoint>& pts) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : pts) {
        rows.push_back({{"lambda", p.lambda},
                        {"R_a", p.rates.a},
                        {"R_b", p.rates.b},
                        {"delta", p.schedule.delta},
                        {"config_id", p.config_id}});
    }
    return rows;
}

}  // namespace detail

/// Writes `<scenario>_<label>_<PdB>.csv` (or .json) per regions entry.
inline void emit_regions(const RegionsResult& res, const std::string& scenario,
                         const std::filesystem::path& out_dir, const std::string& format) {
    std::filesystem::create_directories(out_dir);
    for (const auto& e : res.entries) {
        const std::string stem = scenario + "_" + e.label + "_" + detail::format_db(e.p_db);
        if (format == "json") {
            nlohmann::json j{{"p_db", e.p_db},
                             {"label", e.label},
                             {"sweep", detail::points_to_json(e.sweep)},
                             {"frontier", detail::points_to_json(e.frontier.points)}};
            detail::write_file(out_dir / (stem + ".json"), j.dump(2) + "\n");
        } else {
            std::ostringstream os;
            write_points_csv(e.sweep, e.phase_count, os);
            detail::write_file(out_dir / (stem + ".csv"), os.str());
        }
    }
}

inline void emit_sum_rows(const std::vector<SumRateRow>& rows, const std::string& stem_base,
                          bool with_m, const std::filesystem::path& out_dir,
                          const std::string& format) {
    std::filesystem::create_directories(out_dir);
    // Group by (label, p_db); one file per group.
    std::vector<std::pair<std::string, double>> groups;
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.label, r.p_db);
        if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
    }
    for (const auto& [label, p_db] : groups) {
        const std::string stem = stem_base + "_" + label + "_" + detail::format_db(p_db);
        if (format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : rows) {
                if (r.label != label || r.p_db != p_db) continue;
                nlohmann::json j{{"R_a", r.rates.a},
                                 {"R_b", r.rates.b},
                                 {"sum_rate", r.sum},
                                 {"config_id", r.config_id}};
                if (with_m) j["m"] = r.m;
                arr.push_back(std::move(j));
            }
            detail::write_file(out_dir / (stem + ".json"), arr.dump(2) + "\n");
        } else {
            std::ostringstream os;
            os << (with_m ? "m,R_a,R_b,sum_rate,config_id\n" : "R_a,R_b,sum_rate,config_id\n");
            for (const auto& r : rows) {
                if (r.label != label || r.p_db != p_db) continue;
                if (with_m) os << r.m << ",";
                os << detail::format_num(r.rates.a) << "," << detail::format_num(r.rates.b) << ","
                   << detail::format_num(r.sum) << "," << r.config_id << "\n";
            }
            detail::write_file(out_dir / (stem + ".csv"), os.str());
        }
    }
}

inline void emit_two_relay_grid(const TwoRelayGridResult& res,
                                const std::filesystem::path& out_dir, const std::string& format) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::pair<std::string, double>> groups;
    for (const auto& r : res.rows) {
        const auto key = std::make_pair(r.label, r.p_db);
        if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
    }
    for (const auto& [label, p_db] : groups) {
        const std::string stem = "two-relay-grid_" + label + "_" + detail::format_db(p_db);
        if (format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : res.rows)
                if (r.label == label && r.p_db == p_db)
                    arr.push_back({{"d1", r.d1}, {"d2", r.d2}, {"sum_rate", r.sum}});
            detail::write_file(out_dir / (stem + ".json"), arr.dump(2) + "\n");
        } else {
            std::ostringstream os;
            os << "d1,d2,sum_rate\n";
            for (const auto& r : res.rows)
                if (r.label == label && r.p_db == p_db)
                    os << detail::format_num(r.d1) << "," << detail::format_num(r.d2) << ","
                       << detail::format_num(r.sum) << "\n";
            detail::write_file(out_dir / (stem + ".csv"), os.str());
        }
    }
}

inline void emit_schedule(const ScheduleResult& res, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    detail::write_file(out_dir / "schedule_transcript.jsonl", transcript_to_jsonl(res.transcript));
    nlohmann::json j{{"m", res.transcript.m},
                     {"B", res.transcript.B},
                     {"L", res.transcript.L},
                     {"transmissions", res.transcript.events.size()},
                     {"expected_transmissions", res.expected_transmissions},
                     {"transmission_count_ok", res.transmission_count_ok},
                     {"delivery_ok", res.delivery_ok}};
    detail::write_file(out_dir / "schedule_report.json", j.dump(2) + "\n");
}

inline void emit_asymptotics(const AsymptoticsResult& res, const std::filesystem::path& out_dir,
                             const std::string& format) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json gaps = nlohmann::json::array();
    for (const auto& g : res.gaps) gaps.push_back(gap_report_to_json(g));
    detail::write_file(out_dir / "asymptotics_gaps.json", gaps.dump(2) + "\n");

    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : res.prelogs) arr.push_back({{"family", p.family}, {"prelog", p.estimate}});
        detail::write_file(out_dir / "asymptotics_prelog.json", arr.dump(2) + "\n");
        nlohmann::json low = nlohmann::json::array();
        for (const auto& r : res.low_snr)
            low.push_back({{"family", r.family}, {"sum_rate", r.closed_form}});
        detail::write_file(out_dir / "asymptotics_low_snr.json", low.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "family,prelog\n";
        for (const auto& p : res.prelogs) os << p.family << "," << detail::format_num(p.estimate) << "\n";
        detail::write_file(out_dir / "asymptotics_prelog.csv", os.str());
        std::ostringstream os2;
        os2 << "family,sum_rate\n";
        for (const auto& r : res.low_snr)
            os2 << r.family << "," << detail::format_num(r.closed_form) << "\n";
        detail::write_file(out_dir / "asymptotics_low_snr.csv", os2.str());
    }
}

}  // namespace bdrelay
