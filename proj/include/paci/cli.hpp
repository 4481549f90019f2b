#pragma once

// Command-line front end. run_cli never touches std::cout/std::cerr directly,
// so it can be driven in-process by tests.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paci/aggregator.hpp"
#include "paci/api.hpp"
#include "paci/counterfactual.hpp"
#include "paci/csv_io.hpp"
#include "paci/dcm.hpp"
#include "paci/epicriteria.hpp"
#include "paci/error.hpp"
#include "paci/http_server.hpp"
#include "paci/json_io.hpp"
#include "paci/sensitivity.hpp"
#include "paci/svg.hpp"
#include "paci/valuemodel.hpp"

namespace paci::cli {

using nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr std::size_t kPlotTrajectories = 400;

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  // the command ran but reported a negative finding
inline constexpr int kError = 2;   // invalid input, config or judgements
inline constexpr int kUsage = 64;

struct Options {
    std::string input;     // raw daily CSV
    std::string criteria;  // precomputed criteria CSV
    std::string config;
    std::string format;  // csv | json; empty means the command's default
    std::string out_dir;
    std::string from;
    std::string to;
    std::uint64_t seed = 42;
    std::size_t samples = 10000;
    double delta_perf = 0.10;
    double delta_value = 0.10;
    double delta_weight = 0.10;
    std::string mode = "around_nominal";
    std::size_t pivot = CounterfactualSpec{}.pivot_day;
    double value = 0.0;
    std::string previous;
    std::string document;  // elicit input
    std::string manifest;
    std::string host = "127.0.0.1";
    int port = 8080;
};

// Record of one CLI run, written as manifest.json next to the outputs.
struct RunManifest {
    std::string input;
    std::string config;
    std::vector<std::string> command;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
};

inline json to_json(const RunManifest& m) {
    return {{"input", m.input},     {"config", m.config}, {"command", m.command},
            {"outputs", m.outputs}, {"seed", m.seed},     {"tool_version", m.tool_version}};
}

inline RunManifest parse_manifest(const json& doc) {
    RunManifest m;
    try {
        m.command = doc.at("command").get<std::vector<std::string>>();
        m.input = doc.value("input", std::string());
        m.config = doc.value("config", std::string());
        m.outputs = doc.value("outputs", std::vector<std::string>{});
        m.seed = doc.value("seed", std::uint64_t{0});
        m.tool_version = doc.value("tool_version", std::string());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("malformed manifest: ") + e.what());
    }
    return m;
}

namespace detail {

inline json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_input, "'" + path + "' is not valid JSON: " + e.what());
    }
}

inline std::string config_path(const Options& o) {
    if (!o.config.empty()) return o.config;
    if (const char* env = std::getenv("PACI_CONFIG"); env && *env) return env;
    return {};
}

inline ModelConfig load_config(const Options& o) {
    const auto path = config_path(o);
    return path.empty() ? default_config() : json_io::load_config_file(path);
}

inline CriteriaMatrix load_matrix(const Options& o) {
    if (!o.input.empty() && !o.criteria.empty()) {
        throw Error(ErrorCode::invalid_input, "give either --input or --criteria, not both");
    }
    CriteriaMatrix m;
    if (!o.input.empty()) {
        m = compute_performances(csv::read_raw_file(o.input));
    } else if (!o.criteria.empty()) {
        m = csv::read_criteria_file(o.criteria);
    } else {
        throw Error(ErrorCode::invalid_input, "an input series is required (--input or --criteria)");
    }
    std::optional<Date> from, to;
    if (!o.from.empty()) from = Date::parse(o.from);
    if (!o.to.empty()) to = Date::parse(o.to);
    m = between(m, from, to);
    if (m.empty()) throw Error(ErrorCode::out_of_range, "no rows in the requested date range");
    return m;
}

inline PerturbationSpec perturbation(const Options& o) {
    PerturbationSpec spec;
    spec.perf_delta = o.delta_perf;
    spec.value_delta = o.delta_value;
    spec.weight_delta = o.delta_weight;
    spec.rng_seed = o.seed;
    spec.sample_count = o.samples;
    return spec;
}

inline SimulationMode simulation_mode(const std::string& s) {
    if (s == "full_simplex") return SimulationMode::full_simplex;
    if (s == "around_nominal") return SimulationMode::around_nominal;
    throw Error(ErrorCode::invalid_input, "unknown simulation mode '" + s + "'");
}

// Routes each artifact to stdout or to a file in --out-dir.
class Sink {
public:
    Sink(const Options& o, std::ostream& out) : out_dir_(o.out_dir), out_(out) {
        if (!out_dir_.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(out_dir_, ec);
            if (ec) throw Error(ErrorCode::io_error, "cannot create '" + out_dir_ + "': " + ec.message());
        }
    }

    bool to_files() const { return !out_dir_.empty(); }

    void emit(const std::string& name, const std::function<void(std::ostream&)>& write) {
        if (!to_files()) {
            write(out_);
            return;
        }
        const auto path = (std::filesystem::path(out_dir_) / name).string();
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
        write(f);
        if (!f) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
        written_.push_back(path);
    }

    void emit_json(const std::string& stem, const json& doc) {
        emit(stem + ".json", [&](std::ostream& s) { s << doc.dump(2) << '\n'; });
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    std::string out_dir_;
    std::ostream& out_;
    std::vector<std::string> written_;
};

inline bool want_json(const Options& o, bool json_by_default = false) {
    if (o.format.empty()) return json_by_default;
    return o.format == "json";
}

inline json series_document(const IndicatorSeries& s) {
    return {{"config_id", s.points.empty() ? 0 : s.points.front().config_id}, {"points", json_io::to_json(s)}};
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

namespace detail {

inline int dispatch(CLI::App& app, const Options& o, const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
    auto sub = [&](const char* name) { return app.get_subcommand(name)->parsed(); };
    Sink sink(o, out);
    int status = kOk;

    if (sub("ingest")) {
        if (o.input.empty()) throw Error(ErrorCode::invalid_input, "ingest needs --input");
        const auto raw = csv::read_raw_file(o.input);
        const auto m = compute_performances(raw);
        if (want_json(o)) {
            std::size_t zero = 0, unlagged = 0;
            for (const auto& r : m.rows) {
                zero += r.zero_activity;
                unlagged += r.no_lagged_cases;
            }
            sink.emit_json("ingest", {{"days", raw.size()},
                                      {"first_date", raw.dates().front().iso()},
                                      {"last_date", raw.dates().back().iso()},
                                      {"criteria_rows", m.size()},
                                      {"zero_activity_days", zero},
                                      {"no_lagged_case_days", unlagged}});
        } else {
            if (sink.to_files()) sink.emit("raw.csv", [&](std::ostream& s) { csv::write_raw(s, raw); });
            sink.emit("criteria.csv", [&](std::ostream& s) { csv::write_criteria(s, m); });
        }
    } else if (sub("compute")) {
        const auto s = run_series(load_matrix(o), load_config(o));
        if (want_json(o)) {
            sink.emit_json("series", series_document(s));
        } else {
            sink.emit("series.csv", [&](std::ostream& f) { csv::write_series(f, s); });
        }
    } else if (sub("contributions")) {
        const auto s = run_series(load_matrix(o), load_config(o));
        if (want_json(o)) {
            sink.emit_json("contributions", series_document(s));
        } else {
            sink.emit("contributions.csv", [&](std::ostream& f) { csv::write_contributions(f, s); });
        }
    } else if (sub("classify")) {
        const auto cfg = load_config(o);
        std::optional<std::string> previous;
        if (!o.previous.empty()) previous = o.previous;
        const auto state = classify(o.value, cfg.state_scale, previous);
        if (want_json(o)) {
            sink.emit_json("classify", {{"value", o.value}, {"state", state}});
        } else {
            sink.emit("classify.txt", [&](std::ostream& f) { f << state << '\n'; });
        }
    } else if (auto* sens = app.get_subcommand("sensitivity"); sens->parsed()) {
        const auto m = load_matrix(o);
        const auto cfg = load_config(o);
        const auto spec = perturbation(o);
        if (sens->get_subcommand("envelope")->parsed()) {
            const auto env = exact_envelope(m, cfg, spec);
            if (want_json(o)) {
                sink.emit_json("envelope", json_io::to_json(env));
            } else {
                sink.emit("envelope.csv", [&](std::ostream& f) { csv::write_envelope(f, env); });
            }
        } else {
            if (auto v = violations(spec); !v.empty()) {
                throw Error(ErrorCode::invalid_input, "invalid perturbation spec", std::move(v));
            }
            const auto mode = simulation_mode(o.mode);
            const auto values = criterion_values(m, cfg);
            if (want_json(o)) {
                json samples = json::array();
                for (std::uint64_t id = 0; id < spec.sample_count; ++id) {
                    const auto t = simulate_sample(values, cfg.weights, spec, mode, id);
                    samples.push_back({{"sample_id", t.sample_id}, {"weights", t.weights}, {"values", t.values}});
                }
                sink.emit_json("simulation", {{"seed", spec.rng_seed}, {"mode", o.mode}, {"samples", samples}});
            } else {
                sink.emit("simulation.csv", [&](std::ostream& f) {
                    csv::write_simulation_header(f);
                    for (std::uint64_t id = 0; id < spec.sample_count; ++id) {
                        csv::write_simulation_rows(f, simulate_sample(values, cfg.weights, spec, mode, id), m);
                    }
                });
            }
        }
    } else if (sub("counterfactual")) {
        const auto m = load_matrix(o);
        const auto cfg = load_config(o);
        const auto actual = run_series(m, cfg);
        const auto cf = no_vaccination_series(m, cfg, CounterfactualSpec{o.pivot});
        if (want_json(o)) {
            sink.emit_json("counterfactual", {{"pivot_day", o.pivot},
                                              {"actual", json_io::to_json(actual)},
                                              {"counterfactual", json_io::to_json(cf)}});
        } else {
            sink.emit("counterfactual.csv", [&](std::ostream& f) { csv::write_counterfactual(f, actual, cf); });
        }
    } else if (sub("profiles-check")) {
        const auto checks = reference_profiles_check(load_config(o));
        if (want_json(o)) {
            json rows = json::array();
            for (const auto& c : checks) {
                rows.push_back({{"profile", c.profile.name},
                                {"expected", c.profile.expected},
                                {"computed", c.computed},
                                {"deviation", c.deviation()}});
            }
            sink.emit_json("profiles", rows);
        } else {
            sink.emit("profiles.csv", [&](std::ostream& f) {
                f << "profile,expected,computed,deviation\n";
                for (const auto& c : checks) {
                    f << c.profile.name << ',' << csv::num(c.profile.expected) << ',' << csv::num(c.computed) << ','
                      << csv::num(c.deviation()) << '\n';
                }
            });
        }
    } else if (auto* elicit = app.get_subcommand("elicit"); elicit->parsed()) {
        const json doc = read_json_file(o.document);
        if (elicit->get_subcommand("build-scale")->parsed()) {
            const auto j = json_io::parse_scale_judgements(doc);
            const auto scale = dcm::build_interval_scale(j.sequence, j.cards);
            if (want_json(o, true)) {
                json body = json_io::to_json(scale);
                if (j.cap) body["function"] = json_io::to_json(from_dcm(scale, *j.cap, j.sequence));
                sink.emit_json("scale", body);
            } else {
                sink.emit("scale.csv", [&](std::ostream& f) {
                    f << "level,value\n";
                    for (std::size_t i = 0; i < scale.values.size(); ++i) {
                        f << csv::num(j.sequence.levels[i]) << ',' << csv::num(scale.values[i]) << '\n';
                    }
                });
            }
        } else if (elicit->get_subcommand("build-weights")->parsed()) {
            const auto d = dcm::derive_weights(json_io::parse_swing_ranking(doc));
            if (want_json(o, true)) {
                sink.emit_json("weights", json_io::to_json(d));
            } else {
                sink.emit("weights.csv", [&](std::ostream& f) {
                    f << "criterion,raw,weight\n";
                    for (std::size_t i = 0; i < d.normalized.size(); ++i) {
                        f << (i < kCriteria ? kCriterionNames[i] : std::to_string(i).c_str()) << ','
                          << csv::num(d.raw[i]) << ',' << csv::num(d.normalized[i]) << '\n';
                    }
                });
            }
        } else {
            const auto table = json_io::parse_pairwise_table(doc);
            const auto report = dcm::check_consistency(table);
            sink.emit_json("consistency", {{"table", json_io::to_json(table)}, {"report", json_io::to_json(report)}});
            if (!report.consistent()) status = kFailed;
        }
    } else if (sub("plot")) {
        if (!sink.to_files()) throw Error(ErrorCode::invalid_input, "plot needs --out-dir");
        const auto m = load_matrix(o);
        const auto cfg = load_config(o);
        const auto spec = perturbation(o);
        const auto s = run_series(m, cfg);
        const auto env = exact_envelope(m, cfg, spec);
        std::vector<Trajectory> trajectories;
        const auto values = criterion_values(m, cfg);
        const auto mode = simulation_mode(o.mode);
        for (std::uint64_t id = 0; id < std::min(spec.sample_count, kPlotTrajectories); ++id) {
            trajectories.push_back(simulate_sample(values, cfg.weights, spec, mode, id));
        }
        sink.emit("series.csv", [&](std::ostream& f) { csv::write_series(f, s); });
        sink.emit("envelope.csv", [&](std::ostream& f) { csv::write_envelope(f, env); });
        sink.emit("evolution.svg", [&](std::ostream& f) { f << svg::evolution(s, cfg.state_scale); });
        sink.emit("contributions.svg", [&](std::ostream& f) { f << svg::cumulative_contributions(s); });
        sink.emit("envelope.svg",
                  [&](std::ostream& f) { f << svg::envelope(env, cfg.state_scale, trajectories); });
        if (o.pivot + 1 < m.size()) {
            const auto cf = no_vaccination_series(m, cfg, CounterfactualSpec{o.pivot});
            sink.emit("counterfactual.csv", [&](std::ostream& f) { csv::write_counterfactual(f, s, cf); });
            sink.emit("counterfactual.svg",
                      [&](std::ostream& f) { f << svg::counterfactual(s, cf, cfg.state_scale); });
        } else {
            err << "counterfactual figure skipped: pivot day " << o.pivot << " is not inside the " << m.size()
                << "-row series\n";
        }
    } else if (sub("rerun")) {
        const auto manifest = parse_manifest(read_json_file(o.manifest));
        return run_cli(manifest.command, out, err);
    } else if (sub("serve")) {
        api::ServiceOptions opts;
        const auto path = config_path(o);
        ModelConfig cfg = default_config();
        if (!path.empty()) {
            opts.config_path = path;
            if (std::filesystem::exists(path)) cfg = json_io::load_config_file(path);
        }
        if (!o.input.empty() || !o.criteria.empty()) opts.input = load_matrix(o);
        opts.perturbation = perturbation(o);
        api::Service service(std::move(cfg), std::move(opts));
        httplib::Server server;
        api::bind(server, service);
        err << "listening on http://" << o.host << ':' << o.port << '\n';
        if (!server.listen(o.host, o.port)) throw Error(ErrorCode::io_error, "cannot listen on port " + std::to_string(o.port));
        return kOk;
    }

    if (sink.to_files()) {
        RunManifest manifest;
        manifest.input = !o.input.empty() ? o.input : o.criteria;
        manifest.config = config_path(o);
        manifest.command = args;
        manifest.outputs = sink.written();
        manifest.seed = o.seed;
        const auto path = (std::filesystem::path(o.out_dir) / "manifest.json").string();
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
        f << to_json(manifest).dump(2) << '\n';
    }
    return status;
}

}  // namespace detail

// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Pandemic assessment composite indicator", "paci"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    app.add_option("--input", o.input, "Raw daily CSV (date,new_cases,new_deaths,wards,icu)");
    app.add_option("--criteria", o.criteria, "Precomputed criteria CSV (date,incid,trans,letha,wards,icu)");
    app.add_option("--config", o.config, "Model config JSON (falls back to $PACI_CONFIG, then the built-in model)");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out-dir", o.out_dir, "Write outputs and manifest.json to this directory");
    app.add_option("--from", o.from, "First date to report (YYYY-MM-DD)");
    app.add_option("--to", o.to, "Last date to report (YYYY-MM-DD)");
    app.add_option("--seed", o.seed, "Monte-Carlo seed");
    app.add_option("--samples", o.samples, "Monte-Carlo sample count");
    app.add_option("--delta-perf", o.delta_perf, "Relative perturbation of incidence, transmission, lethality");
    app.add_option("--delta-value", o.delta_value, "Relative perturbation of the criterion values");
    app.add_option("--delta-weight", o.delta_weight, "Relative half-width of the weight box");

    app.add_subcommand("ingest", "Validate a raw series and derive the criteria matrix");
    app.add_subcommand("compute", "Indicator series with states");
    app.add_subcommand("contributions", "Per-criterion contributions");
    auto* classify_cmd = app.add_subcommand("classify", "State label for an indicator value");
    classify_cmd->add_option("--value", o.value, "Indicator value")->required();
    classify_cmd->add_option("--previous", o.previous, "Previous state, for hysteresis");
    auto* sens = app.add_subcommand("sensitivity", "Robustness analysis");
    sens->require_subcommand(1);
    sens->add_subcommand("envelope", "Exact per-day bounds");
    auto* sim = sens->add_subcommand("simulate", "Monte-Carlo weight simulation");
    sim->add_option("--mode", o.mode, "Weight sampling mode")
        ->check(CLI::IsMember({"around_nominal", "full_simplex"}));
    auto* cf = app.add_subcommand("counterfactual", "Indicator without vaccination");
    cf->add_option("--pivot", o.pivot, "Row index after which severity is frozen");
    app.add_subcommand("profiles-check", "Evaluate the reference profiles");
    auto* elicit = app.add_subcommand("elicit", "Deck-of-cards elicitation");
    elicit->require_subcommand(1);
    for (const char* name : {"build-scale", "build-weights", "check"}) {
        elicit->add_subcommand(name)->add_option("document", o.document, "Judgements JSON")->required();
    }
    auto* plot = app.add_subcommand("plot", "SVG figures with their CSV data");
    plot->add_option("--pivot", o.pivot, "Counterfactual pivot row");
    plot->add_option("--mode", o.mode, "Weight sampling mode for the plotted trajectories")
        ->check(CLI::IsMember({"around_nominal", "full_simplex"}));
    auto* rerun = app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
    rerun->add_option("manifest", o.manifest, "manifest.json")->required();
    auto* serve = app.add_subcommand("serve", "HTTP/JSON API");
    serve->add_option("--host", o.host, "Bind address");
    serve->add_option("--port", o.port, "Port");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << json{{"error", {{"code", "usage"}, {"message", e.what()}, {"violations", json::array()}}}}.dump()
            << '\n';
        return kUsage;
    }

    try {
        return detail::dispatch(app, o, args, out, err);
    } catch (const Error& e) {
        err << json_io::error_document(e).dump() << '\n';
        return kError;
    } catch (const std::exception& e) {
        err << json{{"error", {{"code", "internal"}, {"message", e.what()}, {"violations", json::array()}}}}.dump()
            << '\n';
        return kError;
    }
}

}  // namespace paci::cli
