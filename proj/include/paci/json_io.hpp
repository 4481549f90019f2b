#pragma once

// JSON documents shared by the CLI and the HTTP API.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "paci/aggregator.hpp"
#include "paci/dcm.hpp"
#include "paci/error.hpp"
#include "paci/sensitivity.hpp"
#include "paci/valuemodel.hpp"

namespace paci::json_io {

using nlohmann::json;

inline constexpr const char* kConfigSchema = "paci-config/1";

namespace detail {

// Field access that reports missing or mistyped members as violations.
class Reader {
public:
    explicit Reader(std::vector<std::string>& violations) : violations_(violations) {}

    const json* member(const json& obj, const char* key, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key)) {
            violations_.push_back(where + ": missing '" + key + "'");
            return nullptr;
        }
        return &obj.at(key);
    }

    template <typename T>
    bool get(const json& j, T& out, const std::string& where) {
        try {
            out = j.get<T>();
            return true;
        } catch (const json::exception&) {
            violations_.push_back(where + ": wrong type");
            return false;
        }
    }

private:
    std::vector<std::string>& violations_;
};

inline void fail_if(std::vector<std::string>& v, ErrorCode code, const char* what) {
    if (!v.empty()) throw Error(code, what, std::move(v));
}

}  // namespace detail

// ---- deck-of-cards documents ----------------------------------------------

struct ScaleJudgements {
    dcm::LevelSequence sequence;
    dcm::CardJudgements cards;
    std::optional<double> cap;
};

inline ScaleJudgements parse_scale_judgements(const json& doc) {
    std::vector<std::string> v;
    detail::Reader r(v);
    ScaleJudgements out;
    if (const json* levels = r.member(doc, "levels", "judgements")) r.get(*levels, out.sequence.levels, "levels");
    if (const json* gaps = r.member(doc, "gaps", "judgements")) r.get(*gaps, out.cards.gaps, "gaps");
    if (const json* anchors = r.member(doc, "anchors", "judgements")) {
        for (const char* which : {"lo", "hi"}) {
            if (const json* a = r.member(*anchors, which, std::string("anchors"))) {
                auto& dst = std::string(which) == "lo" ? out.sequence.lo : out.sequence.hi;
                if (const json* idx = r.member(*a, "index", std::string("anchors.") + which))
                    r.get(*idx, dst.index, std::string("anchors.") + which + ".index");
                if (const json* val = r.member(*a, "value", std::string("anchors.") + which))
                    r.get(*val, dst.value, std::string("anchors.") + which + ".value");
            }
        }
    }
    if (doc.is_object() && doc.contains("cap")) {
        double cap = 0.0;
        if (r.get(doc.at("cap"), cap, "cap")) out.cap = cap;
    }
    detail::fail_if(v, ErrorCode::invalid_judgements, "malformed judgements document");
    if (auto inv = dcm::validate(out.sequence, out.cards); !inv.empty()) {
        throw Error(ErrorCode::invalid_judgements, "invalid judgements", std::move(inv));
    }
    return out;
}

inline json to_json(const ScaleJudgements& j) {
    json doc = {{"levels", j.sequence.levels},
                {"anchors",
                 {{"lo", {{"index", j.sequence.lo.index}, {"value", j.sequence.lo.value}}},
                  {"hi", {{"index", j.sequence.hi.index}, {"value", j.sequence.hi.value}}}}},
                {"gaps", j.cards.gaps}};
    if (j.cap) doc["cap"] = *j.cap;
    return doc;
}

inline dcm::SwingRanking parse_swing_ranking(const json& doc) {
    std::vector<std::string> v;
    detail::Reader r(v);
    dcm::SwingRanking out;
    if (const json* tiers = r.member(doc, "tiers", "ranking")) r.get(*tiers, out.tiers, "tiers");
    if (const json* gaps = r.member(doc, "tier_gaps", "ranking")) r.get(*gaps, out.tier_gaps, "tier_gaps");
    if (const json* z = r.member(doc, "z", "ranking")) r.get(*z, out.z_ratio, "z");
    detail::fail_if(v, ErrorCode::invalid_judgements, "malformed ranking document");
    if (auto inv = dcm::validate(out); !inv.empty()) {
        throw Error(ErrorCode::invalid_judgements, "invalid swing ranking", std::move(inv));
    }
    return out;
}

inline json to_json(const dcm::SwingRanking& s) {
    return {{"tiers", s.tiers}, {"tier_gaps", s.tier_gaps}, {"z", s.z_ratio}};
}

inline json to_json(const dcm::IntervalScaleResult& s) {
    return {{"unit_value", s.unit_value}, {"unit_count", s.unit_count}, {"values", s.values}};
}

inline json to_json(const dcm::WeightDerivation& d) {
    return {{"unit_value", d.unit_value}, {"unit_count", d.unit_count}, {"raw", d.raw}, {"weights", d.normalized}};
}

// A pairwise table document: the consecutive gaps plus optional expert
// entries for non-consecutive pairs, {"gaps":[...], "entries":[{"i","j","cards"}]}.
inline dcm::PairwiseTable parse_pairwise_table(const json& doc) {
    std::vector<std::string> v;
    detail::Reader r(v);
    std::vector<int> gaps;
    if (const json* g = r.member(doc, "gaps", "table")) r.get(*g, gaps, "gaps");
    detail::fail_if(v, ErrorCode::invalid_judgements, "malformed table document");
    dcm::PairwiseTable table(gaps.size() + 1);
    for (std::size_t i = 0; i < gaps.size(); ++i) table.set(i, i + 1, gaps[i]);
    if (doc.contains("entries")) {
        for (const auto& e : doc.at("entries")) {
            std::size_t i = 0, j = 0;
            int cards = 0;
            if (!r.get(e.value("i", json()), i, "entries.i") || !r.get(e.value("j", json()), j, "entries.j") ||
                !r.get(e.value("cards", json()), cards, "entries.cards")) {
                continue;
            }
            if (!(i < j && j < table.levels())) {
                v.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
                continue;
            }
            if (cards < 0) v.push_back("entry cards must be non-negative");
            table.set(i, j, cards);
        }
    }
    detail::fail_if(v, ErrorCode::invalid_judgements, "malformed table document");
    return table;
}

inline json to_json(const dcm::PairwiseTable& table) {
    json rows = json::array();
    for (std::size_t i = 0; i < table.levels(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < table.levels(); ++j) {
            const auto e = (i < j) ? table.get(i, j) : std::nullopt;
            row.push_back(e ? json(*e) : json(nullptr));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const dcm::ConsistencyReport& report) {
    json list = json::array();
    for (const auto& x : report.violations) {
        list.push_back({{"i", x.i}, {"k", x.k}, {"j", x.j}, {"residual", x.residual}});
    }
    return {{"consistent", report.consistent()}, {"violations", list}};
}

// ---- value functions ------------------------------------------------------

inline json to_json(const PiecewiseLinearValueFunction& f) {
    json bps = json::array();
    for (const auto& b : f.breakpoints()) bps.push_back({b.x, b.v});
    return {{"breakpoints", bps},
            {"cap", f.cap()},
            {"cap_onset", std::isfinite(f.cap_onset()) ? json(f.cap_onset()) : json(nullptr)},
            {"domain", f.domain() == Domain::integer ? "integer" : "continuous"}};
}

inline PiecewiseLinearValueFunction parse_value_function(const json& doc, const std::string& where,
                                                         std::vector<std::string>& v) {
    detail::Reader r(v);
    std::vector<Breakpoint> bps;
    double cap = 0.0;
    Domain domain = Domain::continuous;
    const std::size_t before = v.size();
    if (const json* b = r.member(doc, "breakpoints", where)) {
        if (!b->is_array()) {
            v.push_back(where + ".breakpoints: expected an array");
        } else {
            for (const auto& pair : *b) {
                std::array<double, 2> xy{};
                if (r.get(pair, xy, where + ".breakpoints")) bps.push_back({xy[0], xy[1]});
            }
        }
    }
    if (const json* c = r.member(doc, "cap", where)) r.get(*c, cap, where + ".cap");
    if (doc.contains("domain")) {
        const auto d = doc.at("domain");
        if (d == "integer") {
            domain = Domain::integer;
        } else if (d != "continuous") {
            v.push_back(where + ".domain: expected \"continuous\" or \"integer\"");
        }
    }
    if (v.size() != before) return {};
    auto inv = PiecewiseLinearValueFunction::violations(bps, cap);
    if (!inv.empty()) {
        for (auto& s : inv) v.push_back(where + ": " + s);
        return {};
    }
    PiecewiseLinearValueFunction f(std::move(bps), cap, domain);
    if (doc.contains("cap_onset") && doc.at("cap_onset").is_number()) {
        const double declared = doc.at("cap_onset").get<double>();
        if (std::abs(declared - f.cap_onset()) > 1e-6 * std::max(1.0, std::abs(f.cap_onset()))) {
            v.push_back(where + ".cap_onset does not match the breakpoints");
        }
    }
    return f;
}

// ---- model config ---------------------------------------------------------

inline json to_json(const ModelConfig& cfg) {
    json fns = json::array();
    for (std::size_t j = 0; j < kCriteria; ++j) {
        json f = to_json(cfg.value_functions[j]);
        f["criterion"] = kCriterionNames[j];
        fns.push_back(std::move(f));
    }
    json cutoffs = json::array();
    for (const auto& c : cfg.state_scale.cutoffs) {
        cutoffs.push_back({{"value", c.value}, {"label", c.label}, {"color", c.color}});
    }
    return {{"schema", kConfigSchema},
            {"metadata",
             {{"name", cfg.metadata.name}, {"version", cfg.metadata.version}, {"created", cfg.metadata.created}}},
            {"value_functions", fns},
            {"weights", cfg.weights.w},
            {"state_scale", {{"cutoffs", cutoffs}, {"hysteresis", cfg.state_scale.hysteresis}}}};
}

// Parses and validates; every problem found is reported at once.
inline ModelConfig parse_config(const json& doc) {
    std::vector<std::string> v;
    detail::Reader r(v);
    ModelConfig cfg = default_config();
    if (!doc.is_object()) throw Error(ErrorCode::invalid_config, "config must be a JSON object");
    if (doc.value("schema", std::string()) != kConfigSchema) {
        v.push_back(std::string("schema must be \"") + kConfigSchema + "\"");
    }
    if (doc.contains("metadata") && doc.at("metadata").is_object()) {
        const auto& m = doc.at("metadata");
        cfg.metadata.name = m.value("name", cfg.metadata.name);
        cfg.metadata.version = m.value("version", cfg.metadata.version);
        cfg.metadata.created = m.value("created", cfg.metadata.created);
    }
    if (const json* fns = r.member(doc, "value_functions", "config")) {
        if (!fns->is_array() || fns->size() != kCriteria) {
            v.push_back("value_functions must hold exactly five functions");
        } else {
            for (std::size_t j = 0; j < kCriteria; ++j) {
                cfg.value_functions[j] =
                    parse_value_function((*fns)[j], std::string("value_functions[") + kCriterionNames[j] + "]", v);
            }
        }
    }
    if (const json* w = r.member(doc, "weights", "config")) {
        if (!w->is_array() || w->size() != kCriteria) {
            v.push_back("weights must hold exactly five numbers");
        } else {
            r.get(*w, cfg.weights.w, "weights");
        }
    }
    if (const json* s = r.member(doc, "state_scale", "config")) {
        cfg.state_scale.cutoffs.clear();
        if (const json* cuts = r.member(*s, "cutoffs", "state_scale"); cuts && cuts->is_array()) {
            for (const auto& c : *cuts) {
                Cutoff cut;
                r.get(c.value("value", json()), cut.value, "state_scale.cutoffs.value");
                r.get(c.value("label", json()), cut.label, "state_scale.cutoffs.label");
                cut.color = c.value("color", std::string("#808080"));
                cfg.state_scale.cutoffs.push_back(std::move(cut));
            }
        }
        cfg.state_scale.hysteresis = s->value("hysteresis", 0.0);
    }
    if (v.empty()) {
        for (auto& s : violations(cfg)) v.push_back(std::move(s));
    }
    detail::fail_if(v, ErrorCode::invalid_config, "invalid model config");
    return cfg;
}

inline ModelConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open config '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_config, std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

// Written to a sibling file first and renamed, so readers never see a
// half-written config.
inline void save_config_file(const std::string& path, const ModelConfig& cfg) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::io_error, "cannot write config '" + tmp + "'");
        out << to_json(cfg).dump(2) << '\n';
        if (!out) throw Error(ErrorCode::io_error, "cannot write config '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot replace config '" + path + "': " + ec.message());
}

// ---- indicator values -----------------------------------------------------

inline PerformanceVector parse_performance(const json& doc) {
    std::vector<std::string> v;
    detail::Reader r(v);
    PerformanceVector p;
    if (doc.contains("date")) {
        std::string d;
        if (r.get(doc.at("date"), d, "date")) p.date = Date::parse(d);
    }
    if (doc.contains("x")) {
        r.get(doc.at("x"), p.x, "x");
    } else {
        for (std::size_t j = 0; j < kCriteria; ++j) {
            if (const json* f = r.member(doc, kCriterionNames[j], "performance")) r.get(*f, p.x[j], kCriterionNames[j]);
        }
    }
    for (std::size_t j = 0; j < kCriteria; ++j) {
        if (!(p.x[j] >= 0.0)) v.push_back(std::string(kCriterionNames[j]) + " must be >= 0");
    }
    detail::fail_if(v, ErrorCode::invalid_input, "invalid performance vector");
    return p;
}

inline json to_json(const IndicatorPoint& p) {
    json contrib = json::object();
    json values = json::object();
    for (std::size_t j = 0; j < kCriteria; ++j) {
        contrib[kCriterionNames[j]] = p.contributions[j];
        values[kCriterionNames[j]] = p.values[j];
    }
    return {{"date", p.date.iso()},
            {"overall", p.overall},
            {"state", p.state},
            {"values", values},
            {"contributions", contrib}};
}

inline json to_json(const IndicatorSeries& s) {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back(to_json(p));
    return pts;
}

inline json to_json(const Envelope& env) {
    json pts = json::array();
    for (const auto& p : env.points) {
        pts.push_back({{"date", p.date.iso()},
                       {"v_minus", p.v_minus},
                       {"v_nominal", p.v_nominal},
                       {"v_plus", p.v_plus}});
    }
    return {{"points", pts}, {"mean_spread", env.mean_spread}, {"sd_spread", env.sd_spread}};
}

inline json error_document(const Error& e) {
    return {{"error", {{"code", to_string(e.code())}, {"message", e.what()}, {"violations", e.violations()}}}};
}

}  // namespace paci::json_io
