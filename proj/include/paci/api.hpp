#pragma once

// Transport-independent JSON API used by the elicitation UI. A Service maps
// (method, path, body, query) to a status code and a JSON body; the HTTP
// binding lives in http_server.hpp.

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

#include <json.hpp>

#include "paci/aggregator.hpp"
#include "paci/dcm.hpp"
#include "paci/epicriteria.hpp"
#include "paci/error.hpp"
#include "paci/json_io.hpp"
#include "paci/sensitivity.hpp"
#include "paci/valuemodel.hpp"

namespace paci::api {

using nlohmann::json;
using Query = std::map<std::string, std::string>;

struct Response {
    int status = 200;
    json body;
};

struct ServiceOptions {
    std::optional<std::string> config_path;  // PUT /config persists here
    std::optional<CriteriaMatrix> input;     // backs GET /series and GET /envelope
    PerturbationSpec perturbation;
};

inline int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::inconsistent_judgements: return 422;
        case ErrorCode::io_error: return 500;
        default: return 400;
    }
}

inline Response error_response(const Error& e) { return {status_for(e.code()), json_io::error_document(e)}; }

inline Response error_response(int status, const std::string& code, const std::string& message) {
    return {status, {{"error", {{"code", code}, {"message", message}, {"violations", json::array()}}}}};
}

namespace detail {

inline json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("request body is not valid JSON: ") + e.what());
    }
}

inline std::optional<Date> date_param(const Query& q, const char* key) {
    const auto it = q.find(key);
    if (it == q.end() || it->second.empty()) return std::nullopt;
    return Date::parse(it->second);
}

inline double double_param(const Query& q, const char* key, double fallback) {
    const auto it = q.find(key);
    if (it == q.end() || it->second.empty()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used == it->second.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::invalid_input, std::string("query parameter '") + key + "' must be a number");
}

}  // namespace detail

class Service {
public:
    explicit Service(ModelConfig config, ServiceOptions options = {})
        : config_(std::move(config)), options_(std::move(options)) {
        validate(config_);
    }

    ModelConfig config() const {
        std::shared_lock lock(mutex_);
        return config_;
    }

    Response handle(const std::string& method, const std::string& path, const std::string& body = {},
                    const Query& query = {}) {
        try {
            if (path == "/config") {
                if (method == "GET") return get_config();
                if (method == "PUT") return put_config(body);
                return not_allowed();
            }
            if (path == "/preview/scale") return method == "POST" ? preview_scale(body) : not_allowed();
            if (path == "/preview/weights") return method == "POST" ? preview_weights(body) : not_allowed();
            if (path == "/preview/aggregate") return method == "POST" ? preview_aggregate(body) : not_allowed();
            if (path == "/series") return method == "GET" ? series(query) : not_allowed();
            if (path == "/envelope") return method == "GET" ? envelope(query) : not_allowed();
            return error_response(404, "not-found", "no endpoint " + path);
        } catch (const Error& e) {
            return error_response(e);
        } catch (const json::exception& e) {
            return error_response(Error(ErrorCode::invalid_input, std::string("malformed document: ") + e.what()));
        }
    }

private:
    static Response not_allowed() { return error_response(405, "method-not-allowed", "method not allowed"); }

    Response get_config() const { return {200, json_io::to_json(config())}; }

    Response put_config(const std::string& body) {
        auto cfg = json_io::parse_config(detail::parse_body(body));
        std::unique_lock lock(mutex_);
        if (options_.config_path) json_io::save_config_file(*options_.config_path, cfg);
        config_ = std::move(cfg);
        return {200, json_io::to_json(config_)};
    }

    // Judgements plus optional expert entries for non-consecutive pairs
    // ("entries": [{"i","j","cards"}]), checked for consistency first.
    static Response preview_scale(const std::string& body) {
        const json doc = detail::parse_body(body);
        const auto judgements = json_io::parse_scale_judgements(doc);
        json consistency = json_io::to_json(dcm::ConsistencyReport{});
        if (doc.contains("entries")) {
            const auto table = json_io::parse_pairwise_table(doc);
            const auto report = dcm::check_consistency(table);
            if (!report.consistent()) {
                std::vector<std::string> v;
                for (const auto& x : report.violations) {
                    v.push_back("e(" + std::to_string(x.i) + "," + std::to_string(x.j) + ") differs from e(" +
                                std::to_string(x.i) + "," + std::to_string(x.k) + ") + e(" + std::to_string(x.k) +
                                "," + std::to_string(x.j) + ") + 1 by " + std::to_string(x.residual));
                }
                auto r = error_response(Error(ErrorCode::inconsistent_judgements, "inconsistent judgements", v));
                r.body["error"]["consistency"] = json_io::to_json(report);
                return r;
            }
            consistency = json_io::to_json(report);
        }
        const auto scale = dcm::build_interval_scale(judgements.sequence, judgements.cards);
        const double top = std::max(judgements.sequence.lo.value, judgements.sequence.hi.value);
        const double cap = judgements.cap.value_or(std::max(kDefaultCap, top));
        const auto fn = from_dcm(scale, cap, judgements.sequence);
        json out = json_io::to_json(scale);
        out["function"] = json_io::to_json(fn);
        out["consistency"] = std::move(consistency);
        return {200, std::move(out)};
    }

    static Response preview_weights(const std::string& body) {
        const auto ranking = json_io::parse_swing_ranking(detail::parse_body(body));
        return {200, json_io::to_json(dcm::derive_weights(ranking))};
    }

    Response preview_aggregate(const std::string& body) const {
        const json doc = detail::parse_body(body);
        const auto x = json_io::parse_performance(doc);
        std::optional<std::string> previous;
        if (doc.contains("previous_state")) previous = doc.at("previous_state").get<std::string>();
        return {200, json_io::to_json(aggregate(x, config(), previous))};
    }

    CriteriaMatrix selected(const Query& q) const {
        if (!options_.input) throw Error(ErrorCode::invalid_input, "the server was started without an input series");
        auto m = between(*options_.input, detail::date_param(q, "from"), detail::date_param(q, "to"));
        if (m.empty()) throw Error(ErrorCode::out_of_range, "no rows in the requested date range");
        return m;
    }

    Response series(const Query& q) const {
        const auto cfg = config();
        return {200, {{"config_id", fingerprint(cfg)}, {"points", json_io::to_json(run_series(selected(q), cfg))}}};
    }

    Response envelope(const Query& q) const {
        PerturbationSpec spec = options_.perturbation;
        spec.perf_delta = detail::double_param(q, "delta_perf", spec.perf_delta);
        spec.value_delta = detail::double_param(q, "delta_value", spec.value_delta);
        spec.weight_delta = detail::double_param(q, "delta_weight", spec.weight_delta);
        return {200, json_io::to_json(exact_envelope(selected(q), config(), spec))};
    }

    mutable std::shared_mutex mutex_;
    ModelConfig config_;
    ServiceOptions options_;
};

}  // namespace paci::api
