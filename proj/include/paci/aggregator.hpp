#pragma once

// Additive aggregation of criterion values into the daily indicator, and the
// chromatic state scale on top of it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "paci/epicriteria.hpp"
#include "paci/error.hpp"
#include "paci/valuemodel.hpp"

namespace paci {

struct WeightVector {
    std::array<double, kCriteria> w{};

    double operator[](std::size_t j) const { return w[j]; }
    double sum() const {
        double s = 0.0;
        for (double x : w) s += x;
        return s;
    }
};

inline std::vector<std::string> violations(const WeightVector& weights) {
    std::vector<std::string> v;
    for (std::size_t j = 0; j < kCriteria; ++j) {
        if (!(weights.w[j] >= 0.0 && weights.w[j] <= 1.0)) {
            v.push_back(std::string("weight of ") + kCriterionNames[j] + " must lie in [0, 1]");
        }
    }
    if (std::abs(weights.sum() - 1.0) > 1e-9) v.push_back("weights must sum to 1");
    return v;
}

struct Cutoff {
    double value = 0.0;
    std::string label;
    std::string color;  // #rrggbb
};

struct StateScale {
    std::vector<Cutoff> cutoffs;
    double hysteresis = 0.0;  // half-width around each interior cutoff
};

inline StateScale default_state_scale() {
    return {{
                {0, "baseline", "#1a9850"},
                {10, "residual", "#a6d96a"},
                {40, "alert", "#fee08b"},
                {80, "alarm", "#fdae61"},
                {100, "critical", "#f46d43"},
                {120, "break", "#a50026"},
                {180, "emergency", "#67001f"},
            },
            0.0};
}

inline std::vector<std::string> violations(const StateScale& scale) {
    std::vector<std::string> v;
    if (scale.cutoffs.empty()) v.push_back("state scale needs at least one cutoff");
    for (std::size_t i = 1; i < scale.cutoffs.size(); ++i) {
        if (!(scale.cutoffs[i].value > scale.cutoffs[i - 1].value)) {
            v.push_back("cutoff values must be strictly increasing");
        }
    }
    for (std::size_t i = 0; i < scale.cutoffs.size(); ++i) {
        if (scale.cutoffs[i].label.empty()) v.push_back("cutoff labels must not be empty");
        for (std::size_t k = i + 1; k < scale.cutoffs.size(); ++k) {
            if (scale.cutoffs[i].label == scale.cutoffs[k].label) {
                v.push_back("duplicate state label '" + scale.cutoffs[i].label + "'");
            }
        }
    }
    if (!(scale.hysteresis >= 0.0)) v.push_back("hysteresis must be non-negative");
    return v;
}

struct ConfigMetadata {
    std::string name = "PACI Portugal";
    std::string version = "1";
    std::string created = "2022-03-13";
};

struct ModelConfig {
    std::array<PiecewiseLinearValueFunction, kCriteria> value_functions;
    WeightVector weights;
    StateScale state_scale;
    ConfigMetadata metadata;
};

inline std::vector<std::string> violations(const ModelConfig& cfg) {
    auto v = violations(cfg.weights);
    for (auto& s : violations(cfg.state_scale)) v.push_back(std::move(s));
    return v;
}

inline void validate(const ModelConfig& cfg) {
    if (auto v = violations(cfg); !v.empty()) {
        throw Error(ErrorCode::invalid_config, "invalid model config", std::move(v));
    }
}

// The Portuguese model with the adjusted weights.
inline ModelConfig default_config() {
    return {default_functions(), WeightVector{{0.280, 0.141, 0.193, 0.193, 0.193}}, default_state_scale(), {}};
}

// Two-criterion baseline: linear value functions on incidence and transmission
// through the baseline (0) and critical (100) levels, equal weights, same cap.
// The severity criteria carry zero weight.
inline ModelConfig rm_baseline_config() {
    auto cfg = default_config();
    cfg.value_functions[0] = PiecewiseLinearValueFunction({{0, 0}, {1125, 100}, {2025, 180}}, kDefaultCap);
    cfg.value_functions[1] = PiecewiseLinearValueFunction({{0, 0}, {1, 100}, {1.8, 180}}, kDefaultCap);
    cfg.weights = WeightVector{{0.5, 0.5, 0.0, 0.0, 0.0}};
    cfg.metadata.name = "RM baseline";
    return cfg;
}

// Stable 64-bit FNV-1a digest over every parameter that affects results.
inline std::uint64_t fingerprint(const ModelConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix_bytes = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    auto mix = [&](double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, sizeof bits);
        mix_bytes(&bits, sizeof bits);
    };
    for (const auto& f : cfg.value_functions) {
        for (const auto& b : f.breakpoints()) {
            mix(b.x);
            mix(b.v);
        }
        mix(f.cap());
    }
    for (double w : cfg.weights.w) mix(w);
    for (const auto& c : cfg.state_scale.cutoffs) {
        mix(c.value);
        mix_bytes(c.label.data(), c.label.size());
    }
    mix(cfg.state_scale.hysteresis);
    return h;
}

struct IndicatorPoint {
    Date date;
    double overall = 0.0;
    std::array<double, kCriteria> values{};         // v_j(x_j)
    std::array<double, kCriteria> contributions{};  // w_j * v_j(x_j)
    std::string state;
    std::uint64_t config_id = 0;
};

struct IndicatorSeries {
    std::vector<IndicatorPoint> points;
    std::size_t size() const { return points.size(); }
};

namespace detail {

inline std::size_t band_index(double value, const StateScale& scale) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < scale.cutoffs.size(); ++i) {
        if (value >= scale.cutoffs[i].value) k = i;
    }
    return k;
}

inline std::optional<std::size_t> find_label(const StateScale& scale, const std::string& label) {
    for (std::size_t i = 0; i < scale.cutoffs.size(); ++i) {
        if (scale.cutoffs[i].label == label) return i;
    }
    return std::nullopt;
}

}  // namespace detail

// Band [cutoff_k, cutoff_k+1); a value on a cutoff belongs to the higher state.
// With a previous state and hysteresis > 0 the state only changes once the
// value clears the previous band's boundary by the hysteresis width.
inline std::string classify(double value, const StateScale& scale,
                            const std::optional<std::string>& previous_state = std::nullopt) {
    if (!(value >= 0.0)) throw Error(ErrorCode::invalid_input, "indicator values are non-negative");
    if (scale.cutoffs.empty()) throw Error(ErrorCode::invalid_config, "state scale has no cutoffs");
    const std::size_t plain = detail::band_index(value, scale);
    if (scale.hysteresis <= 0.0 || !previous_state) return scale.cutoffs[plain].label;

    const auto prev = detail::find_label(scale, *previous_state);
    if (!prev) return scale.cutoffs[plain].label;
    const std::size_t p = *prev;
    const double lower = scale.cutoffs[p].value;
    const bool has_upper = p + 1 < scale.cutoffs.size();
    const double upper = has_upper ? scale.cutoffs[p + 1].value : 0.0;
    if (has_upper && value >= upper + scale.hysteresis) return scale.cutoffs[plain].label;
    if (p > 0 && value < lower - scale.hysteresis) return scale.cutoffs[plain].label;
    return scale.cutoffs[p].label;
}

inline IndicatorPoint aggregate(const PerformanceVector& x, const ModelConfig& cfg,
                                const std::optional<std::string>& previous_state = std::nullopt) {
    IndicatorPoint point;
    point.date = x.date;
    point.config_id = fingerprint(cfg);
    double overall = 0.0;
    for (std::size_t j = 0; j < kCriteria; ++j) {
        point.values[j] = cfg.value_functions[j](x.x[j]);
        point.contributions[j] = cfg.weights.w[j] * point.values[j];
        overall += point.contributions[j];
    }
    // Keeps rounding from pushing the sum past the extreme criterion values.
    const auto [lo, hi] = std::minmax_element(point.values.begin(), point.values.end());
    point.overall = std::clamp(overall, *lo, *hi);
    point.state = classify(point.overall, cfg.state_scale, previous_state);
    return point;
}

enum class Ordering { impacts_more, equal, impacts_less };

inline const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::impacts_more: return "impacts-more";
        case Ordering::equal: return "equal";
        case Ordering::impacts_less: return "impacts-less";
    }
    return "?";
}

inline Ordering compare(const IndicatorPoint& first, const IndicatorPoint& second) {
    if (first.config_id != second.config_id) {
        throw Error(ErrorCode::config_mismatch, "points were computed with different model configs");
    }
    if (first.overall > second.overall) return Ordering::impacts_more;
    if (first.overall < second.overall) return Ordering::impacts_less;
    return Ordering::equal;
}

// Rows are aggregated in order; the state of each point feeds the hysteresis
// of the next.
inline IndicatorSeries run_series(const CriteriaMatrix& matrix, const ModelConfig& cfg) {
    if (matrix.empty()) throw Error(ErrorCode::invalid_input, "criteria matrix is empty");
    IndicatorSeries series;
    series.points.reserve(matrix.size());
    std::optional<std::string> previous;
    for (const auto& row : matrix.rows) {
        series.points.push_back(aggregate(row, cfg, previous));
        previous = series.points.back().state;
    }
    return series;
}

struct ReferenceProfile {
    std::string name;
    std::array<double, kCriteria> performances{};
    double expected = 0.0;
};

// Performance profiles that define the cutoff lines. The critical list is
// published with a duplicated wards entry; the duplicate is dropped.
inline std::vector<ReferenceProfile> reference_profiles() {
    return {
        {"baseline", {0, 0, 0, 0, 0}, 0},
        {"residual", {338, 0.93, 0.36, 750, 60}, 10},
        {"alert", {707, 0.963, 1.43, 1571, 126}, 40},
        {"alarm", {1000, 0.989, 2.89, 2222, 178}, 80},
        {"critical", {1125, 1, 3.6, 2500, 200}, 100},
        {"break", {1227, 1.009, 4.31, 2727, 218}, 120},
        {"emergency", {1506, 1.034, 6.47, 3346, 268}, 180},
    };
}

struct ProfileCheck {
    ReferenceProfile profile;
    double computed = 0.0;
    double deviation() const { return computed - profile.expected; }
};

inline std::vector<ProfileCheck> reference_profiles_check(const ModelConfig& cfg) {
    std::vector<ProfileCheck> out;
    for (auto& profile : reference_profiles()) {
        PerformanceVector x;
        x.x = profile.performances;
        const double value = aggregate(x, cfg).overall;
        out.push_back({std::move(profile), value});
    }
    return out;
}

}  // namespace paci
