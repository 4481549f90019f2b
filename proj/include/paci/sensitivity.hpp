#pragma once

// Robustness of the indicator: exact per-day bounds over a weight polyhedron
// with perturbed performances and values, and Monte-Carlo weight simulation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "paci/aggregator.hpp"
#include "paci/epicriteria.hpp"
#include "paci/error.hpp"

namespace paci {

struct PerturbationSpec {
    double perf_delta = 0.10;    // applied to incidence, transmission, lethality
    double value_delta = 0.10;   // applied to all five value-function outputs
    double weight_delta = 0.10;  // relative half-width of the weight box
    std::uint64_t rng_seed = 42;
    std::size_t sample_count = 10000;
};

inline std::vector<std::string> violations(const PerturbationSpec& spec) {
    std::vector<std::string> v;
    if (!(std::abs(spec.perf_delta) < 1.0)) v.push_back("|perf_delta| must be < 1");
    if (!(std::abs(spec.value_delta) < 1.0)) v.push_back("|value_delta| must be < 1");
    if (!(std::abs(spec.weight_delta) < 1.0)) v.push_back("|weight_delta| must be < 1");
    if (spec.sample_count < 1) v.push_back("sample_count must be >= 1");
    return v;
}

// Box bounds intersected with the unit simplex.
struct WeightPolyhedron {
    std::array<double, kCriteria> lower{};
    std::array<double, kCriteria> upper{};

    static WeightPolyhedron around(const WeightVector& nominal, double delta) {
        WeightPolyhedron p;
        for (std::size_t j = 0; j < kCriteria; ++j) {
            p.lower[j] = std::clamp(nominal.w[j] * (1.0 - delta), 0.0, 1.0);
            p.upper[j] = std::clamp(nominal.w[j] * (1.0 + delta), 0.0, 1.0);
        }
        return p;
    }

    bool contains(const std::array<double, kCriteria>& w, double tol = 1e-12) const {
        double s = 0.0;
        for (std::size_t j = 0; j < kCriteria; ++j) {
            if (w[j] < lower[j] - tol || w[j] > upper[j] + tol) return false;
            s += w[j];
        }
        return std::abs(s - 1.0) <= tol * kCriteria;
    }
};

inline std::vector<std::string> violations(const WeightPolyhedron& poly) {
    constexpr double tol = 1e-12;
    std::vector<std::string> v;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t j = 0; j < kCriteria; ++j) {
        if (!(poly.lower[j] >= 0.0 && poly.lower[j] <= poly.upper[j] && poly.upper[j] <= 1.0)) {
            v.push_back("bounds of weight " + std::to_string(j) + " must satisfy 0 <= lower <= upper <= 1");
        }
        lo += poly.lower[j];
        hi += poly.upper[j];
    }
    if (lo > 1.0 + tol) v.push_back("sum of lower bounds exceeds 1");
    if (hi < 1.0 - tol) v.push_back("sum of upper bounds is below 1");
    return v;
}

enum class Sense { minimize, maximize };

struct WeightOptimum {
    double objective = 0.0;
    std::array<double, kCriteria> weights{};
};

// Optimum of sum_j w_j * values_j over the polyhedron. Start every weight at
// its lower bound and hand the remaining mass to the most favourable
// coefficients first, each up to its upper bound.
inline WeightOptimum optimize_over_weights(const std::array<double, kCriteria>& values, const WeightPolyhedron& poly,
                                           Sense sense) {
    if (auto v = violations(poly); !v.empty()) {
        throw Error(ErrorCode::empty_polyhedron, "weight polyhedron is empty", std::move(v));
    }
    std::array<std::size_t, kCriteria> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sense == Sense::maximize ? values[a] > values[b] : values[a] < values[b];
    });

    WeightOptimum out;
    out.weights = poly.lower;
    double residual = 1.0;
    for (double w : poly.lower) residual -= w;
    for (std::size_t j : order) {
        if (residual <= 0.0) break;
        const double add = std::min(poly.upper[j] - poly.lower[j], residual);
        out.weights[j] += add;
        residual -= add;
    }
    for (std::size_t j = 0; j < kCriteria; ++j) out.objective += out.weights[j] * values[j];
    return out;
}

struct EnvelopePoint {
    Date date;
    double v_minus = 0.0;
    double v_nominal = 0.0;
    double v_plus = 0.0;
    double spread() const { return v_plus - v_minus; }
};

struct Envelope {
    std::vector<EnvelopePoint> points;
    double mean_spread = 0.0;
    double sd_spread = 0.0;  // sample standard deviation
};

namespace detail {

// Value vector after scaling the first three performances and then every
// value by the given factors, clamped to [0, cap].
inline std::array<double, kCriteria> perturbed_values(const PerformanceVector& row, const ModelConfig& cfg,
                                                      double perf_factor, double value_factor) {
    std::array<double, kCriteria> v{};
    for (std::size_t j = 0; j < kCriteria; ++j) {
        const double x = (j < 3) ? row.x[j] * perf_factor : row.x[j];
        const auto& f = cfg.value_functions[j];
        v[j] = std::clamp(f(x) * value_factor, 0.0, f.cap());
    }
    return v;
}

inline void summarize(Envelope& env) {
    const std::size_t n = env.points.size();
    if (n == 0) return;
    double sum = 0.0;
    for (const auto& p : env.points) sum += p.spread();
    env.mean_spread = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (const auto& p : env.points) ss += (p.spread() - env.mean_spread) * (p.spread() - env.mean_spread);
        env.sd_spread = std::sqrt(ss / static_cast<double>(n - 1));
    }
}

}  // namespace detail

inline Envelope exact_envelope(const CriteriaMatrix& matrix, const ModelConfig& cfg, const PerturbationSpec& spec) {
    if (auto v = violations(spec); !v.empty()) {
        throw Error(ErrorCode::invalid_input, "invalid perturbation spec", std::move(v));
    }
    const auto poly = WeightPolyhedron::around(cfg.weights, spec.weight_delta);
    Envelope env;
    env.points.reserve(matrix.size());
    for (const auto& row : matrix.rows) {
        EnvelopePoint p;
        p.date = row.date;
        const auto nominal = detail::perturbed_values(row, cfg, 1.0, 1.0);
        for (std::size_t j = 0; j < kCriteria; ++j) p.v_nominal += cfg.weights.w[j] * nominal[j];
        const auto low = detail::perturbed_values(row, cfg, 1.0 - spec.perf_delta, 1.0 - spec.value_delta);
        const auto high = detail::perturbed_values(row, cfg, 1.0 + spec.perf_delta, 1.0 + spec.value_delta);
        p.v_minus = optimize_over_weights(low, poly, Sense::minimize).objective;
        p.v_plus = optimize_over_weights(high, poly, Sense::maximize).objective;
        env.points.push_back(p);
    }
    detail::summarize(env);
    return env;
}

inline Envelope exact_envelope(const RawSeries& raw, const ModelConfig& cfg, const PerturbationSpec& spec) {
    return exact_envelope(compute_performances(raw), cfg, spec);
}

// Counter-based generator: each (seed, sample) pair owns an independent
// SplitMix64 stream, so samples can be produced in any order.
class SampleRng {
public:
    SampleRng(std::uint64_t seed, std::uint64_t sample)
        : state_(seed ^ (0x9E3779B97F4A7C15ULL * (sample + 1))) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

enum class SimulationMode { full_simplex, around_nominal };

// Weights for one Monte-Carlo sample.
//
// full_simplex: uniform on the simplex via normalised exponential spacings.
// around_nominal: uniform in the box nominal*(1 +/- weight_delta), renormalised
// to sum 1; draws whose renormalised weights leave the box are redrawn so every
// sample lies in the same polyhedron the exact envelope optimises over.
inline std::array<double, kCriteria> sample_weights(const WeightVector& nominal, const PerturbationSpec& spec,
                                                    SimulationMode mode, std::uint64_t sample_id) {
    SampleRng rng(spec.rng_seed, sample_id);
    std::array<double, kCriteria> w{};
    if (mode == SimulationMode::full_simplex) {
        double total = 0.0;
        for (auto& x : w) {
            x = -std::log1p(-rng.uniform());
            total += x;
        }
        if (total <= 0.0) {
            w.fill(1.0 / kCriteria);
            return w;
        }
        for (auto& x : w) x /= total;
        return w;
    }

    if (spec.weight_delta == 0.0) return nominal.w;
    const auto box = WeightPolyhedron::around(nominal, spec.weight_delta);
    constexpr int kMaxAttempts = 10000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        double total = 0.0;
        for (std::size_t j = 0; j < kCriteria; ++j) {
            w[j] = box.lower[j] + (box.upper[j] - box.lower[j]) * rng.uniform();
            total += w[j];
        }
        if (total <= 0.0) continue;
        for (auto& x : w) x /= total;
        if (box.contains(w)) return w;
    }
    return nominal.w;
}

struct Trajectory {
    std::uint64_t sample_id = 0;
    std::array<double, kCriteria> weights{};
    std::vector<double> values;  // one per matrix row
};

// Criterion values per row, evaluated once and shared by every sample.
inline std::vector<std::array<double, kCriteria>> criterion_values(const CriteriaMatrix& matrix,
                                                                   const ModelConfig& cfg) {
    std::vector<std::array<double, kCriteria>> out;
    out.reserve(matrix.size());
    for (const auto& row : matrix.rows) out.push_back(detail::perturbed_values(row, cfg, 1.0, 1.0));
    return out;
}

inline Trajectory simulate_sample(const std::vector<std::array<double, kCriteria>>& values,
                                  const WeightVector& nominal, const PerturbationSpec& spec, SimulationMode mode,
                                  std::uint64_t sample_id) {
    Trajectory t;
    t.sample_id = sample_id;
    t.weights = sample_weights(nominal, spec, mode, sample_id);
    t.values.reserve(values.size());
    for (const auto& v : values) {
        double s = 0.0;
        for (std::size_t j = 0; j < kCriteria; ++j) s += t.weights[j] * v[j];
        t.values.push_back(s);
    }
    return t;
}

inline std::vector<Trajectory> monte_carlo_weights(const CriteriaMatrix& matrix, const ModelConfig& cfg,
                                                   const PerturbationSpec& spec, SimulationMode mode) {
    if (auto v = violations(spec); !v.empty()) {
        throw Error(ErrorCode::invalid_input, "invalid perturbation spec", std::move(v));
    }
    const auto values = criterion_values(matrix, cfg);
    std::vector<Trajectory> out;
    out.reserve(spec.sample_count);
    for (std::uint64_t s = 0; s < spec.sample_count; ++s) {
        out.push_back(simulate_sample(values, cfg.weights, spec, mode, s));
    }
    return out;
}

inline std::vector<Trajectory> monte_carlo_weights(const RawSeries& raw, const ModelConfig& cfg,
                                                   const PerturbationSpec& spec, SimulationMode mode) {
    return monte_carlo_weights(compute_performances(raw), cfg, spec, mode);
}

}  // namespace paci
