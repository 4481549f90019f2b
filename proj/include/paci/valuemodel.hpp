#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "paci/dcm.hpp"
#include "paci/epicriteria.hpp"
#include "paci/error.hpp"

namespace paci {

enum class Domain { continuous, integer };

struct Breakpoint {
    double x = 0.0;
    double v = 0.0;
    bool operator==(const Breakpoint&) const = default;
};

// Non-decreasing piecewise-linear value function saturating at `cap`. Beyond
// the last breakpoint the function stays at the last value (or the cap).
// Immutable after construction.
class PiecewiseLinearValueFunction {
public:
    PiecewiseLinearValueFunction() = default;

    PiecewiseLinearValueFunction(std::vector<Breakpoint> breakpoints, double cap, Domain domain = Domain::continuous)
        : breakpoints_(std::move(breakpoints)), cap_(cap), domain_(domain) {
        if (auto v = violations(breakpoints_, cap_); !v.empty()) {
            throw Error(ErrorCode::invalid_config, "invalid value function", std::move(v));
        }
        cap_onset_ = solve_cap_onset();
    }

    static std::vector<std::string> violations(const std::vector<Breakpoint>& bps, double cap) {
        std::vector<std::string> v;
        if (bps.size() < 2) v.push_back("a value function needs at least two breakpoints");
        for (std::size_t i = 1; i < bps.size(); ++i) {
            if (!(bps[i].x > bps[i - 1].x)) v.push_back("breakpoint x must be strictly increasing");
            if (bps[i].v < bps[i - 1].v) v.push_back("breakpoint values must be non-decreasing");
        }
        if (!bps.empty() && bps.front().x < 0.0) v.push_back("breakpoints must start at x >= 0");
        if (!std::isfinite(cap)) v.push_back("cap must be finite");
        if (!bps.empty() && cap < bps.front().v) v.push_back("cap must not be below the first value");
        return v;
    }

    const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
    double cap() const { return cap_; }
    // Smallest x where the function reaches the cap; +inf when it never does.
    double cap_onset() const { return cap_onset_; }
    Domain domain() const { return domain_; }

    double operator()(double x) const {
        if (!(x >= 0.0)) {
            throw Error(ErrorCode::invalid_input, "value functions are defined for x >= 0");
        }
        return std::min(cap_, interpolate(x));
    }

    bool operator==(const PiecewiseLinearValueFunction& o) const {
        return breakpoints_ == o.breakpoints_ && cap_ == o.cap_ && domain_ == o.domain_;
    }

private:
    double interpolate(double x) const {
        if (x <= breakpoints_.front().x) return breakpoints_.front().v;
        if (x >= breakpoints_.back().x) return breakpoints_.back().v;
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x,
                                   [](double value, const Breakpoint& b) { return value < b.x; });
        const Breakpoint& b = *it;
        const Breakpoint& a = *(it - 1);
        const double u = (x - a.x) / (b.x - a.x);
        return a.v + u * (b.v - a.v);
    }

    double solve_cap_onset() const {
        if (breakpoints_.front().v >= cap_) return breakpoints_.front().x;
        for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
            const Breakpoint& a = breakpoints_[i - 1];
            const Breakpoint& b = breakpoints_[i];
            if (b.v >= cap_) {
                if (b.v == cap_) return b.x;
                return a.x + (cap_ - a.v) / (b.v - a.v) * (b.x - a.x);
            }
        }
        return std::numeric_limits<double>::infinity();
    }

    std::vector<Breakpoint> breakpoints_;
    double cap_ = 0.0;
    double cap_onset_ = std::numeric_limits<double>::infinity();
    Domain domain_ = Domain::continuous;
};

inline double evaluate(const PiecewiseLinearValueFunction& f, double x) { return f(x); }

inline constexpr double kDefaultCap = 180.0;

// The five elicited functions (incidence, transmission, lethality, wards, ICU).
//
// Incidence follows the card counts [0,2,4,6,8,10,13] with the unit value 4,
// so the level 1350 sits at 144 and 1575 at 200; the cap onset is then
// 1494.64.
//
// Transmission follows the piece formulas, with the third piece on
// [0.96, 0.98); the cap onset is the root of 2600x - 2508 = 180.
inline std::array<PiecewiseLinearValueFunction, kCriteria> default_functions() {
    using V = std::vector<Breakpoint>;
    return {
        PiecewiseLinearValueFunction(
            V{{0, 0}, {225, 4}, {450, 16}, {675, 36}, {900, 64}, {1125, 100}, {1350, 144}, {1575, 200}},
            kDefaultCap),
        PiecewiseLinearValueFunction(
            V{{0, 0}, {0.92, 4}, {0.94, 16}, {0.96, 36}, {0.98, 64}, {1.0, 100}, {1.02, 144}, {1.04, 196}},
            kDefaultCap),
        PiecewiseLinearValueFunction(V{{0, 0}, {7.2, 200}}, kDefaultCap),
        PiecewiseLinearValueFunction(
            V{{0, 0}, {500, 4}, {1000, 16}, {1500, 36}, {2000, 64}, {2500, 100}, {3000, 144}, {3500, 196}},
            kDefaultCap, Domain::integer),
        PiecewiseLinearValueFunction(
            V{{0, 0}, {40, 4}, {80, 16}, {120, 36}, {160, 64}, {200, 100}, {240, 144}, {280, 196}}, kDefaultCap,
            Domain::integer),
    };
}

// Breakpoints taken from an elicited interval scale.
inline PiecewiseLinearValueFunction from_dcm(const dcm::IntervalScaleResult& scale, double cap,
                                             const dcm::LevelSequence& seq, Domain domain = Domain::continuous) {
    if (scale.values.size() != seq.levels.size()) {
        throw Error(ErrorCode::invalid_judgements, "scale and level sequence differ in length");
    }
    const double max_anchor = std::max(seq.lo.value, seq.hi.value);
    if (cap < max_anchor) {
        throw Error(ErrorCode::invalid_judgements, "cap is below the upper anchor value",
                    {"cap " + std::to_string(cap) + " < anchor " + std::to_string(max_anchor)});
    }
    std::vector<Breakpoint> bps;
    bps.reserve(seq.levels.size());
    for (std::size_t i = 0; i < seq.levels.size(); ++i) bps.push_back({seq.levels[i], scale.values[i]});
    return PiecewiseLinearValueFunction(std::move(bps), cap, domain);
}

// scale * (x / anchor_x)^2 on [0, anchor_x], cap beyond.
struct QuadraticApproximation {
    double scale = 100.0;
    double anchor_x = 1.0;
    double cap = kDefaultCap;

    double operator()(double x) const {
        if (anchor_x <= 0.0 || x > anchor_x) return cap;
        const double r = x / anchor_x;
        return scale * r * r;
    }
};

namespace detail {

// Composite Simpson on [a, b] split at the given knots, `panels` panels per
// knot interval.
template <typename F>
double simpson(F&& f, std::vector<double> knots, int panels) {
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    double total = 0.0;
    for (std::size_t s = 1; s < knots.size(); ++s) {
        const double a = knots[s - 1];
        const double b = knots[s];
        const double h = (b - a) / panels;
        // One-sided limits at the knots, where the integrand may jump.
        double acc = f(std::nextafter(a, b)) + f(std::nextafter(b, a));
        for (int i = 1; i < panels; ++i) acc += f(a + h * i) * ((i % 2) ? 4.0 : 2.0);
        total += acc * h / 3.0;
    }
    return total;
}

}  // namespace detail

// sqrt(int (f - q)^2) / sqrt(int f^2) over [0, T], where T is the first point
// past which both functions are capped at the same value. Between knots the
// integrands are polynomials of degree <= 4, so composite Simpson converges
// with O(h^4) and 1e4 panels per interval is far below 1e-6 relative error.
inline double relative_l2_distance(const PiecewiseLinearValueFunction& f, const QuadraticApproximation& q) {
    double upper = std::max(f.cap_onset(), q.anchor_x);
    if (!std::isfinite(upper) || f.cap() != q.cap) {
        upper = std::max(f.breakpoints().back().x, q.anchor_x);
    }
    std::vector<double> knots{0.0, upper};
    for (const auto& b : f.breakpoints()) {
        if (b.x < upper) knots.push_back(b.x);
    }
    if (f.cap_onset() < upper) knots.push_back(f.cap_onset());
    if (q.anchor_x < upper) knots.push_back(q.anchor_x);

    constexpr int kPanels = 10000;
    const double num = detail::simpson(
        [&](double x) {
            const double d = f(x) - q(x);
            return d * d;
        },
        knots, kPanels);
    const double den = detail::simpson(
        [&](double x) {
            const double v = f(x);
            return v * v;
        },
        knots, kPanels);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num) / std::sqrt(den);
}

}  // namespace paci
