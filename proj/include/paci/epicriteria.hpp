#pragma once

// Daily epidemic series and the five criteria performances derived from them:
// incidence, transmission, lethality, ward occupancy and ICU occupancy.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paci/date.hpp"
#include "paci/error.hpp"

namespace paci {

inline constexpr std::size_t kCriteria = 5;

enum class Criterion : std::size_t { incidence = 0, transmission, lethality, wards, icu };

inline constexpr std::array<const char*, kCriteria> kCriterionNames = {"incid", "trans", "letha", "wards", "icu"};

// Warm-up requirements, expressed as the smallest usable day index.
inline constexpr std::size_t kIncidenceWarmup = 6;
inline constexpr std::size_t kTransmissionWarmup = 13;
inline constexpr std::size_t kLethalityWarmup = 27;
inline constexpr std::size_t kMinSeriesLength = kLethalityWarmup + 1;

// One territorial unit's daily counts. Days are contiguous and counts are
// non-negative; both are enforced at construction.
class RawSeries {
public:
    RawSeries() = default;

    RawSeries(std::vector<Date> dates, std::vector<std::int64_t> new_cases, std::vector<std::int64_t> new_deaths,
              std::vector<std::int64_t> wards, std::vector<std::int64_t> icu)
        : dates_(std::move(dates)),
          new_cases_(std::move(new_cases)),
          new_deaths_(std::move(new_deaths)),
          wards_(std::move(wards)),
          icu_(std::move(icu)) {
        const std::size_t n = dates_.size();
        if (new_cases_.size() != n || new_deaths_.size() != n || wards_.size() != n || icu_.size() != n) {
            throw Error(ErrorCode::invalid_input, "raw series columns differ in length");
        }
        for (std::size_t i = 1; i < n; ++i) {
            if (dates_[i] - dates_[i - 1] != 1) {
                throw Error(ErrorCode::missing_day, "dates must be consecutive days: " + dates_[i - 1].iso() +
                                                        " is followed by " + dates_[i].iso());
            }
        }
        auto check = [&](const std::vector<std::int64_t>& col, const char* name) {
            for (std::size_t i = 0; i < n; ++i) {
                if (col[i] < 0) {
                    throw Error(ErrorCode::negative_count,
                                std::string("negative ") + name + " on " + dates_[i].iso());
                }
            }
        };
        check(new_cases_, "new_cases");
        check(new_deaths_, "new_deaths");
        check(wards_, "wards");
        check(icu_, "icu");
    }

    std::size_t size() const { return dates_.size(); }
    bool empty() const { return dates_.empty(); }

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<std::int64_t>& new_cases() const { return new_cases_; }
    const std::vector<std::int64_t>& new_deaths() const { return new_deaths_; }
    const std::vector<std::int64_t>& wards() const { return wards_; }
    const std::vector<std::int64_t>& icu() const { return icu_; }

    // Leading days [0, n).
    RawSeries head(std::size_t n) const {
        if (n > size()) n = size();
        auto cut = [n](const auto& v) { return std::vector(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)); };
        return RawSeries(cut(dates_), cut(new_cases_), cut(new_deaths_), cut(wards_), cut(icu_));
    }

private:
    std::vector<Date> dates_;
    std::vector<std::int64_t> new_cases_;
    std::vector<std::int64_t> new_deaths_;
    std::vector<std::int64_t> wards_;
    std::vector<std::int64_t> icu_;
};

struct PerformanceVector {
    Date date;
    std::array<double, kCriteria> x{};
    // Transmission fell back to 1 because a trailing weekly sum was zero.
    bool zero_activity = false;
    // Every lethality day in the window lacked lagged cases.
    bool no_lagged_cases = false;

    double operator[](Criterion c) const { return x[static_cast<std::size_t>(c)]; }
    double& operator[](Criterion c) { return x[static_cast<std::size_t>(c)]; }
};

struct CriteriaMatrix {
    std::vector<PerformanceVector> rows;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
};

// Rows whose date lies in [from, to]; open ends keep everything on that side.
inline CriteriaMatrix between(const CriteriaMatrix& m, std::optional<Date> from, std::optional<Date> to) {
    CriteriaMatrix out;
    for (const auto& r : m.rows) {
        if ((!from || r.date >= *from) && (!to || r.date <= *to)) out.rows.push_back(r);
    }
    return out;
}

struct TransmissionResult {
    double value = 1.0;
    bool zero_activity = false;
};

struct LethalityResult {
    double value = 0.0;
    bool no_lagged_cases = false;
    std::size_t days_used = 0;
};

namespace detail {

inline void require_history(const RawSeries& raw, std::size_t t, std::size_t warmup, const char* what) {
    if (t >= raw.size()) {
        throw Error(ErrorCode::out_of_range, std::string(what) + ": day index beyond series end");
    }
    if (t < warmup) {
        throw Error(ErrorCode::insufficient_history, std::string(what) + " needs day index >= " +
                                                         std::to_string(warmup) + ", got " + std::to_string(t));
    }
}

inline std::int64_t weekly_sum(const std::vector<std::int64_t>& n, std::size_t end_inclusive) {
    std::int64_t s = 0;
    for (std::size_t v = end_inclusive - 6; v <= end_inclusive; ++v) s += n[v];
    return s;
}

}  // namespace detail

// Seven-day mean of new cases ending on day t.
inline double incidence(const RawSeries& raw, std::size_t t) {
    detail::require_history(raw, t, kIncidenceWarmup, "incidence");
    return static_cast<double>(detail::weekly_sum(raw.new_cases(), t)) / 7.0;
}

// Geometric mean over the last seven days of the ratio between a weekly case
// sum and the same sum shifted one day back. Any zero denominator in the
// window yields `zero_fallback` with the zero-activity flag raised.
inline TransmissionResult transmission(const RawSeries& raw, std::size_t t, double zero_fallback = 1.0) {
    detail::require_history(raw, t, kTransmissionWarmup, "transmission");
    const auto& n = raw.new_cases();
    double log_sum = 0.0;
    bool has_zero_ratio = false;
    for (std::size_t u = t - 6; u <= t; ++u) {
        const std::int64_t num = detail::weekly_sum(n, u);
        const std::int64_t den = detail::weekly_sum(n, u - 1);
        if (den == 0) {
            return {zero_fallback, true};
        }
        if (num == 0) {
            has_zero_ratio = true;
            continue;
        }
        log_sum += std::log(static_cast<double>(num) / static_cast<double>(den));
    }
    if (has_zero_ratio) return {0.0, false};
    return {std::exp(log_sum / 7.0), false};
}

// Fourteen-day mean of the daily case-fatality percentage, deaths on day u over
// cases reported on day u-14. Days without lagged cases are skipped and the
// mean is taken over the days kept.
inline LethalityResult lethality(const RawSeries& raw, std::size_t t) {
    detail::require_history(raw, t, kLethalityWarmup, "lethality");
    const auto& cases = raw.new_cases();
    const auto& deaths = raw.new_deaths();
    double sum = 0.0;
    std::size_t kept = 0;
    for (std::size_t u = t - 13; u <= t; ++u) {
        const std::int64_t lagged = cases[u - 14];
        if (lagged == 0) continue;
        sum += 100.0 * static_cast<double>(deaths[u]) / static_cast<double>(lagged);
        ++kept;
    }
    if (kept == 0) return {0.0, true, 0};
    return {sum / static_cast<double>(kept), false, kept};
}

inline double wards(const RawSeries& raw, std::size_t t) {
    detail::require_history(raw, t, 0, "wards");
    return static_cast<double>(raw.wards()[t]);
}

inline double icu(const RawSeries& raw, std::size_t t) {
    detail::require_history(raw, t, 0, "icu");
    return static_cast<double>(raw.icu()[t]);
}

inline PerformanceVector performance_at(const RawSeries& raw, std::size_t t) {
    PerformanceVector p;
    p.date = raw.dates()[t];
    const auto trans = transmission(raw, t);
    const auto letha = lethality(raw, t);
    p.x = {incidence(raw, t), trans.value, letha.value, wards(raw, t), icu(raw, t)};
    p.zero_activity = trans.zero_activity;
    p.no_lagged_cases = letha.no_lagged_cases;
    return p;
}

// One row per day from the lethality warm-up horizon onward.
inline CriteriaMatrix compute_performances(const RawSeries& raw) {
    if (raw.size() < kMinSeriesLength) {
        throw Error(ErrorCode::series_too_short, "series has " + std::to_string(raw.size()) +
                                                     " days, at least " + std::to_string(kMinSeriesLength) +
                                                     " are required");
    }
    CriteriaMatrix m;
    m.rows.reserve(raw.size() - kLethalityWarmup);
    for (std::size_t t = kLethalityWarmup; t < raw.size(); ++t) {
        m.rows.push_back(performance_at(raw, t));
    }
    return m;
}

struct CorrelationTable {
    std::array<std::array<double, kCriteria>, kCriteria> r{};
    // False where one of the two columns is constant.
    std::array<std::array<bool, kCriteria>, kCriteria> defined{};

    double at(Criterion a, Criterion b) const {
        return r[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    bool is_defined(Criterion a, Criterion b) const {
        return defined[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
};

// Pearson correlation between every pair of criteria columns.
inline CorrelationTable correlations(const CriteriaMatrix& matrix) {
    const std::size_t n = matrix.size();
    if (n < 3) {
        throw Error(ErrorCode::invalid_input, "correlations need at least 3 rows");
    }
    std::array<double, kCriteria> mean{};
    for (const auto& row : matrix.rows)
        for (std::size_t j = 0; j < kCriteria; ++j) mean[j] += row.x[j];
    for (auto& m : mean) m /= static_cast<double>(n);

    std::array<std::array<double, kCriteria>, kCriteria> cov{};
    for (const auto& row : matrix.rows) {
        for (std::size_t a = 0; a < kCriteria; ++a) {
            const double da = row.x[a] - mean[a];
            for (std::size_t b = a; b < kCriteria; ++b) cov[a][b] += da * (row.x[b] - mean[b]);
        }
    }

    CorrelationTable out;
    for (std::size_t a = 0; a < kCriteria; ++a) {
        out.r[a][a] = 1.0;
        out.defined[a][a] = true;
        for (std::size_t b = a + 1; b < kCriteria; ++b) {
            const double denom = std::sqrt(cov[a][a] * cov[b][b]);
            double value = 0.0;
            bool ok = denom > 0.0;
            if (ok) {
                value = cov[a][b] / denom;
                if (value > 1.0) value = 1.0;
                if (value < -1.0) value = -1.0;
            }
            out.r[a][b] = out.r[b][a] = value;
            out.defined[a][b] = out.defined[b][a] = ok;
        }
    }
    return out;
}

}  // namespace paci
