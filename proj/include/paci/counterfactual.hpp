#pragma once

// Lower-bound estimate of the indicator without vaccination: after a pivot
// day, ward and ICU occupancy follow incidence at their pre-pivot mean ratios
// and lethality stays at its pre-pivot mean. Incidence and transmission keep
// their observed values.

#include <cstddef>
#include <string>

#include "paci/aggregator.hpp"
#include "paci/epicriteria.hpp"
#include "paci/error.hpp"

namespace paci {

struct CounterfactualSpec {
    std::size_t pivot_day = 390;  // row index in the criteria matrix
};

struct FrozenSeverity {
    double wards_per_case = 0.0;
    double icu_per_case = 0.0;
    double lethality = 0.0;
    std::size_t ratio_days = 0;  // pre-pivot rows with incidence > 0
};

inline FrozenSeverity frozen_severity(const CriteriaMatrix& matrix, std::size_t pivot_day) {
    if (pivot_day >= matrix.size()) {
        throw Error(ErrorCode::out_of_range, "pivot day " + std::to_string(pivot_day) + " is outside the matrix (" +
                                                 std::to_string(matrix.size()) + " rows)");
    }
    FrozenSeverity f;
    double letha = 0.0;
    for (std::size_t t = 0; t <= pivot_day; ++t) {
        const auto& x = matrix.rows[t].x;
        letha += x[2];
        if (x[0] > 0.0) {
            f.wards_per_case += x[3] / x[0];
            f.icu_per_case += x[4] / x[0];
            ++f.ratio_days;
        }
    }
    f.lethality = letha / static_cast<double>(pivot_day + 1);
    if (f.ratio_days > 0) {
        f.wards_per_case /= static_cast<double>(f.ratio_days);
        f.icu_per_case /= static_cast<double>(f.ratio_days);
    }
    return f;
}

inline CriteriaMatrix no_vaccination_matrix(const CriteriaMatrix& matrix, const CounterfactualSpec& spec) {
    if (spec.pivot_day + 1 >= matrix.size()) {
        throw Error(ErrorCode::out_of_range, "the criteria matrix must extend past the pivot day");
    }
    const auto frozen = frozen_severity(matrix, spec.pivot_day);
    CriteriaMatrix out = matrix;
    for (std::size_t t = spec.pivot_day + 1; t < out.size(); ++t) {
        auto& x = out.rows[t].x;
        x[2] = frozen.lethality;
        x[3] = frozen.wards_per_case * x[0];
        x[4] = frozen.icu_per_case * x[0];
    }
    return out;
}

inline IndicatorSeries no_vaccination_series(const CriteriaMatrix& matrix, const ModelConfig& cfg,
                                             const CounterfactualSpec& spec) {
    return run_series(no_vaccination_matrix(matrix, spec), cfg);
}

}  // namespace paci
