#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paci/csv_io.hpp"
#include "paci/epicriteria.hpp"

namespace fixtures {

inline std::string data(const std::string& name) { return std::string(PACI_DATA_DIR) + "/" + name; }

inline paci::RawSeries make_raw(std::vector<std::int64_t> cases, std::vector<std::int64_t> deaths = {},
                                std::vector<std::int64_t> wards = {}, std::vector<std::int64_t> icu = {},
                                paci::Date start = paci::Date::from_ymd(2021, 1, 1)) {
    const std::size_t n = cases.size();
    if (deaths.empty()) deaths.assign(n, 0);
    if (wards.empty()) wards.assign(n, 0);
    if (icu.empty()) icu.assign(n, 0);
    std::vector<paci::Date> dates;
    for (std::size_t i = 0; i < n; ++i) dates.push_back(start.plus_days(static_cast<long>(i)));
    return paci::RawSeries(std::move(dates), std::move(cases), std::move(deaths), std::move(wards), std::move(icu));
}

inline paci::RawSeries synthetic() { return paci::csv::read_raw_file(data("synthetic_raw.csv")); }

inline paci::CriteriaMatrix worked_example() { return paci::csv::read_criteria_file(data("worked_example_criteria.csv")); }

}  // namespace fixtures
