#pragma once

// CSV formats. Numbers are written with 6 significant digits.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "paci/aggregator.hpp"
#include "paci/epicriteria.hpp"
#include "paci/error.hpp"
#include "paci/sensitivity.hpp"

namespace paci::csv {

inline constexpr std::string_view kRawHeader = "date,new_cases,new_deaths,wards,icu";
inline constexpr std::string_view kCriteriaHeader = "date,incid,trans,letha,wards,icu";
inline constexpr std::string_view kSeriesHeader = "date,overall,state,c_incid,c_trans,c_letha,c_wards,c_icu";
inline constexpr std::string_view kContributionsHeader = "date,c_incid,c_trans,c_letha,c_wards,c_icu";
inline constexpr std::string_view kEnvelopeHeader = "date,v_minus,v_nominal,v_plus";
inline constexpr std::string_view kCounterfactualHeader = "date,actual,counterfactual";
inline constexpr std::string_view kSimulationHeader = "sample_id,date,value";

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline std::string_view trim_eol(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
    return s;
}

inline std::string where(std::size_t line_no) { return "line " + std::to_string(line_no); }

inline std::int64_t parse_int(std::string_view s, std::size_t line_no) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw Error(ErrorCode::invalid_input, where(line_no) + ": expected an integer, got '" + std::string(s) + "'");
    }
    return v;
}

inline double parse_double(std::string_view s, std::size_t line_no) {
    // std::from_chars for double is not available everywhere; strtod on a copy.
    const std::string copy(s);
    char* end = nullptr;
    const double v = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size()) {
        throw Error(ErrorCode::invalid_input, where(line_no) + ": expected a number, got '" + copy + "'");
    }
    return v;
}

inline void expect_header(std::istream& in, std::string_view header) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::invalid_input, "empty CSV input");
    std::string_view h = trim_eol(line);
    if (h.size() >= 3 && static_cast<unsigned char>(h[0]) == 0xEF && static_cast<unsigned char>(h[1]) == 0xBB &&
        static_cast<unsigned char>(h[2]) == 0xBF) {
        h.remove_prefix(3);
    }
    if (h != header) {
        throw Error(ErrorCode::invalid_input,
                    "unexpected CSV header '" + std::string(h) + "', expected '" + std::string(header) + "'");
    }
}

}  // namespace detail

inline RawSeries read_raw(std::istream& in) {
    detail::expect_header(in, kRawHeader);
    std::vector<Date> dates;
    std::vector<std::int64_t> cases, deaths, wards, icu;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto l = detail::trim_eol(line);
        if (l.empty()) continue;
        const auto f = detail::split(l);
        if (f.size() != 5) {
            throw Error(ErrorCode::invalid_input, detail::where(line_no) + ": expected 5 fields");
        }
        dates.push_back(Date::parse(f[0]));
        cases.push_back(detail::parse_int(f[1], line_no));
        deaths.push_back(detail::parse_int(f[2], line_no));
        wards.push_back(detail::parse_int(f[3], line_no));
        icu.push_back(detail::parse_int(f[4], line_no));
    }
    return RawSeries(std::move(dates), std::move(cases), std::move(deaths), std::move(wards), std::move(icu));
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
    return in;
}

inline RawSeries read_raw_file(const std::string& path) {
    auto in = open_input(path);
    return read_raw(in);
}

inline void write_raw(std::ostream& out, const RawSeries& raw) {
    out << kRawHeader << '\n';
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out << raw.dates()[i].iso() << ',' << raw.new_cases()[i] << ',' << raw.new_deaths()[i] << ','
            << raw.wards()[i] << ',' << raw.icu()[i] << '\n';
    }
}

inline CriteriaMatrix read_criteria(std::istream& in) {
    detail::expect_header(in, kCriteriaHeader);
    CriteriaMatrix m;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto l = detail::trim_eol(line);
        if (l.empty()) continue;
        const auto f = detail::split(l);
        if (f.size() != 6) {
            throw Error(ErrorCode::invalid_input, detail::where(line_no) + ": expected 6 fields");
        }
        PerformanceVector p;
        p.date = Date::parse(f[0]);
        for (std::size_t j = 0; j < kCriteria; ++j) {
            p.x[j] = detail::parse_double(f[j + 1], line_no);
            if (!(p.x[j] >= 0.0)) {
                throw Error(ErrorCode::invalid_input, detail::where(line_no) + ": performances must be >= 0");
            }
        }
        if (!m.rows.empty() && !(p.date > m.rows.back().date)) {
            throw Error(ErrorCode::invalid_input, detail::where(line_no) + ": dates must be strictly increasing");
        }
        m.rows.push_back(p);
    }
    return m;
}

inline CriteriaMatrix read_criteria_file(const std::string& path) {
    auto in = open_input(path);
    return read_criteria(in);
}

inline void write_criteria(std::ostream& out, const CriteriaMatrix& m) {
    out << kCriteriaHeader << '\n';
    for (const auto& r : m.rows) {
        out << r.date.iso();
        for (double x : r.x) out << ',' << num(x);
        out << '\n';
    }
}

inline void write_series(std::ostream& out, const IndicatorSeries& s) {
    out << kSeriesHeader << '\n';
    for (const auto& p : s.points) {
        out << p.date.iso() << ',' << num(p.overall) << ',' << p.state;
        for (double c : p.contributions) out << ',' << num(c);
        out << '\n';
    }
}

inline void write_contributions(std::ostream& out, const IndicatorSeries& s) {
    out << kContributionsHeader << '\n';
    for (const auto& p : s.points) {
        out << p.date.iso();
        for (double c : p.contributions) out << ',' << num(c);
        out << '\n';
    }
}

inline void write_envelope(std::ostream& out, const Envelope& env) {
    out << kEnvelopeHeader << '\n';
    for (const auto& p : env.points) {
        out << p.date.iso() << ',' << num(p.v_minus) << ',' << num(p.v_nominal) << ',' << num(p.v_plus) << '\n';
    }
}

inline void write_counterfactual(std::ostream& out, const IndicatorSeries& actual, const IndicatorSeries& cf) {
    out << kCounterfactualHeader << '\n';
    for (std::size_t i = 0; i < actual.size(); ++i) {
        out << actual.points[i].date.iso() << ',' << num(actual.points[i].overall) << ','
            << num(cf.points[i].overall) << '\n';
    }
}

inline void write_simulation_header(std::ostream& out) { out << kSimulationHeader << '\n'; }

inline void write_simulation_rows(std::ostream& out, const Trajectory& t, const CriteriaMatrix& m) {
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        out << t.sample_id << ',' << m.rows[i].date.iso() << ',' << num(t.values[i]) << '\n';
    }
}

}  // namespace paci::csv
