#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "paci/error.hpp"

namespace paci {

// A calendar day, stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days d) : days_(d.time_since_epoch().count()) {}

    static Date from_ymd(int y, unsigned m, unsigned d) {
        std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
        if (!ymd.ok()) {
            throw Error(ErrorCode::invalid_input, "invalid calendar date");
        }
        return Date(std::chrono::sys_days{ymd});
    }

    // Strict ISO-8601 YYYY-MM-DD.
    static Date parse(std::string_view text) {
        auto digits = [&](std::size_t pos, std::size_t len) {
            int value = 0;
            for (std::size_t i = pos; i < pos + len; ++i) {
                char c = text[i];
                if (c < '0' || c > '9') {
                    throw Error(ErrorCode::invalid_input, "malformed date '" + std::string(text) + "'");
                }
                value = value * 10 + (c - '0');
            }
            return value;
        };
        if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
            throw Error(ErrorCode::invalid_input, "malformed date '" + std::string(text) + "'");
        }
        return from_ymd(digits(0, 4), static_cast<unsigned>(digits(5, 2)), static_cast<unsigned>(digits(8, 2)));
    }

    std::string iso() const {
        std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days_}}};
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }

    constexpr long serial() const { return days_; }
    constexpr Date plus_days(long n) const {
        Date d;
        d.days_ = days_ + n;
        return d;
    }
    constexpr long operator-(const Date& other) const { return days_ - other.days_; }
    constexpr auto operator<=>(const Date&) const = default;

private:
    long days_ = 0;
};

}  // namespace paci
