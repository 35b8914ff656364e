#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace citerank {

/// Calendar date at day resolution, stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}
    Date(int year, unsigned month, unsigned day);

    /// Parses `YYYY-MM-DD`. Returns nullopt for anything else, including impossible dates.
    static std::optional<Date> parse(std::string_view text);

    constexpr std::int32_t days() const { return days_; }
    std::string str() const;

    constexpr Date operator+(std::int32_t n) const { return Date(days_ + n); }
    constexpr Date operator-(std::int32_t n) const { return Date(days_ - n); }
    constexpr std::int32_t operator-(Date other) const { return days_ - other.days_; }
    constexpr auto operator<=>(const Date &) const = default;

private:
    std::int32_t days_ = 0;
};

inline constexpr double kDaysPerYear = 365.25;

} // namespace citerank
