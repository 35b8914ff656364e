#include "citerank/date.hpp"

#include <charconv>
#include <cstdio>

namespace citerank {

namespace chr = std::chrono;

Date::Date(int year, unsigned month, unsigned day)
    : days_(static_cast<std::int32_t>(
          chr::sys_days{chr::year{year} / chr::month{month} / chr::day{day}}.time_since_epoch().count())) {}

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        return std::nullopt;
    auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int value = 0;
        const char *first = text.data() + pos;
        const char *last = first + len;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last)
            return std::nullopt;
        return value;
    };
    auto y = field(0, 4);
    auto m = field(5, 2);
    auto d = field(8, 2);
    if (!y || !m || !d || *m < 1 || *d < 1)
        return std::nullopt;
    chr::year_month_day ymd{chr::year{*y}, chr::month{static_cast<unsigned>(*m)},
                            chr::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok())
        return std::nullopt;
    return Date(*y, static_cast<unsigned>(*m), static_cast<unsigned>(*d));
}

std::string Date::str() const {
    chr::year_month_day ymd{chr::sys_days{chr::days{days_}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace citerank
