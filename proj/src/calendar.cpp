#include "rerisk/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "rerisk/error.hpp"

namespace rerisk {

std::optional<YearMonth> YearMonth::parse(std::string_view text) {
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    int year = 0;
    int month = 0;
    auto [py, ey] = std::from_chars(text.data(), text.data() + 4, year);
    if (ey != std::errc{} || py != text.data() + 4) return std::nullopt;
    auto [pm, em] = std::from_chars(text.data() + 5, text.data() + 7, month);
    if (em != std::errc{} || pm != text.data() + 7) return std::nullopt;
    YearMonth ym(year, month);
    if (!ym.valid()) return std::nullopt;
    return ym;
}

std::string YearMonth::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year_, month_);
    return buf;
}

TimeGrid::TimeGrid(YearMonth start, std::ptrdiff_t length) : start_(start), length_(length) {
    if (length < 1) throw ValidationError("time grid length must be at least 1");
    if (!start.valid()) throw ValidationError("time grid start month out of range");
}

std::optional<std::ptrdiff_t> TimeGrid::index_of(YearMonth m) const {
    if (!contains(m)) return std::nullopt;
    return m.serial() - start_.serial();
}

TimeGrid TimeGrid::drop_front(std::ptrdiff_t skip) const {
    return TimeGrid(start_.plus(skip), length_ - skip);
}

std::string TimeGrid::describe() const { return start_.to_string() + ".." + last().to_string(); }

}  // namespace rerisk
