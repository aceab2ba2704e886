#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace rerisk {

/// Calendar month. Ordered, and convertible to a linear month count so that
/// grids can do arithmetic without touching dates.
class YearMonth {
public:
    constexpr YearMonth() = default;
    constexpr YearMonth(int year, int month) : year_(year), month_(month) {}

    static constexpr YearMonth from_serial(long serial) {
        long y = serial / 12;
        long m = serial % 12;
        if (m < 0) {
            m += 12;
            --y;
        }
        return {static_cast<int>(y), static_cast<int>(m) + 1};
    }

    /// Parses ISO-8601 "YYYY-MM". Returns nullopt on any deviation.
    static std::optional<YearMonth> parse(std::string_view text);

    [[nodiscard]] constexpr int year() const { return year_; }
    [[nodiscard]] constexpr int month() const { return month_; }
    [[nodiscard]] constexpr long serial() const { return static_cast<long>(year_) * 12 + (month_ - 1); }
    [[nodiscard]] constexpr YearMonth plus(long months) const { return from_serial(serial() + months); }
    [[nodiscard]] constexpr bool valid() const { return month_ >= 1 && month_ <= 12; }

    [[nodiscard]] std::string to_string() const;

    constexpr auto operator<=>(const YearMonth& other) const { return serial() <=> other.serial(); }
    constexpr bool operator==(const YearMonth& other) const { return serial() == other.serial(); }

private:
    int year_ = 1970;
    int month_ = 1;
};

/// Consecutive run of months with no gaps.
class TimeGrid {
public:
    TimeGrid() = default;
    /// Throws ValidationError when length < 1.
    TimeGrid(YearMonth start, std::ptrdiff_t length);

    [[nodiscard]] YearMonth start() const { return start_; }
    [[nodiscard]] YearMonth last() const { return start_.plus(length_ - 1); }
    [[nodiscard]] std::ptrdiff_t length() const { return length_; }
    [[nodiscard]] YearMonth at(std::ptrdiff_t i) const { return start_.plus(i); }
    [[nodiscard]] bool contains(YearMonth m) const { return m >= start_ && m <= last(); }
    /// Position of `m` in the grid, or nullopt when outside.
    [[nodiscard]] std::optional<std::ptrdiff_t> index_of(YearMonth m) const;
    /// Grid starting `skip` months later with the same end.
    [[nodiscard]] TimeGrid drop_front(std::ptrdiff_t skip) const;
    [[nodiscard]] std::string describe() const;

    bool operator==(const TimeGrid& other) const = default;

private:
    YearMonth start_{};
    std::ptrdiff_t length_ = 1;
};

}  // namespace rerisk
