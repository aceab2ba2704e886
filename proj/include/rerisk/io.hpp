#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rerisk/series.hpp"

namespace rerisk {

// CSV conventions: UTF-8, comma separator, '.' decimal point, LF line
// endings on output (CRLF accepted on input), ISO year-month dates.

enum class Layout { Wide, Long, Constituents };

[[nodiscard]] Layout parse_layout(std::string_view name);

/// `date,<series>...`, one row per month. Rows may come in any order but the
/// months must be contiguous. A blank cell raises GapError naming the line
/// and column; a malformed date or number raises ParseError.
[[nodiscard]] Panel read_wide_csv(std::string_view text, const std::string& source = "input");

/// `date,series,value`. Rows may come in any order; each series must cover a
/// contiguous run of months. Series come back sorted by first appearance.
[[nodiscard]] std::vector<ReturnSeries> read_long_csv(std::string_view text, const std::string& source = "input");

/// `date,id,return,market_cap` (prior-month-end capitalisation).
[[nodiscard]] std::vector<ConstituentRecord> read_constituents_csv(std::string_view text,
                                                                   const std::string& source = "input");

[[nodiscard]] std::string read_text_file(const std::string& path);
/// Creates parent directories as needed.
void write_text_file(const std::string& path, std::string_view content);

/// Shortest representation that parses back to the same double.
[[nodiscard]] std::string format_full(double v);
/// Fixed three-decimal text for aligned tables; "NA" for NaN.
[[nodiscard]] std::string format_fixed(double v, int decimals = 3);

[[nodiscard]] std::string to_wide_csv(const Panel& p);
[[nodiscard]] std::string to_long_csv(const std::vector<ReturnSeries>& series);

/// Rectangular table rendered either as CSV (full precision) or as an
/// aligned text block (fixed decimals). Cells hold either a number or text.
class Table {
public:
    struct Cell {
        bool numeric = false;
        double number = 0.0;
        std::string text;
        bool integral = false;  ///< counts print without decimals
    };

    Table(std::string title, std::vector<std::string> columns);

    Table& add_row(std::vector<Cell> cells);
    [[nodiscard]] const std::string& title() const { return title_; }
    [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
    [[nodiscard]] std::size_t rows() const { return rows_.size(); }
    [[nodiscard]] const std::vector<Cell>& row(std::size_t i) const { return rows_[i]; }

    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_text(int decimals = 3) const;

    static Cell num(double v) { return {true, v, {}, false}; }
    static Cell count(double v) { return {true, v, {}, true}; }
    static Cell str(std::string s) { return {false, 0.0, std::move(s), false}; }

private:
    std::string title_;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace rerisk
