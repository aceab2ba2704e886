#include "rerisk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rerisk/config.hpp"
#include "rerisk/error.hpp"

namespace rerisk {

namespace {

struct CsvLine {
    int number = 0;
    std::vector<std::string> fields;
};

std::vector<std::string> split_csv_fields(std::string_view line, const std::string& where) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw ParseError(where + ": unterminated quoted field");
    out.push_back(std::move(field));
    for (auto& f : out) f = std::string(trim(f));
    return out;
}

// Non-empty lines with their 1-based line numbers; strips a UTF-8 BOM.
std::vector<CsvLine> csv_lines(std::string_view text, const std::string& source) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<CsvLine> out;
    int number = 0;
    for (auto line : split(text, '\n')) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;
        out.push_back({number, split_csv_fields(line, source + ":" + std::to_string(number))});
    }
    if (out.empty()) throw ParseError(source + ": file is empty");
    return out;
}

void expect_header(const CsvLine& header, const std::vector<std::string>& expected, const std::string& source) {
    if (header.fields != expected) {
        std::string want;
        for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
        throw ParseError(source + ":" + std::to_string(header.number) + ": expected header '" + want + "'");
    }
}

YearMonth parse_month(const std::string& field, const std::string& where) {
    const auto ym = YearMonth::parse(field);
    if (!ym) throw ParseError(where + ": malformed date '" + field + "' (expected YYYY-MM)");
    return *ym;
}

double parse_value(const std::string& field, const std::string& where, const std::string& column) {
    const auto v = parse_double(field);
    if (!v || !std::isfinite(*v)) throw ParseError(where + ": column '" + column + "' is not a number: '" + field + "'");
    return *v;
}

std::string where(const std::string& source, int line) { return source + ":" + std::to_string(line); }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

Layout parse_layout(std::string_view name) {
    if (name == "wide") return Layout::Wide;
    if (name == "long") return Layout::Long;
    if (name == "constituents") return Layout::Constituents;
    throw ValidationError("unknown CSV layout '" + std::string(name) + "' (expected wide, long or constituents)");
}

Panel read_wide_csv(std::string_view text, const std::string& source) {
    const auto lines = csv_lines(text, source);
    const auto& header = lines.front();
    if (header.fields.size() < 2 || header.fields.front() != "date") {
        throw ParseError(where(source, header.number) + ": wide layout needs 'date' followed by series columns");
    }
    const std::vector<std::string> labels(header.fields.begin() + 1, header.fields.end());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty()) throw ParseError(where(source, header.number) + ": empty series name");
        if (std::find(labels.begin(), labels.begin() + static_cast<long>(i), labels[i]) != labels.begin() + static_cast<long>(i)) {
            throw ParseError(where(source, header.number) + ": duplicate series '" + labels[i] + "'");
        }
    }

    std::map<YearMonth, std::pair<int, std::vector<double>>> rows;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& line = lines[r];
        const auto w = where(source, line.number);
        if (line.fields.size() != header.fields.size()) {
            throw ParseError(w + ": expected " + std::to_string(header.fields.size()) + " fields, got " +
                             std::to_string(line.fields.size()));
        }
        const YearMonth month = parse_month(line.fields[0], w);
        std::vector<double> values;
        for (std::size_t c = 0; c < labels.size(); ++c) {
            const auto& field = line.fields[c + 1];
            if (field.empty()) {
                throw GapError(w + ": missing value for series '" + labels[c] + "' in " + month.to_string());
            }
            values.push_back(parse_value(field, w, labels[c]));
        }
        if (const auto it = rows.find(month); it != rows.end()) {
            throw ParseError(w + ": duplicate month " + month.to_string() + " (first at line " +
                             std::to_string(it->second.first) + ")");
        }
        rows.emplace(month, std::pair{line.number, std::move(values)});
    }
    if (rows.empty()) throw ParseError(source + ": no data rows");

    const YearMonth first = rows.begin()->first;
    const auto expected = rows.rbegin()->first.serial() - first.serial() + 1;
    if (expected != static_cast<long>(rows.size())) {
        YearMonth previous = first;
        for (const auto& [month, _] : rows) {
            if (month.serial() > previous.serial() + 1) {
                throw GapError(source + ": months missing between " + previous.to_string() + " and " +
                               month.to_string());
            }
            previous = month;
        }
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(labels.size()));
    Eigen::Index t = 0;
    for (const auto& [_, row] : rows) {
        for (std::size_t c = 0; c < labels.size(); ++c) values(t, static_cast<Eigen::Index>(c)) = row.second[c];
        ++t;
    }
    return Panel(TimeGrid(first, values.rows()), labels, values);
}

std::vector<ReturnSeries> read_long_csv(std::string_view text, const std::string& source) {
    const auto lines = csv_lines(text, source);
    expect_header(lines.front(), {"date", "series", "value"}, source);
    std::vector<std::string> order;
    std::map<std::string, std::map<YearMonth, std::pair<int, double>>> data;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& line = lines[r];
        const auto w = where(source, line.number);
        if (line.fields.size() != 3) throw ParseError(w + ": expected 3 fields");
        const YearMonth month = parse_month(line.fields[0], w);
        const auto& name = line.fields[1];
        if (name.empty()) throw ParseError(w + ": empty series name");
        if (line.fields[2].empty()) throw GapError(w + ": missing value for series '" + name + "'");
        const double v = parse_value(line.fields[2], w, "value");
        auto [it, fresh] = data.try_emplace(name);
        if (fresh) order.push_back(name);
        if (const auto dup = it->second.find(month); dup != it->second.end()) {
            throw ParseError(w + ": duplicate row for series '" + name + "' in " + month.to_string() +
                             " (first at line " + std::to_string(dup->second.first) + ")");
        }
        it->second.emplace(month, std::pair{line.number, v});
    }
    if (order.empty()) throw ParseError(source + ": no data rows");

    std::vector<ReturnSeries> out;
    for (const auto& name : order) {
        const auto& rows = data[name];
        const YearMonth first = rows.begin()->first;
        Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
        Eigen::Index t = 0;
        YearMonth previous = first;
        for (const auto& [month, row] : rows) {
            if (month.serial() > previous.serial() + 1) {
                throw GapError(source + ": series '" + name + "' has no rows between " + previous.to_string() +
                               " and " + month.to_string());
            }
            previous = month;
            v[t++] = row.second;
        }
        out.emplace_back(name, TimeGrid(first, v.size()), std::move(v));
    }
    return out;
}

std::vector<ConstituentRecord> read_constituents_csv(std::string_view text, const std::string& source) {
    const auto lines = csv_lines(text, source);
    expect_header(lines.front(), {"date", "id", "return", "market_cap"}, source);
    std::vector<ConstituentRecord> out;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& line = lines[r];
        const auto w = where(source, line.number);
        if (line.fields.size() != 4) throw ParseError(w + ": expected 4 fields");
        ConstituentRecord rec;
        rec.month = parse_month(line.fields[0], w);
        rec.id = line.fields[1];
        if (rec.id.empty()) throw ParseError(w + ": empty constituent id");
        rec.return_pct = parse_value(line.fields[2], w, "return");
        rec.market_cap = parse_value(line.fields[3], w, "market_cap");
        out.push_back(std::move(rec));
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ValidationError("write failed for " + path);
}

std::string format_full(double v) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    std::string s(buf, ptr);
    // Avoid "-0.000".
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string to_wide_csv(const Panel& p) {
    std::string out = "date";
    for (const auto& l : p.labels()) out += "," + csv_escape(l);
    out += '\n';
    for (Eigen::Index t = 0; t < p.length(); ++t) {
        out += p.grid().at(t).to_string();
        for (Eigen::Index j = 0; j < p.width(); ++j) out += "," + format_full(p.values()(t, j));
        out += '\n';
    }
    return out;
}

std::string to_long_csv(const std::vector<ReturnSeries>& series) {
    std::string out = "date,series,value\n";
    for (const auto& s : series) {
        for (Eigen::Index t = 0; t < s.size(); ++t) {
            out += s.grid().at(t).to_string() + "," + csv_escape(s.label()) + "," + format_full(s[t]) + "\n";
        }
    }
    return out;
}

Table::Table(std::string title, std::vector<std::string> columns)
    : title_(std::move(title)), columns_(std::move(columns)) {}

Table& Table::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns_.size()) {
        throw ValidationError("table '" + title_ + "': row has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(cells));
    return *this;
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + csv_escape(columns_[c]);
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += row[c].numeric ? format_full(row[c].number) : csv_escape(row[c].text);
        }
        out += '\n';
    }
    return out;
}

std::string Table::to_text(int decimals) const {
    std::vector<std::vector<std::string>> cells;
    cells.push_back(columns_);
    for (const auto& row : rows_) {
        std::vector<std::string> r;
        for (const auto& c : row) r.push_back(c.numeric ? format_fixed(c.number, c.integral ? 0 : decimals) : c.text);
        cells.push_back(std::move(r));
    }
    std::vector<std::size_t> width(columns_.size(), 0);
    for (const auto& r : cells) {
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::string out = title_ + "\n";
    std::size_t total = 0;
    for (const auto w : width) total += w + 2;
    const std::string rule(total > 2 ? total - 2 : 0, '-');
    out += rule + "\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string line;
        for (std::size_t c = 0; c < cells[i].size(); ++c) {
            const auto& s = cells[i][c];
            const bool right = i > 0 ? rows_[i - 1][c].numeric : !rows_.empty() && rows_[0][c].numeric;
            const std::string pad(width[c] - s.size(), ' ');
            if (c) line += "  ";
            line += right ? pad + s : s + pad;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
        if (i == 0) out += rule + "\n";
    }
    out += rule + "\n";
    return out;
}

}  // namespace rerisk
