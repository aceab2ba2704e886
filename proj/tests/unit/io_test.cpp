#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>
#include <vector>

#include "rerisk/error.hpp"
#include "rerisk/io.hpp"
#include "rerisk/random.hpp"
#include "support.hpp"

using namespace rerisk;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

}  // namespace

TEST(WideCsv, RoundTripsBitExactly) {
    Rng rng(5);
    Eigen::MatrixXd v(30, 3);
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = rng.normal(0.5, 6.0);
    const Panel p(TimeGrid(YearMonth(1995, 7), 30), {"A", "B", "C"}, v);
    const Panel back = read_wide_csv(to_wide_csv(p));
    EXPECT_EQ(back.labels(), p.labels());
    EXPECT_EQ(back.grid(), p.grid());
    EXPECT_EQ(back.values(), p.values());
}

TEST(WideCsv, AcceptsShuffledRowsAndCrlf) {
    const Panel sorted = read_wide_csv("date,a\n2000-01,1\n2000-02,2\n2000-03,3\n");
    const Panel shuffled = read_wide_csv("date,a\r\n2000-03,3\r\n2000-01,1\r\n2000-02,2\r\n");
    EXPECT_EQ(sorted.values(), shuffled.values());
    EXPECT_EQ(shuffled.grid().start(), YearMonth(2000, 1));
}

TEST(WideCsv, BlankCellIsAGapNamingLineAndSeries) {
    try {
        (void)read_wide_csv("date,a,b\n2000-01,1,2\n2000-02,,2\n", "r.csv");
        FAIL() << "expected GapError";
    } catch (const GapError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("r.csv:3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("'a'"), std::string::npos) << msg;
        EXPECT_NE(msg.find("2000-02"), std::string::npos) << msg;
    }
}

TEST(WideCsv, MissingMonthIsAGap) {
    EXPECT_THROW((void)read_wide_csv("date,a\n2000-01,1\n2000-03,2\n"), GapError);
}

TEST(WideCsv, MalformedInputIsAParseError) {
    EXPECT_THROW((void)read_wide_csv("when,a\n2000-01,1\n"), ParseError);
    EXPECT_THROW((void)read_wide_csv("date,a\n2000-1,1\n"), ParseError);
    EXPECT_THROW((void)read_wide_csv("date,a\n2000-01,abc\n"), ParseError);
    EXPECT_THROW((void)read_wide_csv("date,a\n2000-01,1,2\n"), ParseError);
    EXPECT_THROW((void)read_wide_csv("date,a\n2000-01,1\n2000-01,2\n"), ParseError);
    EXPECT_THROW((void)read_wide_csv("date,a,a\n2000-01,1,2\n"), ParseError);
    EXPECT_THROW((void)read_wide_csv("date,a\n"), ParseError);
}

TEST(WideCsv, ReturnAtOrBelowMinus100IsRejected) {
    EXPECT_THROW((void)read_wide_csv("date,a\n2000-01,-100\n"), ValidationError);
}

TEST(LongCsv, RowOrderDoesNotChangeSeries) {
    Rng rng(9);
    std::vector<ReturnSeries> series;
    for (const char* name : {"X", "Y", "Z"}) {
        Eigen::VectorXd v(24);
        for (auto& x : v) x = rng.normal(1.0, 3.0);
        series.push_back(testing_support::make_series(v, name, YearMonth(2003, 5)));
    }
    const std::string text = to_long_csv(series);
    auto lines = lines_of(text);
    std::vector<std::string> body(lines.begin() + 1, lines.end());
    std::reverse(body.begin(), body.end());
    std::rotate(body.begin(), body.begin() + 17, body.end());
    body.insert(body.begin(), lines.front());

    const auto a = read_long_csv(text);
    const auto b = read_long_csv(join(body));
    ASSERT_EQ(a.size(), 3u);
    ASSERT_EQ(b.size(), 3u);
    std::map<std::string, Eigen::VectorXd> by_label;
    for (const auto& s : b) by_label[s.label()] = s.values();
    for (const auto& s : a) {
        EXPECT_EQ(s.values(), series[static_cast<std::size_t>(&s - a.data())].values());
        EXPECT_EQ(by_label.at(s.label()), s.values());
    }
}

TEST(LongCsv, DuplicatesAndGapsAreRejected) {
    EXPECT_THROW((void)read_long_csv("date,series,value\n2000-01,a,1\n2000-01,a,2\n"), ParseError);
    EXPECT_THROW((void)read_long_csv("date,series,value\n2000-01,a,1\n2000-03,a,2\n"), GapError);
    EXPECT_THROW((void)read_long_csv("date,series,value\n2000-01,a,\n"), GapError);
}

TEST(ConstituentsCsv, ParsesRecords) {
    const auto recs = read_constituents_csv("date,id,return,market_cap\n2001-02,R1,1.5,200\n2001-02,R2,-3,50.5\n");
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[1].id, "R2");
    EXPECT_DOUBLE_EQ(recs[1].return_pct, -3.0);
    EXPECT_DOUBLE_EQ(recs[1].market_cap, 50.5);
    EXPECT_EQ(recs[0].month, YearMonth(2001, 2));
    EXPECT_THROW((void)read_constituents_csv("date,id,ret,cap\n"), ParseError);
}

TEST(Format, FullPrecisionRoundTripsAndFixedAvoidsNegativeZero) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456.789}) EXPECT_EQ(std::stod(format_full(v)), v);
    EXPECT_EQ(format_full(std::nan("")), "NA");
    EXPECT_EQ(format_fixed(-0.0001), "0.000");
    EXPECT_EQ(format_fixed(2.0, 0), "2");
    EXPECT_EQ(format_fixed(-1.23456, 2), "-1.23");
}

TEST(Table, TextAlignsNumbersAndCountsPrintWithoutDecimals) {
    Table t("demo", {"name", "n", "value"});
    t.add_row({Table::str("alpha"), Table::count(12), Table::num(1.5)});
    t.add_row({Table::str("b"), Table::count(3), Table::num(-10.25)});
    const auto lines = lines_of(t.to_text(2));
    ASSERT_EQ(lines.size(), 7u);
    EXPECT_EQ(lines[2], "name    n   value");
    EXPECT_EQ(lines[4], "alpha  12    1.50");
    EXPECT_EQ(lines[5], "b       3  -10.25");
    EXPECT_EQ(t.to_csv(), "name,n,value\nalpha,12,1.5\nb,3,-10.25\n");
    EXPECT_THROW(t.add_row({Table::str("short")}), ValidationError);
}

TEST(Files, WriteCreatesDirectories) {
    const auto dir = std::filesystem::temp_directory_path() / "rerisk_io_test";
    std::filesystem::remove_all(dir);
    const std::string path = (dir / "a" / "b.txt").string();
    write_text_file(path, "hello\n");
    EXPECT_EQ(read_text_file(path), "hello\n");
    std::filesystem::remove_all(dir);
    EXPECT_THROW((void)read_text_file(path), ValidationError);
}
