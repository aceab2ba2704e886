#include <gtest/gtest.h>

#include "rerisk/config.hpp"
#include "rerisk/error.hpp"

using namespace rerisk;

TEST(Config, SectionsTagsAndTypedGetters) {
    const Config cfg = Config::parse(R"(top = 1
# comment
[risk]
fractiles = 0.95, 0.99
bases = raw , residual
workers = 4
flag = yes

[panel reits]
series = A,B
; another comment
)",
                                     "t.ini");
    ASSERT_EQ(cfg.sections().size(), 3u);
    EXPECT_EQ(cfg.sections()[0].get("top"), "1");
    const auto* risk = cfg.find("risk");
    ASSERT_NE(risk, nullptr);
    EXPECT_EQ(risk->get_doubles("fractiles"), (std::vector<double>{0.95, 0.99}));
    EXPECT_EQ(risk->get_list("bases"), (std::vector<std::string>{"raw", "residual"}));
    EXPECT_EQ(risk->get_int("workers"), 4);
    EXPECT_TRUE(risk->get_bool_or("flag", false));
    EXPECT_EQ(risk->get_int_or("missing", 7), 7);
    EXPECT_EQ(risk->get_u64_or("workers", 0), 4u);
    const auto* panel = cfg.find("panel", "reits");
    ASSERT_NE(panel, nullptr);
    EXPECT_EQ(panel->line, 9);
    EXPECT_EQ(cfg.all("panel").size(), 1u);
    EXPECT_EQ(cfg.find("panel"), nullptr);
}

TEST(Config, ParseErrorsCarryTheLine) {
    const auto expect_line = [](const char* text, const char* where) {
        try {
            (void)Config::parse(text, "c.ini");
            ADD_FAILURE() << "no error for: " << text;
        } catch (const ParseError& e) {
            EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
        }
    };
    expect_line("[a]\nx = 1\nnot a pair\n", "c.ini:3");
    expect_line("[a\n", "c.ini:1");
    expect_line("[a]\nx = 1\nx = 2\n", "c.ini:3");
    expect_line("[a]\n[a]\n", "c.ini:2");
    expect_line("= 3\n", "c.ini:1");
}

TEST(Config, TypedGetterErrorsAreValidationErrors) {
    const Config cfg = Config::parse("[s]\nn = ten\nxs = 1, two\nb = maybe\n");
    const auto& s = *cfg.find("s");
    EXPECT_THROW((void)s.get_int("n"), ValidationError);
    EXPECT_THROW((void)s.get_doubles("xs"), ValidationError);
    EXPECT_THROW((void)s.get_bool_or("b", true), ValidationError);
    EXPECT_THROW((void)s.get("absent"), ValidationError);
}

TEST(Config, StrictNumberParsing) {
    EXPECT_EQ(parse_double(" 2.5 "), 2.5);
    EXPECT_FALSE(parse_double("2.5x"));
    EXPECT_FALSE(parse_double(""));
    EXPECT_EQ(parse_int("-12"), -12);
    EXPECT_FALSE(parse_int("1.0"));
    EXPECT_EQ(trim("  a b \t"), "a b");
    EXPECT_EQ(split("a,,b", ',').size(), 3u);
}
