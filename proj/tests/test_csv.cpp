#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "sketchls/csv.hpp"
#include "sketchls/error.hpp"
#include "sketchls/rng.hpp"

namespace sketchls {
namespace {

std::string parse_error(const std::string& text) {
    try {
        csv::parse(text, "t.csv");
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        return e.what();
    }
    ADD_FAILURE() << "no error for: " << text;
    return {};
}

TEST(CsvParse, HeaderAndValues) {
    const csv::Table t = csv::parse("a,b\n1,2.5\n-3e2, +4 \n");
    ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
    ASSERT_EQ(t.values.rows(), 2u);
    EXPECT_EQ(t.values(0, 1), 2.5);
    EXPECT_EQ(t.values(1, 0), -300.0);
    EXPECT_EQ(t.values(1, 1), 4.0);
}

TEST(CsvParse, QuotingCrlfAndBlankLines) {
    const csv::Table t = csv::parse("\"x, one\",\"say \"\"hi\"\"\"\r\n\"1\",2\r\n\r\n3,4");
    EXPECT_EQ(t.header[0], "x, one");
    EXPECT_EQ(t.header[1], "say \"hi\"");
    ASSERT_EQ(t.values.rows(), 2u);
    EXPECT_EQ(t.values(0, 0), 1.0);
    EXPECT_EQ(t.values(1, 1), 4.0);
}

TEST(CsvParse, HeaderOnlyGivesEmptyTable) {
    const csv::Table t = csv::parse("y\n");
    EXPECT_EQ(t.values.rows(), 0u);
    EXPECT_EQ(t.header.size(), 1u);
}

TEST(CsvParse, ErrorsNameLineAndColumn) {
    EXPECT_NE(parse_error("a,b\n1,2\n3,x\n").find("t.csv:3:2:"), std::string::npos);
    EXPECT_NE(parse_error("a,b\n1,2,3\n").find("t.csv:2:3:"), std::string::npos);
    EXPECT_NE(parse_error("a,b\n1\n").find("t.csv:2:2:"), std::string::npos);
    EXPECT_NE(parse_error("a\n\"1\n").find("unterminated"), std::string::npos);
    EXPECT_NE(parse_error("a\n1\"2\n").find("stray quote"), std::string::npos);
    EXPECT_NE(parse_error("a\n\"1\"2\n").find("after closing quote"), std::string::npos);
    EXPECT_NE(parse_error("a\r1\n").find("carriage return"), std::string::npos);
    EXPECT_NE(parse_error("a,b\n,1\n").find("t.csv:2:1:"), std::string::npos);
    EXPECT_NE(parse_error("a\nnan\n").find("non-finite"), std::string::npos);
    EXPECT_NE(parse_error("").find("header"), std::string::npos);
}

TEST(CsvFormat, SeventeenDigitsRoundTrip) {
    Rng rng(99);
    for (int k = 0; k < 2000; ++k) {
        const double v = std::ldexp(rng.normal(), static_cast<int>(rng.below(200)) - 100);
        const std::string s = csv::format_double(v);
        EXPECT_EQ(std::stod(s), v) << s;
    }
    EXPECT_EQ(csv::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(csv::format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(csv::format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(CsvRender, RoundTripsThroughParse) {
    Matrix m(3, 2);
    Rng rng(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) m(i, j) = rng.normal() * 1e-7;
    const csv::Table t = csv::parse(csv::render({"p,q", "r"}, m));
    EXPECT_EQ(t.header[0], "p,q");
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(t.values(i, j), m(i, j));
    EXPECT_THROW(csv::render({"only"}, m), Error);
}

TEST(CsvEscape, QuotesOnlyWhenNeeded) {
    EXPECT_EQ(csv::escape("plain"), "plain");
    EXPECT_EQ(csv::escape("a\"b"), "\"a\"\"b\"");
    EXPECT_EQ(csv::escape("l1\nl2"), "\"l1\nl2\"");
}

TEST(CsvFile, AtomicWriteAndRead) {
    const auto dir = std::filesystem::temp_directory_path() / "sketchls_csv_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "t.csv";
    csv::write_atomic(path, "v\n1\n");
    csv::write_atomic(path, "v\n2\n");
    EXPECT_FALSE(std::filesystem::exists(dir / "t.csv.tmp"));
    EXPECT_EQ(csv::read(path).values(0, 0), 2.0);
    try {
        csv::read(dir / "missing.csv");
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoError);
    }
    EXPECT_THROW(csv::write_atomic(dir / "no" / "such" / "x.csv", "v\n"), Error);
    std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace sketchls
