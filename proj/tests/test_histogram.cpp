#include <doctest.h>

#include <sstream>

#include "tailfit/errors.hpp"
#include "tailfit/histogram.hpp"

using namespace tailfit;

namespace {

DegreeHistogram parse(const std::string& text) {
  std::istringstream in(text);
  return parse_histogram(in, "test");
}

}  // namespace

TEST_CASE("parses whitespace and comma separated rows") {
  const DegreeHistogram hist = parse("1 10\n2,20\n3\t30\n4 , 40\n");
  REQUIRE(hist.entries.size() == 4);
  CHECK(hist.entries[0] == DegreeHistogram::Entry{1, 10});
  CHECK(hist.entries[1] == DegreeHistogram::Entry{2, 20});
  CHECK(hist.entries[2] == DegreeHistogram::Entry{3, 30});
  CHECK(hist.entries[3] == DegreeHistogram::Entry{4, 40});
  CHECK(hist.total_count() == 100);
  CHECK(hist.source_label == "test");
}

TEST_CASE("skips comments and blank lines, tolerates CRLF") {
  const DegreeHistogram hist = parse("# header\r\n\r\n  \n1 5\r\n # indented comment\n2 6\r\n");
  REQUIRE(hist.entries.size() == 2);
  CHECK(hist.entries[0] == DegreeHistogram::Entry{1, 5});
  CHECK(hist.entries[1] == DegreeHistogram::Entry{2, 6});
}

TEST_CASE("merges duplicate degrees and sorts ascending") {
  const DegreeHistogram hist = parse("5 1\n2 3\n5 4\n1 2\n");
  REQUIRE(hist.entries.size() == 3);
  CHECK(hist.entries[0] == DegreeHistogram::Entry{1, 2});
  CHECK(hist.entries[1] == DegreeHistogram::Entry{2, 3});
  CHECK(hist.entries[2] == DegreeHistogram::Entry{5, 5});
}

TEST_CASE("zero counts are kept if some count is positive") {
  const DegreeHistogram hist = parse("1 0\n2 7\n");
  REQUIRE(hist.entries.size() == 2);
  CHECK(hist.entries[0].count == 0);
}

TEST_CASE("parse errors carry one-based line numbers") {
  auto expect_line = [](const std::string& text, std::size_t line) {
    try {
      parse(text);
      FAIL("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("1 2\nbogus\n", 2);
  expect_line("1 2\n3\n", 2);
  expect_line("# c\n1 2 3\n", 2);
  expect_line("1 2.5\n", 1);
  expect_line("1 -4\n", 1);
  expect_line("0 4\n", 1);
  expect_line("x 4\n", 1);
}

TEST_CASE("histograms with no mass are rejected") {
  CHECK_THROWS_AS(parse(""), EmptySupportError);
  CHECK_THROWS_AS(parse("# only comments\n"), EmptySupportError);
  CHECK_THROWS_AS(parse("1 0\n2 0\n"), EmptySupportError);
}

TEST_CASE("validate rejects hand-built inconsistencies") {
  DegreeHistogram hist;
  hist.entries = {{3, 1}, {2, 1}};
  CHECK_THROWS_AS(hist.validate(), InvalidParamsError);
  hist.entries = {{2, 1}, {2, 1}};
  CHECK_THROWS_AS(hist.validate(), InvalidParamsError);
  hist.entries = {{0, 1}};
  CHECK_THROWS_AS(hist.validate(), InvalidParamsError);
  hist.entries = {{1, -2}};
  CHECK_THROWS_AS(hist.validate(), InvalidParamsError);
}

TEST_CASE("load_histogram raises IoError for missing files") {
  CHECK_THROWS_AS(load_histogram("/nonexistent/path/degrees.hist"), IoError);
}
