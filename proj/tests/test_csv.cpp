#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stn/csv.hpp"
#include "testutil.hpp"

using namespace stn;
using testutil::error_message;

TEST_CASE("plain parsing") {
  CsvTable t = parse_csv("a,b,c\n1,2,3\n4,5,6\n");
  CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1] == std::vector<std::string>{"4", "5", "6"});
}

TEST_CASE("quoted fields with commas, quotes and newlines") {
  CsvTable t = parse_csv("name,note\n\"x,y\",\"say \"\"hi\"\"\"\n\"two\nlines\",plain\n");
  CHECK(t.rows[0][0] == "x,y");
  CHECK(t.rows[0][1] == "say \"hi\"");
  CHECK(t.rows[1][0] == "two\nlines");
  CHECK(t.rows[1][1] == "plain");
}

TEST_CASE("crlf and blank lines are tolerated") {
  CsvTable t = parse_csv("a,b\r\n1,2\r\n\r\n\n3,4\n");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == std::vector<std::string>{"1", "2"});
  CHECK(t.rows[1] == std::vector<std::string>{"3", "4"});
}

TEST_CASE("trailing empty field survives") {
  CsvTable t = parse_csv("a,b\n1,\n");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0] == std::vector<std::string>{"1", ""});
}

TEST_CASE("structural errors are input errors") {
  CHECK_THROWS_AS(parse_csv(""), InputError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), InputError);
  CHECK(error_message([] { parse_csv("a,b\n1,2,3\n", "bad.csv"); }).find("bad.csv") !=
        std::string::npos);
  CHECK_THROWS_AS(parse_csv("a,b\n\"unterminated\n"), InputError);
  CHECK_THROWS_AS(parse_csv("a,b\nx\"y,2\n"), InputError);
}

TEST_CASE("column lookup and requirements") {
  CsvTable t = parse_csv("alpha,beta\n1,2\n");
  CHECK(t.column("beta") == 1);
  CHECK(t.column("gamma") == -1);
  CHECK_NOTHROW(t.require_columns({"alpha", "beta"}, "test table"));
  std::string msg =
      error_message([&] { t.require_columns({"alpha", "gamma"}, "test table"); });
  CHECK(msg.find("gamma") != std::string::npos);
  CHECK(msg.find("test table") != std::string::npos);
}

TEST_CASE("serialization round-trips with quoting") {
  CsvTable t;
  t.header = {"k", "v"};
  t.rows = {{"plain", "with,comma"}, {"with\"quote", "with\nnewline"}};
  CsvTable again = parse_csv(t.to_string());
  CHECK(again == t);
}

TEST_CASE("escape only when needed") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("q\"q") == "\"q\"\"q\"");
  CHECK(csv_escape("nl\n") == "\"nl\n\"");
}
