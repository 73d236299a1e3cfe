#include <sstream>

#include "doctest.h"
#include "trackscore/errors.hpp"
#include "trackscore/path_io.hpp"

using namespace trackscore;

namespace {

int parse_error_line(const std::string& text) {
  std::istringstream is(text);
  try {
    read_series_csv(is);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

}  // namespace

TEST_CASE("long-format CSV with timestamps") {
  std::istringstream is(
      "series_id,t,x1,x2\n"
      "b,0,0,0\n"
      "a,0.5,1,1\n"
      "b,1,1,0\n"
      "a,1.5,2,3\n"
      "b,2,1,1\n");
  const auto series = read_series_csv(is);
  REQUIRE(series.size() == 2);
  CHECK(series[0].id == "b");
  CHECK(series[1].id == "a");
  CHECK(series[0].path.size() == 3);
  CHECK(series[0].path.dimension() == 2);
  CHECK(*series[1].path.times() == std::vector<double>{0.5, 1.5});
  CHECK(series[1].path.increment(0) == std::vector<double>{1, 2});
}

TEST_CASE("CSV without a time column") {
  std::istringstream is("series_id,x\ns,1\ns,4\r\ns,2\n\n");
  const auto series = read_series_csv(is);
  REQUIRE(series.size() == 1);
  CHECK_FALSE(series[0].path.has_times());
  CHECK(series[0].path.size() == 3);
}

TEST_CASE("CSV errors carry line numbers") {
  CHECK(parse_error_line("") == 0);
  CHECK(parse_error_line("id,t,x\na,0,1\n") == 1);
  CHECK(parse_error_line("series_id,t\n") == 1);
  CHECK(parse_error_line("series_id,t,x\na,0,1\na,1\n") == 3);
  CHECK(parse_error_line("series_id,t,x\na,0,1\na,1,zz\n") == 3);
  CHECK(parse_error_line("series_id,t,x\na,0,1\nb,0,1\na,0,2\n") == 4);
  CHECK(parse_error_line("series_id,t,x\n") == 1);
  CHECK(parse_error_line("series_id,t,x\n,0,1\n") == 2);
}

TEST_CASE("write then read round-trips") {
  std::vector<NamedSeries> series{
      {"first", PiecewiseLinearPath(2, {0.1, 0.2, 1.0 / 3.0, -7.0}, std::vector<double>{0, 0.01})},
      {"second", PiecewiseLinearPath(2, {5, 6}, std::vector<double>{3})},
  };
  std::stringstream ss;
  write_series_csv(ss, series);
  const auto back = read_series_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "first");
  CHECK(back[0].path == series[0].path);
  CHECK(back[1].path == series[1].path);

  std::ostringstream untimed;
  write_series_csv(untimed, {{"u", PiecewiseLinearPath(2, {1, 2})}, series[1]});
  CHECK(untimed.str() == "series_id,x1,x2\nu,1,2\nsecond,5,6\n");
}
