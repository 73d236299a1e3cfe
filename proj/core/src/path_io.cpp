#include "trackscore/path_io.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

#include "trackscore/errors.hpp"
#include "trackscore/tensor_io.hpp"

namespace trackscore {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("invalid number '" + std::string(field) + "'", line);
  }
  return value;
}

struct Group {
  std::string id;
  std::vector<double> coords;
  std::vector<double> times;
};

}  // namespace

std::vector<NamedSeries> read_series_csv(std::istream& is) {
  std::string raw;
  std::size_t line = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(is, raw)) {
    ++line;
    if (!trim(raw).empty()) {
      header_line = raw;
      header = split(trim(header_line));
      break;
    }
  }
  if (header.empty()) throw ParseError("empty input: no header line");
  if (header[0] != "series_id") throw ParseError("first column must be 'series_id'", line);
  const bool timed = header.size() > 1 && header[1] == "t";
  const std::size_t first_coord = timed ? 2 : 1;
  if (header.size() <= first_coord) throw ParseError("no coordinate columns", line);
  const std::size_t d = header.size() - first_coord;

  std::vector<Group> groups;
  std::map<std::string, std::size_t, std::less<>> index;
  while (std::getline(is, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    auto fields = split(trim(raw));
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line);
    }
    if (fields[0].empty()) throw ParseError("empty series_id", line);
    auto it = index.find(fields[0]);
    if (it == index.end()) {
      it = index.emplace(std::string(fields[0]), groups.size()).first;
      groups.push_back(Group{std::string(fields[0]), {}, {}});
    }
    Group& g = groups[it->second];
    if (timed) {
      const double t = parse_double(fields[1], line);
      if (!g.times.empty() && !(t > g.times.back())) {
        throw ParseError("timestamps of series '" + g.id + "' are not strictly increasing", line);
      }
      g.times.push_back(t);
    }
    for (std::size_t k = first_coord; k < fields.size(); ++k) g.coords.push_back(parse_double(fields[k], line));
  }
  if (groups.empty()) throw ParseError("no data rows", line);

  std::vector<NamedSeries> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    std::optional<std::vector<double>> times;
    if (timed) times = std::move(g.times);
    out.push_back(NamedSeries{g.id, PiecewiseLinearPath(d, std::move(g.coords), std::move(times))});
  }
  return out;
}

void write_series_csv(std::ostream& os, const std::vector<NamedSeries>& series) {
  if (series.empty()) throw DomainError("no series to write");
  const std::size_t d = series.front().path.dimension();
  bool timed = true;
  for (const auto& s : series) {
    if (s.path.dimension() != d) throw DimensionMismatch("series of mixed dimension");
    timed = timed && s.path.has_times();
  }
  os << "series_id";
  if (timed) os << ",t";
  for (std::size_t k = 1; k <= d; ++k) os << ",x" << k;
  os << '\n';
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.path.size(); ++i) {
      os << s.id;
      if (timed) os << ',' << format_double((*s.path.times())[i]);
      for (double c : s.path.point(i)) os << ',' << format_double(c);
      os << '\n';
    }
  }
}

}  // namespace trackscore
