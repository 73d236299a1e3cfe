#include "trackscore/tensor_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

#include "trackscore/errors.hpp"

namespace trackscore {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError("invalid number '" + std::string(field) + "'", line);
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_tensor(std::ostream& os, const TruncatedTensor& t) {
  os << t.width() << ',' << t.depth() << '\n';
  for (std::size_t m = 0; m <= t.depth(); ++m) {
    auto lvl = t.level(m);
    for (std::size_t i = 0; i < lvl.size(); ++i) {
      if (i) os << ',';
      os << format_double(lvl[i]);
    }
    os << '\n';
  }
}

std::optional<TruncatedTensor> read_tensor(std::istream& is, std::size_t& line) {
  std::string header;
  do {
    if (!std::getline(is, header)) return std::nullopt;
    ++line;
  } while (trim(header).empty());

  auto fields = split_commas(trim(header));
  if (fields.size() != 2) throw ParseError("expected header 'width,depth'", line);
  const auto width = parse_number<std::size_t>(fields[0], line);
  const auto depth = parse_number<std::size_t>(fields[1], line);
  if (width == 0) throw ParseError("width must be positive", line);

  std::vector<double> coeffs;
  coeffs.reserve(total_size(width, depth));
  std::string row;
  for (std::size_t m = 0; m <= depth; ++m) {
    if (!std::getline(is, row)) throw ParseError("unexpected end of input in level " + std::to_string(m), line);
    ++line;
    auto values = split_commas(trim(row));
    if (values.size() != level_size(width, m)) {
      throw ParseError("level " + std::to_string(m) + " has " + std::to_string(values.size()) +
                           " values, expected " + std::to_string(level_size(width, m)),
                       line);
    }
    for (auto v : values) coeffs.push_back(parse_number<double>(v, line));
  }
  return TruncatedTensor(width, depth, std::move(coeffs));
}

std::vector<TruncatedTensor> read_tensors(std::istream& is) {
  std::vector<TruncatedTensor> out;
  std::size_t line = 0;
  while (auto t = read_tensor(is, line)) out.push_back(std::move(*t));
  return out;
}

}  // namespace trackscore
