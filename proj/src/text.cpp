#include "text.hpp"

#include <charconv>
#include <limits>
#include <system_error>

#include "trajmap/error.hpp"
#include "trajmap/formats.hpp"

namespace trajmap::detail {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::vector<Line> lines_of(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = trim(text.substr(pos, end - pos));
    ++number;
    pos = end + 1;
    if (raw.empty()) continue;
    Line l;
    l.number = number;
    if (raw.front() == '#') {
      l.header = true;
      raw = trim(raw.substr(1));
    }
    l.fields = split(raw);
    out.push_back(std::move(l));
  }
  return out;
}

void fail(const Line& l, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(l.number) + ": " + what);
}

double real_at(const Line& l, std::size_t i) {
  if (i >= l.fields.size()) fail(l, "missing field " + std::to_string(i + 1));
  const auto v = parse_real(l.fields[i]);
  if (!v) fail(l, "field " + std::to_string(i + 1) + " is not a number: '" + std::string(l.fields[i]) + "'");
  return *v;
}

std::int64_t int_at(const Line& l, std::size_t i) {
  if (i >= l.fields.size()) fail(l, "missing field " + std::to_string(i + 1));
  const std::string_view f = l.fields[i];
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
    fail(l, "field " + std::to_string(i + 1) + " is not an integer: '" + std::string(f) + "'");
  }
  return v;
}

int id_at(const Line& l, std::size_t i) {
  const std::int64_t v = int_at(l, i);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(l, "id out of range");
  return static_cast<int>(v);
}

void expect_count(const Line& l, std::size_t n) {
  if (l.fields.size() != n) {
    fail(l, "expected " + std::to_string(n) + " fields, found " + std::to_string(l.fields.size()));
  }
}

GeoPoint geo_at(const Line& l, std::size_t i) {
  GeoPoint g{real_at(l, i), real_at(l, i + 1)};
  try {
    validate(g);
  } catch (const Error& e) {
    fail(l, e.what());
  }
  return g;
}

std::optional<PlanarPoint> optional_point(const Line& l, std::size_t i) {
  const bool ex = !l.fields[i].empty();
  const bool ey = !l.fields[i + 1].empty();
  if (ex != ey) fail(l, "position needs both x and y or neither");
  if (!ex) return std::nullopt;
  return PlanarPoint{real_at(l, i), real_at(l, i + 1)};
}

}  // namespace trajmap::detail
