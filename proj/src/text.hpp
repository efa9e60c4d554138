#ifndef TRAJMAP_SRC_TEXT_HPP
#define TRAJMAP_SRC_TEXT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajmap/geo.hpp"

// Tokenizer shared by the text format readers.

namespace trajmap::detail {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view line);

// One logical line of a document, already split into fields.
struct Line {
  std::size_t number = 0;
  bool header = false;  // came from a '#' line
  std::vector<std::string_view> fields;
};

std::vector<Line> lines_of(std::string_view text);

[[noreturn]] void fail(const Line& l, const std::string& what);
double real_at(const Line& l, std::size_t i);
std::int64_t int_at(const Line& l, std::size_t i);
int id_at(const Line& l, std::size_t i);
void expect_count(const Line& l, std::size_t n);
GeoPoint geo_at(const Line& l, std::size_t i);
std::optional<PlanarPoint> optional_point(const Line& l, std::size_t i);

}  // namespace trajmap::detail

#endif  // TRAJMAP_SRC_TEXT_HPP
