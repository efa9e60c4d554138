#include <cmath>
#include <sstream>

#include "trajmap/error.hpp"
#include "trajmap/image.hpp"
#include "trajmap/roadmap.hpp"

namespace trajmap {

BinaryImage::BinaryImage(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw Error(ErrorKind::InvalidInput, "image dimensions must be positive");
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

std::size_t BinaryImage::count() const {
  std::size_t n = 0;
  for (auto v : pixels_) n += v;
  return n;
}

std::string encode_pgm(const BinaryImage& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.reserve(out.size() + img.pixels().size());
  for (auto v : img.pixels()) out.push_back(static_cast<char>(v ? 255 : 0));
  return out;
}

BinaryImage decode_pgm(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw Error(ErrorKind::Parse, "not a binary PGM (P5) image");
  auto next_int = [&]() {
    in >> std::ws;
    while (in.peek() == '#') {
      std::string comment;
      std::getline(in, comment);
      in >> std::ws;
    }
    int v = 0;
    if (!(in >> v)) throw Error(ErrorKind::Parse, "truncated PGM header");
    return v;
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) throw Error(ErrorKind::Parse, "unsupported PGM header");
  in.get();
  BinaryImage img(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int v = in.get();
      if (v == std::char_traits<char>::eof()) throw Error(ErrorKind::Parse, "truncated PGM pixel data");
      img.set(c, r, v != 0);
    }
  }
  return img;
}

PlanarPoint crop_pixel_center(const PlanarPoint& center, double heading, int size_px, int col, int row) {
  const double half = 0.5 * size_px;
  const double right_off = col + 0.5 - half;
  const double up_off = half - (row + 0.5);
  const PlanarPoint up{std::cos(heading), std::sin(heading)};
  const PlanarPoint right{std::sin(heading), -std::cos(heading)};
  return center + right_off * right + up_off * up;
}

BinaryImage rasterize_crop(const RoadMap& map, const PlanarPoint& center, double heading,
                           std::optional<std::span<const SegmentId>> route, int size_px) {
  if (size_px < 32 || size_px % 2 != 0) {
    throw Error(ErrorKind::InvalidInput, "crop size must be even and at least 32 pixels");
  }
  if (!std::isfinite(heading) || !is_finite(center)) {
    throw Error(ErrorKind::InvalidInput, "crop centre and heading must be finite");
  }
  std::vector<char> subset;
  if (route) {
    subset.assign(map.segments().size(), 0);
    for (const auto& id : *route)
      if (auto o = map.ordinal(id)) subset[*o] = 1;
  }
  BinaryImage img(size_px, size_px);
  for (int row = 0; row < size_px; ++row) {
    for (int col = 0; col < size_px; ++col) {
      const PlanarPoint p = crop_pixel_center(center, heading, size_px, col, row);
      if (map.near_road(p, kRoadHalfWidth, route ? &subset : nullptr)) img.set(col, row, true);
    }
  }
  return img;
}

}  // namespace trajmap
