#ifndef TRAJMAP_IMAGE_HPP
#define TRAJMAP_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace trajmap {

/// Row-major binary image; every pixel is 0 or 1. Row 0 is the top row.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t at(int col, int row) const { return pixels_[index(col, row)]; }
  void set(int col, int row, bool on) { pixels_[index(col, row)] = on ? 1 : 0; }
  bool contains(int col, int row) const { return col >= 0 && row >= 0 && col < width_ && row < height_; }

  std::size_t count() const;
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Binary PGM (P5, maxval 255): set pixels become 255.
std::string encode_pgm(const BinaryImage& img);
/// Accepts P5 with any maxval; non-zero pixels are set.
BinaryImage decode_pgm(const std::string& bytes);

}  // namespace trajmap

#endif  // TRAJMAP_IMAGE_HPP
