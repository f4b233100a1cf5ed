#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cleanwords {

// Pixel box with exclusive right/bottom edges.
struct Box {
  int left = 0;
  int top = 0;
  int right = 0;
  int bottom = 0;

  int width() const { return right - left; }
  int height() const { return bottom - top; }
  bool valid() const { return left < right && top < bottom; }
  bool contains(const Box& o) const {
    return o.left >= left && o.top >= top && o.right <= right && o.bottom <= bottom;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

// 8-bit grayscale raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  bool contains(const Box& b) const {
    return b.valid() && b.left >= 0 && b.top >= 0 && b.right <= width_ && b.bottom <= height_;
  }
  // Pixel-exact copy of `b`; `b` must lie inside the image.
  GrayImage crop(const Box& b) const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Binary PGM (P5, maxval 255) or 8-bit grayscale PNG, chosen by file signature.
GrayImage load_image(const std::filesystem::path& path);
GrayImage decode_pgm(const std::string& bytes);

std::string encode_pgm(const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

}  // namespace cleanwords
