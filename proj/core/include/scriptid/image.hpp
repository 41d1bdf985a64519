#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace scriptid {

/// Inclusive pixel rectangle, rows then columns.
struct Box {
  int row_min = 0;
  int col_min = 0;
  int row_max = -1;
  int col_max = -1;

  int height() const { return row_max - row_min + 1; }
  int width() const { return col_max - col_min + 1; }
  bool empty() const { return row_max < row_min || col_max < col_min; }
  bool contains(int r, int c) const {
    return r >= row_min && r <= row_max && c >= col_min && c <= col_max;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

namespace detail {

// Row-major 8-bit raster. The tag keeps gray and bilevel images apart at the
// type level even though both store one byte per pixel.
template <class Tag>
class Raster {
 public:
  Raster(int width, int height, std::uint8_t fill = 0) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 Tag::sanitize(fill));
  }

  Raster(int width, int height, std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw std::invalid_argument("pixel buffer size does not match dimensions");
    for (auto v : data_)
      if (!Tag::valid(v)) throw std::invalid_argument("pixel value out of range for image kind");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  bool in_bounds(int r, int c) const { return r >= 0 && r < height_ && c >= 0 && c < width_; }

  std::uint8_t operator()(int r, int c) const { return data_[index(r, c)]; }
  void set(int r, int c, std::uint8_t v) { data_[index(r, c)] = Tag::sanitize(v); }

  std::span<const std::uint8_t> pixels() const { return data_; }
  std::span<const std::uint8_t> row(int r) const {
    return std::span<const std::uint8_t>(data_).subspan(index(r, 0), static_cast<std::size_t>(width_));
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

struct GrayTag {
  static constexpr bool valid(std::uint8_t) { return true; }
  static constexpr std::uint8_t sanitize(std::uint8_t v) { return v; }
};

struct BinaryTag {
  static constexpr bool valid(std::uint8_t v) { return v <= 1; }
  static constexpr std::uint8_t sanitize(std::uint8_t v) { return v != 0 ? 1 : 0; }
};

}  // namespace detail

/// 8-bit grayscale, 0 = black, 255 = white.
using GrayImage = detail::Raster<detail::GrayTag>;

/// Bilevel labels: 1 = object (ink), 0 = background.
using BinaryImage = detail::Raster<detail::BinaryTag>;

std::size_t count_on(const BinaryImage& img);

/// Bounding box of all object pixels; empty Box when the image has no ink.
Box ink_bounds(const BinaryImage& img);

/// Copies `box` (which must lie inside the image) into a new image.
BinaryImage crop(const BinaryImage& img, const Box& box);

BinaryImage transpose(const BinaryImage& img);

/// Nearest-neighbour integer upscaling.
BinaryImage upscale(const BinaryImage& img, int factor);

/// Adds a background frame of `margin` pixels on every side.
BinaryImage pad(const BinaryImage& img, int margin);

}  // namespace scriptid
