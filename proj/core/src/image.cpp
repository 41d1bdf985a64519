#include "scriptid/image.hpp"

#include <algorithm>

namespace scriptid {

std::size_t count_on(const BinaryImage& img) {
  const auto px = img.pixels();
  return static_cast<std::size_t>(std::count(px.begin(), px.end(), std::uint8_t{1}));
}

Box ink_bounds(const BinaryImage& img) {
  Box b{img.height(), img.width(), -1, -1};
  for (int r = 0; r < img.height(); ++r) {
    const auto row = img.row(r);
    for (int c = 0; c < img.width(); ++c) {
      if (!row[c]) continue;
      b.row_min = std::min(b.row_min, r);
      b.row_max = std::max(b.row_max, r);
      b.col_min = std::min(b.col_min, c);
      b.col_max = std::max(b.col_max, c);
    }
  }
  if (b.row_max < 0) return Box{};
  return b;
}

BinaryImage crop(const BinaryImage& img, const Box& box) {
  if (box.empty() || !img.in_bounds(box.row_min, box.col_min) || !img.in_bounds(box.row_max, box.col_max))
    throw std::out_of_range("crop box outside image");
  BinaryImage out(box.width(), box.height());
  for (int r = 0; r < box.height(); ++r)
    for (int c = 0; c < box.width(); ++c) out.set(r, c, img(box.row_min + r, box.col_min + c));
  return out;
}

BinaryImage transpose(const BinaryImage& img) {
  BinaryImage out(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) out.set(c, r, img(r, c));
  return out;
}

BinaryImage upscale(const BinaryImage& img, int factor) {
  if (factor < 1) throw std::invalid_argument("upscale factor must be >= 1");
  BinaryImage out(img.width() * factor, img.height() * factor);
  for (int r = 0; r < out.height(); ++r)
    for (int c = 0; c < out.width(); ++c) out.set(r, c, img(r / factor, c / factor));
  return out;
}

BinaryImage pad(const BinaryImage& img, int margin) {
  if (margin < 0) throw std::invalid_argument("negative padding");
  BinaryImage out(img.width() + 2 * margin, img.height() + 2 * margin);
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) out.set(r + margin, c + margin, img(r, c));
  return out;
}

}  // namespace scriptid
