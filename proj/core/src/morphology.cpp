#include "scriptid/morphology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace scriptid {

StructuringElement::StructuringElement(std::vector<Offset> offsets) : offsets_(std::move(offsets)) {
  if (std::find(offsets_.begin(), offsets_.end(), Offset{0, 0}) == offsets_.end())
    throw std::invalid_argument("structuring element must contain the origin");
}

StructuringElement::StructuringElement(std::vector<Offset> offsets, int direction)
    : offsets_(std::move(offsets)), direction_(direction) {}

namespace {

Offset line_step(int direction_deg) {
  switch (direction_deg) {
    case 0: return {0, 1};
    case 45: return {-1, 1};
    case 90: return {1, 0};
    case 135: return {1, 1};
    default:
      throw std::invalid_argument("line direction must be 0, 45, 90 or 135 degrees, got " +
                                  std::to_string(direction_deg));
  }
}

template <class Fn>
void for_each_pixel_ordered(int h, int w, bool rows_down, bool cols_right, Fn&& fn) {
  for (int i = 0; i < h; ++i) {
    const int r = rows_down ? i : h - 1 - i;
    for (int j = 0; j < w; ++j) fn(r, cols_right ? j : w - 1 - j);
  }
}

// Scan order in which p - step is always visited before p.
struct ScanOrder {
  bool rows_down;
  bool cols_right;
};

ScanOrder order_following(Offset step) { return {step.dr >= 0, step.dc >= 0}; }

// Length of the run of ink ending at each pixel when walking along `step`.
std::vector<int> run_lengths(const BinaryImage& img, Offset step, ScanOrder order) {
  const int h = img.height();
  const int w = img.width();
  std::vector<int> run(img.size(), 0);
  for_each_pixel_ordered(h, w, order.rows_down, order.cols_right, [&](int r, int c) {
    if (!img(r, c)) return;
    const int pr = r - step.dr;
    const int pc = c - step.dc;
    const int prev = img.in_bounds(pr, pc) ? run[static_cast<std::size_t>(pr) * w + pc] : 0;
    run[static_cast<std::size_t>(r) * w + c] = prev + 1;
  });
  return run;
}

constexpr int kFar = std::numeric_limits<int>::max() / 2;

// Distance to the nearest ink pixel met by walking against `step` (0 on ink).
std::vector<int> ink_distance(const BinaryImage& img, Offset step, ScanOrder order) {
  const int h = img.height();
  const int w = img.width();
  std::vector<int> dist(img.size(), kFar);
  for_each_pixel_ordered(h, w, order.rows_down, order.cols_right, [&](int r, int c) {
    const std::size_t i = static_cast<std::size_t>(r) * w + c;
    if (img(r, c)) {
      dist[i] = 0;
      return;
    }
    const int pr = r - step.dr;
    const int pc = c - step.dc;
    if (img.in_bounds(pr, pc)) dist[i] = std::min(kFar, dist[static_cast<std::size_t>(pr) * w + pc] + 1);
  });
  return dist;
}

BinaryImage erode_line(const BinaryImage& img, int direction, int length) {
  const Offset step = line_step(direction);
  const Offset back{-step.dr, -step.dc};
  const int half = length / 2;
  const auto behind = run_lengths(img, step, order_following(step));
  const auto ahead = run_lengths(img, back, order_following(back));
  std::vector<std::uint8_t> out(img.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (behind[i] > half && ahead[i] > half) ? 1 : 0;
  return BinaryImage(img.width(), img.height(), std::move(out));
}

BinaryImage dilate_line(const BinaryImage& img, int direction, int length) {
  const Offset step = line_step(direction);
  const Offset back{-step.dr, -step.dc};
  const int half = length / 2;
  const auto behind = ink_distance(img, step, order_following(step));
  const auto ahead = ink_distance(img, back, order_following(back));
  std::vector<std::uint8_t> out(img.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(behind[i], ahead[i]) <= half ? 1 : 0;
  return BinaryImage(img.width(), img.height(), std::move(out));
}

BinaryImage erode_generic(const BinaryImage& img, const std::vector<Offset>& offsets) {
  BinaryImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      bool all = true;
      for (const auto& q : offsets) {
        const int rr = r + q.dr;
        const int cc = c + q.dc;
        if (!img.in_bounds(rr, cc) || !img(rr, cc)) {
          all = false;
          break;
        }
      }
      if (all) out.set(r, c, 1);
    }
  }
  return out;
}

BinaryImage dilate_generic(const BinaryImage& img, const std::vector<Offset>& offsets) {
  BinaryImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (!img(r, c)) continue;
      for (const auto& q : offsets) {
        const int rr = r + q.dr;
        const int cc = c + q.dc;
        if (out.in_bounds(rr, cc)) out.set(rr, cc, 1);
      }
    }
  }
  return out;
}

}  // namespace

StructuringElement line_se(int direction_deg, int length) {
  const Offset step = line_step(direction_deg);
  if (length < 1 || length % 2 == 0)
    throw std::invalid_argument("line length must be odd and positive, got " + std::to_string(length));
  const int half = length / 2;
  std::vector<Offset> offsets;
  offsets.reserve(static_cast<std::size_t>(length));
  // 45 degrees is listed from the lower-left end, matching the other
  // directions' negative-to-positive column order.
  for (int k = -half; k <= half; ++k) offsets.push_back({k * step.dr, k * step.dc});
  return StructuringElement(std::move(offsets), direction_deg);
}

BinaryImage erode(const BinaryImage& img, const StructuringElement& se) {
  if (se.is_line()) return erode_line(img, *se.direction(), se.length());
  return erode_generic(img, se.offsets());
}

BinaryImage dilate(const BinaryImage& img, const StructuringElement& se) {
  if (se.is_line()) return dilate_line(img, *se.direction(), se.length());
  return dilate_generic(img, se.offsets());
}

BinaryImage open(const BinaryImage& img, const StructuringElement& se) { return dilate(erode(img, se), se); }

BinaryImage complement(const BinaryImage& img) {
  std::vector<std::uint8_t> out(img.size());
  const auto px = img.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = px[i] ^ 1;
  return BinaryImage(img.width(), img.height(), std::move(out));
}

BinaryImage reconstruct_by_dilation(const MarkerMaskPair& pair, Connectivity conn) {
  return reconstruct_by_dilation(pair.marker, pair.mask, conn);
}

BinaryImage reconstruct_by_dilation(const BinaryImage& marker, const BinaryImage& mask, Connectivity conn) {
  if (marker.width() != mask.width() || marker.height() != mask.height())
    throw std::invalid_argument("marker and mask dimensions differ");
  {
    const auto mk = marker.pixels();
    const auto ms = mask.pixels();
    for (std::size_t i = 0; i < mk.size(); ++i)
      if (mk[i] > ms[i]) throw std::invalid_argument("marker is not contained in mask");
  }

  // Work on buffers framed by one background pixel so neighbour access needs
  // no bounds checks; the frame is outside the mask and never grows.
  const int w = mask.width();
  const int h = mask.height();
  const std::ptrdiff_t stride = w + 2;
  const std::size_t padded = static_cast<std::size_t>(stride) * static_cast<std::size_t>(h + 2);
  std::vector<std::uint8_t> out(padded, 0);
  std::vector<std::uint8_t> lim(padded, 0);
  for (int r = 0; r < h; ++r) {
    const auto mk = marker.row(r);
    const auto ms = mask.row(r);
    const std::size_t base = static_cast<std::size_t>(r + 1) * stride + 1;
    std::copy(mk.begin(), mk.end(), out.begin() + static_cast<std::ptrdiff_t>(base));
    std::copy(ms.begin(), ms.end(), lim.begin() + static_cast<std::ptrdiff_t>(base));
  }

  // Causal half-neighbourhood for the raster pass; the anti-raster pass uses
  // the mirrored set.
  std::vector<std::ptrdiff_t> causal;
  if (conn == Connectivity::Eight)
    causal = {-stride - 1, -stride, -stride + 1, -1};
  else
    causal = {-stride, -1};
  std::vector<std::ptrdiff_t> anticausal;
  for (auto d : causal) anticausal.push_back(-d);

  auto idx = [&](int r, int c) { return static_cast<std::ptrdiff_t>(r + 1) * stride + (c + 1); };

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const auto p = idx(r, c);
      if (out[p] || !lim[p]) continue;
      for (auto d : causal) {
        if (out[p + d]) {
          out[p] = 1;
          break;
        }
      }
    }
  }

  std::deque<std::ptrdiff_t> fifo;
  for (int r = h - 1; r >= 0; --r) {
    for (int c = w - 1; c >= 0; --c) {
      const auto p = idx(r, c);
      if (!out[p] && lim[p]) {
        for (auto d : anticausal) {
          if (out[p + d]) {
            out[p] = 1;
            break;
          }
        }
      }
      if (!out[p]) continue;
      // Seed the queue wherever an anti-causal neighbour can still grow.
      for (auto d : anticausal) {
        if (!out[p + d] && lim[p + d]) {
          fifo.push_back(p);
          break;
        }
      }
    }
  }

  std::vector<std::ptrdiff_t> full(causal);
  full.insert(full.end(), anticausal.begin(), anticausal.end());
  while (!fifo.empty()) {
    const auto p = fifo.front();
    fifo.pop_front();
    for (auto d : full) {
      const auto q = p + d;
      if (!out[q] && lim[q]) {
        out[q] = 1;
        fifo.push_back(q);
      }
    }
  }

  std::vector<std::uint8_t> result(mask.size());
  for (int r = 0; r < h; ++r)
    std::copy_n(out.begin() + idx(r, 0), w, result.begin() + static_cast<std::ptrdiff_t>(r) * w);
  return BinaryImage(w, h, std::move(result));
}

BinaryImage opening_by_reconstruction(const BinaryImage& img, const StructuringElement& se) {
  return reconstruct_by_dilation(erode(img, se), img, Connectivity::Eight);
}

BinaryImage fill_holes(const BinaryImage& img) {
  const int w = img.width();
  const int h = img.height();
  BinaryImage marker(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const bool border = r == 0 || c == 0 || r == h - 1 || c == w - 1;
      if (border) marker.set(r, c, img(r, c) ^ 1);
    }
  }
  return complement(reconstruct_by_dilation(marker, complement(img), Connectivity::Four));
}

}  // namespace scriptid
