#include "scriptid/segmentation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scriptid/morphology.hpp"

namespace scriptid {

std::vector<int> horizontal_projection(const BinaryImage& img) {
  std::vector<int> proj(static_cast<std::size_t>(img.height()), 0);
  for (int r = 0; r < img.height(); ++r)
    for (auto v : img.row(r)) proj[r] += v;
  return proj;
}

std::vector<int> vertical_projection(const BinaryImage& img) {
  std::vector<int> proj(static_cast<std::size_t>(img.width()), 0);
  for (int r = 0; r < img.height(); ++r) {
    const auto row = img.row(r);
    for (int c = 0; c < img.width(); ++c) proj[c] += row[c];
  }
  return proj;
}

std::vector<LineBand> segment_lines(const BinaryImage& page, const SegmentationParams& params) {
  const auto proj = horizontal_projection(page);
  std::vector<LineBand> bands;
  const int h = page.height();
  int r = 0;
  while (r < h) {
    if (proj[r] <= params.tau_line) {
      ++r;
      continue;
    }
    const int start = r;
    while (r < h && proj[r] > params.tau_line) ++r;
    const LineBand band{start, r - 1};
    if (band.height() >= params.min_line_height) bands.push_back(band);
  }
  return bands;
}

int word_gap_min(int line_height, const SegmentationParams& params) {
  const int scaled = static_cast<int>(std::floor(params.gap_ratio * line_height + 0.5));
  return std::max(params.gap_floor, scaled);
}

std::vector<WordBox> segment_words(const BinaryImage& page, const LineBand& line,
                                   const SegmentationParams& params) {
  if (line.row_start < 0 || line.row_end >= page.height() || line.row_start > line.row_end)
    throw std::out_of_range("line band outside page");
  std::vector<int> proj(static_cast<std::size_t>(page.width()), 0);
  for (int r = line.row_start; r <= line.row_end; ++r) {
    const auto row = page.row(r);
    for (int c = 0; c < page.width(); ++c) proj[c] += row[c];
  }

  const int gap_min = word_gap_min(line.height(), params);
  std::vector<WordBox> words;
  const int w = page.width();
  int c = 0;
  int word_start = -1;
  int last_ink = -1;
  while (c < w) {
    if (proj[c] > params.tau_word) {
      if (word_start < 0) word_start = c;
      last_ink = c;
      ++c;
      continue;
    }
    const int gap_start = c;
    while (c < w && proj[c] <= params.tau_word) ++c;
    const bool at_edge = c == w;
    if (word_start >= 0 && (at_edge || c - gap_start >= gap_min)) {
      words.push_back(WordBox{line, word_start, last_ink});
      word_start = -1;
    }
  }
  if (word_start >= 0) words.push_back(WordBox{line, word_start, last_ink});
  return words;
}

BinaryImage rotate(const BinaryImage& img, double angle_deg) {
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double s = std::sin(a);
  const double co = std::cos(a);
  const double rc = (img.height() - 1) / 2.0;
  const double cc = (img.width() - 1) / 2.0;
  BinaryImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const double dr = r - rc;
      const double dc = c - cc;
      // Inverse map: where does the output pixel come from in the source.
      const double sr = rc + dc * s + dr * co;
      const double sc = cc + dc * co - dr * s;
      const int ir = static_cast<int>(std::lround(sr));
      const int ic = static_cast<int>(std::lround(sc));
      if (img.in_bounds(ir, ic) && img(ir, ic)) out.set(r, c, 1);
    }
  }
  return out;
}

double estimate_skew(const BinaryImage& page, const DeskewParams& params) {
  if (params.step_deg <= 0.0 || params.max_angle_deg < 0.0) throw std::invalid_argument("bad deskew range");
  if (params.dilate_length < 1) throw std::invalid_argument("deskew dilation length must be >= 1");

  // Even lengths are allowed here, so the bar is built from raw offsets with
  // the extra pixel below the centre.
  std::vector<Offset> bar;
  const int up = (params.dilate_length - 1) / 2;
  for (int k = -up; k < params.dilate_length - up; ++k) bar.push_back({k, 0});
  const BinaryImage smeared = dilate(page, StructuringElement(std::move(bar)));
  const Labeling lab = connected_components(smeared, Connectivity::Eight);

  std::vector<char> keep(lab.components.size() + 1, 0);
  std::size_t kept = 0;
  for (const auto& comp : lab.components)
    if (comp.area >= params.min_area) {
      keep[static_cast<std::size_t>(comp.id)] = 1;
      ++kept;
    }
  if (kept < 2) return 0.0;
  std::vector<Centroid> points;
  for (int r = 0; r < smeared.height(); ++r)
    for (int c = 0; c < smeared.width(); ++c)
      if (keep[static_cast<std::size_t>(lab.at(r, c))]) points.push_back({static_cast<double>(r), static_cast<double>(c)});

  // Integer pivot: at angle 0 every pixel lands on a single bin.
  const double rc = page.height() / 2;
  const double cc = page.width() / 2;
  const int diag = static_cast<int>(std::ceil(std::hypot(page.width(), page.height()))) + 2;
  std::vector<double> hist(static_cast<std::size_t>(2 * diag + 1));

  const int steps = static_cast<int>(std::floor(params.max_angle_deg / params.step_deg + 1e-9));
  double best_angle = 0.0;
  double best_score = -1.0;
  for (int i = -steps; i <= steps; ++i) {
    const double angle = i * params.step_deg;
    const double a = angle * std::numbers::pi / 180.0;
    const double s = std::sin(a);
    const double co = std::cos(a);
    std::fill(hist.begin(), hist.end(), 0.0);
    // Row of each kept pixel once the page is turned back by `angle`, spread
    // linearly over the two nearest bins so the score varies smoothly.
    for (const auto& p : points) {
      const double y = (p.col - cc) * s + (p.row - rc) * co + diag;
      const double base = std::floor(y);
      const double frac = y - base;
      const auto b = static_cast<std::size_t>(base);
      hist[b] += 1.0 - frac;
      hist[b + 1] += frac;
    }
    double score = 0.0;
    for (std::size_t b = 1; b < hist.size(); ++b) score += (hist[b] - hist[b - 1]) * (hist[b] - hist[b - 1]);
    const bool better = score > best_score + 1e-9 ||
                        (std::abs(score - best_score) <= 1e-9 && std::abs(angle) < std::abs(best_angle));
    if (better) {
      best_score = score;
      best_angle = angle;
    }
  }
  return std::round(best_angle * 1e6) / 1e6;
}

DeskewResult deskew(const BinaryImage& page, const DeskewParams& params) {
  const double angle = estimate_skew(page, params);
  if (angle == 0.0) return DeskewResult{page, 0.0};
  return DeskewResult{rotate(page, -angle), angle};
}

}  // namespace scriptid
