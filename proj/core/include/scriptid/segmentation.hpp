#pragma once

#include <cstddef>
#include <vector>

#include "scriptid/image.hpp"
#include "scriptid/imaging.hpp"

namespace scriptid {

struct LineBand {
  int row_start = 0;
  int row_end = 0;  // inclusive
  int height() const { return row_end - row_start + 1; }
  friend bool operator==(const LineBand&, const LineBand&) = default;
};

struct WordBox {
  LineBand line;
  int col_start = 0;
  int col_end = 0;  // inclusive
  int width() const { return col_end - col_start + 1; }
  Box box() const { return Box{line.row_start, col_start, line.row_end, col_end}; }
  friend bool operator==(const WordBox&, const WordBox&) = default;
};

struct SegmentationParams {
  int tau_line = 0;         // rows with projection <= tau_line separate lines
  int tau_word = 0;         // columns with projection <= tau_word are gap columns
  int min_line_height = 5;  // shorter bands are dropped
  double gap_ratio = 0.2;   // word gap >= max(gap_floor, round(gap_ratio * line height))
  int gap_floor = 2;
};

struct DeskewParams {
  double max_angle_deg = 15.0;
  double step_deg = 0.1;
  int dilate_length = 10;  // vertical line dilation applied before labelling
  std::size_t min_area = kDefaultMinArea;
};

std::vector<int> horizontal_projection(const BinaryImage& img);
std::vector<int> vertical_projection(const BinaryImage& img);

std::vector<LineBand> segment_lines(const BinaryImage& page, const SegmentationParams& params = {});

/// Minimum blank-column run that separates two words on a line of this height.
int word_gap_min(int line_height, const SegmentationParams& params = {});

std::vector<WordBox> segment_words(const BinaryImage& page, const LineBand& line,
                                   const SegmentationParams& params = {});

/// Nearest-neighbour rotation about the image centre, same canvas size.
/// Positive angles turn the content counter-clockwise as displayed.
BinaryImage rotate(const BinaryImage& img, double angle_deg);

struct DeskewResult {
  BinaryImage image;
  double angle_deg = 0.0;  // estimated skew; `image` is the page turned by -angle
};

/// Estimates skew within +/-max_angle. The page is dilated with a vertical
/// bar and labelled; pixels of components of at least min_area are projected
/// onto rows at each candidate angle, and the angle whose profile has the
/// largest summed squared difference between neighbouring rows wins.
DeskewResult deskew(const BinaryImage& page, const DeskewParams& params = {});

double estimate_skew(const BinaryImage& page, const DeskewParams& params = {});

}  // namespace scriptid
