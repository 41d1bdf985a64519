#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scriptid/image.hpp"

namespace scriptid {

enum class Connectivity { Four = 4, Eight = 8 };

/// Global threshold maximising the between-class variance of the 256-bin
/// histogram. Ties resolve to the smallest level. A single-intensity image
/// returns that intensity.
int otsu_threshold(const GrayImage& img);

/// Ink is dark: intensity <= t becomes 1.
BinaryImage binarize(const GrayImage& img, int t);

struct Centroid {
  double row = 0.0;
  double col = 0.0;
};

struct ComponentStats {
  int id = 0;  // 1-based label
  std::size_t area = 0;
  Box bbox;
  Centroid centroid;
  // Second central moments of pixel coordinates, each including the 1/12
  // variance of a unit pixel.
  double mu_rr = 0.0;
  double mu_cc = 0.0;
  double mu_rc = 0.0;
  double major_axis_len = 0.0;
  double minor_axis_len = 0.0;
};

struct Labeling {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;  // 0 = background, else ComponentStats::id
  std::vector<ComponentStats> components;

  std::int32_t at(int r, int c) const { return labels[static_cast<std::size_t>(r) * width + c]; }
};

/// Components of the 1-pixels, numbered from 1 in raster-scan discovery order.
Labeling connected_components(const BinaryImage& img, Connectivity conn = Connectivity::Eight);

/// Minor axis over major axis of the equivalent ellipse. This is the plain
/// axis ratio, not the conic eccentricity sqrt(1 - (b/a)^2).
double component_eccentricity(const ComponentStats& c);

/// Area over bounding-box area.
double component_extent(const ComponentStats& c);

inline constexpr std::size_t kDefaultMinArea = 15;

/// Drops every component (8-connected) smaller than `min_area` pixels.
BinaryImage remove_small_objects(const BinaryImage& img, std::size_t min_area = kDefaultMinArea);

}  // namespace scriptid
