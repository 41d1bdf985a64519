#pragma once

// Slow, direct implementations used only to check the library.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scriptid/classifier.hpp"
#include "scriptid/image.hpp"
#include "scriptid/imaging.hpp"
#include "scriptid/morphology.hpp"

namespace oracle {

using scriptid::BinaryImage;
using scriptid::GrayImage;

BinaryImage random_binary(std::mt19937_64& rng, int width, int height, double density);
GrayImage random_gray(std::mt19937_64& rng, int width, int height);
// A few flat intensity levels with a little noise, as on scanned paper.
GrayImage structured_gray(std::mt19937_64& rng, int width, int height);
// Sprinkles `count` random filled rectangles and discs.
BinaryImage random_blobs(std::mt19937_64& rng, int width, int height, int count);

// Scans all 256 thresholds; between-class variance from raw pixel sums.
int otsu(const GrayImage& img);

struct Region {
  std::size_t area = 0;
  int row_min = 0, col_min = 0, row_max = 0, col_max = 0;
  double mean_r = 0.0, mean_c = 0.0;
  double mu_rr = 0.0, mu_cc = 0.0, mu_rc = 0.0;  // central moments + 1/12
};

struct FloodLabels {
  std::vector<int> labels;  // row-major, 0 = background
  std::vector<Region> regions;  // regions[i] has label i + 1
};

// Depth-first flood fill started at each unlabelled pixel in raster order.
FloodLabels flood_fill(const BinaryImage& img, int connectivity);

// Minor/major axis ratio from the eigenvalues of the moment matrix.
double axis_ratio(const Region& r);

BinaryImage erode(const BinaryImage& img, const std::vector<scriptid::Offset>& se);
BinaryImage dilate(const BinaryImage& img, const std::vector<scriptid::Offset>& se);

// Geodesic dilation by the unit neighbourhood, repeated until nothing changes.
BinaryImage reconstruct(const BinaryImage& marker, const BinaryImage& mask, int connectivity);

// Union of the 8-connected components of img that keep a pixel after erosion.
BinaryImage opening_by_reconstruction(const BinaryImage& img, const std::vector<scriptid::Offset>& se);

// Background pixels 4-connected to the border stay background, everything else becomes ink.
BinaryImage fill_holes(const BinaryImage& img);

// True when every 4-connected background component touches the border.
bool background_touches_border(const BinaryImage& img);

struct KnnAnswer {
  std::string label;
  std::vector<std::size_t> neighbours;
};

// Sorts every sample by (distance, index), votes, then breaks ties by summed
// distance and label.
KnnAnswer knn(const std::vector<scriptid::Sample>& samples, const scriptid::FeatureVector& v, int k);

bool subset(const BinaryImage& a, const BinaryImage& b);

}  // namespace oracle
