#pragma once

#include <cstddef>
#include <vector>

#include "scriptid/config.hpp"
#include "scriptid/features.hpp"
#include "scriptid/image.hpp"
#include "scriptid/pnm.hpp"
#include "scriptid/segmentation.hpp"

namespace scriptid {

struct Binarized {
  BinaryImage image;
  int threshold = 0;
};

/// Otsu binarisation for whole pages and words. A single-intensity input has
/// no second class to separate, so it becomes all background when the level is
/// paper-light (>= 128) and all ink otherwise.
Binarized binarize_auto(const GrayImage& img);

/// Gray images are binarised as above; bilevel images pass through
/// (threshold reported as -1).
Binarized to_binary(const pnm::AnyImage& img);

struct PreprocessResult {
  BinaryImage page;
  int threshold = 0;
  double skew_deg = 0.0;
  std::size_t components = 0;  // 8-connected components of the final page
};

/// Binarise, drop specks below min_area, then deskew when enabled.
PreprocessResult preprocess_page(const pnm::AnyImage& img, const PipelineConfig& cfg);

struct SegmentedWord {
  int line = 0;  // 1-based
  int word = 0;  // 1-based within the line
  WordBox box;
  BinaryImage image;  // page cropped to `box`
};

std::vector<SegmentedWord> segment_page(const BinaryImage& page, const SegmentationParams& params);

/// Features of a word raster after trimming it to its ink. Throws
/// std::invalid_argument for a word without ink.
FeatureVector word_features(const BinaryImage& word, const PipelineConfig& cfg);

}  // namespace scriptid
