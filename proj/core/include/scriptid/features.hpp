#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "scriptid/image.hpp"
#include "scriptid/imaging.hpp"

namespace scriptid {

inline constexpr std::size_t kFeatureCount = 8;

/// Canonical feature order, also written into model headers.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "opd_0", "opd_45", "opd_90", "opd_135", "aar", "pr", "ecc", "ext"};

struct FeatureVector {
  double opd_0 = 0.0;    // horizontal strokes
  double opd_45 = 0.0;
  double opd_90 = 0.0;   // vertical strokes
  double opd_135 = 0.0;
  double aar = 0.0;
  double pr = 0.0;
  double ecc = 0.0;
  double ext = 0.0;

  std::array<double, kFeatureCount> values() const { return {opd_0, opd_45, opd_90, opd_135, aar, pr, ecc, ext}; }
  static FeatureVector from_values(const std::array<double, kFeatureCount>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
  }
  double opd(int direction_deg) const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Throws std::invalid_argument when a value lies outside its documented range.
void validate(const FeatureVector& v);

/// A word image with its 8-connected components. The image is kept exactly
/// as given; use `from_crop` to trim it to the ink first.
class WordImage {
 public:
  explicit WordImage(BinaryImage img);

  /// Trims `img` to the bounding box of its ink.
  static WordImage from_crop(const BinaryImage& img);

  const BinaryImage& image() const { return img_; }
  const std::vector<ComponentStats>& components() const { return components_; }

 private:
  BinaryImage img_;
  std::vector<ComponentStats> components_;
};

struct FeatureParams {
  // Line length as a fraction of the mean component height, in thousandths.
  int se_ratio_permille = 700;
};

/// round(0.7 * mean component height), half up, raised to odd, at least 3.
int se_length_for(const WordImage& word, const FeatureParams& params = {});

/// Ink fraction of fill_holes(opening_by_reconstruction(img, line)) for the
/// given direction and line length.
double opd(const BinaryImage& img, int direction_deg, int se_length);
double opd(const WordImage& word, int direction_deg);

double aar(const WordImage& word);
double pixel_ratio(const WordImage& word);
double avg_eccentricity(const WordImage& word);
double avg_extent(const WordImage& word);

FeatureVector extract_features(const WordImage& word, const FeatureParams& params = {});

}  // namespace scriptid
