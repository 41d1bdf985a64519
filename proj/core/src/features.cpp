#include "scriptid/features.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "scriptid/morphology.hpp"

namespace scriptid {

double FeatureVector::opd(int direction_deg) const {
  switch (direction_deg) {
    case 0: return opd_0;
    case 45: return opd_45;
    case 90: return opd_90;
    case 135: return opd_135;
    default: throw std::invalid_argument("no OPD feature for direction " + std::to_string(direction_deg));
  }
}

void validate(const FeatureVector& v) {
  const auto vals = v.values();
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (!std::isfinite(vals[i])) throw std::invalid_argument(std::string(kFeatureNames[i]) + " is not finite");
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  for (int d : {0, 45, 90, 135}) {
    if (!in_unit(v.opd(d))) throw std::invalid_argument("opd out of [0,1]");
    if (v.opd(d) > v.pr) throw std::invalid_argument("opd exceeds pixel ratio");
  }
  if (!in_unit(v.pr)) throw std::invalid_argument("pr out of [0,1]");
  if (!in_unit(v.ecc)) throw std::invalid_argument("ecc out of [0,1]");
  if (!(v.ext > 0.0 && v.ext <= 1.0)) throw std::invalid_argument("ext out of (0,1]");
  if (!(v.aar > 0.0)) throw std::invalid_argument("aar must be positive");
}

WordImage::WordImage(BinaryImage img) : img_(std::move(img)) {
  components_ = connected_components(img_, Connectivity::Eight).components;
  if (components_.empty()) throw std::invalid_argument("word image has no ink");
}

WordImage WordImage::from_crop(const BinaryImage& img) {
  const Box b = ink_bounds(img);
  if (b.empty()) throw std::invalid_argument("word image has no ink");
  return WordImage(crop(img, b));
}

int se_length_for(const WordImage& word, const FeatureParams& params) {
  if (params.se_ratio_permille < 1) throw std::invalid_argument("se ratio must be positive");
  long long sum = 0;
  for (const auto& c : word.components()) sum += c.bbox.height();
  const long long n = static_cast<long long>(word.components().size());
  // floor(ratio * sum / n + 0.5) in integers, so 0.7 * 15 rounds to 11.
  long long len = (params.se_ratio_permille * sum + 500 * n) / (1000 * n);
  if (len < 3) len = 3;
  if (len % 2 == 0) ++len;
  return static_cast<int>(len);
}

double opd(const BinaryImage& img, int direction_deg, int se_length) {
  const BinaryImage strokes = opening_by_reconstruction(img, line_se(direction_deg, se_length));
  const BinaryImage filled = fill_holes(strokes);
  return static_cast<double>(count_on(filled)) / static_cast<double>(img.size());
}

double opd(const WordImage& word, int direction_deg) {
  return opd(word.image(), direction_deg, se_length_for(word));
}

double aar(const WordImage& word) {
  double sum = 0.0;
  for (const auto& c : word.components())
    sum += static_cast<double>(c.bbox.height()) / static_cast<double>(c.bbox.width());
  return sum / static_cast<double>(word.components().size());
}

double pixel_ratio(const WordImage& word) {
  return static_cast<double>(count_on(fill_holes(word.image()))) / static_cast<double>(word.image().size());
}

double avg_eccentricity(const WordImage& word) {
  double sum = 0.0;
  for (const auto& c : word.components()) sum += component_eccentricity(c);
  return sum / static_cast<double>(word.components().size());
}

double avg_extent(const WordImage& word) {
  double sum = 0.0;
  for (const auto& c : word.components()) sum += component_extent(c);
  return sum / static_cast<double>(word.components().size());
}

FeatureVector extract_features(const WordImage& word, const FeatureParams& params) {
  const int len = se_length_for(word, params);
  FeatureVector v;
  v.opd_0 = opd(word.image(), 0, len);
  v.opd_45 = opd(word.image(), 45, len);
  v.opd_90 = opd(word.image(), 90, len);
  v.opd_135 = opd(word.image(), 135, len);
  v.aar = aar(word);
  v.pr = pixel_ratio(word);
  v.ecc = avg_eccentricity(word);
  v.ext = avg_extent(word);
  return v;
}

}  // namespace scriptid
