#include "scriptid/pipeline.hpp"

#include <algorithm>

#include "scriptid/imaging.hpp"

namespace scriptid {

Binarized binarize_auto(const GrayImage& img) {
  const auto px = img.pixels();
  const auto [lo, hi] = std::minmax_element(px.begin(), px.end());
  if (*lo == *hi) {
    const std::uint8_t fill = *lo >= 128 ? 0 : 1;
    return {BinaryImage(img.width(), img.height(), fill), *lo};
  }
  const int t = otsu_threshold(img);
  return {binarize(img, t), t};
}

Binarized to_binary(const pnm::AnyImage& img) {
  if (const auto* g = std::get_if<GrayImage>(&img)) return binarize_auto(*g);
  return {std::get<BinaryImage>(img), -1};
}

PreprocessResult preprocess_page(const pnm::AnyImage& img, const PipelineConfig& cfg) {
  Binarized bin = to_binary(img);
  PreprocessResult res{remove_small_objects(bin.image, cfg.min_area), bin.threshold, 0.0, 0};
  if (cfg.deskew) {
    DeskewParams dp = cfg.deskew_params;
    dp.min_area = cfg.min_area;
    DeskewResult d = deskew(res.page, dp);
    res.page = std::move(d.image);
    res.skew_deg = d.angle_deg;
  }
  res.components = connected_components(res.page, Connectivity::Eight).components.size();
  return res;
}

std::vector<SegmentedWord> segment_page(const BinaryImage& page, const SegmentationParams& params) {
  std::vector<SegmentedWord> out;
  int line_no = 0;
  for (const auto& band : segment_lines(page, params)) {
    ++line_no;
    int word_no = 0;
    for (const auto& box : segment_words(page, band, params)) {
      ++word_no;
      out.push_back({line_no, word_no, box, crop(page, box.box())});
    }
  }
  return out;
}

FeatureVector word_features(const BinaryImage& word, const PipelineConfig& cfg) {
  return extract_features(WordImage::from_crop(word), cfg.features);
}

}  // namespace scriptid
