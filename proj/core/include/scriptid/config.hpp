#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "scriptid/features.hpp"
#include "scriptid/segmentation.hpp"

namespace scriptid {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every tunable of the pipeline with its default. Loaded from `key=value`
/// text; `describe` lists every accepted key.
struct PipelineConfig {
  std::size_t min_area = kDefaultMinArea;
  bool deskew = true;
  SegmentationParams segmentation;
  DeskewParams deskew_params;
  FeatureParams features;
  int k = 3;

  /// Throws ConfigError when a value lies outside its valid range.
  void validate() const;
};

/// Applies one `key=value` assignment.
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value);

/// Reads `key=value` lines ('#' comments and blank lines allowed) on top of
/// the defaults, then validates.
PipelineConfig load_config(std::istream& in);

/// Canonical text form of every setting, one per line, in a fixed order.
std::string describe(const PipelineConfig& cfg);

}  // namespace scriptid
