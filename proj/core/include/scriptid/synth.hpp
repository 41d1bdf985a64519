#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scriptid/image.hpp"
#include "scriptid/segmentation.hpp"

namespace scriptid::synth {

/// Deterministic generator with explicit integer-to-range mappings, so the
/// same seed yields the same corpus with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  /// Uniform real in [lo, hi).
  double uniform(double lo, double hi);
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

 private:
  std::uint64_t state_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// A row of equally sized glyph cells read from `<name>.pbm` plus the
/// `<name>.sheet` key=value sidecar (name, cell_width, cell_height, count,
/// joined). Joined scripts are set without inter-glyph spacing so their
/// headlines fuse.
struct GlyphSheet {
  std::string name;
  int cell_width = 0;
  int cell_height = 0;
  bool joined = false;
  std::vector<BinaryImage> glyphs;
};

GlyphSheet load_glyph_sheet(const std::filesystem::path& sheet_file);
/// Every `*.sheet` in `dir`, sorted by name. Throws std::runtime_error when none exist.
std::vector<GlyphSheet> load_glyph_sheets(const std::filesystem::path& dir);

/// Cell height in pixels for a point size: 2 px per point.
int cell_pixels_for_pt(double pt);

/// Resamples by area coverage: an output pixel is ink when at least 40% of
/// its footprint in the source is ink.
BinaryImage resample(const BinaryImage& img, int width, int height);

/// Sets `glyph_ids` side by side at `pt` points. The result keeps the full
/// cell height, so words of one size share a baseline.
BinaryImage render_word(const GlyphSheet& sheet, std::span<const int> glyph_ids, double pt);

/// Flips each pixel on an ink/background boundary with probability `p`.
BinaryImage boundary_noise(const BinaryImage& img, double p, Rng& rng);

struct CorpusParams {
  int per_class = 150;
  std::uint64_t seed = 1;
  double pt_min = 10.0;
  double pt_max = 36.0;
  int min_glyphs = 1;
  int max_glyphs = 6;
  double noise = 0.02;     // boundary flip probability
  double max_skew_deg = 0.0;
};

struct GeneratedWord {
  std::string label;
  std::vector<int> glyphs;
  double pt = 0.0;
  BinaryImage image{1, 1};  // trimmed to ink
};

std::vector<GeneratedWord> generate_words(std::span<const GlyphSheet> sheets, const CorpusParams& params);

struct WordTruth {
  std::string label;
  int col_start = 0;
  int col_end = 0;
};

struct LineTruth {
  LineBand band;
  std::vector<WordTruth> words;
};

struct PageParams {
  int width = 900;
  int height = 700;
  double pt_min = 12.0;
  double pt_max = 18.0;
  int min_lines = 3;
  int max_lines = 6;
  int min_words = 3;
  int max_words = 5;
  int max_glyphs = 4;
  double skew_deg = 0.0;  // rotation applied after layout
};

struct GeneratedPage {
  BinaryImage ink;    // after rotation
  GrayImage gray;     // ink at low intensities on a light noisy background
  std::vector<LineTruth> lines;  // layout before rotation
};

GeneratedPage generate_page(std::span<const GlyphSheet> sheets, const PageParams& params, std::uint64_t seed);

/// Writes `<root>/<label>/<label>_NNNN.pbm` for every word plus
/// `<root>/manifest.csv` (`file,label,glyph_count,pt,glyphs`). Returns the
/// relative paths in write order.
std::vector<std::string> write_corpus(const std::filesystem::path& root, std::span<const GeneratedWord> words);

/// Ground truth as CSV, one row per word:
/// `line,word,row_start,row_end,col_start,col_end,label` (1-based line/word).
std::string format_page_truth(const GeneratedPage& page);

}  // namespace scriptid::synth
