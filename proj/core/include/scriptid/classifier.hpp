#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <span>
#include <string>
#include <vector>

#include "scriptid/features.hpp"

namespace scriptid {

/// Directory names used by the bundled corpus. Models may carry any other
/// label; these are only the defaults.
namespace scripts {
inline constexpr std::string_view kKannada = "kannada";
inline constexpr std::string_view kTelugu = "telugu";
inline constexpr std::string_view kDevnagari = "devnagari";
inline constexpr std::string_view kEnglishNumeral = "english_numeral";
}  // namespace scripts

struct Sample {
  FeatureVector features;
  std::string label;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Labelled training vectors plus the default neighbour count. Immutable
/// once built, so concurrent queries need no locking.
class Model {
 public:
  static constexpr int kFormatVersion = 1;

  /// Validates every vector and label; k must be odd and at most the sample count.
  Model(std::vector<Sample> samples, int k = 3);

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  int k() const { return k_; }
  /// Distinct labels in lexicographic order.
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<Sample> samples_;
  int k_;
  std::vector<std::string> labels_;
};

// Text format:
//   version=1
//   k=3
//   features=opd_0,opd_45,opd_90,opd_135,aar,pr,ecc,ext
//   normalization=none
//   label,f1,...,f8        (one line per sample)
void save_model(std::ostream& out, const Model& model);
std::string serialize_model(const Model& model);
/// Throws ModelError for unknown versions, a different feature list, or bad samples.
Model load_model(std::istream& in);

double distance(const FeatureVector& a, const FeatureVector& b);

struct NnResult {
  std::string label;
  double distance = 0.0;
  std::size_t index = 0;  // winning sample
};

/// Closest sample; equal distances go to the lower sample index.
NnResult classify_nn(const Model& model, const FeatureVector& v);

struct Vote {
  std::string label;
  int votes = 0;
  double distance_sum = 0.0;
};

struct KnnResult {
  std::string label;
  int k = 0;
  std::vector<Vote> votes;  // one entry per label present among the neighbours, label order
  std::vector<std::size_t> neighbours;  // sample indices, nearest first

  int winning_votes() const;
  double confidence() const { return k > 0 ? static_cast<double>(winning_votes()) / k : 0.0; }
};

/// Majority label of the k nearest samples. Neighbours at equal distance are
/// taken in sample-index order. A vote tie goes to the tied label whose voters
/// have the smallest summed distance, then to the lexicographically first.
KnnResult classify_knn(const Model& model, const FeatureVector& v, int k);

struct EvaluationReport {
  int k = 0;
  std::vector<std::string> labels;                // row/column order
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]

  std::size_t total() const;
  std::size_t correct() const;
  std::size_t row_total(std::size_t i) const;
  double class_accuracy(std::size_t i) const;  // NaN for a class with no test samples
  double overall_accuracy() const;
};

EvaluationReport evaluate(const Model& model, std::span<const Sample> test, int k);

/// Each sample classified against all the others. Needs size() >= k + 1.
EvaluationReport leave_one_out(const Model& model, int k);

}  // namespace scriptid
