#include "scriptid/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "scriptid/dataset.hpp"

namespace scriptid {
namespace {

std::string canonical_feature_list() {
  std::string s;
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i) {
    if (i) s += ',';
    s += kFeatureNames[i];
  }
  return s;
}

void check_k(int k, std::size_t available) {
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("k must be a positive odd integer, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > available)
    throw std::invalid_argument("k=" + std::to_string(k) + " exceeds the " + std::to_string(available) +
                                " available samples");
}

struct Ranked {
  double dist;
  std::size_t index;
  bool operator<(const Ranked& o) const { return dist != o.dist ? dist < o.dist : index < o.index; }
};

// k nearest samples excluding `skip` (pass size() to skip nothing).
KnnResult knn_core(const std::vector<Sample>& samples, const FeatureVector& v, int k, std::size_t skip) {
  std::vector<Ranked> ranked;
  ranked.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (i != skip) ranked.push_back({distance(samples[i].features, v), i});
  std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end());

  std::map<std::string, Vote> tally;
  KnnResult res;
  res.k = k;
  for (int j = 0; j < k; ++j) {
    const auto& s = samples[ranked[j].index];
    auto& vote = tally[s.label];
    vote.label = s.label;
    ++vote.votes;
    vote.distance_sum += ranked[j].dist;
    res.neighbours.push_back(ranked[j].index);
  }
  const Vote* best = nullptr;
  for (const auto& [label, vote] : tally) {
    res.votes.push_back(vote);
    // std::map iterates in label order, so strict comparisons keep the
    // lexicographically first label on a full tie.
    if (!best || vote.votes > best->votes ||
        (vote.votes == best->votes && vote.distance_sum < best->distance_sum))
      best = &vote;
  }
  res.label = best->label;
  return res;
}

EvaluationReport make_report(int k, std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  EvaluationReport rep;
  rep.k = k;
  rep.confusion.assign(labels.size(), std::vector<std::size_t>(labels.size(), 0));
  rep.labels = std::move(labels);
  return rep;
}

std::size_t label_index(const EvaluationReport& rep, const std::string& label) {
  const auto it = std::lower_bound(rep.labels.begin(), rep.labels.end(), label);
  return static_cast<std::size_t>(it - rep.labels.begin());
}

}  // namespace

Model::Model(std::vector<Sample> samples, int k) : samples_(std::move(samples)), k_(k) {
  if (samples_.empty()) throw ModelError("model has no samples");
  for (const auto& s : samples_) {
    if (s.label.empty() || !is_valid_field(s.label)) throw ModelError("invalid label '" + s.label + "'");
    try {
      validate(s.features);
    } catch (const std::invalid_argument& e) {
      throw ModelError(std::string("invalid feature vector: ") + e.what());
    }
    labels_.push_back(s.label);
  }
  try {
    check_k(k_, samples_.size());
  } catch (const std::invalid_argument& e) {
    throw ModelError(e.what());
  }
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

void save_model(std::ostream& out, const Model& model) {
  out << "version=" << Model::kFormatVersion << '\n';
  out << "k=" << model.k() << '\n';
  out << "features=" << canonical_feature_list() << '\n';
  out << "normalization=none\n";
  for (const auto& s : model.samples()) {
    out << s.label;
    for (double v : s.features.values()) out << ',' << format_real(v);
    out << '\n';
  }
}

std::string serialize_model(const Model& model) {
  std::ostringstream os;
  save_model(os, model);
  return std::move(os).str();
}

Model load_model(std::istream& in) {
  std::map<std::string, std::string> header;
  std::vector<Sample> samples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      if (!samples.empty()) throw ModelError("line " + std::to_string(lineno) + ": header after samples");
      header[line.substr(0, eq)] = line.substr(eq + 1);
      continue;
    }
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> parts;
    while (std::getline(fields, field, ',')) parts.push_back(field);
    if (parts.size() != 1 + kFeatureCount)
      throw ModelError("line " + std::to_string(lineno) + ": expected label and " + std::to_string(kFeatureCount) +
                       " features");
    std::array<double, kFeatureCount> v{};
    try {
      for (std::size_t i = 0; i < kFeatureCount; ++i) v[i] = parse_real(parts[1 + i]);
    } catch (const std::invalid_argument& e) {
      throw ModelError("line " + std::to_string(lineno) + ": " + e.what());
    }
    samples.push_back({FeatureVector::from_values(v), parts[0]});
  }

  auto require = [&](const std::string& key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) throw ModelError("model header lacks '" + key + "'");
    return it->second;
  };
  if (require("version") != std::to_string(Model::kFormatVersion))
    throw ModelError("unsupported model version '" + header["version"] + "'");
  if (require("features") != canonical_feature_list())
    throw ModelError("model feature order '" + header["features"] + "' does not match '" +
                     canonical_feature_list() + "'");
  if (require("normalization") != "none")
    throw ModelError("unsupported normalization '" + header["normalization"] + "'");
  int k = 0;
  try {
    std::size_t used = 0;
    const auto& ks = require("k");
    k = std::stoi(ks, &used);
    if (used != ks.size()) throw std::invalid_argument("trailing text");
  } catch (const std::logic_error&) {
    throw ModelError("bad k in model header");
  }
  return Model(std::move(samples), k);
}

double distance(const FeatureVector& a, const FeatureVector& b) {
  const auto x = a.values();
  const auto y = b.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

NnResult classify_nn(const Model& model, const FeatureVector& v) {
  NnResult best{{}, std::numeric_limits<double>::infinity(), 0};
  const auto& samples = model.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = distance(samples[i].features, v);
    if (d < best.distance) best = {samples[i].label, d, i};
  }
  return best;
}

int KnnResult::winning_votes() const {
  for (const auto& v : votes)
    if (v.label == label) return v.votes;
  return 0;
}

KnnResult classify_knn(const Model& model, const FeatureVector& v, int k) {
  check_k(k, model.size());
  return knn_core(model.samples(), v, k, model.size());
}

std::size_t EvaluationReport::total() const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) t += row_total(i);
  return t;
}

std::size_t EvaluationReport::correct() const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) t += confusion[i][i];
  return t;
}

std::size_t EvaluationReport::row_total(std::size_t i) const {
  std::size_t t = 0;
  for (auto n : confusion.at(i)) t += n;
  return t;
}

double EvaluationReport::class_accuracy(std::size_t i) const {
  const auto n = row_total(i);
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(confusion[i][i]) / static_cast<double>(n);
}

double EvaluationReport::overall_accuracy() const {
  const auto n = total();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(correct()) / static_cast<double>(n);
}

EvaluationReport evaluate(const Model& model, std::span<const Sample> test, int k) {
  if (test.empty()) throw std::invalid_argument("evaluation set is empty");
  check_k(k, model.size());
  std::vector<std::string> labels = model.labels();
  for (const auto& s : test) labels.push_back(s.label);
  EvaluationReport rep = make_report(k, std::move(labels));
  for (const auto& s : test) {
    const auto predicted = knn_core(model.samples(), s.features, k, model.size()).label;
    ++rep.confusion[label_index(rep, s.label)][label_index(rep, predicted)];
  }
  return rep;
}

EvaluationReport leave_one_out(const Model& model, int k) {
  if (k < 1 || model.size() < static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("leave-one-out needs more than k samples");
  check_k(k, model.size() - 1);
  EvaluationReport rep = make_report(k, model.labels());
  const auto& samples = model.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto predicted = knn_core(samples, samples[i].features, k, i).label;
    ++rep.confusion[label_index(rep, samples[i].label)][label_index(rep, predicted)];
  }
  return rep;
}

}  // namespace scriptid
