#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "scriptid/classifier.hpp"
#include "scriptid/config.hpp"
#include "scriptid/dataset.hpp"
#include "scriptid/pipeline.hpp"
#include "scriptid/pnm.hpp"
#include "scriptid/synth.hpp"

#ifndef SCRIPTID_DEFAULT_GLYPH_DIR
#define SCRIPTID_DEFAULT_GLYPH_DIR "assets/glyphs"
#endif
#ifndef SCRIPTID_INSTALLED_GLYPH_DIR
#define SCRIPTID_INSTALLED_GLYPH_DIR SCRIPTID_DEFAULT_GLYPH_DIR
#endif

namespace scriptid::app {
namespace {

namespace fs = std::filesystem;

class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> settings;
  std::uint64_t seed = 1;
  int jobs = 1;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Callers store results by
// index, so output order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

bool is_image_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pgm" || ext == ".pbm" || ext == ".pnm";
}

std::vector<fs::path> images_under(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      auto more = images_under(p);
      files.insert(files.end(), more.begin(), more.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

PipelineConfig load_pipeline_config(const GlobalOptions& g) {
  PipelineConfig cfg;
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw CommandError("cannot open config " + g.config_path);
    cfg = load_config(in);
  }
  for (const auto& s : g.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw CommandError("--set expects key=value, got '" + s + "'");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CommandError("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return std::move(os).str();
}

Model read_model(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw CommandError("cannot open model " + p.string());
  try {
    return load_model(in);
  } catch (const ModelError& e) {
    throw CommandError(p.string() + ": " + e.what());
  }
}

std::vector<DumpRecord> read_dump_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw CommandError("cannot open feature dump " + p.string());
  try {
    return read_dump(in);
  } catch (const std::invalid_argument& e) {
    throw CommandError(p.string() + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& output, std::ostream& out) {
  if (output.empty() || output == "-")
    out << text;
  else
    pnm::write_file_atomic(output, text);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string percent(double fraction) {
  if (std::isnan(fraction)) return "n/a";
  return fixed(100.0 * fraction, 2) + "%";
}

// ---------------------------------------------------------------- preprocess

struct PreprocessArgs {
  std::string input;
  std::string output;
  std::string report;
};

int cmd_preprocess(const GlobalOptions& g, const PreprocessArgs& a, std::ostream& out) {
  const PipelineConfig cfg = load_pipeline_config(g);
  const auto image = pnm::read(fs::path(a.input));
  const PreprocessResult res = preprocess_page(image, cfg);
  std::ostringstream rep;
  rep << "input=" << a.input << '\n'
      << "threshold=" << res.threshold << '\n'
      << "skew_deg=" << format_real(res.skew_deg) << '\n'
      << "components=" << res.components << '\n'
      << "width=" << res.page.width() << '\n'
      << "height=" << res.page.height() << '\n';
  const std::string report_path = a.report.empty() ? a.output + ".txt" : a.report;
  pnm::write_file_atomic(a.output, pnm::encode_pbm(res.page));
  try {
    pnm::write_file_atomic(report_path, rep.str());
  } catch (...) {
    std::error_code ec;
    fs::remove(a.output, ec);
    throw;
  }
  out << rep.str();
  return 0;
}

// ------------------------------------------------------------------- segment

struct SegmentArgs {
  std::string input;
  std::string out_dir;
};

BinaryImage page_for_segmentation(const pnm::AnyImage& image, const PipelineConfig& cfg) {
  // Bilevel input is taken as an already preprocessed page.
  if (const auto* b = std::get_if<BinaryImage>(&image)) return *b;
  return preprocess_page(image, cfg).page;
}

int cmd_segment(const GlobalOptions& g, const SegmentArgs& a, std::ostream& out) {
  const PipelineConfig cfg = load_pipeline_config(g);
  const BinaryImage page = page_for_segmentation(pnm::read(fs::path(a.input)), cfg);
  const auto words = segment_page(page, cfg.segmentation);

  std::vector<std::pair<std::string, std::string>> files;
  std::ostringstream manifest;
  for (const auto& w : words) {
    const std::string name = "L" + std::to_string(w.line) + "_W" + std::to_string(w.word) + ".pbm";
    files.emplace_back(name, pnm::encode_pbm(w.image));
    manifest << name << ',' << w.box.line.row_start << ',' << w.box.line.row_end << ',' << w.box.col_start << ','
             << w.box.col_end << '\n';
  }
  fs::create_directories(a.out_dir);
  for (const auto& [name, bytes] : files) pnm::write_file_atomic(fs::path(a.out_dir) / name, bytes);
  pnm::write_file_atomic(fs::path(a.out_dir) / "manifest.csv", manifest.str());
  out << words.size() << " words written to " << a.out_dir << '\n';
  return 0;
}

// ------------------------------------------------------------------- extract

struct ExtractArgs {
  std::vector<std::string> inputs;
  std::string label;
  std::string output;
};

struct WorkItem {
  fs::path path;
  std::optional<std::string> label;
};

std::vector<WorkItem> collect_extract_items(const ExtractArgs& a) {
  std::vector<WorkItem> items;
  for (const auto& in : a.inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      // Corpus layout: one sub-directory per label.
      std::vector<fs::path> classes;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_directory()) classes.push_back(e.path());
      std::sort(classes.begin(), classes.end());
      for (const auto& cls : classes)
        for (const auto& f : images_under(cls)) items.push_back({f, cls.filename().string()});
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && is_image_file(e.path()))
          items.push_back({e.path(), a.label.empty() ? std::nullopt : std::optional(a.label)});
    } else {
      items.push_back({p, a.label.empty() ? std::nullopt : std::optional(a.label)});
    }
  }
  std::sort(items.begin(), items.end(),
            [](const WorkItem& x, const WorkItem& y) { return x.path.generic_string() < y.path.generic_string(); });
  return items;
}

int cmd_extract(const GlobalOptions& g, const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  const PipelineConfig cfg = load_pipeline_config(g);
  const auto items = collect_extract_items(a);
  std::vector<std::optional<DumpRecord>> records(items.size());
  std::vector<std::string> warnings(items.size());
  parallel_for(items.size(), g.jobs, [&](std::size_t i) {
    try {
      const auto bin = to_binary(pnm::read(items[i].path));
      records[i] = DumpRecord{items[i].path.generic_string(), items[i].label, word_features(bin.image, cfg)};
    } catch (const std::exception& e) {
      warnings[i] = std::string("warning: skipping ") + items[i].path.string() + ": " + e.what();
    }
  });
  std::vector<DumpRecord> ok;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!warnings[i].empty()) err << warnings[i] << '\n';
    if (records[i]) ok.push_back(std::move(*records[i]));
  }
  if (ok.empty()) throw CommandError("no word image could be processed");
  std::ostringstream os;
  write_dump(os, ok);
  emit(os.str(), a.output, out);
  return 0;
}

// --------------------------------------------------------------------- train

struct TrainArgs {
  std::string dump;
  std::string output;
  int k = 0;
};

std::vector<Sample> labelled_samples(const std::vector<DumpRecord>& records, const std::string& source) {
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].label)
      throw CommandError(source + ": record '" + records[i].path + "' has no label");
    samples.push_back({records[i].features, *records[i].label});
  }
  return samples;
}

int cmd_train(const GlobalOptions& g, const TrainArgs& a, std::ostream& out) {
  const PipelineConfig cfg = load_pipeline_config(g);
  const int k = a.k > 0 ? a.k : cfg.k;
  auto samples = labelled_samples(read_dump_file(a.dump), a.dump);
  std::map<std::string, std::size_t> counts;
  for (const auto& s : samples) ++counts[s.label];
  Model model = [&] {
    try {
      return Model(std::move(samples), k);
    } catch (const ModelError& e) {
      throw CommandError(e.what());
    }
  }();
  pnm::write_file_atomic(a.output, serialize_model(model));
  for (const auto& [label, n] : counts) out << label << ' ' << n << '\n';
  out << "samples " << model.size() << ", k " << model.k() << ", written to " << a.output << '\n';
  return 0;
}

// ------------------------------------------------------------------ classify

struct ClassifyArgs {
  std::string model;
  std::vector<std::string> inputs;
  bool page = false;
  int k = 0;
  std::string output;
};

struct Prediction {
  std::string name;
  std::string label;
  double confidence = 0.0;
  double millis = 0.0;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

int cmd_classify(const GlobalOptions& g, const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  const PipelineConfig cfg = load_pipeline_config(g);
  const Model model = read_model(a.model);
  const int k = a.k > 0 ? a.k : model.k();
  if (k % 2 == 0 || k < 1 || static_cast<std::size_t>(k) > model.size())
    throw CommandError("k must be odd and at most the model size");
  const auto files = expand_inputs(a.inputs);

  std::vector<std::vector<Prediction>> results(files.size());
  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), g.jobs, [&](std::size_t i) {
    try {
      const auto image = pnm::read(files[i]);
      const std::string name = files[i].generic_string();
      if (!a.page) {
        const auto start = Clock::now();
        const auto bin = to_binary(image);
        const auto knn = classify_knn(model, word_features(bin.image, cfg), k);
        results[i].push_back({name, knn.label, knn.confidence(), elapsed_ms(start)});
        return;
      }
      const BinaryImage page = page_for_segmentation(image, cfg);
      for (const auto& w : segment_page(page, cfg.segmentation)) {
        const auto start = Clock::now();
        const auto knn = classify_knn(model, word_features(w.image, cfg), k);
        results[i].push_back({name + ":L" + std::to_string(w.line) + "_W" + std::to_string(w.word), knn.label,
                              knn.confidence(), elapsed_ms(start)});
      }
    } catch (const std::exception& e) {
      errors[i] = files[i].string() + ": " + e.what();
    }
  });

  std::ostringstream os;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty()) {
      err << "error: " << errors[i] << '\n';
      ++failures;
    }
    for (const auto& p : results[i])
      os << p.name << ',' << p.label << ',' << fixed(p.confidence, 4) << ',' << fixed(p.millis, 4) << '\n';
  }
  if (failures == files.size()) throw CommandError("nothing could be classified");
  emit(os.str(), a.output, out);
  return failures == 0 ? 0 : 1;
}

// ------------------------------------------------------------------ evaluate

struct EvaluateArgs {
  std::string model;
  std::string dump;
  int k = 0;
  bool loo = false;
  std::string csv;
  std::string output;
};

std::string confusion_csv(const EvaluationReport& rep) {
  std::ostringstream os;
  os << "true\\predicted";
  for (const auto& l : rep.labels) os << ',' << l;
  os << '\n';
  for (std::size_t i = 0; i < rep.labels.size(); ++i) {
    os << rep.labels[i];
    for (auto n : rep.confusion[i]) os << ',' << n;
    os << '\n';
  }
  return std::move(os).str();
}

int cmd_evaluate(const GlobalOptions& g, const EvaluateArgs& a, std::ostream& out) {
  const PipelineConfig cfg = load_pipeline_config(g);
  const Model model = read_model(a.model);
  const int k = a.k > 0 ? a.k : model.k();

  EvaluationReport nn;
  EvaluationReport knn;
  std::string protocol;
  try {
    if (a.loo) {
      protocol = "leave-one-out";
      const Model pool = a.dump.empty() ? model : Model(labelled_samples(read_dump_file(a.dump), a.dump), 1);
      nn = leave_one_out(pool, 1);
      knn = leave_one_out(pool, k);
    } else {
      if (a.dump.empty()) throw CommandError("evaluate needs --dump unless --loo is given");
      protocol = "holdout";
      const auto test = labelled_samples(read_dump_file(a.dump), a.dump);
      nn = evaluate(model, test, 1);
      knn = evaluate(model, test, k);
    }
  } catch (const std::invalid_argument& e) {
    throw CommandError(e.what());
  } catch (const ModelError& e) {
    throw CommandError(e.what());
  }
  (void)cfg;

  std::ostringstream rep;
  rep << "protocol=" << protocol << '\n' << "k=" << k << '\n' << "samples=" << knn.total() << '\n';
  rep << "script,count,NN,KNN\n";
  for (std::size_t i = 0; i < knn.labels.size(); ++i)
    rep << knn.labels[i] << ',' << knn.row_total(i) << ',' << percent(nn.class_accuracy(i)) << ','
        << percent(knn.class_accuracy(i)) << '\n';
  rep << "overall," << knn.total() << ',' << percent(nn.overall_accuracy()) << ','
      << percent(knn.overall_accuracy()) << '\n';
  rep << "\nconfusion (k=" << k << ", rows true, columns predicted)\n" << confusion_csv(knn);

  if (!a.csv.empty()) pnm::write_file_atomic(a.csv, confusion_csv(knn));
  emit(rep.str(), a.output, out);
  return 0;
}

// ---------------------------------------------------------------- gen-corpus

struct GenArgs {
  std::string glyphs;
  std::string out_dir;
  int per_class = 150;
  int pages = 0;
  std::string pages_dir;
  double page_skew = 0.0;
  synth::CorpusParams corpus;
};

std::string default_glyph_dir() {
  if (const char* env = std::getenv("SCRIPTID_GLYPH_DIR")) return env;
  if (fs::is_directory(SCRIPTID_DEFAULT_GLYPH_DIR)) return SCRIPTID_DEFAULT_GLYPH_DIR;
  return SCRIPTID_INSTALLED_GLYPH_DIR;
}

int cmd_gen_corpus(const GlobalOptions& g, GenArgs a, std::ostream& out) {
  std::vector<synth::GlyphSheet> sheets;
  try {
    sheets = synth::load_glyph_sheets(a.glyphs.empty() ? default_glyph_dir() : a.glyphs);
  } catch (const std::exception& e) {
    throw CommandError(std::string("glyph assets unavailable: ") + e.what());
  }
  a.corpus.per_class = a.per_class;
  a.corpus.seed = g.seed;
  const auto words = synth::generate_words(sheets, a.corpus);
  synth::write_corpus(a.out_dir, words);
  out << words.size() << " words in " << sheets.size() << " classes written to " << a.out_dir << '\n';

  if (a.pages > 0) {
    if (a.pages_dir.empty()) throw CommandError("--pages needs --pages-out");
    fs::create_directories(a.pages_dir);
    synth::Rng rng(synth::mix_seed(g.seed, 0xFACE));
    for (int p = 0; p < a.pages; ++p) {
      synth::PageParams pp;
      pp.skew_deg = a.page_skew > 0.0 ? std::round(rng.uniform(-a.page_skew, a.page_skew) * 10.0) / 10.0 : 0.0;
      const auto page = synth::generate_page(sheets, pp, synth::mix_seed(g.seed, 1000 + static_cast<unsigned>(p)));
      char stem[32];
      std::snprintf(stem, sizeof stem, "page_%03d", p + 1);
      pnm::write_file_atomic(fs::path(a.pages_dir) / (std::string(stem) + ".pgm"), pnm::encode_pgm(page.gray));
      pnm::write_file_atomic(fs::path(a.pages_dir) / (std::string(stem) + ".truth.csv"),
                             "# skew_deg=" + format_real(pp.skew_deg) + "\n" + synth::format_page_truth(page));
    }
    out << a.pages << " pages written to " << a.pages_dir << '\n';
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Word-level script identification by directional morphological reconstruction", "scriptid"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", g.settings, "override one configuration key (key=value), repeatable");
  app.add_option("--seed", g.seed, "random seed for corpus generation");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::Range(1, 256));

  PreprocessArgs pre;
  auto* c_pre = app.add_subcommand("preprocess", "binarise, despeckle and deskew a page");
  c_pre->add_option("input", pre.input, "page image (PGM/PBM)")->required();
  c_pre->add_option("-o,--output", pre.output, "output PBM")->required();
  c_pre->add_option("--report", pre.report, "report path (default: <output>.txt)");

  SegmentArgs seg;
  auto* c_seg = app.add_subcommand("segment", "split a page into word images");
  c_seg->add_option("input", seg.input, "page image; PGM is preprocessed first")->required();
  c_seg->add_option("-o,--out-dir", seg.out_dir, "directory for word PBMs and manifest.csv")->required();

  ExtractArgs ext;
  auto* c_ext = app.add_subcommand("extract", "compute feature vectors of word images");
  c_ext->add_option("inputs", ext.inputs, "corpus roots (one sub-directory per label) or word images")->required();
  c_ext->add_option("--label", ext.label, "label for images outside a corpus layout");
  c_ext->add_option("-o,--output", ext.output, "feature dump (default: stdout)");

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "build a KNN model from a labelled feature dump");
  c_tr->add_option("dump", tr.dump, "feature dump")->required();
  c_tr->add_option("-o,--output", tr.output, "model file")->required();
  c_tr->add_option("--k", tr.k, "neighbours (default: config k)");

  ClassifyArgs cl;
  auto* c_cl = app.add_subcommand("classify", "identify the script of words or of every word on pages");
  c_cl->add_option("-m,--model", cl.model, "model file")->required();
  c_cl->add_option("inputs", cl.inputs, "word images, pages, or directories")->required();
  c_cl->add_flag("--page", cl.page, "inputs are pages: preprocess, segment, classify each word");
  c_cl->add_option("--k", cl.k, "neighbours (default: model k)");
  c_cl->add_option("-o,--output", cl.output, "predictions file (default: stdout)");

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "accuracy and confusion matrix");
  c_ev->add_option("-m,--model", ev.model, "model file")->required();
  c_ev->add_option("--dump", ev.dump, "labelled feature dump to test on");
  c_ev->add_option("--k", ev.k, "neighbours for the KNN column (default: model k)");
  c_ev->add_flag("--loo", ev.loo, "leave-one-out over the model (or over --dump when given)");
  c_ev->add_option("--csv", ev.csv, "write the confusion matrix as CSV");
  c_ev->add_option("-o,--output", ev.output, "report file (default: stdout)");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen-corpus", "render a synthetic labelled corpus from glyph sheets");
  c_gen->add_option("-o,--out", gen.out_dir, "corpus root")->required();
  c_gen->add_option("--glyphs", gen.glyphs, "glyph sheet directory");
  c_gen->add_option("--per-class", gen.per_class, "words per class")->check(CLI::Range(0, 1000000));
  c_gen->add_option("--pt-min", gen.corpus.pt_min, "smallest point size");
  c_gen->add_option("--pt-max", gen.corpus.pt_max, "largest point size");
  c_gen->add_option("--min-glyphs", gen.corpus.min_glyphs, "fewest glyphs per word");
  c_gen->add_option("--max-glyphs", gen.corpus.max_glyphs, "most glyphs per word");
  c_gen->add_option("--noise", gen.corpus.noise, "boundary flip probability")->check(CLI::Range(0.0, 0.5));
  c_gen->add_option("--max-skew", gen.corpus.max_skew_deg, "largest word rotation in degrees");
  c_gen->add_option("--pages", gen.pages, "also render this many pages with ground truth");
  c_gen->add_option("--pages-out", gen.pages_dir, "directory for rendered pages");
  c_gen->add_option("--page-skew", gen.page_skew, "largest page rotation in degrees");

  std::vector<std::string> argv_storage{"scriptid"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*c_pre) return cmd_preprocess(g, pre, out);
    if (*c_seg) return cmd_segment(g, seg, out);
    if (*c_ext) return cmd_extract(g, ext, out, err);
    if (*c_tr) return cmd_train(g, tr, out);
    if (*c_cl) return cmd_classify(g, cl, out, err);
    if (*c_ev) return cmd_evaluate(g, ev, out);
    if (*c_gen) return cmd_gen_corpus(g, gen, out);
  } catch (const std::exception& e) {
    err << "scriptid: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace scriptid::app
