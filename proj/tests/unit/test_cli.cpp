#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scriptid/commands.hpp"
#include "scriptid/classifier.hpp"
#include "scriptid/config.hpp"
#include "scriptid/dataset.hpp"
#include "scriptid/features.hpp"
#include "scriptid/pipeline.hpp"
#include "scriptid/pnm.hpp"
#include "scriptid/synth.hpp"

using namespace scriptid;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = app::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) lines.push_back(l);
  return lines;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> f;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    f.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) return f;
    start = comma + 1;
  }
}

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name) : dir(fs::temp_directory_path() / ("scriptid_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string operator/(const std::string& leaf) const { return (dir / leaf).string(); }
};

const std::vector<synth::GlyphSheet>& sheets() {
  static const auto s = synth::load_glyph_sheets(SCRIPTID_GLYPH_DIR);
  return s;
}

std::string glyph_dir() { return SCRIPTID_GLYPH_DIR; }

}  // namespace

TEST_CASE("usage errors exit nonzero") {
  CHECK(cli({}).code != 0);
  CHECK(cli({"frobnicate"}).code != 0);
  CHECK(cli({"train"}).code != 0);
  CHECK(cli({"--jobs", "0", "extract", "x.pbm"}).code != 0);
}

TEST_CASE("preprocess matches the library pipeline") {
  Workspace ws("pre");
  synth::PageParams pp;
  pp.skew_deg = 2.0;
  const auto page = synth::generate_page(sheets(), pp, 12);
  pnm::write_file_atomic(ws / "page.pgm", pnm::encode_pgm(page.gray));

  const auto r = cli({"preprocess", ws / "page.pgm", "-o", ws / "clean.pbm"});
  REQUIRE(r.code == 0);
  const auto lib = preprocess_page(pnm::AnyImage(page.gray), PipelineConfig{});
  CHECK(slurp(ws / "clean.pbm") == pnm::encode_pbm(lib.page));
  const std::string report = slurp(ws / "clean.pbm.txt");
  CHECK(report.find("threshold=" + std::to_string(lib.threshold) + "\n") != std::string::npos);
  CHECK(report.find("skew_deg=" + format_real(lib.skew_deg) + "\n") != std::string::npos);
  CHECK(report.find("components=" + std::to_string(lib.components) + "\n") != std::string::npos);

  SUBCASE("blank page") {
    pnm::write_file_atomic(ws / "blank.pgm", pnm::encode_pgm(GrayImage(50, 40, 255)));
    REQUIRE(cli({"preprocess", ws / "blank.pgm", "-o", ws / "blank.pbm"}).code == 0);
    CHECK(count_on(std::get<BinaryImage>(pnm::read(fs::path(ws / "blank.pbm")))) == 0);
    CHECK(slurp(ws / "blank.pbm.txt").find("components=0\n") != std::string::npos);
  }
  SUBCASE("corrupt input") {
    std::ofstream(ws / "bad.pgm") << "P5\n10 10\n255\nshort";
    const auto bad = cli({"preprocess", ws / "bad.pgm", "-o", ws / "bad.pbm"});
    CHECK(bad.code != 0);
    CHECK(!bad.err.empty());
    CHECK_FALSE(fs::exists(ws / "bad.pbm"));
    CHECK_FALSE(fs::exists(ws / "bad.pbm.txt"));
  }
}

TEST_CASE("segment writes words and a manifest") {
  Workspace ws("seg");
  synth::PageParams pp;
  pp.min_lines = pp.max_lines = 3;
  pp.min_words = pp.max_words = 4;
  const auto page = synth::generate_page(sheets(), pp, 4);
  std::size_t expected = 0;
  for (const auto& l : page.lines) expected += l.words.size();
  REQUIRE(expected == 12);
  pnm::write_file_atomic(ws / "page.pgm", pnm::encode_pgm(page.gray));

  REQUIRE(cli({"--set", "deskew=false", "segment", ws / "page.pgm", "-o", ws / "words"}).code == 0);
  const auto manifest = lines_of(slurp(ws / "words/manifest.csv"));
  REQUIRE(manifest.size() == 12);
  for (const auto& line : manifest) {
    const auto f = split(line);
    REQUIRE(f.size() == 5);
    CHECK(fs::exists(fs::path(ws / "words") / f[0]));
    const int li = f[0][1] - '1';
    const int wi = f[0][4] - '1';
    const auto& tl = page.lines[static_cast<std::size_t>(li)];
    const auto& tw = tl.words[static_cast<std::size_t>(wi)];
    CHECK(std::abs(std::stoi(f[1]) - tl.band.row_start) <= 1);
    CHECK(std::abs(std::stoi(f[2]) - tl.band.row_end) <= 1);
    CHECK(std::abs(std::stoi(f[3]) - tw.col_start) <= 1);
    CHECK(std::abs(std::stoi(f[4]) - tw.col_end) <= 1);
  }
  const std::string first = slurp(ws / "words/L2_W3.pbm");
  REQUIRE(cli({"--set", "deskew=false", "segment", ws / "page.pgm", "-o", ws / "words"}).code == 0);
  CHECK(slurp(ws / "words/L2_W3.pbm") == first);

  pnm::write_file_atomic(ws / "blank.pbm", pnm::encode_pbm(BinaryImage(60, 60)));
  REQUIRE(cli({"segment", ws / "blank.pbm", "-o", ws / "none"}).code == 0);
  CHECK(slurp(ws / "none/manifest.csv").empty());
}

TEST_CASE("extract, train, classify and evaluate") {
  Workspace ws("flow");
  REQUIRE(cli({"--seed", "3", "gen-corpus", "-o", ws / "corpus", "--per-class", "10", "--glyphs", glyph_dir()}).code == 0);
  for (const auto& s : sheets()) {
    int n = 0;
    for (const auto& e : fs::directory_iterator(fs::path(ws / "corpus") / s.name)) n += e.path().extension() == ".pbm";
    CHECK(n == 10);
  }

  const auto ex = cli({"extract", ws / "corpus", "-o", ws / "feats.csv"});
  REQUIRE(ex.code == 0);
  const auto rows = lines_of(slurp(ws / "feats.csv"));
  REQUIRE(rows.size() == 30);
  CHECK(std::is_sorted(rows.begin(), rows.end()));
  for (const auto& row : rows) CHECK(split(row).size() == 10);

  const auto parallel = cli({"--jobs", "3", "extract", ws / "corpus"});
  CHECK(parallel.out == slurp(ws / "feats.csv"));

  const auto tr = cli({"train", ws / "feats.csv", "-o", ws / "model.txt"});
  REQUIRE(tr.code == 0);
  CHECK(tr.out.find("devnagari 10\n") != std::string::npos);
  CHECK(tr.out.find("kannada 10\n") != std::string::npos);
  std::ifstream min(ws / "model.txt");
  const Model model = load_model(min);
  CHECK(model.size() == 30);
  CHECK(model.labels().size() == 3);
  CHECK(serialize_model(model) == slurp(ws / "model.txt"));
  CHECK(cli({"train", ws / "feats.csv", "-o", ws / "big.txt", "--k", "31"}).code != 0);
  CHECK_FALSE(fs::exists(ws / "big.txt"));

  const std::string word = (fs::path(ws / "corpus") / "kannada" / "kannada_0004.pbm").string();
  const auto cl = cli({"classify", "-m", ws / "model.txt", "--k", "1", word});
  REQUIRE(cl.code == 0);
  const auto f = split(lines_of(cl.out).at(0));
  REQUIRE(f.size() == 4);
  CHECK(f[0] == fs::path(word).generic_string());
  CHECK(f[1] == "kannada");
  CHECK(std::stod(f[2]) == 1.0);
  CHECK(std::stod(f[3]) > 0.0);

  const auto ev = cli({"evaluate", "-m", ws / "model.txt", "--dump", ws / "feats.csv", "--k", "1", "--csv", ws / "cm.csv"});
  REQUIRE(ev.code == 0);
  CHECK(ev.out.find("overall,30,100.00%,100.00%") != std::string::npos);
  const auto cm = lines_of(slurp(ws / "cm.csv"));
  REQUIRE(cm.size() == 4);
  CHECK(cm[0] == "true\\predicted,devnagari,english_numeral,kannada");
  for (std::size_t i = 1; i < cm.size(); ++i) {
    const auto cells = split(cm[i]);
    int sum = 0;
    for (std::size_t j = 1; j < cells.size(); ++j) sum += std::stoi(cells[j]);
    CHECK(sum == 10);
  }

  const auto loo = cli({"evaluate", "-m", ws / "model.txt", "--loo"});
  REQUIRE(loo.code == 0);
  CHECK(loo.out.find("protocol=leave-one-out") != std::string::npos);

  SUBCASE("unlabelled dumps cannot train") {
    const auto one = cli({"extract", word, "-o", ws / "one.csv"});
    REQUIRE(one.code == 0);
    CHECK(split(lines_of(slurp(ws / "one.csv")).at(0))[1].empty());
    CHECK(cli({"train", ws / "one.csv", "-o", ws / "m1.txt", "--k", "1"}).code != 0);
  }
  SUBCASE("bad model headers are refused") {
    std::string text = slurp(ws / "model.txt");
    text.replace(text.find("opd_0,opd_45"), 12, "opd_45,opd_0");
    std::ofstream(ws / "swapped.txt") << text;
    const auto r = cli({"classify", "-m", ws / "swapped.txt", word});
    CHECK(r.code != 0);
    CHECK(r.err.find("feature") != std::string::npos);
  }
  SUBCASE("page mode") {
    synth::PageParams pp;
    const auto page = synth::generate_page(sheets(), pp, 8);
    pnm::write_file_atomic(ws / "page.pgm", pnm::encode_pgm(page.gray));
    const auto r = cli({"classify", "-m", ws / "model.txt", "--page", ws / "page.pgm"});
    REQUIRE(r.code == 0);
    std::size_t words = 0;
    for (const auto& l : page.lines) words += l.words.size();
    const auto out = lines_of(r.out);
    CHECK(out.size() == words);
    for (const auto& line : out) {
      CHECK(line.find(":L") != std::string::npos);
      CHECK(std::stod(split(line).at(3)) > 0.0);
    }
  }
}

TEST_CASE("extract on a solid rectangle and on bad files") {
  Workspace ws("extract");
  pnm::write_file_atomic(ws / "rect.pbm", pnm::encode_pbm(BinaryImage(7, 12, 1)));
  const auto r = cli({"extract", ws / "rect.pbm", ws / "rect.pbm"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == rows[1]);
  const auto rec = parse_dump_line(rows[0]);
  CHECK(rec.features == extract_features(WordImage(BinaryImage(7, 12, 1))));
  CHECK(rec.features.opd_90 == 1.0);
  CHECK(rec.features.pr == 1.0);

  std::ofstream(ws / "junk.pbm") << "nope";
  const auto mixed = cli({"extract", ws / "junk.pbm", ws / "rect.pbm"});
  CHECK(mixed.code == 0);
  CHECK(mixed.err.find("junk.pbm") != std::string::npos);
  CHECK(lines_of(mixed.out).size() == 1);
  CHECK(cli({"extract", ws / "junk.pbm", "-o", ws / "none.csv"}).code != 0);
  CHECK_FALSE(fs::exists(ws / "none.csv"));
}

TEST_CASE("gen-corpus determinism and missing assets") {
  Workspace ws("gen");
  for (const char* out : {"a", "b"})
    REQUIRE(cli({"--seed", "9", "gen-corpus", "-o", ws / out, "--per-class", "5", "--glyphs", glyph_dir(), "--pages", "2",
                 "--pages-out", ws / (std::string(out) + "_pages"), "--page-skew", "4"})
                .code == 0);
  for (const auto& e : fs::recursive_directory_iterator(ws / "a")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), ws / "a");
    CHECK(slurp(e.path()) == slurp(fs::path(ws / "b") / rel));
  }
  CHECK(slurp(ws / "a_pages/page_002.pgm") == slurp(ws / "b_pages/page_002.pgm"));
  CHECK(slurp(ws / "a_pages/page_001.truth.csv") == slurp(ws / "b_pages/page_001.truth.csv"));
  CHECK(cli({"gen-corpus", "-o", ws / "c", "--glyphs", ws / "nowhere"}).code != 0);
}

TEST_CASE("configuration files") {
  Workspace ws("config");
  std::ofstream(ws / "good.cfg") << "k=5\nmin_area=10\n";
  std::ofstream(ws / "bad.cfg") << "k=4\n";
  pnm::write_file_atomic(ws / "rect.pbm", pnm::encode_pbm(BinaryImage(7, 12, 1)));
  CHECK(cli({"--config", ws / "good.cfg", "extract", ws / "rect.pbm"}).code == 0);
  const auto bad = cli({"--config", ws / "bad.cfg", "extract", ws / "rect.pbm"});
  CHECK(bad.code != 0);
  CHECK(bad.err.find("k must") != std::string::npos);
  CHECK(cli({"--set", "nonsense=1", "extract", ws / "rect.pbm"}).code != 0);
}
