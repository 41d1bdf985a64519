#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "scriptid/config.hpp"
#include "scriptid/dataset.hpp"
#include "scriptid/pnm.hpp"

using namespace scriptid;
namespace fs = std::filesystem;

TEST_CASE("pbm and pgm round-trip") {
  std::mt19937_64 rng(61);
  for (int w : {1, 7, 8, 9, 17}) {
    const BinaryImage b = oracle::random_binary(rng, w, 5, 0.5);
    std::istringstream in(pnm::encode_pbm(b));
    CHECK(std::get<BinaryImage>(pnm::read(in)) == b);
    const GrayImage g = oracle::random_gray(rng, w, 4);
    std::istringstream gin(pnm::encode_pgm(g));
    CHECK(std::get<GrayImage>(pnm::read(gin)) == g);
  }
}

TEST_CASE("pbm bytes are packed msb first with padded rows") {
  BinaryImage b(10, 2);
  b.set(0, 0, 1);
  b.set(0, 9, 1);
  b.set(1, 1, 1);
  const std::string bytes = pnm::encode_pbm(b);
  const std::string header = "P4\n10 2\n";
  REQUIRE(bytes.size() == header.size() + 4);
  CHECK(bytes.substr(0, header.size()) == header);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 0]) == 0x80);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 1]) == 0x40);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 2]) == 0x40);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 3]) == 0x00);
}

TEST_CASE("plain formats, comments and small maxval") {
  std::istringstream p1("P1\n# note\n3 2\n1 0 1\n0 1 0\n");
  const auto b = std::get<BinaryImage>(pnm::read(p1));
  CHECK(b(0, 0) == 1);
  CHECK(b(1, 1) == 1);
  CHECK(count_on(b) == 3);
  std::istringstream p2("P2 2 1 15 0 15\n");
  const auto g = std::get<GrayImage>(pnm::read(p2));
  CHECK(g(0, 0) == 0);
  CHECK(g(0, 1) == 255);
}

TEST_CASE("malformed images are rejected") {
  for (const std::string bad : {"", "P3\n1 1\n255\n0 0 0\n", "P5\n2 2\n255\nab", "P4\n0 3\n", "P5\n1 1\n300\n\x01",
                                "P2\n2 1\n255\n7\n", "P1\n2 1\n1 2\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(pnm::read(in), pnm::Error);
  }
}

TEST_CASE("atomic writes leave no partial file") {
  const fs::path dir = fs::temp_directory_path() / "scriptid_io_test";
  fs::create_directories(dir);
  pnm::write_file_atomic(dir / "a.txt", "hello");
  std::ifstream in(dir / "a.txt");
  std::string s;
  in >> s;
  CHECK(s == "hello");
  CHECK_THROWS(pnm::write_file_atomic(dir / "missing" / "b.txt", "x"));
  CHECK_FALSE(fs::exists(dir / "missing" / "b.txt"));
  fs::remove_all(dir);
}

TEST_CASE("real numbers print shortest and parse back exactly") {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    CHECK(parse_real(format_real(v)) == v);
  }
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(1.0) == "1");
  CHECK_THROWS(parse_real("1.5x"));
  CHECK_THROWS(parse_real(""));
  CHECK_THROWS(parse_real("nan"));
}

TEST_CASE("feature dump lines") {
  const DumpRecord labelled{"corpus/kannada/k_0001.pbm", "kannada", {0.1, 0.2, 0.3, 0.05, 1.5, 0.6, 0.7, 0.4}};
  const std::string line = format_dump_line(labelled);
  CHECK(line == "corpus/kannada/k_0001.pbm,kannada,0.1,0.2,0.3,0.05,1.5,0.6,0.7,0.4");
  CHECK(parse_dump_line(line) == labelled);

  const DumpRecord bare{"w.pbm", std::nullopt, labelled.features};
  CHECK(format_dump_line(bare) == "w.pbm,,0.1,0.2,0.3,0.05,1.5,0.6,0.7,0.4");
  CHECK(parse_dump_line(format_dump_line(bare)) == bare);

  CHECK_THROWS(parse_dump_line("w.pbm,x,1,2"));
  CHECK_THROWS(parse_dump_line("w.pbm,x,a,0,0,0,1,0,0,1"));
  CHECK_FALSE(is_valid_field("a,b"));
  CHECK_FALSE(is_valid_field("a=b"));

  std::ostringstream out;
  write_dump(out, {labelled, bare});
  std::istringstream in("# header\n\n" + out.str());
  const auto back = read_dump(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == labelled);
  CHECK(back[1] == bare);
}

TEST_CASE("configuration") {
  std::istringstream in("# tuned\nmin_area = 20\ndeskew=off\nk=5\nse_ratio=0.6\ngap_ratio=0.25\n");
  const PipelineConfig cfg = load_config(in);
  CHECK(cfg.min_area == 20);
  CHECK(cfg.deskew_params.min_area == 20);
  CHECK_FALSE(cfg.deskew);
  CHECK(cfg.k == 5);
  CHECK(cfg.features.se_ratio_permille == 600);
  CHECK(cfg.segmentation.gap_ratio == 0.25);

  std::istringstream again(describe(cfg));
  CHECK(describe(load_config(again)) == describe(cfg));

  for (const std::string bad : {"k=4\n", "k=0\n", "colour=red\n", "min_area=0\n", "deskew_step=0\n", "tau_line=x\n",
                                "novalue\n", "se_ratio=1e300\n", "deskew=maybe\n"}) {
    std::istringstream s(bad);
    CHECK_THROWS_AS(load_config(s), ConfigError);
  }
}
