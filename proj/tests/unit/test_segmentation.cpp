#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "../support/oracles.hpp"
#include "scriptid/segmentation.hpp"
#include "scriptid/synth.hpp"

#ifndef SCRIPTID_GLYPH_DIR
#error "SCRIPTID_GLYPH_DIR must point at the bundled glyph sheets"
#endif

using namespace scriptid;

namespace {

void fill(BinaryImage& img, int r0, int c0, int r1, int c1) {
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) img.set(r, c, 1);
}

const std::vector<synth::GlyphSheet>& sheets() {
  static const auto s = synth::load_glyph_sheets(SCRIPTID_GLYPH_DIR);
  return s;
}

}  // namespace

TEST_CASE("projections are exact counts") {
  CHECK(horizontal_projection(BinaryImage(4, 3)) == std::vector<int>{0, 0, 0});
  CHECK(vertical_projection(BinaryImage(4, 3)) == std::vector<int>{0, 0, 0, 0});
  BinaryImage img(10, 7);
  fill(img, 2, 0, 2, 9);
  fill(img, 0, 5, 6, 5);
  CHECK(horizontal_projection(img)[2] == 10);
  CHECK(vertical_projection(img)[5] == 7);

  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const BinaryImage r = oracle::random_binary(rng, 13, 17, 0.4);
    const auto h = horizontal_projection(r);
    const auto v = vertical_projection(r);
    CHECK(std::accumulate(h.begin(), h.end(), std::size_t{0}) == count_on(r));
    CHECK(std::accumulate(v.begin(), v.end(), std::size_t{0}) == count_on(r));
    for (int x : h) CHECK((x >= 0 && x <= 13));
    for (int x : v) CHECK((x >= 0 && x <= 17));
  }
}

TEST_CASE("line bands") {
  CHECK(segment_lines(BinaryImage(20, 20)).empty());
  BinaryImage page(40, 30);
  fill(page, 3, 2, 9, 30);
  fill(page, 11, 5, 20, 25);
  fill(page, 24, 5, 25, 25);  // too short to be a line
  const auto bands = segment_lines(page);
  REQUIRE(bands.size() == 2);
  CHECK(bands[0] == LineBand{3, 9});
  CHECK(bands[1] == LineBand{11, 20});
}

TEST_CASE("word boxes") {
  BinaryImage page(60, 20);
  fill(page, 5, 2, 14, 12);
  fill(page, 5, 18, 14, 30);  // gap of 5 = 0.5 x height
  const LineBand line{5, 14};
  const auto words = segment_words(page, line);
  REQUIRE(words.size() == 2);
  CHECK(words[0].col_start == 2);
  CHECK(words[0].col_end == 12);
  CHECK(words[1].col_start == 18);
  CHECK(words[1].col_end == 30);

  BinaryImage one(30, 12);
  fill(one, 2, 7, 9, 20);
  const auto single = segment_words(one, LineBand{2, 9});
  REQUIRE(single.size() == 1);
  CHECK(single[0].col_start == 7);
  CHECK(single[0].col_end == 20);

  CHECK(word_gap_min(10) == 2);
  CHECK(word_gap_min(30) == 6);
  CHECK(word_gap_min(3) == 2);
}

TEST_CASE("bands and boxes cover the ink") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 10; ++i) {
    const BinaryImage page = oracle::random_blobs(rng, 120, 90, 30);
    const auto bands = segment_lines(page);
    for (std::size_t b = 1; b < bands.size(); ++b) CHECK(bands[b - 1].row_end < bands[b].row_start);
    for (const auto& band : bands) {
      const auto words = segment_words(page, band);
      std::size_t inside = 0;
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (w > 0) CHECK(words[w - 1].col_end < words[w].col_start);
        for (int r = band.row_start; r <= band.row_end; ++r)
          for (int c = words[w].col_start; c <= words[w].col_end; ++c) inside += page(r, c);
      }
      std::size_t line_ink = 0;
      for (int r = band.row_start; r <= band.row_end; ++r)
        for (int c = 0; c < page.width(); ++c) line_ink += page(r, c);
      CHECK(inside == line_ink);
    }
  }
}

TEST_CASE("generated page lines and words match the layout") {
  synth::PageParams pp;
  pp.min_lines = pp.max_lines = 3;
  pp.min_words = pp.max_words = 4;
  const auto page = synth::generate_page(sheets(), pp, 77);
  const auto bands = segment_lines(page.ink);
  REQUIRE(bands.size() == 3);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(std::abs(bands[l].row_start - page.lines[l].band.row_start) <= 1);
    CHECK(std::abs(bands[l].row_end - page.lines[l].band.row_end) <= 1);
    const auto words = segment_words(page.ink, bands[l]);
    REQUIRE(words.size() == page.lines[l].words.size());
    for (std::size_t w = 0; w < words.size(); ++w) {
      CHECK(std::abs(words[w].col_start - page.lines[l].words[w].col_start) <= 1);
      CHECK(std::abs(words[w].col_end - page.lines[l].words[w].col_end) <= 1);
    }
  }
}

TEST_CASE("rotation") {
  BinaryImage img(21, 21);
  img.set(10, 15, 1);
  CHECK(rotate(img, 0.0) == img);
  // A quarter turn counter-clockwise moves a point right of centre to above it.
  const BinaryImage q = rotate(img, 90.0);
  CHECK(q(5, 10) == 1);
  CHECK(count_on(q) == 1);
}

TEST_CASE("deskew") {
  SUBCASE("pages without enough components are left alone") {
    BinaryImage page(50, 40);
    fill(page, 10, 10, 20, 20);
    const auto res = deskew(page);
    CHECK(res.angle_deg == 0.0);
    CHECK(res.image == page);
    CHECK(deskew(BinaryImage(30, 30)).angle_deg == 0.0);
  }
  SUBCASE("known rotations are recovered") {
    for (double angle : {0.0, 3.0, -7.5}) {
      synth::PageParams pp;
      pp.skew_deg = angle;
      const auto page = synth::generate_page(sheets(), pp, 91);
      const auto res = deskew(page.ink);
      CHECK(std::abs(res.angle_deg - angle) <= (angle == 0.0 ? 0.2 : 0.5));
      CHECK(std::abs(deskew(res.image).angle_deg) <= 0.5);
    }
  }
  SUBCASE("range is validated") {
    DeskewParams bad;
    bad.step_deg = 0.0;
    CHECK_THROWS_AS(estimate_skew(BinaryImage(5, 5), bad), std::invalid_argument);
  }
}
