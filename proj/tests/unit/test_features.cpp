#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "scriptid/features.hpp"
#include "scriptid/morphology.hpp"
#include "scriptid/synth.hpp"

using namespace scriptid;

namespace {

void fill(BinaryImage& img, int r0, int c0, int r1, int c1) {
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) img.set(r, c, 1);
}

double density(const BinaryImage& img) { return static_cast<double>(count_on(img)) / static_cast<double>(img.size()); }

// A ragged word: a few random blobs joined to nothing in particular.
BinaryImage random_word(std::mt19937_64& rng) {
  for (;;) {
    BinaryImage img = oracle::random_blobs(rng, 40, 30, 6);
    if (count_on(img) > 0) return crop(img, ink_bounds(img));
  }
}

}  // namespace

TEST_CASE("se length follows the mean component height") {
  BinaryImage one(4, 10);
  fill(one, 0, 1, 9, 2);
  CHECK(se_length_for(WordImage(one)) == 7);

  BinaryImage two(12, 20);
  fill(two, 0, 0, 9, 2);
  fill(two, 0, 6, 19, 8);
  CHECK(se_length_for(WordImage(two)) == 11);

  BinaryImage flat(6, 2, 1);
  CHECK(se_length_for(WordImage(flat)) == 3);
}

TEST_CASE("opd of a bar and a dot") {
  BinaryImage word(16, 16);
  for (int r = 2; r < 14; ++r) word.set(r, 5, 1);
  word.set(8, 12, 1);
  CHECK(opd(word, 90, 9) == 12.0 / 256.0);
  CHECK(opd(word, 0, 9) == 0.0);
}

TEST_CASE("rectangles survive every direction") {
  BinaryImage rect(7, 12, 1);
  const WordImage w(rect);
  const FeatureVector f = extract_features(w);
  const int len = se_length_for(w);
  CHECK(len == 9);
  CHECK(f.opd_90 == 1.0);
  CHECK(f.opd_0 == 0.0);  // 7 columns are shorter than a 9-pixel line
  CHECK(f.opd_45 == 0.0);
  CHECK(f.opd_135 == 0.0);
  CHECK(f.aar == doctest::Approx(12.0 / 7.0));
  CHECK(f.pr == 1.0);
  CHECK(f.ext == 1.0);
  const auto fl = oracle::flood_fill(rect, 8);
  CHECK(f.ecc == doctest::Approx(oracle::axis_ratio(fl.regions[0])));
  validate(f);
}

TEST_CASE("aar, pixel ratio, eccentricity and extent") {
  BinaryImage tall(5, 10, 1);
  CHECK(aar(WordImage(tall)) == 2.0);

  BinaryImage pair(17, 10);
  fill(pair, 0, 0, 9, 4);
  fill(pair, 0, 7, 4, 16);
  CHECK(aar(WordImage(pair)) == doctest::Approx(1.25));

  BinaryImage ring(5, 5, 1);
  for (int r = 1; r < 4; ++r)
    for (int c = 1; c < 4; ++c) ring.set(r, c, 0);
  CHECK(pixel_ratio(WordImage(ring)) == 1.0);

  BinaryImage sq(9, 9, 1);
  CHECK(avg_eccentricity(WordImage(sq)) == doctest::Approx(1.0));

  BinaryImage plus(3, 3);
  fill(plus, 1, 0, 1, 2);
  fill(plus, 0, 1, 2, 1);
  CHECK(avg_extent(WordImage(plus)) == doctest::Approx(5.0 / 9.0));

  BinaryImage mixed(20, 8);
  fill(mixed, 0, 0, 7, 1);
  fill(mixed, 2, 6, 4, 17);
  const auto fl = oracle::flood_fill(mixed, 8);
  CHECK(avg_eccentricity(WordImage(mixed)) ==
        doctest::Approx((oracle::axis_ratio(fl.regions[0]) + oracle::axis_ratio(fl.regions[1])) / 2.0));
}

TEST_CASE("empty words are rejected") {
  CHECK_THROWS_AS(WordImage(BinaryImage(4, 4)), std::invalid_argument);
  CHECK_THROWS_AS(WordImage::from_crop(BinaryImage(4, 4)), std::invalid_argument);
}

TEST_CASE("stroke direction shows in the directional densities") {
  // Two-pixel strokes: the line length follows the component height, so a
  // horizontal-bar word gets the shortest line, which still cannot fit across.
  BinaryImage vertical(30, 30);
  for (int k = 0; k < 4; ++k) fill(vertical, 2, 2 + 7 * k, 27, 3 + 7 * k);
  const auto v = extract_features(WordImage::from_crop(vertical));
  CHECK(v.opd_90 > v.opd_0);

  const BinaryImage horizontal = transpose(vertical);
  const auto h = extract_features(WordImage::from_crop(horizontal));
  CHECK(h.opd_0 > h.opd_90);
}

TEST_CASE("feature invariants on random words") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    const BinaryImage img = random_word(rng);
    const WordImage w(img);
    const FeatureVector f = extract_features(w);
    CHECK_NOTHROW(validate(f));
    CHECK(f.pr >= density(img));
    for (int d : kLineDirections) CHECK(f.opd(d) <= f.pr);
    CHECK(extract_features(w) == f);

    // Padding then cropping again gives the same vector.
    CHECK(extract_features(WordImage::from_crop(pad(img, 3))) == f);

    if (i < 30) {
      const auto up = extract_features(WordImage(upscale(img, 2)));
      CHECK(std::abs(up.aar - f.aar) < 0.05);
      CHECK(std::abs(up.ecc - f.ecc) < 0.05);
      CHECK(std::abs(up.ext - f.ext) < 0.05);
    }
  }
}

TEST_CASE("validate rejects out of range vectors") {
  FeatureVector f{0.1, 0.1, 0.2, 0.1, 1.0, 0.5, 0.5, 0.5};
  CHECK_NOTHROW(validate(f));
  auto bad = f;
  bad.opd_90 = 0.6;
  CHECK_THROWS(validate(bad));
  bad = f;
  bad.ext = 0.0;
  CHECK_THROWS(validate(bad));
  bad = f;
  bad.ecc = std::nan("");
  CHECK_THROWS(validate(bad));
  CHECK(f.opd(135) == 0.1);
  CHECK_THROWS(f.opd(30));
}
