#include "scriptid/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scriptid {
namespace {

using u128 = unsigned __int128;

// a/b <=> c/d without overflow for b, d > 0, by Euclid-style expansion.
int compare_fractions(u128 a, u128 b, u128 c, u128 d) {
  for (;;) {
    const u128 qa = a / b;
    const u128 qc = c / d;
    if (qa != qc) return qa < qc ? -1 : 1;
    const u128 ra = a % b;
    const u128 rc = c % d;
    if (ra == 0 || rc == 0) {
      if (ra == rc) return 0;
      return ra == 0 ? -1 : 1;
    }
    // ra/b <=> rc/d  is  d/rc <=> b/ra
    a = d;
    c = b;
    b = rc;
    d = ra;
  }
}

}  // namespace

int otsu_threshold(const GrayImage& img) {
  std::array<std::uint64_t, 256> hist{};
  for (auto v : img.pixels()) ++hist[v];

  const std::uint64_t total = img.size();
  std::uint64_t weighted_total = 0;
  for (int i = 0; i < 256; ++i) weighted_total += static_cast<std::uint64_t>(i) * hist[i];

  // Between-class variance at t is proportional to
  //   (N * S0 - n0 * S)^2 / (n0 * (N - n0))
  // where n0, S0 are the count and intensity sum of levels <= t. Keeping it as
  // an exact fraction makes the argmax and its tie-break reproducible.
  int best_t = -1;
  u128 best_num = 0;
  u128 best_den = 1;
  std::uint64_t n0 = 0;
  std::uint64_t s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist[t];
    s0 += static_cast<std::uint64_t>(t) * hist[t];
    if (n0 == 0 || n0 == total) continue;
    const u128 lhs = static_cast<u128>(total) * s0;
    const u128 rhs = static_cast<u128>(n0) * weighted_total;
    const u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    const u128 num = diff * diff;
    const u128 den = static_cast<u128>(n0) * (total - n0);
    if (best_t < 0 || compare_fractions(num, den, best_num, best_den) > 0) {
      best_t = t;
      best_num = num;
      best_den = den;
    }
  }
  if (best_t >= 0) return best_t;
  // Single intensity present.
  for (int i = 0; i < 256; ++i)
    if (hist[i]) return i;
  return 0;
}

BinaryImage binarize(const GrayImage& img, int t) {
  std::vector<std::uint8_t> out(img.size());
  const auto px = img.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = px[i] <= t ? 1 : 0;
  return BinaryImage(img.width(), img.height(), std::move(out));
}

Labeling connected_components(const BinaryImage& img, Connectivity conn) {
  const int w = img.width();
  const int h = img.height();
  Labeling result;
  result.width = w;
  result.height = h;
  result.labels.assign(img.size(), 0);

  // First pass: provisional labels with union-find on equivalences.
  std::vector<std::int32_t> parent{0};
  auto find = [&](std::int32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b)
      parent[b] = a;
    else
      parent[a] = b;
  };

  const bool eight = conn == Connectivity::Eight;
  auto& lab = result.labels;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!img(r, c)) continue;
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      std::int32_t current = 0;
      auto visit = [&](int rr, int cc) {
        if (rr < 0 || cc < 0 || cc >= w) return;
        const std::int32_t l = lab[static_cast<std::size_t>(rr) * w + cc];
        if (l == 0) return;
        if (current == 0)
          current = l;
        else
          unite(current, l);
      };
      visit(r, c - 1);
      visit(r - 1, c);
      if (eight) {
        visit(r - 1, c - 1);
        visit(r - 1, c + 1);
      }
      if (current == 0) {
        current = static_cast<std::int32_t>(parent.size());
        parent.push_back(current);
      }
      lab[i] = current;
    }
  }

  // Second pass: final ids in order of first appearance, which is raster
  // discovery order of each component's first pixel.
  std::vector<std::int32_t> final_id(parent.size(), 0);
  std::int32_t next = 0;
  for (auto& l : lab) {
    if (l == 0) continue;
    const std::int32_t root = find(l);
    if (final_id[root] == 0) final_id[root] = ++next;
    l = final_id[root];
  }

  struct Acc {
    std::int64_t n = 0, sr = 0, sc = 0;
    __int128 srr = 0, scc = 0, src = 0;
    Box box{0, 0, -1, -1};
  };
  std::vector<Acc> acc(static_cast<std::size_t>(next) + 1);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::int32_t l = lab[static_cast<std::size_t>(r) * w + c];
      if (l == 0) continue;
      Acc& a = acc[l];
      if (a.n == 0) a.box = Box{r, c, r, c};
      ++a.n;
      a.sr += r;
      a.sc += c;
      a.srr += static_cast<__int128>(r) * r;
      a.scc += static_cast<__int128>(c) * c;
      a.src += static_cast<__int128>(r) * c;
      a.box.row_min = std::min(a.box.row_min, r);
      a.box.row_max = std::max(a.box.row_max, r);
      a.box.col_min = std::min(a.box.col_min, c);
      a.box.col_max = std::max(a.box.col_max, c);
    }
  }

  result.components.reserve(static_cast<std::size_t>(next));
  for (std::int32_t id = 1; id <= next; ++id) {
    const Acc& a = acc[id];
    ComponentStats s;
    s.id = id;
    s.area = static_cast<std::size_t>(a.n);
    s.bbox = a.box;
    const double n = static_cast<double>(a.n);
    s.centroid = {static_cast<double>(a.sr) / n, static_cast<double>(a.sc) / n};
    // n^2 * variance, computed exactly before the single division.
    const __int128 n2 = static_cast<__int128>(a.n) * a.n;
    const double vrr = static_cast<double>(a.n * a.srr - static_cast<__int128>(a.sr) * a.sr) / static_cast<double>(n2);
    const double vcc = static_cast<double>(a.n * a.scc - static_cast<__int128>(a.sc) * a.sc) / static_cast<double>(n2);
    const double vrc = static_cast<double>(a.n * a.src - static_cast<__int128>(a.sr) * a.sc) / static_cast<double>(n2);
    s.mu_rr = vrr + 1.0 / 12.0;
    s.mu_cc = vcc + 1.0 / 12.0;
    s.mu_rc = vrc;
    const double mean = 0.5 * (s.mu_rr + s.mu_cc);
    const double half_diff = 0.5 * (s.mu_rr - s.mu_cc);
    const double root = std::sqrt(half_diff * half_diff + s.mu_rc * s.mu_rc);
    const double lambda_major = mean + root;
    const double lambda_minor = std::max(0.0, mean - root);
    s.major_axis_len = 4.0 * std::sqrt(lambda_major);
    s.minor_axis_len = 4.0 * std::sqrt(lambda_minor);
    result.components.push_back(s);
  }
  return result;
}

double component_eccentricity(const ComponentStats& c) {
  if (c.area == 0) throw std::invalid_argument("component has no pixels");
  if (c.major_axis_len <= 0.0) return 1.0;
  return std::clamp(c.minor_axis_len / c.major_axis_len, 0.0, 1.0);
}

double component_extent(const ComponentStats& c) {
  if (c.area == 0) throw std::invalid_argument("component has no pixels");
  return static_cast<double>(c.area) /
         (static_cast<double>(c.bbox.height()) * static_cast<double>(c.bbox.width()));
}

BinaryImage remove_small_objects(const BinaryImage& img, std::size_t min_area) {
  const Labeling lab = connected_components(img, Connectivity::Eight);
  std::vector<std::uint8_t> keep(lab.components.size() + 1, 0);
  for (const auto& c : lab.components) keep[c.id] = c.area >= min_area ? 1 : 0;
  std::vector<std::uint8_t> out(img.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = keep[lab.labels[i]];
  return BinaryImage(img.width(), img.height(), std::move(out));
}

}  // namespace scriptid
