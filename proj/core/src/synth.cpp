#include "scriptid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "scriptid/dataset.hpp"
#include "scriptid/pnm.hpp"

namespace scriptid::synth {

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("empty integer range");
  const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
  return lo + static_cast<int>(next() % span);
}

double Rng::uniform(double lo, double hi) {
  const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + unit * (hi - lo);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng r(seed ^ (stream * 0xD1B54A32D192ED03ULL));
  r.next();
  return r.next();
}

namespace {

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open glyph sheet description " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error(path.string() + ": expected key=value");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

int int_field(const std::map<std::string, std::string>& kv, const std::string& key,
              const std::filesystem::path& where) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error(where.string() + ": missing " + key);
  try {
    return std::stoi(it->second);
  } catch (const std::logic_error&) {
    throw std::runtime_error(where.string() + ": bad " + key);
  }
}

Box ink_columns(const BinaryImage& img) {
  Box b = ink_bounds(img);
  if (b.empty()) return b;
  return Box{0, b.col_min, img.height() - 1, b.col_max};
}

}  // namespace

GlyphSheet load_glyph_sheet(const std::filesystem::path& sheet_file) {
  const auto kv = read_key_values(sheet_file);
  GlyphSheet sheet;
  sheet.name = kv.count("name") ? kv.at("name") : sheet_file.stem().string();
  sheet.cell_width = int_field(kv, "cell_width", sheet_file);
  sheet.cell_height = int_field(kv, "cell_height", sheet_file);
  const int count = int_field(kv, "count", sheet_file);
  sheet.joined = int_field(kv, "joined", sheet_file) != 0;
  if (sheet.cell_width < 1 || sheet.cell_height < 1 || count < 1)
    throw std::runtime_error(sheet_file.string() + ": bad sheet geometry");

  auto image_path = sheet_file;
  image_path.replace_extension(".pbm");
  auto any = pnm::read(image_path);
  const auto* raster = std::get_if<BinaryImage>(&any);
  if (!raster) throw std::runtime_error(image_path.string() + ": glyph sheet must be a PBM");
  if (raster->width() != sheet.cell_width * count || raster->height() != sheet.cell_height)
    throw std::runtime_error(image_path.string() + ": size does not match the sheet description");
  for (int g = 0; g < count; ++g) {
    BinaryImage cell = crop(*raster, Box{0, g * sheet.cell_width, sheet.cell_height - 1, (g + 1) * sheet.cell_width - 1});
    if (count_on(cell) == 0) throw std::runtime_error(image_path.string() + ": empty glyph cell");
    sheet.glyphs.push_back(std::move(cell));
  }
  return sheet;
}

std::vector<GlyphSheet> load_glyph_sheets(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir))
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".sheet") files.push_back(e.path());
  if (files.empty()) throw std::runtime_error("no glyph sheets found in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<GlyphSheet> sheets;
  for (const auto& f : files) sheets.push_back(load_glyph_sheet(f));
  return sheets;
}

int cell_pixels_for_pt(double pt) { return std::max(4, static_cast<int>(std::lround(2.0 * pt))); }

BinaryImage resample(const BinaryImage& img, int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("resample target must be non-empty");
  constexpr int kSub = 4;
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  BinaryImage out(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      int hits = 0;
      for (int i = 0; i < kSub; ++i) {
        const int sr = std::min(img.height() - 1, static_cast<int>((r + (i + 0.5) / kSub) * sy));
        for (int j = 0; j < kSub; ++j) {
          const int sc = std::min(img.width() - 1, static_cast<int>((c + (j + 0.5) / kSub) * sx));
          hits += img(sr, sc);
        }
      }
      if (hits * 10 >= 4 * kSub * kSub) out.set(r, c, 1);
    }
  }
  return out;
}

BinaryImage render_word(const GlyphSheet& sheet, std::span<const int> glyph_ids, double pt) {
  if (glyph_ids.empty()) throw std::invalid_argument("word needs at least one glyph");
  constexpr int kGap = 3;  // between glyphs of unjoined scripts, in sheet pixels
  std::vector<BinaryImage> parts;
  int total = 0;
  for (int id : glyph_ids) {
    if (id < 0 || id >= static_cast<int>(sheet.glyphs.size())) throw std::out_of_range("glyph id out of range");
    const auto& cell = sheet.glyphs[id];
    parts.push_back(sheet.joined ? cell : crop(cell, ink_columns(cell)));
    total += parts.back().width();
  }
  const int gap = sheet.joined ? 0 : kGap;
  total += gap * static_cast<int>(parts.size() - 1);

  BinaryImage base(total, sheet.cell_height);
  int x = 0;
  for (const auto& p : parts) {
    for (int r = 0; r < p.height(); ++r)
      for (int c = 0; c < p.width(); ++c)
        if (p(r, c)) base.set(r, x + c, 1);
    x += p.width() + gap;
  }
  const int height = cell_pixels_for_pt(pt);
  const double scale = static_cast<double>(height) / sheet.cell_height;
  const int width = std::max(1, static_cast<int>(std::lround(total * scale)));
  return resample(base, width, height);
}

BinaryImage boundary_noise(const BinaryImage& img, double p, Rng& rng) {
  BinaryImage out = img;
  if (p <= 0.0) return out;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const auto v = img(r, c);
      bool edge = false;
      constexpr int dr[4] = {-1, 1, 0, 0};
      constexpr int dc[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4 && !edge; ++k) {
        const int rr = r + dr[k];
        const int cc = c + dc[k];
        edge = img.in_bounds(rr, cc) && img(rr, cc) != v;
      }
      if (edge && rng.chance(p)) out.set(r, c, v ^ 1);
    }
  }
  return out;
}

std::vector<GeneratedWord> generate_words(std::span<const GlyphSheet> sheets, const CorpusParams& params) {
  if (params.per_class < 0) throw std::invalid_argument("per_class must be >= 0");
  if (params.min_glyphs < 1 || params.max_glyphs < params.min_glyphs) throw std::invalid_argument("bad glyph count range");
  if (!(params.pt_min > 0.0 && params.pt_max >= params.pt_min)) throw std::invalid_argument("bad point size range");
  std::vector<GeneratedWord> words;
  for (std::size_t s = 0; s < sheets.size(); ++s) {
    const auto& sheet = sheets[s];
    Rng rng(mix_seed(params.seed, s + 1));
    for (int i = 0; i < params.per_class; ++i) {
      GeneratedWord w;
      w.label = sheet.name;
      const int n = rng.uniform_int(params.min_glyphs, params.max_glyphs);
      for (int g = 0; g < n; ++g) w.glyphs.push_back(rng.uniform_int(0, static_cast<int>(sheet.glyphs.size()) - 1));
      w.pt = std::round(rng.uniform(params.pt_min, params.pt_max) * 2.0) / 2.0;
      BinaryImage img = pad(render_word(sheet, w.glyphs, w.pt), 2);
      img = boundary_noise(img, params.noise, rng);
      if (params.max_skew_deg > 0.0) {
        const double angle = rng.uniform(-params.max_skew_deg, params.max_skew_deg);
        img = rotate(pad(img, img.height() / 2), angle);
      }
      const Box b = ink_bounds(img);
      if (b.empty()) {
        --i;  // noise erased the word; draw again
        continue;
      }
      w.image = crop(img, b);
      words.push_back(std::move(w));
    }
  }
  return words;
}

GeneratedPage generate_page(std::span<const GlyphSheet> sheets, const PageParams& params, std::uint64_t seed) {
  if (sheets.empty()) throw std::invalid_argument("no glyph sheets");
  Rng rng(seed);
  const double pt = std::round(rng.uniform(params.pt_min, params.pt_max) * 2.0) / 2.0;
  const int cell = cell_pixels_for_pt(pt);
  const int margin_x = std::max(params.width / 8, 8);
  const int margin_y = std::max(params.height / 7, 8);

  BinaryImage page(params.width, params.height);
  GeneratedPage out{page, GrayImage(params.width, params.height), {}};
  const int lines = rng.uniform_int(params.min_lines, params.max_lines);
  int y = margin_y;
  for (int li = 0; li < lines; ++li) {
    if (y + cell > params.height - margin_y) break;
    LineTruth truth;
    truth.band = {params.height, -1};
    const int nwords = rng.uniform_int(params.min_words, params.max_words);
    int x = margin_x;
    for (int wi = 0; wi < nwords; ++wi) {
      const auto& sheet = sheets[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(sheets.size()) - 1))];
      std::vector<int> ids(static_cast<std::size_t>(rng.uniform_int(1, params.max_glyphs)));
      for (auto& id : ids) id = rng.uniform_int(0, static_cast<int>(sheet.glyphs.size()) - 1);
      const BinaryImage word = render_word(sheet, ids, pt);
      if (x + word.width() > params.width - margin_x) break;
      const Box ink = ink_bounds(word);
      for (int r = 0; r < word.height(); ++r)
        for (int c = 0; c < word.width(); ++c)
          if (word(r, c)) page.set(y + r, x + c, 1);
      truth.words.push_back({sheet.name, x + ink.col_min, x + ink.col_max});
      truth.band.row_start = std::min(truth.band.row_start, y + ink.row_min);
      truth.band.row_end = std::max(truth.band.row_end, y + ink.row_max);
      x += word.width() + static_cast<int>(std::lround(rng.uniform(0.6, 1.0) * cell));
    }
    if (!truth.words.empty()) out.lines.push_back(std::move(truth));
    y += static_cast<int>(std::lround(rng.uniform(1.3, 1.6) * cell));
  }

  out.ink = params.skew_deg != 0.0 ? rotate(page, params.skew_deg) : page;
  std::vector<std::uint8_t> gray(out.ink.size());
  const auto px = out.ink.pixels();
  for (std::size_t i = 0; i < gray.size(); ++i)
    gray[i] = static_cast<std::uint8_t>(px[i] ? rng.uniform_int(20, 60) : rng.uniform_int(215, 240));
  out.gray = GrayImage(params.width, params.height, std::move(gray));
  return out;
}

std::vector<std::string> write_corpus(const std::filesystem::path& root, std::span<const GeneratedWord> words) {
  std::filesystem::create_directories(root);
  std::map<std::string, int> counters;
  std::vector<std::string> written;
  std::ostringstream manifest;
  manifest << "# file,label,glyph_count,pt,glyphs\n";
  for (const auto& w : words) {
    if (!is_valid_field(w.label)) throw std::invalid_argument("label not usable as a directory name: " + w.label);
    const int n = ++counters[w.label];
    char name[32];
    std::snprintf(name, sizeof name, "_%04d.pbm", n);
    const std::string rel = w.label + "/" + w.label + name;
    std::filesystem::create_directories(root / w.label);
    pnm::write_file_atomic(root / rel, pnm::encode_pbm(w.image));
    manifest << rel << ',' << w.label << ',' << w.glyphs.size() << ',' << format_real(w.pt) << ',';
    for (std::size_t i = 0; i < w.glyphs.size(); ++i) manifest << (i ? "-" : "") << w.glyphs[i];
    manifest << '\n';
    written.push_back(rel);
  }
  pnm::write_file_atomic(root / "manifest.csv", manifest.str());
  return written;
}

std::string format_page_truth(const GeneratedPage& page) {
  std::ostringstream os;
  os << "# line,word,row_start,row_end,col_start,col_end,label\n";
  for (std::size_t li = 0; li < page.lines.size(); ++li) {
    const auto& line = page.lines[li];
    for (std::size_t wi = 0; wi < line.words.size(); ++wi) {
      const auto& w = line.words[wi];
      os << li + 1 << ',' << wi + 1 << ',' << line.band.row_start << ',' << line.band.row_end << ',' << w.col_start
         << ',' << w.col_end << ',' << w.label << '\n';
    }
  }
  return std::move(os).str();
}

}  // namespace scriptid::synth
