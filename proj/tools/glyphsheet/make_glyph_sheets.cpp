// Regenerates the bitmap glyph sheets under assets/glyphs. The sheets are
// committed, so this only needs to run when a glyph design changes:
//
//   make_glyph_sheets <assets/glyphs>
//
// Each glyph is drawn with a round pen on a 40x48 cell. The shapes imitate
// the visual traits the classifier relies on (digit stems, Devanagari
// headlines, rounded Kannada bowls); they are not real typefaces.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "scriptid/image.hpp"
#include "scriptid/pnm.hpp"

namespace {

using scriptid::BinaryImage;

constexpr int kCellW = 40;
constexpr int kCellH = 48;
constexpr double kPen = 2.6;  // pen radius

class Canvas {
 public:
  Canvas() : img_(kCellW, kCellH) {}

  void dot(double x, double y, double radius = kPen) {
    for (int r = 0; r < kCellH; ++r)
      for (int c = 0; c < kCellW; ++c)
        if (std::hypot(c - x, r - y) <= radius) img_.set(r, c, 1);
  }

  void line(double x0, double y0, double x1, double y1) {
    const int steps = static_cast<int>(std::ceil(std::hypot(x1 - x0, y1 - y0) * 4)) + 1;
    for (int i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) / steps;
      dot(x0 + t * (x1 - x0), y0 + t * (y1 - y0));
    }
  }

  // Elliptic arc, angles in degrees measured counter-clockwise from +x with
  // y pointing up on screen. Draws from a0 to a1 in whichever sense the
  // sign of (a1 - a0) gives.
  void arc(double cx, double cy, double rx, double ry, double a0, double a1) {
    const int steps = static_cast<int>(std::abs(a1 - a0) * 2) + 1;
    for (int i = 0; i <= steps; ++i) {
      const double a = (a0 + (a1 - a0) * i / steps) * std::numbers::pi / 180.0;
      dot(cx + rx * std::cos(a), cy - ry * std::sin(a));
    }
  }

  void ring(double cx, double cy, double rx, double ry) { arc(cx, cy, rx, ry, 0, 360); }

  void bar(int x0, int y0, int x1, int y1) {
    for (int r = y0; r <= y1; ++r)
      for (int c = x0; c <= x1; ++c) img_.set(r, c, 1);
  }

  const BinaryImage& image() const { return img_; }

 private:
  BinaryImage img_;
};

using Glyph = std::function<void(Canvas&)>;

std::vector<Glyph> digits() {
  return {
      [](Canvas& k) { k.ring(20, 24, 8.5, 16); },
      [](Canvas& k) {
        k.line(22, 8, 22, 40);
        k.line(22, 8, 14, 15);
      },
      [](Canvas& k) {
        k.arc(20, 16, 8.5, 8, 160, -35);
        k.line(27, 20.5, 11, 40);
        k.line(11, 40, 30, 40);
      },
      [](Canvas& k) {
        k.arc(19, 15.5, 9, 7.5, 150, -90);
        k.arc(19, 31.5, 10, 8.5, 90, -150);
      },
      [](Canvas& k) {
        k.line(25, 8, 11, 31);
        k.line(11, 31, 31, 31);
        k.line(25, 8, 25, 40);
      },
      [](Canvas& k) {
        k.line(29, 8, 14, 8);
        k.line(14, 8, 13, 22);
        k.arc(19.5, 30, 10, 10, 125, -150);
      },
      [](Canvas& k) {
        k.ring(20, 31, 9, 9.5);
        k.arc(24, 31, 13, 23, 100, 180);
      },
      [](Canvas& k) {
        k.line(10, 8, 30, 8);
        k.line(30, 8, 17, 40);
      },
      [](Canvas& k) {
        k.ring(20, 15.5, 8, 7.5);
        k.ring(20, 31.5, 10, 8.5);
      },
      [](Canvas& k) {
        k.ring(20, 16.5, 9, 9);
        k.line(29, 16.5, 27, 40);
      },
  };
}

// Headline across the full cell so neighbouring glyphs fuse into one stroke.
void headline(Canvas& k) { k.bar(0, 8, kCellW - 1, 12); }

std::vector<Glyph> devnagari() {
  return {
      [](Canvas& k) {  // ka-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.ring(19, 27, 6.5, 7);
        k.line(25, 27, 30, 27);
      },
      [](Canvas& k) {  // ga-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.line(14, 10, 14, 34);
        k.arc(10, 34, 4, 4, 0, -150);
      },
      [](Canvas& k) {  // pa-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.line(12, 10, 12, 26);
        k.arc(21, 26, 9, 8, 180, 360);
      },
      [](Canvas& k) {  // ma-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.ring(13, 19, 4.5, 4.5);
        k.line(13, 23, 13, 30);
        k.line(13, 30, 30, 30);
      },
      [](Canvas& k) {  // sa-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.ring(12, 20, 4.5, 5);
        k.arc(19, 27, 8, 8, 180, 330);
        k.line(22, 27, 30, 27);
      },
      [](Canvas& k) {  // va-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.ring(18, 28, 7.5, 8.5);
        k.line(25, 28, 30, 28);
      },
      [](Canvas& k) {  // na-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.line(13, 10, 13, 29);
        k.line(13, 29, 30, 29);
      },
      [](Canvas& k) {  // ta-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.arc(20, 24, 9, 9, 90, 260);
        k.line(18, 33, 30, 33);
      },
      [](Canvas& k) {  // ba-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.line(12, 10, 12, 24);
        k.ring(19, 28, 7, 7.5);
        k.line(12, 24, 26, 33);
      },
      [](Canvas& k) {  // da-like, no stem
        headline(k);
        k.line(19, 10, 19, 18);
        k.arc(21, 27, 8, 8.5, 150, -150);
        k.arc(15, 38, 5, 4, 60, 200);
      },
      [](Canvas& k) {  // ra-like, no stem
        headline(k);
        k.line(15, 10, 22, 22);
        k.arc(18, 28, 8, 7, 30, -90);
        k.line(18, 35, 26, 40);
      },
      [](Canvas& k) {  // la-like
        headline(k);
        k.line(30, 10, 30, 42);
        k.arc(17, 21, 6, 6, 270, 60);
        k.arc(17, 33, 7, 6, 90, -90);
        k.line(17, 39, 30, 34);
      },
  };
}

// Head hook sitting on the bowl, the common trait of the Kannada glyphs.
void hook(Canvas& k, double cx) { k.arc(cx, 20, 7, 5, 200, -20); }

std::vector<Glyph> kannada() {
  return {
      [](Canvas& k) {
        k.ring(20, 32, 10.5, 9.5);
        hook(k, 20);
      },
      [](Canvas& k) {
        k.ring(13, 33, 7, 8);
        k.ring(27, 33, 7, 8);
        hook(k, 20);
      },
      [](Canvas& k) {
        k.arc(20, 32, 10.5, 9.5, 45, 315);
        k.arc(22, 32, 4, 4, 180, -90);
        hook(k, 20);
      },
      [](Canvas& k) {
        k.arc(20, 31, 10, 10, 180, 360);
        k.line(10, 31, 10, 24);
        k.line(30, 31, 30, 24);
        hook(k, 20);
      },
      [](Canvas& k) {
        k.ring(20, 30, 10, 8.5);
        k.arc(14, 40, 6, 3.5, 0, -180);
        hook(k, 20);
      },
      [](Canvas& k) {
        k.ring(17, 32, 8.5, 9);
        k.ring(29.5, 30, 4.5, 5);
        hook(k, 17);
      },
      [](Canvas& k) {
        k.arc(20, 30, 10, 10, 160, 380);
        k.arc(12, 27, 3.5, 3.5, 0, 200);
        hook(k, 22);
      },
      [](Canvas& k) {
        k.ring(20, 32, 10.5, 9.5);
        k.line(11, 32, 29, 32);
        hook(k, 20);
      },
      [](Canvas& k) {
        k.arc(13, 33, 7, 8, 0, 360);
        k.arc(27, 33, 7, 8, 180, 360);
        k.line(34, 33, 34, 26);
        hook(k, 13);
      },
      [](Canvas& k) {
        k.arc(18, 32, 9.5, 9.5, 90, 400);
        k.line(30, 25, 30, 39);
        hook(k, 18);
      },
      [](Canvas& k) {
        k.ring(19, 31, 10, 9);
        k.arc(31, 39, 4, 3.5, 180, 330);
        hook(k, 19);
      },
      [](Canvas& k) {
        k.arc(20, 31, 10.5, 10, 0, 300);
        k.line(25, 22.5, 20, 31);
        hook(k, 20);
      },
  };
}

void write_sheet(const std::filesystem::path& dir, const std::string& name, const std::vector<Glyph>& glyphs,
                 bool joined) {
  const int count = static_cast<int>(glyphs.size());
  BinaryImage sheet(kCellW * count, kCellH);
  for (int g = 0; g < count; ++g) {
    Canvas k;
    glyphs[g](k);
    const auto& cell = k.image();
    for (int r = 0; r < kCellH; ++r)
      for (int c = 0; c < kCellW; ++c)
        if (cell(r, c)) sheet.set(r, g * kCellW + c, 1);
  }
  scriptid::pnm::write_file_atomic(dir / (name + ".pbm"), scriptid::pnm::encode_pbm(sheet));
  std::ofstream meta(dir / (name + ".sheet"));
  meta << "name=" << name << "\ncell_width=" << kCellW << "\ncell_height=" << kCellH << "\ncount=" << count
       << "\njoined=" << (joined ? 1 : 0) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_glyph_sheets <output-dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  write_sheet(dir, "english_numeral", digits(), false);
  write_sheet(dir, "devnagari", devnagari(), true);
  write_sheet(dir, "kannada", kannada(), false);
  std::cout << "wrote glyph sheets to " << dir << '\n';
  return 0;
}
