#include "scriptid/pnm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <system_error>

namespace scriptid::pnm {
namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int ch = in.peek();
    if (ch == std::char_traits<char>::eof()) return;
    if (ch == '#') {
      std::string discard;
      std::getline(in, discard);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  long long value = 0;
  int digits = 0;
  while (std::isdigit(in.peek())) {
    value = value * 10 + (in.get() - '0');
    if (value > 1'000'000'000LL) throw Error(std::string("header value too large: ") + what);
    ++digits;
  }
  if (digits == 0) throw Error(std::string("malformed header: expected ") + what);
  return static_cast<int>(value);
}

void check_dims(int w, int h) {
  if (w < 1 || h < 1) throw Error("image dimensions must be positive");
  if (static_cast<long long>(w) * h > (1LL << 28)) throw Error("image too large");
}

std::uint8_t rescale(int v, int maxval) {
  if (v > maxval) throw Error("sample exceeds maxval");
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

GrayImage read_gray_body(std::istream& in, bool ascii) {
  const int w = read_header_int(in, "width");
  const int h = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  check_dims(w, h);
  if (maxval < 1 || maxval > 255) throw Error("only 8-bit PGM (maxval <= 255) is supported");
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  if (ascii) {
    for (auto& px : data) px = rescale(read_header_int(in, "sample"), maxval);
  } else {
    if (!std::isspace(in.get())) throw Error("missing whitespace after PGM header");
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (in.gcount() != static_cast<std::streamsize>(data.size())) throw Error("truncated PGM raster");
    if (maxval != 255)
      for (auto& px : data) px = rescale(px, maxval);
  }
  return GrayImage(w, h, std::move(data));
}

BinaryImage read_bilevel_body(std::istream& in, bool ascii) {
  const int w = read_header_int(in, "width");
  const int h = read_header_int(in, "height");
  check_dims(w, h);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  if (ascii) {
    for (auto& px : data) {
      skip_space_and_comments(in);
      const int ch = in.get();
      if (ch != '0' && ch != '1') throw Error("malformed plain PBM sample");
      px = static_cast<std::uint8_t>(ch - '0');
    }
  } else {
    if (!std::isspace(in.get())) throw Error("missing whitespace after PBM header");
    const std::size_t stride = (static_cast<std::size_t>(w) + 7) / 8;
    std::vector<unsigned char> row(stride);
    for (int r = 0; r < h; ++r) {
      in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(stride));
      if (in.gcount() != static_cast<std::streamsize>(stride)) throw Error("truncated PBM raster");
      for (int c = 0; c < w; ++c)
        data[static_cast<std::size_t>(r) * w + c] = (row[c / 8] >> (7 - c % 8)) & 1;
    }
  }
  return BinaryImage(w, h, std::move(data));
}

}  // namespace

AnyImage read(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P') throw Error("not a netpbm file");
  switch (magic[1]) {
    case '1': return read_bilevel_body(in, true);
    case '2': return read_gray_body(in, true);
    case '4': return read_bilevel_body(in, false);
    case '5': return read_gray_body(in, false);
    default: throw Error(std::string("unsupported netpbm variant P") + magic[1]);
  }
}

AnyImage read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

GrayImage read_gray(const std::filesystem::path& path) {
  auto any = read(path);
  if (auto* g = std::get_if<GrayImage>(&any)) return std::move(*g);
  const auto& b = std::get<BinaryImage>(any);
  std::vector<std::uint8_t> data(b.size());
  const auto px = b.pixels();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = px[i] ? 0 : 255;
  return GrayImage(b.width(), b.height(), std::move(data));
}

void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  const auto px = img.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

void write_pbm(std::ostream& out, const BinaryImage& img) {
  out << "P4\n" << img.width() << ' ' << img.height() << '\n';
  const std::size_t stride = (static_cast<std::size_t>(img.width()) + 7) / 8;
  std::vector<unsigned char> row(stride);
  for (int r = 0; r < img.height(); ++r) {
    std::fill(row.begin(), row.end(), 0);
    const auto src = img.row(r);
    for (int c = 0; c < img.width(); ++c)
      if (src[c]) row[c / 8] |= static_cast<unsigned char>(0x80u >> (c % 8));
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(stride));
  }
}

std::string encode_pgm(const GrayImage& img) {
  std::ostringstream os(std::ios::binary);
  write_pgm(os, img);
  return std::move(os).str();
}

std::string encode_pbm(const BinaryImage& img) {
  std::ostringstream os(std::ios::binary);
  write_pbm(os, img);
  return std::move(os).str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place: " + path.string());
  }
}

}  // namespace scriptid::pnm
