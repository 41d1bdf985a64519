#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>

#include "scriptid/image.hpp"

namespace scriptid::pnm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyImage = std::variant<GrayImage, BinaryImage>;

// Accepted: P5 and P2 gray (maxval <= 255, rescaled to 0..255 when smaller),
// P4 and P1 bilevel. PBM bit 1 is black, which maps directly to ink.
AnyImage read(std::istream& in);
AnyImage read(const std::filesystem::path& path);

GrayImage read_gray(const std::filesystem::path& path);

void write_pgm(std::ostream& out, const GrayImage& img);
void write_pbm(std::ostream& out, const BinaryImage& img);

std::string encode_pgm(const GrayImage& img);
std::string encode_pbm(const BinaryImage& img);

/// Writes `bytes` to a sibling temporary file and renames it into place, so a
/// failed write never leaves a truncated file at `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace scriptid::pnm
