#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scriptid/features.hpp"

namespace scriptid {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);
/// Strict decimal parse of a whole finite field; throws std::invalid_argument.
double parse_real(std::string_view text);

/// One line of a feature dump: `path,label,f1,...,f8`. The label field is
/// empty for unlabeled words.
struct DumpRecord {
  std::string path;
  std::optional<std::string> label;
  FeatureVector features;
  friend bool operator==(const DumpRecord&, const DumpRecord&) = default;
};

/// Labels and paths may not contain commas, '=' or line breaks.
bool is_valid_field(std::string_view s);

std::string format_dump_line(const DumpRecord& rec);
DumpRecord parse_dump_line(std::string_view line);

void write_dump(std::ostream& out, const std::vector<DumpRecord>& records);
/// Blank lines and lines starting with '#' are skipped. Errors carry the line number.
std::vector<DumpRecord> read_dump(std::istream& in);

}  // namespace scriptid
