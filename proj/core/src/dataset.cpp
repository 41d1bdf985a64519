#include "scriptid/dataset.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace scriptid {

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("cannot format real");
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v))
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

bool is_valid_field(std::string_view s) {
  return s.find_first_of(",=\r\n") == std::string_view::npos;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string format_dump_line(const DumpRecord& rec) {
  if (!is_valid_field(rec.path)) throw std::invalid_argument("path not representable in dump: " + rec.path);
  if (rec.label && (rec.label->empty() || !is_valid_field(*rec.label)))
    throw std::invalid_argument("invalid label: " + *rec.label);
  std::string line = rec.path;
  line += ',';
  if (rec.label) line += *rec.label;
  for (double v : rec.features.values()) {
    line += ',';
    line += format_real(v);
  }
  return line;
}

DumpRecord parse_dump_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto fields = split_commas(line);
  if (fields.size() != 2 + kFeatureCount)
    throw std::invalid_argument("expected " + std::to_string(2 + kFeatureCount) + " fields, got " +
                                std::to_string(fields.size()));
  DumpRecord rec;
  rec.path = std::string(fields[0]);
  if (!fields[1].empty()) rec.label = std::string(fields[1]);
  std::array<double, kFeatureCount> v{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) v[i] = parse_real(fields[2 + i]);
  rec.features = FeatureVector::from_values(v);
  return rec;
}

void write_dump(std::ostream& out, const std::vector<DumpRecord>& records) {
  for (const auto& r : records) out << format_dump_line(r) << '\n';
}

std::vector<DumpRecord> read_dump(std::istream& in) {
  std::vector<DumpRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line.front() == '#') continue;
    try {
      out.push_back(parse_dump_line(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("dump line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace scriptid
