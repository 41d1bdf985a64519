#include "scriptid/config.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

#include "scriptid/dataset.hpp"

namespace scriptid {
namespace {

long long parse_integer(std::string_view key, std::string_view text) {
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ConfigError("setting '" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'");
  return v;
}

double parse_decimal(std::string_view key, std::string_view text) {
  try {
    return parse_real(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("setting '" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
}

bool parse_flag(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "off" || text == "no") return false;
  throw ConfigError("setting '" + std::string(key) + "' expects a boolean, got '" + std::string(text) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int as_int(std::string_view key, std::string_view text) {
  const long long v = parse_integer(key, text);
  if (v < -1'000'000 || v > 1'000'000) throw ConfigError("setting '" + std::string(key) + "' out of range");
  return static_cast<int>(v);
}

}  // namespace

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (min_area < 1) fail("min_area must be >= 1");
  if (segmentation.tau_line < 0) fail("tau_line must be >= 0");
  if (segmentation.tau_word < 0) fail("tau_word must be >= 0");
  if (segmentation.min_line_height < 1) fail("min_line_height must be >= 1");
  if (!(segmentation.gap_ratio >= 0.0 && segmentation.gap_ratio <= 10.0)) fail("gap_ratio must be in [0,10]");
  if (segmentation.gap_floor < 1) fail("gap_floor must be >= 1");
  if (!(deskew_params.max_angle_deg >= 0.0 && deskew_params.max_angle_deg <= 45.0))
    fail("deskew_max_angle must be in [0,45]");
  if (!(deskew_params.step_deg >= 0.01 && deskew_params.step_deg <= 5.0)) fail("deskew_step must be in [0.01,5]");
  if (deskew_params.dilate_length < 1 || deskew_params.dilate_length > 200)
    fail("deskew_dilate_length must be in [1,200]");
  if (features.se_ratio_permille < 1 || features.se_ratio_permille > 5000) fail("se_ratio must be in (0,5]");
  if (k < 1 || k % 2 == 0) fail("k must be a positive odd integer");
}

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "min_area") {
    const long long v = parse_integer(key, value);
    if (v < 1) throw ConfigError("min_area must be >= 1");
    cfg.min_area = static_cast<std::size_t>(v);
    cfg.deskew_params.min_area = cfg.min_area;
  } else if (key == "deskew") {
    cfg.deskew = parse_flag(key, value);
  } else if (key == "tau_line") {
    cfg.segmentation.tau_line = as_int(key, value);
  } else if (key == "tau_word") {
    cfg.segmentation.tau_word = as_int(key, value);
  } else if (key == "min_line_height") {
    cfg.segmentation.min_line_height = as_int(key, value);
  } else if (key == "gap_ratio") {
    cfg.segmentation.gap_ratio = parse_decimal(key, value);
  } else if (key == "gap_floor") {
    cfg.segmentation.gap_floor = as_int(key, value);
  } else if (key == "deskew_max_angle") {
    cfg.deskew_params.max_angle_deg = parse_decimal(key, value);
  } else if (key == "deskew_step") {
    cfg.deskew_params.step_deg = parse_decimal(key, value);
  } else if (key == "deskew_dilate_length") {
    cfg.deskew_params.dilate_length = as_int(key, value);
  } else if (key == "se_ratio") {
    const double r = parse_decimal(key, value);
    if (!(r > 0.0 && r <= 5.0)) throw ConfigError("se_ratio must be in (0,5]");
    cfg.features.se_ratio_permille = static_cast<int>(std::lround(r * 1000.0));
  } else if (key == "k") {
    cfg.k = as_int(key, value);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

PipelineConfig load_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    try {
      apply_setting(cfg, trim(body.substr(0, eq)), body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::string describe(const PipelineConfig& cfg) {
  std::ostringstream os;
  os << "min_area=" << cfg.min_area << '\n'
     << "deskew=" << (cfg.deskew ? "true" : "false") << '\n'
     << "tau_line=" << cfg.segmentation.tau_line << '\n'
     << "tau_word=" << cfg.segmentation.tau_word << '\n'
     << "min_line_height=" << cfg.segmentation.min_line_height << '\n'
     << "gap_ratio=" << format_real(cfg.segmentation.gap_ratio) << '\n'
     << "gap_floor=" << cfg.segmentation.gap_floor << '\n'
     << "deskew_max_angle=" << format_real(cfg.deskew_params.max_angle_deg) << '\n'
     << "deskew_step=" << format_real(cfg.deskew_params.step_deg) << '\n'
     << "deskew_dilate_length=" << cfg.deskew_params.dilate_length << '\n'
     << "se_ratio=" << format_real(cfg.features.se_ratio_permille / 1000.0) << '\n'
     << "k=" << cfg.k << '\n';
  return std::move(os).str();
}

}  // namespace scriptid
