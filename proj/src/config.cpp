#include "lienard/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>

namespace lienard {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& text, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a decimal number, got '" + text + "'", line);
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text, int line) {
  long long v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + text + "'", line);
  return v;
}

std::uint64_t parse_seed(const std::string& text, int line) {
  std::string_view s = text;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  } else if (s.size() > 1 && s[0] == '0') {
    base = 8;
    s.remove_prefix(1);
  }
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("seed: expected a non-negative integer, got '" + text + "'", line);
  }
  return v;
}

const std::set<std::string> kRequired = {"model.h", "model.omega", "model.A", "domain.xmin", "domain.xmax"};
const std::set<std::string> kOptional = {"grid.n", "levels", "seed"};

}  // namespace

Config parse_config(std::istream& in) {
  std::map<std::string, std::pair<std::string, int>> values;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed line (expected key = value)", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("malformed line (empty key)", line_no);
    if (!kRequired.count(key) && !kOptional.count(key)) throw ConfigError("unknown key '" + key + "'", line_no);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
    if (values.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    values[key] = {value, line_no};
  }
  for (const std::string& key : kRequired) {
    if (!values.count(key)) throw ConfigError("missing required key '" + key + "'", 0);
  }

  Config c;
  c.h = values["model.h"].first;
  auto real = [&](const std::string& key) { return parse_real(key, values[key].first, values[key].second); };
  c.omega = real("model.omega");
  c.A = real("model.A");
  c.xmin = real("domain.xmin");
  c.xmax = real("domain.xmax");
  if (values.count("grid.n")) {
    const auto& [text, line] = values["grid.n"];
    const long long n = parse_integer("grid.n", text, line);
    if (n < 200 || n > 10'000'000) throw ConfigError("grid.n must be an integer in [200, 10000000]", line);
    c.grid_n = static_cast<int>(n);
  }
  if (values.count("levels")) {
    const auto& [text, line] = values["levels"];
    const long long n = parse_integer("levels", text, line);
    if (n < 1 || n > 20) throw ConfigError("levels must be an integer in [1, 20]", line);
    c.levels = static_cast<int>(n);
  }
  if (values.count("seed")) c.seed = parse_seed(values["seed"].first, values["seed"].second);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
  return parse_config(in);
}

LienardModel build_model(const Config& c) {
  try {
    return LienardModel::build(c.h, c.omega, c.A, Interval{c.xmin, c.xmax});
  } catch (const ParseError& e) {
    throw ConfigError(std::string("model.h: ") + e.what(), 0);
  } catch (const Error& e) {
    throw ConfigError(e.what(), 0);
  }
}

}  // namespace lienard
