#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "lienard/error.hpp"
#include "lienard/model.hpp"
#include "lienard/sampling.hpp"

namespace lienard {

/// Problem with a configuration file; `line` is 1-based (0 when the problem
/// is not tied to a line, e.g. a missing key).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Config {
  std::string h;
  double omega = 0.0;
  double A = 0.0;
  double xmin = 0.0;
  double xmax = 0.0;
  int grid_n = 4000;
  int levels = 8;
  std::uint64_t seed = kDefaultSeed;
};

/// `section.key = value` lines, `#` comments, blank lines ignored, LF or
/// CRLF. Required: model.h, model.omega, model.A, domain.xmin, domain.xmax.
/// Optional: grid.n (4000, at least 200), levels (8, 1..20), seed (0x5EED;
/// decimal, 0x hex or 0 octal).
Config parse_config(std::istream& in);
Config load_config(const std::string& path);

/// Builds and validates the model; validation failures become ConfigError.
LienardModel build_model(const Config& c);

}  // namespace lienard
