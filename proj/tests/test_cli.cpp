#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lienard/cli.hpp"
#include "lienard/config.hpp"

using namespace lienard;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(LIENARD_TEST_DATA) + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "lienard_cli_test";
  fs::create_directories(dir);
  return dir;
}

const char* kFull =
    "# cubic map\n"
    "model.h = x + x^3/3\n"
    "model.omega = 1\n"
    "model.A = 0\n"
    "domain.xmin = -4\n"
    "domain.xmax = 4   # trailing comment\n"
    "\n"
    "grid.n = 2000\n"
    "levels = 5\n"
    "seed = 0x10\n";

Config parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("config parsing") {
  const Config c = parse_text(kFull);
  CHECK(c.h == "x + x^3/3");
  CHECK(c.omega == 1.0);
  CHECK(c.A == 0.0);
  CHECK(c.xmin == -4.0);
  CHECK(c.xmax == 4.0);
  CHECK(c.grid_n == 2000);
  CHECK(c.levels == 5);
  CHECK(c.seed == 16);

  std::string crlf;
  for (const char ch : std::string(kFull)) {
    if (ch == '\n') crlf += '\r';
    crlf += ch;
  }
  const Config d = parse_text(crlf);
  CHECK(d.h == c.h);
  CHECK(d.seed == c.seed);

  const Config defaults = parse_text("model.h = x\nmodel.omega = 2\nmodel.A = 0\ndomain.xmin = -9\ndomain.xmax = 9\n");
  CHECK(defaults.grid_n == 4000);
  CHECK(defaults.levels == 8);
  CHECK(defaults.seed == 0x5EED);
  CHECK(parse_text(std::string(kFull).replace(std::string(kFull).find("0x10"), 4, "017")).seed == 15);
}

TEST_CASE("config errors") {
  const std::string full = kFull;
  auto error_of = [](const std::string& text) -> std::string {
    try {
      parse_text(text);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  auto without = [&](const std::string& key) {
    std::string out;
    for (const std::string& l : lines(full)) {
      if (l.rfind(key, 0) != 0) out += l + "\n";
    }
    return out;
  };

  CHECK(error_of(without("model.omega")).find("model.omega") != std::string::npos);
  CHECK(error_of(full + "grid.n = -5\n").find("grid.n") != std::string::npos);  // duplicate
  CHECK(error_of(without("grid.n") + "grid.n = -5\n").find("grid.n") != std::string::npos);
  CHECK(error_of(without("grid.n") + "grid.n = 12.5\n") != "");
  CHECK(error_of(full + "model.colour = red\n").find("line 11") != std::string::npos);
  CHECK(error_of(full + "this line has no equals\n").find("line 11") != std::string::npos);
  CHECK(error_of(without("model.A") + "model.A =\n") != "");
  CHECK(error_of(without("model.A") + "model.A = 1/5\n") != "");
  CHECK(error_of(without("levels") + "levels = 21\n") != "");
  CHECK(error_of(without("seed") + "seed = -3\n") != "");
  CHECK_THROWS_AS(load_config("/nonexistent/lienard.cfg"), ConfigError);
}

TEST_CASE("model validation surfaces as a config error") {
  Config c = parse_text(kFull);
  c.A = 0.5;
  CHECK_THROWS_AS(build_model(c), ConfigError);
  c = parse_text(kFull);
  c.h = "x +";
  CHECK_THROWS_AS(build_model(c), ConfigError);
}

TEST_CASE("spectrum writes one row per level") {
  const fs::path out = scratch_dir() / "s.csv";
  const Run r = run_cli({"spectrum", "--config", data("cubic.cfg"), "--levels", "8", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == "n,E_numeric,E_closed,abs_err");
  CHECK(rows[1].rfind("0,0.4999", 0) == 0);
}

TEST_CASE("symmetry table for A != 0") {
  const Run r = run_cli({"symmetries", "--config", data("linear_isotonic.cfg")});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 9);
  for (int i = 1; i <= 8; ++i) {
    const std::string want = i <= 3 ? ",noether" : ",not_symmetry";
    CHECK(rows[i].rfind("Gamma_" + std::to_string(i) + ",", 0) == 0);
    CHECK(rows[i].size() > want.size());
    CHECK(rows[i].compare(rows[i].size() - want.size(), want.size(), want) == 0);
  }
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"report", "--config", data("bad.cfg")}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"spectrum"}).code == 2);
  CHECK(run_cli({"frobnicate", "--config", data("cubic.cfg")}).code == 2);
  CHECK(run_cli({"spectrum", "--config", data("cubic.cfg"), "--levels", "0"}).code == 2);
  CHECK(run_cli({"spectrum", "--config", data("cubic.cfg"), "--bogus"}).code == 2);
  CHECK(run_cli({"spectrum", "--config", data("missing.cfg")}).code == 2);
  CHECK(run_cli({"spectrum", "--config", data("cubic.cfg"), "--plot"}).code == 2);  // --plot needs --out
  CHECK(run_cli({"vonroos", "--config", data("exp_isotonic.cfg")}).code == 2);      // omega must be 1/2
  CHECK(run_cli({"--help"}).code == 0);

  const Run ok = run_cli({"report", "--config", data("linear_isotonic.cfg")});
  CHECK(ok.code == 0);
  for (const std::string& l : lines(ok.out)) CHECK(l.find(",FAIL,") == std::string::npos);
}

TEST_CASE("output is byte-identical across runs") {
  for (const char* sub : {"spectrum", "symmetries", "ladder", "vonroos", "eigenfunction", "classical"}) {
    const std::string cfg = std::string(sub) == "vonroos" ? "exp_vonroos.cfg" : "cubic.cfg";
    const Run a = run_cli({sub, "--config", data(cfg), "--levels", "3"});
    const Run b = run_cli({sub, "--config", data(cfg), "--levels", "3"});
    CHECK_MESSAGE(a.code == 0, sub << ": " << a.err);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("subcommand outputs") {
  {
    const auto rows = lines(run_cli({"eigenfunction", "--config", data("cubic.cfg"), "--n", "3"}).out);
    REQUIRE(rows.size() > 2);
    CHECK(rows[0] == "x,xi,psi");
  }
  {
    const auto rows = lines(run_cli({"classical", "--config", data("cubic.cfg"), "--periods", "1"}).out);
    CHECK(rows[0] == "t,x,v,energy,u");
    CHECK(rows.size() == 2002);
  }
  {
    const auto rows = lines(run_cli({"ladder", "--config", data("exp_isotonic.cfg")}).out);
    CHECK(rows[0] == "n,energy,closed_energy,overlap,max_pde_residual");
    CHECK(rows.size() == 7);  // levels = 6 in the file
  }
  {
    const auto rows = lines(run_cli({"vonroos", "--config", data("exp_vonroos.cfg")}).out);
    CHECK(rows[0] == "t,x,residual_compliant,residual_violated");
    CHECK(rows.size() == 51);
  }
}

TEST_CASE("plot scripts sit beside the CSV") {
  const fs::path out = scratch_dir() / "sym.csv";
  fs::remove(fs::path(out.string() + ".gp"));
  const Run r = run_cli({"symmetries", "--config", data("cubic.cfg"), "--out", out.string(), "--plot"});
  CHECK(r.code == 0);
  const std::string gp = slurp(out.string() + ".gp");
  CHECK(gp.find("data = 'sym.csv'") != std::string::npos);
  CHECK(gp.find("plot ") != std::string::npos);
}
