#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cvqkd/cli.hpp"

using namespace cvqkd::cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cvqkd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream l(line);
    for (std::string cell; std::getline(l, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cvqkd_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("eta ranges") {
  const auto etas = parse_eta_range("0.2:1.0:0.05");
  REQUIRE(etas.size() == 17);
  CHECK(etas.front() == 0.2);
  CHECK(etas[2] == 0.3);
  CHECK(etas.back() == 1.0);
  CHECK(parse_eta_range("0.5:0.5:0.1").size() == 1);
  CHECK_THROWS_AS(parse_eta_range("0.2:1.0"), ConfigError);
  CHECK_THROWS_AS(parse_eta_range("0.2:1.0:0"), ConfigError);
  CHECK_THROWS_AS(parse_eta_range("1:0.2:0.1"), ConfigError);
  CHECK_THROWS_AS(parse_eta_range("a:b:c"), ConfigError);
}

TEST_CASE("pulse counts") {
  CHECK(parse_rounds("1e11") == 100'000'000'000);
  CHECK(parse_rounds("12345") == 12345);
  CHECK_FALSE(parse_rounds("asymptotic").has_value());
  CHECK_THROWS_AS(parse_rounds("1.5"), ConfigError);
  CHECK_THROWS_AS(parse_rounds("0"), ConfigError);
  CHECK_THROWS_AS(parse_rounds("ten"), ConfigError);
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(invoke({"--bogus"}).code == 2);
  CHECK(invoke({"--eta", "1.5"}).code == 2);
  CHECK(invoke({"--eta", "0.5", "--m", "2"}).code == 2);
  CHECK(invoke({"--eta", "0.5", "--p-sig", "0.95", "--p-test", "0.1"}).code == 2);
  CHECK(invoke({"--eta", "0.5", "--N", "1e11", "--asymptotic"}).code == 2);
  CHECK(invoke({"--config", "/nonexistent/cvqkd.conf"}).code == 2);
  CHECK(invoke({"--mode", "scan"}).code == 2);
  CHECK(invoke({"--mode", "nonsense"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("config file with command-line override") {
  const auto path = temp_file("override.conf");
  std::ofstream(path) << "xi = 0.25\neta = [0.5, 0.6]\nN = 1e9\nmu = 0.3\n";
  std::vector<const char*> argv{"cvqkd", "--config", path.c_str(), "--xi", "0.125"};
  std::ostringstream sink;
  const auto cfg = parse(static_cast<int>(argv.size()), argv.data(), sink);
  REQUIRE(cfg.has_value());
  CHECK(cfg->xi == 0.125);
  CHECK(cfg->mu == 0.3);
  CHECK(cfg->etas == std::vector<double>{0.5, 0.6});
  CHECK(cfg->rounds == 1'000'000'000);

  // The echoed configuration reads back to the same configuration.
  const auto echo = temp_file("echo.conf");
  std::ofstream(echo) << describe(*cfg);
  std::vector<const char*> again{"cvqkd", "--config", echo.c_str()};
  const auto cfg2 = parse(static_cast<int>(again.size()), again.data(), sink);
  REQUIRE(cfg2.has_value());
  CHECK(describe(*cfg2) == describe(*cfg));
  std::filesystem::remove(path);
  std::filesystem::remove(echo);
}

TEST_CASE("simulate output is byte-identical across runs") {
  const auto a = temp_file("sim_a.csv"), b = temp_file("sim_b.csv");
  const std::vector<std::string> base{"--mode", "simulate", "--seed", "7", "--N", "200000", "--seeds", "3"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string(), "--threads", "2"});
  REQUIRE(invoke(args_a).code == 0);
  REQUIRE(invoke(args_b).code == 0);
  const std::string ta = slurp(a), tb = slurp(b);
  // Only the echoed thread count differs.
  auto strip = [](std::string s) {
    const auto pos = s.find("threads = ");
    return s.erase(pos, s.find('\n', pos) - pos);
  };
  CHECK(strip(ta) == strip(tb));
  const auto rows = csv_rows(ta);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "seed");
  CHECK(rows[1][0] == "7");
  CHECK(rows[3][0] == "9");
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("asymptotic scan over the standard grid") {
  const Outcome o = invoke({"--mode", "scan", "--eta-range", "0.2:1.0:0.05", "--xi", "1e-3", "--asymptotic"});
  REQUIRE(o.code == 0);
  const auto rows = csv_rows(o.out);
  REQUIRE(rows.size() == 18);
  CHECK(rows[0] == std::vector<std::string>{"eta", "xi", "N", "gain", "mu", "x_th", "p_sig", "p_test", "kappa", "gamma",
                                            "e_bit", "n_suc_frac"});
  double last = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double g = std::stod(rows[i][3]);
    CHECK(g + 1e-6 >= last);
    last = g;
    CHECK(rows[i][2] == "asymptotic");
  }
  CHECK(o.out.find("# wall_time_s = ") != std::string::npos);
  CHECK(o.out.find("# xi = 0.001") != std::string::npos);
}

TEST_CASE("finite scan at a single eta") {
  const Outcome o = invoke({"--mode", "scan", "--eta", "0.5", "--xi", "0", "--N", "1e11"});
  REQUIRE(o.code == 0);
  const auto rows = csv_rows(o.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][2] == "100000000000");
  CHECK(std::stod(rows[1][3]) > 0.0);
}

TEST_CASE("validate mode") {
  const Outcome o = invoke({"--mode", "validate", "--checks", "1,8"});
  CHECK(o.code == 0);
  CHECK(o.out.find("PASS 1 ") != std::string::npos);
  CHECK(o.out.find("PASS 8 ") != std::string::npos);
}

TEST_CASE("installed binary reports exit codes") {
  const std::string bin = CVQKD_BINARY;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("--unknown-flag") == 2);
  CHECK(status("--mode validate --checks 8") == 0);
}
