#include "doctest.h"

#include "focklat/cli.hpp"
#include "focklat/parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

using namespace focklat;
using namespace focklat::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("focklat_test_" + name);
}

constexpr double kNegativity[] = {1.0,      0.957107, 0.910684, 0.865529, 0.823471, 0.785059,
                                  0.750287, 0.718907, 0.69059,  0.664991, 0.641786, 0.62068};

}  // namespace

TEST_CASE("photon ranges and encodings") {
  CHECK(PhotonRange::parse("4") == PhotonRange{4, 4});
  CHECK(PhotonRange::parse("1..12") == PhotonRange{1, 12});
  CHECK(PhotonRange::parse("1..12").to_string() == "1..12");
  CHECK_THROWS_AS(PhotonRange::parse("5..2"), std::invalid_argument);
  CHECK_THROWS_AS(PhotonRange::parse("-1"), std::invalid_argument);
  CHECK_THROWS_AS(PhotonRange::parse("x"), std::invalid_argument);
  CHECK(parse_encoding("N=1,M=2") == Encoding{1, 2});
  CHECK(parse_encoding("M=3,N=0") == Encoding{0, 3});
  CHECK_THROWS_AS(parse_encoding("N=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_encoding("N=1,M=0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_encoding("N=1,Q=2"), std::invalid_argument);
}

TEST_CASE("RunConfig JSON round trip") {
  RunConfig c;
  c.subcommand = "mcf";
  c.photons = PhotonRange{2, 5};
  c.kappa = 0.3;
  c.epsilon = -1.25;
  c.zmax = 7.5;
  c.zsteps = 33;
  c.gamma = 0.1;
  c.format = "json";
  c.seed = 12345678901234ULL;
  c.encode = Encoding{2, 3};
  c.layout = "sixteen";
  c.diagonal = 0.4;
  c.samples = 10;
  c.tolerance = 1e-9;
  c.validate();
  const auto back = RunConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
  CHECK(back == c);
  RunConfig d;
  d.subcommand = "bands";
  CHECK(RunConfig::from_json(d.to_json()) == d);

  auto bad = c.to_json();
  bad["surprise"] = 1;
  CHECK_THROWS_AS(RunConfig::from_json(bad), std::invalid_argument);
  for (auto mutate : {+[](RunConfig& r) { r.gamma = 1.0; }, +[](RunConfig& r) { r.kappa = 0.0; },
                      +[](RunConfig& r) { r.zsteps = 1; }, +[](RunConfig& r) { r.format = "xml"; },
                      +[](RunConfig& r) { r.lattice = "custom"; }, +[](RunConfig& r) { r.lattice = "hexagonal"; },
                      +[](RunConfig& r) { r.subcommand = "plot"; }}) {
    RunConfig r = c;
    mutate(r);
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  }
}

TEST_CASE("config files and flag precedence") {
  const auto path = temp_file("config.json");
  {
    std::ofstream f(path);
    f << R"({"subcommand":"entangle","lattice":"stub","photons":"1..3","format":"json"})";
  }
  auto printed = invoke({"entangle", "--config", path.string(), "--photons", "2", "--print-config"});
  REQUIRE(printed.code == 0);
  auto j = nlohmann::json::parse(printed.out);
  CHECK(j["lattice"] == "stub");
  CHECK(j["photons"] == "2");
  CHECK(j["format"] == "json");
  // the printed config reproduces the run
  const auto path2 = temp_file("config2.json");
  {
    std::ofstream f(path2);
    f << printed.out;
  }
  CHECK(invoke({"entangle", "--config", path2.string()}).out == invoke({"entangle", "--config", path.string(), "--photons", "2"}).out);
  auto wrong = invoke({"bands", "--config", path.string()});
  CHECK(wrong.code == kExitUsage);
  auto missing = invoke({"bands", "--config", temp_file("does_not_exist.json").string()});
  CHECK(missing.code == kExitUsage);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("usage errors exit 2 with a JSON record") {
  for (const auto& args : std::vector<std::vector<std::string>>{{},
                                                                {"plot"},
                                                                {"evolve", "--bogus"},
                                                                {"loss", "--gamma", "1.5"},
                                                                {"evolve", "--photons", "1..3"},
                                                                {"bands", "--lattice", "honeycomb"},
                                                                {"loss", "--encode", "N=1"},
                                                                {"prepare", "--lattice", "kagome"},
                                                                {"mcf", "--layout", "/nonexistent/layout.json"},
                                                                {"evolve", "--kappa", "abc"}}) {
    CAPTURE(args.size());
    auto r = invoke(args);
    CHECK(r.code == kExitUsage);
    CHECK(r.out.empty());
    auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"]["kind"] == "usage");
    CHECK_FALSE(j["error"]["message"].get<std::string>().empty());
  }
}

TEST_CASE("verify exit codes") {
  auto ok = invoke({"verify", "--lattice", "kagome", "--photons", "4"});
  CHECK(ok.code == 0);
  CHECK(ok.err.empty());
  for (const auto& row : csv_rows(ok.out))
    if (row[1] == "annihilation") CHECK(std::stod(row[2]) < 1e-12);

  auto bad = invoke({"verify", "--lattice", "kagome", "--photons", "4", "--tolerance", "1e-30"});
  CHECK(bad.code == kExitVerification);
  CHECK_FALSE(bad.out.empty());
  auto j = nlohmann::json::parse(bad.err);
  CHECK(j["error"]["kind"] == "verification");
  CHECK(j["error"]["invariant"].is_string());

  auto all = invoke({"verify", "--lattice", "stub", "--photons", "0..6", "--format", "json"});
  CHECK(all.code == 0);
  CHECK(nlohmann::json::parse(all.out)["passed"] == true);
}

TEST_CASE("entangle reproduces the negativity table") {
  auto r = invoke({"entangle", "--lattice", "rhomboidal", "--photons", "1..12"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 13);
  CHECK(rows[0] == std::vector<std::string>{"N", "negativity", "concurrence", "concurrence_normalized"});
  for (int n = 1; n <= 12; ++n) {
    CHECK(std::stoi(rows[static_cast<std::size_t>(n)][0]) == n);
    CHECK(std::stod(rows[static_cast<std::size_t>(n)][1]) == doctest::Approx(kNegativity[n - 1]).epsilon(1e-6));
  }
  auto stub = invoke({"entangle", "--lattice", "stub", "--photons", "1"});
  auto srows = csv_rows(stub.out);
  CHECK(srows[0].back() == "ph_min_eigenvalue");
  CHECK(std::stod(srows[1].back()) == doctest::Approx((1 - std::sqrt(5.0)) / 6).epsilon(1e-12));
}

TEST_CASE("prepare peaks at the coupling length") {
  auto r = invoke({"prepare", "--lattice", "stub", "--photons", "5"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 401);
  double peak = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) peak = std::max(peak, std::stod(rows[i][1]));
  // the transfer is periodic; the first maximum is the coupling length
  std::size_t best = 1;
  while (std::stod(rows[best][1]) < peak - 1e-3) ++best;
  while (best + 1 < rows.size() && std::stod(rows[best + 1][1]) > std::stod(rows[best][1])) ++best;
  const double step = 2 * std::numbers::pi / 399;
  CHECK(std::abs(std::stod(rows[best][0]) - std::numbers::pi / (2 * std::sqrt(3.0))) <= step);
  auto j = nlohmann::json::parse(invoke({"prepare", "--lattice", "rhomboidal", "--photons", "2", "--out", "json"}).out);
  CHECK(std::stod(j["coupling_length"].get<std::string>()) ==
        doctest::Approx(std::numbers::pi / (2 * std::sqrt(2.0))).epsilon(1e-8));
}

TEST_CASE("loss and mcf artifacts") {
  auto j = nlohmann::json::parse(invoke({"loss", "--photons", "3", "--gamma", "0.2", "--encode", "N=1,M=1", "--out", "json"}).out);
  CHECK(std::stod(j["state"]["span_fidelity"].get<std::string>()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::stod(j["qubit"]["min_purity"].get<std::string>()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j["qubit"]["branches"].size() == 3);

  auto m = nlohmann::json::parse(invoke({"mcf", "--layout", "sixteen", "--zsteps", "5", "--format", "json"}).out);
  CHECK(m["budget"]["cores"] == 16);
  CHECK(m["budget"]["channels"] == 8);
  CHECK(std::stod(m["max_leakage"].get<std::string>()) < 1e-12);
  CHECK(std::stod(m["max_leakage_3kappa"].get<std::string>()) < 1e-12);

  auto site = csv_rows(invoke({"mcf", "--input", "site", "--zmax", "2", "--zsteps", "21"}).out);
  double worst = 0;
  for (std::size_t i = 1; i < site.size(); ++i) worst = std::max(worst, std::stod(site[i][1]));
  CHECK(worst > 0.1);

  // a layout file
  const auto path = temp_file("layout.json");
  {
    std::ofstream f(path);
    f << R"({"cores":[{"id":"A"},{"id":"B"},{"id":"S"}],"couplings":[["A","S",1],["B","S",1]],
             "channels":[{"name":"AB","cores":["A","B"]}]})";
  }
  auto file = nlohmann::json::parse(invoke({"mcf", "--layout", path.string(), "--photons", "3", "--format", "json"}).out);
  CHECK(file["budget"]["channels"] == 1);
  CHECK(std::stod(file["max_leakage"].get<std::string>()) < 1e-12);
  CHECK_FALSE(file.contains("qubit"));
  std::filesystem::remove(path);
}

TEST_CASE("output files") {
  const auto path = temp_file("bands.json");
  auto r = invoke({"bands", "--lattice", "kagome", "--ksamples", "4", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  auto j = nlohmann::json::parse(f);
  CHECK(j["flat_band_relative"] == "2");
  std::filesystem::remove(path);
  auto stdout_json = invoke({"bands", "--lattice", "kagome", "--ksamples", "4", "--out", "json"});
  CHECK(nlohmann::json::parse(stdout_json.out) == j);
  auto unwritable = invoke({"bands", "--out", "/nonexistent/dir/x.csv"});
  CHECK(unwritable.code == kExitRuntime);
}

TEST_CASE("identical config gives byte-identical output at any thread count") {
  const std::vector<std::vector<std::string>> cases{
      {"monogamy", "--photons", "1..4", "--samples", "30", "--seed", "9"},
      {"entangle", "--lattice", "stub", "--photons", "1..8", "--format", "json"},
      {"verify", "--lattice", "lieb", "--photons", "0..4"}};
  for (const auto& args : cases) {
    setenv("FOCKLAT_THREADS", "1", 1);
    const auto a = invoke(args);
    setenv("FOCKLAT_THREADS", "4", 1);
    const auto b = invoke(args);
    const auto c = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(b.out == c.out);
  }
  unsetenv("FOCKLAT_THREADS");
  auto s1 = invoke({"monogamy", "--photons", "2", "--samples", "30", "--seed", "1"});
  auto s2 = invoke({"monogamy", "--photons", "2", "--samples", "30", "--seed", "2"});
  CHECK(s1.out != s2.out);
}

TEST_CASE("help") {
  auto top = invoke({"--help"});
  CHECK(top.code == 0);
  for (const auto& name : subcommands()) {
    CHECK(top.out.find(name) != std::string::npos);
    auto h = invoke({name, "--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("--format") != std::string::npos);
    CHECK(h.err.empty());
  }
}

TEST_CASE("parallel map") {
  setenv("FOCKLAT_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  auto sq = parallel_map(100, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_map(10, [](std::size_t i) -> int {
                    if (i == 7) throw std::runtime_error("boom");
                    return 0;
                  }),
                  std::runtime_error);
  setenv("FOCKLAT_THREADS", "zero", 1);
  CHECK(thread_count() >= 1);
  unsetenv("FOCKLAT_THREADS");
}
