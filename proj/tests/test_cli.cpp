#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "floquet/config.hpp"
#include "floquet/runner.hpp"
#include "oracles.hpp"

using namespace floquet;
using namespace floquet::cli;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() /
          ("floquet_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path write(const std::string& name, const json& j) const {
    std::ofstream(dir / name) << j.dump();
    return dir / name;
  }
  int cli(const std::string& args, const std::string& env = "") const {
    const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" FLOQUET_CLI_PATH "' " + args +
                            " >out.txt 2>err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string read(const fs::path& rel) const {
    std::ifstream in(dir / rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

std::vector<std::vector<double>> read_csv(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

json chain_spectrum() {
  return {{"model", "chain1d"},
          {"task", "spectrum"},
          {"drive", {{"omega", 2.0}, {"amplitude", 1.0}}},
          {"output", "out"}};
}

json dirac_hfe() {
  return {{"model", "dirac"}, {"task", "hfe"}, {"drive", {{"omega", 5.0}, {"amplitude", 1.0}}}, {"output", "out"}};
}

std::string key_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("spectrum of the driven chain follows the Bessel band") {
  Workspace ws;
  ws.write("c.json", chain_spectrum());
  REQUIRE(ws.cli("run c.json") == 0);
  std::string header;
  const auto rows = read_csv(ws.read("out/spectrum.csv"), &header);
  CHECK(header == "k,branch,n_replica,quasienergy,weight0");
  REQUIRE(rows.size() == 64);
  const double j0 = oracle::j0_series(1.0);
  double worst = 0.0;
  for (const auto& r : rows) {
    worst = std::max(worst, circular_distance(r[3], -2.0 * j0 * std::cos(r[0]), 2.0));
    CHECK(r[3] >= -1.0);
    CHECK(r[3] < 1.0);
    CHECK(std::abs(r[3] + 2.0 * r[2] - (-2.0 * j0 * std::cos(r[0]))) < 1e-7);
  }
  CHECK(worst < 1e-7);
  const auto manifest = json::parse(ws.read("out/manifest.json"));
  CHECK(manifest["toolkit_version"] == toolkit_version);
  CHECK(manifest["config_sha256"].get<std::string>().size() == 64);
  CHECK(manifest["wall_time_seconds"].get<double>() >= 0.0);
  CHECK(manifest["files"] == json::array({"spectrum.csv"}));
}

TEST_CASE("hfe report for the Dirac cone") {
  Workspace ws;
  ws.write("d.json", dirac_hfe());
  REQUIRE(ws.cli("run d.json") == 0);
  const auto report = json::parse(ws.read("out/hfe.json"));
  CHECK(std::abs(report["dirac_gap"].get<double>() - (std::sqrt(29.0) - 5.0)) < 1e-12);
  CHECK(report.contains("J_eff"));
  CHECK(report.contains("K_eff"));
  CHECK(report["correction_norm"].get<double>() == doctest::Approx(std::sqrt(2.0) / 5.0));
}

TEST_CASE("schema violations exit 2 and write nothing") {
  Workspace ws;
  json bad = dirac_hfe();
  bad["drive"]["omega"] = -1.0;
  ws.write("bad.json", bad);
  CHECK(ws.cli("run bad.json") == 2);
  CHECK_FALSE(fs::exists(ws.dir / "out"));
  CHECK(ws.read("err.txt").find("drive.omega") != std::string::npos);

  ws.write("d.json", dirac_hfe());
  CHECK(ws.cli("run d.json --set numerics.typo=3") == 2);
  CHECK(ws.read("err.txt").find("numerics.typo") != std::string::npos);
  CHECK(ws.cli("run missing.json") == 2);
  CHECK(ws.cli("validate d.json") == 0);
  CHECK(ws.cli("validate bad.json") == 2);
  CHECK(ws.cli("frobnicate d.json") == 2);
  CHECK_FALSE(fs::exists(ws.dir / "out"));
}

TEST_CASE("solver failures exit 3 without partial files") {
  Workspace ws;
  json cfg = {{"model", "custom"},
              {"task", "ness"},
              {"drive", {{"omega", 2.0}}},
              {"custom_modes", {{{"n", 0}, {"re", {{0.5, 0.0}, {0.0, -0.5}}}}}},
              {"jump_operators", {{{"re", {{0.0, 0.0}, {0.3, 0.0}}}}}},
              {"ness", {{"max_periods", 2}}},
              {"output", "out"}};
  ws.write("n.json", cfg);
  CHECK(ws.cli("run n.json") == 3);
  CHECK(ws.read("err.txt").find("find_ness") != std::string::npos);
  CHECK_FALSE(fs::exists(ws.dir / "out"));
  CHECK(ws.cli("run n.json --set ness.max_periods=2000") == 0);
  const auto rows = read_csv(ws.read("out/ness.csv"));
  REQUIRE(rows.size() == 65);
  CHECK(std::abs(rows.front()[1] + rows.front()[7] - 1.0) < 1e-10);
}

TEST_CASE("sweep of the chain amplitude crosses zero at the Bessel root") {
  Workspace ws;
  json cfg = chain_spectrum();
  cfg["task"] = "hfe";
  ws.write("c.json", cfg);
  std::string values;
  for (int i = 0; i <= 8; ++i) values += (i ? "," : "") + std::to_string(2.2 + 0.05 * i);
  REQUIRE(ws.cli("sweep c.json --param drive.amplitude --values " + values) == 0);
  const auto rows = read_csv(ws.read("out/sweep.csv"));
  REQUIRE(rows.size() == 9);
  double root = std::nan("");
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    CHECK(std::abs(rows[i][1] - oracle::j0_series(rows[i][0])) < 1e-12);
    if (rows[i][1] > 0.0 && rows[i + 1][1] <= 0.0) {
      root = rows[i][0] - rows[i][1] * (rows[i + 1][0] - rows[i][0]) / (rows[i + 1][1] - rows[i][1]);
    }
  }
  CHECK(std::abs(root - 2.404825557695773) < 1e-3);
  const auto manifest = json::parse(ws.read("out/manifest.json"));
  CHECK(manifest["points"].size() == 9);
  CHECK(manifest["failures"] == 0);
  for (const auto& p : manifest["points"]) {
    CHECK(fs::exists(ws.dir / "out" / p["directory"].get<std::string>() / "hfe.json"));
  }
}

TEST_CASE("sweep argument errors") {
  Workspace ws;
  ws.write("d.json", dirac_hfe());
  CHECK(ws.cli("sweep d.json --param drive.omega --values ''") == 2);
  CHECK(ws.cli("sweep d.json --param drive.omega --values ,") == 2);
  CHECK(ws.cli("sweep d.json --param drive.omega --values 1,abc") == 2);
  CHECK(ws.cli("sweep d.json --param drive.colour --values 1,2") == 2);
  CHECK(ws.cli("sweep d.json --param model --values 1,2") == 2);
  CHECK_FALSE(fs::exists(ws.dir / "out"));
}

TEST_CASE("sweep of omega reproduces the Dirac gap from the Sambe spectrum") {
  Workspace ws;
  json cfg = {{"model", "dirac"},
              {"task", "spectrum"},
              {"drive", {{"omega", 5.0}, {"amplitude", 1.0}}},
              {"numerics", {{"M", 12}, {"k_points", 1}, {"k_min", 0.0}, {"k_max", 1.0}}},
              {"output", "out"}};
  ws.write("d.json", cfg);
  REQUIRE(ws.cli("sweep d.json --param drive.omega --values 3,4,5,8,12") == 0);
  for (const auto& r : read_csv(ws.read("out/sweep.csv"))) {
    CHECK(std::abs(r[1] - (std::sqrt(r[0] * r[0] + 4.0) - r[0])) < 1e-6);
  }
}

TEST_CASE("sweep continues past failing points") {
  Workspace ws;
  ws.write("d.json", dirac_hfe());
  CHECK(ws.cli("sweep d.json --param drive.omega --values 4,-1,6") == 3);
  const auto manifest = json::parse(ws.read("out/manifest.json"));
  CHECK(manifest["failures"] == 1);
  CHECK(manifest["points"][1]["status"] == "failed");
  CHECK(manifest["points"][1]["exit_code"] == 2);
  CHECK(manifest["points"][1]["error"].get<std::string>().find("drive.omega") != std::string::npos);
  CHECK(fs::exists(ws.dir / "out/value_4/hfe.json"));
  CHECK(fs::exists(ws.dir / "out/value_6/hfe.json"));
  CHECK_FALSE(fs::exists(ws.dir / "out/value_-1"));
  const auto rows = ws.read("out/sweep.csv");
  CHECK(rows.find("-1,nan") != std::string::npos);
}

TEST_CASE("outputs are deterministic and independent of the worker count") {
  Workspace ws;
  json cfg = chain_spectrum();
  ws.write("c.json", cfg);
  REQUIRE(ws.cli("run c.json --set output=a") == 0);
  REQUIRE(ws.cli("run c.json --set output=b") == 0);
  CHECK(ws.read("a/spectrum.csv") == ws.read("b/spectrum.csv"));
  const auto ma = json::parse(ws.read("a/manifest.json"));
  const auto mb = json::parse(ws.read("b/manifest.json"));
  CHECK(ma["config_sha256"] != mb["config_sha256"]);

  const std::string sweep = "sweep c.json --param drive.amplitude --values 0.5,1,1.5,2,2.5,3";
  REQUIRE(ws.cli(sweep + " --set output=s1", "FLOQUET_WORKERS=1") == 0);
  REQUIRE(ws.cli(sweep + " --set output=s4", "FLOQUET_WORKERS=4") == 0);
  CHECK(ws.read("s1/sweep.csv") == ws.read("s4/sweep.csv"));
  CHECK(ws.read("s1/value_2.5/spectrum.csv") == ws.read("s4/value_2.5/spectrum.csv"));
  CHECK(json::parse(ws.read("s4/manifest.json"))["workers"] == 4);
  CHECK(ws.cli(sweep + " --set output=s0", "FLOQUET_WORKERS=zero") == 2);
}

TEST_CASE("chern task on the driven honeycomb") {
  Workspace ws;
  json cfg = {{"model", "honeycomb"},
              {"task", "chern"},
              {"drive", {{"omega", 10.0}, {"amplitude", 1.0}}},
              {"numerics", {{"write_curvature", true}}},
              {"output", "out"}};
  ws.write("h.json", cfg);
  REQUIRE(ws.cli("run h.json") == 0);
  const auto report = json::parse(ws.read("out/chern.json"));
  REQUIRE(report.size() == 2);
  CHECK(report[0]["chern"] == 1);
  CHECK(report[1]["chern"] == -1);
  CHECK(report[0]["residual"].get<double>() < 1e-3);
  std::string header;
  const auto curvature = read_csv(ws.read("out/curvature_band0.csv"), &header);
  CHECK(header == "kx,ky,F");
  CHECK(curvature.size() == 24 * 24);
  double total = 0.0;
  for (const auto& r : curvature) total += r[2];
  CHECK(total == doctest::Approx(2.0 * pi).epsilon(1e-9));

  cfg["model"] = "chain1d";
  ws.write("c.json", cfg);
  CHECK(ws.cli("run c.json") == 2);
}

TEST_CASE("greens task columns") {
  Workspace ws;
  json cfg = chain_spectrum();
  cfg["task"] = "greens";
  cfg["numerics"] = {{"k_points", 2}, {"nu_points", 21}};
  ws.write("g.json", cfg);
  REQUIRE(ws.cli("run g.json") == 0);
  std::string header;
  const auto rows = read_csv(ws.read("out/greens.csv"), &header);
  CHECK(header == "nu_unfolded,k,A,N");
  CHECK(rows.size() == 2 * 21 * 13);
  for (const auto& r : rows) {
    CHECK(r[2] >= 0.0);
    CHECK(r[3] >= -1e-12);
    CHECK(r[3] <= r[2] + 1e-12);
  }
}

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const auto cfg = parse_config(dirac_hfe());
    CHECK(cfg.numerics.nk == 24);
    CHECK(cfg.numerics.nu_points == 401);
    CHECK(cfg.numerics.n_steps == 4096);
    CHECK(cfg.n_max() == 1);
    CHECK(cfg.cutoff() == 7);
    CHECK(cfg.bath.gamma == 0.05);
  }
  SUBCASE("offending keys are named") {
    json j = dirac_hfe();
    j["drive"].erase("omega");
    CHECK(key_of(j) == "drive.omega");
    j = dirac_hfe();
    j["drive"]["polarization"] = "linear";
    CHECK(key_of(j) == "drive.polarization");
    j = dirac_hfe();
    j["drive"]["helicity"] = 2;
    CHECK(key_of(j) == "drive.helicity");
    j = dirac_hfe();
    j["model"] = "kagome";
    CHECK(key_of(j) == "model");
    j = dirac_hfe();
    j["numerics"] = {{"Nk", 0}};
    CHECK(key_of(j) == "numerics.Nk");
    j = chain_spectrum();
    j["numerics"] = {{"M", 2}, {"n_max", 4}};
    CHECK(key_of(j) == "numerics.M");
    j = dirac_hfe();
    j["bath"] = {{"beta", "hot"}};
    CHECK(key_of(j) == "bath.beta");
    j = dirac_hfe();
    j["task"] = "ness";
    CHECK(key_of(j) == "jump_operators");
    j["jump_operators"] = {{{"re", {{1.0}}}}};
    CHECK(key_of(j) == "jump_operators[0]");
    j = dirac_hfe();
    j["model"] = "custom";
    CHECK(key_of(j) == "custom_modes");
    j["custom_modes"] = {{{"n", 1}, {"re", {{0.0, 1.0}, {0.0, 0.0}}}}};
    CHECK(key_of(j) == "custom_modes");
  }
  SUBCASE("custom modes") {
    json j = dirac_hfe();
    j["model"] = "custom";
    j["custom_modes"] = {{{"n", 0}, {"re", {{1.0, 0.0}, {0.0, -1.0}}}},
                         {{"n", 1}, {"re", {{0.0, 0.5}, {0.5, 0.0}}}, {"im", {{0.0, 0.0}, {0.0, 0.0}}}},
                         {{"n", -1}, {"re", {{0.0, 0.5}, {0.5, 0.0}}}}};
    const auto cfg = parse_config(j);
    CHECK(cfg.dim() == 2);
    CHECK(cfg.n_max() == 1);
    CHECK(max_abs(cfg.modes(0.0, 0.0).mode(1) - 0.5 * pauli::x()) == 0.0);
  }
  SUBCASE("numerical modes match the closed form") {
    json j = chain_spectrum();
    j["numerics"] = {{"n_samples", 128}, {"n_max", 10}};
    const auto cfg = parse_config(j);
    const auto numeric = cfg.modes(0.7, 0.0);
    j["numerics"].erase("n_samples");
    const auto exact = parse_config(j).modes(0.7, 0.0);
    for (int n = -10; n <= 10; ++n) CHECK(max_abs(numeric.mode(n) - exact.mode(n)) < 1e-13);
  }
  SUBCASE("overrides") {
    json j = dirac_hfe();
    apply_override(j, "drive.omega=7.5");
    apply_override(j, "numerics.tolerances.ness=1e-9");
    apply_override(j, "output=elsewhere");
    CHECK(j["drive"]["omega"] == 7.5);
    CHECK(j["numerics"]["tolerances"]["ness"] == 1e-9);
    CHECK(j["output"] == "elsewhere");
    CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);
    CHECK_THROWS_AS(apply_override(j, "drive.omega.x=1"), ConfigError);
  }
  SUBCASE("hash ignores key order") {
    const json a = json::parse(R"({"task":"hfe","model":"dirac","drive":{"omega":5,"amplitude":1}})");
    const json b = json::parse(R"({"drive":{"amplitude":1,"omega":5},"model":"dirac","task":"hfe"})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 64);
    CHECK(config_hash(json::object()) ==
          "44136fa355b3678a1146ad16f7e8649e94fb4fc21fe77e8310c060f61caaff8a");
  }
}

}
