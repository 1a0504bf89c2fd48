#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <condensate/error.hpp>

#include "condensate_cli/app.hpp"
#include "condensate_cli/config.hpp"

using namespace condensate;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

class Scratch {
 public:
  Scratch() {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("condensate_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& body) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

Result lab(std::vector<std::string> args) {
  args.insert(args.begin(), "condensate-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

const char* kGraph3 = R"({"wire": {"d": 1, "L": 10},
  "lattice": {"count": 3, "weights": {"kind": "constant", "value": 1}},
  "bulk": {"method": "separable", "cutoff": 25}})";

const char* kNonInteracting = R"({"wire": {"d": 1, "L": 50},
  "lattice": {"growth": "linear", "delta": 1},
  "physics": {"beta": 1, "alpha": 1, "lambda": 0, "rho": 1},
  "schedule": {"L_min": 25, "L_max": 400, "count": 8, "spacing": "geometric"}})";

}  // namespace

TEST_CASE("graph spectrum rows") {
  Scratch s;
  const auto r = lab({"spectrum", "--config", s.write("c.json", kGraph3), "--which", "graph",
                      "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "index,eigenvalue");
  auto value = [&](int i) { return std::stod(rows[i].substr(rows[i].find(',') + 1)); };
  CHECK(std::abs(value(1)) < 1e-12);
  CHECK(value(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(value(3) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("bulk spectrum first row") {
  Scratch s;
  const auto r = lab({"spectrum", "--config", s.write("c.json", kGraph3), "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() > 2);
  CHECK(std::stod(rows[1].substr(2)) == doctest::Approx(19.788556824184164).epsilon(1e-12));
}

TEST_CASE("invalid config exits 2 with a field") {
  Scratch s;
  auto r = lab({"spectrum", "--config", s.write("c.json", R"({"wire": {"d": 12, "L": 10}})")});
  CHECK(r.code == 2);
  const json e = json::parse(r.err);
  CHECK(e.at("field") == "wire.d");
  CHECK(e.at("error") == "config_invalid");

  r = lab({"solve", "--config", s.write("d.json", R"({"physics": {"beta": -1}})")});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err).at("field") == "physics.beta");

  r = lab({"solve", "--config", s.write("e.json", R"({"wire": {"colour": 1}})")});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err).at("field") == "wire.colour");

  r = lab({"solve", "--config", s.write("f.json", "{not json")});
  CHECK(r.code == 2);

  r = lab({"solve"});  // --config missing
  CHECK(r.code == 2);
}

TEST_CASE("solve emits mu below -alpha and round-trips") {
  Scratch s;
  const std::string cfg = s.write("c.json", kNonInteracting);
  const auto r = lab({"solve", "--config", cfg});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  const json& sol = doc.at("result");
  const double mu = sol.at("mu").get<double>();
  CHECK(mu < -1.0);
  CHECK(std::abs(sol.at("density_residual").get<double>()) <= 1e-10);
  CHECK(doc.at("tool_version") == CONDENSATE_VERSION);
  CHECK(doc.at("config_fingerprint").get<std::string>().size() == 16);

  std::ostringstream mu_text;
  mu_text.precision(17);
  mu_text << mu;
  const auto back = lab({"solve", "--config", cfg, "--at-mu", mu_text.str()});
  REQUIRE(back.code == 0);
  CHECK(std::abs(json::parse(back.out).at("result").at("density").get<double>() - 1.0) <= 1e-9);
}

TEST_CASE("solver failure exits 1") {
  Scratch s;
  const auto r = lab({"solve", "--config", s.write("c.json", kNonInteracting), "--at-mu", "5"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.err).at("error") == "solver_failure");
}

TEST_CASE("sweep CSV columns and byte-identical reruns") {
  Scratch s;
  const std::string cfg = s.write("c.json", kNonInteracting);
  const auto a = lab({"sweep", "--config", cfg, "--format", "csv", "--jobs", "1"});
  const auto b = lab({"sweep", "--config", cfg, "--format", "csv", "--jobs", "6"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto rows = csv_rows(a.out);
  CHECK(rows[0] == "L,n_L,mu,rho_s,rho0,ground_occupation,balance_residual");
  CHECK(rows.size() == 9);
  CHECK(a.out.find("config_fingerprint=") != std::string::npos);
  CHECK(a.out.find("tool_version=" CONDENSATE_VERSION) != std::string::npos);

  const std::string out = s.path("sweep.json").string();
  REQUIRE(lab({"sweep", "--config", cfg, "--output", out}).code == 0);
  std::ifstream in(out);
  const json doc = json::parse(in);
  CHECK(doc.at("result").at("per_L").size() == 8);
}

TEST_CASE("verify passes destruction I on the non-interacting config") {
  Scratch s;
  const auto r = lab({"verify", "--config", s.write("c.json", kNonInteracting)});
  const json doc = json::parse(r.out);
  bool found = false;
  for (const auto& v : doc.at("result").at("verdicts"))
    if (v.at("name") == "destruction_I") {
      found = true;
      CHECK(v.at("passed") == true);
    }
  CHECK(found);
  CHECK((r.code == 0 || r.code == 3));
  CHECK((r.code == 0) == doc.at("result").at("all_passed").get<bool>());
}

TEST_CASE("large rho at delta = 1, lambda = 1 gives positive extrapolated rho0") {
  Scratch s;
  const auto r = lab({"sweep", "--config", s.write("c.json", R"({
    "lattice": {"growth": "linear", "delta": 1},
    "physics": {"beta": 1, "alpha": 0.5, "lambda": 1, "rho": 100}})")});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("result").at("rho0_limit").get<double>() > 1e-3);
}

TEST_CASE("critical emits replayable bracket history") {
  Scratch s;
  const auto r = lab({"critical", "--config", s.write("c.json", R"({
    "lattice": {"growth": "linear", "delta": 1},
    "physics": {"beta": 1, "alpha": 0.5, "lambda": 1, "rho": 1},
    "critical": {"rho_lo": 1, "rho_hi": 128}})"), "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() > 3);
  CHECK(rows[0] == "step,phase,rho,rho0_limit,condensed,lo,hi");
  CHECK(rows[1].rfind("0,probe,1,", 0) == 0);
  CHECK(rows[2].rfind("1,probe,128,", 0) == 0);
}

TEST_CASE("cache directory precedence and cache-clear") {
  Scratch s;
  const std::string cfg_dir = s.path("from_config").string();
  const std::string flag_dir = s.path("from_flag").string();
  json cfg = json::parse(kGraph3);
  cfg["cache_dir"] = cfg_dir;
  const std::string cfg_path = s.write("c.json", cfg.dump());

  unsetenv("CONDENSATE_LAB_CACHE");
  REQUIRE(lab({"spectrum", "--config", cfg_path}).code == 0);
  CHECK(fs::exists(cfg_dir));
  REQUIRE(lab({"spectrum", "--config", cfg_path, "--cache-dir", flag_dir}).code == 0);
  CHECK(fs::exists(flag_dir));

  const std::string env_dir = s.path("from_env").string();
  setenv("CONDENSATE_LAB_CACHE", env_dir.c_str(), 1);
  const auto first = lab({"spectrum", "--config", cfg_path});
  const auto second = lab({"spectrum", "--config", cfg_path});
  CHECK(first.out == second.out);
  CHECK(fs::exists(env_dir));
  const auto cleared = lab({"cache-clear", "--config", cfg_path});
  unsetenv("CONDENSATE_LAB_CACHE");
  REQUIRE(cleared.code == 0);
  CHECK(json::parse(cleared.out).at("removed") == 1);
}

TEST_CASE("schedule forms") {
  auto c = cli::parse_config(R"({"schedule": [30, 60, 120, 240]})");
  CHECK(c.schedule == std::vector<double>{30, 60, 120, 240});
  c = cli::parse_config(R"({"schedule": {"L_min": 10, "L_max": 40, "count": 4, "spacing": "linear"}})");
  CHECK(c.schedule == std::vector<double>{10, 20, 30, 40});
  CHECK_THROWS_AS(cli::parse_config(R"({"schedule": []})"), ValidationError);
  CHECK_THROWS_AS(cli::parse_config(R"({"schedule": [10, 5, 20, 30]})"), ValidationError);
  CHECK_THROWS_AS(cli::parse_config(R"({"lattice": {"weights": {"kind": "random"}}})"),
                  ValidationError);
}
