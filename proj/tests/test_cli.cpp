#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string kCli = ISO_CLI_PATH;
const fs::path kScenarios = ISO_SCENARIO_DIR;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("isostokes-cli-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  int st = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string cfg(const std::string& stem) { return (kScenarios / (stem + ".json")).string(); }

json read_json(const fs::path& p) {
  std::ifstream f(p);
  return json::parse(f);
}

}  // namespace

TEST_CASE("scenarios with passing checks exit 0") {
  for (const char* s : {"ei_formal", "ei_vanishing", "ei_connect", "a3_rays", "a3_levelt", "ex1_cells_local",
                        "roots_cells", "a3_flow"}) {
    CAPTURE(s);
    CHECK(run("run --quiet --config " + cfg(s)) == 0);
  }
}

TEST_CASE("subcommand must match the config kind") {
  CHECK(run("formal --quiet --config " + cfg("ei_formal")) == 0);
  CHECK(run("rays --quiet --config " + cfg("ei_formal")) == 2);
}

TEST_CASE("Painleve scenario reports only the two reference sign checks") {
  auto out = scratch("painleve");
  CHECK(run("painleve-a3 --config " + cfg("painleve_a3") + " --out " + out.string()) == 1);
  auto rep = read_json(out / "report.json");
  std::set<std::string> failed;
  for (const auto& c : rep.at("checks"))
    if (!c.at("pass").get<bool>()) failed.insert(c.at("name").get<std::string>());
  CHECK(failed == std::set<std::string>{"S1_matches_reference", "S2_matches_reference"});
}

TEST_CASE("configuration errors exit 2") {
  auto dir = scratch("bad");
  {
    std::ofstream(dir / "broken.json") << "{ not json";
    std::ofstream(dir / "nokind.json") << R"({"version": 1})";
    std::ofstream(dir / "badsys.json") << R"({"version": 1, "kind": "formal", "system": {"golden": "nope"}})";
  }
  CHECK(run("run --config " + (dir / "broken.json").string()) == 2);
  CHECK(run("run --config " + (dir / "nokind.json").string()) == 2);
  CHECK(run("run --config " + (dir / "badsys.json").string()) == 2);
  CHECK(run("run --config " + (dir / "missing.json").string()) == 2);
  CHECK(run("run --precision 113 --config " + cfg("ei_formal")) == 2);
  CHECK(run("run --mode fast --config " + cfg("ei_formal")) == 2);
}

TEST_CASE("plot data") {
  auto out = scratch("plot");
  CHECK(run("run --config " + cfg("a3_rays") + " --out " + out.string() + " --plot rays") == 0);
  CHECK(fs::file_size(out / "rays.csv") > 0);
  // a rays report has no flow trace
  CHECK(run("run --config " + cfg("a3_rays") + " --out " + out.string() + " --plot flow-trace") == 2);
}

TEST_CASE("reports are deterministic") {
  auto a = scratch("det-a"), b = scratch("det-b");
  CHECK(run("run --config " + cfg("ei_connect") + " --out " + a.string()) == 0);
  CHECK(run("run --config " + cfg("ei_connect") + " --out " + b.string()) == 0);
  std::ifstream fa(a / "report.json"), fb(b / "report.json");
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK_FALSE(sa.str().empty());
}

TEST_CASE("several configs run concurrently") {
  auto out = scratch("many");
  CHECK(run("run --jobs 2 --config " + cfg("ei_formal") + " --config " + cfg("a3_rays") + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "ei_formal" / "report.json"));
  CHECK(fs::exists(out / "a3_rays" / "report.json"));
  CHECK(run("run --config " + cfg("ei_formal") + " --config " + cfg("painleve_a3")) == 1);
}
