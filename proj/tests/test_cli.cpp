#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "bandshare/cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "bandshare");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = bandshare::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / "bandshare_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& contents) {
  const auto path = temp_dir() / name;
  std::ofstream(path) << contents;
  return path.string();
}

std::string read(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_lines(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

// Lines of `b` that differ from `a`, assuming the same line count.
std::vector<std::string> changed_lines(const std::string& a, const std::string& b) {
  std::istringstream sa(a), sb(b);
  std::vector<std::string> out;
  for (std::string la, lb; std::getline(sa, la) && std::getline(sb, lb);) {
    if (la != lb) out.push_back(lb);
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bandplan and power-limit") {
    const auto plan = invoke({"bandplan"});
    CHECK(plan.code == 0);
    CHECK(count_lines(plan.out) == 18);
    CHECK(plan.out.find("center 4980.0") == std::string::npos);
    CHECK(plan.out.find("channel 12  center 4977.5 MHz  width 5 MHz") != std::string::npos);

    const auto limit = invoke({"power-limit", "--bandwidth", "20", "--class", "high"});
    CHECK(limit.code == 0);
    CHECK(limit.out == "2 W\n");
    CHECK(invoke({"power-limit", "--bandwidth", "1", "--class", "low"}).out == "0.005 W\n");
    const auto bad = invoke({"power-limit", "--bandwidth", "7", "--class", "high"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("no power limit defined for 7 MHz") != std::string::npos);
  }

  TEST_CASE("usage errors") {
    const auto unknown = invoke({"bandplan", "--frobnicate"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("error:") != std::string::npos);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"radius", "--scenario", fixture::scenario_path("savannah_i16_60m")}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
  }

  TEST_CASE("exit codes for validation and I/O failures") {
    const auto missing = invoke({"rx-report", "--scenario", "/nonexistent/x.scn"});
    CHECK(missing.code == 2);
    const auto invalid = invoke({"rx-report", "--scenario", write_temp("bad.scn", "tx.lat_deg = 32\n")});
    CHECK(invalid.code == 1);
    CHECK(invalid.err.find("missing required key 'tx.lon_deg'") != std::string::npos);
    const auto over = invoke({"rx-report", "--scenario", fixture::scenario_path("savannah_i16_60m"), "--antenna",
                              "yagi"});
    CHECK(over.code == 1);
  }

  TEST_CASE("overrides change only the named field") {
    const auto path = fixture::scenario_path("savannah_i16_60m");
    const auto base = invoke({"coverage", "--scenario", path, "--echo-config"});
    REQUIRE(base.code == 0);
    const auto height = invoke({"coverage", "--scenario", path, "--echo-config", "--tx-height", "2"});
    CHECK(changed_lines(base.out, height.out) == std::vector<std::string>{"tx.height_m = 2"});
    const auto antenna = invoke({"radius", "--scenario", path, "--echo-config", "--bearing", "0", "--antenna",
                                 "directional"});
    CHECK(changed_lines(base.out, antenna.out) == std::vector<std::string>{"tx.antenna = directional"});
    const auto model = invoke({"feasibility", "--scenario", path, "--echo-config", "--model", "two_ray"});
    CHECK(changed_lines(base.out, model.out) == std::vector<std::string>{"env.model = two_ray"});
    // The echoed config is itself a loadable scenario.
    const auto echoed = write_temp("echo.scn", height.out);
    const auto again = invoke({"coverage", "--scenario", echoed, "--echo-config"});
    CHECK(again.out == height.out);
  }

  TEST_CASE("rx-report and radius on the 60 m scenario") {
    const auto path = fixture::scenario_path("savannah_i16_60m");
    const auto rx = invoke({"rx-report", "--scenario", path});
    CHECK(rx.code == 0);
    CHECK(count_lines(rx.out) == 6);
    CHECK(rx.out.find("NOT COVERED") == std::string::npos);
    const auto directional = invoke({"rx-report", "--scenario", path, "--antenna", "directional"});
    CHECK(directional.out.find("NOT COVERED") != std::string::npos);
    const auto radius = invoke({"radius", "--scenario", path, "--bearing", "88", "--antenna", "directional"});
    CHECK(radius.code == 0);
    CHECK(radius.out.rfind("bearing 88.0 deg: radius ", 0) == 0);
  }

  TEST_CASE("coverage output files") {
    const auto scn = write_temp("small.scn", fixture::small_text(0.01, 2000.0, 100.0));
    const auto csv_path = (temp_dir() / "cov.csv").string();
    const auto geojson_path = (temp_dir() / "cov.geojson").string();
    const auto run = invoke({"coverage", "--scenario", scn, "--out", csv_path, "--geojson", geojson_path,
                             "--threads", "3"});
    CHECK(run.code == 0);
    CHECK(run.out.find("wrote 441 cells") != std::string::npos);
    const auto stdout_run = invoke({"coverage", "--scenario", scn, "--threads", "1"});
    CHECK(stdout_run.out == read(csv_path));
    CHECK(read(geojson_path).find("FeatureCollection") != std::string::npos);
    CHECK(invoke({"coverage", "--scenario", scn, "--out", "/nonexistent/dir/x.csv"}).code == 2);
  }

  TEST_CASE("mask-check") {
    const auto mask_dir = std::string(BANDSHARE_DATA_DIR) + "/masks";
    const auto quiet = write_temp("quiet.psd", "4980 -10\n4978 -10\n4990 -60\n4995 -80\n");
    const auto ok = invoke({"mask-check", "--psd", quiet, "--mask", "DSRC-A", "--channel", "12,13", "--mask-dir",
                            mask_dir});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("COMPLIANT") != std::string::npos);
    const auto loud = write_temp("loud.psd", "4980 -10\n4990 -12\n");
    const auto bad = invoke({"mask-check", "--psd", loud, "--mask", "DSRC-A", "--channel", "12,13", "--mask-dir",
                             mask_dir});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("NON-COMPLIANT") != std::string::npos);
    CHECK(invoke({"mask-check", "--psd", quiet, "--mask", "DSRC-Z", "--channel", "12,13", "--mask-dir", mask_dir})
              .code == 2);
    CHECK(invoke({"mask-check", "--psd", quiet, "--mask", "DSRC-A", "--channel", "6,8", "--mask-dir", mask_dir})
              .code == 1);
  }

  TEST_CASE("feasibility formats") {
    const auto path = fixture::scenario_path("savannah_i16_60m");
    const auto text = invoke({"feasibility", "--scenario", path, "--no-coverage"});
    CHECK(text.code == 0);
    CHECK(text.out.find("Incumbent verdict: WaiverRequired") != std::string::npos);
    const auto lines = invoke({"feasibility", "--scenario", path, "--no-coverage", "--format", "json-lines"});
    CHECK(lines.code == 0);
    CHECK(lines.out.find("\"record\":\"verdict\"") != std::string::npos);
    CHECK(invoke({"feasibility", "--scenario", path, "--format", "xml"}).code == 1);
  }
}
