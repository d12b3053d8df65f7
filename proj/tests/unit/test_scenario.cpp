#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "spdcoam/errors.hpp"
#include "spdcoam/scenario.hpp"

using namespace spdcoam;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(SPDCOAM_SOURCE_DIR) + "/tests/data/" + name; }

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spdcoam_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("sha256 of known strings") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("conserved run writes a complete, reproducible artifact set") {
    const ScenarioConfig cfg = parse_config_file(data("small.cfg"));
    const fs::path dir = fresh_dir("run");
    const ScenarioResult r = run_scenario(cfg, dir.string());
    CHECK(r.report.verdict == Verdict::Conserved);
    CHECK(r.report.mask_recommendation == -2);

    const auto man = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(man["version"] == "manifest_v1");
    CHECK(man["verdict"] == "Conserved");
    CHECK(man["mask_recommendation"] == -2);
    CHECK(man["config_digest"] == cfg.digest());
    std::set<std::string> listed;
    for (const auto& f : man["files"]) {
      const std::string path = f["path"];
      listed.insert(path);
      CHECK(f["sha256"] == sha256_file((dir / path).string()));
      CHECK(f["bytes"] == fs::file_size(dir / path));
    }
    for (const char* name : {"pump_profile.spdcgrid", "gtensor.csv", "profile.spdcgrid", "profile_report.json",
                             "classification.json", "spectrum_harmonics.csv", "spectrum_summary.csv",
                             "plot_profile_abs.csv", "plot_channel_bars.csv"})
      CHECK(listed.count(name) == 1);
    std::size_t on_disk = 0;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().filename() != "manifest.json") ++on_disk;
    CHECK(on_disk == listed.size());
    CHECK_FALSE(fs::exists(dir.string() + ".partial"));

    const auto side = nlohmann::json::parse(slurp(dir / "profile_report.json"));
    for (const char* key : {"config_digest", "idler_point", "m_power_fractions", "asymmetry_metric",
                            "ring_mismatch_diagnostic"})
      CHECK(side.contains(key));
    CHECK(side["m_power_fractions"]["2"].get<double>() > 1.0 - 1e-6);

    const ComplexGrid g = read_grid((dir / "profile.spdcgrid").string());
    CHECK(g.spec() == cfg.grid);
    CHECK(g.values() == r.profile.signal_grid.values());

    const std::string first = slurp(dir / "manifest.json");
    run_scenario(cfg, dir.string());
    CHECK(slurp(dir / "manifest.json") == first);
    fs::remove_all(dir);
  }

  TEST_CASE("artifact toggles drop optional files") {
    ScenarioConfig cfg = parse_config_file(data("small.cfg"));
    cfg.output.plots = false;
    cfg.output.pump_grid = false;
    cfg.output.gtensor = false;
    const fs::path dir = fresh_dir("toggles");
    const ScenarioResult r = run_scenario(cfg, dir.string());
    CHECK(r.files.size() == 5);
    CHECK_FALSE(fs::exists(dir / "gtensor.csv"));
    fs::remove_all(dir);
  }

  TEST_CASE("asymmetric run is type B") {
    ScenarioConfig cfg = parse_config_file(data("small.cfg"));
    cfg.crystal.epsilon = 0.2;
    const fs::path dir = fresh_dir("typeb");
    const ScenarioResult r = run_scenario(cfg, dir.string());
    CHECK(r.report.verdict == Verdict::TypeB);
    int above = 0;
    for (auto [m, f] : r.report.power_fractions)
      if (f > 0.05) ++above;
    CHECK(above >= 2);
    fs::remove_all(dir);
  }

  TEST_CASE("failed runs leave nothing behind") {
    const ScenarioConfig cfg = parse_config_file(data("sampling_fail.cfg"));
    const fs::path dir = fresh_dir("fail");
    try {
      run_scenario(cfg, dir.string());
      FAIL("expected sampling error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Sampling);
    }
    CHECK_FALSE(fs::exists(dir));
    CHECK_FALSE(fs::exists(dir.string() + ".partial"));
  }

  TEST_CASE("output root override applies to relative directories") {
    const fs::path root = fresh_dir("root");
    setenv("SPDCOAM_OUTPUT_ROOT", root.c_str(), 1);
    CHECK(resolve_output_dir("a/b") == (root / "a/b").lexically_normal().string());
    CHECK(resolve_output_dir("/abs/dir") == "/abs/dir");
    ScenarioConfig cfg = parse_config_file(data("small.cfg"));
    cfg.output.plots = false;
    const ScenarioResult r = run_scenario(cfg);
    CHECK(fs::exists(root / "small_out" / "manifest.json"));
    CHECK(r.dir == (root / "small_out").string());
    unsetenv("SPDCOAM_OUTPUT_ROOT");
    CHECK(resolve_output_dir("a/b") == "a/b");
    fs::remove_all(root);
  }

  TEST_CASE("sweep records per-row failures and keeps going") {
    const SweepSpec spec = parse_sweep_file(data("length_sweep.cfg"));
    const fs::path dir = fresh_dir("sweep_l");
    const SweepResult r = run_sweep(spec, dir.string());
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].ok);
    CHECK_FALSE(r.rows[1].ok);
    CHECK(r.rows[1].error.rfind("sampling:", 0) == 0);
    CHECK(r.rows[1].error_code == 3);
    CHECK(r.rows[2].ok);
    CHECK(r.rows[0].verdict == "Conserved");
    CHECK(fs::exists(dir / "row_000" / "manifest.json"));
    CHECK_FALSE(fs::exists(dir / "row_001"));
    std::istringstream csv(slurp(dir / "sweep_summary.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "row,parameter,value,verdict,dominant_m,m1,f1,m2,f2,m3,f3,asymmetry_metric,error");
    std::getline(csv, line);
    CHECK(line.rfind("0,L,40,Conserved,2,2,", 0) == 0);
    std::getline(csv, line);
    CHECK(line.rfind("1,L,0.5,,,,,,,,,,\"sampling:", 0) == 0);
    const auto man = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(man["rows"].size() == 3);
    CHECK(man["rows"][1]["ok"] == false);
    fs::remove_all(dir);
  }

  TEST_CASE("pump_l sweep keeps every row conserved at its own charge") {
    const SweepSpec spec = parse_sweep(
        "sweep.parameter = pump_l\nsweep.values = -2, -1, 0, 1, 2\nsweep.base = small.cfg\n",
        std::string(SPDCOAM_SOURCE_DIR) + "/tests/data");
    const fs::path dir = fresh_dir("sweep_pl");
    const SweepResult r = run_sweep(spec, dir.string());
    REQUIRE(r.rows.size() == 5);
    for (const auto& row : r.rows) {
      CHECK(row.ok);
      CHECK(row.dominant_m == static_cast<int>(row.value));
      CHECK(row.verdict == "Conserved");
    }
    fs::remove_all(dir);
  }

  TEST_CASE("epsilon sweep starts conserved and grows more asymmetric") {
    const SweepSpec spec = parse_sweep(
        "sweep.parameter = epsilon\nsweep.values = 0, 0.05, 0.1, 0.2\nsweep.base = small.cfg\n",
        std::string(SPDCOAM_SOURCE_DIR) + "/tests/data");
    const fs::path dir = fresh_dir("sweep_eps");
    const SweepResult r = run_sweep(spec, dir.string());
    CHECK(r.rows[0].verdict == "Conserved");
    const auto man = nlohmann::json::parse(r.manifest_json);
    CHECK(man["asymmetry_non_decreasing"] == true);
    for (std::size_t k = 1; k < r.rows.size(); ++k) CHECK(r.rows[k].asymmetry >= r.rows[k - 1].asymmetry);
    fs::remove_all(dir);
  }
}
