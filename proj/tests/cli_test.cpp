#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "testutil.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& stderr_file = {}) {
  std::string cmd = std::string(GRIDPANEL_CLI_PATH) + " " + args + " >/dev/null";
  cmd += stderr_file.empty() ? " 2>/dev/null" : " 2>" + stderr_file.string();
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("usage errors exit 64") {
  CHECK(run_cli("") == 64);
  CHECK(run_cli("frobnicate") == 64);
  CHECK(run_cli("panel") == 64);  // missing required --data/--out
}

TEST_CASE("missing inputs, bad configs, and unknown keys map to their exit codes") {
  auto dir = testutil::scratch_dir("cli_errors");

  const fs::path err = dir / "stderr.txt";
  CHECK(run_cli("fit --in " + (dir / "nowhere").string() + " --out " + (dir / "o").string(),
                err) == 71);
  const std::string line = testutil::read_file(err);
  CHECK(line.rfind("error class=missing-input msg=", 0) == 0);

  testutil::write_file(dir / "broken.json", "{nope");
  CHECK(run_cli("--config " + (dir / "broken.json").string() + " panel --data x --out y") == 65);

  testutil::write_file(dir / "unknown.json", R"({"regoin": "CAISO"})");
  CHECK(run_cli("--config " + (dir / "unknown.json").string() + " panel --data x --out y") == 70);

  CHECK(run_cli("--se hc2 panel --data x --out y") == 70);
}

TEST_CASE("synth, ingest, panel, fit, and displace chain end to end") {
  auto dir = testutil::scratch_dir("cli_chain");
  const fs::path synth_dir = dir / "synth";
  const fs::path data_dir = dir / "data";
  const fs::path panel_dir = dir / "panel";
  const fs::path fit_dir = dir / "fit";
  const fs::path out_dir = dir / "displace";

  testutil::write_file(dir / "dgp.json",
                       R"({"n_plants": 3, "days": 35, "seed": 9, "noise_sigma": 0.05})");
  REQUIRE(run_cli("synth --dgp-config " + (dir / "dgp.json").string() + " --out " +
                  synth_dir.string()) == 0);
  for (const char* name : {"units.csv", "plants.csv", "region.csv", "dgp_truth.json",
                           "manifest_synth.json"}) {
    CHECK(fs::exists(synth_dir / name));
  }

  REQUIRE(run_cli("ingest --units " + (synth_dir / "units.csv").string() + " --plants " +
                  (synth_dir / "plants.csv").string() + " --regions " +
                  (synth_dir / "region.csv").string() + " --out " + data_dir.string()) == 0);
  for (const char* name : {"dataset.json", "aligned_region.csv", "aligned_plants.csv",
                           "plants_meta.csv", "exclusions.csv", "rejects.csv",
                           "manifest_ingest.json"}) {
    CHECK(fs::exists(data_dir / name));
  }

  REQUIRE(run_cli("panel --data " + data_dir.string() + " --out " + panel_dir.string()) == 0);
  CHECK(fs::exists(panel_dir / "panel_CAISO_daily.csv"));
  CHECK(fs::exists(panel_dir / "manifest_panel.json"));

  REQUIRE(run_cli("fit --in " + panel_dir.string() + " --out " + fit_dir.string() +
                  " --spec M1 --dep emissions,intensity") == 0);
  const fs::path em_fit = fit_dir / "fit_CAISO_M1_emissions_drop_hc1.json";
  const fs::path ei_fit = fit_dir / "fit_CAISO_M1_intensity_drop_hc1.json";
  REQUIRE(fs::exists(em_fit));
  REQUIRE(fs::exists(ei_fit));
  CHECK(fs::exists(fit_dir / "fits_table.csv"));
  CHECK(fs::exists(fit_dir / "manifest_fit.json"));

  REQUIRE(run_cli("displace --emissions " + em_fit.string() + " --intensity " + ei_fit.string() +
                  " --out " + out_dir.string()) == 0);
  const fs::path report = out_dir / "displacement.json";
  REQUIRE(fs::exists(report));

  nlohmann::json j = nlohmann::json::parse(testutil::read_file(report));
  REQUIRE(j.contains("CAISO:solar:M1"));
  REQUIRE(j.contains("CAISO:wind:M1"));
  for (const char* key : {"CAISO:solar:M1", "CAISO:wind:M1"}) {
    const auto& item = j.at(key);
    CHECK(std::isfinite(item.at("fraction").get<double>()));
    // three modeled plants plus the two background plants, 35 days each
    CHECK(item.at("n_obs").get<std::int64_t>() == 5 * 35);
  }

  // a second fit pass over the same inputs reproduces the fit bytes
  const fs::path fit_dir2 = dir / "fit2";
  REQUIRE(run_cli("fit --in " + panel_dir.string() + " --out " + fit_dir2.string() +
                  " --spec M1 --dep emissions,intensity") == 0);
  CHECK(testutil::read_file(em_fit) ==
        testutil::read_file(fit_dir2 / "fit_CAISO_M1_emissions_drop_hc1.json"));
}
