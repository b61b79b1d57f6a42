// Copyright 2026 The swnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "swnav/cli.hpp"
#include "swnav/errors.hpp"

using namespace swnav;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::initializer_list<const char*> args, std::string* out_text = nullptr) {
  std::vector<const char*> argv = {"swnav"};
  argv.insert(argv.end(), args);
  std::ostringstream out, err;
  const int code =
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("RunConfig rejects unknown keys and honors overrides") {
  RunConfig cfg;
  CHECK(cfg.integer("T_h") == 16);
  CHECK(cfg.integer("T") == 40);
  CHECK(cfg.integer("M") == 64);
  CHECK(cfg.num("lr0") == doctest::Approx(1e-4));
  CHECK(cfg.num("goal_mask_p") == doctest::Approx(0.5));
  CHECK_THROWS_AS(cfg.set("no_such_key", "1"), Error);

  cfg.set("epochs", "3");
  CHECK(cfg.integer("epochs") == 3);

  const auto path = fs::temp_directory_path() / "swnav_cfg_test.cfg";
  {
    std::ofstream f(path);
    f << "# comment\n";
    f << "epochs = 9\n";
    f << "lr0=5e-3\n";
  }
  RunConfig file_cfg;
  file_cfg.load_file(path.string());
  CHECK(file_cfg.integer("epochs") == 9);
  CHECK(file_cfg.num("lr0") == doctest::Approx(5e-3));
  fs::remove(path);

  CHECK(cfg.help_text().find("--epochs") != std::string::npos);
  CHECK(cfg.help_text().find("default: 8") != std::string::npos);
}

TEST_CASE("usage errors and help exit codes") {
  std::string text;
  CHECK(run({"--help"}, &text) == 0);
  CHECK(text.find("gen") != std::string::npos);
  CHECK(run({"no_such_command"}, &text) == 2);
  CHECK(run({"gen", "--no_such_flag", "1"}, &text) == 2);
  CHECK(run({"eval", "--store", "/nonexistent/store"}, &text) == 1);
}

TEST_CASE("pipeline end to end at miniature scale") {
  const fs::path work = fs::temp_directory_path() / "swnav_cli_pipeline";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string data = (work / "data").string();
  const std::string store = (work / "store").string();
  const std::string store_x = (work / "store_x").string();
  const std::string anchors = (work / "anchors").string();
  const std::string ckpt = (work / "policy.mnet").string();
  const std::string report = (work / "report.txt").string();

  std::string text;
  // Tiny everything: 8 px frames with 1 px patches keep the 64 fine tokens.
  const int gen_code = run({"gen", "--data", data.c_str(), "--scenarios", "2",
                            "--frames", "70", "--image_px", "8", "--seed", "3"},
                           &text);
  REQUIRE(gen_code == 0);
  CHECK(fs::exists(fs::path(data) / "scen_0000" / "manifest.txt"));

  // Idempotence: regenerating gives byte-identical frames.
  const std::string frame0 = (fs::path(data) / "scen_0000" / "frames" / "f0000.ppm").string();
  const std::string before = slurp(frame0);
  REQUIRE(run({"gen", "--data", data.c_str(), "--scenarios", "2", "--frames",
               "70", "--image_px", "8", "--seed", "3"}) == 0);
  CHECK(slurp(frame0) == before);

  REQUIRE(run({"curate", "--data", data.c_str(), "--store", store.c_str(),
               "--T_h", "4", "--T", "8", "--stride", "8", "--seed", "5"},
              &text) == 0);
  CHECK(text.find("kept") != std::string::npos);
  CHECK(fs::exists(fs::path(store) / "store.idx"));

  REQUIRE(run({"expand", "--store", store.c_str(), "--store_out", store_x.c_str(),
               "--corrective", "1", "--relight", "1", "--T_h", "4", "--T", "8",
               "--corrective_frac", "1.0", "--relight_frac", "1.0", "--c_min",
               "0.0", "--seed", "5"},
              &text) == 0);
  CHECK(text.find("corrective") != std::string::npos);
  const SampleStore sx = read_sample_store(store_x);
  int n_corr = 0, n_rel = 0;
  for (const auto& r : sx.records) {
    n_corr += r.provenance == Provenance::kCorrective ? 1 : 0;
    n_rel += r.provenance == Provenance::kRelit ? 1 : 0;
  }
  CHECK(n_corr > 0);
  CHECK(n_rel > 0);

  REQUIRE(run({"anchors", "--store", store_x.c_str(), "--anchors",
               anchors.c_str(), "--M", "4", "--T_h", "4", "--T", "8", "--seed",
               "5"},
              &text) == 0);
  CHECK(fs::exists(fs::path(anchors) / "anchors_h1.anch"));

  REQUIRE(run({"train", "--store", store_x.c_str(), "--anchors", anchors.c_str(),
               "--ckpt", ckpt.c_str(), "--T_h", "4", "--T", "8", "--M", "4",
               "--hidden", "16", "--layers", "1", "--image_px", "8",
               "--patch_px", "1", "--film_embed", "8", "--epochs", "2",
               "--batch", "4", "--lr0", "1e-3", "--seed", "5"},
              &text) == 0);
  CHECK(fs::exists(ckpt));
  CHECK(fs::exists(ckpt + ".curve"));

  REQUIRE(run({"eval", "--store", store_x.c_str(), "--anchors", anchors.c_str(),
               "--ckpt", ckpt.c_str(), "--T_h", "4", "--T", "8", "--M", "4",
               "--hidden", "16", "--layers", "1", "--image_px", "8",
               "--patch_px", "1", "--film_embed", "8", "--split", "regular",
               "--report", report.c_str(), "--seed", "5"},
              &text) == 0);
  CHECK(text.find("minADE=") != std::string::npos);
  CHECK(fs::exists(report));

  // Recovery split evaluates only corrective samples.
  REQUIRE(run({"eval", "--store", store_x.c_str(), "--anchors", anchors.c_str(),
               "--ckpt", ckpt.c_str(), "--T_h", "4", "--T", "8", "--M", "4",
               "--hidden", "16", "--layers", "1", "--image_px", "8",
               "--patch_px", "1", "--film_embed", "8", "--split", "recovery",
               "--seed", "5"},
              &text) == 0);
  CHECK(text.find("eval recovery") != std::string::npos);

  REQUIRE(run({"rollout", "--data", data.c_str(), "--anchors", anchors.c_str(),
               "--ckpt", ckpt.c_str(), "--T_h", "4", "--T", "8", "--M", "4",
               "--hidden", "16", "--layers", "1", "--image_px", "8",
               "--patch_px", "1", "--film_embed", "8", "--rollout_scenarios",
               "1", "--max_steps", "20", "--seed", "5"},
              &text) == 0);
  CHECK(text.find("rollout summary") != std::string::npos);

  REQUIRE(run({"report", "--inputs", report.c_str()}, &text) == 0);
  CHECK(text.find("minADE=") != std::string::npos);

  fs::remove_all(work);
}
