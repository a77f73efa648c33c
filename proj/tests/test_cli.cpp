// Copyright 2026 The emtk Authors
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

#include "emtk/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "doctest.h"
#include "emtk/error.hpp"
#include "emtk/io.hpp"
#include "emtk/training.hpp"
#include "oracles.hpp"

using namespace emtk;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(std::string_view name) {
  fs::path dir = fs::temp_directory_path() / "emtk_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string data(std::string_view rel) { return (default_data_dir() / rel).string(); }

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("shared path resolution") {
  const fs::path root = "/srv/shared";
  CHECK(resolve_shared_path("/etc/input.csv", root) == "/etc/input.csv");
  CHECK(resolve_shared_path("a/b.csv", root) == "/srv/shared/a/b.csv");
  CHECK(resolve_shared_path("a/../b.csv", root) == "/srv/shared/b.csv");
  CHECK(resolve_shared_path(".", root) == "/srv/shared");
  CHECK_THROWS_AS(resolve_shared_path("../x.csv", root), ConfigError);
  CHECK_THROWS_AS(resolve_shared_path("a/../../x.csv", root), ConfigError);
  CHECK(resolve_shared_path("x.csv", std::nullopt) == fs::current_path() / "x.csv");
}

TEST_CASE("usage errors exit with 2") {
  const std::string sample = data("polarity/Sample.csv");
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"polarity", "-i", sample, "-oc", "x.csv", "-vd", "600"}).code == kExitUsage);
  CHECK(cli({"polarity", "-F", "Q", "-i", sample, "-oc", "x.csv", "-vd", "600"}).code == kExitUsage);
  CHECK(cli({"polarity", "-F", "A", "-i", sample, "-oc", "x.csv", "-vd", "zero"}).code == kExitUsage);
  CHECK(cli({"polarity", "-F", "A", "-F", "K", "-i", sample, "-oc", "x.csv", "-vd", "6"}).code == kExitUsage);
  Run hate = cli({"emotions", "train", "-i", data("emotions/sample.csv"), "-d", "sc", "-e", "hate"});
  CHECK(hate.code == kExitUsage);
  CHECK(hate.err.find("hate") != std::string::npos);
  CHECK(cli({"emotions", "classify", "-i", data("emotions/sample.csv"), "-d", "sc", "-e", "love", "-m",
             "model.model"})
            .code == kExitUsage);
  CHECK(cli({"emotions", "fly"}).code == kExitUsage);
  CHECK(cli({"bench", "--synthetic", "10"}).code == kExitUsage);
  CHECK(cli({"bench", "--task", "polarity"}).code == kExitUsage);
  CHECK(cli({"bench", "--task", "polarity", "--synthetic", "10", "--workers", "1,0"}).code == kExitUsage);
}

TEST_CASE("runtime errors exit with 1") {
  const fs::path dir = scratch("missing");
  Run r = cli({"polarity", "-F", "K", "-i", (dir / "nope.csv").string(), "-oc",
               (dir / "out.csv").string(), "-vd", "10"});
  CHECK(r.code == kExitRuntime);
  CHECK(r.err.find("error:") == 0);
  CHECK(cli({"emotions", "train", "-i", (dir / "nope.csv").string(), "-d", "sc", "-e", "joy"}).code ==
        kExitRuntime);
}

TEST_CASE("help and version") {
  Run help = cli({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("usage:") != std::string::npos);
  Run version = cli({"--version"});
  CHECK(version.code == kExitOk);
  CHECK(version.out.find("bundled sample data") != std::string::npos);
}

TEST_CASE("polarity classification with the default model") {
  const fs::path dir = scratch("polarity");
  const fs::path out = dir / "predictions.csv";
  Run r = cli({"polarity", "-F", "A", "-i", data("polarity/Sample.csv"), "-oc", out.string(), "-vd", "20",
               "--workers", "2"});
  REQUIRE(r.code == kExitOk);
  const std::string out_text = read_file(out);
  const std::string in_text = read_file(data("polarity/Sample.csv"));
  auto lines = split(trim(out_text), '\n');
  auto input = split(trim(in_text), '\n');
  REQUIRE(lines.size() == input.size());
  CHECK(lines[0] == "id,predicted");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = split(lines[i], ',');
    REQUIRE(cells.size() == 2);
    CHECK(cells[0] == split(input[i], ';')[0]);
    CHECK((cells[1] == "positive" || cells[1] == "negative" || cells[1] == "neutral"));
  }
}

TEST_CASE("labeled polarity run writes a performance report") {
  const fs::path dir = scratch("labeled");
  std::string csv = "id;label;text\n";
  for (const auto& t : oracle::separable_polarity_corpus(90, 2)) csv += t.id + ";" + t.label + ";" + t.text + "\n";
  write_file(dir / "gold.csv", csv);
  REQUIRE(cli({"polarity-train", "-F", "K", "-i", (dir / "gold.csv").string(), "-vd", "8", "--out",
               (dir / "model").string()})
              .code == kExitOk);
  CHECK(fs::exists(dir / "model" / "performance.txt"));

  Run r = cli({"polarity", "-F", "K", "-vd", "8", "-M", (dir / "model").string(), "-i",
               (dir / "gold.csv").string(), "-oc", (dir / "pred.csv").string(), "-L"});
  REQUIRE(r.code == kExitOk);
  const std::string report = read_file(dir / "pred_performance.txt");
  CHECK(report.find("macro avg      1.0000     1.0000     1.0000       90") != std::string::npos);

  // Mode mismatch with the stored model.
  CHECK(cli({"polarity", "-F", "A", "-vd", "8", "-M", (dir / "model").string(), "-i",
             (dir / "gold.csv").string(), "-oc", (dir / "pred.csv").string()})
            .code == kExitRuntime);
}

TEST_CASE("emotion training and classification through the command line") {
  const fs::path dir = scratch("emotions");
  const std::string input = data("emotions/sample.csv");
  Run train = cli({"emotions", "train", "-i", input, "-d", "sc", "-e", "love", "--out", dir.string(), "-g"});
  REQUIRE(train.code == kExitOk);
  CHECK(train.err.find("-g") != std::string::npos);
  const fs::path root = dir / "training_sample.csv_love";
  const auto first = snapshot(root);
  CHECK(first.size() == 7 + 2 * (2 + 3 * 8));

  REQUIRE(cli({"emotions", "train", "-i", input, "-d", "sc", "-e", "love", "--out", dir.string(),
               "--workers", "2"})
              .code == kExitOk);
  CHECK(snapshot(root) == first);

  const fs::path model = root / "liblinear" / "NoDownSampling" / "model_love_0.model";
  Run cls = cli({"emotions", "classify", "-i", input, "-d", "sc", "-e", "love", "-m", model.string(), "-f",
                 (root / "idfs").string(), "-o", (root / "n-grams").string(), "-l", "--out", dir.string()});
  REQUIRE(cls.code == kExitOk);
  const fs::path outdir = dir / "classification_sample.csv_love";
  const std::string pred = read_file(outdir / "predictions_love.csv");
  CHECK(pred.rfind("id;predicted\n", 0) == 0);
  const std::string in_text = read_file(input);
  CHECK(split(trim(pred), '\n').size() == split(trim(in_text), '\n').size());
  CHECK(read_file(outdir / "performance_love.txt").find("emotion: love") == 0);

  Run fallback = cli({"emotions", "classify", "-i", input, "-d", "sc", "-e", "anger", "--out", dir.string()});
  CHECK(fallback.code == kExitOk);
  CHECK(fs::exists(dir / "classification_sample.csv_anger" / "predictions_anger.csv"));
}

TEST_CASE("bench on a synthetic corpus") {
  const fs::path dir = scratch("bench");
  const fs::path csv = dir / "bench.csv";
  Run r = cli({"bench", "--task", "polarity", "--synthetic", "60", "--workers", "1,2", "--reps", "1",
               "-F", "K", "-vd", "10", "--csv", csv.string()});
  REQUIRE(r.code == kExitOk);
  const std::string text = read_file(csv);
  auto lines = split(trim(text), '\n');
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].find("polarity,1,") == 0);
  CHECK(lines[1].find(",1.00,true") != std::string::npos);
}

TEST_CASE("the installed binary runs") {
  const fs::path out = scratch("binary") / "version.txt";
  const std::string cmd = std::string(EMTK_BINARY) + " --version > " + out.string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(read_file(out).find("emtk ") == 0);
  CHECK(std::system((std::string(EMTK_BINARY) + " bogus 2> /dev/null").c_str()) != 0);
}
