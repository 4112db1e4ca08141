// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "test_util.hpp"
#include "viewret/io.hpp"
#include "viewret/render.hpp"
#include "viewret/scansim.hpp"

using namespace viewret;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "viewret");
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& file) const { return (path_ / file).string(); }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("usage errors exit 1") {
  const Run unknown_flag = run({"select", "--bogus", "1"});
  CHECK(unknown_flag.code == 1);
  CHECK(unknown_flag.err.find("select") != std::string::npos);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"render", "--input", "x.xyz"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("missing input exits 2 and names the path") {
  const Run r = run({"select", "--input", "/no/such/cloud.xyz"});
  CHECK(r.code == 2);
  CHECK(r.err.find("/no/such/cloud.xyz") != std::string::npos);
}

TEST_CASE("unknown config keys are usage errors") {
  TempDir dir("viewret_cli_config");
  write_xyz(fs::path(dir / "c.xyz"), testing::random_ball_cloud(300, 1));
  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "n_k=100\nwibble=3\n";
  }
  const Run r = run({"select", "--input", dir / "c.xyz", "--config", dir / "bad.cfg"});
  CHECK(r.code == 1);
  CHECK(r.err.find("wibble") != std::string::npos);
}

TEST_CASE("scan, select, render, normalize") {
  TempDir dir("viewret_cli_scan");
  write_obj(fs::path(dir / "box.obj"), make_box(1.0, 0.8, 0.6));
  const Run scan = run({"scan-sim", "--mesh", dir / "box.obj", "--scanner-pos", "3,1,1.5", "--fov", "40",
                        "--step", "0.5", "--output", dir / "scan.xyz"});
  REQUIRE(scan.code == 0);
  const KeyValues meta = read_key_values(fs::path(dir / "scan.xyz.meta"));
  CHECK(meta.count("ground_truth_viewpoint") == 1);
  CHECK(std::stoul(meta.at("points")) == read_xyz(fs::path(dir / "scan.xyz")).size());

  const Run sel = run({"select", "--input", dir / "scan.xyz", "--dump-grid", dir / "grid.csv"});
  REQUIRE(sel.code == 0);
  CHECK(sel.out.rfind("viewpoint_index=", 0) == 0);
  CHECK(sel.out.find("\ndirection=") != std::string::npos);
  CHECK(sel.out.find("\nresolution=") != std::string::npos);
  const std::string grid = slurp(dir / "grid.csv");
  CHECK(grid.rfind("viewpoint_index,resolution,Q,D\n", 0) == 0);
  CHECK(std::count(grid.begin(), grid.end(), '\n') == 161);

  const Run ransac = run({"select", "--input", dir / "scan.xyz", "--method", "ransac", "--resolutions", "32,64"});
  CHECK(ransac.code == 0);
  CHECK(run({"select", "--input", dir / "scan.xyz", "--method", "magic"}).code == 1);

  const Run render = run({"render", "--input", dir / "scan.xyz", "--viewpoint-index", "3", "--resolution", "64",
                          "--output", dir / "v.pgm", "--binary", dir / "v.pbm", "--features", dir / "v.sft"});
  REQUIRE(render.code == 0);
  CHECK(read_pgm(fs::path(dir / "v.pgm")).size() == 64);
  CHECK(slurp(dir / "v.pbm").rfind("P4\n64 64\n", 0) == 0);
  // Two pyramid levels, each capped by its foreground pixel count.
  const DepthImage img = read_pgm(fs::path(dir / "v.pgm"));
  const std::size_t fg0 = foreground_count(img);
  const auto feats = read_features(fs::path(dir / "v.sft"));
  CHECK(feats.size() > std::min<std::size_t>(fg0, 1000));
  CHECK(feats.size() <= std::min<std::size_t>(fg0, 1000) + 1000);
  CHECK(run({"render", "--input", dir / "scan.xyz", "--viewpoint-index", "20", "--output", dir / "x.pgm"}).code == 1);

  const Run norm = run({"normalize", "--input", dir / "scan.xyz", "--output", dir / "n.xyz"});
  CHECK(norm.code == 0);
  CHECK(norm.out.find("scale=") != std::string::npos);
}

TEST_CASE("offline and online pipeline through files") {
  TempDir dir("viewret_cli_pipeline");
  write_obj(fs::path(dir / "box.obj"), make_box(1.0, 0.7, 0.5));
  write_obj(fs::path(dir / "ball.obj"), make_sphere(0.8));
  write_obj(fs::path(dir / "cone.obj"), make_cone(0.6, 1.4));
  {
    std::ofstream m(dir / "models.txt");
    m << "box 0 box.obj\nball 1 ball.obj\ncone 2 cone.obj\n";
    std::ofstream c(dir / "small.cfg");
    c << "n_k=80\nk=4\nfixed_resolution=64\nresolutions=32,64,128\n";
  }
  const std::string cfg = dir / "small.cfg";
  REQUIRE(run({"fit-gmm", "--input", dir / "models.txt", "--config", cfg, "--output", dir / "g.gmm"}).code == 0);
  REQUIRE(run({"build-db", "--input", dir / "models.txt", "--config", cfg, "--gmm", dir / "g.gmm", "--output",
               dir / "d.fvdb"})
              .code == 0);
  CHECK(read_db(fs::path(dir / "d.fvdb")).entries.size() == 60);

  REQUIRE(run({"scan-sim", "--mesh", dir / "ball.obj", "--scanner-pos", "0,-3,1", "--step", "0.5", "--output",
               dir / "q.xyz"})
              .code == 0);
  const Run q = run({"query", "--input", dir / "q.xyz", "--config", cfg, "--db", dir / "d.fvdb", "--gmm",
                     dir / "g.gmm", "--top-k", "2"});
  REQUIRE(q.code == 0);
  CHECK(q.out.rfind("rank,model_id,class_id,distance\n1,", 0) == 0);
  CHECK(std::count(q.out.begin(), q.out.end(), '\n') == 3);

  const Run multi = run({"query", "--input", dir / "q.xyz", "--config", cfg, "--db", dir / "d.fvdb", "--gmm",
                         dir / "g.gmm", "--multiview"});
  REQUIRE(multi.code == 0);
  CHECK(std::count(multi.out.begin(), multi.out.end(), '\n') == 4);

  SUBCASE("thread count does not change any output") {
    for (const char* threads : {"1", "8"}) {
      const std::string suffix = threads;
      REQUIRE(run({"fit-gmm", "--input", dir / "models.txt", "--config", cfg, "--threads", threads, "--output",
                   dir / ("g" + suffix)})
                  .code == 0);
      REQUIRE(run({"build-db", "--input", dir / "models.txt", "--config", cfg, "--threads", threads, "--gmm",
                   dir / ("g" + suffix), "--output", dir / ("d" + suffix)})
                  .code == 0);
    }
    CHECK(slurp(dir / "g1") == slurp(dir / "g8"));
    CHECK(slurp(dir / "d1") == slurp(dir / "d8"));
    CHECK(slurp(dir / "g1") == slurp(dir / "g.gmm"));
  }
}

TEST_CASE("bench writes the report and PR curves") {
  TempDir dir("viewret_cli_bench");
  {
    std::ofstream c(dir / "tiny.cfg");
    c << "scans_per_class=2\nscan_step_deg=1.0\nn_k=60\nk=2\nresolutions=32,64\nfixed_resolution=64\n"
         "ransac_iterations=50\n";
  }
  const Run r = run({"bench", "--config", dir / "tiny.cfg", "--cases", "gt-prop,ransac-fixed", "--report",
                     dir / "r.csv", "--pr", dir / "pr.csv"});
  REQUIRE(r.code == 0);
  const std::string report = slurp(dir / "r.csv");
  CHECK(report.rfind("case,metric,value\n", 0) == 0);
  CHECK(report.find("gt-prop,NN,") != std::string::npos);
  CHECK(report.find("ransac-fixed,angular_error_rad,") != std::string::npos);
  CHECK(slurp(dir / "pr.csv").rfind("case,query_id,recall,precision\n", 0) == 0);
  CHECK(run({"bench", "--config", dir / "tiny.cfg", "--cases", "bogus"}).code == 1);
}
