// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "viewret/error.hpp"
#include "viewret/eval.hpp"
#include "viewret/io.hpp"
#include "viewret/parallel.hpp"
#include "viewret/pipeline.hpp"
#include "viewret/render.hpp"
#include "viewret/scansim.hpp"
#include "viewret/select.hpp"

namespace viewret::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string input;
  std::string output;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string resolutions;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--input", c.input, "Input file");
  sub->add_option("--output", c.output, "Output file");
  sub->add_option("--seed", c.seed, "Random seed (default 42)");
  sub->add_option("--config", c.config, "key=value config file; flags take precedence");
  sub->add_option("--threads", c.threads, "Worker thread cap (default: all cores)");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const Vec3& v) { return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z()); }

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

struct Settings {
  PipelineConfig pipeline;
  SyntheticDatasetConfig dataset;
};

// Defaults, then the config file, then explicit flags.
Settings resolve(const Common& c) {
  Settings s;
  std::optional<unsigned> threads;
  if (!c.config.empty()) {
    KeyValues kv = read_key_values(fs::path(c.config));
    if (auto it = kv.find("threads"); it != kv.end()) {
      threads = static_cast<unsigned>(std::stoul(it->second));
      kv.erase(it);
    }
    KeyValues rest;
    for (const auto& key : apply_config(kv, s.pipeline)) rest[key] = kv.at(key);
    const auto unknown = apply_dataset_config(rest, s.dataset);
    if (!unknown.empty()) throw UsageError("unknown config key '" + unknown.front() + "'");
  }
  if (c.seed) s.pipeline.seed = *c.seed;
  s.dataset.seed = s.pipeline.seed;
  if (!c.resolutions.empty()) s.pipeline.resolutions = parse_int_list(c.resolutions);
  if (c.threads) threads = c.threads;
  set_max_threads(threads.value_or(0));
  return s;
}

PointCloud load_cloud(const std::string& path) {
  require(path, "--input");
  PointCloud cloud = read_xyz(fs::path(path));
  if (cloud.empty()) throw Error(Errc::kEmptyCloud, path + " holds no points");
  return cloud;
}

// Writes to --output when given, else to `out`.
void emit(const std::string& output, std::ostream& out,
          const std::function<void(std::ostream&)>& body) {
  if (output.empty()) {
    body(out);
    return;
  }
  std::ofstream os(output, std::ios::binary);
  if (!os) throw Error(Errc::kIo, "cannot write " + output);
  body(os);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"View-based partial shape retrieval toolkit", "viewret"};
  app.require_subcommand(1, 1);

  Common common;
  std::string method = "proposed";
  std::string dump_grid;
  std::optional<int> viewpoint_index;
  std::string viewpoint_vec;
  std::optional<int> resolution;
  std::string binary_out, features_out;
  std::string mesh_path, scanner_pos, target = "0,0,0";
  double fov = 40.0, step = 0.5, max_range = 100.0, noise_sigma = 0.0;
  std::string db_path, gmm_path;
  std::size_t top_k = 10;
  bool multiview = false;
  std::string cases = "gt-prop,gt-fixed,prop-prop,prop-fixed,ransac-prop,ransac-fixed";
  std::string report_path, pr_path;

  auto* normalize = app.add_subcommand("normalize", "Center and scale a point cloud");
  add_common(normalize, common);

  auto* render = app.add_subcommand("render", "Render a depth image (PGM)");
  add_common(render, common);
  render->add_option("--viewpoint-index", viewpoint_index, "Dodecahedron vertex 0..19")
      ->check(CLI::Range(0, 19));
  render->add_option("--viewpoint", viewpoint_vec, "Camera direction x,y,z");
  render->add_option("--resolution", resolution, "Image side in pixels");
  render->add_option("--binary", binary_out, "Also write the foreground mask (PBM)");
  render->add_option("--features", features_out, "Also write SIFT features (SFT1)");

  auto* select = app.add_subcommand("select", "Choose viewpoint and resolution");
  add_common(select, common);
  select->add_option("--resolutions", common.resolutions, "Candidate resolutions, comma separated");
  select->add_option("--method", method, "proposed | ransac")
      ->check(CLI::IsMember({"proposed", "ransac"}));
  select->add_option("--dump-grid", dump_grid, "Write the Q/D grid as CSV");

  auto* grid_dump = app.add_subcommand("grid-dump", "Write the Q/D grid as CSV");
  add_common(grid_dump, common);
  grid_dump->add_option("--resolutions", common.resolutions, "Candidate resolutions");

  auto* scan_sim = app.add_subcommand("scan-sim", "Simulate a scan of a mesh");
  add_common(scan_sim, common);
  scan_sim->add_option("--mesh", mesh_path, "Triangle mesh (OBJ)");
  scan_sim->add_option("--scanner-pos", scanner_pos, "Scanner position x,y,z");
  scan_sim->add_option("--target", target, "Aim point x,y,z");
  scan_sim->add_option("--fov", fov, "Field of view in degrees");
  scan_sim->add_option("--step", step, "Angular step in degrees");
  scan_sim->add_option("--max-range", max_range, "Maximum range");
  scan_sim->add_option("--noise-sigma", noise_sigma, "Gaussian range noise");

  auto* fit = app.add_subcommand("fit-gmm", "Fit the GMM on a model manifest");
  add_common(fit, common);

  auto* build = app.add_subcommand("build-db", "Encode the descriptor database");
  add_common(build, common);
  build->add_option("--gmm", gmm_path, "GMM file");

  auto* query = app.add_subcommand("query", "Retrieve the closest models for a cloud");
  add_common(query, common);
  query->add_option("--db", db_path, "Descriptor database");
  query->add_option("--gmm", gmm_path, "GMM file");
  query->add_option("--top-k", top_k, "Number of results (0 = all)");
  query->add_flag("--multiview", multiview, "Encode the 13-view ring around the selection");
  query->add_option("--method", method, "proposed | ransac")
      ->check(CLI::IsMember({"proposed", "ransac"}));

  auto* bench = app.add_subcommand("bench", "Run the synthetic retrieval benchmark");
  add_common(bench, common);
  bench->add_option("--cases", cases, "Comma-separated case list");
  bench->add_option("--report", report_path, "Metric report CSV");
  bench->add_option("--pr", pr_path, "Precision-recall CSV");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const Settings s = resolve(common);
    const PipelineConfig& cfg = s.pipeline;

    if (normalize->parsed()) {
      require(common.output, "--output");
      const auto [cloud, t] = normalize_pose(load_cloud(common.input));
      write_xyz(fs::path(common.output), cloud);
      out << "translation=" << fmt(t.translation) << "\nscale=" << fmt(t.scale) << '\n';
    } else if (render->parsed()) {
      require(common.input, "--input");
      require(common.output, "--output");
      if (viewpoint_index.has_value() == !viewpoint_vec.empty()) {
        throw UsageError("give exactly one of --viewpoint-index and --viewpoint");
      }
      const Viewpoint v = viewpoint_index ? dodecahedron_viewpoints()[*viewpoint_index]
                                          : Viewpoint(parse_vec3(viewpoint_vec));
      const int r = resolution.value_or(cfg.fixed_resolution);
      DepthImage img;
      if (fs::path(common.input).extension() == ".obj") {
        img = render_mesh(normalize_mesh(read_obj(fs::path(common.input))).first, v, r);
      } else {
        img = render_point_cloud(normalize_pose(load_cloud(common.input)).first, v, r);
      }
      write_pgm(fs::path(common.output), img);
      if (!binary_out.empty()) write_pbm(fs::path(binary_out), to_binary(img));
      if (!features_out.empty()) {
        write_features(fs::path(features_out), extract_features(img, cfg.sampling, cfg.seed));
      }
    } else if (select->parsed()) {
      const PointCloud cloud = normalize_pose(load_cloud(common.input)).first;
      const ScoreGrid grid = score_grid(cloud, dodecahedron_viewpoints(), cfg.resolutions);
      if (!dump_grid.empty()) {
        emit(dump_grid, out, [&](std::ostream& os) { write_grid_csv(os, grid); });
      }
      if (method == "ransac") {
        const Viewpoint v = ransac_viewpoint(cloud, cfg.ransac());
        out << "viewpoint_index=none\ndirection=" << fmt(v.direction())
            << "\nresolution=" << select_resolution_at(cloud, v, cfg.resolutions) << '\n';
      } else {
        const Selection sel = select_view(grid);
        out << "viewpoint_index=" << sel.viewpoint_index
            << "\ndirection=" << fmt(sel.viewpoint.direction())
            << "\nresolution=" << sel.resolution << '\n';
      }
    } else if (grid_dump->parsed()) {
      const PointCloud cloud = normalize_pose(load_cloud(common.input)).first;
      const ScoreGrid grid = score_grid(cloud, dodecahedron_viewpoints(), cfg.resolutions);
      emit(common.output, out, [&](std::ostream& os) { write_grid_csv(os, grid); });
    } else if (scan_sim->parsed()) {
      require(mesh_path, "--mesh");
      require(scanner_pos, "--scanner-pos");
      require(common.output, "--output");
      ScannerConfig sc;
      sc.position = parse_vec3(scanner_pos);
      sc.target = parse_vec3(target);
      sc.fov_deg = fov;
      sc.angular_step_deg = step;
      sc.max_range = max_range;
      sc.noise_sigma = noise_sigma;
      sc.seed = cfg.seed;
      const ScanResult scan = simulate_scan(read_obj(fs::path(mesh_path)), sc);
      write_xyz(fs::path(common.output), scan.cloud);
      write_key_values(fs::path(common.output + ".meta"),
                       {{"ground_truth_viewpoint", fmt(scan.ground_truth.direction())},
                        {"scanner_position", fmt(sc.position)},
                        {"target", fmt(sc.target)},
                        {"fov_deg", fmt(sc.fov_deg)},
                        {"angular_step_deg", fmt(sc.angular_step_deg)},
                        {"max_range", fmt(sc.max_range)},
                        {"noise_sigma", fmt(sc.noise_sigma)},
                        {"seed", std::to_string(sc.seed)},
                        {"points", std::to_string(scan.cloud.size())}});
    } else if (fit->parsed()) {
      require(common.input, "--input");
      require(common.output, "--output");
      const auto views = prepare_all_views(read_manifest(fs::path(common.input)), cfg);
      const GmmFit gmm = fit_database_gmm(views, cfg);
      write_gmm(fs::path(common.output), gmm.params);
      err << "fit-gmm: " << gmm.iterations << " EM iterations, log-likelihood "
          << fmt(gmm.log_likelihood.back()) << '\n';
    } else if (build->parsed()) {
      require(common.input, "--input");
      require(common.output, "--output");
      require(gmm_path, "--gmm");
      const GmmParams gmm = read_gmm(fs::path(gmm_path));
      write_db(fs::path(common.output), build_db(read_manifest(fs::path(common.input)), gmm, cfg));
    } else if (query->parsed()) {
      require(db_path, "--db");
      require(gmm_path, "--gmm");
      const PointCloud cloud = normalize_pose(load_cloud(common.input)).first;
      const GmmParams gmm = read_gmm(fs::path(gmm_path));
      const DescriptorDb db = read_db(fs::path(db_path));
      Viewpoint v;
      int r = 0;
      if (method == "ransac") {
        v = ransac_viewpoint(cloud, cfg.ransac());
        r = select_resolution_at(cloud, v, cfg.resolutions);
      } else {
        const Selection sel =
            select_view(score_grid(cloud, dodecahedron_viewpoints(), cfg.resolutions));
        v = sel.viewpoint;
        r = sel.resolution;
      }
      const std::vector<Viewpoint> views = multiview ? multiview_ring(v) : std::vector<Viewpoint>{v};
      const auto descriptors = encode_query(cloud, views, r, gmm, cfg, cfg.seed);
      const auto ranking = query_db(db, descriptors, top_k);
      emit(common.output, out, [&](std::ostream& os) {
        os << "rank,model_id,class_id,distance\n";
        for (std::size_t i = 0; i < ranking.size(); ++i) {
          os << i + 1 << ',' << ranking[i].model_id << ',' << ranking[i].class_id << ','
             << fmt(ranking[i].distance) << '\n';
        }
      });
    } else if (bench->parsed()) {
      std::vector<CaseConfig> case_list;
      try {
        case_list = parse_cases(cases);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      const auto dataset = make_synthetic_dataset(s.dataset);
      const BenchmarkReport report = run_benchmark(dataset, case_list, cfg);
      emit(report_path, out, [&](std::ostream& os) { write_report_csv(os, report); });
      if (!pr_path.empty()) {
        emit(pr_path, out, [&](std::ostream& os) { write_pr_csv(os, report); });
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace viewret::cli
