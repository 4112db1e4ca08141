// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "viewret/error.hpp"
#include "viewret/eval.hpp"
#include "viewret/parallel.hpp"
#include "viewret/scansim.hpp"

namespace viewret {

CaseConfig parse_case(const std::string& name) {
  const auto dash = name.find('-');
  if (dash == std::string::npos) throw Error(Errc::kParse, "bad case name '" + name + "'");
  const std::string vs = name.substr(0, dash);
  const std::string rs = name.substr(dash + 1);
  CaseConfig c;
  c.name = name;
  if (vs == "gt") {
    c.viewpoint = ViewpointSource::kGroundTruth;
  } else if (vs == "prop") {
    c.viewpoint = ViewpointSource::kProposed;
  } else if (vs == "ransac") {
    c.viewpoint = ViewpointSource::kRansac;
  } else {
    throw Error(Errc::kParse, "unknown viewpoint source in '" + name + "'");
  }
  if (rs == "prop") {
    c.resolution = ResolutionSource::kProposed;
  } else if (rs == "fixed") {
    c.resolution = ResolutionSource::kFixed;
  } else {
    throw Error(Errc::kParse, "unknown resolution source in '" + name + "'");
  }
  return c;
}

std::vector<CaseConfig> parse_cases(const std::string& comma_list) {
  std::vector<CaseConfig> out;
  std::stringstream ss(comma_list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_case(tok));
  }
  if (out.empty()) throw Error(Errc::kParse, "no cases given");
  return out;
}

std::vector<CaseConfig> all_cases() {
  return parse_cases("gt-prop,gt-fixed,prop-prop,prop-fixed,ransac-prop,ransac-fixed");
}

std::vector<std::string> apply_dataset_config(const KeyValues& kv,
                                              SyntheticDatasetConfig& cfg) {
  std::vector<std::string> unknown;
  const auto num = [](const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(Errc::kParse, "bad value for " + key + ": '" + text + "'");
    }
    return v;
  };
  for (const auto& [key, value] : kv) {
    if (key == "scans_per_class") {
      cfg.scans_per_class = static_cast<int>(num(key, value));
    } else if (key == "min_distance") {
      cfg.min_distance = num(key, value);
    } else if (key == "max_distance") {
      cfg.max_distance = num(key, value);
    } else if (key == "min_elevation_deg") {
      cfg.min_elevation_deg = num(key, value);
    } else if (key == "max_elevation_deg") {
      cfg.max_elevation_deg = num(key, value);
    } else if (key == "scan_step_deg") {
      cfg.angular_step_deg = num(key, value);
    } else if (key == "scan_noise_sigma") {
      cfg.noise_sigma = num(key, value);
    } else {
      unknown.push_back(key);
    }
  }
  return unknown;
}

std::vector<BenchItem> make_synthetic_dataset(const SyntheticDatasetConfig& cfg) {
  if (cfg.scans_per_class < 1 || !(cfg.min_distance > 0.0) ||
      cfg.max_distance < cfg.min_distance) {
    throw Error(Errc::kInvalidArgument, "bad synthetic dataset config");
  }
  static const char* kNames[] = {"sphere", "box", "cylinder", "cone"};
  const std::size_t per = static_cast<std::size_t>(cfg.scans_per_class);
  std::vector<BenchItem> items(4 * per);
  parallel_for(items.size(), [&](std::size_t idx) {
    const std::uint32_t cls = static_cast<std::uint32_t>(idx / per);
    const std::size_t instance = idx % per;
    std::mt19937_64 rng(mix_seed(cfg.seed, idx));
    const auto uniform = [&](double lo, double hi) {
      return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    TriangleMesh mesh;
    switch (cls) {
      case 0: mesh = make_sphere(uniform(0.8, 1.2)); break;
      case 1: mesh = make_box(uniform(0.8, 1.6), uniform(0.8, 1.6), uniform(0.6, 1.4)); break;
      case 2: mesh = make_cylinder(uniform(0.4, 0.6), uniform(1.4, 2.0)); break;
      default: mesh = make_cone(uniform(0.6, 0.9), uniform(1.2, 1.8)); break;
    }
    const double deg = std::numbers::pi / 180.0;
    const double az = uniform(0.0, 2.0 * std::numbers::pi);
    const double el = uniform(cfg.min_elevation_deg, cfg.max_elevation_deg) * deg;
    const double dist = uniform(cfg.min_distance, cfg.max_distance);

    double bound = 0.0;
    for (const auto& v : mesh.vertices) bound = std::max(bound, v.norm());
    ScannerConfig sc;
    sc.position = dist * Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    sc.target = Vec3::Zero();
    sc.fov_deg = 2.2 * std::asin(std::min(1.0, bound / dist)) / deg;
    sc.angular_step_deg = cfg.angular_step_deg;
    sc.noise_sigma = cfg.noise_sigma;
    sc.seed = mix_seed(cfg.seed, 1000 + idx);
    ScanResult scan = simulate_scan(mesh, sc);

    char id[32];
    std::snprintf(id, sizeof(id), "%s_%02zu", kNames[cls], instance);
    items[idx] = BenchItem{id, cls, std::move(scan.cloud), scan.ground_truth};
  });
  return items;
}

namespace {

struct ItemState {
  PointCloud normalized;
  Selection proposed;
  std::optional<Viewpoint> ransac;
};

struct PolicyDb {
  GmmParams gmm;
  DescriptorDb db;
};

}  // namespace

BenchmarkReport run_benchmark(const std::vector<BenchItem>& dataset,
                              const std::vector<CaseConfig>& cases,
                              const PipelineConfig& cfg) {
  if (dataset.size() < 2) {
    throw Error(Errc::kInvalidArgument, "leave-one-out needs at least two items");
  }
  bool want_ransac = false;
  for (const auto& c : cases) {
    want_ransac = want_ransac || c.viewpoint == ViewpointSource::kRansac;
    if (c.viewpoint == ViewpointSource::kGroundTruth) {
      for (const auto& item : dataset) {
        if (!item.ground_truth) {
          throw Error(Errc::kMissingGroundTruth,
                      "case " + c.name + " needs ground truth for " + item.id);
        }
      }
    }
  }

  const std::size_t n = dataset.size();
  const auto& lattice = dodecahedron_viewpoints();
  std::vector<ItemState> state(n);
  parallel_for(n, [&](std::size_t i) {
    state[i].normalized = normalize_pose(dataset[i].cloud).first;
    state[i].proposed = select_view(score_grid(state[i].normalized, lattice, cfg.resolutions));
    if (want_ransac) state[i].ransac = ransac_viewpoint(state[i].normalized, cfg.ransac());
  });

  std::map<ResolutionSource, PolicyDb> dbs;
  for (const auto& c : cases) {
    if (dbs.count(c.resolution)) continue;
    std::vector<ModelViews> views(n);
    parallel_for(n, [&](std::size_t i) {
      const ModelInput model{dataset[i].id, dataset[i].class_id, dataset[i].cloud};
      const int r = c.resolution == ResolutionSource::kFixed ? cfg.fixed_resolution
                                                             : state[i].proposed.resolution;
      views[i] = prepare_model_views(model, cfg, r);
    });
    PolicyDb entry;
    entry.gmm = fit_database_gmm(views, cfg).params;
    entry.db = encode_db(views, entry.gmm, cfg);
    dbs.emplace(c.resolution, std::move(entry));
  }

  BenchmarkReport report;
  for (const auto& c : cases) {
    const PolicyDb& pdb = dbs.at(c.resolution);
    CaseReport cr;
    cr.config = c;
    cr.viewpoints.resize(n);
    cr.resolutions.resize(n);
    cr.rankings.resize(n);
    parallel_for(n, [&](std::size_t i) {
      const ItemState& st = state[i];
      Viewpoint v = st.proposed.viewpoint;
      if (c.viewpoint == ViewpointSource::kGroundTruth) v = *dataset[i].ground_truth;
      if (c.viewpoint == ViewpointSource::kRansac) v = *st.ransac;
      int r = cfg.fixed_resolution;
      if (c.resolution == ResolutionSource::kProposed) {
        r = c.viewpoint == ViewpointSource::kProposed
                ? st.proposed.resolution
                : select_resolution_at(st.normalized, v, cfg.resolutions);
      }
      cr.viewpoints[i] = v;
      cr.resolutions[i] = r;

      const std::uint64_t seed = mix_seed(mix_seed(cfg.seed, id_hash(dataset[i].id)), 0x5155);
      const auto query = encode_query(st.normalized, {v}, r, pdb.gmm, cfg, seed);
      RankedRetrieval rr;
      rr.query_id = dataset[i].id;
      rr.query_class = dataset[i].class_id;
      std::size_t relevant = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && dataset[j].class_id == dataset[i].class_id) ++relevant;
      }
      rr.relevant_total = relevant;
      for (const auto& m : query_db(pdb.db, query, 0, {dataset[i].id})) {
        rr.items.push_back({m.model_id, m.class_id, m.distance});
      }
      cr.rankings[i] = std::move(rr);
    });
    cr.nn = nn_metric(cr.rankings);
    cr.map = map_metric(cr.rankings);
    cr.ndcg = ndcg_metric(cr.rankings);
    double err = 0.0;
    std::size_t with_truth = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!dataset[i].ground_truth) continue;
      err += angular_error(cr.viewpoints[i], *dataset[i].ground_truth);
      ++with_truth;
    }
    if (with_truth > 0) cr.mean_angular_error = err / static_cast<double>(with_truth);
    report.cases.push_back(std::move(cr));
  }
  return report;
}

void write_report_csv(std::ostream& os, const BenchmarkReport& report) {
  os << "case,metric,value\n";
  char buf[64];
  const auto row = [&](const std::string& name, const char* metric, double v) {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    os << name << ',' << metric << ',' << buf << '\n';
  };
  for (const auto& c : report.cases) {
    row(c.config.name, "NN", c.nn);
    row(c.config.name, "mAP", c.map);
    row(c.config.name, "NDCG", c.ndcg);
    if (c.mean_angular_error) row(c.config.name, "angular_error_rad", *c.mean_angular_error);
  }
}

void write_pr_csv(std::ostream& os, const BenchmarkReport& report) {
  os << "case,query_id,recall,precision\n";
  char buf[96];
  for (const auto& c : report.cases) {
    for (const auto& r : c.rankings) {
      if (r.relevant_universe() == 0) continue;
      for (const auto& [recall, precision] : precision_recall_curve(r)) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f", recall, precision);
        os << c.config.name << ',' << r.query_id << ',' << buf << '\n';
      }
    }
  }
}

}  // namespace viewret
