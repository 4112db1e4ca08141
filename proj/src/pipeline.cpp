// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "viewret/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "viewret/error.hpp"
#include "viewret/parallel.hpp"
#include "viewret/render.hpp"

namespace viewret {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
  const auto first = raw.find_first_not_of(" \t");
  const std::string text =
      first == std::string::npos ? "" : raw.substr(first, raw.find_last_not_of(" \t") - first + 1);
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error(Errc::kParse, "bad value for " + key + ": '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw Error(Errc::kParse, "bad boolean for " + key + ": '" + text + "'");
}

}  // namespace

RansacOptions PipelineConfig::ransac() const {
  RansacOptions o;
  o.iterations = ransac_iterations;
  o.inlier_tolerance = ransac_tolerance;
  o.seed = seed;
  return o;
}

GmmOptions PipelineConfig::gmm() const {
  GmmOptions o;
  o.components = gmm_components;
  o.max_iterations = gmm_iterations;
  o.seed = seed;
  return o;
}

std::vector<std::string> apply_config(const KeyValues& kv, PipelineConfig& cfg) {
  std::vector<std::string> unknown;
  for (const auto& [key, value] : kv) {
    if (key == "n_k") {
      cfg.sampling.keypoints = parse_number<int>(key, value);
    } else if (key == "s") {
      cfg.sampling.reduction = parse_number<double>(key, value);
    } else if (key == "k") {
      cfg.gmm_components = parse_number<int>(key, value);
    } else if (key == "gmm_iterations") {
      cfg.gmm_iterations = parse_number<int>(key, value);
    } else if (key == "gmm_max_features") {
      cfg.gmm_max_features = parse_number<std::size_t>(key, value);
    } else if (key == "resolutions") {
      cfg.resolutions = parse_int_list(value);
    } else if (key == "ransac_iterations") {
      cfg.ransac_iterations = parse_number<int>(key, value);
    } else if (key == "ransac_tolerance") {
      cfg.ransac_tolerance = parse_number<double>(key, value);
    } else if (key == "fixed_resolution") {
      cfg.fixed_resolution = parse_number<int>(key, value);
    } else if (key == "fisher_postprocess") {
      cfg.fisher_postprocess = parse_bool(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value);
    } else {
      unknown.push_back(key);
    }
  }
  return unknown;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_number<int>("list", tok));
  if (out.empty()) throw Error(Errc::kParse, "empty list");
  return out;
}

Vec3 parse_vec3(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(parse_number<double>("vector", tok));
  if (v.size() != 3) throw Error(Errc::kParse, "expected x,y,z but got '" + text + "'");
  return {v[0], v[1], v[2]};
}

std::uint64_t id_hash(const std::string& id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<ModelInput> read_manifest(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::kIo, "cannot open " + path.string());
  std::vector<ModelInput> models;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string id, cls, file;
    if (!(ss >> id) || id[0] == '#') continue;
    if (!(ss >> cls >> file)) {
      throw Error(Errc::kParse, path.string() + ":" + std::to_string(lineno) +
                                    ": expected 'id class path'");
    }
    ModelInput m;
    m.id = id;
    m.class_id = parse_number<std::uint32_t>("class", cls);
    const fs::path p = fs::path(file).is_absolute() ? fs::path(file) : path.parent_path() / file;
    if (p.extension() == ".obj") {
      m.geometry = read_obj(p);
    } else {
      m.geometry = read_xyz(p);
    }
    models.push_back(std::move(m));
  }
  if (models.empty()) throw Error(Errc::kParse, path.string() + ": no models listed");
  return models;
}

ModelViews prepare_model_views(const ModelInput& model, const PipelineConfig& cfg,
                               std::optional<int> resolution) {
  ModelViews out;
  out.id = model.id;
  out.class_id = model.class_id;
  const auto& views = dodecahedron_viewpoints();
  std::vector<DepthImage> images;
  if (const auto* mesh = std::get_if<TriangleMesh>(&model.geometry)) {
    const TriangleMesh normalized = normalize_mesh(*mesh).first;
    out.resolution = resolution.value_or(cfg.fixed_resolution);
    for (const auto& v : views) images.push_back(render_mesh(normalized, v, out.resolution));
  } else {
    const PointCloud normalized =
        normalize_pose(std::get<PointCloud>(model.geometry)).first;
    out.resolution = resolution ? *resolution
                                : select_view(score_grid(normalized, views, cfg.resolutions))
                                      .resolution;
    for (const auto& v : views) {
      images.push_back(render_point_cloud(normalized, v, out.resolution));
    }
  }
  const std::uint64_t model_seed = mix_seed(cfg.seed, id_hash(model.id));
  for (std::size_t i = 0; i < images.size(); ++i) {
    out.view_features.push_back(
        extract_features(images[i], cfg.sampling, mix_seed(model_seed, i)));
  }
  return out;
}

std::vector<ModelViews> prepare_all_views(const std::vector<ModelInput>& models,
                                          const PipelineConfig& cfg) {
  std::vector<ModelViews> out(models.size());
  parallel_for(models.size(),
               [&](std::size_t i) { out[i] = prepare_model_views(models[i], cfg); });
  return out;
}

std::vector<FeatureVector> pool_features(const std::vector<ModelViews>& views,
                                         const PipelineConfig& cfg) {
  std::size_t total = 0;
  for (const auto& m : views)
    for (const auto& f : m.view_features) total += f.size();
  const std::size_t keep =
      cfg.gmm_max_features == 0 ? total : std::min(total, cfg.gmm_max_features);
  std::vector<FeatureVector> pooled;
  pooled.reserve(keep);
  // Evenly strided selection: item i is kept when floor(i*keep/total)
  // advances.
  std::size_t index = 0;
  for (const auto& m : views) {
    for (const auto& feats : m.view_features) {
      for (const auto& f : feats) {
        const std::size_t slot = index * keep / total;
        const std::size_t next = (index + 1) * keep / total;
        if (next > slot) pooled.push_back(f);
        ++index;
      }
    }
  }
  return pooled;
}

GmmFit fit_database_gmm(const std::vector<ModelViews>& views,
                        const PipelineConfig& cfg) {
  const std::vector<FeatureVector> pooled = pool_features(views, cfg);
  return fit_gmm(pooled, cfg.gmm());
}

DescriptorDb encode_db(const std::vector<ModelViews>& views, const GmmParams& gmm,
                       const PipelineConfig& cfg) {
  DescriptorDb db;
  db.components = static_cast<std::uint32_t>(gmm.components());
  db.feature_dim = static_cast<std::uint32_t>(gmm.dim());
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t m = 0; m < views.size(); ++m) {
    for (std::size_t v = 0; v < views[m].view_features.size(); ++v) jobs.emplace_back(m, v);
  }
  db.entries.resize(jobs.size());
  const FisherOptions fopts{cfg.fisher_postprocess};
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto [m, v] = jobs[j];
    const FisherDescriptor fv = fisher_vector(views[m].view_features[v], gmm, fopts);
    DbEntry& e = db.entries[j];
    e.model_id = views[m].id;
    e.class_id = views[m].class_id;
    e.viewpoint_id = static_cast<std::uint32_t>(v);
    e.descriptor.assign(fv.values.begin(), fv.values.end());
  });
  return db;
}

DescriptorDb build_db(const std::vector<ModelInput>& models, const GmmParams& gmm,
                      const PipelineConfig& cfg) {
  return encode_db(prepare_all_views(models, cfg), gmm, cfg);
}

std::vector<FisherDescriptor> encode_query(const PointCloud& normalized,
                                           const std::vector<Viewpoint>& views,
                                           int resolution, const GmmParams& gmm,
                                           const PipelineConfig& cfg,
                                           std::uint64_t seed) {
  std::vector<FisherDescriptor> out(views.size());
  const FisherOptions fopts{cfg.fisher_postprocess};
  parallel_for(views.size(), [&](std::size_t i) {
    const DepthImage img = render_point_cloud(normalized, views[i], resolution);
    out[i] = fisher_vector(extract_features(img, cfg.sampling, mix_seed(seed, i)), gmm, fopts);
  });
  return out;
}

}  // namespace viewret
