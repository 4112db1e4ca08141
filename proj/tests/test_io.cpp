// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "test_util.hpp"
#include "viewret/error.hpp"
#include "viewret/io.hpp"
#include "viewret/scansim.hpp"

using namespace viewret;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::kInvalidArgument;
}

}  // namespace

TEST_CASE("xyz round trip is exact") {
  const PointCloud c = testing::random_ball_cloud(200, 1);
  std::stringstream ss;
  write_xyz(ss, c);
  CHECK(read_xyz(ss).points == c.points);

  std::istringstream with_comments("# header\n1 2 3\n\n  4\t5 6\n");
  const PointCloud parsed = read_xyz(with_comments);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed.points[1] == Vec3(4, 5, 6));
  std::istringstream extra_columns("1 2 3 4\n");
  CHECK(code_of([&] { read_xyz(extra_columns); }) == Errc::kParse);
  std::istringstream bad("1 2\n");
  CHECK(code_of([&] { read_xyz(bad); }) == Errc::kParse);
}

TEST_CASE("obj reader") {
  std::istringstream is(
      "# cube corner\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nvn 0 0 1\n"
      "f 1/1/1 2/2/1 3/3/1\nf -4 -2 -1\n");
  const TriangleMesh m = read_obj(is);
  CHECK(m.vertices.size() == 4);
  REQUIRE(m.triangles.size() == 2);
  CHECK(m.triangles[0] == std::array<int, 3>{0, 1, 2});
  CHECK(m.triangles[1] == std::array<int, 3>{0, 2, 3});

  std::istringstream quad("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  CHECK(code_of([&] { read_obj(quad); }) == Errc::kParse);

  const TriangleMesh box = make_box(1, 2, 3);
  std::stringstream ss;
  write_obj(ss, box);
  const TriangleMesh back = read_obj(ss);
  CHECK(back.vertices == box.vertices);
  CHECK(back.triangles == box.triangles);

  std::istringstream out_of_range("v 0 0 0\nf 1 2 3\n");
  CHECK_THROWS_AS(read_obj(out_of_range), Error);
}

TEST_CASE("pgm and pbm") {
  DepthImage img(8);
  img.at(0, 0) = 255;
  img.at(7, 3) = 1;
  std::stringstream ss;
  write_pgm(ss, img);
  const std::string bytes = ss.str();
  CHECK(bytes.rfind("P5\n8 8\n255\n", 0) == 0);
  CHECK(bytes.size() == 11 + 64);
  CHECK(read_pgm(ss) == img);

  BinaryImage b(10);
  b.at(0, 0) = 1;
  b.at(0, 9) = 1;
  b.at(9, 8) = 1;
  std::ostringstream pbm;
  write_pbm(pbm, b);
  const std::string p = pbm.str();
  const std::string header = "P4\n10 10\n";
  REQUIRE(p.size() == header.size() + 20);
  CHECK(static_cast<unsigned char>(p[header.size()]) == 0x80);
  CHECK(static_cast<unsigned char>(p[header.size() + 1]) == 0x40);
  CHECK(static_cast<unsigned char>(p[header.size() + 19]) == 0x80);
}

TEST_CASE("feature file layout") {
  std::vector<FeatureVector> fs = testing::random_features(3, 2);
  std::stringstream ss;
  write_features(ss, fs);
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 4 + 4 + 3 * 128 * 4);
  CHECK(bytes.substr(0, 4) == "SFT1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 3);
  float first;
  std::memcpy(&first, bytes.data() + 8, 4);
  CHECK(first == fs[0][0]);
  CHECK(read_features(ss) == fs);

  std::istringstream truncated(bytes.substr(0, 100));
  CHECK(code_of([&] { read_features(truncated); }) == Errc::kParse);
}

TEST_CASE("gmm file round trip") {
  const GmmParams g = testing::random_gmm(3, 7);
  std::stringstream ss;
  write_gmm(ss, g);
  CHECK(ss.str().size() == 4 + 8 + 4 * (3 + 2 * 3 * 128));
  const GmmParams back = read_gmm(ss);
  CHECK(back.components() == 3);
  for (Eigen::Index c = 0; c < 3; ++c) {
    CHECK(back.weights(c) == doctest::Approx(g.weights(c)).epsilon(1e-6));
    for (Eigen::Index j = 0; j < 128; ++j) {
      CHECK(back.means(c, j) == static_cast<double>(static_cast<float>(g.means(c, j))));
      CHECK(back.sigmas(c, j) == static_cast<double>(static_cast<float>(g.sigmas(c, j))));
    }
  }
  std::istringstream wrong("GMMX");
  CHECK(code_of([&] { read_gmm(wrong); }) == Errc::kParse);
}

TEST_CASE("db file round trip") {
  DescriptorDb db;
  db.components = 1;
  db.entries.push_back({"alpha", 3, 0, std::vector<float>(256, 0.25f)});
  db.entries.push_back({"b\xc3\xa9ta", 1, 19, std::vector<float>(256, -1.5f)});
  std::stringstream ss;
  write_db(ss, db);
  CHECK(ss.str().substr(0, 4) == "FVDB");
  const DescriptorDb back = read_db(ss);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.components == 1);
  CHECK(back.feature_dim == 128);
  CHECK(back.entries[1].model_id == "b\xc3\xa9ta");
  CHECK(back.entries[1].class_id == 1);
  CHECK(back.entries[1].viewpoint_id == 19);
  CHECK(back.entries[1].descriptor == db.entries[1].descriptor);

  std::stringstream again;
  write_db(again, back);
  std::stringstream first;
  write_db(first, db);
  CHECK(again.str() == first.str());
}

TEST_CASE("key values") {
  std::istringstream is("# comment\n  n_k = 300 \n\nk=8\n");
  const KeyValues kv = read_key_values(is);
  CHECK(kv.at("n_k") == "300");
  CHECK(kv.at("k") == "8");
  std::istringstream bad("just text\n");
  CHECK(code_of([&] { read_key_values(bad); }) == Errc::kParse);
}

TEST_CASE("missing files report the path") {
  const std::string path = "/nonexistent/dir/cloud.xyz";
  try {
    read_xyz(std::filesystem::path(path));
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kIo);
    CHECK(std::string(e.what()).find(path) != std::string::npos);
  }
}
