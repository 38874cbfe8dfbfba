#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "ssig/ingest.hpp"
#include "ssig/siggen.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ssig;

namespace {

const GeoPoint kOrigin{2.35, 48.85};

// Objects placed by planar offset from the origin, so tests can reason in
// meters.
SemanticObject at(std::string id, char symbol, double x_east, double y_north) {
  return {std::move(id), symbol, unproject(kOrigin, {x_east, y_north})};
}

GeoBBox planar_bbox(double x0, double y0, double x1, double y1) {
  const GeoPoint lo = unproject(kOrigin, {x0, y0});
  const GeoPoint hi = unproject(kOrigin, {x1, y1});
  return {lo.lon_deg, lo.lat_deg, hi.lon_deg, hi.lat_deg};
}

}  // namespace

TEST_CASE("angle quantization follows the floor rule") {
  CHECK(quantize_angle(0.0, 16) == 0);
  CHECK(quantize_angle(22.5, 16) == 1);  // boundary belongs to the upper bin
  CHECK(quantize_angle(22.4999, 16) == 0);
  CHECK(quantize_angle(359.9, 16) == 15);
  CHECK(quantize_angle(45.0, 8) == 1);
  CHECK_THROWS_AS(quantize_angle(360.0, 16), Error);
  CHECK_THROWS_AS(quantize_angle(-0.1, 16), Error);
}

TEST_CASE("panoramic sweep example") {
  // tree due north at 10 m, street light due east at 20 m, traffic light due
  // south at 40 m (outside R=30)
  std::vector<SemanticObject> objects{
      at("1", 'B', 0.0, 10.0),
      at("2", 'D', 20.0, 0.0),
      at("3", 'G', 0.0, -40.0),
  };
  const Signature sig = build_signature(kOrigin, objects, BuildParams{}, kOrigin);
  CHECK(signature_to_string(sig) == "BD|0;4");
}

TEST_CASE("sweep edge cases") {
  const BuildParams params{};
  CHECK(build_signature(kOrigin, {}, params, kOrigin).empty());

  // an object exactly at distance R is included (closed ball)
  std::vector<SemanticObject> boundary{at("1", 'B', 0.0, 30.0)};
  CHECK(build_signature(kOrigin, boundary, params, kOrigin).size() == 1);

  std::vector<SemanticObject> outside{at("1", 'B', 0.0, 30.001)};
  CHECK(build_signature(kOrigin, outside, params, kOrigin).empty());
}

TEST_CASE("sweep tie-breaking is by distance then symbol") {
  // two objects due north, nearer one second in input order
  std::vector<SemanticObject> objects{
      at("1", 'D', 0.0, 20.0),
      at("2", 'B', 0.0, 10.0),
  };
  const Signature sig = build_signature(kOrigin, objects, BuildParams{}, kOrigin);
  CHECK(sig.types == "BD");
  CHECK(sig.angle_bins == std::vector<std::uint8_t>{0, 0});
}

TEST_CASE("generated signatures have nondecreasing bins and count objects in range") {
  testgen::for_each_case(0x5163u, [](std::mt19937_64& gen, int) {
    const BuildParams params{};
    std::vector<SemanticObject> objects;
    std::size_t within = 0;
    const std::size_t n = rng::uniform_below(gen, 40);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rng::uniform01(gen) * 120.0 - 60.0;
      const double y = rng::uniform01(gen) * 120.0 - 60.0;
      if (std::hypot(x, y) <= params.visibility_range_m) ++within;
      objects.push_back(at(std::to_string(i), 'B', x, y));
    }
    const Signature sig = build_signature(kOrigin, objects, params, kOrigin);
    CHECK(sig.size() == within);
    CHECK(std::is_sorted(sig.angle_bins.begin(), sig.angle_bins.end()));
  });
}

TEST_CASE("rotating the scene by whole bins rotates the signature") {
  testgen::for_each_case(0x0707u, [](std::mt19937_64& gen, int) {
    const BuildParams params{};
    const std::uint32_t q = params.quantization_levels;
    const auto j = static_cast<std::uint32_t>(rng::uniform_below(gen, q));
    const double theta = 360.0 / q * static_cast<double>(j);
    const double rad = theta * 3.14159265358979323846 / 180.0;

    std::vector<SemanticObject> objects;
    std::vector<SemanticObject> rotated;
    const std::size_t n = 1 + rng::uniform_below(gen, 20);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rng::uniform01(gen) * 50.0 - 25.0;
      const double y = rng::uniform01(gen) * 50.0 - 25.0;
      objects.push_back(at(std::to_string(i), 'B', x, y));
      // clockwise rotation about the viewpoint
      rotated.push_back(at(std::to_string(i), 'B',
                           x * std::cos(rad) + y * std::sin(rad),
                           -x * std::sin(rad) + y * std::cos(rad)));
    }
    const Signature base = build_signature(kOrigin, objects, params, kOrigin);
    const Signature turned = build_signature(kOrigin, rotated, params, kOrigin);
    REQUIRE(base.size() == turned.size());

    std::multiset<std::pair<char, std::uint32_t>> expected, actual;
    for (std::size_t i = 0; i < base.size(); ++i) {
      expected.insert({base.types[i],
                       (static_cast<std::uint32_t>(base.angle_bins[i]) + j) % q});
      actual.insert({turned.types[i], turned.angle_bins[i]});
    }
    CHECK(expected == actual);
  });
}

TEST_CASE("grid covers the bbox with inclusive endpoints") {
  // a 100 m x 100 m box with s=10 gives 11 x 11 candidate cells; one object
  // in reach of everything so no cell is dropped. The box is laid out in the
  // build's own projection frame, whose origin is the object centroid.
  std::vector<SemanticObject> objects{at("1", 'B', 50.0, 50.0)};
  const GeoPoint frame_origin = objects[0].position;
  const GeoPoint lo = unproject(frame_origin, {-50.0, -50.0});
  const GeoPoint hi = unproject(frame_origin, {50.0, 50.0});
  BuildParams params;
  params.visibility_range_m = 100.0;
  const auto db = build_database(
      objects, params, GeoBBox{lo.lon_deg, lo.lat_deg, hi.lon_deg, hi.lat_deg});
  CHECK(db.size() == 121);
}

TEST_CASE("cells outside the visibility range of all objects are dropped") {
  std::vector<SemanticObject> objects{at("1", 'B', 50.0, 50.0)};
  const auto db = build_database(objects, BuildParams{},
                                 planar_bbox(0, 0, 100, 100));
  CHECK(db.size() > 0);
  CHECK(db.size() < 121);
  for (const auto& rec : db.records()) {
    const double d =
        planar_distance(project(db.projection_origin(), rec.cell_center),
                        project(db.projection_origin(), objects[0].position));
    CHECK(d <= BuildParams{}.visibility_range_m + 0.01);
    CHECK(rec.signature.size() == 1);
  }
}

TEST_CASE("build rejects bad input") {
  CHECK_THROWS_AS(build_database({}, BuildParams{}, planar_bbox(0, 0, 100, 100)),
                  Error);
  std::vector<SemanticObject> objects{at("1", 'B', 0.0, 0.0)};
  CHECK_THROWS_AS(build_database(objects, BuildParams{},
                                 planar_bbox(0, 0, 0, 100)),
                  Error);
  std::vector<SemanticObject> unknown{at("1", 'Z', 0.0, 0.0)};
  CHECK_THROWS_AS(build_database(unknown, BuildParams{},
                                 planar_bbox(0, 0, 100, 100)),
                  Error);
}

TEST_CASE("cell ids are sequential in row-major order") {
  std::vector<SemanticObject> objects{at("1", 'B', 50.0, 50.0)};
  const GeoPoint frame_origin = objects[0].position;
  const GeoPoint lo = unproject(frame_origin, {-50.0, -50.0});
  const GeoPoint hi = unproject(frame_origin, {50.0, 50.0});
  BuildParams params;
  params.visibility_range_m = 100.0;
  const auto db = build_database(
      objects, params, GeoBBox{lo.lon_deg, lo.lat_deg, hi.lon_deg, hi.lat_deg});
  for (std::size_t i = 0; i < db.size(); ++i) {
    CHECK(db.records()[i].cell_id == i);
  }
  // row-major: the first row of cells runs west to east along the south edge
  const PlanarPoint p0 =
      project(db.projection_origin(), db.records()[0].cell_center);
  const PlanarPoint p1 =
      project(db.projection_origin(), db.records()[1].cell_center);
  CHECK(p1.x_east > p0.x_east);
  CHECK(std::fabs(p1.y_north - p0.y_north) < 1e-6);
}

TEST_CASE("bucketed construction equals the naive all-pairs oracle") {
  testgen::for_each_case(
      0xbcc7u,
      [](std::mt19937_64& gen, int) {
        const std::size_t n_objects = 1 + rng::uniform_below(gen, 120);
        std::vector<SemanticObject> objects;
        const auto& alphabet = alphabet_default();
        for (std::size_t i = 0; i < n_objects; ++i) {
          const char sym =
              alphabet.classes()[rng::uniform_below(gen, alphabet.size())]
                  .symbol;
          objects.push_back(at(std::to_string(i), sym,
                               rng::uniform01(gen) * 220.0 - 110.0,
                               rng::uniform01(gen) * 220.0 - 110.0));
        }
        BuildParams params;
        params.visibility_range_m = 15.0 + rng::uniform01(gen) * 30.0;
        const GeoBBox bbox = planar_bbox(-90, -90, 90, 90);
        const auto db = build_database(objects, params, bbox);

        // independent reconstruction: same grid contract, naive signatures
        const GeoPoint origin = db.projection_origin();
        const PlanarPoint lo =
            project(origin, {bbox.lon_min, bbox.lat_min});
        const PlanarPoint hi =
            project(origin, {bbox.lon_max, bbox.lat_max});
        const auto nx = static_cast<std::size_t>(std::floor(
                            (hi.x_east - lo.x_east) / params.grid_step_m +
                            1e-6)) +
                        1;
        const auto ny = static_cast<std::size_t>(std::floor(
                            (hi.y_north - lo.y_north) / params.grid_step_m +
                            1e-6)) +
                        1;
        std::vector<Signature> expected;
        for (std::size_t row = 0; row < ny; ++row) {
          for (std::size_t col = 0; col < nx; ++col) {
            const GeoPoint center = unproject(
                origin,
                {lo.x_east + static_cast<double>(col) * params.grid_step_m,
                 lo.y_north + static_cast<double>(row) * params.grid_step_m});
            Signature sig =
                oracle::build_signature_naive(center, objects, params, origin);
            if (!sig.empty()) expected.push_back(std::move(sig));
          }
        }
        REQUIRE(db.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
          CHECK(db.records()[i].signature == expected[i]);
        }
      },
      200);
}

TEST_CASE("database construction is deterministic") {
  std::vector<SemanticObject> objects;
  auto gen = rng::make_engine(99);
  for (int i = 0; i < 60; ++i) {
    objects.push_back(at(std::to_string(i), i % 2 == 0 ? 'B' : 'D',
                         rng::uniform01(gen) * 200.0 - 100.0,
                         rng::uniform01(gen) * 200.0 - 100.0));
  }
  const GeoBBox bbox = planar_bbox(-80, -80, 80, 80);
  const auto a = build_database(objects, BuildParams{}, bbox);
  const auto b = build_database(objects, BuildParams{}, bbox);
  CHECK(a == b);

  const std::string path_a = "ssig_test_det_a.db";
  const std::string path_b = "ssig_test_det_b.db";
  save_database(a, path_a);
  save_database(b, path_b);
  std::ifstream fa(path_a, std::ios::binary);
  std::ifstream fb(path_b, std::ios::binary);
  const std::string bytes_a((std::istreambuf_iterator<char>(fa)),
                            std::istreambuf_iterator<char>());
  const std::string bytes_b((std::istreambuf_iterator<char>(fb)),
                            std::istreambuf_iterator<char>());
  CHECK(bytes_a == bytes_b);
  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
}

TEST_CASE("group statistics") {
  std::vector<DatabaseRecord> records{
      {0, kOrigin, Signature{"BD", {0, 1}}},
      {1, kOrigin, Signature{"BD", {0, 2}}},
      {2, kOrigin, Signature{"DG", {3, 4}}},
  };
  SignatureDatabase db(records, BuildParams{}, kOrigin, alphabet_default());

  const GroupStats by_type = group_stats(db, SignaturePart::type);
  CHECK(by_type.group_count == 2);
  CHECK(by_type.mean == doctest::Approx(1.5));
  CHECK(by_type.max == 2);
  CHECK(by_type.min == 1);
  // interpolated quartiles over sizes {1, 2}
  CHECK(by_type.q25 == doctest::Approx(1.25));
  CHECK(by_type.q50 == doctest::Approx(1.5));
  CHECK(by_type.q75 == doctest::Approx(1.75));

  const GroupStats by_angle = group_stats(db, SignaturePart::angle);
  CHECK(by_angle.group_count == 3);  // all angle parts distinct
  CHECK(by_angle.mean == doctest::Approx(1.0));
  CHECK(by_angle.max == 1);
}
