#include <doctest.h>

#include "helpers.hpp"
#include "oceanscope/dataset.hpp"
#include "oceanscope/raw_format.hpp"
#include "oceanscope/synthetic.hpp"

using namespace oceanscope;

namespace {

Dataset smallFixture() {
  synthetic::FixtureSpec spec;
  spec.depths = 4;
  spec.lats = 8;
  spec.lons = 8;
  spec.steps = 2;
  return synthetic::translatingBlobFixture(spec);
}

bool bitEqual(const ScalarVolume& a, const ScalarVolume& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.values().data(), b.values().data(), sizeof(float) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("raw format round trip is bit exact") {
  testing::TempDir dir("raw");
  Dataset original = smallFixture();
  writeRaw(original, dir.path());
  Dataset loaded = ingestRaw(dir.path());
  CHECK(loaded.grid().shape() == original.grid().shape());
  CHECK(*loaded.spatialGrid() == *original.spatialGrid());
  CHECK(loaded.variables() == original.variables());
  for (Index t = 0; t < 2; ++t)
    for (const auto& v : original.variables()) CHECK(bitEqual(loaded.loadTimeStep(t, v), original.loadTimeStep(t, v)));
  CHECK(std::isnan(loaded.loadTimeStep(0, "salinity")(0, 7, 0)));  // land corner
  CHECK(loaded.sourceBytes() > 0);
}

TEST_CASE("variable selection and missing variables") {
  testing::TempDir dir("rawsel");
  writeRaw(smallFixture(), dir.path());
  Dataset sal = ingestRaw(dir.path(), {"salinity"});
  CHECK(sal.variables() == std::vector<std::string>{"salinity"});
  CHECK(testing::raises([&] { sal.loadTimeStep(0, "temperature"); }, ErrorCode::notFound));
  CHECK(testing::raises([&] { ingestRaw(dir.path(), {"oxygen"}); }, ErrorCode::notFound));
  CHECK(testing::raises([&] { ingestRaw(dir / "missing"); }, ErrorCode::io));
}

TEST_CASE("clipping selects the requested box") {
  Dataset full = smallFixture();
  const SpatialGrid& g = *full.spatialGrid();
  ClipSpec clip;
  clip.lonMin = g.lon[2];
  clip.lonMax = g.lon[5];
  clip.latMin = g.lat[1];
  clip.latMax = g.lat[3];
  clip.maxDepth = g.depth[1];
  clip.timeRange = TimeRange{1, 2};
  Dataset sub = full.subset({"salinity"}, clip);
  CHECK(sub.grid().shape() == std::array<Index, 4>{1, 2, 3, 4});
  const ScalarVolume a = sub.loadTimeStep(0, "salinity");
  const ScalarVolume b = full.loadTimeStep(1, "salinity");
  for (Index d = 0; d < 2; ++d)
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 4; ++j) CHECK(a(d, i, j) == b(d, i + 1, j + 2));
}

TEST_CASE("clip equal to the full extent keeps the shape") {
  Dataset full = smallFixture();
  const SpatialGrid& g = *full.spatialGrid();
  ClipSpec clip;
  clip.lonMin = g.lon.front();
  clip.lonMax = g.lon.back();
  clip.latMin = g.lat.front();
  clip.latMax = g.lat.back();
  clip.maxDepth = g.depth.back();
  Dataset same = full.subset({}, clip);
  CHECK(same.grid().shape() == full.grid().shape());
}

TEST_CASE("clip errors") {
  Dataset full = smallFixture();
  ClipSpec outside;
  outside.lonMin = 0.0;
  outside.lonMax = 10.0;
  CHECK(testing::raises([&] { full.subset({}, outside); }, ErrorCode::outOfDomain));
  ClipSpec inverted;
  inverted.latMin = 20.0;
  inverted.latMax = 10.0;
  CHECK(testing::raises([&] { full.subset({}, inverted); }, ErrorCode::invalidParameter));
  ClipSpec late;
  late.timeRange = TimeRange{0, 5};
  CHECK(testing::raises([&] { full.subset({}, late); }, ErrorCode::bounds));
}

TEST_CASE("time step bounds and timing log") {
  Dataset ds = smallFixture();
  ds.clearTimingLog();
  CHECK(testing::raises([&] { ds.loadTimeStep(2, "salinity"); }, ErrorCode::bounds));
  CHECK(testing::raises([&] { ds.loadTimeStep(-1, "salinity"); }, ErrorCode::bounds));
  ds.loadTimeStep(1, "temperature");
  ds.loadTimeStep(0, "salinity");
  const auto log = ds.timingLog();
  REQUIRE(log.size() == 2);
  CHECK(log[0].step == 1);
  CHECK(log[0].variable == "temperature");
  CHECK(log[1].seconds >= 0.0);
}

TEST_CASE("loadField resolves variables and derived names") {
  Dataset ds = smallFixture();
  CHECK(bitEqual(loadField(ds, 0, "salinity"), ds.loadTimeStep(0, "salinity")));
  const ScalarVolume speed = loadField(ds, 0, "speed");
  const auto vel = ds.loadVelocity(0);
  CHECK(bitEqual(speed, speedField(vel)));
  CHECK(loadField(ds, 0, "okubo-weiss").size() == speed.size());
  CHECK(testing::raises([&] { loadField(ds, 0, "oxygen"); }, ErrorCode::notFound));
}

TEST_CASE("withVariable adds an in-memory field") {
  Dataset ds = smallFixture();
  std::vector<ScalarVolume> steps{ScalarVolume(ds.spatialGrid(), 1.0f), ScalarVolume(ds.spatialGrid(), 2.0f)};
  Dataset more = ds.withVariable("ones", steps);
  CHECK(more.hasVariable("ones"));
  CHECK(more.loadTimeStep(1, "ones")(0, 0, 0) == 2.0f);
  CHECK_FALSE(ds.hasVariable("ones"));
  CHECK(testing::raises([&] { ds.withVariable("bad", {ScalarVolume(ds.spatialGrid())}); }, ErrorCode::invalidInput));
}

TEST_CASE("longitude normalization") {
  CHECK(normalizeLongitude(190.0) == doctest::Approx(-170.0));
  CHECK(normalizeLongitude(180.0) == doctest::Approx(-180.0));
  CHECK(normalizeLongitude(-180.0) == doctest::Approx(-180.0));
  CHECK(normalizeLongitude(360.0) == doctest::Approx(0.0));
  CHECK(normalizeLongitude(85.0) == doctest::Approx(85.0));
}
