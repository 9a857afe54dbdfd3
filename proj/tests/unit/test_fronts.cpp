#include <doctest.h>

#include "helpers.hpp"
#include "oceanscope/fronts.hpp"
#include "oceanscope/synthetic.hpp"

using namespace oceanscope;

namespace {

int count(const BinaryVolume& v) { return v.values().cast<int>().sum(); }

BinaryVolume segment(const SpatialGridPtr& grid, Index d, Index i, Index j0, Index j1) {
  return synthetic::boxMask(grid, d, d + 1, i, i + 1, j0, j1);
}

BinaryVolume unite(const BinaryVolume& a, const BinaryVolume& b) {
  BinaryVolume out = a;
  out.values() = a.values().max(b.values());
  return out;
}

}  // namespace

TEST_CASE("isovolume comparisons") {
  auto grid = synthetic::indexGrid(1, 4, 4);
  ScalarVolume f(grid, 36.0f);
  f(0, 0, 0) = std::numeric_limits<float>::quiet_NaN();
  IsovolumeSpec spec;
  BinaryVolume all = extractIsovolume(f, spec);
  CHECK(count(all) == 15);
  CHECK(all(0, 0, 0) == 0);
  CHECK(count(extractIsovolume(ScalarVolume(grid, 34.0f), spec)) == 0);

  ScalarVolume half = synthetic::boxField(grid, 0, 1, 0, 4, 0, 2, 34.0f, 36.0f);
  BinaryVolume step = extractIsovolume(half, spec);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) CHECK(step(0, i, j) == (j >= 2 ? 1 : 0));

  IsovolumeSpec band{"salinity", Comparison::interval, 0.0, 33.0, 35.0};
  CHECK(count(extractIsovolume(half, band)) == 8);
  IsovolumeSpec below{"salinity", Comparison::leq, 35.0};
  CHECK(count(extractIsovolume(half, below)) == 8);
}

TEST_CASE("boundary of constant, block and isolated voxels") {
  auto grid = synthetic::indexGrid(1, 7, 7);
  CHECK(count(boundaryGrid(BinaryVolume(grid, 1))) == 0);

  const BinaryVolume block = synthetic::boxMask(grid, 0, 1, 2, 5, 2, 5);
  const BinaryVolume b = boundaryGrid(block);
  CHECK(count(b) == 8);
  CHECK(b(0, 3, 3) == 0);

  BinaryVolume single(grid, 0);
  single(0, 4, 1) = 1;
  const BinaryVolume s = boundaryGrid(single);
  CHECK(count(s) == 1);
  CHECK(s(0, 4, 1) == 1);
}

TEST_CASE("north-facing voxels") {
  auto grid = synthetic::indexGrid(1, 7, 7);
  const BinaryVolume block = synthetic::boxMask(grid, 0, 1, 2, 5, 2, 5);
  const BinaryVolume nf = northFacing(boundaryGrid(block), block);
  CHECK(count(nf) == 3);
  for (Index j = 2; j < 5; ++j) CHECK(nf(0, 4, j) == 1);

  const BinaryVolume band = synthetic::boxMask(grid, 0, 1, 2, 4, 0, 7);
  const BinaryVolume nb = northFacing(boundaryGrid(band), band);
  CHECK(count(nb) == 7);
  for (Index j = 0; j < 7; ++j) CHECK(nb(0, 3, j) == 1);

  const BinaryVolume all(grid, 1);
  CHECK(count(northFacing(boundaryGrid(all), all)) == 0);
}

TEST_CASE("segments on adjacent levels join within n-1 and split beyond n") {
  auto grid = synthetic::indexGrid(3, 20, 20);
  const int n = 3;
  const BinaryVolume a = segment(grid, 0, 5, 4, 12);
  const auto near = groupFronts(unite(a, segment(grid, 1, 5 + n - 1, 4, 12)), n);
  CHECK(near.fronts.size() == 1);
  const auto far = groupFronts(unite(a, segment(grid, 1, 5 + n + 1, 4, 12)), n);
  CHECK(far.fronts.size() == 2);
  CHECK(far.fronts[0].label == 1);
  CHECK(far.fronts[1].voxels.size() == 8);
  CHECK(groupFronts(BinaryVolume(grid, 0), n).fronts.empty());
}

TEST_CASE("even n is rejected") {
  auto grid = synthetic::indexGrid(1, 5, 5);
  CHECK(testing::raises([&] { groupFronts(BinaryVolume(grid, 0), 2); }, ErrorCode::invalidParameter));
}

TEST_CASE("front count is non-increasing in n") {
  synthetic::FixtureSpec spec;
  spec.depths = 8;
  spec.steps = 1;
  const ScalarVolume sal = synthetic::translatingBlobFixture(spec).loadTimeStep(0, "salinity");
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (int n : {1, 3, 5, 7, 9}) {
    const auto fronts = extractFronts(sal, IsovolumeSpec{}, n);
    CHECK(fronts.fronts.size() <= previous);
    previous = fronts.fronts.size();
  }
  CHECK(previous >= 1);
}

TEST_CASE("front descriptors carry depth range and centroid") {
  auto grid = makeSpatialGrid({5.0, 10.0, 15.0}, linspaceStep(0.0, 1.0, 10), linspaceStep(0.0, 1.0, 10));
  const BinaryVolume nf = unite(segment(grid, 0, 4, 2, 5), segment(grid, 1, 4, 2, 5));
  const auto fr = groupFronts(nf, 3, 7);
  REQUIRE(fr.fronts.size() == 1);
  const SurfaceFront& f = fr.fronts[0];
  CHECK(f.timeStep == 7);
  CHECK(f.depthMin == 5.0);
  CHECK(f.depthMax == 10.0);
  CHECK(f.centroid[0] == doctest::Approx(4.0));
  CHECK(f.centroid[1] == doctest::Approx(3.0));
  CHECK(f.centroid[2] == doctest::Approx(7.5));
  CHECK(f.voxels.size() == 6);
}

TEST_CASE("correspondence arcs") {
  auto grid = synthetic::indexGrid(2, 20, 20);
  const int n = 3;
  auto labelsOf = [&](const BinaryVolume& m) { return groupFronts(m, 1).labels; };
  const auto a = labelsOf(synthetic::boxMask(grid, 0, 1, 5, 6, 5, 9));

  SUBCASE("identical labelings give self arcs") {
    const auto two = labelsOf(unite(synthetic::boxMask(grid, 0, 1, 5, 6, 2, 5), synthetic::boxMask(grid, 1, 2, 15, 16, 12, 17)));
    const auto arcs = correspondenceArcs(two, two, n);
    CHECK(arcs == std::vector<Arc>{{0, 1, 1}, {0, 2, 2}});
  }
  SUBCASE("translation within n gives one arc") {
    const auto moved = labelsOf(synthetic::boxMask(grid, 0, 1, 7, 8, 7, 11));
    CHECK(correspondenceArcs(a, moved, n, 4) == std::vector<Arc>{{4, 1, 1}});
    const auto gone = labelsOf(synthetic::boxMask(grid, 0, 1, 9, 10, 5, 9));
    CHECK(correspondenceArcs(a, gone, n).empty());
  }
  SUBCASE("split gives two out-arcs") {
    const auto split =
        labelsOf(unite(synthetic::boxMask(grid, 0, 1, 3, 4, 5, 9), synthetic::boxMask(grid, 0, 1, 7, 8, 5, 9)));
    CHECK(correspondenceArcs(a, split, n) == std::vector<Arc>{{0, 1, 1}, {0, 1, 2}});
  }
  SUBCASE("arcs are equivariant under translation") {
    const auto b = labelsOf(synthetic::boxMask(grid, 0, 1, 6, 7, 7, 10));
    const auto a2 = labelsOf(synthetic::boxMask(grid, 0, 1, 8, 9, 9, 13));
    const auto b2 = labelsOf(synthetic::boxMask(grid, 0, 1, 9, 10, 11, 14));
    CHECK(correspondenceArcs(a, b, n) == correspondenceArcs(a2, b2, n));
  }
  SUBCASE("grid mismatch") {
    const auto other = labelsOf(BinaryVolume(synthetic::indexGrid(2, 10, 10), 0));
    CHECK(testing::raises([&] { correspondenceArcs(a, other, n); }, ErrorCode::invalidInput));
  }
}

TEST_CASE("disk offsets") {
  CHECK(diskOffsets(0).size() == 1);
  CHECK(diskOffsets(1).size() == 5);
  CHECK(diskOffsets(2).size() == 13);
  CHECK(diskOffsets(3).size() == 29);
}
