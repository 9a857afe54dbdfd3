#include <doctest.h>

#include <random>

#include "fd_oracle.hpp"
#include "helpers.hpp"
#include "oceanscope/derived.hpp"
#include "oceanscope/synthetic.hpp"

using namespace oceanscope;

namespace {

void checkInterior(const ScalarVolume& f, double expected, double tol = 1e-5) {
  for (Index i = 1; i + 1 < f.rows(); ++i)
    for (Index j = 1; j + 1 < f.cols(); ++j) REQUIRE(f(0, i, j) == doctest::Approx(expected).epsilon(tol));
}

}  // namespace

TEST_CASE("solid body rotation: vorticity 2, Okubo-Weiss -4") {
  auto grid = synthetic::cartesianGrid(21);
  auto vel = synthetic::solidBody<float>(grid);
  checkInterior(derivedField(vel, DerivedFieldKind::vorticity(), Metric::cartesian), 2.0);
  checkInterior(derivedField(vel, DerivedFieldKind::okuboWeiss(), Metric::cartesian), -4.0);
  checkInterior(derivedField(vel, DerivedFieldKind::curlMagnitude(), Metric::cartesian), 2.0);
}

TEST_CASE("pure strain: vorticity 0, Okubo-Weiss 4") {
  auto grid = synthetic::cartesianGrid(21);
  auto vel = synthetic::strainFlow<double>(grid);
  for (Index i = 1; i < 20; ++i) {
    for (Index j = 1; j < 20; ++j) {
      const FlowGradient g = flowGradient(vel, 0, i, j, Metric::cartesian);
      CHECK(g.normalStrain() == doctest::Approx(2.0));
      CHECK(g.shearStrain() == doctest::Approx(0.0));
      CHECK(g.vorticity() == doctest::Approx(0.0));
      CHECK(g.okuboWeiss() == doctest::Approx(4.0));
    }
  }
}

TEST_CASE("random smooth field matches the independent stencil") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double a[8];
  for (double& c : a) c = coef(rng);
  auto field = [&](double x, double y, double) {
    return Eigen::Vector2d(a[0] * std::sin(a[1] * x + y) + a[2] * x * y, a[3] * std::cos(x - a[4] * y) + a[5] * x * x + a[6] * y + a[7]);
  };
  for (Metric metric : {Metric::cartesian, Metric::spherical}) {
    auto grid = metric == Metric::cartesian
                    ? synthetic::cartesianGrid(17, 2.0, 2)
                    : makeSpatialGrid({1.0, 2.0}, linspaceStep(10.0, 0.25, 17), linspaceStep(80.0, 0.25, 17));
    auto vel = synthetic::velocityFromFunction<double>(grid, field);
    auto w = derivedField(vel, DerivedFieldKind::vorticity(), metric);
    auto ow = derivedField(vel, DerivedFieldKind::okuboWeiss(), metric);
    for (Index d = 0; d < 2; ++d) {
      for (Index i = 0; i < 17; ++i) {
        for (Index j = 0; j < 17; ++j) {
          const auto ref = oracle::finiteDifference(vel, d, i, j, metric);
          const double scaleW = std::max(1.0, std::abs(ref.vorticity));
          const double scaleOW = std::max(1.0, std::abs(ref.okuboWeiss));
          REQUIRE(std::abs(w(d, i, j) - ref.vorticity) <= 1e-12 * scaleW);
          REQUIRE(std::abs(ow(d, i, j) - ref.okuboWeiss) <= 1e-12 * scaleOW);
        }
      }
    }
  }
}

TEST_CASE("land propagates to derived fields") {
  auto grid = synthetic::cartesianGrid(5);
  auto vel = synthetic::solidBody<float>(grid);
  vel.u(0, 2, 2) = vel.v(0, 2, 2) = std::numeric_limits<float>::quiet_NaN();
  auto w = derivedField(vel, DerivedFieldKind::vorticity(), Metric::cartesian);
  CHECK(std::isnan(w(0, 2, 2)));
  CHECK(std::isnan(w(0, 2, 1)));  // stencil reaches land
  CHECK(std::isfinite(w(0, 0, 0)));
}

TEST_CASE("missing component and user scalars are rejected") {
  auto grid = synthetic::cartesianGrid(5);
  VectorVolume<float> vel{ScalarVolume(grid), ScalarVolume(), std::nullopt};
  CHECK(testing::raises([&] { derivedField(vel, DerivedFieldKind::vorticity()); }, ErrorCode::invalidInput));
  auto full = synthetic::uniformFlow<float>(grid);
  CHECK(testing::raises([&] { derivedField(full, DerivedFieldKind::userScalar("salinity")); }, ErrorCode::invalidInput));
}

TEST_CASE("derived kind parsing") {
  CHECK(DerivedFieldKind::parse("okubo-weiss") == DerivedFieldKind::okuboWeiss());
  CHECK(DerivedFieldKind::parse("user:salinity") == DerivedFieldKind::userScalar("salinity"));
  CHECK(DerivedFieldKind::parse("curl") == DerivedFieldKind::curlMagnitude());
  CHECK(testing::errorOf([] { DerivedFieldKind::parse("divergence"); }).has_value());
  CHECK(speedField(synthetic::uniformFlow<float>(synthetic::cartesianGrid(3), 3.0, 4.0)).values().isApproxToConstant(5.0f));
}
