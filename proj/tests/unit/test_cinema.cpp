#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "oceanscope/cinema.hpp"
#include "oceanscope/raw_format.hpp"
#include "oceanscope/synthetic.hpp"
#include "oceanscope/worker_pool.hpp"

using namespace oceanscope;

namespace {

Dataset smallFixture(Index depths = 3, Index steps = 2) {
  synthetic::FixtureSpec spec;
  spec.depths = depths;
  spec.lats = 12;
  spec.lons = 10;
  spec.steps = steps;
  return synthetic::translatingBlobFixture(spec);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("pi survives the round trip bit exactly") {
  FloatImage img = FloatImage::Constant(7, 5, 3.14159265358979f);
  const FloatImage back = decodeFloatImage(encodeFloatImage(img));
  REQUIRE(back.rows() == 7);
  REQUIRE(back.cols() == 5);
  CHECK((back == 3.1415927f).all());
}

TEST_CASE("NaN and arbitrary bit patterns survive") {
  FloatImage img(16, 16);
  std::mt19937 rng(1);
  for (Index k = 0; k < img.size(); ++k) {
    std::uint32_t bits = rng();
    std::memcpy(img.data() + k, &bits, 4);
  }
  img(0, 0) = std::numeric_limits<float>::quiet_NaN();
  const FloatImage back = decodeFloatImage(encodeFloatImage(img));
  CHECK(std::isnan(back(0, 0)));
  CHECK(std::memcmp(back.data(), img.data(), sizeof(float) * static_cast<std::size_t>(img.size())) == 0);
  CHECK(testing::raises([] { decodeFloatImage({1, 2, 3}); }, ErrorCode::format));
}

TEST_CASE("file naming") {
  CHECK(cinemaFileName(3, 12, "salinity", SliceOrientation::depth) == "time3_depth12_salinity.png");
  CHECK(cinemaFileName(0, 4, "speed", SliceOrientation::vertical) == "time0_lat4_speed.png");
}

TEST_CASE("database layout, index and images") {
  testing::TempDir dir("cinema");
  const Dataset ds = smallFixture();
  WorkerPool pool(2);
  const auto index = generateDatabase(ds, {"salinity", "temperature", "speed"}, ds.allSteps(), dir.path(), pool);
  CHECK(index.rows.size() == 2 * 3 * 3);
  std::size_t pngs = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) pngs += e.path().extension() == ".png";
  CHECK(pngs == 18);
  const std::string csv = slurp(dir / "data.csv");
  CHECK(csv.rfind("time,depth,field,FILE\n", 0) == 0);
  CHECK(slurp(dir / "metadata.json").find("\"fields\"") != std::string::npos);

  const auto back = readCinemaIndex(dir.path());
  REQUIRE(back.rows.size() == index.rows.size());
  CHECK(back.rows[4].file == index.rows[4].file);

  const FloatImage img = readFloatImage(dir / cinemaFileName(1, 2, "salinity", SliceOrientation::depth));
  const ScalarVolume sal = ds.loadTimeStep(1, "salinity");
  REQUIRE(img.rows() == 12);
  for (Index i = 0; i < 12; ++i) {
    for (Index j = 0; j < 10; ++j) {
      const float a = img(11 - i, j), b = sal(2, i, j);
      CHECK(((std::isnan(a) && std::isnan(b)) || a == b));
    }
  }
}

TEST_CASE("empty range gives an index with no rows") {
  testing::TempDir dir("cinema_empty");
  const Dataset ds = smallFixture();
  WorkerPool pool(1);
  const auto index = generateDatabase(ds, {"salinity"}, TimeRange{1, 1}, dir.path(), pool);
  CHECK(index.rows.empty());
  CHECK(readCinemaIndex(dir.path()).rows.empty());
  CHECK(testing::raises([&] { generateDatabase(ds, {}, ds.allSteps(), dir.path(), pool); }, ErrorCode::invalidParameter));
  CHECK(testing::raises([&] { generateDatabase(ds, {"salinity"}, TimeRange{0, 9}, dir.path(), pool); }, ErrorCode::bounds));
}

TEST_CASE("regeneration is byte identical across worker counts") {
  testing::TempDir a("cinema_a"), b("cinema_b");
  const Dataset ds = smallFixture();
  WorkerPool one(1), four(4);
  generateDatabase(ds, {"salinity", "vorticity"}, ds.allSteps(), a.path(), one);
  generateDatabase(ds, {"salinity", "vorticity"}, ds.allSteps(), b.path(), four);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(a.path())) {
    CHECK(slurp(e.path()) == slurp(b.path() / e.path().filename()));
    ++files;
  }
  CHECK(files == 2 * 3 * 2 + 2);
}

TEST_CASE("vertical slices keep the surface on top") {
  testing::TempDir dir("cinema_vertical");
  const Dataset ds = smallFixture(4, 1);
  WorkerPool pool(1);
  CinemaOptions options;
  options.orientation = SliceOrientation::vertical;
  const auto index = generateDatabase(ds, {"temperature"}, ds.allSteps(), dir.path(), pool, options);
  CHECK(index.rows.size() == 12);
  const FloatImage img = readFloatImage(dir / cinemaFileName(0, 5, "temperature", SliceOrientation::vertical));
  REQUIRE(img.rows() == 4);
  const ScalarVolume t = ds.loadTimeStep(0, "temperature");
  for (Index d = 0; d < 4; ++d)
    for (Index j = 0; j < 10; ++j) CHECK(img(d, j) == t(d, 5, j));
  CHECK(slurp(dir / "data.csv").rfind("time,lat,field,FILE\n", 0) == 0);
}

TEST_CASE("compression ratio drops with unlisted variables") {
  testing::TempDir src("cinema_src"), db("cinema_db");
  const Dataset fixture = smallFixture(50, 1);
  writeRaw(fixture, src.path());
  const Dataset ds = ingestRaw(src.path());
  WorkerPool pool(1);
  const auto index = generateDatabase(ds, {"salinity"}, ds.allSteps(), db.path(), pool);
  const auto report = compressionReport(ds, index);
  CHECK(report.sourceBytes == ds.sourceBytes());
  CHECK(report.databaseBytes > 0);
  CHECK(report.ratio < 1.0);
  CHECK(report.ratio == doctest::Approx(static_cast<double>(report.databaseBytes) / report.sourceBytes));
  CHECK(compressionToJson(report).find("ratio") != std::string::npos);

  testing::TempDir flatSrc("cinema_flat"), flatDb("cinema_flatdb");
  writeRaw(smallFixture(1, 1).subset({"salinity"}, {}), flatSrc.path());
  const Dataset flat = ingestRaw(flatSrc.path());
  const auto flatReport = compressionReport(flat, generateDatabase(flat, {"salinity"}, flat.allSteps(), flatDb.path(), pool));
  CHECK(flatReport.ratio > 0.0);
}
