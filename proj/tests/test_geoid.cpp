#include "haekit/error.hpp"
#include "haekit/geoid.hpp"
#include "haekit/rng.hpp"

#include "support/oracles.hpp"
#include "support/proc.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace haekit;

namespace {

GeoidGrid random_grid(Xorshift64Star& rng, bool float_exact) {
  GeoidGrid grid;
  grid.name = "g" + std::to_string(rng.next_below(1000));
  grid.geom.nrows = 2 + static_cast<Eigen::Index>(rng.next_below(6));
  grid.geom.ncols = 2 + static_cast<Eigen::Index>(rng.next_below(6));
  grid.geom.dlat = (rng.next_below(2) ? -1.0 : 1.0) * rng.uniform(0.05, 1.0);
  grid.geom.dlon = rng.uniform(0.05, 1.0);
  grid.geom.lat0 = rng.uniform(-80.0, 80.0);
  grid.geom.lon0 = rng.uniform(-180.0, 180.0);
  grid.values.resize(grid.geom.nrows, grid.geom.ncols);
  for (Eigen::Index r = 0; r < grid.geom.nrows; ++r)
    for (Eigen::Index c = 0; c < grid.geom.ncols; ++c) {
      double v = rng.uniform(-140.0, 140.0);
      if (float_exact) v = static_cast<double>(static_cast<float>(v));
      grid.values(r, c) = v;
    }
  return grid;
}

bool grids_equal(const GeoidGrid& a, const GeoidGrid& b, bool compare_name) {
  if (compare_name && a.name != b.name) return false;
  return a.geom.lat0 == b.geom.lat0 && a.geom.lon0 == b.geom.lon0 &&
         a.geom.dlat == b.geom.dlat && a.geom.dlon == b.geom.dlon &&
         a.geom.nrows == b.geom.nrows && a.geom.ncols == b.geom.ncols &&
         (a.values == b.values).all();
}

}  // namespace

TEST_CASE("geoid: text grids survive write then load bit-exact") {
  Xorshift64Star rng(401);
  for (int trial = 0; trial < 1000; ++trial) {
    const GeoidGrid grid = random_grid(rng, false);
    std::stringstream buf;
    write_geoid_grid(buf, grid, GeoidFormat::Text);
    const GeoidGrid back = load_geoid_grid(buf, GeoidFormat::Text);
    CHECK(grids_equal(grid, back, true));
  }
}

TEST_CASE("geoid: binary grids with float payloads survive bit-exact, namelessly") {
  Xorshift64Star rng(402);
  for (int trial = 0; trial < 1000; ++trial) {
    const GeoidGrid grid = random_grid(rng, true);
    std::stringstream buf;
    write_geoid_grid(buf, grid, GeoidFormat::Binary);
    const GeoidGrid back = load_geoid_grid(buf, GeoidFormat::Binary);
    CHECK(grids_equal(grid, back, false));
    CHECK(back.name.empty());  // binary layout carries no name
  }
}

TEST_CASE("geoid: grid names may contain spaces") {
  Xorshift64Star rng(403);
  GeoidGrid grid = random_grid(rng, false);
  grid.name = "regional model 2020";
  std::stringstream buf;
  write_geoid_grid(buf, grid, GeoidFormat::Text);
  CHECK(load_geoid_grid(buf, GeoidFormat::Text).name == "regional model 2020");
}

TEST_CASE("geoid: undulation interpolates like the reference formula") {
  Xorshift64Star rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    const GeoidGrid grid = random_grid(rng, false);
    const double fr = rng.uniform(0.05, static_cast<double>(grid.geom.nrows) - 1.05);
    const double fc = rng.uniform(0.05, static_cast<double>(grid.geom.ncols) - 1.05);
    const double lat = grid.geom.lat0 + fr * grid.geom.dlat;
    if (lat < -90.0 || lat > 90.0) continue;
    const double lon = grid.geom.lon0 + fc * grid.geom.dlon;
    const double want = oracles::bilinear(grid.values, grid.geom, lat, lon);
    CHECK(undulation(grid, lat, lon) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("geoid: malformed text inputs raise specific codes") {
  const auto code_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      load_geoid_grid(in, GeoidFormat::Text);
      return ErrorCode::IoError;  // sentinel for "did not throw"
    } catch (const Error& e) {
      return e.code();
    }
  };

  CHECK(code_of("") == ErrorCode::MalformedHeader);
  CHECK(code_of("GGU1 x\n0 0 1 1 2 2\n1 2 3 4\n") == ErrorCode::MalformedHeader);
  CHECK(code_of("UGG1 x\n0 0 1 1 2\n1 2 3 4\n") == ErrorCode::MalformedHeader);
  CHECK(code_of("UGG1 x\n0 0 1 1 1 2\n1 2\n") == ErrorCode::MalformedHeader);  // 1 row
  CHECK(code_of("UGG1 x\n0 0 1 0 2 2\n1 2 3 4\n") == ErrorCode::MalformedHeader);  // dlon<=0
  CHECK(code_of("UGG1 x\n0 0 1 1 2 2\n1 2 3\n") == ErrorCode::ValueCountMismatch);
  CHECK(code_of("UGG1 x\n0 0 1 1 2 2\n1 2 3 4 5\n") == ErrorCode::ValueCountMismatch);
  CHECK(code_of("UGG1 x\n0 0 1 1 2 2\n1 2 nan 4\n") == ErrorCode::NonFiniteValue);
  CHECK(code_of("UGG1 x\n0 0 1 1 2 2\n1 2 junk 4\n") == ErrorCode::NonFiniteValue);
  CHECK(code_of("UGG1 x\n0 0 1 1 2 2\n1 2 155 4\n") == ErrorCode::ValueOutOfRange);
  CHECK(code_of("UGG1 x\n0 0 1 181 2 2\n1 2 3 4\n") == ErrorCode::MalformedHeader);  // span
}

TEST_CASE("geoid: truncated binary inputs raise specific codes") {
  Xorshift64Star rng(405);
  const GeoidGrid grid = random_grid(rng, true);
  std::stringstream buf;
  write_geoid_grid(buf, grid, GeoidFormat::Binary);
  const std::string full = buf.str();

  const auto code_at = [&](std::size_t len) {
    std::istringstream in(full.substr(0, len));
    try {
      load_geoid_grid(in, GeoidFormat::Binary);
      return ErrorCode::IoError;
    } catch (const Error& e) {
      return e.code();
    }
  };

  CHECK(code_at(2) == ErrorCode::MalformedHeader);
  CHECK(code_at(20) == ErrorCode::MalformedHeader);          // inside geometry
  CHECK(code_at(full.size() - 2) == ErrorCode::ValueCountMismatch);

  std::istringstream bad_magic("XXXX" + full.substr(4));
  CHECK_THROWS_AS(load_geoid_grid(bad_magic, GeoidFormat::Binary), Error);
}

TEST_CASE("geoid: file loader sniffs the format from the magic bytes") {
  Xorshift64Star rng(406);
  proc::TempDir dir;

  const GeoidGrid text_grid = random_grid(rng, false);
  {
    std::ofstream out(dir.file("g.ugg"));
    write_geoid_grid(out, text_grid, GeoidFormat::Text);
  }
  CHECK(grids_equal(load_geoid_file(dir.file("g.ugg")), text_grid, true));

  const GeoidGrid bin_grid = random_grid(rng, true);
  {
    std::ofstream out(dir.file("g.uggb"), std::ios::binary);
    write_geoid_grid(out, bin_grid, GeoidFormat::Binary);
  }
  CHECK(grids_equal(load_geoid_file(dir.file("g.uggb")), bin_grid, false));

  CHECK_THROWS_AS(load_geoid_file(dir.file("absent.ugg")), Error);
  try {
    load_geoid_file(dir.file("absent.ugg"));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}
