#include "haekit/error.hpp"
#include "haekit/grid.hpp"
#include "haekit/rng.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace haekit;

namespace {

RowArrayXXd random_values(Xorshift64Star& rng, Eigen::Index nrows, Eigen::Index ncols) {
  RowArrayXXd values(nrows, ncols);
  for (Eigen::Index r = 0; r < nrows; ++r)
    for (Eigen::Index c = 0; c < ncols; ++c) values(r, c) = rng.uniform(-120.0, 120.0);
  return values;
}

GridGeometry random_geometry(Xorshift64Star& rng) {
  GridGeometry geom;
  geom.nrows = 2 + static_cast<Eigen::Index>(rng.next_below(7));
  geom.ncols = 2 + static_cast<Eigen::Index>(rng.next_below(7));
  geom.dlat = (rng.next_below(2) ? -1.0 : 1.0) * rng.uniform(0.01, 0.5);
  geom.dlon = rng.uniform(0.01, 0.5);
  geom.lat0 = rng.uniform(-60.0, 60.0);
  geom.lon0 = rng.uniform(-180.0, 180.0);
  return geom;
}

}  // namespace

TEST_CASE("grid: cell centers reproduce stored values exactly") {
  Xorshift64Star rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const GridGeometry geom = random_geometry(rng);
    const RowArrayXXd values = random_values(rng, geom.nrows, geom.ncols);
    const Eigen::Index r = static_cast<Eigen::Index>(rng.next_below(geom.nrows));
    const Eigen::Index c = static_cast<Eigen::Index>(rng.next_below(geom.ncols));
    const BilinearCell cell = locate_bilinear(geom, geom.lat_at(r), geom.lon_at(c));
    CHECK(bilinear_value(values, cell) == values(r, c));
  }
}

TEST_CASE("grid: interior points match direct four-corner interpolation") {
  Xorshift64Star rng(102);
  for (int trial = 0; trial < 1000; ++trial) {
    const GridGeometry geom = random_geometry(rng);
    const RowArrayXXd values = random_values(rng, geom.nrows, geom.ncols);
    const double fr = rng.uniform(0.05, static_cast<double>(geom.nrows) - 1.05);
    const double fc = rng.uniform(0.05, static_cast<double>(geom.ncols) - 1.05);
    const double lat = geom.lat0 + fr * geom.dlat;
    const double lon = geom.lon0 + fc * geom.dlon;
    const double got = bilinear_value(values, locate_bilinear(geom, lat, lon));
    const double want = oracles::bilinear(values, geom, lat, lon);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("grid: interpolated value stays inside its corner hull") {
  Xorshift64Star rng(103);
  for (int trial = 0; trial < 1000; ++trial) {
    const GridGeometry geom = random_geometry(rng);
    const RowArrayXXd values = random_values(rng, geom.nrows, geom.ncols);
    const double fr = rng.uniform(0.0, static_cast<double>(geom.nrows) - 1.0);
    const double fc = rng.uniform(0.0, static_cast<double>(geom.ncols) - 1.0);
    const BilinearCell cell =
        locate_bilinear(geom, geom.lat0 + fr * geom.dlat, geom.lon0 + fc * geom.dlon);
    const double got = bilinear_value(values, cell);
    const double lo = std::min({values(cell.r0, cell.c0), values(cell.r0, cell.c1),
                                values(cell.r1, cell.c0), values(cell.r1, cell.c1)});
    const double hi = std::max({values(cell.r0, cell.c0), values(cell.r0, cell.c1),
                                values(cell.r1, cell.c0), values(cell.r1, cell.c1)});
    CHECK(got >= lo - 1e-12);
    CHECK(got <= hi + 1e-12);
  }
}

TEST_CASE("grid: latitude clamps within half a cell then rejects") {
  GridGeometry geom{10.0, 20.0, -0.5, 0.5, 4, 4};
  RowArrayXXd values(4, 4);
  values.setConstant(7.0);
  for (Eigen::Index c = 0; c < 4; ++c) values(0, c) = 1.0;

  CHECK(bilinear_value(values, locate_bilinear(geom, 10.2, 20.5)) == 1.0);
  CHECK_THROWS_AS(locate_bilinear(geom, 10.3, 20.5), Error);
  CHECK(bilinear_value(values, locate_bilinear(geom, 8.7, 20.5)) == 7.0);
  CHECK_THROWS_AS(locate_bilinear(geom, 8.2, 20.5), Error);
  try {
    locate_bilinear(geom, 40.0, 20.5);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfExtent);
  }
}

TEST_CASE("grid: longitude out of a non-wrapping grid rejects") {
  GridGeometry geom{10.0, 20.0, -0.5, 0.5, 4, 4};
  CHECK_THROWS_AS(locate_bilinear(geom, 9.5, 22.0), Error);
  CHECK_THROWS_AS(locate_bilinear(geom, 9.5, 19.7), Error);
}

TEST_CASE("grid: full-circle grids wrap across the seam") {
  GridGeometry geom{45.0, 0.0, -1.0, 1.0, 3, 360};
  CHECK(geom.wraps_longitude());
  Xorshift64Star rng(104);
  RowArrayXXd values = random_values(rng, 3, 360);

  // Between the last column center (359) and the first (360 == 0).
  const BilinearCell cell = locate_bilinear(geom, 44.0, 359.25);
  CHECK(cell.c0 == 359);
  CHECK(cell.c1 == 0);
  const double want = values(1, 359) * 0.75 + values(1, 0) * 0.25;
  CHECK(bilinear_value(values, cell) == doctest::Approx(want).epsilon(1e-12));

  // Full turns normalize away.
  for (int trial = 0; trial < 1000; ++trial) {
    const double lon = rng.uniform(0.0, 360.0);
    const double turns = static_cast<double>(rng.next_below(5)) - 2.0;
    const double a = bilinear_value(values, locate_bilinear(geom, 44.0, lon));
    const double b = bilinear_value(values, locate_bilinear(geom, 44.0, lon + 360.0 * turns));
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("grid: geometry validation rejects degenerate descriptions") {
  GridGeometry ok{10.0, 20.0, -0.5, 0.5, 4, 4};
  CHECK_NOTHROW(validate_geometry(ok));

  GridGeometry bad = ok;
  bad.nrows = 0;
  CHECK_THROWS_AS(validate_geometry(bad), Error);
  bad = ok;
  bad.dlat = 0.0;
  CHECK_THROWS_AS(validate_geometry(bad), Error);
  bad = ok;
  bad.dlon = std::nan("");
  CHECK_THROWS_AS(validate_geometry(bad), Error);
  bad = ok;
  bad.lat0 = 95.0;
  CHECK_THROWS_AS(validate_geometry(bad), Error);
}
