#include "haekit/grid.hpp"

#include "haekit/error.hpp"

#include <cmath>
#include <string>

namespace haekit {

namespace {

constexpr double kIndexSnap = 1e-9;

/// Splits a fractional index into (floor cell, weight), snapping to the
/// nearest integer when within kIndexSnap so stored samples round-trip.
void split_index(double x, Eigen::Index n, Eigen::Index& i0, Eigen::Index& i1,
                 double& w) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= kIndexSnap) {
    i0 = static_cast<Eigen::Index>(nearest);
    i1 = i0;
    w = 0.0;
    return;
  }
  i0 = static_cast<Eigen::Index>(std::floor(x));
  i1 = i0 + 1;
  w = x - static_cast<double>(i0);
  (void)n;
}

}  // namespace

bool GridGeometry::wraps_longitude() const {
  return std::abs(std::abs(dlon) * static_cast<double>(ncols) - 360.0) <= 1e-9;
}

void validate_geometry(const GridGeometry& geom, ErrorCode code) {
  if (geom.nrows <= 0 || geom.ncols <= 0)
    throw Error(code, "grid must have positive dimensions");
  if (!std::isfinite(geom.lat0) || !std::isfinite(geom.lon0) ||
      !std::isfinite(geom.dlat) || !std::isfinite(geom.dlon))
    throw Error(code, "grid origin and steps must be finite");
  if (geom.dlat == 0.0 || geom.dlon == 0.0)
    throw Error(code, "grid steps must be nonzero");
  if (geom.lat0 < -90.0 || geom.lat0 > 90.0)
    throw Error(code, "grid origin latitude out of range");
}

BilinearCell locate_bilinear(const GridGeometry& geom, double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon))
    throw Error(ErrorCode::OutOfExtent, "non-finite query coordinates");

  const double fr = (lat - geom.lat0) / geom.dlat;
  const bool wraps = geom.wraps_longitude();

  // Normalize longitude into [lon0, lon0 + 360) by whole turns, then convert
  // to a fractional column. Non-wrapping grids still benefit: queries at
  // lon - 360 resolve onto the grid when the shifted value lands inside.
  double span_col = (lon - geom.lon0) / geom.dlon;
  const double cols_per_turn = 360.0 / std::abs(geom.dlon);
  span_col = std::fmod(span_col, cols_per_turn);
  if (span_col < 0.0) span_col += cols_per_turn;
  double fc = span_col;

  BilinearCell cell;
  double fr_eff = fr;
  const double last_row = static_cast<double>(geom.nrows - 1);
  // Latitude clamp: up to half a cell beyond the edge rows counts as the edge.
  if (fr_eff < 0.0) {
    if (fr_eff < -0.5 - kIndexSnap)
      throw Error(ErrorCode::OutOfExtent, "latitude outside grid extent");
    fr_eff = 0.0;
  } else if (fr_eff > last_row) {
    if (fr_eff > last_row + 0.5 + kIndexSnap)
      throw Error(ErrorCode::OutOfExtent, "latitude outside grid extent");
    fr_eff = last_row;
  }
  split_index(fr_eff, geom.nrows, cell.r0, cell.r1, cell.wr);
  if (cell.r1 >= geom.nrows) {
    cell.r1 = geom.nrows - 1;
  }

  const double last_col = static_cast<double>(geom.ncols - 1);
  if (wraps) {
    // The seam interval [ncols-1, ncols) interpolates last column against
    // column zero; fc == cols_per_turn cannot occur after fmod.
    if (fc > last_col + kIndexSnap && fc < static_cast<double>(geom.ncols)) {
      cell.c0 = geom.ncols - 1;
      cell.c1 = 0;
      cell.wc = fc - last_col;
      return cell;
    }
    if (fc >= static_cast<double>(geom.ncols))
      throw Error(ErrorCode::OutOfExtent, "longitude outside grid extent");
    split_index(fc, geom.ncols, cell.c0, cell.c1, cell.wc);
    if (cell.c1 >= geom.ncols) cell.c1 = 0;
    return cell;
  }

  if (fc > last_col + kIndexSnap)
    throw Error(ErrorCode::OutOfExtent, "longitude outside grid extent");
  if (fc > last_col) fc = last_col;
  split_index(fc, geom.ncols, cell.c0, cell.c1, cell.wc);
  if (cell.c1 >= geom.ncols) cell.c1 = geom.ncols - 1;
  return cell;
}

}  // namespace haekit
