#pragma once

#include "haekit/error.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace haekit {

/// Row-major storage to match on-disk row order (north to south scan lines).
using RowArrayXXd =
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MaskArray =
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Regular geographic grid: values sit at cell centers, row 0 at lat0 and
/// column 0 at lon0, stepping by dlat / dlon per row / column. dlat is
/// typically negative (north-up rasters).
struct GridGeometry {
  double lat0 = 0.0;
  double lon0 = 0.0;
  double dlat = 0.0;
  double dlon = 0.0;
  Eigen::Index nrows = 0;
  Eigen::Index ncols = 0;

  double lat_at(Eigen::Index row) const { return lat0 + dlat * static_cast<double>(row); }
  double lon_at(Eigen::Index col) const { return lon0 + dlon * static_cast<double>(col); }

  /// True when the columns tile the full circle, so interpolation may wrap
  /// across the antimeridian seam.
  bool wraps_longitude() const;
};

/// Throws unless rows/cols are positive, steps are finite and nonzero, and
/// the origin is finite with lat0 in [-90, 90]. Callers validating freshly
/// parsed headers pass MalformedHeader; programmatic grids keep the default.
void validate_geometry(const GridGeometry& geom,
                       ErrorCode code = ErrorCode::InvalidArgument);

/// Neighborhood for bilinear interpolation: two rows, two columns and the
/// fractional weights toward r1 / c1. Exact cell-center hits collapse to a
/// single row or column (r0 == r1, weight 0).
struct BilinearCell {
  Eigen::Index r0 = 0;
  Eigen::Index r1 = 0;
  Eigen::Index c0 = 0;
  Eigen::Index c1 = 0;
  double wr = 0.0;  // weight of r1
  double wc = 0.0;  // weight of c1
};

/// Locates the interpolation neighborhood for (lat, lon).
///
/// Longitude is normalized by full turns before lookup; if the grid spans the
/// full circle the last column interpolates against column 0. Latitude within
/// half a cell beyond the edge rows clamps onto the edge; beyond that, and for
/// longitudes outside a non-wrapping grid, throws Error(OutOfExtent).
/// Fractional indices within 1e-9 of an integer snap to it so cell centers
/// reproduce stored values exactly.
BilinearCell locate_bilinear(const GridGeometry& geom, double lat, double lon);

inline double bilinear_value(const RowArrayXXd& values, const BilinearCell& c) {
  const double top = values(c.r0, c.c0) * (1.0 - c.wc) + values(c.r0, c.c1) * c.wc;
  const double bot = values(c.r1, c.c0) * (1.0 - c.wc) + values(c.r1, c.c1) * c.wc;
  return top * (1.0 - c.wr) + bot * c.wr;
}

}  // namespace haekit
