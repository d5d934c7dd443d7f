#pragma once

#include "haekit/grid.hpp"

#include <iosfwd>
#include <string>

namespace haekit {

/// Geoid-undulation grid: N = geoid minus ellipsoid, meters, at cell centers.
struct GeoidGrid {
  std::string name;  // datum label, e.g. "EGM96"; empty for binary sources
  GridGeometry geom;
  RowArrayXXd values;
};

enum class GeoidFormat { Text, Binary };

/// Text layout: `UGG1 <name>` on line 1; `lat0 lon0 dlat dlon nrows ncols`
/// on line 2; then nrows lines of ncols undulations. Binary layout: magic
/// `UGGB`, four little-endian f64 (lat0, lon0, dlat, dlon), two u32
/// (nrows, ncols), then nrows*ncols f32 values row-major; it carries no name.
GeoidGrid load_geoid_grid(std::istream& in, GeoidFormat format);
void write_geoid_grid(std::ostream& out, const GeoidGrid& grid, GeoidFormat format);

/// Opens a file and picks the format from the leading magic bytes.
GeoidGrid load_geoid_file(const std::string& path);

/// Bilinear undulation at (lat, lon). Exact at cell centers; latitude clamps
/// within half a cell of the edge rows; longitude wraps on full-circle grids.
double undulation(const GeoidGrid& grid, double lat, double lon);

}  // namespace haekit
