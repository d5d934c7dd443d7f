#pragma once

#include "haekit/grid.hpp"
#include "haekit/heights.hpp"

#include <iosfwd>
#include <string>

namespace haekit {

/// Elevation raster with declared surface kind (bare earth vs surface model)
/// and vertical reference (MSL over a named datum, or HAE). Nodata cells keep
/// the sentinel value and are excluded from sampling and statistics.
struct TerrainRaster {
  SurfaceKind surface_kind = SurfaceKind::DTM;
  HeightReference vertical_ref = HeightReference::msl("MSL");
  GridGeometry geom;
  double nodata = -9999.0;
  RowArrayXXd values;

  bool is_nodata(Eigen::Index row, Eigen::Index col) const {
    return values(row, col) == nodata;
  }
};

/// ESRI ASCII grid reader. The format carries no vertical metadata, so
/// surface kind and vertical reference come from the caller. Corner-registered
/// headers (xllcorner/yllcorner) shift by half a cell onto centers; the raster
/// is stored north-up (row 0 is the top line, dlat = -cellsize).
TerrainRaster load_esri_ascii(std::istream& in, SurfaceKind surface,
                              HeightReference vertical_ref);

/// Writes the ESRI ASCII layout (square north-up cells only).
void write_esri_ascii(std::ostream& out, const TerrainRaster& raster);

/// Extended UGG binary: the geoid layout with surface kind (u8), vertical
/// reference class (u8: 0 MSL, 1 HAE), a 16-byte zero-padded datum label and
/// an f32 nodata sentinel inserted after ncols; values are f32 row-major.
TerrainRaster load_terrain_ugg(std::istream& in);
void write_terrain_ugg(std::ostream& out, const TerrainRaster& raster);

/// Opens a file, sniffing extended-UGG by magic, ESRI ASCII otherwise.
/// ESRI sources take the caller-declared metadata; UGG sources ignore it.
TerrainRaster load_terrain_file(const std::string& path, SurfaceKind surface,
                                HeightReference vertical_ref);

/// Bilinear ground elevation at (lat, lon), exact at cell centers. Any nodata
/// cell among the interpolation neighbors raises NodataNeighborhood.
double sample_elevation(const TerrainRaster& raster, double lat, double lon);

/// Per-pixel h = H + N with N sampled at each pixel center: converts an
/// MSL raster to HAE. Geometry and nodata cells are preserved; a pixel center
/// the geoid cannot cover raises GeoidCoverageGap.
TerrainRaster raster_to_hae(const TerrainRaster& raster, const GeoidGrid& geoid);

}  // namespace haekit
