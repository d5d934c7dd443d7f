#include "haekit/terrain.hpp"

#include "haekit/error.hpp"
#include "haekit/geoid.hpp"
#include "io_util.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace haekit {

namespace {

constexpr std::size_t kDatumLabelBytes = 16;

bool surface_range_ok(double v, bool hae_referenced) {
  // Earth-surface sanity band, widened by the 150 m undulation bound once
  // converted off the MSL datum.
  return hae_referenced ? (v >= -650.0 && v <= 9150.0) : (v >= -500.0 && v <= 9000.0);
}

void validate_raster(const TerrainRaster& raster,
                     ErrorCode geometry_code = ErrorCode::InvalidArgument) {
  validate_geometry(raster.geom, geometry_code);
  if (raster.geom.nrows < 2 || raster.geom.ncols < 2)
    throw Error(ErrorCode::MalformedHeader, "raster needs at least 2x2 cells");
  if (raster.geom.dlon <= 0.0)
    throw Error(ErrorCode::MalformedHeader, "raster column step must be eastward");
  if (raster.geom.dlon * static_cast<double>(raster.geom.ncols) > 360.0 + 1e-9)
    throw Error(ErrorCode::MalformedHeader, "raster spans more than 360 degrees");
  const auto kind = raster.vertical_ref.kind();
  if (kind != HeightReference::Kind::Msl && kind != HeightReference::Kind::Hae)
    throw Error(ErrorCode::InvalidArgument,
                "terrain vertical reference must be MSL or HAE");
  if (!std::isfinite(raster.nodata))
    throw Error(ErrorCode::MalformedHeader, "nodata sentinel must be finite");
  const bool hae = kind == HeightReference::Kind::Hae;
  for (Eigen::Index r = 0; r < raster.geom.nrows; ++r)
    for (Eigen::Index c = 0; c < raster.geom.ncols; ++c) {
      const double v = raster.values(r, c);
      if (v == raster.nodata) continue;
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFiniteValue, "raster contains a non-finite value");
      if (!surface_range_ok(v, hae))
        throw Error(ErrorCode::ValueOutOfRange,
                    "elevation outside the Earth-surface sanity band");
    }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

TerrainRaster load_esri_ascii(std::istream& in, SurfaceKind surface,
                              HeightReference vertical_ref) {
  TerrainRaster raster;
  raster.surface_kind = surface;
  raster.vertical_ref = std::move(vertical_ref);

  double xll = 0.0, yll = 0.0, cellsize = 0.0, nodata = -9999.0;
  bool x_is_center = false, y_is_center = false;
  bool have_ncols = false, have_nrows = false, have_x = false, have_y = false,
       have_cell = false;
  std::uint64_t nrows = 0, ncols = 0;

  // Header: "key value" lines until the first line starting with a number.
  std::string line;
  std::streampos data_start = in.tellg();
  while (std::getline(in, line)) {
    const auto tok = io::split_ws(line);
    if (tok.empty()) {
      data_start = in.tellg();
      continue;
    }
    const char c0 = tok[0].front();
    if (c0 == '-' || c0 == '+' || c0 == '.' || (c0 >= '0' && c0 <= '9')) break;
    if (tok.size() != 2)
      throw Error(ErrorCode::MalformedHeader, "bad ESRI header line '" + line + "'");
    const std::string key = lower(tok[0]);
    double num = 0.0;
    std::uint64_t count = 0;
    if (key == "ncols" || key == "nrows") {
      if (!io::parse_u64(tok[1], count))
        throw Error(ErrorCode::MalformedHeader, "bad ESRI count for " + key);
      (key == "ncols" ? ncols : nrows) = count;
      (key == "ncols" ? have_ncols : have_nrows) = true;
    } else if (key == "xllcorner" || key == "xllcenter" || key == "yllcorner" ||
               key == "yllcenter" || key == "cellsize" || key == "nodata_value") {
      if (!io::parse_double(tok[1], num))
        throw Error(ErrorCode::MalformedHeader, "bad ESRI value for " + key);
      if (key == "xllcorner" || key == "xllcenter") {
        xll = num;
        x_is_center = key == "xllcenter";
        have_x = true;
      } else if (key == "yllcorner" || key == "yllcenter") {
        yll = num;
        y_is_center = key == "yllcenter";
        have_y = true;
      } else if (key == "cellsize") {
        cellsize = num;
        have_cell = true;
      } else {
        nodata = num;
      }
    } else {
      throw Error(ErrorCode::MalformedHeader, "unknown ESRI header key '" + key + "'");
    }
    data_start = in.tellg();
  }
  if (!have_ncols || !have_nrows || !have_x || !have_y || !have_cell)
    throw Error(ErrorCode::MalformedHeader, "incomplete ESRI header");
  if (cellsize <= 0.0 || !std::isfinite(cellsize))
    throw Error(ErrorCode::MalformedHeader, "cellsize must be positive");
  if (nrows < 1 || ncols < 1 || nrows > 100000 || ncols > 100000)
    throw Error(ErrorCode::MalformedHeader, "implausible ESRI dimensions");

  raster.geom.nrows = static_cast<Eigen::Index>(nrows);
  raster.geom.ncols = static_cast<Eigen::Index>(ncols);
  raster.geom.dlat = -cellsize;
  raster.geom.dlon = cellsize;
  raster.geom.lon0 = x_is_center ? xll : xll + cellsize / 2.0;
  const double bottom_center = y_is_center ? yll : yll + cellsize / 2.0;
  raster.geom.lat0 = bottom_center + cellsize * static_cast<double>(nrows - 1);
  raster.nodata = nodata;

  // Re-read from the first data line; the loop above consumed it.
  in.clear();
  in.seekg(data_start);
  raster.values.resize(raster.geom.nrows, raster.geom.ncols);
  Eigen::Index r = 0, c = 0;
  std::string token;
  while (in >> token) {
    if (r >= raster.geom.nrows)
      throw Error(ErrorCode::ValueCountMismatch, "more values than header declares");
    double v;
    if (!io::parse_double(token, v))
      throw Error(ErrorCode::NonFiniteValue, "unparseable cell value '" + token + "'");
    raster.values(r, c) = v;
    if (++c == raster.geom.ncols) {
      c = 0;
      ++r;
    }
  }
  if (r != raster.geom.nrows || c != 0)
    throw Error(ErrorCode::ValueCountMismatch, "fewer values than header declares");
  validate_raster(raster, ErrorCode::MalformedHeader);
  return raster;
}

void write_esri_ascii(std::ostream& out, const TerrainRaster& raster) {
  validate_raster(raster);
  if (raster.geom.dlat >= 0.0 || std::abs(-raster.geom.dlat - raster.geom.dlon) > 1e-12)
    throw Error(ErrorCode::InvalidArgument,
                "ESRI ASCII requires square north-up cells");
  const double cellsize = raster.geom.dlon;
  const double bottom_center =
      raster.geom.lat0 + raster.geom.dlat * static_cast<double>(raster.geom.nrows - 1);
  out << "ncols " << raster.geom.ncols << '\n'
      << "nrows " << raster.geom.nrows << '\n'
      << "xllcorner " << io::format_double(raster.geom.lon0 - cellsize / 2.0) << '\n'
      << "yllcorner " << io::format_double(bottom_center - cellsize / 2.0) << '\n'
      << "cellsize " << io::format_double(cellsize) << '\n'
      << "NODATA_value " << io::format_double(raster.nodata) << '\n';
  for (Eigen::Index r = 0; r < raster.geom.nrows; ++r) {
    for (Eigen::Index c = 0; c < raster.geom.ncols; ++c) {
      if (c) out << ' ';
      out << io::format_double(raster.values(r, c));
    }
    out << '\n';
  }
}

TerrainRaster load_terrain_ugg(std::istream& in) {
  char magic[4];
  if (!io::read_exact(in, magic, 4) || std::string_view(magic, 4) != "UGGB")
    throw Error(ErrorCode::MalformedHeader, "missing UGGB magic");
  TerrainRaster raster;
  std::uint32_t nrows = 0, ncols = 0;
  if (!io::read_f64_le(in, raster.geom.lat0) || !io::read_f64_le(in, raster.geom.lon0) ||
      !io::read_f64_le(in, raster.geom.dlat) || !io::read_f64_le(in, raster.geom.dlon) ||
      !io::read_u32_le(in, nrows) || !io::read_u32_le(in, ncols))
    throw Error(ErrorCode::MalformedHeader, "truncated terrain header");
  if (nrows == 0 || ncols == 0 || nrows > 100000 || ncols > 100000)
    throw Error(ErrorCode::MalformedHeader, "implausible terrain dimensions");
  unsigned char surface = 0, vref = 0;
  char label[kDatumLabelBytes];
  float nodata = 0.0f;
  if (!io::read_exact(in, &surface, 1) || !io::read_exact(in, &vref, 1) ||
      !io::read_exact(in, label, kDatumLabelBytes) || !io::read_f32_le(in, nodata))
    throw Error(ErrorCode::MalformedHeader, "truncated terrain metadata");
  if (surface > 1)
    throw Error(ErrorCode::MalformedHeader, "unknown surface kind flag");
  if (vref > 1)
    throw Error(ErrorCode::MalformedHeader, "unknown vertical reference flag");
  raster.surface_kind = surface == 0 ? SurfaceKind::DTM : SurfaceKind::DSM;
  if (vref == 0) {
    const std::string datum(label, std::find(label, label + kDatumLabelBytes, '\0'));
    if (datum.empty())
      throw Error(ErrorCode::MalformedHeader, "MSL raster lacks a datum label");
    raster.vertical_ref = HeightReference::msl(datum);
  } else {
    raster.vertical_ref = HeightReference::hae();
  }
  raster.nodata = static_cast<double>(nodata);
  raster.geom.nrows = static_cast<Eigen::Index>(nrows);
  raster.geom.ncols = static_cast<Eigen::Index>(ncols);
  raster.values.resize(raster.geom.nrows, raster.geom.ncols);
  for (Eigen::Index r = 0; r < raster.geom.nrows; ++r)
    for (Eigen::Index c = 0; c < raster.geom.ncols; ++c) {
      float v;
      if (!io::read_f32_le(in, v))
        throw Error(ErrorCode::ValueCountMismatch, "truncated terrain payload");
      raster.values(r, c) = static_cast<double>(v);
    }
  validate_raster(raster, ErrorCode::MalformedHeader);
  return raster;
}

void write_terrain_ugg(std::ostream& out, const TerrainRaster& raster) {
  validate_raster(raster);
  out.write("UGGB", 4);
  io::write_f64_le(out, raster.geom.lat0);
  io::write_f64_le(out, raster.geom.lon0);
  io::write_f64_le(out, raster.geom.dlat);
  io::write_f64_le(out, raster.geom.dlon);
  io::write_u32_le(out, static_cast<std::uint32_t>(raster.geom.nrows));
  io::write_u32_le(out, static_cast<std::uint32_t>(raster.geom.ncols));
  const unsigned char surface = raster.surface_kind == SurfaceKind::DTM ? 0 : 1;
  const bool msl = raster.vertical_ref.kind() == HeightReference::Kind::Msl;
  const unsigned char vref = msl ? 0 : 1;
  out.write(reinterpret_cast<const char*>(&surface), 1);
  out.write(reinterpret_cast<const char*>(&vref), 1);
  char label[kDatumLabelBytes] = {};
  if (msl) {
    const std::string& datum = raster.vertical_ref.datum();
    if (datum.size() > kDatumLabelBytes)
      throw Error(ErrorCode::InvalidArgument, "datum label exceeds 16 bytes");
    std::copy(datum.begin(), datum.end(), label);
  }
  out.write(label, kDatumLabelBytes);
  io::write_f32_le(out, static_cast<float>(raster.nodata));
  for (Eigen::Index r = 0; r < raster.geom.nrows; ++r)
    for (Eigen::Index c = 0; c < raster.geom.ncols; ++c)
      io::write_f32_le(out, static_cast<float>(raster.values(r, c)));
}

TerrainRaster load_terrain_file(const std::string& path, SurfaceKind surface,
                                HeightReference vertical_ref) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open terrain file '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  in.clear();
  in.seekg(0);
  if (std::string_view(magic, 4) == "UGGB") return load_terrain_ugg(in);
  return load_esri_ascii(in, surface, std::move(vertical_ref));
}

double sample_elevation(const TerrainRaster& raster, double lat, double lon) {
  if (lat < -90.0 || lat > 90.0)
    throw Error(ErrorCode::OutOfExtent, "latitude outside [-90, 90]");
  const BilinearCell cell = locate_bilinear(raster.geom, lat, lon);
  if (raster.is_nodata(cell.r0, cell.c0) || raster.is_nodata(cell.r0, cell.c1) ||
      raster.is_nodata(cell.r1, cell.c0) || raster.is_nodata(cell.r1, cell.c1))
    throw Error(ErrorCode::NodataNeighborhood,
                "interpolation neighborhood contains nodata");
  return bilinear_value(raster.values, cell);
}

TerrainRaster raster_to_hae(const TerrainRaster& raster, const GeoidGrid& geoid) {
  if (raster.vertical_ref.kind() != HeightReference::Kind::Msl)
    throw Error(ErrorCode::InvalidArgument,
                "only MSL-referenced rasters can be lifted to HAE");
  TerrainRaster out = raster;
  out.vertical_ref = HeightReference::hae();
  for (Eigen::Index r = 0; r < raster.geom.nrows; ++r) {
    const double lat = raster.geom.lat_at(r);
    for (Eigen::Index c = 0; c < raster.geom.ncols; ++c) {
      if (raster.is_nodata(r, c)) continue;
      double n;
      try {
        n = undulation(geoid, lat, raster.geom.lon_at(c));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::OutOfExtent)
          throw Error(ErrorCode::GeoidCoverageGap,
                      "geoid grid does not cover the raster extent");
        throw;
      }
      out.values(r, c) = msl_to_hae(raster.values(r, c), n);
    }
  }
  return out;
}

}  // namespace haekit
