#include "haekit/geoid.hpp"

#include "haekit/error.hpp"
#include "io_util.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace haekit {

namespace {

constexpr double kMaxUndulationM = 150.0;

void validate_geoid(const GeoidGrid& grid,
                    ErrorCode geometry_code = ErrorCode::InvalidArgument) {
  validate_geometry(grid.geom, geometry_code);
  if (grid.geom.nrows < 2 || grid.geom.ncols < 2)
    throw Error(ErrorCode::MalformedHeader, "geoid grid needs at least 2x2 cells");
  if (grid.geom.dlon <= 0.0)
    throw Error(ErrorCode::MalformedHeader, "geoid column step must be eastward");
  if (grid.geom.dlon * static_cast<double>(grid.geom.ncols) > 360.0 + 1e-9)
    throw Error(ErrorCode::MalformedHeader, "geoid grid spans more than 360 degrees");
  for (Eigen::Index r = 0; r < grid.geom.nrows; ++r)
    for (Eigen::Index c = 0; c < grid.geom.ncols; ++c) {
      const double v = grid.values(r, c);
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFiniteValue, "geoid grid contains a non-finite value");
      if (std::abs(v) >= kMaxUndulationM)
        throw Error(ErrorCode::ValueOutOfRange,
                    "undulation magnitude beyond the 150 m sanity bound");
    }
}

GeoidGrid load_text(std::istream& in) {
  GeoidGrid grid;
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::MalformedHeader, "empty UGG stream");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("UGG1", 0) != 0 ||
      (line.size() > 4 && line[4] != ' '))
    throw Error(ErrorCode::MalformedHeader, "missing UGG1 signature");
  if (line.size() > 5) grid.name = line.substr(5);

  if (!std::getline(in, line))
    throw Error(ErrorCode::MalformedHeader, "missing UGG geometry line");
  const auto tok = io::split_ws(line);
  if (tok.size() != 6)
    throw Error(ErrorCode::MalformedHeader, "UGG geometry line needs 6 fields");
  std::uint64_t nrows = 0, ncols = 0;
  if (!io::parse_double(tok[0], grid.geom.lat0) ||
      !io::parse_double(tok[1], grid.geom.lon0) ||
      !io::parse_double(tok[2], grid.geom.dlat) ||
      !io::parse_double(tok[3], grid.geom.dlon) || !io::parse_u64(tok[4], nrows) ||
      !io::parse_u64(tok[5], ncols))
    throw Error(ErrorCode::MalformedHeader, "unparseable UGG geometry field");
  if (nrows == 0 || ncols == 0 || nrows > 100000 || ncols > 100000)
    throw Error(ErrorCode::MalformedHeader, "implausible UGG dimensions");
  grid.geom.nrows = static_cast<Eigen::Index>(nrows);
  grid.geom.ncols = static_cast<Eigen::Index>(ncols);

  grid.values.resize(grid.geom.nrows, grid.geom.ncols);
  Eigen::Index r = 0, c = 0;
  std::string token;
  while (in >> token) {
    if (r >= grid.geom.nrows)
      throw Error(ErrorCode::ValueCountMismatch, "more values than header declares");
    double v;
    if (!io::parse_double(token, v))
      throw Error(ErrorCode::NonFiniteValue, "unparseable grid value '" + token + "'");
    grid.values(r, c) = v;
    if (++c == grid.geom.ncols) {
      c = 0;
      ++r;
    }
  }
  if (r != grid.geom.nrows || c != 0)
    throw Error(ErrorCode::ValueCountMismatch, "fewer values than header declares");
  return grid;
}

GeoidGrid load_binary(std::istream& in) {
  char magic[4];
  if (!io::read_exact(in, magic, 4) || std::string_view(magic, 4) != "UGGB")
    throw Error(ErrorCode::MalformedHeader, "missing UGGB magic");
  GeoidGrid grid;
  std::uint32_t nrows = 0, ncols = 0;
  if (!io::read_f64_le(in, grid.geom.lat0) || !io::read_f64_le(in, grid.geom.lon0) ||
      !io::read_f64_le(in, grid.geom.dlat) || !io::read_f64_le(in, grid.geom.dlon) ||
      !io::read_u32_le(in, nrows) || !io::read_u32_le(in, ncols))
    throw Error(ErrorCode::MalformedHeader, "truncated UGGB header");
  if (nrows == 0 || ncols == 0 || nrows > 100000 || ncols > 100000)
    throw Error(ErrorCode::MalformedHeader, "implausible UGGB dimensions");
  grid.geom.nrows = static_cast<Eigen::Index>(nrows);
  grid.geom.ncols = static_cast<Eigen::Index>(ncols);
  grid.values.resize(grid.geom.nrows, grid.geom.ncols);
  for (Eigen::Index r = 0; r < grid.geom.nrows; ++r)
    for (Eigen::Index c = 0; c < grid.geom.ncols; ++c) {
      float v;
      if (!io::read_f32_le(in, v))
        throw Error(ErrorCode::ValueCountMismatch, "truncated UGGB payload");
      grid.values(r, c) = static_cast<double>(v);
    }
  return grid;
}

}  // namespace

GeoidGrid load_geoid_grid(std::istream& in, GeoidFormat format) {
  GeoidGrid grid = format == GeoidFormat::Text ? load_text(in) : load_binary(in);
  validate_geoid(grid, ErrorCode::MalformedHeader);
  return grid;
}

void write_geoid_grid(std::ostream& out, const GeoidGrid& grid, GeoidFormat format) {
  validate_geoid(grid);
  if (format == GeoidFormat::Text) {
    out << "UGG1";
    if (!grid.name.empty()) out << ' ' << grid.name;
    out << '\n'
        << io::format_double(grid.geom.lat0) << ' ' << io::format_double(grid.geom.lon0)
        << ' ' << io::format_double(grid.geom.dlat) << ' '
        << io::format_double(grid.geom.dlon) << ' ' << grid.geom.nrows << ' '
        << grid.geom.ncols << '\n';
    for (Eigen::Index r = 0; r < grid.geom.nrows; ++r) {
      for (Eigen::Index c = 0; c < grid.geom.ncols; ++c) {
        if (c) out << ' ';
        out << io::format_double(grid.values(r, c));
      }
      out << '\n';
    }
    return;
  }
  out.write("UGGB", 4);
  io::write_f64_le(out, grid.geom.lat0);
  io::write_f64_le(out, grid.geom.lon0);
  io::write_f64_le(out, grid.geom.dlat);
  io::write_f64_le(out, grid.geom.dlon);
  io::write_u32_le(out, static_cast<std::uint32_t>(grid.geom.nrows));
  io::write_u32_le(out, static_cast<std::uint32_t>(grid.geom.ncols));
  for (Eigen::Index r = 0; r < grid.geom.nrows; ++r)
    for (Eigen::Index c = 0; c < grid.geom.ncols; ++c)
      io::write_f32_le(out, static_cast<float>(grid.values(r, c)));
}

GeoidGrid load_geoid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open geoid file '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  in.clear();
  in.seekg(0);
  const GeoidFormat format =
      std::string_view(magic, 4) == "UGGB" ? GeoidFormat::Binary : GeoidFormat::Text;
  return load_geoid_grid(in, format);
}

double undulation(const GeoidGrid& grid, double lat, double lon) {
  if (lat < -90.0 || lat > 90.0)
    throw Error(ErrorCode::OutOfExtent, "latitude outside [-90, 90]");
  const BilinearCell cell = locate_bilinear(grid.geom, lat, lon);
  return bilinear_value(grid.values, cell);
}

}  // namespace haekit
