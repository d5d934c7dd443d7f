#pragma once

#include "haekit/zoning.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace haekit {

/// Boundary rings of a mask, traced along cell edges. Vertices are cell
/// corners as [lat, lon]; rings close implicitly (first vertex not repeated).
/// Outer rings and hole rings wind in opposite directions.
std::vector<std::vector<std::array<double, 2>>> trace_mask_polygons(
    const MaskArray& mask, const GridGeometry& geom);

/// Run-length encoding of a mask over the row-major flat pixel index:
/// [start, length] pairs, ascending, non-overlapping.
std::vector<std::array<std::int64_t, 2>> mask_to_rle(const MaskArray& mask);
MaskArray rle_to_mask(const std::vector<std::array<std::int64_t, 2>>& runs,
                      Eigen::Index nrows, Eigen::Index ncols);

/// The publishable zone document: metadata (grid geometry, seed, config,
/// version, thresholds, fixed airspace-class constants) plus one entry per
/// zone carrying baseline/ceiling heights, stats, the RLE mask and derived
/// boundary polygons. Degrees carry 6 decimals, meters 2, shape factors 6.
nlohmann::json publish_zones(const ZoningResult& result);
void write_zone_document(std::ostream& out, const ZoningResult& result);

struct ParsedZone {
  std::string id;
  ZoneCategory category = ZoneCategory::Simple;
  double baseline_hae_m = 0.0;
  double class_w_ceiling_hae_m = 0.0;
  double class_g_ceiling_hae_m = 0.0;
  std::optional<double> hae_lower_m;
  std::optional<double> hae_upper_m;
  RegionStats stats;
  MaskArray mask;
  std::vector<std::vector<std::array<double, 2>>> polygons;
};

struct ParsedZoneDocument {
  std::string version;
  std::uint64_t seed = 0;
  int k = 0;
  GridGeometry geom;
  std::vector<double> thresholds_hae_m;
  std::vector<ParsedZone> zones;
};

ParsedZoneDocument parse_zone_document(const nlohmann::json& doc);
ParsedZoneDocument load_zone_document(std::istream& in);

}  // namespace haekit
