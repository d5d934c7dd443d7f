#include "haekit/zone_document.hpp"

#include "haekit/error.hpp"
#include "haekit/version.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

namespace haekit {

namespace {

double round_dp(double v, int decimals) {
  double factor = 1.0;
  for (int i = 0; i < decimals; ++i) factor *= 10.0;
  double r = std::round(v * factor) / factor;
  if (r == 0.0) r = 0.0;  // normalize -0
  return r;
}

double r2(double v) { return round_dp(v, 2); }
double r6(double v) { return round_dp(v, 6); }

constexpr double kClassGAglLimitM = 300.0;
constexpr double kClassGMslCeilingM = 6000.0;

using Corner = std::pair<Eigen::Index, Eigen::Index>;  // (row corner, col corner)

struct DirectedEdge {
  Corner from;
  Corner to;
  bool used = false;
};

}  // namespace

std::vector<std::vector<std::array<double, 2>>> trace_mask_polygons(
    const MaskArray& mask, const GridGeometry& geom) {
  const Eigen::Index nrows = mask.rows(), ncols = mask.cols();
  auto masked = [&](Eigen::Index r, Eigen::Index c) {
    return r >= 0 && r < nrows && c >= 0 && c < ncols && mask(r, c);
  };

  // Boundary sides as directed edges that walk each masked cell clockwise in
  // index space; edges shared by two masked cells cancel by never being
  // emitted.
  std::vector<DirectedEdge> edges;
  for (Eigen::Index r = 0; r < nrows; ++r)
    for (Eigen::Index c = 0; c < ncols; ++c) {
      if (!mask(r, c)) continue;
      if (!masked(r - 1, c)) edges.push_back({{r, c}, {r, c + 1}, false});
      if (!masked(r, c + 1)) edges.push_back({{r, c + 1}, {r + 1, c + 1}, false});
      if (!masked(r + 1, c)) edges.push_back({{r + 1, c + 1}, {r + 1, c}, false});
      if (!masked(r, c - 1)) edges.push_back({{r + 1, c}, {r, c}, false});
    }

  std::map<Corner, std::vector<std::size_t>> outgoing;
  for (std::size_t i = 0; i < edges.size(); ++i) outgoing[edges[i].from].push_back(i);

  auto direction = [](const DirectedEdge& e) {
    return std::pair<int, int>(static_cast<int>(e.to.first - e.from.first),
                               static_cast<int>(e.to.second - e.from.second));
  };

  std::vector<std::vector<Corner>> rings;
  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (edges[start].used) continue;
    std::vector<Corner> ring;
    std::size_t cur = start;
    while (!edges[cur].used) {
      edges[cur].used = true;
      ring.push_back(edges[cur].from);
      const Corner at = edges[cur].to;
      const auto it = outgoing.find(at);
      if (it == outgoing.end()) break;  // cannot happen on a well-formed mask
      const auto [dr, dc] = direction(edges[cur]);
      // Saddle corners offer two departures; prefer the right turn so rings
      // stay simple, then straight, then left.
      const std::pair<int, int> prefs[3] = {{dc, -dr}, {dr, dc}, {-dc, dr}};
      std::size_t next = edges.size();
      for (const auto& want : prefs) {
        for (const std::size_t cand : it->second) {
          if (edges[cand].used) continue;
          if (direction(edges[cand]) == want) {
            next = cand;
            break;
          }
        }
        if (next != edges.size()) break;
      }
      if (next == edges.size()) break;  // ring closed
      cur = next;
    }
    if (ring.size() >= 4) rings.push_back(std::move(ring));
  }

  // Merge collinear runs (all edges are axis-aligned unit steps).
  std::vector<std::vector<std::array<double, 2>>> polygons;
  for (const auto& ring : rings) {
    std::vector<Corner> slim;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Corner& prev = ring[(i + n - 1) % n];
      const Corner& here = ring[i];
      const Corner& next = ring[(i + 1) % n];
      const bool collinear = (prev.first == here.first && here.first == next.first) ||
                             (prev.second == here.second && here.second == next.second);
      if (!collinear) slim.push_back(here);
    }
    if (slim.size() < 4) continue;
    std::vector<std::array<double, 2>> poly;
    poly.reserve(slim.size());
    for (const Corner& corner : slim)
      poly.push_back(
          {r6(geom.lat0 + (static_cast<double>(corner.first) - 0.5) * geom.dlat),
           r6(geom.lon0 + (static_cast<double>(corner.second) - 0.5) * geom.dlon)});
    polygons.push_back(std::move(poly));
  }
  return polygons;
}

std::vector<std::array<std::int64_t, 2>> mask_to_rle(const MaskArray& mask) {
  std::vector<std::array<std::int64_t, 2>> runs;
  const std::int64_t total = mask.rows() * mask.cols();
  std::int64_t i = 0;
  while (i < total) {
    const bool v = mask(i / mask.cols(), i % mask.cols());
    if (!v) {
      ++i;
      continue;
    }
    std::int64_t j = i;
    while (j < total && mask(j / mask.cols(), j % mask.cols())) ++j;
    runs.push_back({i, j - i});
    i = j;
  }
  return runs;
}

MaskArray rle_to_mask(const std::vector<std::array<std::int64_t, 2>>& runs,
                      Eigen::Index nrows, Eigen::Index ncols) {
  MaskArray mask = MaskArray::Constant(nrows, ncols, false);
  const std::int64_t total = static_cast<std::int64_t>(nrows) * ncols;
  std::int64_t prev_end = 0;
  for (const auto& run : runs) {
    const std::int64_t start = run[0], len = run[1];
    if (len <= 0 || start < prev_end || start + len > total)
      throw Error(ErrorCode::InvalidArgument, "malformed mask run-length data");
    for (std::int64_t i = start; i < start + len; ++i)
      mask(i / ncols, i % ncols) = true;
    prev_end = start + len;
  }
  return mask;
}

namespace {

nlohmann::json stats_to_json(const RegionStats& s) {
  return nlohmann::json{{"pixel_count", s.pixel_count}, {"mean_m", r2(s.mean_m)},
                        {"std_m", r2(s.std_m)},         {"q1_m", r2(s.q1_m)},
                        {"median_m", r2(s.median_m)},   {"q3_m", r2(s.q3_m)},
                        {"min_m", r2(s.min_m)},         {"max_m", r2(s.max_m)},
                        {"skew", r6(s.skew)},           {"kurtosis", r6(s.kurtosis)}};
}

RegionStats stats_from_json(const nlohmann::json& j) {
  RegionStats s;
  s.pixel_count = j.at("pixel_count").get<std::int64_t>();
  s.mean_m = j.at("mean_m").get<double>();
  s.std_m = j.at("std_m").get<double>();
  s.q1_m = j.at("q1_m").get<double>();
  s.median_m = j.at("median_m").get<double>();
  s.q3_m = j.at("q3_m").get<double>();
  s.min_m = j.at("min_m").get<double>();
  s.max_m = j.at("max_m").get<double>();
  s.skew = j.at("skew").get<double>();
  s.kurtosis = j.at("kurtosis").get<double>();
  return s;
}

}  // namespace

nlohmann::json publish_zones(const ZoningResult& result) {
  nlohmann::json zones = nlohmann::json::array();
  for (const Zone& zone : result.zones) {
    nlohmann::json entry{
        {"id", zone.id},
        {"category", to_string(zone.category)},
        {"baseline_hae_m", r2(zone.baseline_hae_m)},
        {"classW_ceiling_hae_m", r2(zone.class_w_ceiling_hae_m)},
        {"classG_ceiling_hae_m", r2(class_g_ceiling(zone.baseline_hae_m))},
        {"stats", stats_to_json(zone.stats)},
        {"mask_rle", mask_to_rle(zone.mask)},
        {"polygons", trace_mask_polygons(zone.mask, result.geom)},
    };
    if (zone.hae_lower_m && zone.hae_upper_m)
      entry["band"] = {{"lower_hae_m", r2(*zone.hae_lower_m)},
                       {"upper_hae_m", r2(*zone.hae_upper_m)}};
    zones.push_back(std::move(entry));
  }

  nlohmann::json thresholds = nlohmann::json::array();
  for (const double t : result.thresholds_hae_m) thresholds.push_back(r2(t));

  nlohmann::json doc{
      {"meta",
       {{"version", kVersion},
        {"seed", result.config.seed},
        {"k", result.k},
        {"k_max", result.config.k_max},
        {"area_fraction_threshold", result.config.area_fraction_threshold},
        {"interval_m", r2(result.config.interval_m)},
        {"raster",
         {{"lat0", r6(result.geom.lat0)},
          {"lon0", r6(result.geom.lon0)},
          {"dlat", r6(result.geom.dlat)},
          {"dlon", r6(result.geom.dlon)},
          {"nrows", result.geom.nrows},
          {"ncols", result.geom.ncols}}},
        {"thresholds_hae_m", std::move(thresholds)},
        {"class_g", {{"agl_limit_m", kClassGAglLimitM},
                     {"msl_ceiling_m", kClassGMslCeilingM}}}}},
      {"zones", std::move(zones)}};
  return doc;
}

void write_zone_document(std::ostream& out, const ZoningResult& result) {
  out << publish_zones(result).dump(2) << '\n';
}

namespace {

/// Field extraction; json exceptions escape to the caller.
ParsedZoneDocument parse_fields(const nlohmann::json& doc) {
  ParsedZoneDocument parsed;
  const auto& meta = doc.at("meta");
  parsed.version = meta.at("version").get<std::string>();
  parsed.seed = meta.at("seed").get<std::uint64_t>();
  parsed.k = meta.at("k").get<int>();
  const auto& raster = meta.at("raster");
  parsed.geom.lat0 = raster.at("lat0").get<double>();
  parsed.geom.lon0 = raster.at("lon0").get<double>();
  parsed.geom.dlat = raster.at("dlat").get<double>();
  parsed.geom.dlon = raster.at("dlon").get<double>();
  parsed.geom.nrows = raster.at("nrows").get<Eigen::Index>();
  parsed.geom.ncols = raster.at("ncols").get<Eigen::Index>();
  for (const auto& t : meta.at("thresholds_hae_m"))
    parsed.thresholds_hae_m.push_back(t.get<double>());

  for (const auto& entry : doc.at("zones")) {
    ParsedZone zone;
    zone.id = entry.at("id").get<std::string>();
    const std::string category = entry.at("category").get<std::string>();
    if (category == "simple")
      zone.category = ZoneCategory::Simple;
    else if (category == "complex-band")
      zone.category = ZoneCategory::ComplexBand;
    else
      throw Error(ErrorCode::InvalidArgument, "unknown zone category '" + category + "'");
    zone.baseline_hae_m = entry.at("baseline_hae_m").get<double>();
    zone.class_w_ceiling_hae_m = entry.at("classW_ceiling_hae_m").get<double>();
    zone.class_g_ceiling_hae_m = entry.at("classG_ceiling_hae_m").get<double>();
    if (entry.contains("band")) {
      zone.hae_lower_m = entry.at("band").at("lower_hae_m").get<double>();
      zone.hae_upper_m = entry.at("band").at("upper_hae_m").get<double>();
    }
    zone.stats = stats_from_json(entry.at("stats"));
    std::vector<std::array<std::int64_t, 2>> runs;
    for (const auto& run : entry.at("mask_rle"))
      runs.push_back({run.at(0).get<std::int64_t>(), run.at(1).get<std::int64_t>()});
    zone.mask = rle_to_mask(runs, parsed.geom.nrows, parsed.geom.ncols);
    for (const auto& poly : entry.at("polygons")) {
      std::vector<std::array<double, 2>> ring;
      for (const auto& vertex : poly)
        ring.push_back({vertex.at(0).get<double>(), vertex.at(1).get<double>()});
      zone.polygons.push_back(std::move(ring));
    }
    parsed.zones.push_back(std::move(zone));
  }
  return parsed;
}

}  // namespace

ParsedZoneDocument parse_zone_document(const nlohmann::json& doc) {
  try {
    return parse_fields(doc);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad zone document: ") + e.what());
  }
}

ParsedZoneDocument load_zone_document(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad zone document: ") + e.what());
  }
  return parse_zone_document(doc);
}

}  // namespace haekit
