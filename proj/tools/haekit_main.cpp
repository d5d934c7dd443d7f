// haekit: height-system conversion, airspace zoning and capacity analysis
// from the command line. One subcommand per pipeline; stdout carries only the
// requested document, diagnostics go to stderr.

#include "haekit/capacity.hpp"
#include "haekit/error.hpp"
#include "haekit/geoid.hpp"
#include "haekit/heights.hpp"
#include "haekit/logstats.hpp"
#include "haekit/risk.hpp"
#include "haekit/terrain.hpp"
#include "haekit/version.hpp"
#include "haekit/zone_document.hpp"
#include "haekit/zoning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using haekit::Error;
using haekit::ErrorCode;
using nlohmann::json;

struct GlobalOptions {
  std::string output = "json";
  std::uint64_t seed = 42;
  bool quiet = false;
};

void note(const GlobalOptions& g, const std::string& line) {
  if (!g.quiet) std::cerr << line << '\n';
}

std::string csv_scalar(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void flatten_for_csv(const json& j, const std::string& prefix,
                     std::vector<std::pair<std::string, std::string>>& cols) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten_for_csv(value, prefix.empty() ? key : prefix + "." + key, cols);
  } else if (j.is_array()) {
    throw Error(ErrorCode::InvalidArgument,
                "document contains arrays and cannot be rendered as csv; use --output json");
  } else {
    cols.emplace_back(prefix, csv_scalar(j));
  }
}

void emit_document(const GlobalOptions& g, const json& doc) {
  if (g.output == "csv") {
    std::vector<std::pair<std::string, std::string>> cols;
    flatten_for_csv(doc, "", cols);
    for (std::size_t i = 0; i < cols.size(); ++i)
      std::cout << cols[i].first << (i + 1 < cols.size() ? "," : "\n");
    for (std::size_t i = 0; i < cols.size(); ++i)
      std::cout << cols[i].second << (i + 1 < cols.size() ? "," : "\n");
  } else {
    std::cout << doc.dump(2) << '\n';
  }
}

std::ifstream open_input(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return out;
}

json parse_json_file(const std::string& path) {
  std::ifstream in = open_input(path);
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "bad JSON in '" + path + "': " + e.what());
  }
}

haekit::CalibrationPoint load_calibration(const std::string& path) {
  const json doc = parse_json_file(path);
  try {
    return haekit::make_calibration_point(
        doc.at("lat").get<double>(), doc.at("lon").get<double>(),
        doc.at("hae_m").get<double>(), doc.at("pressure_hPa").get<double>(),
        doc.at("mean_temp_C").get<double>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                "calibration file '" + path +
                    "' needs keys {lat, lon, hae_m, pressure_hPa, mean_temp_C}: " + e.what());
  }
}

haekit::SurfaceKind parse_surface(const std::string& s) {
  if (s == "dtm") return haekit::SurfaceKind::DTM;
  if (s == "dsm") return haekit::SurfaceKind::DSM;
  throw Error(ErrorCode::InvalidArgument, "surface must be dtm or dsm, got '" + s + "'");
}

haekit::QCode parse_qcode(const std::string& s) {
  if (s == "qnh") return haekit::QCode::QNH;
  if (s == "qfe") return haekit::QCode::QFE;
  if (s == "qne") return haekit::QCode::QNE;
  throw Error(ErrorCode::InvalidArgument, "qcode must be qnh, qfe or qne, got '" + s + "'");
}

haekit::HeightReference make_vref(const std::string& vref, const std::string& datum) {
  if (vref == "msl") return haekit::HeightReference::msl(datum);
  if (vref == "hae") return haekit::HeightReference::hae();
  throw Error(ErrorCode::InvalidArgument, "raster vref must be msl or hae, got '" + vref + "'");
}

json reference_to_json(const haekit::HeightReference& ref) {
  using Kind = haekit::HeightReference::Kind;
  switch (ref.kind()) {
    case Kind::Hae:
      return json{{"kind", "hae"}};
    case Kind::Msl:
      return json{{"kind", "msl"}, {"datum", ref.datum()}};
    case Kind::Agl:
      return json{{"kind", "agl"}, {"surface", haekit::to_string(ref.surface())}};
    case Kind::Baro:
      return json{{"kind", "baro"},
                  {"qcode", haekit::to_string(ref.qcode())},
                  {"ref_pressure_hpa", ref.ref_pressure_hpa()}};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown height reference kind");
}

// ---- convert ---------------------------------------------------------------

struct ConvertOptions {
  std::string from, to;
  double value = 0.0;
  std::optional<double> pressure;
  double lat = 0.0, lon = 0.0;
  std::string geoid_path, dem_path, calib_path;
  std::string dem_surface = "dtm", dem_vref = "msl", dem_datum = "MSL";
  std::string from_datum = "MSL", to_datum = "MSL";
  std::string from_surface = "dtm", to_surface = "dtm";
  std::string from_qcode = "qnh", to_qcode = "qnh";
  std::optional<double> from_ref_pressure, to_ref_pressure;
};

haekit::HeightReference build_reference(const std::string& kind, const std::string& datum,
                                        const std::string& surface, const std::string& qcode,
                                        std::optional<double> ref_pressure,
                                        const std::optional<haekit::CalibrationPoint>& calib) {
  if (kind == "hae") return haekit::HeightReference::hae();
  if (kind == "msl") return haekit::HeightReference::msl(datum);
  if (kind == "agl") return haekit::HeightReference::agl(parse_surface(surface));
  if (kind == "baro") {
    const haekit::QCode code = parse_qcode(qcode);
    double ref = haekit::kStandardPressureHpa;
    if (code != haekit::QCode::QNE) {
      if (ref_pressure)
        ref = *ref_pressure;
      else if (calib)
        ref = calib->pressure_hpa;
    } else if (ref_pressure) {
      ref = *ref_pressure;  // constructor enforces the standard value
    }
    return haekit::HeightReference::baro(code, ref);
  }
  throw Error(ErrorCode::InvalidArgument,
              "height kind must be hae, msl, agl or baro, got '" + kind + "'");
}

int cmd_convert(const GlobalOptions& g, const ConvertOptions& o) {
  std::optional<haekit::CalibrationPoint> calib;
  if (!o.calib_path.empty()) calib = load_calibration(o.calib_path);

  const haekit::HeightReference from_ref = build_reference(
      o.from, o.from_datum, o.from_surface, o.from_qcode, o.from_ref_pressure, calib);
  const haekit::HeightReference to_ref = build_reference(
      o.to, o.to_datum, o.to_surface, o.to_qcode, o.to_ref_pressure, calib);

  double value = o.value;
  if (o.pressure) {
    if (from_ref.kind() != haekit::HeightReference::Kind::Baro)
      throw Error(ErrorCode::InvalidArgument, "--pressure applies only to --from baro");
    if (!calib)
      throw Error(ErrorCode::MissingContext,
                  "--pressure needs --calib for the layer mean temperature");
    value = haekit::hypsometric_thickness(from_ref.ref_pressure_hpa(), *o.pressure,
                                          calib->mean_temp_c);
  }

  std::optional<haekit::GeoidGrid> geoid;
  if (!o.geoid_path.empty()) geoid = haekit::load_geoid_file(o.geoid_path);
  std::optional<haekit::TerrainRaster> terrain;
  if (!o.dem_path.empty())
    terrain = haekit::load_terrain_file(o.dem_path, parse_surface(o.dem_surface),
                                        make_vref(o.dem_vref, o.dem_datum));

  haekit::ConversionContext ctx;
  ctx.geoid = geoid ? &*geoid : nullptr;
  ctx.terrain = terrain ? &*terrain : nullptr;
  ctx.calibration = calib;

  const haekit::Height result =
      haekit::convert(haekit::make_height(value, from_ref), to_ref, ctx, o.lat, o.lon);

  emit_document(g, json{{"value_m", result.value_m},
                        {"reference", reference_to_json(result.reference)}});
  return 0;
}

// ---- zone ------------------------------------------------------------------

struct ZoneOptions {
  std::string dem_path, geoid_path, out_path;
  std::string dem_surface = "dtm", dem_vref = "msl", dem_datum = "MSL";
  std::optional<int> k;
  int k_max = 8;
  double interval_m = 100.0;
  double area_threshold = 0.85;
};

int cmd_zone(const GlobalOptions& g, const ZoneOptions& o) {
  haekit::TerrainRaster raster = haekit::load_terrain_file(
      o.dem_path, parse_surface(o.dem_surface), make_vref(o.dem_vref, o.dem_datum));

  if (raster.vertical_ref.kind() == haekit::HeightReference::Kind::Msl) {
    if (o.geoid_path.empty())
      throw Error(ErrorCode::MissingContext,
                  "MSL raster needs a geoid grid to reach HAE; pass --geoid");
    const haekit::GeoidGrid geoid = haekit::load_geoid_file(o.geoid_path);
    raster = haekit::raster_to_hae(raster, geoid);
  }

  haekit::ZoningConfig config;
  config.k = o.k;
  config.k_max = o.k_max;
  config.seed = g.seed;
  config.area_fraction_threshold = o.area_threshold;
  config.interval_m = o.interval_m;

  const haekit::ZoningResult result = haekit::run_zoning(raster, config);

  if (!o.out_path.empty()) {
    std::ofstream out = open_output(o.out_path);
    haekit::write_zone_document(out, result);
    note(g, "wrote zone document to " + o.out_path);
  } else {
    emit_document(g, haekit::publish_zones(result));
  }
  return 0;
}

// ---- risk ------------------------------------------------------------------

struct RiskOptions {
  double sigma1 = 0.0, sigma2 = 0.0, tls = 0.0, ceiling = 0.0;
  std::optional<double> vsm_override;
  std::string sweep_path;
};

int cmd_risk(const GlobalOptions& g, const RiskOptions& o) {
  const haekit::SeparationAnalysis a =
      haekit::analyze_separation(o.sigma1, o.sigma2, o.tls, o.ceiling, o.vsm_override);

  if (!o.sweep_path.empty()) {
    std::ofstream out = open_output(o.sweep_path);
    const haekit::ErrorModel m1 = haekit::make_gaussian(0.0, o.sigma1);
    const haekit::ErrorModel m2 = haekit::make_gaussian(0.0, o.sigma2);
    out << "separation_m,overlap_density_per_m,tail_probability\n";
    const int steps = 200;
    const double s_max = 2.0 * a.vsm_m;
    for (int i = 0; i <= steps; ++i) {
      const double s = s_max * i / steps;
      out << s << ',' << haekit::overlap_density(m1, m2, s) << ','
          << haekit::tail_probability(m1, m2, s) << '\n';
    }
    note(g, "wrote risk sweep to " + o.sweep_path);
  }

  emit_document(g, json{{"sigma1_m", a.sigma1_m},
                        {"sigma2_m", a.sigma2_m},
                        {"tls", a.tls},
                        {"lambda", a.lambda},
                        {"vsm_formula_m", a.vsm_formula_m},
                        {"vsm_m", a.vsm_m},
                        {"vsm_overridden", a.vsm_overridden},
                        {"ceiling_m", a.ceiling_m},
                        {"flight_levels", a.flight_levels}});
  return 0;
}

// ---- capacity ----------------------------------------------------------------

struct CapacityOptions {
  std::int64_t levels = 0;
  double qos = 0.0;
  double holding_hr = 0.1;
  std::optional<std::int64_t> compare_levels;
  std::string sweep_path;
};

int cmd_capacity(const GlobalOptions& g, const CapacityOptions& o) {
  const haekit::CapacityAnalysis a = haekit::analyze_capacity(o.levels, o.qos, o.holding_hr);

  json doc{{"levels", a.levels},
           {"qos", a.qos},
           {"max_offered_erlangs", a.max_offered_erlangs},
           {"holding_time_hr", a.holding_time_hr},
           {"max_throughput_per_hr", a.max_throughput_per_hr}};

  if (o.compare_levels) {
    const haekit::CapacityAnalysis b =
        haekit::analyze_capacity(*o.compare_levels, o.qos, o.holding_hr);
    doc["compare"] = json{{"levels", b.levels},
                          {"max_offered_erlangs", b.max_offered_erlangs},
                          {"max_throughput_per_hr", b.max_throughput_per_hr},
                          {"throughput_ratio",
                           b.max_throughput_per_hr / a.max_throughput_per_hr}};
  }

  if (!o.sweep_path.empty()) {
    std::ofstream out = open_output(o.sweep_path);
    out << "demand_erlangs,blocking_probability\n";
    const int steps = 200;
    const double a_max = 2.0 * std::max(a.max_offered_erlangs, 1.0);
    for (int i = 0; i <= steps; ++i) {
      const double demand = a_max * i / steps;
      out << demand << ',' << haekit::erlang_b(demand, o.levels) << '\n';
    }
    note(g, "wrote capacity sweep to " + o.sweep_path);
  }

  emit_document(g, doc);
  return 0;
}

// ---- logs --------------------------------------------------------------------

struct LogsOptions {
  std::string input_path, histogram_path;
  int window = 10;
};

int cmd_logs(const GlobalOptions& g, const LogsOptions& o) {
  std::ifstream in = open_input(o.input_path);
  std::vector<haekit::FlightLogRecord> records = haekit::parse_log_csv(in);
  records = haekit::debias_segments(std::move(records), o.window);
  const haekit::ErrorExtraction extraction = haekit::extract_error_models(records);

  if (!o.histogram_path.empty()) {
    std::ofstream out = open_output(o.histogram_path);
    haekit::write_histogram_csv(out, extraction.residual_histogram);
    note(g, "wrote residual histogram to " + o.histogram_path);
  }

  emit_document(
      g, json{{"sigma_baro_m", extraction.sigma_baro_m},
              {"sigma_hae_m", extraction.sigma_hae_m},
              {"n_segments", extraction.n_segments},
              {"n_records", extraction.n_records},
              {"window_n", o.window},
              {"histogram_bins",
               static_cast<std::int64_t>(extraction.residual_histogram.densities.size())}});
  return 0;
}

// ---- info --------------------------------------------------------------------

int cmd_geoid_info(const GlobalOptions& g, const std::string& path) {
  const haekit::GeoidGrid grid = haekit::load_geoid_file(path);
  emit_document(g, json{{"name", grid.name},
                        {"lat0", grid.geom.lat0},
                        {"lon0", grid.geom.lon0},
                        {"dlat", grid.geom.dlat},
                        {"dlon", grid.geom.dlon},
                        {"nrows", grid.geom.nrows},
                        {"ncols", grid.geom.ncols},
                        {"wraps_longitude", grid.geom.wraps_longitude()},
                        {"min_m", grid.values.minCoeff()},
                        {"max_m", grid.values.maxCoeff()}});
  return 0;
}

struct DemInfoOptions {
  std::string input_path;
  std::string surface = "dtm", vref = "msl", datum = "MSL";
};

int cmd_dem_info(const GlobalOptions& g, const DemInfoOptions& o) {
  const haekit::TerrainRaster raster = haekit::load_terrain_file(
      o.input_path, parse_surface(o.surface), make_vref(o.vref, o.datum));

  std::int64_t nodata_count = 0;
  double min_m = std::numeric_limits<double>::infinity();
  double max_m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < raster.geom.nrows; ++r)
    for (Eigen::Index c = 0; c < raster.geom.ncols; ++c) {
      if (raster.is_nodata(r, c)) {
        ++nodata_count;
        continue;
      }
      min_m = std::min(min_m, raster.values(r, c));
      max_m = std::max(max_m, raster.values(r, c));
    }

  json doc{{"surface", haekit::to_string(raster.surface_kind)},
           {"vertical_ref", reference_to_json(raster.vertical_ref)},
           {"lat0", raster.geom.lat0},
           {"lon0", raster.geom.lon0},
           {"dlat", raster.geom.dlat},
           {"dlon", raster.geom.dlon},
           {"nrows", raster.geom.nrows},
           {"ncols", raster.geom.ncols},
           {"nodata", raster.nodata},
           {"nodata_count", nodata_count}};
  if (nodata_count < raster.geom.nrows * raster.geom.ncols) {
    doc["min_m"] = min_m;
    doc["max_m"] = max_m;
  }
  emit_document(g, doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"height-system conversion and airspace zoning toolkit"};
  app.set_version_flag("--version", haekit::kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global flags stay valid after the subcommand name

  GlobalOptions g;
  app.add_option("--output", g.output, "stdout document format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "PRNG seed for clustering restarts")
      ->capture_default_str();
  app.add_flag("--quiet", g.quiet, "suppress informational stderr notes");

  ConvertOptions co;
  CLI::App* convert = app.add_subcommand("convert", "convert a height between references");
  convert->add_option("--from", co.from, "source reference kind")->required();
  convert->add_option("--to", co.to, "target reference kind")->required();
  convert->add_option("--value", co.value, "height value in meters");
  convert->add_option("--pressure", co.pressure,
                      "aircraft static pressure in hPa (baro source)");
  convert->add_option("--lat", co.lat, "latitude in degrees");
  convert->add_option("--lon", co.lon, "longitude in degrees");
  convert->add_option("--geoid", co.geoid_path, "geoid undulation grid file");
  convert->add_option("--dem", co.dem_path, "terrain raster file");
  convert->add_option("--dem-surface", co.dem_surface, "dtm or dsm")->capture_default_str();
  convert->add_option("--dem-vref", co.dem_vref, "raster vertical reference: msl or hae")
      ->capture_default_str();
  convert->add_option("--dem-datum", co.dem_datum, "raster MSL datum label")
      ->capture_default_str();
  convert->add_option("--calib", co.calib_path, "calibration point JSON file");
  convert->add_option("--from-datum", co.from_datum, "source MSL datum label")
      ->capture_default_str();
  convert->add_option("--to-datum", co.to_datum, "target MSL datum label")
      ->capture_default_str();
  convert->add_option("--from-surface", co.from_surface, "source AGL surface: dtm or dsm")
      ->capture_default_str();
  convert->add_option("--to-surface", co.to_surface, "target AGL surface: dtm or dsm")
      ->capture_default_str();
  convert->add_option("--from-qcode", co.from_qcode, "source baro setting: qnh, qfe or qne")
      ->capture_default_str();
  convert->add_option("--to-qcode", co.to_qcode, "target baro setting: qnh, qfe or qne")
      ->capture_default_str();
  convert->add_option("--from-ref-pressure", co.from_ref_pressure,
                      "source baro reference pressure in hPa");
  convert->add_option("--to-ref-pressure", co.to_ref_pressure,
                      "target baro reference pressure in hPa");

  ZoneOptions zo;
  CLI::App* zone = app.add_subcommand("zone", "partition an HAE raster into airspace zones");
  zone->add_option("--dem", zo.dem_path, "terrain raster file")->required();
  zone->add_option("--geoid", zo.geoid_path, "geoid grid (required for MSL rasters)");
  zone->add_option("--dem-surface", zo.dem_surface, "dtm or dsm")->capture_default_str();
  zone->add_option("--dem-vref", zo.dem_vref, "raster vertical reference: msl or hae")
      ->capture_default_str();
  zone->add_option("--dem-datum", zo.dem_datum, "raster MSL datum label")
      ->capture_default_str();
  zone->add_option("--k", zo.k, "fixed cluster count (elbow-selected when absent)");
  zone->add_option("--k-max", zo.k_max, "elbow search ceiling")->capture_default_str();
  zone->add_option("--interval", zo.interval_m, "complex band interval in meters")
      ->capture_default_str();
  zone->add_option("--area-threshold", zo.area_threshold,
                   "cumulative area fraction closing the simple region set")
      ->capture_default_str();
  zone->add_option("--out", zo.out_path, "zone document path (stdout when absent)");

  RiskOptions ro;
  CLI::App* risk = app.add_subcommand("risk", "vertical separation analysis");
  risk->add_option("--sigma1", ro.sigma1, "first error sigma in meters")->required();
  risk->add_option("--sigma2", ro.sigma2, "second error sigma in meters")->required();
  risk->add_option("--tls", ro.tls, "target level of safety")->required();
  risk->add_option("--ceiling", ro.ceiling, "usable band ceiling in meters")->required();
  risk->add_option("--vsm-override", ro.vsm_override,
                   "operational VSM substitute for the level count");
  risk->add_option("--sweep", ro.sweep_path,
                   "CSV path for (separation, overlap density, tail probability) samples");

  CapacityOptions po;
  CLI::App* capacity = app.add_subcommand("capacity", "Erlang-B airspace throughput");
  capacity->add_option("--levels", po.levels, "flight level count")->required();
  capacity->add_option("--qos", po.qos, "blocking probability bound")->required();
  capacity->add_option("--holding-hr", po.holding_hr, "mission holding time in hours")
      ->capture_default_str();
  capacity->add_option("--compare-levels", po.compare_levels,
                       "second level count; reports the throughput ratio");
  capacity->add_option("--sweep", po.sweep_path,
                       "CSV path for (demand, blocking probability) samples");

  LogsOptions lo;
  CLI::App* logs = app.add_subcommand("logs", "flight-log error statistics");
  logs->add_option("--input", lo.input_path, "flight log CSV")->required();
  logs->add_option("--window", lo.window, "per-segment debias window")->capture_default_str();
  logs->add_option("--histogram", lo.histogram_path, "CSV path for the residual histogram");

  std::string geoid_info_path;
  CLI::App* geoid_info = app.add_subcommand("geoid-info", "describe a geoid grid file");
  geoid_info->add_option("--input", geoid_info_path, "geoid grid file")->required();

  DemInfoOptions dio;
  CLI::App* dem_info = app.add_subcommand("dem-info", "describe a terrain raster file");
  dem_info->add_option("--input", dio.input_path, "terrain raster file")->required();
  dem_info->add_option("--surface", dio.surface, "dtm or dsm")->capture_default_str();
  dem_info->add_option("--vref", dio.vref, "msl or hae")->capture_default_str();
  dem_info->add_option("--datum", dio.datum, "MSL datum label")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (convert->parsed()) return cmd_convert(g, co);
    if (zone->parsed()) return cmd_zone(g, zo);
    if (risk->parsed()) return cmd_risk(g, ro);
    if (capacity->parsed()) return cmd_capacity(g, po);
    if (logs->parsed()) return cmd_logs(g, lo);
    if (geoid_info->parsed()) return cmd_geoid_info(g, geoid_info_path);
    if (dem_info->parsed()) return cmd_dem_info(g, dio);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::IoError ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
