#include "haekit/heights.hpp"

#include "haekit/error.hpp"
#include "haekit/geoid.hpp"
#include "haekit/terrain.hpp"

#include <cmath>
#include <utility>

namespace haekit {

namespace {

void check_pressure(double p_hpa, const char* what) {
  if (!std::isfinite(p_hpa) || p_hpa <= 0.0)
    throw Error(ErrorCode::NonPositivePressure, std::string(what) + " must be positive");
  if (p_hpa <= 300.0 || p_hpa >= 1100.0)
    throw Error(ErrorCode::ValueOutOfRange,
                std::string(what) + " outside the plausible (300, 1100) hPa band");
}

}  // namespace

std::string to_string(SurfaceKind kind) {
  return kind == SurfaceKind::DTM ? "DTM" : "DSM";
}

std::string to_string(QCode code) {
  switch (code) {
    case QCode::QNH: return "QNH";
    case QCode::QFE: return "QFE";
    case QCode::QNE: return "QNE";
  }
  return "QNH";
}

HeightReference HeightReference::hae() {
  HeightReference r;
  r.kind_ = Kind::Hae;
  return r;
}

HeightReference HeightReference::msl(std::string datum) {
  if (datum.empty())
    throw Error(ErrorCode::InvalidArgument, "MSL datum label must be non-empty");
  HeightReference r;
  r.kind_ = Kind::Msl;
  r.datum_ = std::move(datum);
  return r;
}

HeightReference HeightReference::agl(SurfaceKind surface) {
  HeightReference r;
  r.kind_ = Kind::Agl;
  r.surface_ = surface;
  return r;
}

HeightReference HeightReference::baro(QCode code, double ref_pressure_hpa) {
  if (code == QCode::QNE && ref_pressure_hpa != kStandardPressureHpa)
    throw Error(ErrorCode::InvalidArgument,
                "QNE fixes the reference pressure at 1013.25 hPa");
  check_pressure(ref_pressure_hpa, "reference pressure");
  HeightReference r;
  r.kind_ = Kind::Baro;
  r.qcode_ = code;
  r.ref_pressure_hpa_ = ref_pressure_hpa;
  return r;
}

HeightReference HeightReference::baro_qne() {
  return baro(QCode::QNE, kStandardPressureHpa);
}

bool HeightReference::operator==(const HeightReference& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Hae: return true;
    case Kind::Msl: return datum_ == other.datum_;
    case Kind::Agl: return surface_ == other.surface_;
    case Kind::Baro:
      return qcode_ == other.qcode_ && ref_pressure_hpa_ == other.ref_pressure_hpa_;
  }
  return false;
}

std::string HeightReference::describe() const {
  switch (kind_) {
    case Kind::Hae: return "HAE";
    case Kind::Msl: return "MSL(" + datum_ + ")";
    case Kind::Agl: return "AGL(" + to_string(surface_) + ")";
    case Kind::Baro:
      return "Baro(" + to_string(qcode_) + " " + std::to_string(ref_pressure_hpa_) + " hPa)";
  }
  return "HAE";
}

Height make_height(double value_m, HeightReference reference) {
  if (!std::isfinite(value_m) || std::abs(value_m) >= 100000.0)
    throw Error(ErrorCode::ValueOutOfRange,
                "height must be finite and below 100 km in magnitude");
  return Height{value_m, std::move(reference)};
}

CalibrationPoint make_calibration_point(double lat, double lon, double hae_m,
                                        double pressure_hpa, double mean_temp_c) {
  if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0)
    throw Error(ErrorCode::InvalidArgument, "calibration latitude outside [-90, 90]");
  if (!std::isfinite(lon))
    throw Error(ErrorCode::InvalidArgument, "calibration longitude must be finite");
  if (!std::isfinite(hae_m) || std::abs(hae_m) >= 100000.0)
    throw Error(ErrorCode::ValueOutOfRange, "calibration height implausible");
  check_pressure(pressure_hpa, "calibration pressure");
  if (!std::isfinite(mean_temp_c) || mean_temp_c <= -90.0 || mean_temp_c >= 60.0)
    throw Error(ErrorCode::ValueOutOfRange,
                "mean temperature outside the plausible (-90, 60) C band");
  return CalibrationPoint{lat, lon, hae_m, pressure_hpa, mean_temp_c};
}

double msl_to_hae(double msl_m, double undulation_m) { return msl_m + undulation_m; }
double hae_to_msl(double hae_m, double undulation_m) { return hae_m - undulation_m; }
double agl_to_hae(double agl_m, double ground_hae_m) { return agl_m + ground_hae_m; }
double hae_to_agl(double hae_m, double ground_hae_m) { return hae_m - ground_hae_m; }

double hypsometric_thickness(double p_ref_hpa, double p_hpa, double mean_temp_c) {
  check_pressure(p_ref_hpa, "reference pressure");
  check_pressure(p_hpa, "pressure");
  const double t_kelvin = mean_temp_c + kCelsiusToKelvin;
  return kDryAirGasConstant * t_kelvin / kStandardGravity * std::log(p_ref_hpa / p_hpa);
}

double baro_to_hae_calibrated(double aircraft_pressure_hpa,
                              const CalibrationPoint& calib) {
  return calib.hae_m + hypsometric_thickness(calib.pressure_hpa, aircraft_pressure_hpa,
                                             calib.mean_temp_c);
}

double qnh_offset_to_hae(double aircraft_qnh_alt_m, double calib_qnh_alt_m,
                         double calib_hae_m) {
  return aircraft_qnh_alt_m - calib_qnh_alt_m + calib_hae_m;
}

double empirical_pressure_to_msl(double pressure_hpa, double qnh_hpa) {
  if (!std::isfinite(pressure_hpa) || pressure_hpa <= 0.0)
    throw Error(ErrorCode::NonPositivePressure, "pressure must be positive");
  if (!std::isfinite(qnh_hpa) || qnh_hpa <= 0.0)
    throw Error(ErrorCode::NonPositivePressure, "QNH must be positive");
  return (qnh_hpa - pressure_hpa) * kMetersPerHpa;
}

namespace {

/// HAE of the ground under (lat, lon) for AGL legs: terrain sample, plus
/// undulation when the terrain itself is MSL-valued.
double ground_hae_at(const ConversionContext& ctx, SurfaceKind surface, double lat,
                     double lon) {
  if (ctx.terrain == nullptr)
    throw Error(ErrorCode::MissingContext, "AGL conversion requires a terrain raster");
  if (ctx.terrain->surface_kind != surface)
    throw Error(ErrorCode::MissingContext,
                "AGL conversion requires a " + to_string(surface) +
                    " raster, context holds " + to_string(ctx.terrain->surface_kind));
  const double ground = sample_elevation(*ctx.terrain, lat, lon);
  if (ctx.terrain->vertical_ref.kind() == HeightReference::Kind::Hae) return ground;
  if (ctx.geoid == nullptr)
    throw Error(ErrorCode::MissingContext,
                "MSL-referenced terrain requires a geoid grid");
  return msl_to_hae(ground, undulation(*ctx.geoid, lat, lon));
}

double require_undulation(const ConversionContext& ctx, double lat, double lon) {
  if (ctx.geoid == nullptr)
    throw Error(ErrorCode::MissingContext, "MSL conversion requires a geoid grid");
  return undulation(*ctx.geoid, lat, lon);
}

/// HAE of the reference pressure level of a Baro reference.
double baro_level_hae(const CalibrationPoint& calib, const HeightReference& ref) {
  return calib.hae_m +
         hypsometric_thickness(calib.pressure_hpa, ref.ref_pressure_hpa(),
                               calib.mean_temp_c);
}

double to_hae(const Height& h, const ConversionContext& ctx, double lat, double lon) {
  switch (h.reference.kind()) {
    case HeightReference::Kind::Hae:
      return h.value_m;
    case HeightReference::Kind::Msl:
      return msl_to_hae(h.value_m, require_undulation(ctx, lat, lon));
    case HeightReference::Kind::Agl:
      return agl_to_hae(h.value_m,
                        ground_hae_at(ctx, h.reference.surface(), lat, lon));
    case HeightReference::Kind::Baro:
      if (!ctx.calibration)
        throw Error(ErrorCode::MissingContext,
                    "barometric conversion requires a calibration point");
      return baro_level_hae(*ctx.calibration, h.reference) + h.value_m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown height reference");
}

double from_hae(double hae, const HeightReference& target, const ConversionContext& ctx,
                double lat, double lon) {
  switch (target.kind()) {
    case HeightReference::Kind::Hae:
      return hae;
    case HeightReference::Kind::Msl:
      return hae_to_msl(hae, require_undulation(ctx, lat, lon));
    case HeightReference::Kind::Agl:
      return hae_to_agl(hae, ground_hae_at(ctx, target.surface(), lat, lon));
    case HeightReference::Kind::Baro:
      if (!ctx.calibration)
        throw Error(ErrorCode::UnsupportedPath,
                    "barometric target requires a calibration point; no "
                    "atmosphere-model fallback exists");
      return hae - baro_level_hae(*ctx.calibration, target);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown height reference");
}

}  // namespace

Height convert(const Height& height, const HeightReference& target,
               const ConversionContext& ctx, double lat, double lon) {
  if (height.reference == target) return height;
  const double hae = to_hae(height, ctx, lat, lon);
  return Height{from_hae(hae, target, ctx, lat, lon), target};
}

}  // namespace haekit
