#pragma once

#include <optional>
#include <string>

namespace haekit {

struct GeoidGrid;
struct TerrainRaster;

/// ICAO standard-atmosphere constants, dry air.
inline constexpr double kDryAirGasConstant = 287.05287;  // J/(kg K)
inline constexpr double kStandardGravity = 9.80665;      // m/s^2
inline constexpr double kStandardPressureHpa = 1013.25;  // QNE setting
inline constexpr double kCelsiusToKelvin = 273.15;

/// Rule-of-thumb slope near sea level: one hPa is roughly 8.3 m.
inline constexpr double kMetersPerHpa = 8.3;

enum class SurfaceKind { DTM, DSM };
enum class QCode { QNH, QFE, QNE };

std::string to_string(SurfaceKind kind);
std::string to_string(QCode code);

/// Tagged vertical datum: ellipsoidal (HAE), orthometric (MSL over a named
/// datum), above-ground (AGL over a DTM or DSM), or barometric (Q-code plus
/// the altimeter reference pressure). QNE always pins 1013.25 hPa.
class HeightReference {
 public:
  enum class Kind { Hae, Msl, Agl, Baro };

  static HeightReference hae();
  static HeightReference msl(std::string datum);
  static HeightReference agl(SurfaceKind surface);
  static HeightReference baro(QCode code, double ref_pressure_hpa);
  static HeightReference baro_qne();

  Kind kind() const { return kind_; }
  const std::string& datum() const { return datum_; }
  SurfaceKind surface() const { return surface_; }
  QCode qcode() const { return qcode_; }
  double ref_pressure_hpa() const { return ref_pressure_hpa_; }

  bool operator==(const HeightReference& other) const;
  bool operator!=(const HeightReference& other) const { return !(*this == other); }

  std::string describe() const;

 private:
  HeightReference() = default;

  Kind kind_ = Kind::Hae;
  std::string datum_;
  SurfaceKind surface_ = SurfaceKind::DTM;
  QCode qcode_ = QCode::QNH;
  double ref_pressure_hpa_ = 0.0;
};

struct Height {
  double value_m = 0.0;
  HeightReference reference = HeightReference::hae();
};

/// Validates |value| < 100 km and finiteness.
Height make_height(double value_m, HeightReference reference);

/// A surveyed point tying the pressure field to the ellipsoid: its geodetic
/// height, the baseline (QNH/QFE-style) pressure observed there, and the
/// layer-mean temperature used for hypsometric conversion.
struct CalibrationPoint {
  double lat = 0.0;
  double lon = 0.0;
  double hae_m = 0.0;
  double pressure_hpa = 0.0;
  double mean_temp_c = 0.0;
};

CalibrationPoint make_calibration_point(double lat, double lon, double hae_m,
                                        double pressure_hpa, double mean_temp_c);

/// Everything a conversion may need. Grids are borrowed, not owned; each
/// conversion path checks for the members it requires and raises
/// MissingContext when one is absent.
struct ConversionContext {
  const GeoidGrid* geoid = nullptr;
  const TerrainRaster* terrain = nullptr;
  std::optional<CalibrationPoint> calibration;
};

double msl_to_hae(double msl_m, double undulation_m);
double hae_to_msl(double hae_m, double undulation_m);
double agl_to_hae(double agl_m, double ground_hae_m);
double hae_to_agl(double hae_m, double ground_hae_m);

/// Signed layer thickness between the p_ref and p pressure levels,
/// (R_d * T_K / g0) * ln(p_ref / p). Positive when p < p_ref (climbing).
/// Pressures must lie in (300, 1100) hPa.
double hypsometric_thickness(double p_ref_hpa, double p_hpa, double mean_temp_c);

/// Geodetic height of an aircraft reporting static pressure, anchored at a
/// calibration point: calib.hae_m + thickness(calib.pressure, aircraft
/// pressure, calib.mean_temp).
double baro_to_hae_calibrated(double aircraft_pressure_hpa,
                              const CalibrationPoint& calib);

/// Linear QNH-altitude transfer: aircraft_alt - calib_alt + calib_hae.
double qnh_offset_to_hae(double aircraft_qnh_alt_m, double calib_qnh_alt_m,
                         double calib_hae_m);

/// (qnh - pressure) * 8.3, the coarse empirical pressure-to-MSL rule.
double empirical_pressure_to_msl(double pressure_hpa, double qnh_hpa);

/// Hub dispatcher: converts through HAE regardless of source/target pair.
/// Identical source and target references short-circuit to the input.
///
/// A Baro-referenced Height carries the hypsometric altitude above its
/// reference pressure level, evaluated at the calibration temperature; both
/// Baro legs therefore need ctx.calibration (source leg missing it raises
/// MissingContext, target leg raises UnsupportedPath since no atmosphere
/// fallback exists). MSL legs need ctx.geoid; AGL legs need ctx.terrain with
/// the matching surface kind, plus ctx.geoid when the terrain is MSL-valued.
Height convert(const Height& height, const HeightReference& target,
               const ConversionContext& ctx, double lat, double lon);

}  // namespace haekit
