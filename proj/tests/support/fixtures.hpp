// Synthetic datasets shared by the unit and acceptance suites. Everything is
// generated in-process from fixed seeds; no files ship with the repository.
#pragma once

#include "haekit/geoid.hpp"
#include "haekit/logstats.hpp"
#include "haekit/rng.hpp"
#include "haekit/terrain.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace fixtures {

/// Standard normal deviate by Box-Muller; deterministic for a given stream.
inline double gaussian(haekit::Xorshift64Star& rng) {
  double u1 = rng.next_double();
  while (u1 <= 0.0) u1 = rng.next_double();
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// 5x5 undulation patch whose center cell (22.308, 113.918) holds exactly
/// -3.1 m, with a gentle tilt elsewhere.
inline haekit::GeoidGrid hkia_geoid() {
  haekit::GeoidGrid grid;
  grid.name = "synthetic-hkia";
  grid.geom = {22.108, 113.718, 0.1, 0.1, 5, 5};
  grid.values.resize(5, 5);
  for (Eigen::Index r = 0; r < 5; ++r)
    for (Eigen::Index c = 0; c < 5; ++c)
      grid.values(r, c) = -3.1 + 0.25 * (static_cast<double>(r) - 2) +
                          0.2 * (static_cast<double>(c) - 2);
  return grid;
}

/// Matching 5x5 MSL terrain patch: exactly 4.0 m at the geoid's center cell,
/// rising away from it.
inline haekit::TerrainRaster hkia_dem() {
  haekit::TerrainRaster raster;
  raster.surface_kind = haekit::SurfaceKind::DTM;
  raster.vertical_ref = haekit::HeightReference::msl("HKPD");
  raster.geom = {22.108, 113.718, 0.1, 0.1, 5, 5};
  raster.values.resize(5, 5);
  for (Eigen::Index r = 0; r < 5; ++r)
    for (Eigen::Index c = 0; c < 5; ++c) {
      const double dr = static_cast<double>(r) - 2, dc = static_cast<double>(c) - 2;
      raster.values(r, c) = 4.0 + 3.0 * (dr * dr + dc * dc);
    }
  return raster;
}

/// 512x512 HAE raster with four well-separated altitude modes in fixed pixel
/// counts (262144 total): two dominant mid strata flanked by sparse ground
/// and tower satellites. The weights keep the wcss drops balanced so the
/// elbow lands at k=4 (a dominant low mode would let one cut soak up the
/// variance and pull the knee to 2), and the top mode sits wholly inside the
/// 200-300 band.
inline haekit::TerrainRaster four_mode_raster(std::uint64_t seed = 20260814) {
  constexpr Eigen::Index kSide = 512;
  const std::int64_t counts[4] = {7864, 123208, 123208, 7864};
  const double mu[4] = {2.5, 113.2, 148.2, 258.9};
  const double sigma[4] = {0.8, 6.0, 6.0, 4.0};

  haekit::Xorshift64Star rng(seed);
  std::vector<double> values;
  values.reserve(kSide * kSide);
  for (int m = 0; m < 4; ++m)
    for (std::int64_t i = 0; i < counts[m]; ++i)
      values.push_back(mu[m] + sigma[m] * gaussian(rng));
  for (std::size_t i = values.size() - 1; i > 0; --i)
    std::swap(values[i], values[rng.next_below(i + 1)]);

  haekit::TerrainRaster raster;
  raster.surface_kind = haekit::SurfaceKind::DTM;
  raster.vertical_ref = haekit::HeightReference::hae();
  raster.geom = {22.7, 113.8, -0.0002, 0.0002, kSide, kSide};
  raster.values.resize(kSide, kSide);
  for (Eigen::Index r = 0; r < kSide; ++r)
    for (Eigen::Index c = 0; c < kSide; ++c)
      raster.values(r, c) = values[static_cast<std::size_t>(r) * kSide + c];
  return raster;
}

/// Telemetry with a known per-segment pad bias and injected Gaussian baro
/// drift. RTK carries the true profile; the first window_n samples of each
/// segment are static pad readings (bias only, no drift) so the window mean
/// recovers the bias exactly.
inline std::vector<haekit::FlightLogRecord> synthetic_log(std::uint64_t seed,
                                                          int n_segments = 10,
                                                          int per_segment = 1000,
                                                          double drift_sigma = 4.0,
                                                          int window_n = 10) {
  haekit::Xorshift64Star rng(seed);
  std::vector<haekit::FlightLogRecord> records;
  records.reserve(static_cast<std::size_t>(n_segments) * per_segment);
  for (int s = 0; s < n_segments; ++s) {
    const double bias = rng.uniform(-15.0, 15.0);
    for (int i = 0; i < per_segment; ++i) {
      const double t = static_cast<double>(i);
      double truth = 0.0;  // climb, cruise, descend
      const double climb_end = 0.2 * per_segment, descend_start = 0.8 * per_segment;
      if (t < climb_end)
        truth = 120.0 * t / climb_end;
      else if (t < descend_start)
        truth = 120.0;
      else
        truth = 120.0 * (per_segment - 1 - t) / (per_segment - 1 - descend_start);
      haekit::FlightLogRecord rec;
      rec.t_s = t;
      rec.segment_id = "flight-" + std::to_string(s + 1);
      rec.rtk_hae_m = truth;
      rec.baro_alt_m = truth + bias + (i < window_n ? 0.0 : drift_sigma * gaussian(rng));
      rec.epv_m = 0.45 + 0.1 * rng.next_double();
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace fixtures
