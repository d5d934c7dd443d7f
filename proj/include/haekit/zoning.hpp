#pragma once

#include "haekit/grid.hpp"
#include "haekit/terrain.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace haekit {

struct ClusterModel {
  int k = 0;
  Eigen::ArrayXd centroids;  // strictly ascending
  Eigen::ArrayXi labels;     // per input value, index into centroids
  double wcss = 0.0;
};

/// 1-D k-means. Small inputs are solved exactly by dynamic programming over
/// the sorted values; larger inputs run Lloyd's algorithm with k-means++
/// seeding from a deterministic PRNG (best of 10 restarts, 300 iterations
/// each), then single-cut repositioning to escape midpoint-rule local
/// optima. Equidistant points assign to the lower centroid index; centroids
/// return ascending. k must not exceed the number of distinct values.
ClusterModel kmeans_1d(const Eigen::Ref<const Eigen::ArrayXd>& values, int k,
                       std::uint64_t seed);

/// Elbow rule: the k in 2..k_max-1 maximizing the second difference
/// wcss(k-1) - 2 wcss(k) + wcss(k+1); ties break low. k_max caps at the
/// distinct-value count; constant input yields 1.
int elbow_k(const Eigen::Ref<const Eigen::ArrayXd>& values, int k_max,
            std::uint64_t seed);

/// Half-up rounding to multiples of ten / five (threshold and baseline
/// publication grains).
double round_to_tens(double x);
double round_to_fives(double x);

struct RegionClassification {
  std::vector<int> simple;        // cluster indices, ascending centroids
  std::vector<int> complex_ids;   // remainder, merged into one complex region
};

/// Ascending clusters accumulate area until the fraction threshold is
/// reached; that prefix is simple (at least one cluster), the rest complex.
RegionClassification classify_by_fractions(const std::vector<double>& fractions,
                                           double area_fraction_threshold = 0.85);
RegionClassification classify_regions(const ClusterModel& model,
                                      double area_fraction_threshold = 0.85);

/// Median rounded to fives: the published floor of a simple region.
double baseline_simple(const Eigen::Ref<const Eigen::ArrayXd>& values);

struct ComplexBand {
  double lower_m = 0.0;
  double upper_m = 0.0;
  double baseline_m = 0.0;  // == upper_m
};

/// Interval-aligned bands [k*interval, (k+1)*interval) covering the value
/// range; empty bands are omitted and the topmost band is upper-inclusive so
/// a maximum sitting exactly on a grid line is not orphaned.
std::vector<ComplexBand> complex_bands(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                       double interval_m = 100.0);

/// baseline + 120, the drone-rule operating ceiling over a region floor.
double class_w_ceiling(double baseline_m);

/// baseline + 300, reported as metadata only.
double class_g_ceiling(double baseline_m);

struct RegionStats {
  std::int64_t pixel_count = 0;
  double mean_m = 0.0;
  double std_m = 0.0;
  double q1_m = 0.0;
  double median_m = 0.0;
  double q3_m = 0.0;
  double min_m = 0.0;
  double max_m = 0.0;
  double skew = 0.0;
  double kurtosis = 0.0;  // excess
};

RegionStats region_stats(const Eigen::Ref<const Eigen::ArrayXd>& values);

enum class ZoneCategory { Simple, ComplexBand };

std::string to_string(ZoneCategory category);

struct Zone {
  std::string id;
  ZoneCategory category = ZoneCategory::Simple;
  MaskArray mask;  // true where the pixel belongs to this zone
  std::optional<double> hae_lower_m;  // complex bands only
  std::optional<double> hae_upper_m;
  double baseline_hae_m = 0.0;
  double class_w_ceiling_hae_m = 0.0;
  RegionStats stats;
};

struct ZoningConfig {
  std::optional<int> k;  // fixed cluster count; elbow-selected when absent
  int k_max = 8;
  std::uint64_t seed = 42;
  double area_fraction_threshold = 0.85;
  double interval_m = 100.0;
};

/// Everything the published document needs beyond the zones themselves.
struct ZoningResult {
  std::vector<Zone> zones;
  ClusterModel model;
  std::vector<double> thresholds_hae_m;  // rounded simple-cluster maxima
  int k = 0;                             // cluster count actually used
  ZoningConfig config;
  GridGeometry geom;
};

/// The full partitioning pipeline over an HAE raster: cluster (elbow-selected
/// k unless pinned), classify clusters simple/complex by area, round the
/// simple cluster maxima to tens as thresholds, re-cut pixels at those
/// thresholds into simple regions plus one complex region banded at the
/// interval, then attach baselines, ceilings and stats. Zone masks partition
/// the non-nodata pixels. Deterministic for a given seed.
ZoningResult run_zoning(const TerrainRaster& raster_hae, const ZoningConfig& config);

std::vector<Zone> run_zoning_pipeline(const TerrainRaster& raster_hae,
                                      const ZoningConfig& config);

}  // namespace haekit
