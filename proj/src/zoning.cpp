#include "haekit/zoning.hpp"

#include "haekit/error.hpp"
#include "haekit/rng.hpp"
#include "haekit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace haekit {

namespace {

constexpr int kMaxLloydIterations = 300;
constexpr int kRestarts = 10;  // best-of-n seeding, standard k-means practice

struct SortedInput {
  std::vector<double> values;  // ascending
  Eigen::Index distinct = 0;
};

SortedInput sort_input(const Eigen::Ref<const Eigen::ArrayXd>& values) {
  SortedInput s;
  s.values.assign(values.data(), values.data() + values.size());
  for (const double v : s.values)
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFiniteValue, "clustering input must be finite");
  std::sort(s.values.begin(), s.values.end());
  for (std::size_t i = 0; i < s.values.size(); ++i)
    if (i == 0 || s.values[i] != s.values[i - 1]) ++s.distinct;
  return s;
}

/// Midpoints between adjacent centroids; values at a midpoint go left.
std::vector<double> midpoints(const std::vector<double>& centroids) {
  std::vector<double> mids(centroids.size() - 1);
  for (std::size_t j = 0; j + 1 < centroids.size(); ++j)
    mids[j] = 0.5 * (centroids[j] + centroids[j + 1]);
  return mids;
}

/// Segment starts per cluster over the sorted array: cluster j spans
/// [cuts[j], cuts[j+1]).
std::vector<std::size_t> segment_cuts(const std::vector<double>& sorted,
                                      const std::vector<double>& centroids) {
  const auto mids = midpoints(centroids);
  std::vector<std::size_t> cuts(centroids.size() + 1, 0);
  cuts.back() = sorted.size();
  for (std::size_t j = 0; j < mids.size(); ++j)
    cuts[j + 1] = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), mids[j]) - sorted.begin());
  return cuts;
}

struct LloydRun {
  std::vector<double> centroids;
  double wcss = 0.0;
};

double segment_wcss(const std::vector<double>& sorted,
                    const std::vector<std::size_t>& cuts,
                    const std::vector<double>& centroids) {
  double wcss = 0.0;
  for (std::size_t j = 0; j < centroids.size(); ++j)
    for (std::size_t i = cuts[j]; i < cuts[j + 1]; ++i) {
      const double d = sorted[i] - centroids[j];
      wcss += d * d;
    }
  return wcss;
}

std::vector<double> seed_kmeanspp(const std::vector<double>& sorted, int k,
                                  Xorshift64Star& rng) {
  const std::size_t n = sorted.size();
  std::vector<double> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(sorted[rng.next_below(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = sorted[i] - centroids[0];
    d2[i] = d * d;
  }
  while (centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (const double d : d2) total += d;
    const double r = rng.next_double() * total;
    double cum = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      cum += d2[i];
      if (cum > r) {
        pick = i;
        break;
      }
    }
    if (pick == n) {
      // Rounding pushed r to the total mass; take the last weighted point.
      for (std::size_t i = n; i-- > 0;)
        if (d2[i] > 0.0) {
          pick = i;
          break;
        }
    }
    const double c = sorted[pick];
    centroids.push_back(c);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = sorted[i] - c;
      d2[i] = std::min(d2[i], d * d);
    }
  }
  std::sort(centroids.begin(), centroids.end());
  return centroids;
}

LloydRun lloyd(const std::vector<double>& sorted, std::vector<double> centroids) {
  const std::size_t k = centroids.size();
  std::vector<double> prefix(sorted.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + sorted[i];

  std::vector<std::size_t> cuts = segment_cuts(sorted, centroids);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    // Rescue empty clusters by reseeding at the point farthest from its
    // current centroid (first such point on ties).
    bool rescued = false;
    for (std::size_t j = 0; j < k; ++j) {
      if (cuts[j + 1] > cuts[j]) continue;
      double best = -1.0;
      std::size_t best_i = 0;
      for (std::size_t jj = 0; jj < k; ++jj)
        for (std::size_t i = cuts[jj]; i < cuts[jj + 1]; ++i) {
          const double d = sorted[i] - centroids[jj];
          if (d * d > best) {
            best = d * d;
            best_i = i;
          }
        }
      centroids[j] = sorted[best_i];
      std::sort(centroids.begin(), centroids.end());
      cuts = segment_cuts(sorted, centroids);
      rescued = true;
      break;
    }
    if (rescued) continue;

    for (std::size_t j = 0; j < k; ++j)
      centroids[j] = (prefix[cuts[j + 1]] - prefix[cuts[j]]) /
                     static_cast<double>(cuts[j + 1] - cuts[j]);
    // Means of ordered segments ascend; the sort only guards against
    // rounding ties so the midpoint search stays well-defined.
    std::sort(centroids.begin(), centroids.end());
    std::vector<std::size_t> next = segment_cuts(sorted, centroids);
    const bool stable = next == cuts;
    cuts = std::move(next);
    if (stable) break;
  }
  const double wcss = segment_wcss(sorted, cuts, centroids);
  return LloydRun{std::move(centroids), wcss};
}

/// Moves each interior cut to the cheapest position between its neighbor
/// cuts, one at a time (prefix-sum segment costs make the scan O(1) per
/// candidate). Returns true when any cut moved strictly downhill. This is
/// the escape hatch for midpoint-rule local optima: a Lloyd fixed point can
/// still have a profitable single-cut move, which this scan always finds.
bool reposition_cuts(const std::vector<double>& prefix1,
                     const std::vector<double>& prefix2,
                     std::vector<std::size_t>& cuts) {
  const auto cost = [&](std::size_t l, std::size_t r) {
    const double s1 = prefix1[r] - prefix1[l];
    const double s2 = prefix2[r] - prefix2[l];
    return s2 - s1 * s1 / static_cast<double>(r - l);
  };
  bool moved = false;
  for (std::size_t j = 1; j + 1 < cuts.size(); ++j) {
    const std::size_t lo = cuts[j - 1], hi = cuts[j + 1];
    std::size_t best_c = cuts[j];
    double best_cost = cost(lo, best_c) + cost(best_c, hi);
    for (std::size_t c = lo + 1; c < hi; ++c) {
      const double candidate = cost(lo, c) + cost(c, hi);
      if (candidate < best_cost) {
        best_cost = candidate;
        best_c = c;
      }
    }
    if (best_c != cuts[j]) {
      cuts[j] = best_c;
      moved = true;
    }
  }
  return moved;
}

constexpr std::size_t kExactCutoff = 512;  // below this the k n^2 DP is cheap

/// Optimal contiguous partition by dynamic programming on prefix sums.
/// Optimal 1-D clusters are contiguous in sorted order, so this is the exact
/// k-means solution; quadratic in n, hence gated to small inputs. Ties in
/// the cut search break toward the shorter left segment.
LloydRun exact_partition(const std::vector<double>& sorted, int k) {
  const std::size_t n = sorted.size();
  const std::size_t kk = static_cast<std::size_t>(k);
  std::vector<double> prefix1(n + 1, 0.0), prefix2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix1[i + 1] = prefix1[i] + sorted[i];
    prefix2[i + 1] = prefix2[i] + sorted[i] * sorted[i];
  }
  const auto cost = [&](std::size_t l, std::size_t r) {
    const double s1 = prefix1[r] - prefix1[l];
    const double s2 = prefix2[r] - prefix2[l];
    return std::max(0.0, s2 - s1 * s1 / static_cast<double>(r - l));
  };

  std::vector<double> prev(n + 1, 0.0), cur(n + 1, 0.0);
  std::vector<std::vector<std::size_t>> arg(kk + 1, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t i = 1; i <= n; ++i) prev[i] = cost(0, i);
  for (std::size_t j = 2; j <= kk; ++j) {
    for (std::size_t i = j; i <= n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_m = j - 1;
      for (std::size_t m = j - 1; m < i; ++m) {
        const double v = prev[m] + cost(m, i);
        if (v < best) {
          best = v;
          best_m = m;
        }
      }
      cur[i] = best;
      arg[j][i] = best_m;
    }
    std::swap(prev, cur);
  }

  std::vector<std::size_t> cuts(kk + 1, 0);
  cuts[kk] = n;
  for (std::size_t j = kk; j >= 2; --j) cuts[j - 1] = arg[j][cuts[j]];

  LloydRun run;
  run.centroids.resize(kk);
  for (std::size_t j = 0; j < kk; ++j)
    run.centroids[j] = (prefix1[cuts[j + 1]] - prefix1[cuts[j]]) /
                       static_cast<double>(cuts[j + 1] - cuts[j]);
  run.wcss = segment_wcss(sorted, cuts, run.centroids);
  return run;
}

/// Alternates cut repositioning with Lloyd re-convergence until neither
/// improves the objective. Deterministic, and wcss is non-increasing, so the
/// restart winner only ever gets better.
LloydRun polish(const std::vector<double>& sorted, LloydRun run) {
  std::vector<double> prefix1(sorted.size() + 1, 0.0), prefix2(sorted.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    prefix1[i + 1] = prefix1[i] + sorted[i];
    prefix2[i + 1] = prefix2[i] + sorted[i] * sorted[i];
  }
  for (int round = 0; round < kMaxLloydIterations; ++round) {
    std::vector<std::size_t> cuts = segment_cuts(sorted, run.centroids);
    if (!reposition_cuts(prefix1, prefix2, cuts)) break;
    std::vector<double> centroids(run.centroids.size());
    for (std::size_t j = 0; j < centroids.size(); ++j)
      centroids[j] = (prefix1[cuts[j + 1]] - prefix1[cuts[j]]) /
                     static_cast<double>(cuts[j + 1] - cuts[j]);
    LloydRun next = lloyd(sorted, std::move(centroids));
    if (next.wcss >= run.wcss) break;
    run = std::move(next);
  }
  return run;
}

}  // namespace

ClusterModel kmeans_1d(const Eigen::Ref<const Eigen::ArrayXd>& values, int k,
                       std::uint64_t seed) {
  if (values.size() == 0)
    throw Error(ErrorCode::EmptyInput, "clustering needs at least one value");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "cluster count must be positive");
  const SortedInput input = sort_input(values);
  if (static_cast<Eigen::Index>(k) > input.distinct)
    throw Error(ErrorCode::KTooLarge,
                "k exceeds the distinct-value count " + std::to_string(input.distinct));

  LloydRun best;
  if (input.values.size() <= kExactCutoff) {
    best = exact_partition(input.values, k);
  } else {
    Xorshift64Star rng(seed);
    best.wcss = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < kRestarts; ++restart) {
      LloydRun run = lloyd(input.values, seed_kmeanspp(input.values, k, rng));
      if (run.wcss < best.wcss) best = std::move(run);
    }
    best = polish(input.values, std::move(best));
  }

  ClusterModel model;
  model.k = k;
  model.centroids =
      Eigen::Map<const Eigen::ArrayXd>(best.centroids.data(), k);
  model.wcss = best.wcss;
  const auto mids = midpoints(best.centroids);
  model.labels.resize(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    model.labels(i) = static_cast<int>(
        std::lower_bound(mids.begin(), mids.end(), values(i)) - mids.begin());
  return model;
}

int elbow_k(const Eigen::Ref<const Eigen::ArrayXd>& values, int k_max,
            std::uint64_t seed) {
  if (k_max < 3)
    throw Error(ErrorCode::InvalidArgument, "elbow selection needs k_max >= 3");
  if (values.size() == 0)
    throw Error(ErrorCode::EmptyInput, "clustering needs at least one value");
  const SortedInput input = sort_input(values);
  const int cap = static_cast<int>(
      std::min<Eigen::Index>(k_max, input.distinct));
  if (cap <= 2) return cap;

  std::vector<double> wcss(static_cast<std::size_t>(cap) + 1, 0.0);
  for (int k = 1; k <= cap; ++k)
    wcss[static_cast<std::size_t>(k)] = kmeans_1d(values, k, seed).wcss;

  int best_k = 2;
  double best_curv = -std::numeric_limits<double>::infinity();
  for (int k = 2; k <= cap - 1; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double curv = wcss[kk - 1] - 2.0 * wcss[kk] + wcss[kk + 1];
    if (curv > best_curv) {
      best_curv = curv;
      best_k = k;
    }
  }
  return best_k;
}

double round_to_tens(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "cannot round non-finite");
  return std::floor(x / 10.0 + 0.5) * 10.0;
}

double round_to_fives(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "cannot round non-finite");
  return std::floor(x / 5.0 + 0.5) * 5.0;
}

RegionClassification classify_by_fractions(const std::vector<double>& fractions,
                                           double area_fraction_threshold) {
  if (fractions.empty())
    throw Error(ErrorCode::EmptyInput, "no clusters to classify");
  if (!(area_fraction_threshold > 0.0))
    throw Error(ErrorCode::InvalidArgument, "area fraction threshold must be positive");
  RegionClassification out;
  double cum = 0.0;
  std::size_t i = 0;
  for (; i < fractions.size(); ++i) {
    out.simple.push_back(static_cast<int>(i));
    cum += fractions[i];
    if (cum >= area_fraction_threshold) {
      ++i;
      break;
    }
  }
  for (; i < fractions.size(); ++i) out.complex_ids.push_back(static_cast<int>(i));
  return out;
}

RegionClassification classify_regions(const ClusterModel& model,
                                      double area_fraction_threshold) {
  if (model.k < 1 || model.labels.size() == 0)
    throw Error(ErrorCode::EmptyInput, "empty cluster model");
  std::vector<double> fractions(static_cast<std::size_t>(model.k), 0.0);
  for (Eigen::Index i = 0; i < model.labels.size(); ++i)
    fractions[static_cast<std::size_t>(model.labels(i))] += 1.0;
  const auto total = static_cast<double>(model.labels.size());
  for (double& f : fractions) f /= total;
  return classify_by_fractions(fractions, area_fraction_threshold);
}

double baseline_simple(const Eigen::Ref<const Eigen::ArrayXd>& values) {
  if (values.size() == 0)
    throw Error(ErrorCode::EmptyInput, "baseline of empty region");
  return round_to_fives(quantile(values, 0.5));
}

std::vector<ComplexBand> complex_bands(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                       double interval_m) {
  if (values.size() == 0)
    throw Error(ErrorCode::EmptyInput, "no values to band");
  if (!std::isfinite(interval_m) || interval_m <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "band interval must be positive");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  auto k_lo = static_cast<std::int64_t>(std::floor(lo / interval_m));
  const auto k_hi = static_cast<std::int64_t>(std::ceil(hi / interval_m));
  // A maximum sitting exactly on a grid line collapses the range; keep one
  // band ending at it.
  if (k_lo == k_hi) --k_lo;

  std::vector<ComplexBand> bands;
  for (std::int64_t kb = k_lo; kb < k_hi; ++kb) {
    ComplexBand band;
    band.lower_m = static_cast<double>(kb) * interval_m;
    band.upper_m = static_cast<double>(kb + 1) * interval_m;
    band.baseline_m = band.upper_m;
    const bool topmost = kb == k_hi - 1;
    bool occupied = false;
    for (Eigen::Index i = 0; i < values.size() && !occupied; ++i) {
      const double v = values(i);
      occupied = v >= band.lower_m && (v < band.upper_m || (topmost && v == band.upper_m));
    }
    if (occupied) bands.push_back(band);
  }
  return bands;
}

double class_w_ceiling(double baseline_m) {
  if (!std::isfinite(baseline_m))
    throw Error(ErrorCode::InvalidArgument, "baseline must be finite");
  return baseline_m + 120.0;
}

double class_g_ceiling(double baseline_m) {
  if (!std::isfinite(baseline_m))
    throw Error(ErrorCode::InvalidArgument, "baseline must be finite");
  return baseline_m + 300.0;
}

RegionStats region_stats(const Eigen::Ref<const Eigen::ArrayXd>& values) {
  if (values.size() == 0)
    throw Error(ErrorCode::EmptyInput, "stats of empty region");
  RegionStats out;
  out.pixel_count = values.size();
  out.mean_m = mean(values);
  out.std_m = sample_sd(values);
  out.q1_m = quantile(values, 0.25);
  out.median_m = quantile(values, 0.5);
  out.q3_m = quantile(values, 0.75);
  out.min_m = values.minCoeff();
  out.max_m = values.maxCoeff();
  out.skew = skewness(values);
  out.kurtosis = excess_kurtosis(values);
  return out;
}

std::string to_string(ZoneCategory category) {
  return category == ZoneCategory::Simple ? "simple" : "complex-band";
}

ZoningResult run_zoning(const TerrainRaster& raster_hae, const ZoningConfig& config) {
  if (raster_hae.vertical_ref.kind() != HeightReference::Kind::Hae)
    throw Error(ErrorCode::InvalidArgument,
                "zoning requires an HAE-referenced raster; lift MSL rasters first");
  if (!std::isfinite(config.interval_m) || config.interval_m <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "band interval must be positive");
  if (config.k && *config.k < 1)
    throw Error(ErrorCode::InvalidArgument, "cluster count must be positive");

  const GridGeometry& geom = raster_hae.geom;
  std::vector<double> flat_values;
  std::vector<Eigen::Index> flat_rows, flat_cols;
  for (Eigen::Index r = 0; r < geom.nrows; ++r)
    for (Eigen::Index c = 0; c < geom.ncols; ++c) {
      if (raster_hae.is_nodata(r, c)) continue;
      flat_values.push_back(raster_hae.values(r, c));
      flat_rows.push_back(r);
      flat_cols.push_back(c);
    }
  if (flat_values.empty())
    throw Error(ErrorCode::EmptyInput, "raster holds no data pixels");
  const auto m = static_cast<Eigen::Index>(flat_values.size());
  const Eigen::Map<const Eigen::ArrayXd> values(flat_values.data(), m);

  ZoningResult result;
  result.config = config;
  result.geom = geom;
  result.k = config.k ? *config.k : elbow_k(values, config.k_max, config.seed);
  result.model = kmeans_1d(values, result.k, config.seed);
  const RegionClassification cls =
      classify_regions(result.model, config.area_fraction_threshold);

  // Published thresholds: each simple cluster's maximum, rounded to tens.
  for (const int cid : cls.simple) {
    double cluster_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i)
      if (result.model.labels(i) == cid) cluster_max = std::max(cluster_max, values(i));
    result.thresholds_hae_m.push_back(round_to_tens(cluster_max));
  }

  // Re-cut pixels at the published thresholds: simple region i spans
  // (T_{i-1}, T_i]; everything above the last threshold is the complex
  // region, or folds into the last simple region when no cluster was
  // classified complex.
  const std::size_t n_simple = result.thresholds_hae_m.size();
  const bool has_complex = !cls.complex_ids.empty();
  std::vector<std::vector<Eigen::Index>> members(n_simple + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double v = values(i);
    std::size_t region = n_simple;  // complex by default
    for (std::size_t t = 0; t < n_simple; ++t)
      if (v <= result.thresholds_hae_m[t]) {
        region = t;
        break;
      }
    if (region == n_simple && !has_complex) region = n_simple - 1;
    members[region].push_back(i);
  }

  auto make_mask = [&](const std::vector<Eigen::Index>& idx) {
    MaskArray mask = MaskArray::Constant(geom.nrows, geom.ncols, false);
    for (const Eigen::Index i : idx) mask(flat_rows[static_cast<std::size_t>(i)],
                                          flat_cols[static_cast<std::size_t>(i)]) = true;
    return mask;
  };
  auto gather = [&](const std::vector<Eigen::Index>& idx) {
    Eigen::ArrayXd vals(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) vals(static_cast<Eigen::Index>(j)) = values(idx[j]);
    return vals;
  };

  int simple_seq = 0;
  for (std::size_t t = 0; t < n_simple; ++t) {
    if (members[t].empty()) continue;
    const Eigen::ArrayXd vals = gather(members[t]);
    Zone zone;
    zone.id = "simple-" + std::to_string(++simple_seq);
    zone.category = ZoneCategory::Simple;
    zone.mask = make_mask(members[t]);
    zone.baseline_hae_m = baseline_simple(vals);
    zone.class_w_ceiling_hae_m = class_w_ceiling(zone.baseline_hae_m);
    zone.stats = region_stats(vals);
    result.zones.push_back(std::move(zone));
  }

  if (has_complex && !members[n_simple].empty()) {
    const Eigen::ArrayXd complex_vals = gather(members[n_simple]);
    const std::vector<ComplexBand> bands =
        complex_bands(complex_vals, config.interval_m);
    int band_seq = 0;
    for (std::size_t b = 0; b < bands.size(); ++b) {
      const ComplexBand& band = bands[b];
      const bool topmost = b + 1 == bands.size();
      std::vector<Eigen::Index> idx;
      for (const Eigen::Index i : members[n_simple]) {
        const double v = values(i);
        if (v >= band.lower_m && (v < band.upper_m || (topmost && v == band.upper_m)))
          idx.push_back(i);
      }
      if (idx.empty()) continue;
      Zone zone;
      zone.id = "complex-band-" + std::to_string(++band_seq);
      zone.category = ZoneCategory::ComplexBand;
      zone.mask = make_mask(idx);
      zone.hae_lower_m = band.lower_m;
      zone.hae_upper_m = band.upper_m;
      zone.baseline_hae_m = band.baseline_m;
      zone.class_w_ceiling_hae_m = class_w_ceiling(band.baseline_m);
      zone.stats = region_stats(gather(idx));
      result.zones.push_back(std::move(zone));
    }
  }
  return result;
}

std::vector<Zone> run_zoning_pipeline(const TerrainRaster& raster_hae,
                                      const ZoningConfig& config) {
  return run_zoning(raster_hae, config).zones;
}

}  // namespace haekit
