#pragma once

#include "haekit/risk.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace haekit {

/// One telemetry sample: barometric altitude against the RTK ellipsoidal
/// truth, plus the receiver's own vertical-uncertainty estimate.
struct FlightLogRecord {
  double t_s = 0.0;
  std::string segment_id;
  double baro_alt_m = 0.0;
  double rtk_hae_m = 0.0;
  double epv_m = 0.0;
};

/// CSV with the exact header `t_s,segment_id,baro_alt_m,rtk_hae_m,epv_m`.
/// Rejects non-finite numerics, negative EPV and time regressions within a
/// segment, reporting the 1-based data-row index.
std::vector<FlightLogRecord> parse_log_csv(std::istream& in);
void write_log_csv(std::ostream& out, const std::vector<FlightLogRecord>& records);

/// Removes each segment's launch-pad bias: the mean of (baro - rtk) over the
/// segment's first window_n records is subtracted from every baro altitude in
/// that segment. Biases below 1 nm are treated as zero, which makes the
/// transform an exact fixed point. RTK and EPV fields are never touched.
std::vector<FlightLogRecord> debias_segments(std::vector<FlightLogRecord> records,
                                             int window_n = 10);

struct ErrorExtraction {
  double sigma_baro_m = 0.0;
  double sigma_hae_m = 0.0;
  std::int64_t n_segments = 0;
  std::int64_t n_records = 0;
  EmpiricalModel residual_histogram;
};

/// Pooled dispersion of the debiased baro-vs-RTK residuals (sigma_baro), the
/// standard deviation of the EPV series (sigma_hae), and a normalized
/// residual histogram with bin width sigma_baro/10 over +-6 sigma. Needs at
/// least 30 records.
ErrorExtraction extract_error_models(const std::vector<FlightLogRecord>& records);

struct DescriptiveStats {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  double range = 0.0;
};

DescriptiveStats descriptive_stats(const Eigen::Ref<const Eigen::ArrayXd>& values);

/// `bin_center_m,density_per_m` rows, one per bin.
void write_histogram_csv(std::ostream& out, const EmpiricalModel& histogram);

}  // namespace haekit
