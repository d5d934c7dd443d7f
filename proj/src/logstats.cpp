#include "haekit/logstats.hpp"

#include "haekit/error.hpp"
#include "haekit/stats.hpp"
#include "io_util.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

namespace haekit {

namespace {

constexpr std::string_view kHeader = "t_s,segment_id,baro_alt_m,rtk_hae_m,epv_m";
constexpr double kNegligibleBiasM = 1e-9;

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void bad_row(std::size_t row, const std::string& why) {
  throw Error(ErrorCode::MalformedRow, "data row " + std::to_string(row) + ": " + why);
}

}  // namespace

std::vector<FlightLogRecord> parse_log_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::MissingColumn, "empty stream, expected log header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    throw Error(ErrorCode::MissingColumn,
                "header must be exactly '" + std::string(kHeader) + "'");

  std::vector<FlightLogRecord> records;
  std::map<std::string, double, std::less<>> last_t;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto fields = split_csv(line);
    if (fields.size() != 5) bad_row(row, "expected 5 comma-separated fields");
    FlightLogRecord rec;
    if (!io::parse_double(fields[0], rec.t_s) || !std::isfinite(rec.t_s))
      bad_row(row, "unparseable or non-finite t_s");
    rec.segment_id = std::string(fields[1]);
    if (rec.segment_id.empty()) bad_row(row, "empty segment_id");
    if (!io::parse_double(fields[2], rec.baro_alt_m) || !std::isfinite(rec.baro_alt_m))
      bad_row(row, "unparseable or non-finite baro_alt_m");
    if (!io::parse_double(fields[3], rec.rtk_hae_m) || !std::isfinite(rec.rtk_hae_m))
      bad_row(row, "unparseable or non-finite rtk_hae_m");
    if (!io::parse_double(fields[4], rec.epv_m) || !std::isfinite(rec.epv_m))
      bad_row(row, "unparseable or non-finite epv_m");
    if (rec.epv_m < 0.0) bad_row(row, "negative epv_m");
    const auto it = last_t.find(rec.segment_id);
    if (it != last_t.end() && rec.t_s < it->second)
      bad_row(row, "time regression within segment '" + rec.segment_id + "'");
    last_t.insert_or_assign(rec.segment_id, rec.t_s);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_log_csv(std::ostream& out, const std::vector<FlightLogRecord>& records) {
  out << kHeader << '\n';
  for (const auto& rec : records) {
    out << io::format_double(rec.t_s) << ',' << rec.segment_id << ','
        << io::format_double(rec.baro_alt_m) << ',' << io::format_double(rec.rtk_hae_m)
        << ',' << io::format_double(rec.epv_m) << '\n';
  }
}

std::vector<FlightLogRecord> debias_segments(std::vector<FlightLogRecord> records,
                                             int window_n) {
  if (window_n < 1)
    throw Error(ErrorCode::InvalidArgument, "debias window must be at least 1");
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_segment;
  for (std::size_t i = 0; i < records.size(); ++i)
    by_segment[records[i].segment_id].push_back(i);
  for (const auto& [segment, idx] : by_segment) {
    if (idx.size() < static_cast<std::size_t>(window_n))
      throw Error(ErrorCode::SegmentTooShort,
                  "segment '" + segment + "' has " + std::to_string(idx.size()) +
                      " records, window needs " + std::to_string(window_n));
    double sum = 0.0;
    for (int i = 0; i < window_n; ++i) {
      const auto& rec = records[idx[static_cast<std::size_t>(i)]];
      sum += rec.baro_alt_m - rec.rtk_hae_m;
    }
    const double bias = sum / static_cast<double>(window_n);
    if (std::abs(bias) <= kNegligibleBiasM) continue;
    for (const std::size_t i : idx) records[i].baro_alt_m -= bias;
  }
  return records;
}

ErrorExtraction extract_error_models(const std::vector<FlightLogRecord>& records) {
  if (records.size() < 30)
    throw Error(ErrorCode::InsufficientData,
                "need at least 30 records, got " + std::to_string(records.size()));
  const auto n = static_cast<Eigen::Index>(records.size());
  Eigen::ArrayXd residuals(n), epv(n);
  std::map<std::string, std::int64_t, std::less<>> segments;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& rec = records[static_cast<std::size_t>(i)];
    residuals(i) = rec.baro_alt_m - rec.rtk_hae_m;
    epv(i) = rec.epv_m;
    ++segments[rec.segment_id];
  }

  ErrorExtraction out;
  out.n_records = n;
  out.n_segments = static_cast<std::int64_t>(segments.size());
  out.sigma_baro_m = sample_sd(residuals);
  out.sigma_hae_m = sample_sd(epv);

  const double center = mean(residuals);
  if (out.sigma_baro_m == 0.0) {
    // Degenerate sample: a single unit-mass spike bin around the common value.
    Eigen::ArrayXd edges(2);
    edges << center - 0.5, center + 0.5;
    out.residual_histogram = std::get<EmpiricalModel>(
        make_empirical(std::move(edges), Eigen::ArrayXd::Constant(1, 1.0)));
    return out;
  }

  const double width = out.sigma_baro_m / 10.0;
  const double lo = center - 6.0 * out.sigma_baro_m;
  constexpr Eigen::Index bins = 120;
  Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(bins);
  std::int64_t in_range = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double offset = (residuals(i) - lo) / width;
    if (offset < 0.0 || offset > static_cast<double>(bins)) continue;
    const auto bin = std::min(static_cast<Eigen::Index>(offset), bins - 1);
    counts(bin) += 1.0;
    ++in_range;
  }
  if (in_range == 0)
    throw Error(ErrorCode::DegenerateModel, "all residuals fall outside +-6 sigma");
  Eigen::ArrayXd edges =
      lo + width * Eigen::ArrayXd::LinSpaced(bins + 1, 0.0, static_cast<double>(bins));
  Eigen::ArrayXd densities = counts / (static_cast<double>(in_range) * width);
  out.residual_histogram = std::get<EmpiricalModel>(
      make_empirical(std::move(edges), std::move(densities)));
  return out;
}

DescriptiveStats descriptive_stats(const Eigen::Ref<const Eigen::ArrayXd>& values) {
  if (values.size() == 0)
    throw Error(ErrorCode::EmptyInput, "descriptive stats of empty sample");
  DescriptiveStats out;
  out.mean = mean(values);
  out.sd = sample_sd(values);
  out.min = values.minCoeff();
  out.max = values.maxCoeff();
  out.median = quantile(values, 0.5);
  out.range = out.max - out.min;
  return out;
}

void write_histogram_csv(std::ostream& out, const EmpiricalModel& histogram) {
  out << "bin_center_m,density_per_m\n";
  for (Eigen::Index i = 0; i < histogram.densities.size(); ++i) {
    const double c = 0.5 * (histogram.bin_edges_m(i) + histogram.bin_edges_m(i + 1));
    out << io::format_double(c) << ',' << io::format_double(histogram.densities(i))
        << '\n';
  }
}

}  // namespace haekit
