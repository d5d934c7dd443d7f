#include "haekit/capacity.hpp"

#include "haekit/error.hpp"

#include <algorithm>
#include <cmath>

namespace haekit {

double erlang_b(double offered_erlangs, std::int64_t servers) {
  if (!std::isfinite(offered_erlangs) || offered_erlangs < 0.0)
    throw Error(ErrorCode::NegativeLoad, "offered load must be non-negative");
  if (servers < 0)
    throw Error(ErrorCode::InvalidArgument, "server count must be non-negative");
  double e = 1.0;
  for (std::int64_t n = 1; n <= servers; ++n) {
    const double ae = offered_erlangs * e;
    e = ae / (static_cast<double>(n) + ae);
  }
  return e;
}

double max_offered_load(std::int64_t servers, double qos) {
  if (servers < 1)
    throw Error(ErrorCode::InvalidArgument, "need at least one server");
  if (!std::isfinite(qos) || qos <= 0.0 || qos >= 1.0)
    throw Error(ErrorCode::InvalidArgument, "QoS bound must lie in (0, 1)");
  double lo = 0.0;
  double hi = std::max(static_cast<double>(servers) / 2.0, 1.0);
  while (erlang_b(hi, servers) <= qos) {
    lo = hi;
    hi *= 2.0;
  }
  // Far tighter than needed so the feasible side also satisfies
  // erlang_b(A * (1 + 1e-6)) > qos even for sub-Erlang answers.
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, lo); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (erlang_b(mid, servers) <= qos)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double max_throughput(std::int64_t servers, double qos, double holding_time_hr) {
  if (!std::isfinite(holding_time_hr) || holding_time_hr <= 0.0)
    throw Error(ErrorCode::NonPositiveHoldingTime, "holding time must be positive");
  return max_offered_load(servers, qos) / holding_time_hr;
}

CapacityAnalysis analyze_capacity(std::int64_t levels, double qos,
                                  double holding_time_hr) {
  CapacityAnalysis out;
  out.levels = levels;
  out.qos = qos;
  out.holding_time_hr = holding_time_hr;
  out.max_offered_erlangs = max_offered_load(levels, qos);
  if (!std::isfinite(holding_time_hr) || holding_time_hr <= 0.0)
    throw Error(ErrorCode::NonPositiveHoldingTime, "holding time must be positive");
  out.max_throughput_per_hr = out.max_offered_erlangs / holding_time_hr;
  return out;
}

}  // namespace haekit
