#pragma once

#include <cstdint>

namespace haekit {

/// Erlang-B blocking probability for offered load A over N servers, via the
/// stable recursion E_0 = 1, E_n = A E_{n-1} / (n + A E_{n-1}).
double erlang_b(double offered_erlangs, std::int64_t servers);

/// Largest offered load whose blocking stays at or below qos: bracket
/// doubling from N/2 then bisection, returning the feasible side.
double max_offered_load(std::int64_t servers, double qos);

/// max_offered_load converted to flights per hour by the mission holding time.
double max_throughput(std::int64_t servers, double qos, double holding_time_hr);

struct CapacityAnalysis {
  std::int64_t levels = 0;
  double qos = 0.0;
  double max_offered_erlangs = 0.0;
  double holding_time_hr = 0.0;
  double max_throughput_per_hr = 0.0;
};

CapacityAnalysis analyze_capacity(std::int64_t levels, double qos,
                                  double holding_time_hr);

}  // namespace haekit
