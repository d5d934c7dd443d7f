#include "haekit/stats.hpp"

#include "haekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace haekit {

double mean(const Eigen::Ref<const Eigen::ArrayXd>& x) {
  if (x.size() == 0) throw Error(ErrorCode::EmptyInput, "mean of empty sample");
  return x.mean();
}

double sample_sd(const Eigen::Ref<const Eigen::ArrayXd>& x) {
  const Eigen::Index n = x.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "sd of empty sample");
  if (n < 2) return 0.0;
  const double m = x.mean();
  const double ss = (x - m).square().sum();
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double quantile(const Eigen::Ref<const Eigen::ArrayXd>& x, double p) {
  const Eigen::Index n = x.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "quantile probability outside [0, 1]");
  std::vector<double> s(x.data(), x.data() + n);
  std::sort(s.begin(), s.end());
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<Eigen::Index>(std::floor(h));
  const auto hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return s[static_cast<std::size_t>(lo)] +
         frac * (s[static_cast<std::size_t>(hi)] - s[static_cast<std::size_t>(lo)]);
}

double skewness(const Eigen::Ref<const Eigen::ArrayXd>& x) {
  const Eigen::Index n = x.size();
  if (n < 3) return 0.0;
  const double nd = static_cast<double>(n);
  const double m = x.mean();
  const Eigen::ArrayXd d = x - m;
  const double s = std::sqrt(d.square().sum() / (nd - 1.0));
  if (s == 0.0) return 0.0;
  const double m3 = d.cube().sum() / nd;
  return (nd * nd / ((nd - 1.0) * (nd - 2.0))) * m3 / (s * s * s);
}

double excess_kurtosis(const Eigen::Ref<const Eigen::ArrayXd>& x) {
  const Eigen::Index n = x.size();
  if (n < 4) return 0.0;
  const double nd = static_cast<double>(n);
  const double m = x.mean();
  const Eigen::ArrayXd d = x - m;
  const double s2 = d.square().sum() / (nd - 1.0);
  if (s2 == 0.0) return 0.0;
  const double sum4 = d.square().square().sum();
  const double a = nd * (nd + 1.0) / ((nd - 1.0) * (nd - 2.0) * (nd - 3.0));
  const double b = 3.0 * (nd - 1.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
  return a * sum4 / (s2 * s2) - b;
}

}  // namespace haekit
