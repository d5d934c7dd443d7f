#pragma once

#include <Eigen/Core>

namespace haekit {

double mean(const Eigen::Ref<const Eigen::ArrayXd>& x);

/// Sample standard deviation (n-1 denominator). Returns 0 for n < 2.
double sample_sd(const Eigen::Ref<const Eigen::ArrayXd>& x);

/// Linear-interpolated quantile at h = (n-1)p (the R type-7 rule, also the
/// numpy default). p must lie in [0, 1]; x must be nonempty.
double quantile(const Eigen::Ref<const Eigen::ArrayXd>& x, double p);

/// Adjusted Fisher-Pearson skewness n^2/((n-1)(n-2)) * m3 / s^3.
/// Returns 0 when n < 3 or the sample is constant.
double skewness(const Eigen::Ref<const Eigen::ArrayXd>& x);

/// Bias-adjusted excess kurtosis,
/// n(n+1)/((n-1)(n-2)(n-3)) * sum((x-mean)^4)/s^4 - 3(n-1)^2/((n-2)(n-3)).
/// Returns 0 when n < 4 or the sample is constant.
double excess_kurtosis(const Eigen::Ref<const Eigen::ArrayXd>& x);

}  // namespace haekit
