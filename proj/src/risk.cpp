#include "haekit/risk.hpp"

#include "haekit/error.hpp"

#include <algorithm>
#include <cmath>

namespace haekit {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kSupportSigmas = 8.0;

void validate_gaussian(const GaussianModel& g) {
  if (!std::isfinite(g.mu_m) || !std::isfinite(g.sigma_m) || g.sigma_m <= 0.0)
    throw Error(ErrorCode::DegenerateModel, "Gaussian sigma must be finite positive");
}

void validate_empirical(const EmpiricalModel& e) {
  const Eigen::Index n = e.densities.size();
  if (n < 1 || e.bin_edges_m.size() != n + 1)
    throw Error(ErrorCode::DegenerateModel,
                "empirical model needs n densities and n+1 edges");
  double mass = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lo = e.bin_edges_m(i), hi = e.bin_edges_m(i + 1);
    const double d = e.densities(i);
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi <= lo)
      throw Error(ErrorCode::DegenerateModel, "bin edges must ascend");
    if (!std::isfinite(d) || d < 0.0)
      throw Error(ErrorCode::DegenerateModel, "densities must be non-negative");
    mass += d * (hi - lo);
  }
  if (!std::isfinite(e.bin_edges_m(n)))
    throw Error(ErrorCode::DegenerateModel, "bin edges must be finite");
  if (std::abs(mass - 1.0) > 1e-6)
    throw Error(ErrorCode::DegenerateModel, "densities must integrate to 1");
}

double gaussian_pdf(double z, double mu, double sigma) {
  const double t = (z - mu) / sigma;
  return std::exp(-0.5 * t * t) / (sigma * kSqrt2Pi);
}

struct Support {
  double lo;
  double hi;
};

Support support_of(const ErrorModel& m) {
  if (const auto* g = std::get_if<GaussianModel>(&m))
    return {g->mu_m - kSupportSigmas * g->sigma_m, g->mu_m + kSupportSigmas * g->sigma_m};
  const auto& e = std::get<EmpiricalModel>(m);
  return {e.bin_edges_m(0), e.bin_edges_m(e.bin_edges_m.size() - 1)};
}

/// Upper-tail probability P(Z >= x) without cancellation for large x.
double normal_upper_tail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

/// CDF of a model, exact per kind (piecewise linear for histograms).
double model_cdf(const ErrorModel& m, double z) {
  if (const auto* g = std::get_if<GaussianModel>(&m))
    return normal_cdf((z - g->mu_m) / g->sigma_m);
  const auto& e = std::get<EmpiricalModel>(m);
  const Eigen::Index n = e.densities.size();
  if (z <= e.bin_edges_m(0)) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lo = e.bin_edges_m(i), hi = e.bin_edges_m(i + 1);
    if (z >= hi) {
      acc += e.densities(i) * (hi - lo);
    } else {
      acc += e.densities(i) * (z - lo);
      break;
    }
  }
  return std::min(acc, 1.0);
}

}  // namespace

ErrorModel make_gaussian(double mu_m, double sigma_m) {
  GaussianModel g{mu_m, sigma_m};
  validate_gaussian(g);
  return g;
}

ErrorModel make_empirical(Eigen::ArrayXd bin_edges_m, Eigen::ArrayXd densities) {
  EmpiricalModel e{std::move(bin_edges_m), std::move(densities)};
  validate_empirical(e);
  return e;
}

double density_at(const ErrorModel& model, double z_m) {
  if (const auto* g = std::get_if<GaussianModel>(&model))
    return gaussian_pdf(z_m, g->mu_m, g->sigma_m);
  const auto& e = std::get<EmpiricalModel>(model);
  const Eigen::Index n = e.densities.size();
  if (z_m < e.bin_edges_m(0) || z_m > e.bin_edges_m(n)) return 0.0;
  // Binary search for the bin; the topmost bin is right-inclusive.
  Eigen::Index lo = 0, hi = n - 1;
  while (lo < hi) {
    const Eigen::Index mid = (lo + hi + 1) / 2;
    if (z_m >= e.bin_edges_m(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return e.densities(lo);
}

double model_mean(const ErrorModel& model) {
  if (const auto* g = std::get_if<GaussianModel>(&model)) return g->mu_m;
  const auto& e = std::get<EmpiricalModel>(model);
  double mean = 0.0;
  for (Eigen::Index i = 0; i < e.densities.size(); ++i) {
    const double w = e.bin_edges_m(i + 1) - e.bin_edges_m(i);
    const double center = 0.5 * (e.bin_edges_m(i) + e.bin_edges_m(i + 1));
    mean += e.densities(i) * w * center;
  }
  return mean;
}

double model_sigma(const ErrorModel& model) {
  if (const auto* g = std::get_if<GaussianModel>(&model)) return g->sigma_m;
  const auto& e = std::get<EmpiricalModel>(model);
  const double mean = model_mean(model);
  double var = 0.0;
  for (Eigen::Index i = 0; i < e.densities.size(); ++i) {
    const double w = e.bin_edges_m(i + 1) - e.bin_edges_m(i);
    const double center = 0.5 * (e.bin_edges_m(i) + e.bin_edges_m(i + 1));
    // Mass uniform within a bin contributes w^2/12 beyond its center offset.
    var += e.densities(i) * w * ((center - mean) * (center - mean) + w * w / 12.0);
  }
  return std::sqrt(std::max(var, 0.0));
}

double overlap_density_quadrature(const ErrorModel& e1, const ErrorModel& e2,
                                  double separation_m) {
  const Support s1 = support_of(e1);
  const Support s2 = support_of(e2);
  const double lo = std::max(s1.lo, s2.lo + separation_m);
  const double hi = std::min(s1.hi, s2.hi + separation_m);
  if (hi <= lo) return 0.0;
  const double sigma = std::min(model_sigma(e1), model_sigma(e2));
  if (sigma <= 0.0)
    throw Error(ErrorCode::DegenerateModel, "zero-width model in quadrature");
  const double step = sigma / 100.0;
  const auto n = static_cast<std::int64_t>(std::ceil((hi - lo) / step));
  const double h = (hi - lo) / static_cast<double>(n);
  double acc = 0.5 * (density_at(e1, lo) * density_at(e2, lo - separation_m) +
                      density_at(e1, hi) * density_at(e2, hi - separation_m));
  for (std::int64_t i = 1; i < n; ++i) {
    const double z = lo + h * static_cast<double>(i);
    acc += density_at(e1, z) * density_at(e2, z - separation_m);
  }
  return acc * h;
}

double overlap_density(const ErrorModel& e1, const ErrorModel& e2, double separation_m) {
  const auto* g1 = std::get_if<GaussianModel>(&e1);
  const auto* g2 = std::get_if<GaussianModel>(&e2);
  if (g1 != nullptr && g2 != nullptr) {
    validate_gaussian(*g1);
    validate_gaussian(*g2);
    const double var = g1->sigma_m * g1->sigma_m + g2->sigma_m * g2->sigma_m;
    const double mu_d = g1->mu_m - g2->mu_m;
    const double d = separation_m - mu_d;
    return std::exp(-0.5 * d * d / var) / (std::sqrt(var) * kSqrt2Pi);
  }
  if (g1 != nullptr)
    validate_gaussian(*g1);
  else
    validate_empirical(std::get<EmpiricalModel>(e1));
  if (g2 != nullptr)
    validate_gaussian(*g2);
  else
    validate_empirical(std::get<EmpiricalModel>(e2));
  return overlap_density_quadrature(e1, e2, separation_m);
}

double tail_probability(const ErrorModel& e1, const ErrorModel& e2, double separation_m) {
  if (!std::isfinite(separation_m) || separation_m < 0.0)
    throw Error(ErrorCode::InvalidArgument, "separation must be non-negative");
  const auto* g1 = std::get_if<GaussianModel>(&e1);
  const auto* g2 = std::get_if<GaussianModel>(&e2);
  if (g1 != nullptr && g2 != nullptr) {
    validate_gaussian(*g1);
    validate_gaussian(*g2);
    const double sigma_d = std::hypot(g1->sigma_m, g2->sigma_m);
    const double mu_d = g1->mu_m - g2->mu_m;
    return normal_upper_tail((separation_m - mu_d) / sigma_d) +
           normal_upper_tail((separation_m + mu_d) / sigma_d);
  }
  // P(D >= S) = ∫ f1(z) F2(z - S) dz and the mirrored lower tail, with the
  // inner CDF exact; a single quadrature pass per tail.
  const Support s1 = support_of(e1);
  const double sigma = std::min(model_sigma(e1), model_sigma(e2));
  if (sigma <= 0.0)
    throw Error(ErrorCode::DegenerateModel, "zero-width model in quadrature");
  const double step = sigma / 100.0;
  const auto n = static_cast<std::int64_t>(std::ceil((s1.hi - s1.lo) / step));
  const double h = (s1.hi - s1.lo) / static_cast<double>(n);
  double upper = 0.0, lower = 0.0;
  for (std::int64_t i = 0; i <= n; ++i) {
    const double z = s1.lo + h * static_cast<double>(i);
    const double weight = (i == 0 || i == n) ? 0.5 : 1.0;
    const double f1 = density_at(e1, z);
    upper += weight * f1 * model_cdf(e2, z - separation_m);
    lower += weight * f1 * (1.0 - model_cdf(e2, z + separation_m));
  }
  return std::min((upper + lower) * h, 1.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

namespace {

/// Rational lower-tail/central initial estimate of the standard-normal
/// quantile for p in (0, 0.5].
double quantile_estimate(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!std::isfinite(p) || p <= 0.0 || p >= 1.0)
    throw Error(ErrorCode::OutOfDomain, "quantile probability must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  // Symmetry reduction: 1 - p is exact for p in (0.5, 1), and the lower-tail
  // CDF evaluation below keeps full relative precision for the Halley step.
  const bool flipped = p > 0.5;
  const double q = flipped ? 1.0 - p : p;
  double x = quantile_estimate(q);
  const double err = normal_upper_tail(-x) - q;  // CDF(x) - q, lower tail
  const double u = err * kSqrt2Pi * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return flipped ? -x : x;
}

double safety_factor(double tls) {
  if (!std::isfinite(tls) || tls <= 0.0 || tls >= 0.5)
    throw Error(ErrorCode::OutOfDomain, "TLS must lie in (0, 0.5)");
  return -normal_quantile(tls / 2.0);
}

double required_vsm(double sigma1_m, double sigma2_m, double tls) {
  if (!std::isfinite(sigma1_m) || sigma1_m <= 0.0 || !std::isfinite(sigma2_m) ||
      sigma2_m <= 0.0)
    throw Error(ErrorCode::OutOfDomain, "sigmas must be positive");
  return safety_factor(tls) * std::hypot(sigma1_m, sigma2_m);
}

std::int64_t flight_levels(double ceiling_m, double vsm_m) {
  if (!std::isfinite(ceiling_m) || ceiling_m <= 0.0)
    throw Error(ErrorCode::NonPositiveInput, "ceiling must be positive");
  if (!std::isfinite(vsm_m) || vsm_m <= 0.0)
    throw Error(ErrorCode::NonPositiveInput, "separation must be positive");
  return static_cast<std::int64_t>(std::floor(ceiling_m / vsm_m));
}

SeparationAnalysis analyze_separation(double sigma1_m, double sigma2_m, double tls,
                                      double ceiling_m,
                                      std::optional<double> vsm_override) {
  SeparationAnalysis out;
  out.sigma1_m = sigma1_m;
  out.sigma2_m = sigma2_m;
  out.tls = tls;
  out.lambda = safety_factor(tls);
  out.vsm_formula_m = required_vsm(sigma1_m, sigma2_m, tls);
  out.vsm_overridden = vsm_override.has_value();
  out.vsm_m = vsm_override.value_or(out.vsm_formula_m);
  out.ceiling_m = ceiling_m;
  out.flight_levels = flight_levels(ceiling_m, out.vsm_m);
  return out;
}

}  // namespace haekit
