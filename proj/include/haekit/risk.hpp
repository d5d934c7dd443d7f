#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <variant>

namespace haekit {

struct GaussianModel {
  double mu_m = 0.0;
  double sigma_m = 1.0;
};

/// Piecewise-constant density histogram: n+1 ascending edges, n per-meter
/// densities, total mass 1 within 1e-6. Zero outside the edge span.
struct EmpiricalModel {
  Eigen::ArrayXd bin_edges_m;
  Eigen::ArrayXd densities;
};

using ErrorModel = std::variant<GaussianModel, EmpiricalModel>;

ErrorModel make_gaussian(double mu_m, double sigma_m);
ErrorModel make_empirical(Eigen::ArrayXd bin_edges_m, Eigen::ArrayXd densities);

double density_at(const ErrorModel& model, double z_m);
double model_mean(const ErrorModel& model);
/// Standard deviation; the sigma-equivalent used to size quadrature grids.
double model_sigma(const ErrorModel& model);

/// Vertical-overlap density integral f_D(S) = ∫ f1(z) f2(z-S) dz, the density
/// of the height difference Z1 - Z2 at separation S. Gaussian pairs use the
/// closed form; any empirical operand falls back to trapezoid quadrature with
/// step min(sigma)/100 over supports extended to 8 sigma.
double overlap_density(const ErrorModel& e1, const ErrorModel& e2, double separation_m);

/// Quadrature path regardless of model kinds; the closed form's cross-check.
double overlap_density_quadrature(const ErrorModel& e1, const ErrorModel& e2,
                                  double separation_m);

/// P(|Z1 - Z2| >= S) for independent errors: the probability two aircraft
/// nominally S apart lose all vertical spacing margin. Gaussian pairs use
/// complementary error functions (no cancellation in deep tails).
double tail_probability(const ErrorModel& e1, const ErrorModel& e2, double separation_m);

double normal_cdf(double z);

/// Inverse standard-normal CDF: rational initial guess refined by one Halley
/// step against the erfc-based CDF; absolute error below 1e-9 on
/// (1e-12, 1 - 1e-12).
double normal_quantile(double p);

/// Two-sided tail factor lambda with P(|Z| >= lambda) = tls; for a TLS of
/// 1e-7 this is about 5.33.
double safety_factor(double tls);

/// Required vertical separation minimum: safety_factor(tls) * hypot(s1, s2).
double required_vsm(double sigma1_m, double sigma2_m, double tls);

/// floor(ceiling / vsm), the count of usable flight levels in a band.
std::int64_t flight_levels(double ceiling_m, double vsm_m);

struct SeparationAnalysis {
  double sigma1_m = 0.0;
  double sigma2_m = 0.0;
  double tls = 0.0;
  double lambda = 0.0;
  double vsm_formula_m = 0.0;  // lambda * sqrt(sigma1^2 + sigma2^2)
  double vsm_m = 0.0;          // separation used for the level count
  bool vsm_overridden = false;
  double ceiling_m = 0.0;
  std::int64_t flight_levels = 0;
};

/// Bundles lambda, formula VSM and level count; vsm_override substitutes an
/// operational VSM for the level count while keeping the formula value
/// reported.
SeparationAnalysis analyze_separation(double sigma1_m, double sigma2_m, double tls,
                                      double ceiling_m,
                                      std::optional<double> vsm_override = {});

}  // namespace haekit
