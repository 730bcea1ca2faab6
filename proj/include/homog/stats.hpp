#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace homog::stats {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> xs);

// two-sample Kolmogorov-Smirnov: statistic D and asymptotic p-value
struct KsResult {
  double d = 0.0;
  double p = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// survival function of the Kolmogorov distribution, Q(x) = 2 sum (-1)^{k-1} exp(-2 k^2 x^2)
double kolmogorov_q(double x);

// Szekely-Rizzo energy distance between two samples of d-dimensional rows
// (row-major, n x dim). Returns the E-statistic n*m/(n+m) * (2A - B - C) form's
// distance part 2A - B - C (>= 0 in expectation when laws differ).
double energy_distance(std::span<const double> x, std::span<const double> y, std::size_t dim);

// permutation p-value for the energy distance (seeded, deterministic)
double energy_distance_pvalue(std::span<const double> x, std::span<const double> y,
                              std::size_t dim, int permutations, std::uint64_t seed);

// chi-square upper tail P(X > x) with k degrees of freedom
double chi2_sf(double x, int k);

// regularized lower incomplete gamma P(a, x)
double gamma_p(double a, double x);

// ordinary least squares y ~ a + b*x; returns (a, b) and standard errors
struct LinFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
  double residual_rms = 0.0;
};
LinFit linear_fit(std::span<const double> x, std::span<const double> y);

// weighted degree-1 fit evaluated at 0 expressed as linear weights over y:
// value(0) = sum_i w_i y_i for the unweighted LS line through (x_i, y_i)
std::vector<double> extrapolation_weights_at_zero(std::span<const double> x);

}  // namespace homog::stats
