#include "homog/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homog/rng.hpp"

namespace homog::stats {

MeanSe mean_se(std::span<const double> xs) {
  MeanSe r;
  r.n = xs.size();
  if (r.n == 0) return r;
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / static_cast<double>(r.n);
  if (r.n < 2) return r;
  double v = 0.0;
  for (double x : xs) v += (x - r.mean) * (x - r.mean);
  v /= static_cast<double>(r.n - 1);
  r.se = std::sqrt(v / static_cast<double>(r.n));
  return r;
}

double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
    q += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  double en = std::sqrt(na * nb / (na + nb));
  // Stephens' small-sample correction
  double p = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
  return {d, p};
}

namespace {

double row_dist(std::span<const double> x, std::size_t i, std::span<const double> y,
                std::size_t j, std::size_t dim) {
  double s = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    double d = x[i * dim + c] - y[j * dim + c];
    s += d * d;
  }
  return std::sqrt(s);
}

double energy_stat(std::span<const double> x, std::span<const double> y, std::size_t dim) {
  const std::size_t n = x.size() / dim;
  const std::size_t m = y.size() / dim;
  double axy = 0.0, axx = 0.0, ayy = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) axy += row_dist(x, i, y, j, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) axx += row_dist(x, i, x, j, dim);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) ayy += row_dist(y, i, y, j, dim);
  double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return 2.0 * axy / (nn * mm) - 2.0 * axx / (nn * nn) - 2.0 * ayy / (mm * mm);
}

}  // namespace

double energy_distance(std::span<const double> x, std::span<const double> y, std::size_t dim) {
  if (dim == 0 || x.size() % dim != 0 || y.size() % dim != 0)
    throw std::invalid_argument("energy_distance: bad shapes");
  return energy_stat(x, y, dim);
}

double energy_distance_pvalue(std::span<const double> x, std::span<const double> y,
                              std::size_t dim, int permutations, std::uint64_t seed) {
  const std::size_t n = x.size() / dim;
  const std::size_t m = y.size() / dim;
  double observed = energy_stat(x, y, dim);
  std::vector<double> pool(x.begin(), x.end());
  pool.insert(pool.end(), y.begin(), y.end());
  RngStream rng(seed, stream_id::kPermutation);
  std::vector<std::size_t> idx(n + m);
  int ge = 0;
  for (int p = 0; p < permutations; ++p) {
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[rng.below(i)]);
    std::vector<double> px(n * dim), py(m * dim);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < dim; ++c) px[i * dim + c] = pool[idx[i] * dim + c];
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t c = 0; c < dim; ++c) py[j * dim + c] = pool[idx[n + j] * dim + c];
    if (energy_stat(px, py, dim) >= observed) ++ge;
  }
  return (1.0 + ge) / (1.0 + permutations);
}

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad args");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    // series expansion
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // continued fraction for Q, return 1-Q
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  return 1.0 - q;
}

double chi2_sf(double x, int k) {
  if (x <= 0.0) return 1.0;
  return 1.0 - gamma_p(0.5 * k, 0.5 * x);
}

LinFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  LinFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / n);
  if (x.size() > 2) {
    double s2 = ss / (n - 2.0);
    f.slope_se = std::sqrt(n * s2 / denom);
    f.intercept_se = std::sqrt(s2 * sxx / denom);
  }
  return f;
}

std::vector<double> extrapolation_weights_at_zero(std::span<const double> x) {
  // intercept of the LS line as a linear functional of y:
  // a = sum_i [ (sxx - sx*x_i) / (n*sxx - sx^2) ] y_i
  const double n = static_cast<double>(x.size());
  double sx = 0, sxx = 0;
  for (double v : x) {
    sx += v;
    sxx += v * v;
  }
  double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw std::invalid_argument("extrapolation weights: degenerate abscissae");
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = (sxx - sx * x[i]) / denom;
  return w;
}

}  // namespace homog::stats
