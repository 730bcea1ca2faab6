#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homog/potential.hpp"
#include "homog/torus.hpp"

namespace homog {

// adaptive Simpson quadrature; throws NumericError on failure
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12);

// fitted polynomial-mixing constants, sup-gap <= K (c + t)^(-alpha)
struct MixingFit {
  double K = 0.0;
  double c = 1.0;
  double alpha = 0.0;
};

// tail bound for the truncated corrector integral:
//   |int_T^inf p_tau b dtau| <= K/(alpha-1) (c+T)^(1-alpha) (|grad b| + |b|)
double fk_tail_bound(const MixingFit& fit, double grad_norm, double sup_norm, double horizon);

// sup-norm bounds of b_k and its gradient from exact coefficient sums
struct DriftNorms {
  double sup = 0.0;
  double grad_sum = 0.0;
};
DriftNorms drift_norms(const DriftEvaluator& drift, int site);

// smallest horizon whose tail bound is below `target`; capped at `max_T`
double suggest_fk_horizon(const MixingFit& fit, const DriftNorms& norms, double target,
                          double max_T = 200.0);

struct ChiEstimate {
  double value = 0.0;
  double se = 0.0;
  double tail_bound = 0.0;  // 0 when no mixing fit was supplied
  double horizon = 0.0;
  long paths = 0;
};

struct FkConfig {
  double horizon = 8.0;
  double dt = 0.02;
  long paths = 400;
  bool antithetic = true;
  int workers = 1;
};

// chi_k(y) estimated along quotient paths started at y. The integrand is
// -b_k: with that sign chi solves L chi = b_k weakly, which is the
// convention the martingale decomposition and the exact 1d cell solution
// both require.
ChiEstimate chi_feynman_kac(const DriftEvaluator& drift, int k, const TorusState& y,
                            const FkConfig& cfg, std::uint64_t seed, std::uint64_t salt,
                            const std::optional<MixingFit>& fit = std::nullopt);

struct ResolventEstimate {
  double value = 0.0;  // degree-1 extrapolation to lambda = 0
  double se = 0.0;
  std::vector<double> lambdas;
  std::vector<double> per_lambda;
  std::vector<double> per_lambda_se;
  double fit_residual = 0.0;
  bool flagged = false;
};

// chi^lambda_k(y) = -int_0^inf e^(-lambda tau) (p_tau b_k)(y) dtau for each
// lambda, shared paths (common random numbers), then extrapolated to 0.
ResolventEstimate chi_resolvent(const DriftEvaluator& drift, int k, const TorusState& y,
                                const std::vector<double>& lambdas, const FkConfig& cfg,
                                std::uint64_t seed, std::uint64_t salt,
                                double flag_tolerance = 0.0);

// Exact cell solution for a one-coordinate potential U (unit diffusion,
// drift -U'): chi(theta) = theta - c int_0^theta e^U, c = 2pi / int_0^2pi e^U.
double chi_exact_1d(const TrigPoly& U, double theta);

// Cached version used by hot loops; values match chi_exact_1d to ~1e-12.
class Exact1dCell {
 public:
  explicit Exact1dCell(TrigPoly U, int grid = 8192);
  double chi(double theta) const;
  double chi_deriv(double theta) const;  // 1 - c e^{U(theta)}
  double norm_const() const { return c_; }
  const TrigPoly& potential() const { return U_; }

 private:
  double expU(double t) const;
  TrigPoly U_;
  double c_ = 1.0;
  double h_ = 0.0;
  std::vector<double> cum_;  // cumulative integral of e^U on the uniform grid
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

// Common interface for downstream consumers of chi and its derivatives.
// MC-backed sources return genuinely independent A/B estimates so that
// quadratic functionals can be estimated without variance bias.
class CorrectorSource {
 public:
  virtual ~CorrectorSource() = default;
  virtual std::string tag() const = 0;
  virtual Estimate chi(int k, std::span<const double> angles, std::uint64_t salt) const = 0;
  // d chi_k / d y_j for every k in `block`, direction j; two independent copies
  virtual void partials_in_direction(int j, std::span<const double> angles,
                                     std::span<const int> block, std::uint64_t salt,
                                     std::vector<Estimate>& out_a,
                                     std::vector<Estimate>& out_b) const = 0;
  // a_{k,l}(y) = sum_j chi'_{k,j} chi'_{l,j}; only exact sources provide it
  virtual bool has_exact_quadratic() const { return false; }
  virtual double a_entry(int k, int l, std::span<const double> angles) const;
};

// chi'_{k,j} from a partial derivative estimate, convention (sqrt 2 factor,
// identity shift on the diagonal)
Estimate chi_prime_entry(int k, int j, const Estimate& partial);

// Single-site potentials decouple coordinatewise; chi_k(y) = chi(theta_k)
// with the exact 1d cell solution. Valid in any dimension.
class ExactSingleSiteCorrector final : public CorrectorSource {
 public:
  explicit ExactSingleSiteCorrector(const PotentialSpec& spec);
  std::string tag() const override { return "exact1d"; }
  Estimate chi(int k, std::span<const double> angles, std::uint64_t) const override;
  void partials_in_direction(int j, std::span<const double> angles, std::span<const int> block,
                             std::uint64_t, std::vector<Estimate>& out_a,
                             std::vector<Estimate>& out_b) const override;
  bool has_exact_quadratic() const override { return true; }
  double a_entry(int k, int l, std::span<const double> angles) const override;
  const Exact1dCell& cell() const { return cell_; }

 private:
  Exact1dCell cell_;
};

// trivial corrector for the free case (chi = 0)
class ZeroCorrector final : public CorrectorSource {
 public:
  std::string tag() const override { return "exact-free"; }
  Estimate chi(int, std::span<const double>, std::uint64_t) const override { return {}; }
  void partials_in_direction(int, std::span<const double>, std::span<const int> block,
                             std::uint64_t, std::vector<Estimate>& a,
                             std::vector<Estimate>& b) const override {
    a.assign(block.size(), Estimate{});
    b.assign(block.size(), Estimate{});
  }
  bool has_exact_quadratic() const override { return true; }
  double a_entry(int k, int l, std::span<const double>) const override {
    return k == l ? 2.0 : 0.0;
  }
};

struct McCorrectorConfig {
  FkConfig fk;
  double fd_step = 1e-2;  // radians, central differences with common random numbers
};

// Feynman-Kac backed source for generic potentials.
class McCorrector final : public CorrectorSource {
 public:
  McCorrector(const DriftEvaluator& drift, McCorrectorConfig cfg, std::uint64_t seed,
              std::optional<MixingFit> fit = std::nullopt);
  std::string tag() const override { return "mc-feynman-kac"; }
  Estimate chi(int k, std::span<const double> angles, std::uint64_t salt) const override;
  void partials_in_direction(int j, std::span<const double> angles, std::span<const int> block,
                             std::uint64_t salt, std::vector<Estimate>& out_a,
                             std::vector<Estimate>& out_b) const override;

 private:
  void fk_block(const TorusState& y, std::span<const int> block, std::uint64_t stream_salt,
                long paths, std::vector<Estimate>& out) const;
  const DriftEvaluator& drift_;
  McCorrectorConfig cfg_;
  std::uint64_t seed_;
  std::optional<MixingFit> fit_;
};

// builds the natural source for a spec: free -> zero, single-site -> exact,
// otherwise MC
std::unique_ptr<CorrectorSource> make_corrector_source(const DriftEvaluator& drift,
                                                       const McCorrectorConfig& mc_cfg,
                                                       std::uint64_t seed,
                                                       std::optional<MixingFit> fit);

struct ChiPrimeEstimate {
  double value = 0.0;
  double se = 0.0;
  bool flagged = false;  // SE exceeded the requested tolerance
};

// central finite difference of chi_feynman_kac with common random numbers,
// reported in the chi' convention
ChiPrimeEstimate chi_prime(const DriftEvaluator& drift, int k, int j, const TorusState& y,
                           double h, const FkConfig& cfg, std::uint64_t seed, std::uint64_t salt,
                           double se_tolerance = 0.0);

struct Residual {
  double value = 0.0;
  double se = 0.0;
  double z = 0.0;           // value / se (0 when se == 0)
  double alt_value = 0.0;   // second form, against <d_k v>
  double alt_se = 0.0;
  double alt_z = 0.0;
};

// MC estimate of sum_j <d_j chi_k d_j v> + <b_k v> over mu0 samples
// (zero by the weak cell equation), plus the equivalent form vs <d_k v>.
Residual weak_equation_residual(const DriftEvaluator& drift, int k, const TrigPoly& v,
                                const GibbsSampleSet& samples, const CorrectorSource& source,
                                std::uint64_t salt);

struct EnergyEstimate {
  double value = 0.0;
  double se = 0.0;
  bool within_bound = false;  // value <= 5/4 + 3 se
};

// Dirichlet energy sum_j <(d_j chi_k)^2>_{mu0}; the 5/4 bound is asserted
// with a 3 sigma allowance
EnergyEstimate energy_estimate(const DriftEvaluator& drift, int k, const CorrectorSource& source,
                               const GibbsSampleSet& samples, std::span<const int> window,
                               std::uint64_t salt);

}  // namespace homog
